//! Euler characteristics and characteristic cycles of sheaves on a smooth
//! proper curve, from the generic rank and the ramification at bad points.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bettibounds::curve_case_bound;
use crate::error::{Error, Result};
use crate::exactmath::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct BadPoint<T> {
    pub label: String,
    #[serde(with = "crate::json::scalar")]
    pub dimtot: T,
    pub stalk_rank: u64,
}

impl<T: Scalar> BadPoint<T> {
    /// `dimtot_x - rk K_x`, the local Euler characteristic drop.
    pub fn penalty(&self) -> T {
        self.dimtot.clone() - T::from_count(self.stalk_rank)
    }
}

/// Genus, generic rank and bad-point data of a sheaf on a proper curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    try_from = "CurveDataRepr<T>",
    into = "CurveDataRepr<T>",
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct CurveData<T> {
    genus: u64,
    generic_rank: u64,
    bad_points: Vec<BadPoint<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct CurveDataRepr<T> {
    genus: u64,
    generic_rank: u64,
    bad_points: Vec<BadPoint<T>>,
}

impl<T: Scalar> TryFrom<CurveDataRepr<T>> for CurveData<T> {
    type Error = Error;

    fn try_from(r: CurveDataRepr<T>) -> Result<Self> {
        Self::new(r.genus, r.generic_rank, r.bad_points)
    }
}

impl<T> From<CurveData<T>> for CurveDataRepr<T> {
    fn from(d: CurveData<T>) -> Self {
        Self {
            genus: d.genus,
            generic_rank: d.generic_rank,
            bad_points: d.bad_points,
        }
    }
}

impl<T: Scalar> CurveData<T> {
    /// Requires `dimtot >= stalk_rank` at every bad point and distinct labels.
    pub fn new(genus: u64, generic_rank: u64, bad_points: Vec<BadPoint<T>>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for p in &bad_points {
            if p.dimtot < T::from_count(p.stalk_rank) {
                return Err(Error::Precondition(format!(
                    "dimtot {} below stalk rank {} at {}",
                    p.dimtot, p.stalk_rank, p.label
                )));
            }
            if seen.insert(p.label.as_str(), ()).is_some() {
                return Err(Error::Precondition(format!(
                    "bad point {} listed twice",
                    p.label
                )));
            }
        }
        Ok(Self {
            genus,
            generic_rank,
            bad_points,
        })
    }

    /// `j_! N` on `A^1 ⊂ P^1` for the Artin–Schreier sheaf `t^p - t = x^m`:
    /// rank 1, one bad point at infinity with dimtot `m + 1` and zero stalk.
    pub fn artin_schreier_on_affine_line(m: u64) -> Self {
        let point = BadPoint {
            label: "inf".into(),
            dimtot: T::from_count(m + 1),
            stalk_rank: 0,
        };
        Self::new(0, 1, vec![point]).expect("dimtot >= 0 = stalk rank")
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn generic_rank(&self) -> u64 {
        self.generic_rank
    }

    pub fn bad_points(&self) -> &[BadPoint<T>] {
        &self.bad_points
    }

    /// Componentwise sum: ranks add, and dimtot and stalk ranks add at
    /// matching labels.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::Precondition(
                "direct sum of sheaves on different curves".into(),
            ));
        }
        let mut points: BTreeMap<String, BadPoint<T>> = BTreeMap::new();
        for p in self.bad_points.iter().chain(&other.bad_points) {
            points
                .entry(p.label.clone())
                .and_modify(|q| {
                    q.dimtot = q.dimtot.clone() + p.dimtot.clone();
                    q.stalk_rank += p.stalk_rank;
                })
                .or_insert_with(|| p.clone());
        }
        Self::new(
            self.genus,
            self.generic_rank + other.generic_rank,
            points.into_values().collect(),
        )
    }
}

/// Grothendieck–Ogg–Shafarevich:
/// `χ(X, K) = (2 - 2g)·rk K_η - Σ_x (dimtot_x K - rk K_x)`.
pub fn gos_chi<T: Scalar>(d: &CurveData<T>) -> T {
    let euler = T::from_int(2) - T::from_count(2 * d.genus);
    d.bad_points
        .iter()
        .fold(euler * T::from_count(d.generic_rank), |acc, p| {
            acc - p.penalty()
        })
}

/// Coefficients of the characteristic cycle of a sheaf on a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCycle<T> {
    /// Coefficient of the zero section, `-rk K_η`.
    pub zero_section: T,
    /// Coefficient of each cotangent fiber, `-(dimtot_x - rk K_x)`.
    pub fibers: Vec<(String, T)>,
}

impl<T: Scalar> CurveCycle<T> {
    /// Intersection number with the zero section on a curve of genus `g`:
    /// the zero section meets itself with multiplicity `2g - 2` and each
    /// cotangent fiber once.
    pub fn degree_against_zero_section(&self, genus: u64) -> T {
        let self_intersection = T::from_count(2 * genus) - T::from_int(2);
        self.fibers.iter().fold(
            self.zero_section.clone() * self_intersection,
            |acc, (_, c)| acc + c.clone(),
        )
    }
}

pub fn cc_coefficients<T: Scalar>(d: &CurveData<T>) -> CurveCycle<T> {
    CurveCycle {
        zero_section: -T::from_count(d.generic_rank),
        fibers: d
            .bad_points
            .iter()
            .map(|p| (p.label.clone(), -p.penalty()))
            .collect(),
    }
}

/// Betti bound on the affine part of the curve; the genus and rank are
/// taken from `d`.
pub fn affine_curve_betti<T: Scalar>(
    d: &CurveData<T>,
    lc_max: &T,
    num_points: u64,
    i: usize,
) -> Result<T> {
    curve_case_bound(d.genus, num_points, lc_max, d.generic_rank, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn gos_values() {
        let laumon = CurveData::<Rat>::artin_schreier_on_affine_line(3);
        assert_eq!(gos_chi(&laumon), q("-2"));
        assert_eq!(
            gos_chi(&CurveData::<Rat>::new(0, 4, vec![]).unwrap()),
            q("8")
        );
        assert_eq!(
            gos_chi(&CurveData::<Rat>::new(1, 4, vec![]).unwrap()),
            q("0")
        );
    }

    #[test]
    fn cycles() {
        let laumon = CurveData::<Rat>::artin_schreier_on_affine_line(5);
        let cc = cc_coefficients(&laumon);
        assert_eq!(cc.zero_section, q("-1"));
        assert_eq!(cc.fibers, vec![("inf".to_string(), q("-6"))]);
        let lisse = cc_coefficients(&CurveData::<Rat>::new(2, 3, vec![]).unwrap());
        assert_eq!((lisse.zero_section, lisse.fibers.len()), (q("-3"), 0));
        for d in [laumon, CurveData::new(2, 3, vec![]).unwrap()] {
            assert_eq!(
                cc_coefficients(&d).degree_against_zero_section(d.genus()),
                gos_chi(&d)
            );
        }
    }

    #[test]
    fn laumon_h1_within_bound() {
        let m = 7u64;
        let d = CurveData::<Rat>::artin_schreier_on_affine_line(m);
        let h0 = q("0");
        let h1 = h0 - gos_chi(&d);
        assert_eq!(h1, q("6"));
        let bound = affine_curve_betti(&d, &q("7"), 1, 1).unwrap();
        assert!(h1 <= bound);
        assert_eq!(affine_curve_betti(&d, &q("7"), 1, 0).unwrap(), q("1"));
        assert_eq!(affine_curve_betti(&d, &q("7"), 1, 2).unwrap(), q("0"));
        assert_eq!(affine_curve_betti(&d, &q("7"), 1, 5).unwrap(), q("0"));
    }

    #[test]
    fn rejects_bad_data() {
        let p = |label: &str, dimtot: &str, stalk_rank| BadPoint {
            label: label.into(),
            dimtot: q(dimtot),
            stalk_rank,
        };
        assert!(CurveData::new(0, 1, vec![p("a", "1", 2)]).is_err());
        assert!(CurveData::new(0, 1, vec![p("a", "2", 1), p("a", "3", 0)]).is_err());
    }

    #[test]
    fn json_schema() {
        let d = CurveData::<Rat>::artin_schreier_on_affine_line(3);
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(
            text,
            r#"{"genus":0,"generic_rank":1,"bad_points":[{"label":"inf","dimtot":"4","stalk_rank":0}]}"#
        );
        assert_eq!(serde_json::from_str::<CurveData<Rat>>(&text).unwrap(), d);
    }
}
