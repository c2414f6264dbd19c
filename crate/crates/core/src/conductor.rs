//! Local ramification calculus on the numerical shadow of a Galois module:
//! its (log) slope decompositions, Swan conductor, total dimension and
//! conductors, with the tensor and twist rules and Artin–Schreier formulas.
//!
//! Every constructed [`GaloisModule`] satisfies `lc <= c <= lc + 1` and
//! `sw <= dimtot <= sw + rank` whenever the nonlog side is known.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Scalar;
use crate::geometry::WeilDivisor;

/// One isoclinic piece: `rank` copies of slope `slope`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: fmt::Display", deserialize = "T: std::str::FromStr"))]
pub struct Piece<T> {
    #[serde(with = "crate::json::scalar")]
    pub slope: T,
    pub rank: u64,
}

/// Slope decomposition: pieces with pairwise distinct nonnegative slopes,
/// kept sorted by slope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<Piece<T>>",
    into = "Vec<Piece<T>>",
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct Slopes<T> {
    pieces: Vec<Piece<T>>,
}

impl<T: Scalar> Slopes<T> {
    /// Rejects repeated slopes, negative slopes and zero ranks.
    pub fn new(pieces: Vec<(T, u64)>) -> Result<Self> {
        let mut pieces: Vec<Piece<T>> = pieces
            .into_iter()
            .map(|(slope, rank)| Piece { slope, rank })
            .collect();
        for p in &pieces {
            if p.rank == 0 {
                return Err(Error::InvalidSlopes(format!(
                    "slope {} has rank 0",
                    p.slope
                )));
            }
            if p.slope.is_negative() {
                return Err(Error::InvalidSlopes(format!("negative slope {}", p.slope)));
            }
        }
        pieces.sort_by(|a, b| a.slope.partial_cmp(&b.slope).expect("slopes are ordered"));
        if let Some(w) = pieces.windows(2).find(|w| w[0].slope == w[1].slope) {
            return Err(Error::InvalidSlopes(format!(
                "slope {} repeated",
                w[0].slope
            )));
        }
        Ok(Self { pieces })
    }

    pub fn isoclinic(slope: T, rank: u64) -> Result<Self> {
        Self::new(vec![(slope, rank)])
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn total_rank(&self) -> u64 {
        self.pieces.iter().map(|p| p.rank).sum()
    }

    /// `sum slope * rank`
    pub fn weighted_sum(&self) -> T {
        self.pieces.iter().fold(T::zero(), |acc, p| {
            acc + p.slope.clone() * T::from_count(p.rank)
        })
    }

    pub fn max_slope(&self) -> Option<&T> {
        self.pieces.last().map(|p| &p.slope)
    }

    pub fn min_slope(&self) -> Option<&T> {
        self.pieces.first().map(|p| &p.slope)
    }

    /// The single piece when the decomposition is isoclinic.
    pub fn as_isoclinic(&self) -> Option<&Piece<T>> {
        match self.pieces.as_slice() {
            [p] => Some(p),
            _ => None,
        }
    }

    /// Multiset union; ranks add where slopes coincide.
    pub fn merge(&self, other: &Self) -> Self {
        let mut out: Vec<Piece<T>> = Vec::with_capacity(self.pieces.len() + other.pieces.len());
        let (mut i, mut j) = (0, 0);
        while i < self.pieces.len() || j < other.pieces.len() {
            let take_left = match (self.pieces.get(i), other.pieces.get(j)) {
                (Some(a), Some(b)) if a.slope == b.slope => {
                    out.push(Piece {
                        slope: a.slope.clone(),
                        rank: a.rank + b.rank,
                    });
                    i += 1;
                    j += 1;
                    continue;
                }
                (Some(a), Some(b)) => a.slope < b.slope,
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                out.push(self.pieces[i].clone());
                i += 1;
            } else {
                out.push(other.pieces[j].clone());
                j += 1;
            }
        }
        Self { pieces: out }
    }

    /// Adds `t` to every slope.
    pub fn shifted(&self, t: &T) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    slope: p.slope.clone() + t.clone(),
                    rank: p.rank,
                })
                .collect(),
        }
    }
}

impl<T: Scalar> TryFrom<Vec<Piece<T>>> for Slopes<T> {
    type Error = Error;

    fn try_from(pieces: Vec<Piece<T>>) -> Result<Self> {
        Self::new(pieces.into_iter().map(|p| (p.slope, p.rank)).collect())
    }
}

impl<T> From<Slopes<T>> for Vec<Piece<T>> {
    fn from(s: Slopes<T>) -> Self {
        s.pieces
    }
}

/// The conductor `c`, either determined or only known to lie in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conductor<T> {
    Exact(T),
    Between(T, T),
}

impl<T: fmt::Display> fmt::Display for Conductor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conductor::Exact(c) => write!(f, "{c}"),
            Conductor::Between(lo, hi) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conductors<T> {
    pub conductor: Conductor<T>,
    pub log_conductor: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorMode {
    Log,
    Nonlog,
}

impl TensorMode {
    fn name(self) -> &'static str {
        match self {
            TensorMode::Log => "log",
            TensorMode::Nonlog => "nonlog",
        }
    }
}

/// Bounds on the Swan conductor of a twist by a rank-one module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwanTwistBounds<T> {
    pub lower: T,
    pub upper: T,
    /// Present when no log slope of the module equals the twist slope.
    pub exact: Option<T>,
}

/// Numerical data of a free module with continuous Galois action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    try_from = "GaloisModuleRepr<T>",
    into = "GaloisModuleRepr<T>",
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct GaloisModule<T> {
    rank: u64,
    log: Slopes<T>,
    nonlog: Option<Slopes<T>>,
    perfect_residue: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct GaloisModuleRepr<T> {
    rank: u64,
    perfect_residue: bool,
    log: Slopes<T>,
    nonlog: Option<Slopes<T>>,
}

impl<T: Scalar> TryFrom<GaloisModuleRepr<T>> for GaloisModule<T> {
    type Error = Error;

    fn try_from(r: GaloisModuleRepr<T>) -> Result<Self> {
        Self::new(r.rank, r.log, r.nonlog, r.perfect_residue)
    }
}

impl<T> From<GaloisModule<T>> for GaloisModuleRepr<T> {
    fn from(m: GaloisModule<T>) -> Self {
        Self {
            rank: m.rank,
            perfect_residue: m.perfect_residue,
            log: m.log,
            nonlog: m.nonlog,
        }
    }
}

impl<T: Scalar> GaloisModule<T> {
    pub fn new(
        rank: u64,
        log: Slopes<T>,
        nonlog: Option<Slopes<T>>,
        perfect_residue: bool,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidModule(msg));
        if rank == 0 {
            return invalid("rank must be positive".into());
        }
        if log.total_rank() != rank {
            return invalid(format!(
                "log pieces have total rank {}, expected {rank}",
                log.total_rank()
            ));
        }
        if let Some(nl) = &nonlog {
            if nl.total_rank() != rank {
                return invalid(format!(
                    "nonlog pieces have total rank {}, expected {rank}",
                    nl.total_rank()
                ));
            }
            if nl.min_slope().is_some_and(|s| *s < T::one()) {
                return invalid("nonlog slopes must be >= 1".into());
            }
            if perfect_residue && *nl != log.shifted(&T::one()) {
                return invalid("perfect residue field forces nonlog = log + 1".into());
            }
            let lc = log.max_slope().expect("rank > 0").clone();
            let c = nl.max_slope().expect("rank > 0").clone();
            if c < lc || c > lc.clone() + T::one() {
                return invalid(format!("conductor {c} outside [{lc}, {lc} + 1]"));
            }
            let sw = log.weighted_sum();
            let dt = nl.weighted_sum();
            if dt < sw || dt > sw.clone() + T::from_count(rank) {
                return invalid(format!("dimtot {dt} outside [{sw}, {sw} + {rank}]"));
            }
        }
        Ok(Self {
            rank,
            log,
            nonlog,
            perfect_residue,
        })
    }

    /// Module given by log data only; the nonlog side is derived when the
    /// residue field is perfect.
    pub fn from_log(log: Slopes<T>, perfect_residue: bool) -> Result<Self> {
        let nonlog = perfect_residue.then(|| log.shifted(&T::one()));
        Self::new(log.total_rank(), log, nonlog, perfect_residue)
    }

    /// Tame unramified module of the given rank (single log slope 0).
    pub fn trivial(rank: u64, perfect_residue: bool) -> Result<Self> {
        Self::from_log(Slopes::isoclinic(T::zero(), rank)?, perfect_residue)
    }

    /// Rank-one Artin–Schreier module `t^p - t = u/x` with `v(x) = m` prime
    /// to `p`: log slope `m`, slope `m + 1`.
    pub fn artin_schreier(m: u64, p: u64) -> Result<Self> {
        check_prime(p)?;
        if m == 0 || m.is_multiple_of(p) {
            return Err(Error::DivisibleExponent { m, p });
        }
        let m = T::from_count(m);
        Self::new(
            1,
            Slopes::isoclinic(m.clone(), 1)?,
            Some(Slopes::isoclinic(m + T::one(), 1)?),
            false,
        )
    }

    /// Same data, flagged as living over a perfect residue field.
    pub fn assume_perfect_residue(self) -> Result<Self> {
        Self::from_log(self.log, true)
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn log_slopes(&self) -> &Slopes<T> {
        &self.log
    }

    pub fn nonlog_slopes(&self) -> Option<&Slopes<T>> {
        self.nonlog.as_ref()
    }

    pub fn perfect_residue(&self) -> bool {
        self.perfect_residue
    }

    /// Swan conductor: `sum r * rank` over the log pieces.
    pub fn swan(&self) -> T {
        self.log.weighted_sum()
    }

    /// Total dimension: `sum r * rank` over the nonlog pieces, or
    /// `sw + rank` over a perfect residue field.
    pub fn dimtot(&self) -> Result<T> {
        match (&self.nonlog, self.perfect_residue) {
            (Some(nl), _) => Ok(nl.weighted_sum()),
            (None, true) => Ok(self.swan() + T::from_count(self.rank)),
            (None, false) => Err(Error::NonlogUnavailable),
        }
    }

    pub fn log_conductor(&self) -> T {
        self.log.max_slope().expect("rank > 0").clone()
    }

    pub fn conductors(&self) -> Conductors<T> {
        let lc = self.log_conductor();
        let conductor = match (&self.nonlog, self.perfect_residue) {
            (Some(nl), _) => Conductor::Exact(nl.max_slope().expect("rank > 0").clone()),
            (None, true) => Conductor::Exact(lc.clone() + T::one()),
            (None, false) => Conductor::Between(lc.clone(), lc.clone() + T::one()),
        };
        Conductors {
            conductor,
            log_conductor: lc,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.perfect_residue != other.perfect_residue {
            return Err(Error::ResidueFlagMismatch);
        }
        let nonlog = match (&self.nonlog, &other.nonlog) {
            (Some(a), Some(b)) => Some(a.merge(b)),
            _ => None,
        };
        Self::new(
            self.rank + other.rank,
            self.log.merge(&other.log),
            nonlog,
            self.perfect_residue,
        )
    }

    /// A module and its dual have the same slopes.
    pub fn dual(&self) -> Self {
        self.clone()
    }

    /// Tensor product of two modules isoclinic (in `mode`) with distinct
    /// slopes `r > s`: isoclinic of slope `r` and rank `rk(M) * rk(N)`.
    ///
    /// The other side of the result is filled in when it is determined:
    /// by the same rule if both inputs are isoclinic there too, or by the
    /// perfect-residue shift.
    pub fn tensor_isoclinic(&self, other: &Self, mode: TensorMode) -> Result<Self> {
        if self.perfect_residue != other.perfect_residue {
            return Err(Error::ResidueFlagMismatch);
        }
        let rank = self.rank * other.rank;
        let perfect = self.perfect_residue;
        let rule = |a: Option<&Slopes<T>>, b: Option<&Slopes<T>>| -> Result<Slopes<T>> {
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::NonlogUnavailable);
            };
            let (Some(pa), Some(pb)) = (a.as_isoclinic(), b.as_isoclinic()) else {
                return Err(Error::NotIsoclinic(mode.name()));
            };
            if pa.slope == pb.slope {
                return Err(Error::EqualSlopes);
            }
            let top = if pa.slope > pb.slope {
                &pa.slope
            } else {
                &pb.slope
            };
            Slopes::isoclinic(top.clone(), rank)
        };
        let log_rule = || rule(Some(&self.log), Some(&other.log));
        let nonlog_rule = || rule(self.nonlog.as_ref(), other.nonlog.as_ref());
        match mode {
            TensorMode::Log => {
                let log = log_rule()?;
                if perfect {
                    return Self::from_log(log, true);
                }
                Self::new(rank, log, nonlog_rule().ok(), false)
            }
            TensorMode::Nonlog => {
                let nonlog = nonlog_rule()?;
                let log = if perfect {
                    nonlog.shifted(&-T::one())
                } else {
                    log_rule().map_err(|_| {
                        Error::Precondition(
                            "log slopes of the tensor product are undetermined".into(),
                        )
                    })?
                };
                Self::new(rank, log, Some(nonlog), perfect)
            }
        }
    }

    /// Swan conductor of `M ⊗ N` for a rank-one `N` of log slope `r`:
    /// `sw(M) <= sw(M ⊗ N) <= sw(M) + r * rk(M)`, valid under the
    /// non-cancellation hypothesis, which the caller asserts.
    ///
    /// When no log slope of `M` equals `r`, the exact value is
    /// `sw(M) + sum_{s < r} (r - s) * rk M^(s)`.
    pub fn swan_twist_bounds(
        &self,
        twist: &Self,
        assume_non_cancellation: bool,
    ) -> Result<SwanTwistBounds<T>> {
        if twist.rank != 1 {
            return Err(Error::NotRankOne(twist.rank));
        }
        let r = twist.log_conductor();
        let sw = self.swan();
        let hits = self.log.pieces().iter().any(|p| p.slope == r);
        if hits && !assume_non_cancellation {
            return Err(Error::HypothesisNotAssumed(r.to_string()));
        }
        let upper = sw.clone() + r.clone() * T::from_count(self.rank);
        let exact = (!hits).then(|| {
            self.log
                .pieces()
                .iter()
                .filter(|p| p.slope < r)
                .fold(sw.clone(), |acc, p| {
                    acc + (r.clone() - p.slope.clone()) * T::from_count(p.rank)
                })
        });
        Ok(SwanTwistBounds {
            lower: sw,
            upper,
            exact,
        })
    }
}

fn check_prime(p: u64) -> Result<()> {
    let prime = p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d));
    if prime {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Conductor at a point of a curve meeting `D = {x = 0}` with multiplicity
/// `alpha` and `E = {y = 1}` with multiplicity `beta`, for the Artin–Schreier
/// sheaf `t^p - t = λ (y / (x^{p^2} (y - 1)))^m` on the complement of the two
/// lines: `m p^2 alpha + (m + 1) beta`.
pub fn two_lines_curve_conductor<T: Scalar>(m: u64, p: u64, alpha: u64, beta: u64) -> Result<T> {
    check_prime(p)?;
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::DivisibleExponent { m, p });
    }
    if alpha == 0 && beta == 0 {
        return Err(Error::ZeroMultiplicities);
    }
    let (m, p) = (T::from_count(m), T::from_count(p));
    Ok(m.clone() * p.clone() * p * T::from_count(alpha) + (m + T::one()) * T::from_count(beta))
}

/// The conductor divisor `m p^2 · D + (m + 1) · E`, read off from the
/// curve formula at unit multiplicities.
pub fn two_lines_conductor_divisor<T: Scalar>(m: u64, p: u64) -> Result<WeilDivisor<T>> {
    let d = two_lines_curve_conductor(m, p, 1, 0)?;
    let e = two_lines_curve_conductor(m, p, 0, 1)?;
    WeilDivisor::from_pairs([("D", d), ("E", e)])
}

/// Log conductor bound for a finite pushforward étale over the complement:
/// `lc_D(f_* L) <= lc_D(f_* Λ) + d * lc_E(L)`.
pub fn finite_direct_image_lc_bound<T: Scalar>(lc_trivial: &T, degree: u64, lc_e: &T) -> Result<T> {
    if lc_trivial.is_negative() || lc_e.is_negative() {
        return Err(Error::NegativeInput("log conductors must be >= 0".into()));
    }
    if degree == 0 {
        return Err(Error::Precondition(
            "generic degree must be positive".into(),
        ));
    }
    Ok(lc_trivial.clone() + T::from_count(degree) * lc_e.clone())
}
