//! Bounding polynomials for Betti numbers.
//!
//! The family `b_n` is defined by `b_0 = 1`, `b_1 = x` and, for `n >= 2`,
//!
//! ```text
//! b_n(x) = Σ_{i<n, i≢n (2)} (x+2)·b_i(x+3) + Σ_{i<n, i≡n (2)} (x+3)·b_i(x) + Σ_{i<n, i≢n (2)} b_i(x)
//! ```
//!
//! and bounds `h^i(A^n, L) <= b_i(lc_H(L)) · rk(L)` for local systems on
//! affine space. This module evaluates those bounds, the Euler
//! characteristic sandwiches derived from them, and the polynomial
//! bookkeeping of the general boundedness statements.

mod appendix;
mod assembly;

pub use appendix::{grid_cross_check, verify_appendix_chain, AppendixReport, ChainStep, StepKind};
pub use assembly::{assemble_bound_sequence, perverse_fold, AssembledBound, PerverseFold};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{Polynomial, Scalar};

/// Sequence of bounding polynomials, index = cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"), transparent)]
pub struct Family<T> {
    polys: Vec<Polynomial<T>>,
}

impl<T: Scalar> Family<T> {
    pub fn new(polys: Vec<Polynomial<T>>) -> Self {
        Self { polys }
    }

    pub fn polys(&self) -> &[Polynomial<T>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Polynomial<T>> {
        self.polys.get(i)
    }

    /// Entry `i`, or the zero polynomial past the end.
    pub fn get_or_zero(&self, i: usize) -> Polynomial<T> {
        self.polys.get(i).cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn eval_all(&self, x: &T) -> Vec<T> {
        self.polys.iter().map(|p| p.eval(x)).collect()
    }

    pub fn all_coeffs_nonneg(&self) -> bool {
        self.polys.iter().all(Polynomial::has_nonneg_coeffs)
    }
}

/// `b_0, ..., b_{n_max}`.
pub fn b_family<T: Scalar>(n_max: usize) -> Family<T> {
    let mut b: Vec<Polynomial<T>> = Vec::with_capacity(n_max + 1);
    b.push(Polynomial::one());
    if n_max >= 1 {
        b.push(Polynomial::x());
    }
    let two = T::from_int(2);
    let three = T::from_int(3);
    let x_plus_2 = Polynomial::linear(two);
    let x_plus_3 = Polynomial::linear(three.clone());
    for n in 2..=n_max {
        let mut shifted_terms = Polynomial::zero();
        let mut same_parity_terms = Polynomial::zero();
        let mut plain_terms = Polynomial::zero();
        for (i, bi) in b.iter().enumerate() {
            if i % 2 != n % 2 {
                shifted_terms = &shifted_terms + &(&x_plus_2 * &bi.shift(&three));
                plain_terms = &plain_terms + bi;
            } else {
                same_parity_terms = &same_parity_terms + &(&x_plus_3 * bi);
            }
        }
        b.push(&(&shifted_terms + &same_parity_terms) + &plain_terms);
    }
    Family::new(b)
}

/// `c_0 = 1, c_1 = x, c_n(x) = (Σ_{i<n} c_i(x+3))·(x+3)`; dominates `b_n`.
pub fn c_family<T: Scalar>(n_max: usize) -> Family<T> {
    let mut c: Vec<Polynomial<T>> = Vec::with_capacity(n_max + 1);
    c.push(Polynomial::one());
    if n_max >= 1 {
        c.push(Polynomial::x());
    }
    let three = T::from_int(3);
    let x_plus_3 = Polynomial::linear(three.clone());
    for _ in 2..=n_max {
        let shifted_sum = c
            .iter()
            .fold(Polynomial::zero(), |acc, ci| &acc + &ci.shift(&three));
        c.push(&shifted_sum * &x_plus_3);
    }
    Family::new(c)
}

/// `(x+3n-3)·Π_{j=1}^{n-1}(x+3j+1)`, valid for `n >= 3`.
pub fn closed_form_bound<T: Scalar>(n: usize) -> Result<Polynomial<T>> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "closed form starts at n = 3, got {n}; use b_{n} directly"
        )));
    }
    let lead = Polynomial::linear(T::from_count(3 * n as u64 - 3));
    Ok((1..n).fold(lead, |acc, j| {
        &acc * &Polynomial::linear(T::from_count(3 * j as u64 + 1))
    }))
}

fn check_nonneg<T: Scalar>(what: &str, v: &T) -> Result<()> {
    if v.is_negative() {
        return Err(Error::NegativeInput(format!("{what} = {v}")));
    }
    Ok(())
}

fn b_at<T: Scalar>(i: usize, x: &T) -> T {
    b_family::<T>(i).polys[i].eval(x)
}

/// Bound on `h^i(A^n, L)`: `b_i(lc_H) · rank`, and 0 above degree `n`.
pub fn affine_betti_bound<T: Scalar>(n: usize, i: usize, lc_h: &T, rank: u64) -> Result<T> {
    check_nonneg("lc_H", lc_h)?;
    if i > n {
        return Ok(T::zero());
    }
    Ok(b_at(i, lc_h) * T::from_count(rank))
}

/// Bound on `h^j_c(A^n, L)`: `b_{2n-j}(lc_H) · rank` for `n <= j <= 2n`,
/// and 0 otherwise.
pub fn affine_betti_bound_compact<T: Scalar>(n: usize, j: usize, lc_h: &T, rank: u64) -> Result<T> {
    check_nonneg("lc_H", lc_h)?;
    if j < n || j > 2 * n {
        return Ok(T::zero());
    }
    Ok(b_at(2 * n - j, lc_h) * T::from_count(rank))
}

/// Closed interval `[lower, upper]` for an Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sandwich<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Scalar> Sandwich<T> {
    pub fn contains(&self, v: &T) -> bool {
        self.lower <= *v && *v <= self.upper
    }
}

/// Bounds on `χ(A^n, L)` in terms of `lc = lc_H(L)`:
///
/// ```text
/// upper =  (Σ_{i<n odd}  (lc+2)·b_i(lc+3) + Σ_{i<n even} (lc+3)·b_i(lc)) · rk
/// lower = -(Σ_{i<n even} (lc+2)·b_i(lc+3) + Σ_{i<n odd}  (lc+3)·b_i(lc)) · rk
/// ```
pub fn chi_sandwich<T: Scalar>(n: usize, lc_h: &T, rank: u64) -> Result<Sandwich<T>> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "χ sandwich needs n >= 2, got {n}"
        )));
    }
    check_nonneg("lc_H", lc_h)?;
    let b = b_family::<T>(n - 1);
    let plus2 = lc_h.clone() + T::from_int(2);
    let plus3 = lc_h.clone() + T::from_int(3);
    let shifted = |i: usize| plus2.clone() * b.polys[i].eval(&plus3);
    let unshifted = |i: usize| plus3.clone() * b.polys[i].eval(lc_h);
    let (mut upper, mut lower) = (T::zero(), T::zero());
    for i in 0..n {
        if i % 2 == 1 {
            upper = upper + shifted(i);
            lower = lower + unshifted(i);
        } else {
            upper = upper + unshifted(i);
            lower = lower + shifted(i);
        }
    }
    let rank = T::from_count(rank);
    Ok(Sandwich {
        lower: -lower * rank.clone(),
        upper: upper * rank,
    })
}

/// Bounds on `χ(A^n, pr^* N ⊗ L)` for an Artin–Schreier twist of conductor
/// `m > lc_H(L) + 1` (the caller's assumption):
/// `-(Σ_{i<n even} b_i(m))·(m-1)·rk <= χ <= (Σ_{i<n odd} b_i(m))·(m-1)·rk`.
pub fn chi_twisted_sandwich<T: Scalar>(n: usize, m: &T, rank: u64) -> Result<Sandwich<T>> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "χ sandwich needs n >= 2, got {n}"
        )));
    }
    if *m < T::one() {
        return Err(Error::Precondition(format!(
            "twist conductor m = {m} must be >= 1"
        )));
    }
    let b = b_family::<T>(n - 1);
    let (mut even, mut odd) = (T::zero(), T::zero());
    for (i, bi) in b.polys.iter().enumerate() {
        if i % 2 == 0 {
            even = even + bi.eval(m);
        } else {
            odd = odd + bi.eval(m);
        }
    }
    let factor = (m.clone() - T::one()) * T::from_count(rank);
    Ok(Sandwich {
        lower: -even * factor.clone(),
        upper: odd * factor,
    })
}

/// Betti bounds on an affine curve `U = X - D` of genus `g`:
/// `h^0 <= rk`, `h^1 <= (2g - 1 + |D| + |D|·lc_D)·rk`, `h^i = 0` for `i >= 2`.
pub fn curve_case_bound<T: Scalar>(
    genus: u64,
    num_points: u64,
    lc: &T,
    rank: u64,
    i: usize,
) -> Result<T> {
    if num_points == 0 {
        return Err(Error::Precondition(
            "the curve must be affine, |D| >= 1".into(),
        ));
    }
    check_nonneg("lc_D", lc)?;
    let rank = T::from_count(rank);
    Ok(match i {
        0 => rank,
        1 => {
            let pts = T::from_count(num_points);
            (T::from_count(2 * genus) - T::one() + pts.clone() + pts * lc.clone()) * rank
        }
        _ => T::zero(),
    })
}
