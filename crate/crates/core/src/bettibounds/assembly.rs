use super::{b_family, Family};
use crate::error::{Error, Result};
use crate::exactmath::{Polynomial, Scalar};

/// Bound polynomials for one stratum of relative dimension `n` whose generic
/// fiber has dimension `N`, mapped finitely of degree `delta` onto `P^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssembledBound<T> {
    /// `P_j` for `j = 0..=2n`: `delta · b_{2N-j}(alpha + delta·x)` on
    /// `[N, 2N]`, zero elsewhere.
    pub raw: Vec<Polynomial<T>>,
    /// `P'_i = x^i + P_i + P_{2n-i}` for `i = 0..=n`, of degree exactly `i`.
    pub folded: Family<T>,
    /// `P'_{min(j, 2n-j)}(mu)` for `j = 0..=2n`.
    pub evaluated: Vec<T>,
}

pub fn assemble_bound_sequence<T: Scalar>(
    n: usize,
    fiber_dim: usize,
    delta: u64,
    alpha: u64,
    mu: &T,
) -> Result<AssembledBound<T>> {
    if fiber_dim > n {
        return Err(Error::Precondition(format!(
            "fiber dimension {fiber_dim} exceeds relative dimension {n}"
        )));
    }
    if delta == 0 {
        return Err(Error::Precondition(
            "generic degree delta must be positive".into(),
        ));
    }
    let b = b_family::<T>(2 * fiber_dim);
    let delta_s = T::from_count(delta);
    let alpha_s = T::from_count(alpha);
    let raw: Vec<Polynomial<T>> = (0..=2 * n)
        .map(|j| {
            if (fiber_dim..=2 * fiber_dim).contains(&j) {
                b.polys()[2 * fiber_dim - j]
                    .compose_affine(&alpha_s, &delta_s)
                    .scale(&delta_s)
            } else {
                Polynomial::zero()
            }
        })
        .collect();
    let folded = Family::new(
        (0..=n)
            .map(|i| &(&Polynomial::monomial(T::one(), i) + &raw[i]) + &raw[2 * n - i])
            .collect(),
    );
    let evaluated = (0..=2 * n)
        .map(|j| folded.polys()[j.min(2 * n - j)].eval(mu))
        .collect();
    Ok(AssembledBound {
        raw,
        folded,
        evaluated,
    })
}

/// Result of folding stratum-wise Betti bounds into bounds for perverse
/// sheaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerverseFold<T> {
    /// `e_i = Σ_{m=0}^{n-i} P^{i+m}_m`
    pub e: Vec<Polynomial<T>>,
    /// `f_i = Σ_{m=2i}^{n+i} P^{i+m}_{m-2i}`
    pub f: Vec<Polynomial<T>>,
    /// `(e_n + f_n, ..., e_0 + f_0)`; entry `k` bounds `h^{±(n-k)}`.
    pub sequence: Family<T>,
}

/// `families[i]` is the bound family `P^i` for the closed union of strata of
/// dimension `<= i`; it must have at least `i + 1` entries. Summands whose
/// stratum index exceeds `n` are zero.
pub fn perverse_fold<T: Scalar>(families: &[Family<T>]) -> Result<PerverseFold<T>> {
    let Some(n) = families.len().checked_sub(1) else {
        return Err(Error::Precondition(
            "at least one stratum family is required".into(),
        ));
    };
    if let Some((i, fam)) = families.iter().enumerate().find(|(i, f)| f.len() < i + 1) {
        return Err(Error::Precondition(format!(
            "family {i} has {} entries, needs at least {}",
            fam.len(),
            i + 1
        )));
    }
    let entry = |stratum: usize, k: usize| -> Polynomial<T> {
        if stratum > n {
            Polynomial::zero()
        } else {
            families[stratum].get_or_zero(k)
        }
    };
    let e: Vec<Polynomial<T>> = (0..=n)
        .map(|i| (0..=n - i).fold(Polynomial::zero(), |acc, m| &acc + &entry(i + m, m)))
        .collect();
    let f: Vec<Polynomial<T>> = (0..=n)
        .map(|i| (2 * i..=n + i).fold(Polynomial::zero(), |acc, m| &acc + &entry(i + m, m - 2 * i)))
        .collect();
    let sequence = Family::new((0..=n).rev().map(|i| &e[i] + &f[i]).collect());
    Ok(PerverseFold { e, f, sequence })
}
