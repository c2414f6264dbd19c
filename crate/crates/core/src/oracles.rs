//! Closed-form and brute-force reference values. Nothing here calls into
//! `bettibounds`; the arithmetic is redone on plain integer vectors.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::{Poly, Rat};

pub const RECURSION_REFERENCE_MAX: usize = 10;

/// `h^i(A^n, M) = (m-1)^i` for the external product of `n` Artin–Schreier
/// sheaves of conductor `m`.
pub fn kunneth_betti(n: usize, i: usize, m: u64) -> Result<BigInt> {
    if i > n {
        return Err(Error::Precondition(format!(
            "degree {i} exceeds dimension {n}"
        )));
    }
    if m == 0 {
        return Err(Error::Precondition("m must be >= 1".into()));
    }
    let base = BigInt::from(m - 1);
    let mut h = BigInt::one();
    for _ in 0..i {
        h *= &base;
    }
    Ok(h)
}

/// `Σ_{i=0}^n (-1)^i (m-1)^i`, summed term by term and compared with
/// `((1-m)^{n+1} - 1) / (-m)`.
pub fn kunneth_chi(n: usize, m: u64) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::Precondition("m must be >= 1".into()));
    }
    let mut termwise = BigInt::zero();
    for i in 0..=n {
        let h = kunneth_betti(n, i, m)?;
        if i % 2 == 0 {
            termwise += h;
        } else {
            termwise -= h;
        }
    }
    let m_big = BigInt::from(m);
    let ratio = BigInt::one() - &m_big;
    let closed = (Pow::pow(&ratio, n + 1) - BigInt::one()) / (-m_big);
    if closed != termwise {
        return Err(Error::OracleMismatch(format!(
            "kunneth_chi({n}, {m}): terms give {termwise}, closed form gives {closed}"
        )));
    }
    Ok(termwise)
}

type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn add_into(acc: &mut IntPoly, p: &IntPoly) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += c;
    }
}

fn mul(p: &IntPoly, q: &IntPoly) -> IntPoly {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    trim(out)
}

/// `p(x + t)` by expanding every `(x + t)^k` through binomial coefficients.
fn substitute(p: &IntPoly, t: i64) -> IntPoly {
    let t = BigInt::from(t);
    let mut out = vec![BigInt::zero(); p.len()];
    for (k, a) in p.iter().enumerate() {
        let mut binom = BigInt::one();
        for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
            // coefficient of x^j in (x + t)^k is C(k, j) t^{k-j}
            *slot += a * &binom * Pow::pow(&t, k - j);
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
    }
    trim(out)
}

fn x_plus(c: i64) -> IntPoly {
    vec![BigInt::from(c), BigInt::one()]
}

fn reference(n: usize) -> IntPoly {
    match n {
        0 => vec![BigInt::one()],
        1 => vec![BigInt::zero(), BigInt::one()],
        _ => {
            let mut total = Vec::new();
            for i in 0..n {
                let bi = reference(i);
                if (n - i) % 2 == 1 {
                    add_into(&mut total, &mul(&x_plus(2), &substitute(&bi, 3)));
                    add_into(&mut total, &bi);
                } else {
                    add_into(&mut total, &mul(&x_plus(3), &bi));
                }
            }
            trim(total)
        }
    }
}

/// `b_n` by plain unmemoized recursion over integer coefficient vectors.
pub fn recursion_reference(n: usize) -> Result<Poly> {
    if n > RECURSION_REFERENCE_MAX {
        return Err(Error::Precondition(format!(
            "recursion_reference is limited to n <= {RECURSION_REFERENCE_MAX}, got {n}"
        )));
    }
    let coeffs = reference(n).into_iter().map(Rat::from_integer).collect();
    Ok(Poly::from_coeffs(coeffs))
}

/// `b_n` at a nonnegative integer, evaluated on the reference recursion.
pub fn eval_reference(n: usize, at: u64) -> Result<BigInt> {
    if n > RECURSION_REFERENCE_MAX {
        return Err(Error::Precondition(format!(
            "recursion_reference is limited to n <= {RECURSION_REFERENCE_MAX}, got {n}"
        )));
    }
    let x = BigInt::from(at);
    let value = reference(n)
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * &x + c);
    debug_assert!(!value.is_negative());
    Ok(value)
}
