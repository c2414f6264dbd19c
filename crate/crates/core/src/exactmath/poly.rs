use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficient `i` multiplies `x^i`.
///
/// The coefficient vector never carries trailing zeros; the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    /// `x + c`
    pub fn linear(c: T) -> Self {
        Self::from_coeffs(vec![c, T::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Taylor shift: returns `q` with `q(x) = p(x + t)`.
    pub fn shift(&self, t: &T) -> Self {
        if t.is_zero() || self.coeffs.len() < 2 {
            return self.clone();
        }
        let mut a = self.coeffs.clone();
        let n = a.len() - 1;
        for i in 0..n {
            for j in (i..n).rev() {
                let carry = t.clone() * a[j + 1].clone();
                a[j] = a[j].clone() + carry;
            }
        }
        Self::from_coeffs(a)
    }

    /// Returns `q` with `q(x) = p(offset + factor * x)`.
    pub fn compose_affine(&self, offset: &T, factor: &T) -> Self {
        let shifted = self.shift(offset);
        let mut power = T::one();
        let mut coeffs = Vec::with_capacity(shifted.coeffs.len());
        for c in shifted.coeffs {
            coeffs.push(c * power.clone());
            power = power * factor.clone();
        }
        Self::from_coeffs(coeffs)
    }

    pub fn has_nonneg_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Sound but incomplete certificate that `self(x) <= other(x)` on `x >= 0`:
    /// every coefficient of `other - self` is nonnegative.
    pub fn dominated_by(&self, other: &Self) -> bool {
        (other - self).has_nonneg_coeffs()
    }

    /// Checks `self(x) >= 0` at every grid point. A sampler, not a proof.
    pub fn nonneg_on_grid(&self, grid: &[T]) -> Result<bool> {
        if let Some(bad) = grid.iter().find(|g| g.is_negative()) {
            return Err(Error::NegativeGridPoint(bad.to_string()));
        }
        Ok(grid.iter().all(|g| !self.eval(g).is_negative()))
    }

    /// Sum of an iterator of polynomials.
    pub fn sum<'a, I>(polys: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        polys.into_iter().fold(Self::zero(), |acc, p| &acc + p)
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;

            fn $method(self, rhs: Self) -> Polynomial<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<T: Scalar> fmt::Display for Polynomial<T> {
    /// Highest degree first, e.g. `x^2 + 7x + 9`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if magnitude.is_integral() {
                magnitude.to_string()
            } else {
                format!("({magnitude})")
            };
            match k {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{coeff}")?;
                    }
                    write!(f, "x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
