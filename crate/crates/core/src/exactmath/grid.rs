use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Arithmetic progression of sample points `start, start+step, ..., <= end`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    pub start: T,
    pub step: T,
    pub end: T,
}

impl<T: Scalar> Default for Grid<T> {
    /// `{0, 1/2, 1, ..., 100}`
    fn default() -> Self {
        Self {
            start: T::zero(),
            step: T::one() / T::from_int(2),
            end: T::from_int(100),
        }
    }
}

impl<T: Scalar> Grid<T> {
    pub fn new(start: T, step: T, end: T) -> Result<Self> {
        if start.is_negative() {
            return Err(Error::NegativeGridPoint(start.to_string()));
        }
        if !step.is_positive() || end < start {
            return Err(Error::InvalidGrid(format!("{start}:{step}:{end}")));
        }
        Ok(Self { start, step, end })
    }

    /// Parses `"start:step:end"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let [start, step, end] = parts.as_slice() else {
            return Err(Error::InvalidGrid(text.to_string()));
        };
        let parse = |s: &str| {
            s.trim()
                .parse::<T>()
                .map_err(|_| Error::InvalidGrid(text.to_string()))
        };
        Self::new(parse(start)?, parse(step)?, parse(end)?)
    }

    pub fn points(&self) -> Vec<T> {
        let mut out = Vec::new();
        let mut x = self.start.clone();
        while x <= self.end {
            out.push(x.clone());
            x = x + self.step.clone();
        }
        out
    }
}
