//! ℚ-Weil divisors and the ledger of formal ℚ-combinations of coherent
//! sheaves used to bound log conductors.
//!
//! A coherent sheaf is represented by a [`Token`]: a name plus, for each
//! fiber in an explicitly tabulated family, the divisor of torsion lengths
//! `T(E_s)` on that fiber. The admissible function `μ_f` takes the largest
//! multiplicity over all tabulated fibers and extends linearly.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Scalar;

/// Finite formal sum of named prime divisors with scalar multiplicities.
/// Zero multiplicities are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(
    try_from = "DivisorRepr<T>",
    into = "DivisorRepr<T>",
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct WeilDivisor<T> {
    components: BTreeMap<String, T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct DivisorRepr<T> {
    #[serde(with = "crate::json::scalar_map")]
    components: BTreeMap<String, T>,
}

impl<T: Scalar> TryFrom<DivisorRepr<T>> for WeilDivisor<T> {
    type Error = Error;

    fn try_from(r: DivisorRepr<T>) -> Result<Self> {
        Self::from_pairs(r.components)
    }
}

impl<T> From<WeilDivisor<T>> for DivisorRepr<T> {
    fn from(d: WeilDivisor<T>) -> Self {
        Self {
            components: d.components,
        }
    }
}

impl<T: Scalar> Default for WeilDivisor<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> WeilDivisor<T> {
    pub fn zero() -> Self {
        Self {
            components: BTreeMap::new(),
        }
    }

    /// Builds a divisor; repeated names accumulate.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
    {
        let mut d = Self::zero();
        for (name, mult) in pairs {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::InvalidDivisor("empty component name".into()));
            }
            d.add_to(name, mult);
        }
        Ok(d)
    }

    /// The prime divisor `name` with multiplicity one.
    pub fn prime(name: &str) -> Result<Self> {
        Self::from_pairs([(name, T::one())])
    }

    fn add_to(&mut self, name: String, mult: T) {
        let entry = self.components.entry(name).or_insert_with(T::zero);
        *entry = entry.clone() + mult;
        self.components.retain(|_, m| !m.is_zero());
    }

    pub fn components(&self) -> &BTreeMap<String, T> {
        &self.components
    }

    /// Multiplicity along `name`, zero when absent.
    pub fn get(&self, name: &str) -> T {
        self.components.get(name).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (name, m) in &other.components {
            out.add_to(name.clone(), m.clone());
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (name, m) in &self.components {
            out.add_to(name.clone(), m.clone() * c.clone());
        }
        out
    }

    /// Componentwise `self <= other`, missing components count as zero.
    pub fn leq(&self, other: &Self) -> bool {
        self.components
            .keys()
            .chain(other.components.keys())
            .all(|name| self.get(name) <= other.get(name))
    }

    /// Largest multiplicity, zero for the empty divisor.
    pub fn max_multiplicity(&self) -> T {
        self.components
            .values()
            .fold(T::zero(), |acc, m| if *m > acc { m.clone() } else { acc })
    }

    pub fn is_effective(&self) -> bool {
        self.components.values().all(|m| !m.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.components.values().all(Scalar::is_integral)
    }
}

impl<T: Scalar> fmt::Display for WeilDivisor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(name, m)| format!("{m}·{name}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A coherent sheaf, seen through its torsion-length divisors on a finite
/// family of fibers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(
    try_from = "TokenRepr<T>",
    into = "TokenRepr<T>",
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct Token<T> {
    name: String,
    fibers: BTreeMap<String, WeilDivisor<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct TokenRepr<T> {
    name: String,
    fibers: BTreeMap<String, WeilDivisor<T>>,
}

impl<T: Scalar> TryFrom<TokenRepr<T>> for Token<T> {
    type Error = Error;

    fn try_from(r: TokenRepr<T>) -> Result<Self> {
        Self::new(r.name, r.fibers)
    }
}

impl<T> From<Token<T>> for TokenRepr<T> {
    fn from(t: Token<T>) -> Self {
        Self {
            name: t.name,
            fibers: t.fibers,
        }
    }
}

impl<T: Scalar> Token<T> {
    pub fn new(name: impl Into<String>, fibers: BTreeMap<String, WeilDivisor<T>>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidToken("empty name".into()));
        }
        if fibers.is_empty() {
            return Err(Error::InvalidToken(format!("{name} has no fibers")));
        }
        if let Some((label, _)) = fibers.iter().find(|(_, d)| !d.is_effective()) {
            return Err(Error::InvalidToken(format!(
                "{name} has a negative torsion length on fiber {label}"
            )));
        }
        Ok(Self { name, fibers })
    }

    /// Token with the same divisor on every listed fiber.
    pub fn uniform<'a>(
        name: impl Into<String>,
        labels: impl IntoIterator<Item = &'a str>,
        divisor: &WeilDivisor<T>,
    ) -> Result<Self> {
        let fibers = labels
            .into_iter()
            .map(|l| (l.to_string(), divisor.clone()))
            .collect();
        Self::new(name, fibers)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn fibers(&self) -> &BTreeMap<String, WeilDivisor<T>> {
        &self.fibers
    }

    pub fn fiber(&self, label: &str) -> Result<&WeilDivisor<T>> {
        self.fibers.get(label).ok_or_else(|| Error::UnknownFiber {
            token: self.name.clone(),
            fiber: label.to_string(),
        })
    }

    fn same_fibers(&self, other: &Self) -> bool {
        self.fibers.keys().eq(other.fibers.keys())
    }

    /// Torsion lengths are additive on direct sums, fiber by fiber.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !self.same_fibers(other) {
            return Err(Error::FiberMismatch(self.name.clone(), other.name.clone()));
        }
        let fibers = self
            .fibers
            .iter()
            .map(|(label, d)| (label.clone(), d.add(&other.fibers[label])))
            .collect();
        Ok(Self {
            name: direct_sum_name(&self.name, &other.name),
            fibers,
        })
    }

    /// `μ_f(E) = max over fibers s of the maximal multiplicity of T(E_s)`.
    pub fn mu_f(&self) -> T {
        self.fibers.values().fold(T::zero(), |acc, d| {
            let m = d.max_multiplicity();
            if m > acc {
                m
            } else {
                acc
            }
        })
    }

    /// All torsion lengths are integers, as for an actual sheaf.
    pub fn is_integral(&self) -> bool {
        self.fibers.values().all(WeilDivisor::is_integral)
    }
}

/// Name given to the direct sum of tokens `a` and `b`.
pub fn direct_sum_name(a: &str, b: &str) -> String {
    format!("{a}⊕{b}")
}

/// Element of the free ℚ-vector space on coherent-sheaf tokens.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    try_from = "ComboRepr<T>",
    into = "ComboRepr<T>",
    bound(serialize = "T: Scalar", deserialize = "T: Scalar")
)]
pub struct Combo<T> {
    terms: BTreeMap<String, (Token<T>, T)>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct TermRepr<T> {
    #[serde(with = "crate::json::scalar")]
    coeff: T,
    token: Token<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct ComboRepr<T> {
    terms: Vec<TermRepr<T>>,
}

impl<T: Scalar> TryFrom<ComboRepr<T>> for Combo<T> {
    type Error = Error;

    fn try_from(r: ComboRepr<T>) -> Result<Self> {
        let mut c = Self::zero();
        for t in r.terms {
            c.add_term(t.coeff, t.token)?;
        }
        Ok(c)
    }
}

impl<T> From<Combo<T>> for ComboRepr<T> {
    fn from(c: Combo<T>) -> Self {
        Self {
            terms: c
                .terms
                .into_values()
                .map(|(token, coeff)| TermRepr { coeff, token })
                .collect(),
        }
    }
}

impl<T: Scalar> Default for Combo<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> Combo<T> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn single(coeff: T, token: Token<T>) -> Self {
        let mut c = Self::zero();
        c.add_term(coeff, token)
            .expect("a single token cannot conflict");
        c
    }

    /// Adds `coeff · token`. Tokens are identified by name; reusing a name
    /// for different fiber data is an error.
    pub fn add_term(&mut self, coeff: T, token: Token<T>) -> Result<()> {
        let name = token.name.clone();
        match self.terms.get_mut(&name) {
            Some((existing, c)) => {
                if *existing != token {
                    return Err(Error::ConflictingToken(name));
                }
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&name);
                }
            }
            None if coeff.is_zero() => {}
            None => {
                self.terms.insert(name, (token, coeff));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (token, c) in other.terms.values() {
            out.add_term(c.clone(), token.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = Self::zero();
        for (token, c) in self.terms.values() {
            out.add_term(c.clone() * k.clone(), token.clone())
                .expect("tokens come from a consistent combo");
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(token, coefficient)` pairs in name order.
    pub fn terms(&self) -> impl Iterator<Item = (&Token<T>, &T)> {
        self.terms.values().map(|(t, c)| (t, c))
    }

    /// `T(E)` on one fiber, extended linearly.
    pub fn torsion_divisor(&self, fiber: &str) -> Result<WeilDivisor<T>> {
        self.terms()
            .try_fold(WeilDivisor::zero(), |acc, (token, c)| {
                Ok(acc.add(&token.fiber(fiber)?.scale(c)))
            })
    }

    /// `μ_f` extended linearly. All tokens must share one fiber set.
    pub fn mu_f(&self) -> Result<T> {
        let mut terms = self.terms();
        let Some((first, c0)) = terms.next() else {
            return Ok(T::zero());
        };
        let mut total = c0.clone() * first.mu_f();
        for (token, c) in terms {
            if !token.same_fibers(first) {
                return Err(Error::FiberMismatch(first.name.clone(), token.name.clone()));
            }
            total = total + c.clone() * token.mu_f();
        }
        Ok(total)
    }
}

/// Checks that tabulated values of a ℚ-linear function on tokens are
/// natural numbers and subadditive on the sampled direct sums.
///
/// `values` is keyed by token name; the direct sum of `a` and `b` is looked
/// up under [`direct_sum_name`].
pub fn check_admissible<T: Scalar>(
    values: &BTreeMap<String, T>,
    samples: &[(String, String)],
) -> Result<bool> {
    let lookup = |name: &str| {
        values
            .get(name)
            .cloned()
            .ok_or_else(|| Error::MissingValue(name.to_string()))
    };
    let mut subadditive = true;
    for (a, b) in samples {
        let sum = lookup(&direct_sum_name(a, b))?;
        subadditive &= sum <= lookup(a)? + lookup(b)?;
    }
    let natural = values.values().all(|v| !v.is_negative() && v.is_integral());
    Ok(natural && subadditive)
}

/// Values keyed by token name, and the sampled pairs of names.
pub type MuTable<T> = (BTreeMap<String, T>, Vec<(String, String)>);

/// Tabulates `μ_f` on the given tokens and on the direct sums of the
/// sampled index pairs, in the shape [`check_admissible`] expects.
pub fn tabulate_mu_f<T: Scalar>(
    tokens: &[Token<T>],
    pairs: &[(usize, usize)],
) -> Result<MuTable<T>> {
    let mut values = BTreeMap::new();
    for t in tokens {
        values.insert(t.name.clone(), t.mu_f());
    }
    let mut samples = Vec::with_capacity(pairs.len());
    for &(i, j) in pairs {
        let (a, b) = (&tokens[i], &tokens[j]);
        let sum = a.direct_sum(b)?;
        values.insert(sum.name.clone(), sum.mu_f());
        samples.push((a.name.clone(), b.name.clone()));
    }
    Ok((values, samples))
}

/// A local system on the complement of a smooth divisor `D` has log
/// conductors bounded by `(lc_D + 1) · O_D`.
pub fn bounding_combo_for_local_system<T: Scalar>(lc_d: &T, o_d: &Token<T>) -> Result<Combo<T>> {
    if lc_d.is_negative() {
        return Err(Error::NegativeInput(format!("log conductor {lc_d}")));
    }
    Ok(Combo::single(lc_d.clone() + T::one(), o_d.clone()))
}

/// `LC(H^i K|_C) <= T(f^* E)` at every point of the test curve.
pub fn check_lc_bounded<T: Scalar>(
    lc_along_curve: &WeilDivisor<T>,
    pulled_t: &WeilDivisor<T>,
) -> bool {
    lc_along_curve.leq(pulled_t)
}
