//! Verification suites behind `ramicalc verify`.
//!
//! Each suite returns a report whose JSON form is deterministic: sampling is
//! driven by a fixed-seed ChaCha stream and every map is ordered.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bettibounds::{
    affine_betti_bound, b_family, chi_sandwich, chi_twisted_sandwich, grid_cross_check,
    verify_appendix_chain, AppendixReport,
};
use crate::conductor::{Conductor, GaloisModule, Slopes, TensorMode};
use crate::curves::{gos_chi, CurveData};
use crate::error::{Error, Result};
use crate::exactmath::Grid;
use crate::geometry::{
    bounding_combo_for_local_system, check_admissible, tabulate_mu_f, Combo, Token, WeilDivisor,
};
use crate::oracles::{kunneth_betti, kunneth_chi, recursion_reference};
use crate::Rat;

pub const DEFAULT_SEED: u64 = 0x5eed_2a11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Appendix,
    Sharpness,
    Invariants,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Appendix => "appendix",
            Suite::Sharpness => "sharpness",
            Suite::Invariants => "invariants",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "appendix" => Ok(Suite::Appendix),
            "sharpness" => Ok(Suite::Sharpness),
            "invariants" => Ok(Suite::Invariants),
            "all" => Ok(Suite::All),
            other => Err(Error::Precondition(format!("unknown suite {other}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Largest `n` in the appendix chain.
    pub n_max: usize,
    /// Sampling grid for the appendix cross-check.
    pub grid: Grid<Rat>,
    pub seed: u64,
    /// Random cases per sampled invariant.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n_max: 8,
            grid: Grid::default(),
            seed: DEFAULT_SEED,
            samples: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub cases: u64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub appendix: Option<AppendixReport>,
    pub checks: Vec<Check>,
}

/// Accumulates cases of one named check, remembering the first failure.
struct Tally {
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    /// Errors count as failures of the case that raised them.
    fn record_result(&mut self, r: Result<bool>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, describe),
            Err(e) => {
                let msg = format!("{}: {e}", describe());
                self.record(false, || msg);
            }
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name.to_string(),
            cases: self.cases,
            passed: self.failure.is_none(),
            failure: self.failure,
        }
    }
}

fn report(suite: Suite, appendix: Option<AppendixReport>, checks: Vec<Check>) -> SuiteReport {
    let passed = checks.iter().all(|c| c.passed)
        && appendix.as_ref().is_none_or(AppendixReport::all_certified);
    SuiteReport {
        suite,
        passed,
        appendix,
        checks,
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    Ok(match suite {
        Suite::Appendix => vec![appendix_suite(opts)?],
        Suite::Sharpness => vec![sharpness_suite()],
        Suite::Invariants => vec![invariants_suite(opts)],
        Suite::All => vec![
            appendix_suite(opts)?,
            sharpness_suite(),
            invariants_suite(opts),
        ],
    })
}

pub fn appendix_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let chain = verify_appendix_chain::<Rat>(opts.n_max)?;
    let mut grid = Tally::new("grid nonneg closed_form - b_n");
    for (n, ok) in grid_cross_check(opts.n_max, &opts.grid)? {
        grid.record(ok, || format!("negative sample for n = {n}"));
    }
    Ok(report(Suite::Appendix, Some(chain), vec![grid.finish()]))
}

fn int(v: impl Into<num_bigint::BigInt>) -> Rat {
    Rat::from_integer(v.into())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn sharpness_suite() -> SuiteReport {
    let b = b_family::<Rat>(12);

    let mut degrees = Tally::new("deg b_i = i");
    for (i, p) in b.polys().iter().enumerate() {
        degrees.record(p.degree() == Some(i), || {
            format!("deg b_{i} = {:?}", p.degree())
        });
    }

    let mut sharp = Tally::new("(m-1)^i <= b_i(m)");
    let mut theorem = Tally::new("kunneth_betti <= affine_betti_bound");
    for p in [2u64, 3, 5] {
        for m in (2..=50u64).filter(|&m| gcd(m, p) == 1) {
            let lc = int(m);
            for i in 0..=6usize {
                let describe = || format!("p = {p}, m = {m}, i = {i}");
                match kunneth_betti(6, i, m) {
                    Ok(h) => {
                        let h = int(h);
                        sharp.record(h <= b.polys()[i].eval(&lc), describe);
                        theorem.record_result(
                            affine_betti_bound(6, i, &lc, 1).map(|bound| h <= bound),
                            describe,
                        );
                    }
                    Err(e) => sharp.record(false, || format!("{}: {e}", describe())),
                }
            }
        }
    }

    let mut chi = Tally::new("kunneth_chi in chi_sandwich");
    for n in 2..=4usize {
        for m in 2..=20u64 {
            let describe = || format!("n = {n}, m = {m}");
            let r = kunneth_chi(n, m)
                .and_then(|c| chi_sandwich(n, &int(m), 1).map(|s| s.contains(&int(c))));
            chi.record_result(r, describe);
        }
    }

    let mut twisted = Tally::new("chi_twisted_sandwich ordered and (m-1)-scaled");
    for n in 2..=4usize {
        for lc in 0..=5u64 {
            for m in (lc + 2)..=20 {
                let describe = || format!("n = {n}, lc = {lc}, m = {m}");
                let r = (|| {
                    let s = chi_twisted_sandwich(n, &int(m), 1)?;
                    let s2 = chi_twisted_sandwich(n, &int(m), 2)?;
                    let factor = int(m - 1);
                    let even: Rat = b.polys()[..n]
                        .iter()
                        .step_by(2)
                        .map(|p| p.eval(&int(m)))
                        .sum();
                    let odd: Rat = b.polys()[..n]
                        .iter()
                        .skip(1)
                        .step_by(2)
                        .map(|p| p.eval(&int(m)))
                        .sum();
                    Ok(s.lower <= s.upper
                        && s.lower == -(even * factor.clone())
                        && s.upper == odd * factor
                        && s2.upper == s.upper.clone() * int(2)
                        && s2.lower == s.lower.clone() * int(2))
                })();
                twisted.record_result(r, describe);
            }
        }
    }

    let mut laumon = Tally::new("gos_chi(j_!N) = 1 - m = -h^1");
    for m in 2..=100u64 {
        let d = CurveData::<Rat>::artin_schreier_on_affine_line(m);
        let r = kunneth_betti(1, 1, m)
            .map(|h1| gos_chi(&d) == -int(h1.clone()) && gos_chi(&d) == int(1) - int(m));
        laumon.record_result(r, || format!("m = {m}"));
    }

    report(
        Suite::Sharpness,
        None,
        vec![
            degrees.finish(),
            sharp.finish(),
            theorem.finish(),
            chi.finish(),
            twisted.finish(),
            laumon.finish(),
        ],
    )
}

fn random_slope(rng: &mut ChaCha8Rng) -> Rat {
    let den: i64 = rng.gen_range(1..=4);
    let num: i64 = rng.gen_range(0..=12 * den);
    Rat::new(num.into(), den.into())
}

fn random_slopes(rng: &mut ChaCha8Rng) -> Slopes<Rat> {
    let count = rng.gen_range(1..=3);
    let mut pieces: Vec<(Rat, u64)> = Vec::new();
    while pieces.len() < count {
        let s = random_slope(rng);
        if pieces.iter().all(|(t, _)| *t != s) {
            pieces.push((s, rng.gen_range(1..=3)));
        }
    }
    Slopes::new(pieces).expect("distinct nonnegative slopes with positive ranks")
}

/// Random module: over a perfect residue field, or with a nonlog side
/// shifted by some `t` in `(0, 1]` (or missing altogether).
pub fn random_module(rng: &mut ChaCha8Rng, perfect: bool) -> GaloisModule<Rat> {
    let log = random_slopes(rng);
    if perfect {
        return GaloisModule::from_log(log, true).expect("perfect data is consistent");
    }
    if rng.gen_bool(0.25) {
        return GaloisModule::from_log(log, false).expect("log data alone is consistent");
    }
    let mut t = Rat::new(rng.gen_range(1..=4i64).into(), 4.into());
    if log
        .min_slope()
        .is_some_and(|s| s.clone() + t.clone() < Rat::one())
    {
        t = Rat::one();
    }
    let nonlog = log.shifted(&t);
    GaloisModule::new(log.total_rank(), log, Some(nonlog), false)
        .expect("shifted data is consistent")
}

fn conductor_checks(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut bracket = Tally::new("lc <= c <= lc + 1");
    let mut dimtot = Tally::new("sw <= dimtot <= sw + rank");
    let mut collapse = Tally::new("perfect residue: c = lc + 1, dimtot = sw + rank");
    let mut additive = Tally::new("rank, sw, dimtot additive on direct_sum");
    let mut tensor = Tally::new("tensor_isoclinic: sw = rk rk max(r, s)");
    let mut twist = Tally::new("swan twist exact value within bounds");

    for k in 0..samples {
        let perfect = rng.gen_bool(0.5);
        let a = random_module(rng, perfect);
        let b = random_module(rng, perfect);
        let describe = || {
            format!(
                "sample {k}: {}",
                serde_json::to_string(&a).unwrap_or_default()
            )
        };

        let cs = a.conductors();
        let lc = cs.log_conductor.clone();
        let ok = match &cs.conductor {
            Conductor::Exact(c) => lc <= *c && *c <= lc.clone() + Rat::one(),
            Conductor::Between(lo, hi) => *lo == lc && *hi == lc.clone() + Rat::one(),
        };
        bracket.record(ok, describe);

        let sw = a.swan();
        let rank = int(a.rank());
        if let Ok(dt) = a.dimtot() {
            dimtot.record(sw <= dt && dt <= sw.clone() + rank.clone(), describe);
        }

        if perfect {
            let ok = cs.conductor == Conductor::Exact(lc.clone() + Rat::one())
                && a.dimtot().ok() == Some(sw.clone() + rank.clone());
            collapse.record(ok, describe);
        }

        let r = a.direct_sum(&b).map(|s| {
            let dims = match (a.dimtot(), b.dimtot(), s.dimtot()) {
                (Ok(x), Ok(y), Ok(z)) => x + y == z,
                (Ok(_), Ok(_), Err(_)) => false,
                _ => true,
            };
            s.rank() == a.rank() + b.rank() && s.swan() == a.swan() + b.swan() && dims
        });
        additive.record_result(r, describe);

        let (rk_m, rk_n) = (rng.gen_range(1..=4u64), rng.gen_range(1..=4u64));
        let (r_slope, s_slope) = (random_slope(rng), random_slope(rng));
        if r_slope != s_slope {
            let r = (|| {
                let m = GaloisModule::from_log(Slopes::isoclinic(r_slope.clone(), rk_m)?, perfect)?;
                let n = GaloisModule::from_log(Slopes::isoclinic(s_slope.clone(), rk_n)?, perfect)?;
                let t = m.tensor_isoclinic(&n, TensorMode::Log)?;
                let top = if r_slope > s_slope {
                    r_slope.clone()
                } else {
                    s_slope.clone()
                };
                Ok(t.swan() == int(rk_m * rk_n) * top && t.rank() == rk_m * rk_n)
            })();
            tensor.record_result(r, || format!("sample {k}: r = {r_slope}, s = {s_slope}"));
        }

        let r_twist = random_slope(rng);
        let r = (|| {
            let n = GaloisModule::from_log(Slopes::isoclinic(r_twist.clone(), 1)?, perfect)?;
            let bounds = a.swan_twist_bounds(&n, true)?;
            Ok(bounds.lower <= bounds.upper
                && bounds
                    .exact
                    .is_none_or(|e| bounds.lower <= e && e <= bounds.upper))
        })();
        twist.record_result(r, describe);
    }

    vec![
        bracket.finish(),
        dimtot.finish(),
        collapse.finish(),
        additive.finish(),
        tensor.finish(),
        twist.finish(),
    ]
}

const FIBERS: [&str; 2] = ["s0", "s1"];
const COMPONENTS: [&str; 3] = ["D", "E", "F"];

pub fn random_token(rng: &mut ChaCha8Rng, name: String) -> Token<Rat> {
    let fibers = FIBERS
        .iter()
        .map(|label| {
            let pairs = COMPONENTS
                .iter()
                .map(|c| (*c, int(rng.gen_range(0..=6i64))));
            (
                label.to_string(),
                WeilDivisor::from_pairs(pairs).expect("valid components"),
            )
        })
        .collect();
    Token::new(name, fibers).expect("effective divisors on a fixed fiber set")
}

fn ledger_checks(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let tokens: Vec<Token<Rat>> = (0..40)
        .map(|i| random_token(rng, format!("E{i}")))
        .collect();

    let mut linear = Tally::new("T linear on combinations");
    let mut sum_additive = Tally::new("T additive on direct sums");
    let mut admissible = Tally::new("mu_f natural and subadditive");
    let mut bounding = Tally::new("mu((lc+1) O_D) = (lc+1) mu(O_D)");

    let mut pairs = Vec::with_capacity(samples);
    for k in 0..samples {
        let (i, j) = (
            rng.gen_range(0..tokens.len()),
            rng.gen_range(0..tokens.len()),
        );
        if i != j {
            pairs.push((i, j));
        }
        let (a, b) = (&tokens[i], &tokens[j]);
        let (p, q) = (random_slope(rng), random_slope(rng));
        let describe = || format!("sample {k}: {} {}", a.name(), b.name());
        let r = (|| {
            let combo =
                Combo::single(p.clone(), a.clone()).add(&Combo::single(q.clone(), b.clone()))?;
            let mut ok = true;
            for label in FIBERS {
                let lhs = combo.torsion_divisor(label)?;
                let rhs = a.fiber(label)?.scale(&p).add(&b.fiber(label)?.scale(&q));
                ok &= lhs == rhs;
            }
            Ok(ok)
        })();
        linear.record_result(r, describe);

        let r = a.direct_sum(b).and_then(|s| {
            FIBERS.iter().try_fold(true, |ok, label| {
                Ok(ok && *s.fiber(label)? == a.fiber(label)?.add(b.fiber(label)?))
            })
        });
        sum_additive.record_result(r, describe);
    }
    let r = tabulate_mu_f(&tokens, &pairs)
        .and_then(|(values, samples)| check_admissible(&values, &samples));
    admissible.cases = pairs.len() as u64;
    match r {
        Ok(true) => {}
        Ok(false) => admissible.failure = Some("admissibility table rejected".into()),
        Err(e) => admissible.failure = Some(e.to_string()),
    }

    for (k, o_d) in tokens.iter().enumerate().take(20) {
        for lc in 0..=10i64 {
            let lc = int(lc) / int(k as i64 % 3 + 1);
            let r = bounding_combo_for_local_system(&lc, o_d)
                .and_then(|c| c.mu_f())
                .map(|mu| mu == (lc.clone() + Rat::one()) * o_d.mu_f());
            bounding.record_result(r, || format!("{} with lc = {lc}", o_d.name()));
        }
    }

    vec![
        linear.finish(),
        sum_additive.finish(),
        admissible.finish(),
        bounding.finish(),
    ]
}

pub fn invariants_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = conductor_checks(&mut rng, opts.samples);
    checks.extend(ledger_checks(&mut rng, opts.samples / 2));

    let mut differential = Tally::new("recursion_reference = b_family");
    let b = b_family::<Rat>(8);
    for (n, p) in b.polys().iter().enumerate() {
        differential.record_result(recursion_reference(n).map(|r| r == *p), || {
            format!("n = {n}")
        });
    }
    checks.push(differential.finish());

    let mut nonneg = Tally::new("b_n has nonnegative coefficients");
    for (n, p) in b_family::<Rat>(12).polys().iter().enumerate() {
        nonneg.record(p.has_nonneg_coeffs() && !p.is_zero(), || format!("n = {n}"));
    }
    checks.push(nonneg.finish());

    report(Suite::Invariants, None, checks)
}
