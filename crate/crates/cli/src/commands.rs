use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use ramicalc::bettibounds::{
    affine_betti_bound, affine_betti_bound_compact, assemble_bound_sequence, b_family,
    chi_sandwich, chi_twisted_sandwich, curve_case_bound, perverse_fold, Sandwich,
};
use ramicalc::conductor::{
    finite_direct_image_lc_bound, two_lines_conductor_divisor, two_lines_curve_conductor,
    Conductor, TensorMode,
};
use ramicalc::curves::{cc_coefficients, gos_chi, BadPoint};
use ramicalc::exactmath::Grid;
use ramicalc::verify::{run_suite, Suite, VerifyOptions};
use ramicalc::{
    BoundFamily, CoherentCombo, CurveSheafData, GaloisModuleData, Poly, QWeilDivisor, Rat,
};

use crate::args::{BoundCmd, Command, GosArgs, ModeArg, SlopesCmd, SuiteArg};
use crate::render::{rat, Output};
use crate::InputError;

pub const BN_CAP: usize = 20;
pub const VERIFY_CAP: usize = 20;
pub const GRID_ENV: &str = "RAMICALC_GRID";

pub struct Outcome {
    pub output: Output,
    /// Print JSON even in table mode; the table goes to stderr.
    pub json_only: bool,
    pub failed: bool,
}

impl From<Output> for Outcome {
    fn from(output: Output) -> Self {
        Self {
            output,
            json_only: false,
            failed: false,
        }
    }
}

type Res<T> = Result<T, InputError>;

fn input(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| input(format!("invalid JSON in {}: {e}", path.display())))
}

fn poly_json(p: &Poly) -> Value {
    serde_json::to_value(p).expect("polynomials serialize")
}

fn polys_json(ps: &[Poly]) -> Value {
    Value::Array(ps.iter().map(poly_json).collect())
}

fn rats_json(vs: &[Rat]) -> Value {
    Value::Array(vs.iter().map(rat).collect())
}

fn module_json(m: &GaloisModuleData) -> Value {
    serde_json::to_value(m).expect("modules serialize")
}

pub fn run(cmd: &Command) -> Res<Outcome> {
    Ok(match cmd {
        Command::Bn { max } => bn(*max)?.into(),
        Command::Bound(b) => bound(b)?.into(),
        Command::Gos(g) => gos(g)?.into(),
        Command::ChiBounds { n, lc, rank } => sandwich(
            chi_sandwich(*n, lc, *rank)?,
            json!({"n": n, "lc": rat(lc), "rank": rank}),
        )
        .into(),
        Command::ChiTwisted { n, m, rank } => sandwich(
            chi_twisted_sandwich(*n, m, *rank)?,
            json!({"n": n, "m": rat(m), "rank": rank}),
        )
        .into(),
        Command::Slopes(s) => slopes(s)?.into(),
        Command::Mu { input: path, fiber } => mu(path, fiber.as_deref())?.into(),
        Command::Assemble {
            n,
            fiber_dim,
            delta,
            alpha,
            mu,
        } => assemble(*n, *fiber_dim, *delta, *alpha, mu)?.into(),
        Command::PerverseFold { input: path, at } => fold(path, at.as_ref())?.into(),
        Command::Verify {
            suite,
            max,
            seed,
            samples,
        } => verify(*suite, *max, *seed, *samples)?,
    })
}

fn bn(max: usize) -> Res<Output> {
    if max > BN_CAP {
        return Err(input(format!("--max {max} exceeds the cap {BN_CAP}")));
    }
    let b = b_family::<Rat>(max);
    let mut out = Output::new(polys_json(b.polys()));
    for (i, p) in b.polys().iter().enumerate() {
        out = out.text(format!("b_{i}"), "=", p.to_string());
    }
    Ok(out)
}

fn bound(cmd: &BoundCmd) -> Res<Output> {
    let (target, params, rows): (&str, Value, Vec<(bool, Rat)>) = match cmd {
        BoundCmd::An(a) => {
            let rows = (0..=2 * a.n)
                .map(|i| Ok((i <= a.n, affine_betti_bound(a.n, i, &a.lc, a.rank)?)))
                .collect::<Res<_>>()?;
            (
                "an",
                json!({"n": a.n, "lc": rat(&a.lc), "rank": a.rank}),
                rows,
            )
        }
        BoundCmd::AnCompact(a) => {
            let rows = (0..=2 * a.n)
                .map(|j| Ok((j >= a.n, affine_betti_bound_compact(a.n, j, &a.lc, a.rank)?)))
                .collect::<Res<_>>()?;
            (
                "an-compact",
                json!({"n": a.n, "lc": rat(&a.lc), "rank": a.rank}),
                rows,
            )
        }
        BoundCmd::Curve {
            genus,
            points,
            lc,
            rank,
        } => {
            let rows = (0..=2)
                .map(|i| Ok((i < 2, curve_case_bound(*genus, *points, lc, *rank, i)?)))
                .collect::<Res<_>>()?;
            (
                "curve",
                json!({"genus": genus, "points": points, "lc": rat(lc), "rank": rank}),
                rows,
            )
        }
    };
    let prefix = if target == "an-compact" { "h_c^" } else { "h^" };
    let values: Vec<Rat> = rows.iter().map(|(_, v)| v.clone()).collect();
    let mut out =
        Output::new(json!({"target": target, "params": params, "bounds": rats_json(&values)}));
    for (i, (in_range, v)) in rows.into_iter().enumerate() {
        out = out.num(format!("{prefix}{i}"), if in_range { "≤" } else { "=" }, v);
    }
    Ok(out)
}

fn parse_point(text: &str, index: usize) -> Res<BadPoint<Rat>> {
    let (mut dimtot, mut stalk, mut label) = (None, None, format!("p{}", index + 1));
    for field in text.split(',') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| input(format!("point field {field:?} is not key=value")))?;
        match key.trim() {
            "dimtot" => dimtot = Some(crate::args::parse_rat(value).map_err(input)?),
            "rank" | "stalk_rank" => {
                stalk = Some(
                    value
                        .trim()
                        .parse::<u64>()
                        .map_err(|e| input(format!("stalk rank {value:?}: {e}")))?,
                )
            }
            "label" => label = value.trim().to_string(),
            other => return Err(input(format!("unknown point field {other:?}"))),
        }
    }
    Ok(BadPoint {
        label,
        dimtot: dimtot.ok_or_else(|| input(format!("point {text:?} lacks dimtot")))?,
        stalk_rank: stalk.unwrap_or(0),
    })
}

fn gos(args: &GosArgs) -> Res<Output> {
    let data: CurveSheafData = match &args.input {
        Some(path) => read_json(path)?,
        None => {
            let genus = args
                .genus
                .ok_or_else(|| input("--genus is required without --in"))?;
            let rank = args
                .rank
                .ok_or_else(|| input("--rank is required without --in"))?;
            let points = args
                .point
                .iter()
                .enumerate()
                .map(|(i, s)| parse_point(s, i))
                .collect::<Res<Vec<_>>>()?;
            CurveSheafData::new(genus, rank, points)?
        }
    };
    let chi = gos_chi(&data);
    let cc = cc_coefficients(&data);
    let fibers: Vec<Value> = cc
        .fibers
        .iter()
        .map(|(label, c)| json!({"label": label, "coeff": rat(c)}))
        .collect();
    let mut out = Output::new(json!({
        "chi": rat(&chi),
        "cc": {"zero_section": rat(&cc.zero_section), "fibers": fibers},
    }))
    .num("chi", "=", chi)
    .num("cc[zero section]", "=", cc.zero_section.clone());
    for (label, c) in cc.fibers {
        out = out.num(format!("cc[T*_{label}]"), "=", c);
    }
    Ok(out)
}

fn sandwich(s: Sandwich<Rat>, params: Value) -> Output {
    Output::new(json!({"params": params, "lower": rat(&s.lower), "upper": rat(&s.upper)}))
        .num("lower", "=", s.lower)
        .num("upper", "=", s.upper)
}

fn conductor_json(c: &Conductor<Rat>) -> Value {
    match c {
        Conductor::Exact(v) => rat(v),
        Conductor::Between(lo, hi) => json!({"lower": rat(lo), "upper": rat(hi)}),
    }
}

fn module_output(m: &GaloisModuleData) -> Output {
    let mut out = Output::new(module_json(m))
        .text("rank", "=", m.rank().to_string())
        .num("sw", "=", m.swan());
    out = match m.dimtot() {
        Ok(d) => out.num("dimtot", "=", d),
        Err(_) => out.text("dimtot", "=", "unknown"),
    };
    let cs = m.conductors();
    out.num("lc", "=", cs.log_conductor)
        .text("c", "=", cs.conductor.to_string())
}

fn slopes(cmd: &SlopesCmd) -> Res<Output> {
    Ok(match cmd {
        SlopesCmd::Swan(a) => {
            let m: GaloisModuleData = read_json(&a.input)?;
            let sw = m.swan();
            Output::new(json!({"swan": rat(&sw)})).num("sw", "=", sw)
        }
        SlopesCmd::Dimtot(a) => {
            let m: GaloisModuleData = read_json(&a.input)?;
            let d = m.dimtot()?;
            Output::new(json!({"dimtot": rat(&d)})).num("dimtot", "=", d)
        }
        SlopesCmd::Conductors(a) => {
            let m: GaloisModuleData = read_json(&a.input)?;
            let cs = m.conductors();
            Output::new(json!({
                "conductor": conductor_json(&cs.conductor),
                "log_conductor": rat(&cs.log_conductor),
            }))
            .text("c", "=", cs.conductor.to_string())
            .num("lc", "=", cs.log_conductor)
        }
        SlopesCmd::Dual(a) => module_output(&read_json::<GaloisModuleData>(&a.input)?.dual()),
        SlopesCmd::Tensor {
            input: a,
            with,
            mode,
        } => {
            let m: GaloisModuleData = read_json(a)?;
            let n: GaloisModuleData = read_json(with)?;
            let mode = match mode {
                ModeArg::Log => TensorMode::Log,
                ModeArg::Nonlog => TensorMode::Nonlog,
            };
            module_output(&m.tensor_isoclinic(&n, mode)?)
        }
        SlopesCmd::TensorBounds {
            input: a,
            with,
            assume_non_cancellation,
        } => {
            let m: GaloisModuleData = read_json(a)?;
            let n: GaloisModuleData = read_json(with)?;
            let b = m.swan_twist_bounds(&n, *assume_non_cancellation)?;
            let mut out = Output::new(json!({
                "lower": rat(&b.lower),
                "upper": rat(&b.upper),
                "exact": b.exact.as_ref().map(rat),
            }))
            .num("sw lower", "≥", b.lower.clone())
            .num("sw upper", "≤", b.upper.clone());
            if let Some(e) = b.exact {
                out = out.num("sw exact", "=", e);
            }
            out
        }
        SlopesCmd::As { m, p, perfect } => {
            let mut module = GaloisModuleData::artin_schreier(*m, *p)?;
            if *perfect {
                module = module.assume_perfect_residue()?;
            }
            module_output(&module)
        }
        SlopesCmd::TwoLines { m, p, alpha, beta } => match (alpha, beta) {
            (Some(a), Some(b)) => {
                let c: Rat = two_lines_curve_conductor(*m, *p, *a, *b)?;
                Output::new(json!({"conductor": rat(&c)})).num("c", "=", c)
            }
            _ => {
                let d: QWeilDivisor = two_lines_conductor_divisor(*m, *p)?;
                Output::new(serde_json::to_value(&d).expect("divisors serialize")).text(
                    "C",
                    "=",
                    d.to_string(),
                )
            }
        },
        SlopesCmd::PushforwardBound {
            lc_trivial,
            degree,
            lc_e,
        } => {
            let b = finite_direct_image_lc_bound(lc_trivial, *degree, lc_e)?;
            Output::new(json!({"bound": rat(&b)})).num("lc_D(f_* L)", "≤", b)
        }
    })
}

fn mu(path: &Path, fiber: Option<&str>) -> Res<Output> {
    let combo: CoherentCombo = read_json(path)?;
    let value = combo.mu_f()?;
    let mut doc = json!({"mu_f": rat(&value)});
    let mut out = Output::new(Value::Null).num("mu_f", "=", value);
    if let Some(label) = fiber {
        let t = combo.torsion_divisor(label)?;
        doc["torsion"] = serde_json::to_value(&t).expect("divisors serialize");
        out = out.text(format!("T[{label}]"), "=", t.to_string());
    }
    out.json = doc;
    Ok(out)
}

fn assemble(n: usize, fiber_dim: usize, delta: u64, alpha: u64, mu: &Rat) -> Res<Output> {
    let a = assemble_bound_sequence(n, fiber_dim, delta, alpha, mu)?;
    let mut out = Output::new(json!({
        "raw": polys_json(&a.raw),
        "folded": polys_json(a.folded.polys()),
        "evaluated": rats_json(&a.evaluated),
    }));
    for (j, p) in a.raw.iter().enumerate() {
        out = out.text(format!("P_{j}"), "=", p.to_string());
    }
    for (i, p) in a.folded.polys().iter().enumerate() {
        out = out.text(format!("P'_{i}"), "=", p.to_string());
    }
    for (j, v) in a.evaluated.into_iter().enumerate() {
        out = out.num(format!("h^{j}"), "≤", v);
    }
    Ok(out)
}

fn fold(path: &Path, at: Option<&Rat>) -> Res<Output> {
    let families: Vec<BoundFamily> = read_json(path)?;
    let f = perverse_fold(&families)?;
    let mut doc = json!({
        "e": polys_json(&f.e),
        "f": polys_json(&f.f),
        "sequence": polys_json(f.sequence.polys()),
    });
    let n = f.sequence.len() - 1;
    let mut out = Output::new(Value::Null);
    for (k, p) in f.sequence.polys().iter().enumerate() {
        out = out.text(format!("bound h^±{}", n - k), "=", p.to_string());
    }
    if let Some(x) = at {
        let values = f.sequence.eval_all(x);
        doc["evaluated"] = rats_json(&values);
        for (k, v) in values.into_iter().enumerate() {
            out = out.num(format!("h^±{} at {x}", n - k), "≤", v);
        }
    }
    out.json = doc;
    Ok(out)
}

fn verify(suite: SuiteArg, max: usize, seed: Option<u64>, samples: usize) -> Res<Outcome> {
    if max > VERIFY_CAP {
        return Err(input(format!("--max {max} exceeds the cap {VERIFY_CAP}")));
    }
    let grid = match std::env::var(GRID_ENV) {
        Ok(text) => Grid::parse(&text).map_err(|e| input(format!("{GRID_ENV}: {e}")))?,
        Err(_) => Grid::default(),
    };
    let mut opts = VerifyOptions {
        n_max: max,
        grid,
        samples,
        ..VerifyOptions::default()
    };
    if let Some(seed) = seed {
        opts.seed = seed;
    }
    let suite = match suite {
        SuiteArg::Appendix => Suite::Appendix,
        SuiteArg::Sharpness => Suite::Sharpness,
        SuiteArg::Invariants => Suite::Invariants,
        SuiteArg::All => Suite::All,
    };
    let reports = run_suite(suite, &opts)?;
    let failed = reports.iter().any(|r| !r.passed);
    let mut out = Output::new(serde_json::to_value(&reports).expect("reports serialize"));
    for r in &reports {
        if let Some(chain) = &r.appendix {
            for s in &chain.steps {
                let step = serde_json::to_value(s.step).expect("step kinds serialize");
                let key = format!(
                    "{} n={} {}",
                    r.suite,
                    s.n,
                    step.as_str().unwrap_or_default()
                );
                out = out.text(key, ":", if s.certified { "certified" } else { "FAILED" });
            }
        }
        for c in &r.checks {
            let status = match &c.failure {
                None => format!("pass ({} cases)", c.cases),
                Some(f) => format!("FAIL ({f})"),
            };
            out = out.text(format!("{}: {}", r.suite, c.name), ":", status);
        }
    }
    Ok(Outcome {
        output: out,
        json_only: true,
        failed,
    })
}
