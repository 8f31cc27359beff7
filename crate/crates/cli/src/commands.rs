use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::{json, Value};

use kzfox_core::coefficients::zeta;
use kzfox_core::holonomy::{
    associator as kz_associator, check_mu_bar, goldman_bracket_check, pentagon_projection_check, zeta_from_associator,
    Connection, HolonomySettings,
};
use kzfox_core::json::{bivector_report, holonomy_report, path_from_json, path_to_json, series_to_json};
use kzfox_core::paths::{PLPath, PunctureConfig};
use kzfox_core::random::rng;
use kzfox_core::rep_space::{compare_holonomy_brackets, MatrixTuple};
use kzfox_core::suites::algebra_suite;
use kzfox_core::FreeSeries;

use crate::{Backend, Check, Options};

/// Tolerance of the coaction, pentagon and Goldman checks.
pub const TOLERANCE: f64 = 1e-5;
/// Floor of the tolerance of the Poisson check; the truncation tail is added when larger.
pub const POISSON_FLOOR: f64 = 1e-4;

pub struct Outcome {
    pub pass: bool,
    pub summary: String,
}

struct Emitter {
    out: Option<fs::File>,
}

impl Emitter {
    fn new(opts: &Options) -> Result<Self> {
        let out = match &opts.out {
            Some(p) => Some(fs::File::create(p).with_context(|| format!("--out: cannot create {}", p.display()))?),
            None => None,
        };
        Ok(Emitter { out })
    }

    fn line(&mut self, v: &Value) -> Result<()> {
        println!("{v}");
        if let Some(f) = &mut self.out {
            writeln!(f, "{v}").context("--out: write failed")?;
        }
        Ok(())
    }
}

fn validate(opts: &Options, min_degree: usize) -> Result<()> {
    if let Some(d) = opts.degree {
        if d < min_degree {
            bail!("--degree: must be at least {min_degree}, got {d}");
        }
    }
    if !(opts.accuracy > 0.0) {
        bail!("--accuracy: must be positive, got {}", opts.accuracy);
    }
    Ok(())
}

fn require_backend(opts: &Options, want: Backend, what: &str) -> Result<()> {
    match opts.backend {
        Some(b) if b != want => bail!("--backend: {what} runs on the {} backend only", if want == Backend::Rational { "rational" } else { "complex" }),
        _ => Ok(()),
    }
}

fn parse_punctures(text: &str) -> Result<PunctureConfig> {
    let points = text
        .split(';')
        .enumerate()
        .map(|(k, item)| {
            let xy: Vec<f64> = item
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .with_context(|| format!("--punctures[{}]: expected `x,y`, got {item:?}", k + 1))?;
            match xy[..] {
                [x, y] => Ok(Complex64::new(x, y)),
                _ => bail!("--punctures[{}]: expected `x,y`, got {item:?}", k + 1),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PunctureConfig::new(points).context("--punctures")
}

fn read_path(file: &Path, opts: &Options) -> Result<PLPath> {
    let text = fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let path = path_from_json(&text).with_context(|| format!("{}", file.display()))?;
    match &opts.punctures {
        None => Ok(path),
        Some(p) => PLPath::new(parse_punctures(p)?, path.start(), path.end(), path.vertices().to_vec())
            .with_context(|| format!("{}: path does not fit --punctures", file.display())),
    }
}

/// `--path`, or the straight path from puncture 1 to puncture 2.
fn single_path(opts: &Options) -> Result<PLPath> {
    match &opts.path {
        Some(f) => read_path(f, opts),
        None => {
            let p = match &opts.punctures {
                Some(t) => parse_punctures(t)?,
                None => PunctureConfig::on_real_line(2),
            };
            PLPath::straight(p, 0, 1).context("--punctures")
        }
    }
}

fn loops(opts: &Options) -> Result<(PLPath, PLPath)> {
    let Some(files) = &opts.loops else {
        bail!("--loops: two loop files are required");
    };
    let g1 = read_path(&files[0], opts)?;
    let g2 = read_path(&files[1], opts)?;
    if g1.punctures() != g2.punctures() {
        bail!("--loops: the two loops use different punctures");
    }
    Ok((g1, g2))
}

fn connection(path: &PLPath, degree: usize, opts: &Options) -> Connection {
    let settings = HolonomySettings { accuracy: opts.accuracy, ..Default::default() };
    Connection::new(path.punctures().clone(), degree).with_settings(settings)
}

pub fn associator(opts: &Options) -> Result<Outcome> {
    validate(opts, 0)?;
    require_backend(opts, Backend::Complex, "associator")?;
    let degree = opts.degree.unwrap_or(4);
    let mut report = Emitter { out: None };
    let (series, mut line) = if degree == 0 {
        (FreeSeries::one(2, 0), json!({"accuracy": 0.0, "rot": 0.0, "crossings": []}))
    } else {
        let res = kz_associator(degree, opts.accuracy)?;
        let path = PLPath::straight(PunctureConfig::on_real_line(2), 0, 1)?;
        let line = holonomy_report(&res, &path)?;
        (res.series, line)
    };
    let text = series_to_json(&series);
    match &opts.out {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("--out: cannot write {}", p.display()))?,
        None => report.line(&text)?,
    }
    let mut zetas = Vec::new();
    let mut worst = 0.0f64;
    for m in 2..=degree {
        let value = zeta_from_associator(&series, m);
        let reference = zeta(m as u32)?;
        let rel = ((value - reference) / reference).abs();
        worst = worst.max(rel);
        zetas.push(json!({"m": m, "value": value, "reference": reference, "rel_err": rel}));
    }
    let accuracy = line["accuracy"].as_f64().unwrap_or(0.0);
    let pass = accuracy <= opts.accuracy;
    line["command"] = json!("associator");
    line["degree"] = json!(degree);
    line["accuracy_target"] = json!(opts.accuracy);
    line["zeta"] = json!(zetas);
    line["pass"] = json!(pass);
    report.line(&line)?;
    Ok(Outcome {
        pass,
        summary: format!(
            "associator: degree {degree}, accuracy {accuracy:.2e}, worst zeta relative error {worst:.2e}: {}",
            verdict(pass)
        ),
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn verify(which: Check, opts: &Options) -> Result<Outcome> {
    validate(opts, 1)?;
    if which == Check::Algebra {
        require_backend(opts, Backend::Rational, "the algebra suite")?;
        return verify_algebra(opts);
    }
    require_backend(opts, Backend::Complex, "this check")?;
    match which {
        Check::Coaction | Check::Pentagon => verify_path(which, opts),
        Check::Goldman => verify_goldman(opts),
        Check::Poisson => verify_poisson(opts),
        Check::Algebra => unreachable!(),
    }
}

fn verify_algebra(opts: &Options) -> Result<Outcome> {
    if opts.cases == 0 {
        bail!("--cases: must be positive");
    }
    let mut emit = Emitter::new(opts)?;
    let lines = algebra_suite(opts.seed, opts.cases);
    let mut total = 0;
    let mut failed = Vec::new();
    for l in &lines {
        total += l.cases;
        if !l.passed() {
            failed.push(l.name);
        }
        emit.line(&json!({
            "check": "algebra", "identity": l.name, "seed": opts.seed,
            "cases": l.cases, "failures": l.failures, "pass": l.passed(),
        }))?;
    }
    let pass = failed.is_empty();
    emit.line(&json!({"check": "algebra", "seed": opts.seed, "cases": total, "suites": lines.len(), "pass": pass}))?;
    let mut summary = format!("algebra: {} identities, {total} cases, seed {}: {}", lines.len(), opts.seed, verdict(pass));
    for name in failed {
        summary.push_str(&format!("\n  failed: {name}"));
    }
    Ok(Outcome { pass, summary })
}

fn verify_path(which: Check, opts: &Options) -> Result<Outcome> {
    let path = single_path(opts)?;
    let degree = opts.degree.unwrap_or(3);
    let conn = connection(&path, degree, opts);
    let (name, check) = match which {
        Check::Coaction => ("coaction", check_mu_bar(&conn, &path)?),
        _ => ("pentagon", pentagon_projection_check(&conn, &path)?),
    };
    let pass = check.discrepancy <= TOLERANCE;
    let mut emit = Emitter::new(opts)?;
    emit.line(&json!({
        "check": name, "degree": degree, "path": path_to_json(&path),
        "discrepancy": check.discrepancy, "accuracy": check.accuracy, "tolerance": TOLERANCE, "pass": pass,
    }))?;
    Ok(Outcome {
        pass,
        summary: format!("{name}: degree {degree}, discrepancy {:.2e} (tolerance {TOLERANCE:.0e}): {}", check.discrepancy, verdict(pass)),
    })
}

fn verify_goldman(opts: &Options) -> Result<Outcome> {
    let (g1, g2) = loops(opts)?;
    let degree = opts.degree.unwrap_or(3);
    let conn = connection(&g1, degree, opts);
    let r = goldman_bracket_check(&conn, &g2, &g1)?;
    let bracket_ok = r.bracket.discrepancy <= TOLERANCE;
    let cobracket_ok = r.cobracket.iter().all(|c| c.discrepancy <= TOLERANCE);
    let pass = bracket_ok && cobracket_ok;
    let cob: Vec<Value> = r
        .cobracket
        .iter()
        .zip(["loop2", "loop1"])
        .map(|(c, which)| {
            json!({
                "loop": which, "discrepancy": c.discrepancy,
                "discrepancy_mod_constants": c.discrepancy_mod_constants, "crossings": c.crossings,
            })
        })
        .collect();
    let mut emit = Emitter::new(opts)?;
    emit.line(&json!({
        "check": "goldman", "degree": degree, "accuracy": r.accuracy, "tolerance": TOLERANCE,
        "bracket": {"discrepancy": r.bracket.discrepancy, "crossings": r.bracket.crossings},
        "cobracket": cob, "pass": pass,
    }))?;
    let worst_cob = r.cobracket.iter().map(|c| c.discrepancy).fold(0.0, f64::max);
    Ok(Outcome {
        pass,
        summary: format!(
            "goldman: bracket discrepancy {:.2e} ({}), cobracket discrepancy {worst_cob:.2e} ({})",
            r.bracket.discrepancy,
            verdict(bracket_ok),
            verdict(cobracket_ok)
        ),
    })
}

fn verify_poisson(opts: &Options) -> Result<Outcome> {
    if opts.size == 0 {
        bail!("--N: must be positive");
    }
    if !(opts.radius > 0.0) {
        bail!("--radius: must be positive, got {}", opts.radius);
    }
    let (g1, g2) = loops(opts)?;
    let degree = opts.degree.unwrap_or(5);
    let conn = connection(&g1, degree, opts);
    let x = MatrixTuple::random(&mut rng(opts.seed), conn.n(), opts.size, opts.radius);
    let r = compare_holonomy_brackets(&conn, &g1, &g2, &x)?;
    let tolerance = POISSON_FLOOR.max(r.tail_bound);
    let pass = r.max_disc <= tolerance;
    let mut line = bivector_report(&r);
    line["check"] = json!("poisson");
    line["degree"] = json!(degree);
    line["seed"] = json!(opts.seed);
    line["radius"] = json!(opts.radius);
    line["tolerance"] = json!(tolerance);
    line["pass"] = json!(pass);
    let mut emit = Emitter::new(opts)?;
    emit.line(&line)?;
    Ok(Outcome {
        pass,
        summary: format!(
            "poisson: N = {}, degree {degree}, seed {}, max discrepancy {:.2e} (tolerance {tolerance:.1e}), trace Pi part {:.2e}: {}",
            opts.size,
            opts.seed,
            r.max_disc,
            r.trace_pi.norm(),
            verdict(pass)
        ),
    })
}
