//! JSON forms of series, paths and reports. Generator and puncture indices
//! are 1-based on the wire.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::free_hopf::{FreeSeries, TensorSeries, Word};
use crate::holonomy::HolonomyResult;
use crate::paths::{Anchor, PLPath, PunctureConfig};
use crate::rep_space::{BivectorReport, BracketTable};

type C = Complex64;

/// Avoids `-0.0` in the output.
fn clean(x: f64) -> f64 {
    x + 0.0
}

fn word_json(w: Word) -> Vec<usize> {
    w.letters().map(|l| l + 1).collect()
}

fn word_key(w: Word) -> (usize, Vec<usize>) {
    (w.len(), w.to_vec())
}

/// `{"n", "degree", "terms": [{"word", "re", "im"}]}` with terms sorted by
/// length, then lexicographically.
pub fn series_to_json(s: &FreeSeries<C>) -> Value {
    let mut terms: Vec<(Word, C)> = s.terms().map(|(w, c)| (*w, *c)).collect();
    terms.sort_by_key(|(w, _)| word_key(*w));
    let terms: Vec<Value> = terms
        .into_iter()
        .map(|(w, c)| json!({"word": word_json(w), "re": clean(c.re), "im": clean(c.im)}))
        .collect();
    json!({"n": s.n(), "degree": s.degree(), "terms": terms})
}

/// Tensor terms carry `"word": [left, right]`.
pub fn tensor_to_json(t: &TensorSeries<C>) -> Value {
    let mut terms: Vec<((Word, Word), C)> = t.terms().map(|(k, c)| (*k, *c)).collect();
    terms.sort_by_key(|((a, b), _)| (word_key(*a), word_key(*b)));
    let terms: Vec<Value> = terms
        .into_iter()
        .map(|((a, b), c)| json!({"word": [word_json(a), word_json(b)], "re": clean(c.re), "im": clean(c.im)}))
        .collect();
    json!({"n": t.n(), "degree": t.degree(), "terms": terms})
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesSpec {
    n: usize,
    degree: usize,
    terms: Vec<TermSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    word: Vec<usize>,
    re: f64,
    #[serde(default)]
    im: f64,
}

pub fn series_from_json(text: &str) -> Result<FreeSeries<C>> {
    let spec: SeriesSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut s = FreeSeries::zero(spec.n, spec.degree);
    for (k, t) in spec.terms.iter().enumerate() {
        if t.word.iter().any(|&l| l == 0 || l > spec.n) {
            return Err(Error::Parse(format!("terms[{k}].word: letters must lie in 1..={}", spec.n)));
        }
        if t.word.len() > spec.degree {
            return Err(Error::Parse(format!("terms[{k}].word: longer than degree {}", spec.degree)));
        }
        let letters: Vec<usize> = t.word.iter().map(|l| l - 1).collect();
        s.add_term(Word::from_letters(&letters)?, C::new(t.re, t.im));
    }
    Ok(s)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum AnchorSpec {
    Tangential { puncture: usize, direction: [f64; 2] },
    Regular { point: [f64; 2] },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathSpec {
    punctures: Vec<[f64; 2]>,
    start: AnchorSpec,
    vertices: Vec<[f64; 2]>,
    end: AnchorSpec,
}

fn point(p: [f64; 2]) -> C {
    C::new(p[0], p[1])
}

fn pair(z: C) -> [f64; 2] {
    [clean(z.re), clean(z.im)]
}

fn anchor(spec: &AnchorSpec, field: &str, n: usize) -> Result<Anchor> {
    match spec {
        AnchorSpec::Regular { point: p } => Ok(Anchor::Regular(point(*p))),
        AnchorSpec::Tangential { puncture, direction } => {
            if *puncture == 0 || *puncture > n {
                return Err(Error::Parse(format!("{field}.puncture: must lie in 1..={n}")));
            }
            Ok(Anchor::Tangential { puncture: puncture - 1, direction: point(*direction) })
        }
    }
}

fn anchor_spec(a: Anchor) -> AnchorSpec {
    match a {
        Anchor::Regular(z) => AnchorSpec::Regular { point: pair(z) },
        Anchor::Tangential { puncture, direction } => {
            AnchorSpec::Tangential { puncture: puncture + 1, direction: pair(direction) }
        }
    }
}

/// Parses and validates a path. Errors name the offending field.
pub fn path_from_json(text: &str) -> Result<PLPath> {
    let spec: PathSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let punctures = PunctureConfig::new(spec.punctures.iter().copied().map(point).collect())
        .map_err(|e| Error::Parse(format!("punctures: {e}")))?;
    let n = punctures.len();
    let start = anchor(&spec.start, "start", n)?;
    let end = anchor(&spec.end, "end", n)?;
    let vertices = spec.vertices.iter().copied().map(point).collect();
    PLPath::new(punctures, start, end, vertices)
}

pub fn path_to_json(path: &PLPath) -> Value {
    let spec = PathSpec {
        punctures: path.punctures().points().iter().copied().map(pair).collect(),
        start: anchor_spec(path.start()),
        vertices: path.vertices().iter().copied().map(pair).collect(),
        end: anchor_spec(path.end()),
    };
    serde_json::to_value(spec).expect("path spec serializes")
}

/// `{"accuracy", "rot", "crossings": [{"t", "s", "sign"}]}`.
pub fn holonomy_report(result: &HolonomyResult, path: &PLPath) -> Result<Value> {
    let crossings: Vec<Value> = path
        .self_intersections()?
        .iter()
        .map(|x| json!({"t": x.t, "s": x.s, "sign": x.sign}))
        .collect();
    Ok(json!({
        "accuracy": result.accuracy_estimate,
        "rot": path.rotation_number()?,
        "crossings": crossings,
    }))
}

fn table_json(t: &BracketTable) -> Value {
    let values: Vec<[f64; 2]> = t.values.iter().map(|c| pair(*c)).collect();
    json!({"N": t.size, "values": values})
}

/// `{"lhs_oracle", "rhs_formula", "vdb", "max_disc", "tail_bound"}`; tables
/// list `{H²_ij, H¹_uv}` in `(i, j, u, v)` order.
pub fn bivector_report(r: &BivectorReport) -> Value {
    json!({
        "lhs_oracle": table_json(&r.lhs_oracle),
        "rhs_formula": table_json(&r.rhs_formula),
        "vdb": table_json(&r.vdb),
        "max_disc": r.max_disc,
        "tail_bound": r.tail_bound,
        "trace": {
            "oracle": pair(r.trace_oracle),
            "crossing": pair(r.trace_crossing),
            "pi": pair(r.trace_pi),
        },
    })
}
