use super::*;
use crate::brackets::double_bracket_kks;

/// Brackets `{H²_ij, H¹_uv}` of holonomy entries computed three ways.
#[derive(Debug, Clone)]
pub struct BivectorReport {
    /// Finite-difference KKS bracket of the evaluated holonomies.
    pub lhs_oracle: BracketTable,
    pub crossing: BracketTable,
    pub pi: BracketTable,
    /// `crossing + pi`.
    pub rhs_formula: BracketTable,
    /// Contraction of `{{H², H¹}}_KKS`.
    pub vdb: BracketTable,
    /// Largest pairwise gap between the three tables.
    pub max_disc: f64,
    pub tail_bound: f64,
    /// `{tr H², tr H¹}` from the oracle, and the crossing and `Π` parts of the formula.
    pub trace_oracle: C,
    pub trace_crossing: C,
    pub trace_pi: C,
}

fn common_anchor(g1: &PLPath, g2: &PLPath) -> Result<usize> {
    let anchors = [g1.start(), g1.end(), g2.start(), g2.end()];
    let Anchor::Tangential { puncture, direction } = anchors[0] else {
        return Err(Error::Domain("loops must be based at a tangential point".into()));
    };
    let same = |a: &Anchor| match a {
        Anchor::Tangential { puncture: p, direction: v } => *p == puncture && (v - direction).norm() <= 1e-9,
        Anchor::Regular(_) => false,
    };
    if !anchors.iter().all(same) {
        return Err(Error::Domain("both paths must be loops at one tangential anchor".into()));
    }
    Ok(puncture)
}

/// `{H^{γ2}_ij, H^{γ1}_uv}` at `x` from the oracle, from the crossing sum
/// plus `Π`, and from the Van den Bergh contraction of the double bracket.
pub fn compare_holonomy_brackets(conn: &Connection, g1: &PLPath, g2: &PLPath, x: &MatrixTuple) -> Result<BivectorReport> {
    let m = common_anchor(g1, g2)?;
    let size = x.size();
    let h1 = conn.hol(g1)?;
    let h2 = conn.hol(g2)?;
    check_generators(h1.n(), x)?;
    let eval = |s: &FreeSeries<C>| -> Result<Mat> { Ok(evaluate(s, x)?.value) };

    let jf = jacobian(|y| evaluate(&h2, y).map(|e| e.value).unwrap_or_else(|_| Mat::zeros(size, size)), x);
    let jg = jacobian(|y| evaluate(&h1, y).map(|e| e.value).unwrap_or_else(|_| Mat::zeros(size, size)), x);
    let lhs_oracle = kks_table(x, &jf, &jg);

    let pib = PiBivector::new(x, m, conn.degree())?;
    let pi = table_from(size, &jf, &jg, |a, b| pib.apply(a, b));

    let mut crossing = BracketTable::zero(size);
    for a in intersections(g1, g2)? {
        let left = eval(&joined_holonomy(conn, g1, &h1, a.t, g2, &h2, a.s)?)?;
        let right = eval(&joined_holonomy(conn, g2, &h2, a.s, g1, &h1, a.t)?)?;
        for (i, j, u, v) in quadruples(size) {
            crossing.add(i, j, u, v, left[(u, j)] * right[(i, v)] * a.sign as f64);
        }
    }
    let rhs_formula = crossing.plus(&pi);
    let vdb = vdb_table(&double_bracket_kks(&h2, &h1)?, x)?;

    let max_disc = lhs_oracle
        .max_abs_diff(&rhs_formula)
        .max(lhs_oracle.max_abs_diff(&vdb))
        .max(rhs_formula.max_abs_diff(&vdb));
    Ok(BivectorReport {
        trace_oracle: lhs_oracle.trace(),
        trace_crossing: crossing.trace(),
        trace_pi: pi.trace(),
        lhs_oracle,
        crossing,
        pi,
        rhs_formula,
        vdb,
        max_disc,
        tail_bound: tail_bound(x.n(), conn.degree(), x.norm_bound()),
    })
}
