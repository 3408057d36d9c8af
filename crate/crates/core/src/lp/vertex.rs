use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use super::{dot, LpError, LpSolution, StandardFormLp};

/// Structural plus slack columns above which enumeration is refused.
pub const MAX_ORACLE_COLUMNS: usize = 20;

const RANK_EPS: f64 = 1e-10;
const FEAS_EPS: f64 = 1e-9;

/// Brute-force LP solver: enumerates every basic feasible solution of the
/// slack-augmented system, and every extreme ray of its recession cone to
/// detect unboundedness. Exponential in the number of columns.
pub fn vertex_enumeration_oracle(lp: &StandardFormLp) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.variables();
    let n_ub = lp.a_ub.len();
    let columns = n + n_ub;
    if columns > MAX_ORACLE_COLUMNS {
        return Err(LpError::TooLarge {
            columns,
            limit: MAX_ORACLE_COLUMNS,
        });
    }

    let (a, b) = augmented(lp);
    let vertices = basic_solutions(&a, &b, columns);
    if vertices.is_empty() {
        return Ok(LpSolution::Infeasible);
    }

    // Recession directions normalized to sum 1 form a polytope whose
    // vertices are the extreme rays.
    let mut cone = a.clone();
    cone.push(vec![1.0; columns]);
    let mut cone_rhs = vec![0.0; b.len()];
    cone_rhs.push(1.0);
    let improving_ray = basic_solutions(&cone, &cone_rhs, columns)
        .iter()
        .any(|d| dot(&lp.objective, &d[..n]) > FEAS_EPS);
    if improving_ray {
        return Ok(LpSolution::Unbounded);
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    for v in vertices {
        let x = v[..n].to_vec();
        let value = lp.value(&x);
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((x, value));
        }
    }
    let (x, objective) = best.expect("nonempty");
    Ok(LpSolution::Optimal { x, objective })
}

/// `[A_eq 0; A_ub I] (x, s) = (b_eq, b_ub)`.
fn augmented(lp: &StandardFormLp) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = lp.variables();
    let n_ub = lp.a_ub.len();
    let mut rows = Vec::with_capacity(lp.a_eq.len() + n_ub);
    for row in &lp.a_eq {
        let mut r = row.clone();
        r.resize(n + n_ub, 0.0);
        rows.push(r);
    }
    for (j, row) in lp.a_ub.iter().enumerate() {
        let mut r = row.clone();
        r.resize(n + n_ub, 0.0);
        r[n + j] = 1.0;
        rows.push(r);
    }
    let rhs = lp.b_eq.iter().chain(&lp.b_ub).copied().collect();
    (rows, rhs)
}

/// All nonnegative solutions of `A z = b` supported on linearly independent
/// column sets. Works for rank-deficient `A` as well.
fn basic_solutions(a: &[Vec<f64>], b: &[f64], cols: usize) -> Vec<Vec<f64>> {
    let rows = a.len();
    let scale = 1.0 + b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let rhs = DVector::from_column_slice(b);
    let mut out = Vec::new();

    if b.iter().all(|v| v.abs() <= FEAS_EPS * scale) {
        out.push(vec![0.0; cols]);
    }
    for size in 1..=rows.min(cols) {
        for support in (0..cols).combinations(size) {
            let sub = DMatrix::from_fn(rows, size, |i, k| a[i][support[k]]);
            let svd = sub.clone().svd(true, true);
            let largest = svd.singular_values.max();
            if svd.rank(RANK_EPS * largest.max(1.0)) < size {
                continue;
            }
            let Ok(z) = svd.solve(&rhs, RANK_EPS * largest.max(1.0)) else {
                continue;
            };
            let residual = (&sub * &z - &rhs).amax();
            if residual > FEAS_EPS * scale || z.iter().any(|&v| v < -FEAS_EPS * scale) {
                continue;
            }
            let mut full = vec![0.0; cols];
            for (k, &j) in support.iter().enumerate() {
                full[j] = z[k].max(0.0);
            }
            out.push(full);
        }
    }
    out
}
