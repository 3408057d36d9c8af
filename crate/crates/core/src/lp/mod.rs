//! Small dense linear programs: `max c.x` s.t. `A_eq x = b_eq`,
//! `A_ub x <= b_ub`, `x >= 0`.
//!
//! [`solve_lp`] is a two-phase tableau simplex with Bland's rule.
//! [`vertex_enumeration_oracle`] brute-forces every basic feasible solution
//! and is only meant for testing on tiny instances.

mod simplex;
mod vertex;

use thiserror::Error;

pub use simplex::{solve_lp, solve_lp_with, SimplexOptions};
pub use vertex::{vertex_enumeration_oracle, MAX_ORACLE_COLUMNS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed LP: {0}")]
    Malformed(String),
    #[error("simplex hit the iteration limit ({0}) without terminating")]
    IterationLimit(usize),
    #[error("numerically unstable basis: residual {residual:e} after perturbation retry")]
    Numerical { residual: f64 },
    #[error("LP too large for vertex enumeration: {columns} columns (limit {limit})")]
    TooLarge { columns: usize, limit: usize },
}

/// An LP in the form `max c.x` s.t. equalities, `<=` inequalities, `x >= 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StandardFormLp {
    pub objective: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
}

impl StandardFormLp {
    pub fn maximize(objective: Vec<f64>) -> Self {
        Self {
            objective,
            ..Self::default()
        }
    }

    pub fn equality(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self
    }

    pub fn inequality(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self
    }

    pub fn variables(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.variables();
        if n == 0 {
            return Err(LpError::Malformed("no variables".into()));
        }
        if self.a_eq.len() != self.b_eq.len() || self.a_ub.len() != self.b_ub.len() {
            return Err(LpError::Malformed("row count does not match rhs length".into()));
        }
        for (kind, rows) in [("equality", &self.a_eq), ("inequality", &self.a_ub)] {
            if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                return Err(LpError::Malformed(format!(
                    "{kind} row {i} has {} coefficients, expected {n}",
                    row.len()
                )));
            }
        }
        let finite = self
            .objective
            .iter()
            .chain(self.a_eq.iter().flatten())
            .chain(&self.b_eq)
            .chain(self.a_ub.iter().flatten())
            .chain(&self.b_ub)
            .all(|v| v.is_finite());
        if !finite {
            return Err(LpError::Malformed("non-finite coefficient".into()));
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }

    /// Largest constraint violation of `x` (equalities, inequalities and
    /// nonnegativity), or 0 if `x` is feasible.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let eq = self
            .a_eq
            .iter()
            .zip(&self.b_eq)
            .map(|(row, b)| (dot(row, x) - b).abs());
        let ub = self
            .a_ub
            .iter()
            .zip(&self.b_ub)
            .map(|(row, b)| (dot(row, x) - b).max(0.0));
        let lower = x.iter().map(|v| (-v).max(0.0));
        eq.chain(ub).chain(lower).fold(0.0, f64::max)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        match self {
            LpSolution::Optimal { .. } => LpStatus::Optimal,
            LpSolution::Infeasible => LpStatus::Infeasible,
            LpSolution::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn objective(&self) -> Option<f64> {
        match self {
            LpSolution::Optimal { objective, .. } => Some(*objective),
            _ => None,
        }
    }

    pub fn x(&self) -> Option<&[f64]> {
        match self {
            LpSolution::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}
