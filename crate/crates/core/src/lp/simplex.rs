use super::{LpError, LpSolution, StandardFormLp};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Absolute constraint tolerance, scaled by `1 + max |b|`.
    pub feasibility_tol: f64,
    /// Smallest magnitude accepted as a pivot element.
    pub pivot_tol: f64,
    /// Reduced costs above this make a column eligible to enter.
    pub optimality_tol: f64,
    pub max_iterations: usize,
    /// Size of the right-hand-side perturbation used on the retry path.
    pub perturbation: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: crate::tol::FEASIBILITY,
            pivot_tol: 1e-11,
            optimality_tol: 1e-11,
            max_iterations: 50_000,
            perturbation: 1e-10,
        }
    }
}

pub fn solve_lp(lp: &StandardFormLp) -> Result<LpSolution, LpError> {
    solve_lp_with(lp, &SimplexOptions::default())
}

/// Solves `lp`; if the result fails verification against the original data
/// the solve is repeated once on a slightly perturbed right-hand side.
pub fn solve_lp_with(lp: &StandardFormLp, opts: &SimplexOptions) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let scale = 1.0 + lp.b_eq.iter().chain(&lp.b_ub).fold(0.0f64, |m, b| m.max(b.abs()));
    let limit = opts.feasibility_tol * scale;

    let first = Tableau::build(lp, &lp.b_eq, &lp.b_ub).solve(lp, opts);
    let residual = match &first {
        Ok(LpSolution::Optimal { x, .. }) => lp.max_violation(x),
        Ok(_) => return first,
        Err(LpError::IterationLimit(_)) => f64::INFINITY,
        Err(_) => return first,
    };
    if residual <= limit {
        return first;
    }

    let rows = (lp.b_eq.len() + lp.b_ub.len()).max(1) as f64;
    let shift = |i: usize| opts.perturbation * (1.0 + i as f64 / rows);
    let b_eq: Vec<f64> = lp.b_eq.iter().enumerate().map(|(i, b)| b + shift(i)).collect();
    let offset = lp.b_eq.len();
    let b_ub: Vec<f64> = lp
        .b_ub
        .iter()
        .enumerate()
        .map(|(i, b)| b + shift(offset + i))
        .collect();
    match Tableau::build(lp, &b_eq, &b_ub).solve(lp, opts)? {
        LpSolution::Optimal { x, objective } => {
            let residual = lp.max_violation(&x);
            if residual <= limit {
                Ok(LpSolution::Optimal { x, objective })
            } else {
                Err(LpError::Numerical { residual })
            }
        }
        other => Ok(other),
    }
}

struct Tableau {
    /// Row-major `(rows + 1) x (cols + 1)`; the last row holds reduced costs,
    /// the last column the right-hand side.
    cells: Vec<f64>,
    rows: usize,
    cols: usize,
    basis: Vec<usize>,
    active: Vec<bool>,
    structural: usize,
    first_artificial: usize,
    feasibility_scale: f64,
}

impl Tableau {
    fn build(lp: &StandardFormLp, b_eq: &[f64], b_ub: &[f64]) -> Self {
        let n = lp.variables();
        let n_eq = lp.a_eq.len();
        let n_ub = lp.a_ub.len();
        let rows = n_eq + n_ub;

        // Rows that cannot start with a slack in the basis get an artificial.
        let needs_artificial: Vec<bool> = (0..rows)
            .map(|i| i < n_eq || b_ub[i - n_eq] < 0.0)
            .collect();
        let n_art = needs_artificial.iter().filter(|&&a| a).count();
        let first_artificial = n + n_ub;
        let cols = first_artificial + n_art;
        let width = cols + 1;

        let mut cells = vec![0.0; (rows + 1) * width];
        let mut basis = vec![0; rows];
        let mut next_art = first_artificial;
        for i in 0..rows {
            let (coeffs, rhs) = if i < n_eq {
                (&lp.a_eq[i], b_eq[i])
            } else {
                (&lp.a_ub[i - n_eq], b_ub[i - n_eq])
            };
            let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
            let row = &mut cells[i * width..(i + 1) * width];
            for (cell, a) in row.iter_mut().zip(coeffs) {
                *cell = sign * a;
            }
            if i >= n_eq {
                row[n + i - n_eq] = sign;
            }
            row[cols] = sign * rhs;
            if needs_artificial[i] {
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            } else {
                basis[i] = n + i - n_eq;
            }
        }
        let feasibility_scale =
            1.0 + b_eq.iter().chain(b_ub).fold(0.0f64, |m, b| m.max(b.abs()));
        Self {
            cells,
            rows,
            cols,
            basis,
            active: vec![true; rows],
            structural: n,
            first_artificial,
            feasibility_scale,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * (self.cols + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn solve(mut self, lp: &StandardFormLp, opts: &SimplexOptions) -> Result<LpSolution, LpError> {
        let mut iterations = 0;

        if self.first_artificial < self.cols {
            let cost: Vec<f64> = (0..self.cols)
                .map(|j| if j >= self.first_artificial { -1.0 } else { 0.0 })
                .collect();
            self.load_costs(&cost);
            let bounded = self.iterate(self.cols, opts, &mut iterations)?;
            debug_assert!(bounded, "phase one is bounded below by zero");
            let infeasibility = self.rhs(self.rows);
            if infeasibility > opts.feasibility_tol * self.feasibility_scale {
                return Ok(LpSolution::Infeasible);
            }
            self.drive_out_artificials(opts);
        }

        let mut cost = vec![0.0; self.cols];
        cost[..self.structural].copy_from_slice(&lp.objective);
        self.load_costs(&cost);
        if !self.iterate(self.first_artificial, opts, &mut iterations)? {
            return Ok(LpSolution::Unbounded);
        }

        let mut x = vec![0.0; self.structural];
        for i in (0..self.rows).filter(|&i| self.active[i]) {
            if self.basis[i] < self.structural {
                x[self.basis[i]] = self.rhs(i);
            }
        }
        for v in &mut x {
            if *v < 0.0 && *v >= -opts.feasibility_tol {
                *v = 0.0;
            }
        }
        let objective = lp.value(&x);
        Ok(LpSolution::Optimal { x, objective })
    }

    /// Writes `cost - cost_B B^-1 A` into the objective row.
    fn load_costs(&mut self, cost: &[f64]) {
        let width = self.cols + 1;
        let obj = self.rows * width;
        self.cells[obj..obj + self.cols].copy_from_slice(&cost[..self.cols]);
        self.cells[obj + self.cols] = 0.0;
        for i in (0..self.rows).filter(|&i| self.active[i]) {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..width {
                    self.cells[obj + j] -= cb * self.cells[i * width + j];
                }
            }
        }
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false if unbounded.
    fn iterate(
        &mut self,
        allowed: usize,
        opts: &SimplexOptions,
        iterations: &mut usize,
    ) -> Result<bool, LpError> {
        loop {
            let Some(entering) =
                (0..allowed).find(|&j| self.at(self.rows, j) > opts.optimality_tol)
            else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in (0..self.rows).filter(|&i| self.active[i]) {
                let a = self.at(i, entering);
                if a <= opts.pivot_tol {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((best, best_ratio)) => {
                        let eps = 1e-12 * (1.0 + best_ratio.abs());
                        if ratio < best_ratio - eps
                            || (ratio <= best_ratio + eps && self.basis[i] < self.basis[best])
                        {
                            Some((i, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            let Some((row, _)) = leaving else {
                return Ok(false);
            };
            *iterations += 1;
            if *iterations > opts.max_iterations {
                return Err(LpError::IterationLimit(opts.max_iterations));
            }
            self.pivot(row, entering);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.cols + 1;
        let p = self.at(row, col);
        for j in 0..width {
            self.cells[row * width + j] /= p;
        }
        for i in 0..=self.rows {
            if i == row {
                continue;
            }
            let factor = self.cells[i * width + col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..width {
                self.cells[i * width + j] -= factor * self.cells[row * width + j];
            }
            self.cells[i * width + col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are linearly dependent and get dropped.
    fn drive_out_artificials(&mut self, opts: &SimplexOptions) {
        for i in 0..self.rows {
            if !self.active[i] || self.basis[i] < self.first_artificial {
                continue;
            }
            let candidate = (0..self.first_artificial)
                .filter(|&j| self.at(i, j).abs() > opts.pivot_tol)
                .max_by(|&a, &b| self.at(i, a).abs().total_cmp(&self.at(i, b).abs()));
            match candidate {
                Some(j) => self.pivot(i, j),
                None => self.active[i] = false,
            }
        }
    }
}
