use std::io::{self, Write};

use rayon::prelude::*;

use super::compare::{compare_sim_vs_analytic, Comparison, Tolerance};
use crate::error::{Error, Result};
use crate::optimizer::{solve, OptimizationStatus, Regime};
use crate::scenario::{ArrivalParam, Scenario};

/// Decimal places of every float written to a sweep CSV.
pub const CSV_PRECISION: usize = 6;

/// Inclusive grid `start, start + step, ..` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let grid = Self { start, stop, step };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("from", self.start), ("to", self.stop)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(name, format!("{v} is not in [0, 1]")));
            }
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::invalid("step", format!("{} must be positive", self.step)));
        }
        if self.stop < self.start {
            return Err(Error::invalid("to", "must not be below `from`"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        // the slack keeps `stop` when the step divides the range
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| (self.start + i as f64 * self.step).min(self.stop))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimCheck {
    pub horizon: u64,
    pub seed: u64,
    pub tolerance: Tolerance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub param: ArrivalParam,
    pub grid: Grid,
    /// Simulate each optimal policy; point `i` uses seed `seed + i`.
    pub sim: Option<SimCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub status: OptimizationStatus,
    pub mu_s: f64,
    pub mu_p: f64,
    pub mu_se: f64,
    pub x_tilde_se: f64,
    pub regime: Option<Regime>,
    /// All zeros for infeasible points.
    pub policy: Vec<f64>,
    pub sim: Option<Comparison>,
}

/// Solves every grid point, in parallel, returning rows in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.grid.validate()?;
    let m = spec.base.durations();
    spec.grid
        .points()
        .into_par_iter()
        .enumerate()
        .map(|(i, value)| {
            let scenario = spec.base.with_param(spec.param, value)?;
            let outcome = solve(&scenario)?;
            let Some(best) = outcome.best else {
                return Ok(SweepRow {
                    value,
                    status: OptimizationStatus::Infeasible,
                    mu_s: 0.0,
                    mu_p: 0.0,
                    mu_se: 0.0,
                    x_tilde_se: 0.0,
                    regime: None,
                    policy: vec![0.0; m],
                    sim: None,
                });
            };
            let sim = match spec.sim {
                Some(check) => Some(compare_sim_vs_analytic(
                    &scenario,
                    &best.policy,
                    check.horizon,
                    check.seed.wrapping_add(i as u64),
                    check.tolerance,
                )?),
                None => None,
            };
            Ok(SweepRow {
                value,
                status: OptimizationStatus::Optimal,
                mu_s: best.mu_s,
                mu_p: best.rates.mu_p,
                mu_se: best.rates.mu_se,
                x_tilde_se: best.rates.x_tilde_se,
                regime: Some(best.regime),
                policy: best.policy.as_slice().to_vec(),
                sim,
            })
        })
        .collect()
}

/// Writes `rows` as CSV. Simulation columns appear when `with_sim` is set;
/// rows without a simulation leave them empty.
pub fn write_csv<W: Write>(out: &mut W, rows: &[SweepRow], durations: usize, with_sim: bool) -> io::Result<()> {
    let p = CSV_PRECISION;
    let mut header = vec![
        "swept_value".to_string(),
        "status".into(),
        "mu_s".into(),
        "mu_p".into(),
        "mu_se".into(),
        "x_tilde_se".into(),
        "winning_subproblem".into(),
    ];
    header.extend((1..=durations).map(|m| format!("P_{m}")));
    if with_sim {
        header.extend(["sim_mu_s".into(), "sim_mu_p".into(), "sim_pass".into()]);
    }
    writeln!(out, "{}", header.join(","))?;

    for row in rows {
        let status = match row.status {
            OptimizationStatus::Optimal => "optimal",
            OptimizationStatus::Infeasible => "infeasible",
        };
        let mut fields = vec![
            format!("{:.p$}", row.value),
            status.to_string(),
            format!("{:.p$}", row.mu_s),
            format!("{:.p$}", row.mu_p),
            format!("{:.p$}", row.mu_se),
            format!("{:.p$}", row.x_tilde_se),
            row.regime.map_or("none", Regime::name).to_string(),
        ];
        fields.extend(row.policy.iter().map(|x| format!("{x:.p$}")));
        if with_sim {
            match &row.sim {
                Some(c) => {
                    let est = |name| c.get(name).map_or(f64::NAN, |r| r.empirical);
                    fields.push(format!("{:.p$}", est("mu_s")));
                    fields.push(format!("{:.p$}", est("mu_p")));
                    let pass = ["mu_s", "mu_p"].iter().all(|n| c.get(n).is_some_and(|r| r.pass));
                    fields.push(pass.to_string());
                }
                None => fields.extend([String::new(), String::new(), String::new()]),
            }
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = Grid::new(0.0, 1.0, 0.1).unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 11);
        assert_eq!(*pts.last().unwrap(), 1.0);
        assert_eq!(Grid::new(0.3, 0.3, 0.1).unwrap().points(), vec![0.3]);
        assert_eq!(Grid::new(0.0, 0.25, 0.1).unwrap().points().len(), 3);
        assert!(Grid::new(0.0, 1.5, 0.1).is_err());
        assert!(Grid::new(0.0, 1.0, 0.0).is_err());
        assert!(Grid::new(0.5, 0.2, 0.1).is_err());
    }

    #[test]
    fn infeasible_rows_are_zero_filled() {
        let spec = SweepSpec {
            base: Scenario::table_one(),
            param: ArrivalParam::Primary,
            grid: Grid::new(0.0, 0.5, 0.25).unwrap(),
            sim: None,
        };
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 3);
        let last = rows.last().unwrap();
        assert_eq!(last.status, OptimizationStatus::Infeasible);
        assert_eq!(last.policy, vec![0.0; 10]);
        for row in rows.iter().filter(|r| r.status == OptimizationStatus::Optimal) {
            assert!((row.policy.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }

        let mut buf = Vec::new();
        write_csv(&mut buf, &rows, 10, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("swept_value,status,mu_s,mu_p,mu_se,x_tilde_se,winning_subproblem,P_1,"));
        assert!(lines[0].ends_with(",P_10"));
        assert!(lines[3].starts_with("0.500000,infeasible,0.000000,"));
        assert!(lines.iter().all(|l| l.split(',').count() == 17));
    }
}
