//! Optimal randomized sensing-duration selection.
//!
//! The CR picks duration `m` with probability `P_m` and maximizes its mean
//! service rate `mu_s` subject to the primary queue staying stable,
//! `lambda_p <= mu_p`. Whether the secondary energy queue saturates splits
//! the problem in two:
//!
//! * constrained regime (`lambda_se <= mu_se`): `X_se = lambda_se / mu_se(P)`
//!   and `mu_s` is a ratio of affine functions of `P`. After multiplying the
//!   primary constraint through by `mu_se(P) > 0` every constraint is linear,
//!   so the Charnes-Cooper substitution `t = 1 / mu_se(P)`, `y = t P` turns
//!   it into an LP.
//! * overflow regime (`lambda_se >= mu_se`): `X~_se = 1` and everything is
//!   linear in `P`; `lambda_se` only appears in the regime constraint.
//!
//! The better of the two feasible solutions wins; on a tie the overflow
//! solution is returned.

use crate::error::{Error, Result};
use crate::lp::{dot, solve_lp, LpSolution, StandardFormLp};
use crate::rates::{analyze, AnalyticRates, DurationTerms};
use crate::scenario::{PolicyVector, Scenario};
use crate::tol;

/// Which energy-queue regime a subproblem covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `lambda_se <= mu_se`: the energy queue is stable.
    Constrained,
    /// `lambda_se >= mu_se`: the energy queue is always nonempty.
    Overflow,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Constrained => "constrained",
            Regime::Overflow => "overflow",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemSolution {
    /// Secondary service rate achieved by `policy`.
    pub value: f64,
    pub policy: PolicyVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemResult {
    pub regime: Regime,
    /// `None` when the regime admits no policy meeting the primary constraint.
    pub solution: Option<SubproblemSolution>,
}

impl SubproblemResult {
    pub fn is_feasible(&self) -> bool {
        self.solution.is_some()
    }

    pub fn value(&self) -> Option<f64> {
        self.solution.as_ref().map(|s| s.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizationStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalPolicy {
    pub policy: PolicyVector,
    pub mu_s: f64,
    pub regime: Regime,
    pub rates: AnalyticRates,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationOutcome {
    pub constrained: SubproblemResult,
    pub overflow: SubproblemResult,
    pub best: Option<OptimalPolicy>,
}

impl OptimizationOutcome {
    pub fn status(&self) -> OptimizationStatus {
        if self.best.is_some() {
            OptimizationStatus::Optimal
        } else {
            OptimizationStatus::Infeasible
        }
    }

    /// Maximum secondary service rate; 0 when no policy keeps the PU stable.
    pub fn best_mu_s(&self) -> f64 {
        self.best.as_ref().map_or(0.0, |b| b.mu_s)
    }
}

pub fn solve(scenario: &Scenario) -> Result<OptimizationOutcome> {
    let constrained = solve_constrained_subproblem(scenario)?;
    let overflow = solve_overflow_subproblem(scenario)?;

    let winner = match (&constrained.solution, &overflow.solution) {
        (Some(c), Some(o)) => {
            if c.value > o.value + tol::RELATIVE * o.value.abs().max(1.0) {
                Some((c, Regime::Constrained))
            } else {
                Some((o, Regime::Overflow))
            }
        }
        (Some(c), None) => Some((c, Regime::Constrained)),
        (None, Some(o)) => Some((o, Regime::Overflow)),
        (None, None) => None,
    };
    let best = match winner {
        Some((sol, regime)) => {
            let rates = analyze(scenario, &sol.policy)?;
            Some(OptimalPolicy {
                policy: sol.policy.clone(),
                mu_s: sol.value,
                regime,
                rates,
            })
        }
        None => None,
    };
    Ok(OptimizationOutcome {
        constrained,
        overflow,
        best,
    })
}

/// `kappa = lambda_pe (1 - P_out_p)`: primary service rate without collisions.
fn primary_capacity(scenario: &Scenario) -> f64 {
    scenario.arrivals().primary_energy * (1.0 - scenario.primary_outage())
}

/// Energy-queue-stable regime, solved through [`fractional_to_lp`].
pub fn solve_constrained_subproblem(scenario: &Scenario) -> Result<SubproblemResult> {
    let arrivals = scenario.arrivals();
    let lambda_p = arrivals.primary;
    let lambda_se = arrivals.secondary_energy;
    let kappa = primary_capacity(scenario);
    let m = scenario.durations();
    let regime = Regime::Constrained;

    if lambda_se == 0.0 {
        // X_se = 0: the CR never transmits, so mu_s = 0 and mu_p = kappa for
        // every policy.
        let solution = (lambda_p <= kappa + tol::FEASIBILITY).then(|| SubproblemSolution {
            value: 0.0,
            policy: PolicyVector::point_mass(m, 0).expect("table is nonempty"),
        });
        return Ok(SubproblemResult { regime, solution });
    }

    let terms = DurationTerms::new(scenario);
    let one_minus_pe = 1.0 - arrivals.primary_energy;
    let lfp = LinearFractionalProgram {
        numerator: terms.success.iter().map(|s| lambda_se * one_minus_pe * s).collect(),
        numerator_constant: 0.0,
        denominator: terms.energy_use.clone(),
        denominator_constant: 0.0,
        a_ub: vec![
            // lambda_p mu_se <= kappa (mu_se - lambda_se sum P P_MD)
            (0..m)
                .map(|i| (lambda_p - kappa) * terms.energy_use[i] + kappa * lambda_se * terms.misdetection[i])
                .collect(),
            // lambda_se <= mu_se
            terms.energy_use.iter().map(|d| -d).collect(),
        ],
        b_ub: vec![0.0, -lambda_se],
        a_eq: vec![vec![1.0; m]],
        b_eq: vec![1.0],
    };
    let transformed = fractional_to_lp(&lfp)?;
    let lifted = match solve_lp(&transformed.lp)? {
        LpSolution::Optimal { x, .. } => x,
        LpSolution::Infeasible => return Ok(SubproblemResult { regime, solution: None }),
        LpSolution::Unbounded => {
            return Err(Error::DegenerateFractional(
                "lifted LP is unbounded: the denominator vanishes on the feasible set".into(),
            ))
        }
    };
    let policy = PolicyVector::from_weights(&transformed.recover(&lifted)?, tol::FEASIBILITY)?;

    // Re-derive everything from the recovered policy rather than trusting
    // the lifted variables.
    let mu_se = policy.expect(|i| terms.energy_use[i]);
    let x_se = lambda_se / mu_se;
    check_recovery("lambda_se <= mu_se", lambda_se - mu_se)?;
    let mu_p = kappa * (1.0 - x_se * policy.expect(|i| terms.misdetection[i]));
    check_recovery("lambda_p <= mu_p", lambda_p - mu_p)?;
    let value = x_se * one_minus_pe * policy.expect(|i| terms.success[i]);
    Ok(SubproblemResult {
        regime,
        solution: Some(SubproblemSolution { value, policy }),
    })
}

/// Saturated-energy regime: a plain LP in `P`.
pub fn solve_overflow_subproblem(scenario: &Scenario) -> Result<SubproblemResult> {
    let lp = overflow_lp(scenario);
    let regime = Regime::Overflow;
    let x = match solve_lp(&lp)? {
        LpSolution::Optimal { x, .. } => x,
        LpSolution::Infeasible => return Ok(SubproblemResult { regime, solution: None }),
        LpSolution::Unbounded => unreachable!("the probability simplex is bounded"),
    };
    let policy = PolicyVector::from_weights(&x, tol::FEASIBILITY)?;
    let terms = DurationTerms::new(scenario);
    let arrivals = scenario.arrivals();
    let kappa = primary_capacity(scenario);
    check_recovery(
        "lambda_se >= mu_se",
        policy.expect(|i| terms.energy_use[i]) - arrivals.secondary_energy,
    )?;
    check_recovery(
        "lambda_p <= mu_p",
        arrivals.primary - kappa * (1.0 - policy.expect(|i| terms.misdetection[i])),
    )?;
    let value = (1.0 - arrivals.primary_energy) * policy.expect(|i| terms.success[i]);
    Ok(SubproblemResult {
        regime,
        solution: Some(SubproblemSolution { value, policy }),
    })
}

/// The overflow-regime LP over `P`.
pub fn overflow_lp(scenario: &Scenario) -> StandardFormLp {
    let terms = DurationTerms::new(scenario);
    let arrivals = scenario.arrivals();
    let kappa = primary_capacity(scenario);
    let m = scenario.durations();
    StandardFormLp::maximize(
        terms
            .success
            .iter()
            .map(|s| (1.0 - arrivals.primary_energy) * s)
            .collect(),
    )
    .equality(vec![1.0; m], 1.0)
    // lambda_p <= kappa (1 - sum P P_MD)
    .inequality(
        terms.misdetection.iter().map(|md| kappa * md).collect(),
        kappa - arrivals.primary,
    )
    // mu_se <= lambda_se
    .inequality(terms.energy_use.clone(), arrivals.secondary_energy)
}

fn check_recovery(constraint: &'static str, violation: f64) -> Result<()> {
    if violation > tol::FEASIBILITY {
        Err(Error::Recovery {
            constraint,
            violation,
        })
    } else {
        Ok(())
    }
}

/// `max (c.x + c0) / (d.x + d0)` s.t. `A_ub x <= b_ub`, `A_eq x = b_eq`,
/// `x >= 0`, with the denominator positive on the feasible set.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFractionalProgram {
    pub numerator: Vec<f64>,
    pub numerator_constant: f64,
    pub denominator: Vec<f64>,
    pub denominator_constant: f64,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
}

impl LinearFractionalProgram {
    pub fn variables(&self) -> usize {
        self.numerator.len()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        (dot(&self.numerator, x) + self.numerator_constant)
            / (dot(&self.denominator, x) + self.denominator_constant)
    }
}

/// Lifted LP over `(y, t)` plus the map back to the original variables.
#[derive(Debug, Clone, PartialEq)]
pub struct CharnesCooper {
    pub lp: StandardFormLp,
    variables: usize,
}

impl CharnesCooper {
    /// Index of `t` in the lifted variable vector; `y` occupies `0..t`.
    pub fn scale_index(&self) -> usize {
        self.variables
    }

    /// `x = y / t`. A vanishing `t` means the optimum sits at infinity in the
    /// original variables and is reported, not patched.
    pub fn recover(&self, lifted: &[f64]) -> Result<Vec<f64>> {
        let t = lifted[self.variables];
        if !(t > tol::FEASIBILITY) {
            return Err(Error::DegenerateFractional(format!(
                "scale variable t = {t:e} at the optimum"
            )));
        }
        Ok(lifted[..self.variables].iter().map(|y| y / t).collect())
    }
}

/// Charnes-Cooper transformation: with `t = 1 / (d.x + d0)` and `y = t x`,
///
/// ```text
/// max c.y + c0 t
/// s.t. A_ub y - b_ub t <= 0,  A_eq y - b_eq t = 0,  d.y + d0 t = 1,  y, t >= 0
/// ```
pub fn fractional_to_lp(lfp: &LinearFractionalProgram) -> Result<CharnesCooper> {
    let n = lfp.variables();
    if n == 0 {
        return Err(Error::Empty("linear-fractional program"));
    }
    if lfp.denominator.len() != n
        || lfp.a_ub.iter().chain(&lfp.a_eq).any(|r| r.len() != n)
        || lfp.a_ub.len() != lfp.b_ub.len()
        || lfp.a_eq.len() != lfp.b_eq.len()
    {
        return Err(Error::invalid("linear-fractional program", "inconsistent dimensions"));
    }
    let lift = |row: &[f64], rhs: f64| {
        let mut r = row.to_vec();
        r.push(-rhs);
        r
    };
    let mut objective = lfp.numerator.clone();
    objective.push(lfp.numerator_constant);
    let mut lp = StandardFormLp::maximize(objective);
    let mut normalization = lfp.denominator.clone();
    normalization.push(lfp.denominator_constant);
    lp = lp.equality(normalization, 1.0);
    for (row, &rhs) in lfp.a_eq.iter().zip(&lfp.b_eq) {
        lp = lp.equality(lift(row, rhs), 0.0);
    }
    for (row, &rhs) in lfp.a_ub.iter().zip(&lfp.b_ub) {
        lp = lp.inequality(lift(row, rhs), 0.0);
    }
    Ok(CharnesCooper { lp, variables: n })
}
