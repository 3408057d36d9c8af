use crate::error::Result;
use crate::rates::analyze;
use crate::scenario::{PolicyVector, Scenario};
use crate::sim::{simulate, SimConfig, SimMode};

/// A rate matches when it is within `relative` of the analytic value or
/// within `absolute` of it, whichever is looser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            relative: 0.02,
            absolute: 2e-3,
        }
    }
}

impl Tolerance {
    pub fn accepts(&self, analytic: f64, empirical: f64) -> bool {
        let delta = (empirical - analytic).abs();
        delta <= self.absolute || delta <= self.relative * analytic.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateComparison {
    pub name: &'static str,
    pub analytic: f64,
    pub empirical: f64,
    pub abs_delta: f64,
    /// `abs_delta / |analytic|`, infinite when the analytic value is zero
    /// and the estimate is not.
    pub rel_delta: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub horizon: u64,
    pub seed: u64,
    pub tolerance: Tolerance,
    pub rates: Vec<RateComparison>,
}

impl Comparison {
    pub fn pass(&self) -> bool {
        self.rates.iter().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&RateComparison> {
        self.rates.iter().find(|r| r.name == name)
    }
}

/// Simulates the dominant system under `policy` and sets the estimates next
/// to the closed forms.
pub fn compare_sim_vs_analytic(
    scenario: &Scenario,
    policy: &PolicyVector,
    horizon: u64,
    seed: u64,
    tolerance: Tolerance,
) -> Result<Comparison> {
    let analytic = analyze(scenario, policy)?;
    let config = SimConfig::new(scenario.clone(), policy.clone(), SimMode::Dominant, horizon, seed)
        .with_warmup(horizon / 100);
    let r = simulate(&config)?;
    let pairs = [
        ("mu_s", analytic.mu_s, r.mu_s),
        ("mu_p", analytic.mu_p, r.mu_p),
        ("mu_se", analytic.mu_se, r.mu_se),
        ("prob_pe_empty", analytic.prob_pe_empty, r.prob_pe_empty),
        ("prob_se_nonempty", analytic.x_tilde_se, r.prob_se_nonempty),
    ];
    let rates = pairs
        .into_iter()
        .map(|(name, analytic, empirical)| {
            let abs_delta = (empirical - analytic).abs();
            let rel_delta = if abs_delta == 0.0 {
                0.0
            } else if analytic == 0.0 {
                f64::INFINITY
            } else {
                abs_delta / analytic.abs()
            };
            RateComparison {
                name,
                analytic,
                empirical,
                abs_delta,
                rel_delta,
                pass: tolerance.accepts(analytic, empirical),
            }
        })
        .collect();
    Ok(Comparison {
        horizon,
        seed,
        tolerance,
        rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_point_agrees() {
        let s = Scenario::table_one();
        let c = compare_sim_vs_analytic(&s, &PolicyVector::uniform(10).unwrap(), 400_000, 7, Tolerance::default()).unwrap();
        assert!(c.pass(), "{c:#?}");
        assert_eq!(c.rates.len(), 5);
        assert!(c.get("mu_s").unwrap().rel_delta < 0.02);
    }

    #[test]
    fn tolerance_floor() {
        let t = Tolerance::default();
        assert!(t.accepts(0.0, 1e-3));
        assert!(!t.accepts(0.0, 1e-2));
        assert!(t.accepts(1.0, 1.015));
        assert!(!t.accepts(1.0, 1.03));
    }
}
