//! Closed-form mean service rates of the dominant system.
//!
//! In the dominant system both transmitters send dummy packets when their
//! data buffers are empty. The primary energy queue is then drained every
//! slot, so `Pr{Q_pe = 0} = 1 - lambda_pe`, and the secondary energy queue is
//! a discrete-time Bernoulli/Bernoulli queue with service probability
//! `mu_se`. All rates below are packets per slot.

use crate::error::Result;
use crate::scenario::{PolicyVector, Scenario};

/// Per-duration coefficients shared by the analytics and the optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct DurationTerms {
    /// Probability that the CR spends an energy packet:
    /// `lambda_pe P_MD + (1 - lambda_pe)(1 - P_FA)`.
    pub energy_use: Vec<f64>,
    /// `(1 - P_out_s)(1 - P_FA)`.
    pub success: Vec<f64>,
    /// `P_MD = 1 - P_D`.
    pub misdetection: Vec<f64>,
}

impl DurationTerms {
    pub fn new(scenario: &Scenario) -> Self {
        let lambda_pe = scenario.arrivals().primary_energy;
        let table = scenario.table();
        Self {
            energy_use: table
                .iter()
                .map(|o| lambda_pe * o.misdetection() + (1.0 - lambda_pe) * (1.0 - o.false_alarm))
                .collect(),
            success: table
                .iter()
                .map(|o| (1.0 - o.secondary_outage) * (1.0 - o.false_alarm))
                .collect(),
            misdetection: table.iter().map(|o| o.misdetection()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRates {
    /// Always 1: the backlogged PU drains one energy packet per slot.
    pub primary: f64,
    pub secondary: f64,
}

pub fn energy_rates(scenario: &Scenario, policy: &PolicyVector) -> Result<EnergyRates> {
    policy.check_matches(scenario)?;
    let terms = DurationTerms::new(scenario);
    Ok(EnergyRates {
        primary: 1.0,
        secondary: policy.expect(|m| terms.energy_use[m]),
    })
}

/// Probability that the secondary energy queue is nonempty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupancy {
    /// `lambda_se / mu_se`; `+inf` when the queue is never served but fed.
    pub raw: f64,
    /// `min(raw, 1)`.
    pub capped: f64,
}

impl Occupancy {
    /// The energy queue is fed but never drained.
    pub fn is_starved_of_service(&self) -> bool {
        self.raw.is_infinite()
    }
}

pub fn secondary_energy_occupancy(lambda_se: f64, mu_se: f64) -> Occupancy {
    let raw = if mu_se > 0.0 {
        lambda_se / mu_se
    } else if lambda_se > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Occupancy {
        raw,
        capped: raw.min(1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataRates {
    pub primary: f64,
    pub secondary: f64,
}

pub fn data_rates(scenario: &Scenario, policy: &PolicyVector) -> Result<DataRates> {
    Ok(analyze(scenario, policy)?.data())
}

/// All closed-form quantities for one scenario and policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticRates {
    pub mu_p: f64,
    pub mu_s: f64,
    pub mu_pe: f64,
    pub mu_se: f64,
    pub x_se: f64,
    pub x_tilde_se: f64,
    pub prob_pe_empty: f64,
    /// Set when `mu_se = 0 < lambda_se`: energy piles up but the CR never
    /// transmits, so `mu_s` is reported as 0.
    pub energy_never_spent: bool,
}

impl AnalyticRates {
    pub fn data(&self) -> DataRates {
        DataRates {
            primary: self.mu_p,
            secondary: self.mu_s,
        }
    }
}

pub fn analyze(scenario: &Scenario, policy: &PolicyVector) -> Result<AnalyticRates> {
    policy.check_matches(scenario)?;
    let terms = DurationTerms::new(scenario);
    let arrivals = scenario.arrivals();
    let lambda_pe = arrivals.primary_energy;

    let mu_se = policy.expect(|m| terms.energy_use[m]);
    let occupancy = secondary_energy_occupancy(arrivals.secondary_energy, mu_se);
    let x_tilde = occupancy.capped;

    let collision = x_tilde * policy.expect(|m| terms.misdetection[m]);
    let mu_p = lambda_pe * (1.0 - scenario.primary_outage()) * (1.0 - collision);
    let mu_s = if occupancy.is_starved_of_service() {
        0.0
    } else {
        x_tilde * (1.0 - lambda_pe) * policy.expect(|m| terms.success[m])
    };

    Ok(AnalyticRates {
        mu_p,
        mu_s,
        mu_pe: 1.0,
        mu_se,
        x_se: occupancy.raw,
        x_tilde_se: x_tilde,
        prob_pe_empty: 1.0 - lambda_pe,
        energy_never_spent: occupancy.is_starved_of_service(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SensingOption;
    use crate::scenario::{ArrivalParam, Arrivals};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn table_one(lambda_pe: f64, lambda_se: f64) -> Scenario {
        let base = Scenario::table_one();
        base.with_arrivals(Arrivals {
            primary_energy: lambda_pe,
            secondary_energy: lambda_se,
            ..*base.arrivals()
        })
        .unwrap()
    }

    #[test]
    fn idle_primary_and_perfect_sensor_always_spends() {
        let table = (1..=3)
            .map(|i| SensingOption::new(i, 0.0, 0.8, 0.0, 0.2).unwrap())
            .collect();
        let s = Scenario::new(Arrivals::new(0.1, 0.1, 0.0, 0.5), 0.3, table).unwrap();
        for policy in [PolicyVector::uniform(3).unwrap(), PolicyVector::point_mass(3, 2).unwrap()] {
            let e = energy_rates(&s, &policy).unwrap();
            assert_eq!(e.primary, 1.0);
            assert_abs_diff_eq!(e.secondary, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn energy_rate_hand_substitution() {
        let s = table_one(0.2, 0.4);
        let first = PolicyVector::point_mass(10, 0).unwrap();
        // 0.2 * 0.3 + 0.8 * 0.95
        assert_abs_diff_eq!(energy_rates(&s, &first).unwrap().secondary, 0.82, epsilon = 1e-12);
        // 0.2 * 0.153 + 0.8 * 0.91
        let uniform = PolicyVector::uniform(10).unwrap();
        assert_abs_diff_eq!(energy_rates(&s, &uniform).unwrap().secondary, 0.7586, epsilon = 1e-12);
    }

    #[test]
    fn occupancy_cases() {
        let o = secondary_energy_occupancy(0.4, 0.82);
        assert_abs_diff_eq!(o.raw, 0.487_804_878_048_780_5, epsilon = 1e-12);
        assert_eq!(o.raw, o.capped);
        assert_eq!(secondary_energy_occupancy(1.0, 0.82).capped, 1.0);
        assert_eq!(secondary_energy_occupancy(0.0, 0.82).capped, 0.0);
        assert_eq!(secondary_energy_occupancy(0.0, 0.0).raw, 0.0);
        let starved = secondary_energy_occupancy(0.3, 0.0);
        assert!(starved.is_starved_of_service());
        assert_eq!(starved.capped, 1.0);
        // boundary: both regimes agree
        assert_eq!(secondary_energy_occupancy(0.5, 0.5).capped, 1.0);
    }

    #[test]
    fn data_rate_chained_substitution() {
        let s = table_one(0.2, 0.4);
        let r = analyze(&s, &PolicyVector::point_mass(10, 0).unwrap()).unwrap();
        let x = 0.4 / 0.82;
        assert_abs_diff_eq!(r.x_tilde_se, x, epsilon = 1e-12);
        assert_abs_diff_eq!(r.mu_s, x * 0.8 * 0.9 * 0.95, epsilon = 1e-12);
        assert_abs_diff_eq!(r.mu_p, 0.2 * 0.7 * (1.0 - x * 0.3), epsilon = 1e-12);
        assert_abs_diff_eq!(r.mu_s, 0.33366, epsilon = 5e-6);
        assert_abs_diff_eq!(r.mu_p, 0.11951, epsilon = 5e-6);
        assert_abs_diff_eq!(r.prob_pe_empty, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn primary_without_energy_never_served() {
        let s = table_one(0.0, 0.4);
        let p = PolicyVector::uniform(10).unwrap();
        let r = analyze(&s, &p).unwrap();
        assert_eq!(r.mu_p, 0.0);
        let expected = r.x_tilde_se * p.expect(|m| {
            let o = &s.table()[m];
            (1.0 - o.secondary_outage) * (1.0 - o.false_alarm)
        });
        assert_abs_diff_eq!(r.mu_s, expected, epsilon = 1e-15);
    }

    #[test]
    fn always_energetic_primary_blocks_secondary() {
        let s = table_one(1.0, 0.4);
        let r = analyze(&s, &PolicyVector::uniform(10).unwrap()).unwrap();
        assert_eq!(r.mu_s, 0.0);
    }

    #[test]
    fn never_spending_energy_is_flagged() {
        // P_D = 1 and P_FA = 1: the CR always defers.
        let table = vec![SensingOption::new(1, 0.0, 1.0, 1.0, 0.2).unwrap()];
        let s = Scenario::new(Arrivals::new(0.1, 0.1, 0.5, 0.3), 0.3, table).unwrap();
        let r = analyze(&s, &PolicyVector::point_mass(1, 0).unwrap()).unwrap();
        assert!(r.energy_never_spent);
        assert_eq!(r.mu_s, 0.0);
        assert_eq!(r.mu_se, 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let s = Scenario::table_one();
        assert!(analyze(&s, &PolicyVector::uniform(3).unwrap()).is_err());
        assert!(energy_rates(&s, &PolicyVector::uniform(11).unwrap()).is_err());
    }

    fn policy_strategy(m: usize) -> impl Strategy<Value = PolicyVector> {
        prop::collection::vec(0.0f64..1.0, m)
            .prop_filter("mass", |w| w.iter().sum::<f64>() > 1e-3)
            .prop_map(|w| PolicyVector::from_weights(&w, 0.0).unwrap())
    }

    proptest! {
        #[test]
        fn rates_are_bounded(
            policy in policy_strategy(10),
            lambda_pe in 0.0f64..=1.0,
            lambda_se in 0.0f64..=1.0,
        ) {
            let s = table_one(lambda_pe, lambda_se);
            let r = analyze(&s, &policy).unwrap();
            let best_success = s.table().iter()
                .map(|o| (1.0 - o.secondary_outage) * (1.0 - o.false_alarm))
                .fold(0.0, f64::max);
            prop_assert!(r.mu_p >= 0.0 && r.mu_p <= lambda_pe * 0.7 + 1e-15);
            prop_assert!(r.mu_s >= 0.0 && r.mu_s <= (1.0 - lambda_pe) * best_success + 1e-15);
            prop_assert!((0.0..=1.0).contains(&r.mu_se));
            prop_assert!((0.0..=1.0).contains(&r.x_tilde_se));
            prop_assert_eq!(r.x_tilde_se, r.x_se.min(1.0));
        }

        #[test]
        fn secondary_rate_grows_with_harvesting(
            policy in policy_strategy(10),
            lambda_pe in 0.0f64..=1.0,
            a in 0.0f64..=1.0,
            b in 0.0f64..=1.0,
        ) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let s = table_one(lambda_pe, lo);
            let r_lo = analyze(&s, &policy).unwrap();
            let r_hi = analyze(&s.with_param(ArrivalParam::SecondaryEnergy, hi).unwrap(), &policy).unwrap();
            prop_assert!(r_hi.mu_s >= r_lo.mu_s - 1e-15);
        }

        #[test]
        fn rates_are_affine_for_fixed_occupancy(
            p in policy_strategy(10),
            q in policy_strategy(10),
            theta in 0.0f64..=1.0,
            lambda_pe in 0.0f64..=1.0,
        ) {
            // Saturated energy queue: X~ = 1 for every policy.
            let s = table_one(lambda_pe, 1.0);
            let mix: Vec<f64> = p.as_slice().iter().zip(q.as_slice())
                .map(|(a, b)| theta * a + (1.0 - theta) * b).collect();
            let mix = PolicyVector::from_weights(&mix, 0.0).unwrap();
            let (rp, rq, rm) = (analyze(&s, &p).unwrap(), analyze(&s, &q).unwrap(), analyze(&s, &mix).unwrap());
            prop_assert!((rm.mu_s - (theta * rp.mu_s + (1.0 - theta) * rq.mu_s)).abs() < 1e-12);
            prop_assert!((rm.mu_p - (theta * rp.mu_p + (1.0 - theta) * rq.mu_p)).abs() < 1e-12);
        }
    }
}
