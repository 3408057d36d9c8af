use super::*;
use crate::rates::analyze;
use crate::scenario::Arrivals;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table_one(lambda_p: f64, lambda_s: f64, lambda_pe: f64, lambda_se: f64) -> Scenario {
    Scenario::table_one()
        .with_arrivals(Arrivals::new(lambda_p, lambda_s, lambda_pe, lambda_se))
        .unwrap()
}

fn first_duration() -> PolicyVector {
    PolicyVector::point_mass(10, 0).unwrap()
}

#[test]
fn no_arrivals_no_activity() {
    let s = table_one(0.0, 0.0, 0.0, 0.0);
    for mode in [SimMode::Original, SimMode::Dominant, SimMode::Coupled] {
        let r = simulate(&SimConfig::new(s.clone(), first_duration(), mode, 10_000, 1)).unwrap();
        assert_eq!(r.mean_length, [0.0; 4]);
        assert_eq!(r.throughput, [0.0; 4]);
        assert_eq!(r.mu_s, 0.0);
        assert_eq!(r.mu_p, 0.0);
        // dummy packets give the dominant CR service opportunities regardless
        if mode == SimMode::Original {
            assert_eq!(r.mu_se, 0.0);
        }
        assert_eq!(r.collisions, 0);
        if mode == SimMode::Coupled {
            assert_eq!(r.dominance_violations, Some(0));
        }
    }
}

#[test]
fn dominant_primary_energy_empty_probability() {
    let s = table_one(0.1, 0.1, 0.4, 0.4);
    let r = simulate(&SimConfig::new(s, first_duration(), SimMode::Dominant, 1_000_000, 11)).unwrap();
    assert!((r.prob_pe_empty - 0.6).abs() < 0.005, "{}", r.prob_pe_empty);
    assert_eq!(r.mu_pe, 1.0);
}

#[test]
fn dominant_rates_match_analytics() {
    let s = table_one(0.1, 0.1, 0.2, 0.4);
    let cfg = SimConfig::new(s.clone(), first_duration(), SimMode::Dominant, 1_000_000, 3).with_warmup(1000);
    let r = simulate(&cfg).unwrap();
    let a = analyze(&s, &first_duration()).unwrap();
    assert!((r.mu_s - 0.33366).abs() / 0.33366 < 0.01, "{}", r.mu_s);
    assert!((r.mu_p - 0.11951).abs() / 0.11951 < 0.01, "{}", r.mu_p);
    // mu_se is a plain Bernoulli mean in the dominant system
    let se = (a.mu_se * (1.0 - a.mu_se) / r.measured_slots as f64).sqrt();
    assert!((r.mu_se - a.mu_se).abs() < 3.0 * se, "{} vs {}", r.mu_se, a.mu_se);
    assert!((r.prob_se_nonempty - a.x_tilde_se).abs() < 0.01);
}

#[test]
fn uniform_policy_energy_rate() {
    let s = table_one(0.1, 0.1, 0.2, 0.4);
    let policy = PolicyVector::uniform(10).unwrap();
    let r = simulate(&SimConfig::new(s, policy, SimMode::Dominant, 1_000_000, 5)).unwrap();
    assert!((r.mu_se - 0.7586).abs() / 0.7586 < 0.01);
}

#[test]
fn same_seed_same_report() {
    let s = table_one(0.1, 0.2, 0.4, 0.4);
    for mode in [SimMode::Original, SimMode::Dominant, SimMode::Coupled] {
        let cfg = SimConfig::new(s.clone(), PolicyVector::uniform(10).unwrap(), mode, 50_000, 99).with_warmup(100);
        assert_eq!(simulate(&cfg).unwrap(), simulate(&cfg).unwrap());
    }
    let a = simulate(&SimConfig::new(s.clone(), first_duration(), SimMode::Original, 50_000, 1)).unwrap();
    let b = simulate(&SimConfig::new(s, first_duration(), SimMode::Original, 50_000, 2)).unwrap();
    assert_ne!(a, b);
}

#[test]
fn invalid_configs() {
    let s = Scenario::table_one();
    assert!(simulate(&SimConfig::new(s.clone(), first_duration(), SimMode::Dominant, 10, 0).with_warmup(10)).is_err());
    assert!(simulate(&SimConfig::new(s.clone(), PolicyVector::uniform(3).unwrap(), SimMode::Dominant, 10, 0)).is_err());
    let not_coupled = SimConfig::new(s, first_duration(), SimMode::Dominant, 10, 0);
    assert!(coupled_dominance_run(&not_coupled).is_err());
    assert!("sideways".parse::<SimMode>().is_err());
}

#[test]
fn duration_draws_follow_policy() {
    let s = Scenario::table_one();
    let policy = PolicyVector::new(vec![0.0, 0.25, 0.0, 0.0, 0.75, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let mut stream = DrawStream::new(&s, &policy, 42);
    let mut counts = [0u32; 10];
    for _ in 0..100_000 {
        counts[stream.next_slot().duration] += 1;
    }
    assert_eq!(counts[0] + counts[2] + counts[3] + counts[5..].iter().sum::<u32>(), 0);
    let share = counts[1] as f64 / 100_000.0;
    assert!((share - 0.25).abs() < 0.01);
}

/// Per-slot invariants checked on random draws in both modes.
#[test]
fn slot_invariants_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..40 {
        let lambdas: [f64; 4] = std::array::from_fn(|_| rng.gen());
        let s = table_one(lambdas[0], lambdas[1], lambdas[2], lambdas[3]);
        let w: Vec<f64> = (0..10).map(|_| rng.gen()).collect();
        let policy = PolicyVector::from_weights(&w, 0.0).unwrap();
        for dominant in [false, true] {
            let initial = QueueState {
                primary: rng.gen_range(0..3),
                secondary: rng.gen_range(0..3),
                primary_energy: rng.gen_range(0..3),
                secondary_energy: rng.gen_range(0..3),
            };
            let mut system = QueueSystem::new(initial, dominant);
            let mut stream = DrawStream::new(&s, &policy, case);
            let mut harvested = [initial.primary_energy, initial.secondary_energy];
            let mut spent = [0u64; 2];
            for _ in 0..5_000 {
                let d = stream.next_slot();
                let out = system.step(&d);
                let q = out.start;
                if out.primary_transmits {
                    assert!(q.primary_energy > 0);
                    assert!(dominant || q.primary > 0);
                }
                if out.secondary_transmits {
                    assert!(q.secondary_energy > 0);
                    assert!(dominant || q.secondary > 0);
                }
                // collision channel: a CR success never overlaps a PU transmission
                assert!(!(out.service.secondary && out.primary_transmits));
                if out.departures[0] {
                    assert!(out.primary_transmits && !out.secondary_transmits);
                }
                spent[0] += u64::from(out.departures[2]);
                spent[1] += u64::from(out.departures[3]);
                harvested[0] += u64::from(d.arrivals[2]);
                harvested[1] += u64::from(d.arrivals[3]);
                assert!(spent[0] <= harvested[0] && spent[1] <= harvested[1]);
                let next = system.state();
                assert_eq!(next.primary_energy, harvested[0] - spent[0]);
                assert_eq!(next.secondary_energy, harvested[1] - spent[1]);
            }
        }
    }
}

#[test]
fn late_arrivals_wait_one_slot() {
    let mut system = QueueSystem::new(QueueState::default(), false);
    let all = SlotDraws {
        arrivals: [true; 4],
        duration: 0,
        detected: true,
        false_alarm: false,
        primary_channel_on: true,
        secondary_channel_on: true,
    };
    let out = system.step(&all);
    assert_eq!(out.departures, [false; 4]);
    assert_eq!(system.state().as_array(), [1, 1, 1, 1]);
    let quiet = SlotDraws { arrivals: [false; 4], ..all };
    let out = system.step(&quiet);
    // PU active and detected: PU served, CR defers
    assert_eq!(out.departures, [true, false, true, false]);
}

/// The CR of the dominant system burns energy on dummy packets, so later it
/// can be out of energy where the original CR still interferes. Three slots
/// suffice for the original primary queue to exceed the dominant one.
#[test]
fn original_can_outrun_dominant_when_dummy_packets_drain_energy() {
    let base = SlotDraws {
        arrivals: [false; 4],
        duration: 0,
        detected: true,
        false_alarm: false,
        primary_channel_on: true,
        secondary_channel_on: true,
    };
    let trace = [
        SlotDraws { arrivals: [false, false, false, true], ..base },
        SlotDraws { arrivals: [true, true, true, false], ..base },
        SlotDraws { detected: false, ..base },
    ];
    let mut original = QueueSystem::new(QueueState::default(), false);
    let mut dominant = QueueSystem::new(QueueState::default(), true);
    for d in &trace {
        original.step(d);
        dominant.step(d);
    }
    assert_eq!(original.state().primary, 1);
    assert_eq!(dominant.state().primary, 0);
}

#[test]
fn stability_verdicts() {
    let s = table_one(0.1, 0.1, 0.2, 0.4);
    let r = simulate(&SimConfig::new(s.clone(), first_duration(), SimMode::Original, 1_000_000, 8)).unwrap();
    let v = stability_diagnostic(&r, &s).unwrap();
    assert_eq!(v.primary.verdict, Verdict::Stable);
    assert!(v.primary.drift_slope.abs() < 1e-4);

    let overloaded = table_one(0.5, 0.1, 0.2, 0.4);
    let r = simulate(&SimConfig::new(overloaded.clone(), first_duration(), SimMode::Dominant, 1_000_000, 8)).unwrap();
    let v = stability_diagnostic(&r, &overloaded).unwrap();
    assert_eq!(v.primary.verdict, Verdict::Unstable);
    let analytic = analyze(&overloaded, &first_duration()).unwrap();
    let expected_slope = 0.5 - analytic.mu_p;
    assert!((v.primary.drift_slope - expected_slope).abs() < 0.02 * expected_slope, "{}", v.primary.drift_slope);

    let idle = table_one(0.0, 0.0, 0.2, 0.4);
    let r = simulate(&SimConfig::new(idle.clone(), first_duration(), SimMode::Original, 1_000_000, 8)).unwrap();
    assert_eq!(stability_diagnostic(&r, &idle).unwrap().primary.verdict, Verdict::Stable);

    let short = simulate(&SimConfig::new(s.clone(), first_duration(), SimMode::Original, 1000, 8)).unwrap();
    assert!(matches!(stability_diagnostic(&short, &s), Err(Error::RunTooShort { .. })));
}
