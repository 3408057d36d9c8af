// Stability verdicts from long original-system runs.

use ehcr::scenario::{ArrivalParam, PolicyVector, Scenario};
use ehcr::sim::{simulate, stability_diagnostic, SimConfig, SimMode};

pub fn run_example() -> ehcr::Result<()> {
    let base = Scenario::table_one().with_param(ArrivalParam::PrimaryEnergy, 0.2)?;
    let policy = PolicyVector::point_mass(base.durations(), 0)?;
    for lambda_p in [0.05, 0.3] {
        let s = base.with_param(ArrivalParam::Primary, lambda_p)?;
        let r = simulate(&SimConfig::new(s.clone(), policy.clone(), SimMode::Original, 1_000_000, 1))?;
        let d = stability_diagnostic(&r, &s)?;
        println!(
            "lambda_p {lambda_p:.2}: primary {:?} (mu_p {:.4}, drift {:.2e}), secondary {:?}",
            d.primary.verdict, d.primary.service_rate, d.primary.drift_slope, d.secondary.verdict
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ehcr::Result<()> {
    run_example()
}
