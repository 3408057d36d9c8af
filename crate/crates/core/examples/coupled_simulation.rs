// Original and dominant systems driven by one random stream.

use ehcr::scenario::{PolicyVector, Scenario};
use ehcr::sim::{simulate, SimConfig, SimMode};

pub fn run_example() -> ehcr::Result<()> {
    let scenario = Scenario::table_one();
    let policy = PolicyVector::uniform(scenario.durations())?;
    for mode in [SimMode::Original, SimMode::Dominant, SimMode::Coupled] {
        let r = simulate(&SimConfig::new(scenario.clone(), policy.clone(), mode, 200_000, 7))?;
        println!(
            "{:<9} mu_p {:.4}  mu_s {:.4}  mean Q_p {:>8.2}  mean Q_s {:>8.2}  violations {:?}",
            mode.name(),
            r.mu_p,
            r.mu_s,
            r.mean_length[0],
            r.mean_length[1],
            r.dominance_violations
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ehcr::Result<()> {
    run_example()
}
