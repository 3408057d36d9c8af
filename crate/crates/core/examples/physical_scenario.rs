// A scenario whose outages come from link parameters rather than a table.

use ehcr::experiment::parse_scenario;
use ehcr::optimizer::solve;

pub fn run_example() -> ehcr::Result<()> {
    let scenario = parse_scenario(include_str!("../fixtures/physical.scn"))?;
    println!("primary outage {:.4}", scenario.primary_outage());
    for option in scenario.table() {
        println!(
            "m {:>2}  tau {:.2e}  P_D {:.2}  P_FA {:.3}  P_out,s {:.4}",
            option.index, option.duration, option.detection, option.false_alarm, option.secondary_outage
        );
    }
    let outcome = solve(&scenario)?;
    println!("best mu_s {:.5}", outcome.best_mu_s());
    Ok(())
}

#[allow(dead_code)]
fn main() -> ehcr::Result<()> {
    run_example()
}
