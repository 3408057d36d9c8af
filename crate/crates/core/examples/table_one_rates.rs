// Closed-form service rates of the dominant system on the bundled table.

use ehcr::rates::analyze;
use ehcr::scenario::{ArrivalParam, PolicyVector, Scenario};

pub fn run_example() -> ehcr::Result<()> {
    let scenario = Scenario::table_one().with_param(ArrivalParam::PrimaryEnergy, 0.2)?;
    let policies = [
        ("first duration", PolicyVector::point_mass(10, 0)?),
        ("last duration", PolicyVector::point_mass(10, 9)?),
        ("uniform", PolicyVector::uniform(10)?),
    ];
    println!("{:<15} {:>8} {:>8} {:>8} {:>8}", "policy", "mu_se", "X~_se", "mu_p", "mu_s");
    for (name, policy) in &policies {
        let r = analyze(&scenario, policy)?;
        println!(
            "{name:<15} {:>8.5} {:>8.5} {:>8.5} {:>8.5}",
            r.mu_se, r.x_tilde_se, r.mu_p, r.mu_s
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ehcr::Result<()> {
    run_example()
}
