// Optimal sensing-duration policies as the primary load grows.

use ehcr::optimizer::solve;
use ehcr::scenario::{ArrivalParam, Arrivals, Scenario};

pub fn run_example() -> ehcr::Result<()> {
    let base = Scenario::table_one().with_arrivals(Arrivals::new(0.0, 0.1, 0.2, 0.4))?;
    for lambda_p in [0.0, 0.04, 0.08, 0.12] {
        let outcome = solve(&base.with_param(ArrivalParam::Primary, lambda_p)?)?;
        match &outcome.best {
            Some(best) => {
                let support: Vec<String> = best
                    .policy
                    .as_slice()
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| **p > 1e-9)
                    .map(|(m, p)| format!("P_{}={p:.3}", m + 1))
                    .collect();
                println!(
                    "lambda_p {lambda_p:.2}: mu_s {:.5} ({}), {}",
                    best.mu_s,
                    best.regime.name(),
                    support.join(" ")
                );
            }
            None => println!("lambda_p {lambda_p:.2}: infeasible"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ehcr::Result<()> {
    run_example()
}
