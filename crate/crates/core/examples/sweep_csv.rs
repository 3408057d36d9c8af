// Sweep of the secondary energy rate written as CSV, with simulation checks.

use ehcr::experiment::{parse_scenario, run_sweep, write_csv, Grid, SimCheck, SweepSpec, Tolerance};
use ehcr::scenario::ArrivalParam;

pub fn run_example() -> ehcr::Result<()> {
    let base = parse_scenario(include_str!("../fixtures/table1.scn"))?;
    let spec = SweepSpec {
        base: base.with_param(ArrivalParam::PrimaryEnergy, 0.6)?,
        param: ArrivalParam::SecondaryEnergy,
        grid: Grid::new(0.1, 0.7, 0.2)?,
        sim: Some(SimCheck {
            horizon: 50_000,
            seed: 3,
            tolerance: Tolerance::default(),
        }),
    };
    let rows = run_sweep(&spec)?;
    let mut out = std::io::stdout().lock();
    write_csv(&mut out, &rows, base.durations(), true).expect("stdout");
    Ok(())
}

#[allow(dead_code)]
fn main() -> ehcr::Result<()> {
    run_example()
}
