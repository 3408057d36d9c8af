// A linear-fractional program solved through its lifted LP.

use ehcr::lp::solve_lp;
use ehcr::optimizer::{fractional_to_lp, LinearFractionalProgram};

pub fn run_example() -> ehcr::Result<()> {
    // max (2x + y) / (x + 3y + 1)  over the simplex x + y = 1
    let lfp = LinearFractionalProgram {
        numerator: vec![2.0, 1.0],
        numerator_constant: 0.0,
        denominator: vec![1.0, 3.0],
        denominator_constant: 1.0,
        a_ub: vec![],
        b_ub: vec![],
        a_eq: vec![vec![1.0, 1.0]],
        b_eq: vec![1.0],
    };
    let lifted = fractional_to_lp(&lfp)?;
    let solved = solve_lp(&lifted.lp)?;
    let y = solved.x().expect("bounded and feasible");
    let x = lifted.recover(y)?;
    println!("scale t = {:.6}", y[lifted.scale_index()]);
    println!("x = {x:?}, objective {:.6}", lfp.objective(&x));
    assert!((lfp.objective(&x) - 1.0).abs() < 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ehcr::Result<()> {
    run_example()
}
