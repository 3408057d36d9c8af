// The simplex solver next to brute-force vertex enumeration.

use ehcr::lp::{solve_lp, vertex_enumeration_oracle, LpSolution, StandardFormLp};

pub fn run_example() -> ehcr::Result<()> {
    // max 3x + 2y  s.t.  x + y <= 4,  x + 3y <= 6,  x <= 3
    let lp = StandardFormLp::maximize(vec![3.0, 2.0])
        .inequality(vec![1.0, 1.0], 4.0)
        .inequality(vec![1.0, 3.0], 6.0)
        .inequality(vec![1.0, 0.0], 3.0);
    let simplex = solve_lp(&lp)?;
    let oracle = vertex_enumeration_oracle(&lp)?;
    println!("simplex: {simplex:?}");
    println!("oracle : {oracle:?}");
    assert_eq!(simplex.objective(), Some(11.0));

    let infeasible = StandardFormLp::maximize(vec![1.0])
        .inequality(vec![1.0], 1.0)
        .inequality(vec![-1.0], -2.0);
    assert_eq!(solve_lp(&infeasible)?, LpSolution::Infeasible);

    let unbounded = StandardFormLp::maximize(vec![1.0, 1.0]).inequality(vec![1.0, -1.0], 1.0);
    assert_eq!(solve_lp(&unbounded)?, LpSolution::Unbounded);
    println!("infeasible and unbounded instances detected");
    Ok(())
}

#[allow(dead_code)]
fn main() -> ehcr::Result<()> {
    run_example()
}
