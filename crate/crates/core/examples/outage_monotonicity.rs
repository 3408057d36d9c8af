// Secondary outage probability as the sensing duration grows.

use ehcr::channel::{primary_outage, secondary_outage, verify_outage_monotonicity, PhysicalLink};

pub fn run_example() -> ehcr::Result<()> {
    // 1000-bit packets in a 1 ms slot over 1 MHz, SNR 2 over the full slot
    let link = PhysicalLink::new(1000.0, 1e-3, 1e6, 1.0, 2e-12, 1e-9)?;
    println!("primary outage over the full slot: {:.4}", primary_outage(&link));

    let taus: Vec<f64> = (0..10).map(|k| k as f64 * 5e-5).collect();
    for &tau in &taus {
        println!("tau = {:>6.2e} s  P_out,s = {:.4}", tau, secondary_outage(&link, tau)?);
    }
    assert!(verify_outage_monotonicity(&link, &taus)?);
    println!("strictly increasing over {} durations", taus.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> ehcr::Result<()> {
    run_example()
}
