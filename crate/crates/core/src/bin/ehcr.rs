use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ehcr::experiment::{read_policy, read_scenario, run_sweep, write_csv, Grid, SimCheck, SweepSpec, Tolerance};
use ehcr::optimizer::{solve, OptimizationStatus, SubproblemResult};
use ehcr::rates::analyze;
use ehcr::scenario::{ArrivalParam, PolicyVector, Scenario};
use ehcr::sim::{simulate, stability_diagnostic, SimConfig, SimMode, MIN_DIAGNOSTIC_SLOTS};
use ehcr::validation::{run_all, DEFAULT_SEED};
use ehcr::{Error, Result};

const INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(name = "ehcr", version, about = "Sensing-duration policies for an energy-harvesting cognitive radio")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal sensing-duration policy for one scenario.
    Solve { scenario: PathBuf },
    /// Solve across a grid of one arrival rate and write CSV.
    Sweep {
        scenario: PathBuf,
        #[arg(long)]
        param: ArrivalParam,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        /// Cross-check each optimal policy with a dominant-mode simulation.
        #[arg(long)]
        simulate: bool,
        #[arg(long, default_value_t = 200_000)]
        horizon: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the slot simulator under a policy.
    Simulate {
        scenario: PathBuf,
        /// `optimal`, `uniform`, or a file of probabilities.
        #[arg(long, default_value = "optimal")]
        policy: String,
        #[arg(long, default_value = "original")]
        mode: SimMode,
        #[arg(long, default_value_t = 1_000_000)]
        horizon: u64,
        #[arg(long, default_value_t = 0)]
        warmup: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the acceptance checks against a scenario.
    Check {
        scenario: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve { scenario } => solve_command(&read_scenario(scenario)?),
        Command::Sweep {
            scenario,
            param,
            from,
            to,
            step,
            simulate,
            horizon,
            seed,
            output,
        } => {
            let spec = SweepSpec {
                base: read_scenario(scenario)?,
                param,
                grid: Grid::new(from, to, step)?,
                sim: simulate.then_some(SimCheck {
                    horizon,
                    seed,
                    tolerance: Tolerance::default(),
                }),
            };
            let rows = run_sweep(&spec)?;
            let write = |out: &mut dyn Write| write_csv(&mut BufWriter::new(out), &rows, spec.base.durations(), simulate);
            match &output {
                Some(path) => {
                    let mut file = File::create(path).map_err(|source| io_error(path, source))?;
                    write(&mut file).map_err(|source| io_error(path, source))?;
                }
                None => write(&mut io::stdout().lock()).map_err(|source| io_error(&PathBuf::from("<stdout>"), source))?,
            }
            let any_feasible = rows.iter().any(|r| r.status == OptimizationStatus::Optimal);
            Ok(if any_feasible { 0 } else { INFEASIBLE })
        }
        Command::Simulate {
            scenario,
            policy,
            mode,
            horizon,
            warmup,
            seed,
        } => {
            let scenario = read_scenario(scenario)?;
            let policy = match policy.as_str() {
                "uniform" => PolicyVector::uniform(scenario.durations())?,
                "optimal" => match solve(&scenario)?.best {
                    Some(best) => best.policy,
                    None => {
                        eprintln!("no policy keeps the primary queue stable");
                        return Ok(INFEASIBLE);
                    }
                },
                path => read_policy(path)?,
            };
            simulate_command(scenario, policy, mode, horizon, warmup, seed)
        }
        Command::Check { scenario, seed } => {
            let scenario = read_scenario(scenario)?;
            let reports = run_all(&scenario, seed)?;
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            println!("{} of {} criteria passed", reports.len() - failed, reports.len());
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn io_error(path: &std::path::Path, source: io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn print_subproblem(r: &SubproblemResult) {
    match &r.solution {
        Some(sol) => println!("  {:<12} mu_s = {:.6}", r.regime.name(), sol.value),
        None => println!("  {:<12} infeasible", r.regime.name()),
    }
}

fn solve_command(scenario: &Scenario) -> Result<u8> {
    let outcome = solve(scenario)?;
    println!("subproblems:");
    print_subproblem(&outcome.constrained);
    print_subproblem(&outcome.overflow);
    let Some(best) = outcome.best else {
        println!("status: infeasible");
        return Ok(INFEASIBLE);
    };
    println!("status: optimal ({} regime)", best.regime.name());
    println!("mu_s = {:.6}", best.mu_s);
    println!("mu_p = {:.6}", best.rates.mu_p);
    println!("mu_se = {:.6}", best.rates.mu_se);
    println!("x_tilde_se = {:.6}", best.rates.x_tilde_se);
    println!("policy:");
    for (option, p) in scenario.table().iter().zip(best.policy.as_slice()) {
        if *p > 0.0 {
            println!("  tau_{:<3} {:.6}", option.index, p);
        }
    }
    Ok(0)
}

fn simulate_command(
    scenario: Scenario,
    policy: PolicyVector,
    mode: SimMode,
    horizon: u64,
    warmup: u64,
    seed: u64,
) -> Result<u8> {
    let analytic = analyze(&scenario, &policy)?;
    let config = SimConfig::new(scenario.clone(), policy, mode, horizon, seed).with_warmup(warmup);
    let r = simulate(&config)?;
    println!("mode {} horizon {} warmup {} seed {} rng {}", r.mode.name(), r.horizon, r.warmup, r.seed, r.rng);
    println!("{:<18} {:>10} {:>10}", "", "simulated", "analytic");
    let rows = [
        ("mu_p", r.mu_p, analytic.mu_p),
        ("mu_s", r.mu_s, analytic.mu_s),
        ("mu_pe", r.mu_pe, analytic.mu_pe),
        ("mu_se", r.mu_se, analytic.mu_se),
        ("Pr(Q_pe = 0)", r.prob_pe_empty, analytic.prob_pe_empty),
        ("Pr(Q_se > 0)", r.prob_se_nonempty, analytic.x_tilde_se),
    ];
    for (name, sim, exact) in rows {
        println!("{name:<18} {sim:>10.6} {exact:>10.6}");
    }
    let [p, s, pe, se] = r.throughput;
    println!("throughput         Q_p {p:.6}  Q_s {s:.6}  Q_pe {pe:.6}  Q_se {se:.6}");
    let [p, s, pe, se] = r.mean_length;
    println!("mean length        Q_p {p:.3}  Q_s {s:.3}  Q_pe {pe:.3}  Q_se {se:.3}");
    println!("collisions         {}", r.collisions);
    if let Some(v) = r.dominance_violations {
        println!("dominance violations {v}");
    }
    if r.measured_slots >= MIN_DIAGNOSTIC_SLOTS {
        let d = stability_diagnostic(&r, &scenario)?;
        for (name, q) in [("primary", d.primary), ("secondary", d.secondary)] {
            println!(
                "{name:<9} {:?}: lambda {:.4} vs mu {:.4} (+/- {:.4}), drift {:.2e}",
                q.verdict, q.arrival_rate, q.service_rate, q.noise, q.drift_slope
            );
        }
    }
    Ok(0)
}
