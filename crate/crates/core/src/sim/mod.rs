//! Slot-level Monte Carlo of the four interacting queues.
//!
//! Each slot consumes one [`SlotDraws`] record from a [`DrawStream`]: four
//! arrival coins, the sensing duration, the detection and false-alarm coins
//! and the two channel states, always in that order and always all of them.
//! Two systems stepped with the same records therefore see identical
//! randomness slot by slot, which is what the coupled mode relies on.
//!
//! Service decisions use the start-of-slot queue contents; arrivals are
//! appended afterwards (`Q <- max(Q - R, 0) + A`), so a packet is never
//! served in the slot it arrives.

mod stability;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scenario::{PolicyVector, Scenario};

pub use stability::{stability_diagnostic, QueueVerdict, StabilityReport, Verdict, MIN_DIAGNOSTIC_SLOTS};

/// Generator behind every simulation, recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimMode {
    /// Transmitters stay silent when their data buffer is empty.
    Original,
    /// Transmitters send dummy packets when their data buffer is empty.
    Dominant,
    /// Original and dominant systems on one draw stream, with per-slot
    /// dominance checks.
    Coupled,
}

impl SimMode {
    pub fn name(self) -> &'static str {
        match self {
            SimMode::Original => "original",
            SimMode::Dominant => "dominant",
            SimMode::Coupled => "coupled",
        }
    }
}

impl std::str::FromStr for SimMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(SimMode::Original),
            "dominant" => Ok(SimMode::Dominant),
            "coupled" => Ok(SimMode::Coupled),
            other => Err(Error::invalid("mode", format!("unknown simulation mode `{other}`"))),
        }
    }
}

/// Queue lengths in packets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct QueueState {
    pub primary: u64,
    pub secondary: u64,
    pub primary_energy: u64,
    pub secondary_energy: u64,
}

impl QueueState {
    pub fn as_array(&self) -> [u64; 4] {
        [self.primary, self.secondary, self.primary_energy, self.secondary_energy]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub policy: PolicyVector,
    pub mode: SimMode,
    pub horizon: u64,
    /// Leading slots excluded from every estimate.
    pub warmup: u64,
    pub seed: u64,
    pub initial: QueueState,
}

impl SimConfig {
    pub fn new(scenario: Scenario, policy: PolicyVector, mode: SimMode, horizon: u64, seed: u64) -> Self {
        Self {
            scenario,
            policy,
            mode,
            horizon,
            warmup: 0,
            seed,
            initial: QueueState::default(),
        }
    }

    pub fn with_warmup(mut self, warmup: u64) -> Self {
        self.warmup = warmup;
        self
    }

    pub fn with_initial(mut self, initial: QueueState) -> Self {
        self.initial = initial;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.policy.check_matches(&self.scenario)?;
        if self.horizon <= self.warmup {
            return Err(Error::invalid(
                "horizon",
                format!("{} must exceed warmup {}", self.horizon, self.warmup),
            ));
        }
        Ok(())
    }
}

/// Everything random about one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotDraws {
    /// Arrivals to `Q_p`, `Q_s`, `Q_pe`, `Q_se`.
    pub arrivals: [bool; 4],
    /// Position of the chosen sensing duration in the table.
    pub duration: usize,
    /// The sensor flags an active PU.
    pub detected: bool,
    /// The sensor flags an idle PU.
    pub false_alarm: bool,
    pub primary_channel_on: bool,
    pub secondary_channel_on: bool,
}

/// Positional stream of [`SlotDraws`] for one scenario and policy.
pub struct DrawStream {
    rng: ChaCha8Rng,
    arrival_rates: [f64; 4],
    cumulative: Vec<f64>,
    detection: Vec<f64>,
    false_alarm: Vec<f64>,
    secondary_on: Vec<f64>,
    primary_on: f64,
}

impl DrawStream {
    pub fn new(scenario: &Scenario, policy: &PolicyVector, seed: u64) -> Self {
        let a = scenario.arrivals();
        let mut acc = 0.0;
        let cumulative = policy
            .as_slice()
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let table = scenario.table();
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            arrival_rates: [a.primary, a.secondary, a.primary_energy, a.secondary_energy],
            cumulative,
            detection: table.iter().map(|o| o.detection).collect(),
            false_alarm: table.iter().map(|o| o.false_alarm).collect(),
            secondary_on: table.iter().map(|o| 1.0 - o.secondary_outage).collect(),
            primary_on: 1.0 - scenario.primary_outage(),
        }
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.gen::<f64>() < p
    }

    pub fn next_slot(&mut self) -> SlotDraws {
        let rates = self.arrival_rates;
        let arrivals = [
            self.coin(rates[0]),
            self.coin(rates[1]),
            self.coin(rates[2]),
            self.coin(rates[3]),
        ];
        let u: f64 = self.rng.gen();
        // first position whose cumulative mass exceeds u; trailing
        // zero-probability entries are never picked
        let last = self
            .cumulative
            .iter()
            .rposition(|&c| c > 0.0)
            .unwrap_or(0);
        let duration = self.cumulative[..last]
            .iter()
            .position(|&c| u < c)
            .unwrap_or(last);
        SlotDraws {
            arrivals,
            duration,
            detected: self.coin(self.detection[duration]),
            false_alarm: self.coin(self.false_alarm[duration]),
            primary_channel_on: self.coin(self.primary_on),
            secondary_channel_on: self.coin(self.secondary_on[duration]),
        }
    }
}

/// Service indicators `R_p, R_s, R_pe, R_se` of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Service {
    pub primary: bool,
    pub secondary: bool,
    pub primary_energy: bool,
    pub secondary_energy: bool,
}

impl Service {
    fn as_array(&self) -> [bool; 4] {
        [self.primary, self.secondary, self.primary_energy, self.secondary_energy]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotOutcome {
    /// State the service decisions were based on.
    pub start: QueueState,
    pub service: Service,
    /// The PU puts a (real or dummy) packet on the air.
    pub primary_transmits: bool,
    /// The CR puts a (real or dummy) packet on the air.
    pub secondary_transmits: bool,
    /// Packets actually removed from each queue.
    pub departures: [bool; 4],
}

/// One copy of the four-queue system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueueSystem {
    state: QueueState,
    dominant: bool,
}

impl QueueSystem {
    pub fn new(initial: QueueState, dominant: bool) -> Self {
        Self {
            state: initial,
            dominant,
        }
    }

    pub fn state(&self) -> QueueState {
        self.state
    }

    pub fn step(&mut self, d: &SlotDraws) -> SlotOutcome {
        let start = self.state;
        // The dominant system acts as if both data queues were nonempty.
        let has_p = self.dominant || start.primary > 0;
        let has_s = self.dominant || start.secondary > 0;
        let has_pe = start.primary_energy > 0;
        let has_se = start.secondary_energy > 0;

        let pu_active = has_p && has_pe;
        let misdetect = !d.detected;
        let no_false_alarm = !d.false_alarm;

        let service = Service {
            primary: (!(has_s && has_se && misdetect)) && d.primary_channel_on && has_pe,
            secondary: has_se && !pu_active && d.secondary_channel_on && no_false_alarm,
            primary_energy: has_p,
            secondary_energy: has_s && if pu_active { misdetect } else { no_false_alarm },
        };

        let queues = start.as_array();
        let served = service.as_array();
        let mut departures = [false; 4];
        let mut next = [0u64; 4];
        for k in 0..4 {
            departures[k] = served[k] && queues[k] > 0;
            next[k] = queues[k] - u64::from(departures[k]) + u64::from(d.arrivals[k]);
        }
        self.state = QueueState {
            primary: next[0],
            secondary: next[1],
            primary_energy: next[2],
            secondary_energy: next[3],
        };
        SlotOutcome {
            start,
            service,
            primary_transmits: pu_active,
            secondary_transmits: departures[3],
            departures,
        }
    }
}

/// Running statistics over the measured window.
#[derive(Debug, Clone)]
struct Accumulator {
    slots: u64,
    served: [u64; 4],
    departures: [u64; 4],
    pe_empty: u64,
    se_nonempty: u64,
    length_sum: [f64; 4],
    // slope regression on centered time
    centered_cross: [f64; 4],
    centered_square: f64,
    midpoint: f64,
    collisions: u64,
}

impl Accumulator {
    fn new(warmup: u64, horizon: u64) -> Self {
        Self {
            slots: 0,
            served: [0; 4],
            departures: [0; 4],
            pe_empty: 0,
            se_nonempty: 0,
            length_sum: [0.0; 4],
            centered_cross: [0.0; 4],
            centered_square: 0.0,
            midpoint: (warmup + horizon - 1) as f64 / 2.0,
            collisions: 0,
        }
    }

    fn record(&mut self, t: u64, out: &SlotOutcome) {
        self.slots += 1;
        let lengths = out.start.as_array();
        let dt = t as f64 - self.midpoint;
        self.centered_square += dt * dt;
        for (k, (&served, &departed)) in out.service.as_array().iter().zip(&out.departures).enumerate() {
            self.served[k] += u64::from(served);
            self.departures[k] += u64::from(departed);
            let q = lengths[k] as f64;
            self.length_sum[k] += q;
            self.centered_cross[k] += dt * q;
        }
        self.pe_empty += u64::from(out.start.primary_energy == 0);
        self.se_nonempty += u64::from(out.start.secondary_energy > 0);
        self.collisions += u64::from(out.primary_transmits && out.secondary_transmits);
    }

    fn finish(&self, config: &SimConfig, mode: SimMode, violations: Option<u64>) -> SimReport {
        let n = self.slots as f64;
        let per_slot = |c: u64| c as f64 / n;
        let slope = |k: usize| {
            if self.centered_square > 0.0 {
                self.centered_cross[k] / self.centered_square
            } else {
                0.0
            }
        };
        SimReport {
            mode,
            horizon: config.horizon,
            warmup: config.warmup,
            seed: config.seed,
            rng: RNG_ALGORITHM,
            measured_slots: self.slots,
            mu_p: per_slot(self.served[0]),
            mu_s: per_slot(self.served[1]),
            mu_pe: per_slot(self.served[2]),
            mu_se: per_slot(self.served[3]),
            throughput: self.departures.map(per_slot),
            prob_pe_empty: per_slot(self.pe_empty),
            prob_se_nonempty: per_slot(self.se_nonempty),
            mean_length: self.length_sum.map(|s| s / n),
            drift_slope: [slope(0), slope(1), slope(2), slope(3)],
            collisions: self.collisions,
            dominance_violations: violations,
        }
    }
}

/// Empirical estimates from one run. Rates are means of the per-slot service
/// indicators; `throughput` counts packets actually removed.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub mode: SimMode,
    pub horizon: u64,
    pub warmup: u64,
    pub seed: u64,
    pub rng: &'static str,
    pub measured_slots: u64,
    pub mu_p: f64,
    pub mu_s: f64,
    pub mu_pe: f64,
    pub mu_se: f64,
    /// Departures per slot for `Q_p, Q_s, Q_pe, Q_se`.
    pub throughput: [f64; 4],
    pub prob_pe_empty: f64,
    pub prob_se_nonempty: f64,
    pub mean_length: [f64; 4],
    /// Least-squares growth of each queue length, packets per slot.
    pub drift_slope: [f64; 4],
    pub collisions: u64,
    /// Coupled mode only: slots where an original data queue exceeded its
    /// dominant counterpart.
    pub dominance_violations: Option<u64>,
}

/// Runs `config`. In coupled mode the reported estimates are those of the
/// dominant system.
pub fn simulate(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    if config.mode == SimMode::Coupled {
        return coupled_dominance_run(config);
    }
    let mut stream = DrawStream::new(&config.scenario, &config.policy, config.seed);
    let mut system = QueueSystem::new(config.initial, config.mode == SimMode::Dominant);
    let mut acc = Accumulator::new(config.warmup, config.horizon);
    for t in 0..config.horizon {
        let out = system.step(&stream.next_slot());
        if t >= config.warmup {
            acc.record(t, &out);
        }
    }
    Ok(acc.finish(config, config.mode, None))
}

/// Steps the original and dominant systems on one draw stream and counts
/// slots where `Q_p` or `Q_s` of the original exceeds the dominant one.
pub fn coupled_dominance_run(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    if config.mode != SimMode::Coupled {
        return Err(Error::invalid("mode", "coupled_dominance_run needs SimMode::Coupled"));
    }
    let mut stream = DrawStream::new(&config.scenario, &config.policy, config.seed);
    let mut original = QueueSystem::new(config.initial, false);
    let mut dominant = QueueSystem::new(config.initial, true);
    let mut acc = Accumulator::new(config.warmup, config.horizon);
    let mut violations = 0;
    for t in 0..config.horizon {
        let draws = stream.next_slot();
        original.step(&draws);
        let out = dominant.step(&draws);
        let (o, d) = (original.state(), dominant.state());
        if o.primary > d.primary || o.secondary > d.secondary {
            violations += 1;
        }
        if t >= config.warmup {
            acc.record(t, &out);
        }
    }
    Ok(acc.finish(config, SimMode::Coupled, Some(violations)))
}

#[cfg(test)]
mod tests;
