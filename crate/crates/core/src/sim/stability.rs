use super::SimReport;
use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// Shortest measured window accepted by [`stability_diagnostic`].
pub const MIN_DIAGNOSTIC_SLOTS: u64 = 1_000_000;

/// Gaps `|lambda - mu|` within this many binomial standard errors are
/// reported as borderline.
const NOISE_SIGMAS: f64 = 5.0;
/// Floor on the noise band, packets per slot.
const NOISE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Unstable,
    /// Arrival and service rates are indistinguishable at this run length.
    Borderline,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueVerdict {
    pub verdict: Verdict,
    pub arrival_rate: f64,
    pub service_rate: f64,
    /// Half-width of the band treated as indistinguishable.
    pub noise: f64,
    pub drift_slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub primary: QueueVerdict,
    pub secondary: QueueVerdict,
}

/// Loynes-style verdict for both data queues: a queue is stable when its
/// arrival rate is clearly below the measured mean service rate. The queue
/// length drift is reported alongside and downgrades a verdict that it
/// contradicts to borderline.
pub fn stability_diagnostic(report: &SimReport, scenario: &Scenario) -> Result<StabilityReport> {
    if report.measured_slots < MIN_DIAGNOSTIC_SLOTS {
        return Err(Error::RunTooShort {
            measured: report.measured_slots,
            required: MIN_DIAGNOSTIC_SLOTS,
        });
    }
    let n = report.measured_slots as f64;
    let judge = |lambda: f64, mu: f64, slope: f64| {
        let noise = (NOISE_SIGMAS * (mu * (1.0 - mu) / n).sqrt()).max(NOISE_FLOOR);
        let verdict = if lambda == 0.0 {
            Verdict::Stable
        } else if lambda < mu - noise {
            // a stable queue cannot keep growing at a visible rate
            if slope > noise {
                Verdict::Borderline
            } else {
                Verdict::Stable
            }
        } else if lambda > mu + noise {
            Verdict::Unstable
        } else {
            Verdict::Borderline
        };
        QueueVerdict {
            verdict,
            arrival_rate: lambda,
            service_rate: mu,
            noise,
            drift_slope: slope,
        }
    };
    let a = scenario.arrivals();
    Ok(StabilityReport {
        primary: judge(a.primary, report.mu_p, report.drift_slope[0]),
        secondary: judge(a.secondary, report.mu_s, report.drift_slope[1]),
    })
}
