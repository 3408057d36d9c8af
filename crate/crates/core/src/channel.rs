//! Rayleigh block-fading link model.
//!
//! A packet of `b` bits sent in `T - tau` seconds over bandwidth `W` is lost
//! when the instantaneous capacity `W log2(1 + |h|^2 snr)` falls below the
//! rate `b / (T - tau)`. With exponential gain power of mean `sigma^2` this
//! gives the closed form
//!
//! ```text
//! P_out(tau) = 1 - exp(-(2^(b / (W (T - tau))) - 1) / (sigma^2 snr(tau)))
//! snr(tau)   = e / ((T - tau) N0)
//! ```
//!
//! The transmit power grows as the sensing duration eats into the slot, but
//! the required spectral efficiency grows exponentially faster, so the outage
//! probability is strictly increasing in `tau`.

use crate::error::{check_probability, Error, Result};

/// Radio-layer parameters of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalLink {
    bits_per_packet: f64,
    slot_duration: f64,
    bandwidth: f64,
    gain_variance: f64,
    energy_per_packet: f64,
    noise_power: f64,
}

impl PhysicalLink {
    pub fn new(
        bits_per_packet: f64,
        slot_duration: f64,
        bandwidth: f64,
        gain_variance: f64,
        energy_per_packet: f64,
        noise_power: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("bits_per_packet", bits_per_packet),
            ("slot_duration", slot_duration),
            ("bandwidth", bandwidth),
            ("gain_variance", gain_variance),
            ("energy_per_packet", energy_per_packet),
            ("noise_power", noise_power),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(name, format!("{value} must be finite and > 0")));
            }
        }
        let link = Self {
            bits_per_packet,
            slot_duration,
            bandwidth,
            gain_variance,
            energy_per_packet,
            noise_power,
        };
        if !(link.rate_exponent() > 0.0) {
            return Err(Error::invalid(
                "bits_per_packet",
                "b ln2 / (W T) underflows to zero",
            ));
        }
        Ok(link)
    }

    /// The same link with a different mean gain power.
    pub fn with_gain_variance(&self, gain_variance: f64) -> Result<Self> {
        Self::new(
            self.bits_per_packet,
            self.slot_duration,
            self.bandwidth,
            gain_variance,
            self.energy_per_packet,
            self.noise_power,
        )
    }

    pub fn bits_per_packet(&self) -> f64 {
        self.bits_per_packet
    }

    pub fn slot_duration(&self) -> f64 {
        self.slot_duration
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn gain_variance(&self) -> f64 {
        self.gain_variance
    }

    pub fn energy_per_packet(&self) -> f64 {
        self.energy_per_packet
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    /// `a = b ln 2 / (W T)`, always > 0 for a valid link.
    pub fn rate_exponent(&self) -> f64 {
        self.bits_per_packet * std::f64::consts::LN_2 / (self.bandwidth * self.slot_duration)
    }

    fn transmit_time(&self, tau: f64) -> Result<f64> {
        if !(tau >= 0.0) {
            return Err(Error::invalid("tau", format!("{tau} must be >= 0")));
        }
        let remaining = self.slot_duration - tau;
        if remaining <= 0.0 {
            return Err(Error::NoTransmissionTime {
                tau,
                slot: self.slot_duration,
            });
        }
        Ok(remaining)
    }

    /// Received SNR at unit channel gain when the whole packet energy is
    /// spread over `duration` seconds.
    fn unit_gain_snr(&self, duration: f64) -> f64 {
        self.energy_per_packet / (duration * self.noise_power)
    }

    /// Outage exponent `x` with `P_out = 1 - exp(-x)` for a packet sent in
    /// `duration` seconds.
    fn exponent_over(&self, duration: f64) -> f64 {
        let spectral_efficiency = self.bits_per_packet / (self.bandwidth * duration);
        let threshold = (spectral_efficiency * std::f64::consts::LN_2).exp_m1();
        threshold / (self.gain_variance * self.unit_gain_snr(duration))
    }
}

/// CR transmission rate in bits/s after sensing for `tau` seconds.
pub fn secondary_rate(link: &PhysicalLink, tau: f64) -> Result<f64> {
    let remaining = link.transmit_time(tau)?;
    Ok(link.bits_per_packet / remaining)
}

/// Exponent `x(tau)` such that the secondary outage is `1 - exp(-x)`.
///
/// Monotone comparisons are made on the exponent: the probability saturates
/// at 1.0 in floating point long before the exponent stops growing.
pub fn secondary_outage_exponent(link: &PhysicalLink, tau: f64) -> Result<f64> {
    let remaining = link.transmit_time(tau)?;
    Ok(link.exponent_over(remaining))
}

/// Probability that the CR link is in outage after sensing for `tau` seconds.
pub fn secondary_outage(link: &PhysicalLink, tau: f64) -> Result<f64> {
    let x = secondary_outage_exponent(link, tau)?;
    Ok(-(-x).exp_m1())
}

/// Probability that the primary link is in outage. The PU never senses, so it
/// transmits over the full slot at rate `b / T`.
pub fn primary_outage(link: &PhysicalLink) -> f64 {
    let x = link.exponent_over(link.slot_duration);
    -(-x).exp_m1()
}

/// Checks numerically that the secondary outage is strictly increasing along
/// `taus`. The list itself must be strictly increasing and inside `[0, T)`.
pub fn verify_outage_monotonicity(link: &PhysicalLink, taus: &[f64]) -> Result<bool> {
    if taus.is_empty() {
        return Err(Error::Empty("tau list"));
    }
    if let Some(w) = taus.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::invalid(
            "tau list",
            format!("not strictly increasing at {} -> {}", w[0], w[1]),
        ));
    }
    let exponents = taus
        .iter()
        .map(|&tau| secondary_outage_exponent(link, tau))
        .collect::<Result<Vec<_>>>()?;
    Ok(exponents.windows(2).all(|w| w[1] > w[0]))
}

/// One selectable sensing duration and the probabilities it induces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingOption {
    pub index: usize,
    /// Seconds spent sensing at the start of the slot.
    pub duration: f64,
    pub detection: f64,
    pub false_alarm: f64,
    /// Outage probability of the CR link when sensing this long.
    pub secondary_outage: f64,
}

impl SensingOption {
    pub fn new(
        index: usize,
        duration: f64,
        detection: f64,
        false_alarm: f64,
        secondary_outage: f64,
    ) -> Result<Self> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::invalid("duration", format!("{duration} must be >= 0")));
        }
        check_probability("detection", detection)?;
        check_probability("false_alarm", false_alarm)?;
        check_probability("secondary_outage", secondary_outage)?;
        Ok(Self {
            index,
            duration,
            detection,
            false_alarm,
            secondary_outage,
        })
    }

    /// Builds an option whose outage probability comes from the link model.
    pub fn from_link(
        index: usize,
        link: &PhysicalLink,
        duration: f64,
        detection: f64,
        false_alarm: f64,
    ) -> Result<Self> {
        let outage = secondary_outage(link, duration)?;
        Self::new(index, duration, detection, false_alarm, outage)
    }

    pub fn misdetection(&self) -> f64 {
        1.0 - self.detection
    }
}
