use std::collections::HashSet;
use std::fmt;

use crate::channel::SensingOption;
use crate::error::{check_probability, Error, Result};
use crate::tol;

/// Bernoulli arrival probabilities per slot for the four queues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrivals {
    pub primary: f64,
    pub secondary: f64,
    pub primary_energy: f64,
    pub secondary_energy: f64,
}

impl Arrivals {
    pub fn new(primary: f64, secondary: f64, primary_energy: f64, secondary_energy: f64) -> Self {
        Self {
            primary,
            secondary,
            primary_energy,
            secondary_energy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("lambda_p", self.primary)?;
        check_probability("lambda_s", self.secondary)?;
        check_probability("lambda_pe", self.primary_energy)?;
        check_probability("lambda_se", self.secondary_energy)
    }
}

/// Scenario parameters that a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrivalParam {
    Primary,
    PrimaryEnergy,
    SecondaryEnergy,
}

impl ArrivalParam {
    pub fn name(self) -> &'static str {
        match self {
            ArrivalParam::Primary => "lambda_p",
            ArrivalParam::PrimaryEnergy => "lambda_pe",
            ArrivalParam::SecondaryEnergy => "lambda_se",
        }
    }
}

impl fmt::Display for ArrivalParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ArrivalParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda_p" => Ok(ArrivalParam::Primary),
            "lambda_pe" => Ok(ArrivalParam::PrimaryEnergy),
            "lambda_se" => Ok(ArrivalParam::SecondaryEnergy),
            other => Err(Error::invalid(
                "param",
                format!("`{other}` is not one of lambda_p, lambda_pe, lambda_se"),
            )),
        }
    }
}

/// Arrival rates, primary outage probability and the sensing table.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    arrivals: Arrivals,
    primary_outage: f64,
    table: Vec<SensingOption>,
}

impl Scenario {
    pub fn new(arrivals: Arrivals, primary_outage: f64, table: Vec<SensingOption>) -> Result<Self> {
        arrivals.validate()?;
        check_probability("primary_outage", primary_outage)?;
        if table.is_empty() {
            return Err(Error::Empty("sensing table"));
        }
        let mut seen = HashSet::new();
        for opt in &table {
            if !seen.insert(opt.index) {
                return Err(Error::invalid(
                    "sensing table",
                    format!("duplicate duration index {}", opt.index),
                ));
            }
        }
        Ok(Self {
            arrivals,
            primary_outage,
            table,
        })
    }

    pub fn arrivals(&self) -> &Arrivals {
        &self.arrivals
    }

    pub fn primary_outage(&self) -> f64 {
        self.primary_outage
    }

    pub fn table(&self) -> &[SensingOption] {
        &self.table
    }

    /// Number of selectable sensing durations.
    pub fn durations(&self) -> usize {
        self.table.len()
    }

    pub fn with_arrivals(&self, arrivals: Arrivals) -> Result<Self> {
        Self::new(arrivals, self.primary_outage, self.table.clone())
    }

    pub fn with_param(&self, param: ArrivalParam, value: f64) -> Result<Self> {
        let mut arrivals = self.arrivals;
        match param {
            ArrivalParam::Primary => arrivals.primary = value,
            ArrivalParam::PrimaryEnergy => arrivals.primary_energy = value,
            ArrivalParam::SecondaryEnergy => arrivals.secondary_energy = value,
        }
        self.with_arrivals(arrivals)
    }

    pub fn param(&self, param: ArrivalParam) -> f64 {
        match param {
            ArrivalParam::Primary => self.arrivals.primary,
            ArrivalParam::PrimaryEnergy => self.arrivals.primary_energy,
            ArrivalParam::SecondaryEnergy => self.arrivals.secondary_energy,
        }
    }

    /// Keeps only the table rows at the given positions (0-based), in order.
    pub fn sub_table(&self, positions: &[usize]) -> Result<Self> {
        let table = positions
            .iter()
            .map(|&i| {
                self.table.get(i).copied().ok_or_else(|| {
                    Error::invalid("sub_table", format!("row {i} out of {}", self.table.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.arrivals, self.primary_outage, table)
    }

    /// The bundled ten-duration sensing table, with
    /// `lambda_p = 0.1`, `lambda_s = 0.1`, `lambda_pe = 0.4`,
    /// `lambda_se = 0.4` and primary outage 0.3.
    ///
    /// The table carries no durations; `tau_m = m T / 20` with a
    /// unit slot is used. Table-mode results do not depend on them.
    pub fn table_one() -> Self {
        const DETECTION: [f64; 10] = [0.7, 0.75, 0.78, 0.8, 0.85, 0.88, 0.9, 0.92, 0.94, 0.95];
        const FALSE_ALARM: [f64; 10] = [0.05, 0.06, 0.08, 0.082, 0.085, 0.088, 0.1, 0.11, 0.12, 0.125];
        const OUTAGE: [f64; 10] = [0.1, 0.2, 0.25, 0.3, 0.35, 0.38, 0.4, 0.46, 0.49, 0.6];
        let table = (0..10)
            .map(|i| {
                let index = i + 1;
                SensingOption::new(
                    index,
                    default_duration(index, 1.0).expect("index < 20"),
                    DETECTION[i],
                    FALSE_ALARM[i],
                    OUTAGE[i],
                )
                .expect("table entries are probabilities")
            })
            .collect();
        Self::new(Arrivals::new(0.1, 0.1, 0.4, 0.4), 0.3, table).expect("valid fixture")
    }
}

/// Default duration `tau_m = m T / 20`, defined for `m < 20`.
pub fn default_duration(index: usize, slot_duration: f64) -> Option<f64> {
    (index < 20).then(|| index as f64 * slot_duration / 20.0)
}

/// A probability distribution over the sensing durations.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyVector(Vec<f64>);

impl PolicyVector {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Empty("policy"));
        }
        if let Some((m, p)) = probabilities
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && **p >= 0.0))
        {
            return Err(Error::invalid("policy", format!("P_{} = {p} is negative", m + 1)));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > tol::POLICY_SUM {
            return Err(Error::invalid("policy", format!("probabilities sum to {sum}")));
        }
        Ok(Self(probabilities))
    }

    /// Clamps round-off negatives to zero and renormalizes. Fails if any
    /// entry is more negative than `slack` or the vector has no mass.
    pub fn from_weights(weights: &[f64], slack: f64) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < -slack) {
            return Err(Error::invalid("policy", format!("weight {w} is negative")));
        }
        let clamped: Vec<f64> = weights.iter().map(|w| w.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::invalid("policy", "weights have no mass"));
        }
        Self::new(clamped.into_iter().map(|w| w / sum).collect())
    }

    pub fn point_mass(len: usize, position: usize) -> Result<Self> {
        if position >= len {
            return Err(Error::invalid("policy", format!("position {position} out of {len}")));
        }
        let mut p = vec![0.0; len];
        p[position] = 1.0;
        Ok(Self(p))
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Empty("policy"));
        }
        Ok(Self(vec![1.0 / len as f64; len]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn check_matches(&self, scenario: &Scenario) -> Result<()> {
        if self.len() != scenario.durations() {
            return Err(Error::DimensionMismatch {
                policy: self.len(),
                table: scenario.durations(),
            });
        }
        Ok(())
    }

    /// `sum_m P_m f(m)`.
    pub fn expect<F: Fn(usize) -> f64>(&self, f: F) -> f64 {
        self.0.iter().enumerate().map(|(m, p)| p * f(m)).sum()
    }
}

impl std::ops::Index<usize> for PolicyVector {
    type Output = f64;

    fn index(&self, m: usize) -> &f64 {
        &self.0[m]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_one_shape() {
        let s = Scenario::table_one();
        assert_eq!(s.durations(), 10);
        assert_eq!(s.primary_outage(), 0.3);
        let outage: Vec<f64> = s.table().iter().map(|o| o.secondary_outage).collect();
        assert!(outage.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(s.table()[0].detection, 0.7);
        assert_eq!(s.table()[9].false_alarm, 0.125);
        assert_eq!(s.table()[9].duration, 0.5);
    }

    #[test]
    fn scenario_validation() {
        let s = Scenario::table_one();
        assert!(s.with_param(ArrivalParam::Primary, 1.2).is_err());
        assert!(s.with_param(ArrivalParam::SecondaryEnergy, -0.1).is_err());
        assert!(Scenario::new(*s.arrivals(), 0.3, vec![]).is_err());
        let mut dup = s.table().to_vec();
        dup[1].index = dup[0].index;
        assert!(Scenario::new(*s.arrivals(), 0.3, dup).is_err());
        assert!(Scenario::new(*s.arrivals(), 1.3, s.table().to_vec()).is_err());
    }

    #[test]
    fn sub_table_picks_rows() {
        let s = Scenario::table_one().sub_table(&[0, 4, 9]).unwrap();
        let idx: Vec<usize> = s.table().iter().map(|o| o.index).collect();
        assert_eq!(idx, vec![1, 5, 10]);
        assert!(Scenario::table_one().sub_table(&[10]).is_err());
    }

    #[test]
    fn policy_validation() {
        assert!(PolicyVector::new(vec![0.5, 0.5]).is_ok());
        assert!(PolicyVector::new(vec![0.5, 0.6]).is_err());
        assert!(PolicyVector::new(vec![1.1, -0.1]).is_err());
        assert!(PolicyVector::new(vec![]).is_err());
        assert!(PolicyVector::point_mass(3, 3).is_err());
        let p = PolicyVector::from_weights(&[2.0, -1e-14, 2.0], 1e-10).unwrap();
        assert_eq!(p.as_slice(), &[0.5, 0.0, 0.5]);
        assert!(PolicyVector::from_weights(&[1.0, -1e-3], 1e-10).is_err());
        assert!(PolicyVector::from_weights(&[0.0, 0.0], 1e-10).is_err());
    }

    #[test]
    fn param_names_round_trip() {
        for p in [ArrivalParam::Primary, ArrivalParam::PrimaryEnergy, ArrivalParam::SecondaryEnergy] {
            assert_eq!(p.name().parse::<ArrivalParam>().unwrap(), p);
        }
        assert!("lambda_s".parse::<ArrivalParam>().is_err());
    }
}
