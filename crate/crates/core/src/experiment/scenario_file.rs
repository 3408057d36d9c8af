//! Line-oriented scenario format.
//!
//! ```text
//! # anything after '#' is ignored
//! mode table                 # or `physical`; defaults to table
//! lambda_p 0.1
//! lambda_s 0.1
//! lambda_pe 0.4
//! lambda_se 0.4
//! primary_outage 0.3         # required in table mode
//! slot_duration 1            # optional in table mode (default 1)
//! duration 1 0.7 0.05 0.1    # table:    index P_D P_FA P_out_s [tau]
//! ```
//!
//! Physical mode replaces the outage column with link parameters:
//!
//! ```text
//! mode physical
//! bits_per_packet 1000
//! slot_duration 1e-3
//! bandwidth 1e6
//! energy_per_packet 2e-12
//! noise_power 1e-9
//! primary_gain_variance 1
//! secondary_gain_variance 1
//! duration 1 5e-5 0.7 0.05   # physical: index tau P_D P_FA
//! ```
//!
//! In physical mode `primary_outage` may be given to override the value
//! computed from the primary link.

use std::collections::HashMap;
use std::path::Path;

use super::ParseError;
use crate::channel::{primary_outage, PhysicalLink, SensingOption};
use crate::error::{Error, Result};
use crate::scenario::{default_duration, Arrivals, PolicyVector, Scenario};

const TABLE_KEYS: &[&str] = &[
    "mode",
    "lambda_p",
    "lambda_s",
    "lambda_pe",
    "lambda_se",
    "primary_outage",
    "slot_duration",
];
const PHYSICAL_KEYS: &[&str] = &[
    "bits_per_packet",
    "bandwidth",
    "energy_per_packet",
    "noise_power",
    "primary_gain_variance",
    "secondary_gain_variance",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Table,
    Physical,
}

struct Row {
    line: usize,
    fields: Vec<f64>,
    index: usize,
}

pub fn read_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_scenario(&text)?)
}

pub fn parse_scenario(text: &str) -> std::result::Result<Scenario, ParseError> {
    let mut values: HashMap<&str, (usize, &str)> = HashMap::new();
    let mut rows = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let key = words.next().expect("nonempty");
        let rest: Vec<&str> = words.collect();
        if key == "duration" {
            rows.push(parse_row(line, &rest)?);
            continue;
        }
        if !TABLE_KEYS.contains(&key) && !PHYSICAL_KEYS.contains(&key) {
            return Err(ParseError::at(line, format!("unknown key `{key}`")));
        }
        let [value] = rest.as_slice() else {
            return Err(ParseError::at(line, format!("`{key}` takes exactly one value")));
        };
        if let Some((first, _)) = values.insert(key, (line, value)) {
            return Err(ParseError::at(line, format!("`{key}` already set on line {first}")));
        }
    }

    let mode = match values.get("mode") {
        None | Some((_, "table")) => Mode::Table,
        Some((_, "physical")) => Mode::Physical,
        Some((line, other)) => {
            return Err(ParseError::at(*line, format!("mode must be `table` or `physical`, got `{other}`")))
        }
    };
    if mode == Mode::Table {
        if let Some(key) = PHYSICAL_KEYS.iter().find(|k| values.contains_key(**k)) {
            return Err(ParseError::at(values[key].0, format!("`{key}` is only valid in physical mode")));
        }
    }

    let number = |key: &str| -> std::result::Result<Option<(usize, f64)>, ParseError> {
        match values.get(key) {
            None => Ok(None),
            Some(&(line, text)) => text
                .parse::<f64>()
                .map(|v| Some((line, v)))
                .map_err(|_| ParseError::at(line, format!("`{key}`: `{text}` is not a number"))),
        }
    };
    let required = |key: &str| -> std::result::Result<(usize, f64), ParseError> {
        number(key)?.ok_or_else(|| ParseError::file(format!("missing required key `{key}`")))
    };
    let probability = |key: &str| -> std::result::Result<f64, ParseError> {
        let (line, v) = required(key)?;
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(ParseError::at(line, format!("`{key}` = {v} is not in [0, 1]")))
        }
    };

    let arrivals = Arrivals::new(
        probability("lambda_p")?,
        probability("lambda_s")?,
        probability("lambda_pe")?,
        probability("lambda_se")?,
    );

    if rows.is_empty() {
        return Err(ParseError::file("no `duration` records: at least one sensing duration is required"));
    }
    let mut seen = HashMap::new();
    for row in &rows {
        if let Some(first) = seen.insert(row.index, row.line) {
            return Err(ParseError::at(
                row.line,
                format!("duplicate duration index {} (first on line {first})", row.index),
            ));
        }
    }

    let (table, outage) = match mode {
        Mode::Table => {
            let slot = match number("slot_duration")? {
                None => 1.0,
                Some((line, v)) if !(v > 0.0) => {
                    return Err(ParseError::at(line, "`slot_duration` must be > 0"))
                }
                Some((_, v)) => v,
            };
            let table = rows
                .iter()
                .map(|row| table_row(row, slot))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            (table, probability("primary_outage")?)
        }
        Mode::Physical => {
            let get = |key| required(key).map(|(_, v)| v);
            let bad_link = |e: Error| ParseError::file(format!("physical link: {e}"));
            let secondary = PhysicalLink::new(
                get("bits_per_packet")?,
                get("slot_duration")?,
                get("bandwidth")?,
                get("secondary_gain_variance")?,
                get("energy_per_packet")?,
                get("noise_power")?,
            )
            .map_err(bad_link)?;
            let primary = secondary
                .with_gain_variance(get("primary_gain_variance")?)
                .map_err(bad_link)?;
            let table = rows
                .iter()
                .map(|row| physical_row(row, &secondary))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let outage = match values.get("primary_outage") {
                Some(_) => probability("primary_outage")?,
                None => primary_outage(&primary),
            };
            (table, outage)
        }
    };

    Scenario::new(arrivals, outage, table).map_err(|e| ParseError::file(e.to_string()))
}

fn parse_row(line: usize, fields: &[&str]) -> std::result::Result<Row, ParseError> {
    let Some((index, rest)) = fields.split_first() else {
        return Err(ParseError::at(line, "`duration` needs an index and its probabilities"));
    };
    let index = index
        .parse::<usize>()
        .map_err(|_| ParseError::at(line, format!("duration index `{index}` is not a positive integer")))?;
    let fields = rest
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .map_err(|_| ParseError::at(line, format!("duration {index}: `{f}` is not a number")))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Row { line, fields, index })
}

fn check_row_probability(row: &Row, name: &str, v: f64) -> std::result::Result<(), ParseError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(ParseError::at(
            row.line,
            format!("duration {}: {name} = {v} is not in [0, 1]", row.index),
        ))
    }
}

fn table_row(row: &Row, slot: f64) -> std::result::Result<SensingOption, ParseError> {
    let (detection, false_alarm, outage, tau) = match *row.fields.as_slice() {
        [d, fa, out] => {
            let tau = default_duration(row.index, slot).ok_or_else(|| {
                ParseError::at(row.line, format!("duration {}: index >= 20 needs an explicit tau", row.index))
            })?;
            (d, fa, out, tau)
        }
        [d, fa, out, tau] => (d, fa, out, tau),
        _ => {
            return Err(ParseError::at(
                row.line,
                format!("duration {}: expected `P_D P_FA P_out_s [tau]`", row.index),
            ))
        }
    };
    check_row_probability(row, "P_D", detection)?;
    check_row_probability(row, "P_FA", false_alarm)?;
    check_row_probability(row, "P_out_s", outage)?;
    if !(tau >= 0.0 && tau < slot) {
        return Err(ParseError::at(row.line, format!("duration {}: tau = {tau} outside [0, {slot})", row.index)));
    }
    SensingOption::new(row.index, tau, detection, false_alarm, outage)
        .map_err(|e| ParseError::at(row.line, e.to_string()))
}

fn physical_row(row: &Row, link: &PhysicalLink) -> std::result::Result<SensingOption, ParseError> {
    let &[tau, detection, false_alarm] = row.fields.as_slice() else {
        return Err(ParseError::at(row.line, format!("duration {}: expected `tau P_D P_FA`", row.index)));
    };
    check_row_probability(row, "P_D", detection)?;
    check_row_probability(row, "P_FA", false_alarm)?;
    SensingOption::from_link(row.index, link, tau, detection, false_alarm)
        .map_err(|e| ParseError::at(row.line, format!("duration {}: {e}", row.index)))
}

pub fn read_policy(path: impl AsRef<Path>) -> Result<PolicyVector> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_policy(&text)
}

/// Whitespace-separated probabilities `P_1 .. P_M`; `#` starts a comment.
pub fn parse_policy(text: &str) -> Result<PolicyVector> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        for word in content.split_whitespace() {
            let v = word
                .parse::<f64>()
                .map_err(|_| ParseError::at(i + 1, format!("`{word}` is not a probability")))?;
            values.push(v);
        }
    }
    PolicyVector::new(values)
}
