//! Named constants of the construction, with a literal `paper` preset and a
//! `desk` preset whose values keep every inequality meaningful at sizes
//! that fit on one machine.
//!
//! Divisors that the construction multiplies by `log n` are stored without
//! the logarithm; the accessor methods take `n` and use natural logs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Paper,
    Desk,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            other => Err(Error::InvalidParameter(format!("unknown preset {other:?} (expected paper or desk)"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Paper => "paper",
            Preset::Desk => "desk",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsProfile {
    pub preset: Preset,
    /// Almost-regularity of the first cleanup subgraph.
    pub almost_reg_k0: f64,
    /// That subgraph keeps average degree `d / (this · ln n)`.
    pub almost_reg_degree_divisor: f64,
    /// Final expansion `1 / (this · ln n)`.
    pub expander_lambda_divisor: f64,
    /// Density-increment step `λ = 1 / (this · ln n)`; sparse cuts are
    /// tested against `λ/3`.
    pub lambda_step_divisor: f64,
    /// Final average degree `d / (this · ln n)`.
    pub degree_divisor_total: f64,
    pub k_final: f64,
    pub star_count_divisor: f64,
    pub star_size_divisor: f64,
    pub forest_count_divisor: f64,
    /// Minimum degree required before star forests are extracted.
    pub min_degree_floor: f64,
    pub beta: f64,
    pub walk_length_divisor: f64,
    pub intersection_constant: f64,
    pub cross_edge_constant: f64,
    /// Cleanup requires `d ≥ factor · (ln n)^power`.
    pub extract_min_degree_factor: f64,
    pub extract_min_degree_log_power: f64,
    /// `find_chordal_cycle` warns below `n (ln n)^power` edges.
    pub edge_threshold_log_power: f64,
    /// Per-window edge target `factor · t / k` of the spanning diagnostic.
    pub chord_target_factor: f64,
    /// Per-round pick probability of the dominated auxiliary set.
    pub domination_probability: f64,
}

impl ConstantsProfile {
    pub fn paper() -> Self {
        ConstantsProfile {
            preset: Preset::Paper,
            almost_reg_k0: 6.0,
            almost_reg_degree_divisor: 100.0,
            expander_lambda_divisor: 10.0,
            lambda_step_divisor: 2.0,
            degree_divisor_total: 600.0,
            k_final: 100.0,
            star_count_divisor: 1e5,
            star_size_divisor: 1e7,
            forest_count_divisor: 10.0,
            min_degree_floor: 1e7,
            beta: 1e-28,
            walk_length_divisor: 1e6,
            intersection_constant: 1e9,
            cross_edge_constant: 1e32,
            extract_min_degree_factor: 1.0,
            extract_min_degree_log_power: 2.0,
            edge_threshold_log_power: 8.0,
            chord_target_factor: 2.0,
            domination_probability: 1e-5,
        }
    }

    pub fn desk() -> Self {
        ConstantsProfile {
            preset: Preset::Desk,
            almost_reg_k0: 6.0,
            almost_reg_degree_divisor: 4.0,
            expander_lambda_divisor: 4.0,
            lambda_step_divisor: 4.0 / 3.0,
            degree_divisor_total: 4.0,
            k_final: 8.0,
            star_count_divisor: 4.0,
            star_size_divisor: 16.0,
            forest_count_divisor: 4.0,
            min_degree_floor: 32.0,
            beta: 0.25,
            walk_length_divisor: 4.0,
            intersection_constant: 10.0,
            cross_edge_constant: 100.0,
            extract_min_degree_factor: 2.0,
            extract_min_degree_log_power: 1.0,
            edge_threshold_log_power: 1.0,
            chord_target_factor: 2.0,
            domination_probability: 1e-5,
        }
    }

    pub fn from_preset(preset: Preset) -> Self {
        match preset {
            Preset::Paper => Self::paper(),
            Preset::Desk => Self::desk(),
        }
    }

    /// Overrides one numeric constant by field name.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let parsed: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{key}: {value:?} is not a number")))?;
        let mut map = match serde_json::to_value(&*self) {
            Ok(serde_json::Value::Object(map)) => map,
            _ => unreachable!("profile serializes to an object"),
        };
        match map.get(key) {
            Some(serde_json::Value::Number(_)) => {}
            _ => return Err(Error::InvalidParameter(format!("unknown constant {key:?}"))),
        }
        let number = serde_json::Number::from_f64(parsed)
            .ok_or_else(|| Error::InvalidParameter(format!("{key}: {value} is not finite")))?;
        map.insert(key.to_string(), serde_json::Value::Number(number));
        let updated: ConstantsProfile = serde_json::from_value(serde_json::Value::Object(map))
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        updated.validate()?;
        *self = updated;
        Ok(())
    }

    /// Applies a flat `key=value` config; blank lines and `#` comments are
    /// ignored.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("expected key=value, got {line:?}"),
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let json = serde_json::to_value(self).expect("profile serializes");
        for (key, value) in json.as_object().expect("object").iter() {
            if let Some(x) = value.as_f64() {
                if !(x > 0.0) || !x.is_finite() {
                    return Err(Error::InvalidParameter(format!("{key} must be positive, got {x}")));
                }
            }
        }
        for (name, k) in [("almost_reg_k0", self.almost_reg_k0), ("k_final", self.k_final)] {
            if k < 1.0 {
                return Err(Error::InvalidParameter(format!("{name} must be >= 1, got {k}")));
            }
        }
        if self.beta >= 1.0 {
            return Err(Error::InvalidParameter(format!("beta must lie in (0, 1), got {}", self.beta)));
        }
        if self.domination_probability > 1.0 {
            return Err(Error::InvalidParameter("domination_probability must be at most 1".into()));
        }
        Ok(())
    }

    fn log(n: usize) -> f64 {
        (n.max(2) as f64).ln()
    }

    pub fn expander_lambda(&self, n: usize) -> f64 {
        1.0 / (self.expander_lambda_divisor * Self::log(n))
    }

    pub fn lambda_step(&self, n: usize) -> f64 {
        1.0 / (self.lambda_step_divisor * Self::log(n))
    }

    pub fn almost_regular_min_degree(&self, d: f64, n: usize) -> f64 {
        d / (self.almost_reg_degree_divisor * Self::log(n))
    }

    pub fn final_min_degree(&self, d: f64, n: usize) -> f64 {
        d / (self.degree_divisor_total * Self::log(n))
    }

    pub fn extract_min_degree(&self, n: usize) -> f64 {
        self.extract_min_degree_factor * Self::log(n).powf(self.extract_min_degree_log_power)
    }

    pub fn edge_threshold(&self, n: usize) -> f64 {
        n as f64 * Self::log(n).powf(self.edge_threshold_log_power)
    }

    /// Walk length `⌈β² n / (divisor · k)⌉` before clamping.
    pub fn raw_walk_length(&self, n: usize, mixing: u64) -> f64 {
        (self.beta * self.beta * n as f64 / (self.walk_length_divisor * mixing as f64)).ceil()
    }
}

impl Default for ConstantsProfile {
    fn default() -> Self {
        Self::desk()
    }
}
