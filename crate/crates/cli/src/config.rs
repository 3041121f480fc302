//! Run configuration shared by every stage.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use simon32_core::experiments::DEFAULT_EXPERIMENT_ROUNDS;
use simon32_core::pddt::{DEFAULT_PDDT_THRESHOLD, DEFAULT_SIG_THRESHOLD};
use simon32_core::trails::DEFAULT_TRAIL_ROUNDS;
use simon32_core::{HwMode, PromisingMetric, ThresholdMode, WordSize};

use crate::error::CliError;

/// Tabular output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!(
                "unknown format {s:?} (expected csv or json)"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// Every knob of a pipeline run. Serialized verbatim into output headers,
/// except for `workers` and `output_dir`, which must not change results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub word_size: WordSize,
    pub pddt_threshold: f64,
    pub threshold_mode: ThresholdMode,
    pub sig_threshold: f64,
    pub sample_percent: f64,
    pub rounds_experiment: usize,
    pub rounds_trail: usize,
    pub trials: usize,
    pub seed: u64,
    pub hw_mode: HwMode,
    /// Largest HW a significant differential may show to count as promising.
    pub extract_hw: u32,
    pub extract_metric: PromisingMetric,
    pub include_trivial: bool,
    pub format: Format,
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            word_size: WordSize::SIMON32,
            pddt_threshold: DEFAULT_PDDT_THRESHOLD,
            threshold_mode: ThresholdMode::AtLeast,
            sig_threshold: DEFAULT_SIG_THRESHOLD,
            sample_percent: 10.0,
            rounds_experiment: DEFAULT_EXPERIMENT_ROUNDS,
            rounds_trail: DEFAULT_TRAIL_ROUNDS,
            trials: 10,
            seed: 0,
            hw_mode: HwMode::Empirical,
            extract_hw: 0,
            extract_metric: PromisingMetric::Transition,
            include_trivial: false,
            format: Format::Csv,
            workers: None,
            output_dir: PathBuf::from("simon32-out"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.word_size.bits() > 16 {
            return bad(format!(
                "word size {} exceeds the 16 bits the table format stores",
                self.word_size
            ));
        }
        if !(self.pddt_threshold.is_finite() && self.pddt_threshold > 0.0) {
            return bad(format!(
                "pddt threshold {} must be positive",
                self.pddt_threshold
            ));
        }
        if !(self.sig_threshold > 0.0 && self.sig_threshold <= 1.0) {
            return bad(format!(
                "significance threshold {} must lie in (0, 1]",
                self.sig_threshold
            ));
        }
        if !(self.sample_percent > 0.0 && self.sample_percent <= 100.0) {
            return bad(format!(
                "sample percent {} must lie in (0, 100]",
                self.sample_percent
            ));
        }
        if self.rounds_experiment == 0 || self.rounds_trail == 0 {
            return bad("round counts must be at least 1".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        let base = RunConfig::default();
        let cases = [
            RunConfig {
                pddt_threshold: 0.0,
                ..base.clone()
            },
            RunConfig {
                pddt_threshold: f64::NAN,
                ..base.clone()
            },
            RunConfig {
                sig_threshold: 1.5,
                ..base.clone()
            },
            RunConfig {
                sample_percent: 0.0,
                ..base.clone()
            },
            RunConfig {
                trials: 0,
                ..base.clone()
            },
            RunConfig {
                rounds_trail: 0,
                ..base.clone()
            },
            RunConfig {
                workers: Some(0),
                ..base.clone()
            },
            RunConfig {
                word_size: WordSize::new(20).unwrap(),
                ..base.clone()
            },
        ];
        for c in cases {
            assert!(matches!(c.validate(), Err(CliError::Config(_))), "{c:?}");
        }
    }

    #[test]
    fn header_json_omits_machine_settings() {
        let c = RunConfig {
            workers: Some(3),
            output_dir: "/elsewhere".into(),
            ..RunConfig::default()
        };
        let v = c.to_json();
        assert!(v.get("workers").is_none());
        assert!(v.get("output_dir").is_none());
        assert_eq!(v["word_size"], 16);
        assert_eq!(v["hw_mode"], "empirical");
        assert_eq!(RunConfig::default().to_json(), v);
    }
}
