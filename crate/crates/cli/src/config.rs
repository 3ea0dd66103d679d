//! Run configuration: one JSON document naming a system, a shift, a task,
//! budgets and an output target.

use std::path::PathBuf;

use dimspec_core::conformal::SystemSpec;
use dimspec_core::pressure::PressureOptions;
use dimspec_core::spectrum::DimensionOptions;
use dimspec_core::symbolic::{Letter, ShiftSpec, Word};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub system: Option<SystemConfig>,
    #[serde(default)]
    pub shift: Option<ShiftConfig>,
    pub task: TaskConfig,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemConfig {
    Affine {
        ratios: Vec<f64>,
        offsets: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_override: Option<f64>,
    },
    ContinuedFraction {
        digits: Vec<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_override: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ShiftConfig {
    Full {
        alphabet_size: usize,
    },
    Beta {
        beta: f64,
    },
    Markov {
        alphabet_size: usize,
        /// Allowed transitions `[i, j]`.
        edges: Vec<(Letter, Letter)>,
    },
    Coded {
        base: Box<ShiftConfig>,
        blocks: Vec<Word>,
        index_beta: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskConfig {
    Dimension,
    Invert {
        target: f64,
    },
    Curve {
        beta_lo: f64,
        beta_hi: f64,
        step: f64,
    },
    Pressure {
        t: Vec<f64>,
        /// Defaults to `budgets.max_depth`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
    },
    Language {
        n: usize,
    },
    Replace {
        beta: f64,
        beta_prime: f64,
        k: usize,
        word: Word,
    },
    Exhaust {
        sizes: Vec<usize>,
    },
    MarkovInvert {
        target: f64,
    },
}

impl TaskConfig {
    pub fn name(&self) -> &'static str {
        match self {
            TaskConfig::Dimension => "dimension",
            TaskConfig::Invert { .. } => "invert",
            TaskConfig::Curve { .. } => "curve",
            TaskConfig::Pressure { .. } => "pressure",
            TaskConfig::Language { .. } => "language",
            TaskConfig::Replace { .. } => "replace",
            TaskConfig::Exhaust { .. } => "exhaust",
            TaskConfig::MarkovInvert { .. } => "markov-invert",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    pub max_depth: usize,
    pub max_words: u64,
    pub target_width: f64,
    pub epsilon: f64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_depth: 20,
            max_words: 1 << 22,
            target_width: 0.05,
            epsilon: 0.01,
        }
    }
}

impl Budgets {
    pub fn dimension_options(&self) -> DimensionOptions {
        DimensionOptions {
            target_width: self.target_width,
            max_depth: self.max_depth,
            pressure: self.pressure_options(),
        }
    }

    pub fn pressure_options(&self) -> PressureOptions {
        PressureOptions {
            max_words: self.max_words,
            ..PressureOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    /// Standard output when absent.
    pub path: Option<PathBuf>,
}

impl RunConfig {
    /// Parses a JSON document; errors name the path of the offending field.
    pub fn from_json(text: &str) -> Result<RunConfig, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| CliError::Validation(format!("{}: {}", e.path(), e.inner())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let b = &self.budgets;
        if b.max_depth == 0 || b.max_words == 0 || !(b.target_width > 0.0) || !(b.epsilon > 0.0) {
            return Err(CliError::Validation("budgets: every budget must be positive".into()));
        }
        let needs_system = !matches!(
            self.task,
            TaskConfig::Language { .. } | TaskConfig::Replace { .. } | TaskConfig::Exhaust { .. }
        );
        if needs_system && self.system.is_none() {
            return Err(CliError::Validation(format!("system: required by task {}", self.task.name())));
        }
        let shift_ok = match (&self.task, &self.shift) {
            (TaskConfig::Dimension | TaskConfig::Pressure { .. } | TaskConfig::Language { .. }, s) => s.is_some(),
            (TaskConfig::MarkovInvert { .. }, s) => matches!(s, Some(ShiftConfig::Markov { .. })),
            // these sweep β themselves or need no shift at all
            (
                TaskConfig::Invert { .. } | TaskConfig::Curve { .. } | TaskConfig::Replace { .. } | TaskConfig::Exhaust { .. },
                s,
            ) => s.is_none(),
        };
        if !shift_ok {
            let found = self.shift.as_ref().map_or("none", ShiftConfig::kind);
            return Err(CliError::Validation(format!(
                "shift: kind {found} does not fit task {}",
                self.task.name()
            )));
        }
        if let (Some(sys), Some(shift)) = (&self.system, &self.shift) {
            let maps = sys.letter_count();
            let letters = shift.letters_used();
            if letters > maps {
                return Err(CliError::Validation(format!(
                    "shift: uses {letters} letters but the system has {maps} maps"
                )));
            }
        }
        Ok(())
    }
}

impl SystemConfig {
    pub fn letter_count(&self) -> usize {
        match self {
            SystemConfig::Affine { ratios, .. } => ratios.len(),
            SystemConfig::ContinuedFraction { digits, .. } => digits.len(),
        }
    }

    pub fn build(&self) -> Result<SystemSpec, CliError> {
        let (sys, k) = match self {
            SystemConfig::Affine { ratios, offsets, k_override } => {
                (SystemSpec::affine(ratios.clone(), offsets.clone()), *k_override)
            }
            SystemConfig::ContinuedFraction { digits, k_override } => {
                (SystemSpec::continued_fraction(digits.clone()), *k_override)
            }
        };
        let sys = sys.map_err(|e| CliError::Validation(format!("system: {e}")))?;
        match k {
            Some(k) => sys
                .with_k_override(k)
                .map_err(|e| CliError::Validation(format!("system.k_override: {e}"))),
            None => Ok(sys),
        }
    }
}

impl ShiftConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ShiftConfig::Full { .. } => "full",
            ShiftConfig::Beta { .. } => "beta",
            ShiftConfig::Markov { .. } => "markov",
            ShiftConfig::Coded { .. } => "coded",
        }
    }

    /// Size of the alphabet the shift draws from.
    pub fn letters_used(&self) -> usize {
        match self {
            ShiftConfig::Full { alphabet_size } | ShiftConfig::Markov { alphabet_size, .. } => *alphabet_size,
            ShiftConfig::Beta { beta } => beta.ceil().max(1.0) as usize,
            ShiftConfig::Coded { base, .. } => base.letters_used(),
        }
    }

    pub fn build(&self) -> Result<ShiftSpec, CliError> {
        let spec = match self {
            ShiftConfig::Full { alphabet_size } => ShiftSpec::full(*alphabet_size),
            ShiftConfig::Beta { beta } => ShiftSpec::beta(*beta),
            ShiftConfig::Markov { alphabet_size, edges } => ShiftSpec::markov(*alphabet_size, edges),
            ShiftConfig::Coded { base, blocks, index_beta } => {
                ShiftSpec::coded(base.build()?, blocks.clone(), *index_beta)
            }
        };
        spec.map_err(|e| CliError::Validation(format!("shift: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, CliError> {
        RunConfig::from_json(text)
    }

    #[test]
    fn defaults_fill_budgets_and_output() {
        let c = parse(r#"{"shift": {"kind": "full", "alphabet_size": 2}, "task": {"name": "language", "n": 2}}"#).unwrap();
        assert_eq!(c.budgets, Budgets::default());
        assert_eq!(c.output.format, Format::Json);
        assert!(c.output.path.is_none());
    }

    #[test]
    fn errors_name_the_field() {
        let err = parse(r#"{"task": {"name": "replace", "beta": 1.5, "beta_prime": 1.8, "k": 1, "word": "11"}, "budgets": {"max_depth": "deep"}}"#)
            .unwrap_err();
        let CliError::Validation(msg) = err else { panic!("{err:?}") };
        assert!(msg.starts_with("budgets.max_depth"), "{msg}");
        assert!(parse(r#"{"task": {"name": "teleport"}}"#).is_err());
        assert!(parse(r#"{"task": {"name": "dimension"}, "colour": 1}"#).is_err());
    }

    #[test]
    fn task_shift_mismatches_rejected() {
        let sys = r#""system": {"family": "affine", "ratios": [0.5, 0.5], "offsets": [0, 0.5]}"#;
        let markov = r#""shift": {"kind": "markov", "alphabet_size": 2, "edges": [[0, 0], [0, 1], [1, 0]]}"#;
        assert!(parse(&format!(r#"{{{sys}, {markov}, "task": {{"name": "invert", "target": 0.5}}}}"#)).is_err());
        assert!(parse(&format!(r#"{{{sys}, {markov}, "task": {{"name": "markov-invert", "target": 0.5}}}}"#)).is_ok());
        assert!(parse(&format!(r#"{{{sys}, "task": {{"name": "markov-invert", "target": 0.5}}}}"#)).is_err());
        assert!(parse(&format!(r#"{{{sys}, "task": {{"name": "dimension"}}}}"#)).is_err());
        let wide = r#""shift": {"kind": "full", "alphabet_size": 3}"#;
        assert!(parse(&format!(r#"{{{sys}, {wide}, "task": {{"name": "dimension"}}}}"#)).is_err());
    }

    #[test]
    fn budgets_must_be_positive() {
        let base = r#""task": {"name": "replace", "beta": 1.5, "beta_prime": 1.8, "k": 1, "word": "11"}"#;
        for b in ["max_depth\": 0", "max_words\": 0", "target_width\": 0", "epsilon\": -1"] {
            assert!(parse(&format!(r#"{{{base}, "budgets": {{"{b}}}}}"#)).is_err(), "{b}");
        }
    }
}
