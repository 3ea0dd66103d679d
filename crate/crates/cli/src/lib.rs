//! Config-driven front end for `dimspec-core`: parse a [`RunConfig`], run
//! its task and [`emit`] the resulting [`ResultRecord`]s.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod record;

use dimspec_core::betashift::sparse_zero_replacement;
use dimspec_core::pressure::{DimensionEnclosure, PressureModel};
use dimspec_core::spectrum::{
    beta_dimension, beta_grid, continued_fraction_truncation, dimension_with, exhaustion_dimension,
    invert_dimension, invert_dimension_markov,
};
use dimspec_core::symbolic::{guard_band_hits, language};
use dimspec_core::Error;
use rayon::prelude::*;

pub use config::{Budgets, Format, OutputConfig, RunConfig, ShiftConfig, SystemConfig, TaskConfig};
pub use record::{emit, Flags, InputEcho, Outputs, ResultRecord};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Validation(String),
    Budget(String),
    Io(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Failure(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Budget(m) => write!(f, "budget exhausted: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } => CliError::Budget(e.to_string()),
            Error::Internal(_) => CliError::Failure(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

/// Records produced by a run, plus the first error met. Records computed
/// before or beside a failure are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub records: Vec<ResultRecord>,
    pub error: Option<CliError>,
}

impl RunOutcome {
    /// 0 on success, 2 on validation errors, 3 when a budget ran out
    /// (including enclosures that stopped short of their target width).
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            Some(e) => e.exit_code(),
            None if self.records.iter().any(|r| !r.flags.converged) => 3,
            None => 0,
        }
    }
}

/// Per-record results before flags are attached.
type Items = Vec<Result<(Outputs, bool), CliError>>;

pub fn run(config: &RunConfig) -> RunOutcome {
    let hits_before = guard_band_hits();
    let items = match config.validate().and_then(|_| dispatch(config)) {
        Ok(items) => items,
        Err(e) => {
            return RunOutcome {
                records: Vec::new(),
                error: Some(e),
            }
        }
    };
    let hits = guard_band_hits() - hits_before;
    let input = InputEcho {
        system: config.system.clone(),
        shift: config.shift.clone(),
        task: config.task.clone(),
    };
    let mut records = Vec::new();
    let mut error = None;
    for item in items {
        match item {
            Ok((outputs, converged)) => records.push(ResultRecord {
                task: config.task.name().to_string(),
                input: input.clone(),
                outputs,
                flags: Flags {
                    converged,
                    guard_band_hits: hits,
                },
            }),
            Err(e) => {
                error.get_or_insert(e);
            }
        }
    }
    RunOutcome { records, error }
}

fn enclosure_output(e: &DimensionEnclosure) -> (Outputs, bool) {
    (
        Outputs::Dimension {
            h_lo: e.h_lo,
            h_hi: e.h_hi,
            depth: e.depth,
        },
        e.converged,
    )
}

fn dispatch(config: &RunConfig) -> Result<Items, CliError> {
    let budgets = &config.budgets;
    let opts = budgets.dimension_options();
    let system = config.system.as_ref().map(SystemConfig::build).transpose()?;
    let shift = config.shift.as_ref().map(ShiftConfig::build).transpose()?;
    // validate() guarantees presence where the task needs them
    let sys = || system.as_ref().expect("validated system");
    let z = || shift.as_ref().expect("validated shift");

    Ok(match &config.task {
        TaskConfig::Dimension => {
            vec![Ok(enclosure_output(&dimension_with(z(), sys(), &opts)?))]
        }
        TaskConfig::Invert { target } => {
            let inv = invert_dimension(sys(), *target, budgets.epsilon, &opts)?;
            let e = inv.enclosure;
            vec![Ok((
                Outputs::Inversion {
                    target: *target,
                    beta: inv.beta,
                    h_lo: e.h_lo,
                    h_hi: e.h_hi,
                    depth: e.depth,
                    bracket_lo: inv.bracket.0,
                    bracket_hi: inv.bracket.1,
                },
                inv.converged,
            ))]
        }
        TaskConfig::Curve { beta_lo, beta_hi, step } => {
            let grid = beta_grid(sys(), *beta_lo, *beta_hi, *step)?;
            grid.par_iter()
                .map(|&beta| {
                    let e = beta_dimension(sys(), beta, &opts)?;
                    Ok((
                        Outputs::CurvePoint {
                            beta,
                            h_lo: e.h_lo,
                            h_hi: e.h_hi,
                            depth: e.depth,
                        },
                        e.converged,
                    ))
                })
                .collect()
        }
        TaskConfig::Pressure { t, depth } => {
            let n = depth.unwrap_or(budgets.max_depth);
            let model = PressureModel::build(z(), sys(), n, &budgets.pressure_options())?;
            t.iter()
                .map(|&t| {
                    let p = model.enclosure(t)?;
                    Ok((
                        Outputs::Pressure {
                            t,
                            depth: p.depth,
                            lower: p.lower,
                            upper: p.upper,
                            method: p.method,
                        },
                        // a shallower model than requested means the word budget bit
                        p.depth == n,
                    ))
                })
                .collect()
        }
        TaskConfig::Language { n } => {
            let words = language(z(), *n, budgets.max_words)?;
            vec![Ok((Outputs::Language { n: *n, words }, true))]
        }
        TaskConfig::Replace { beta, beta_prime, k, word } => {
            let plan = sparse_zero_replacement(word, *beta, *k, *beta_prime)?;
            vec![Ok((
                Outputs::Replacement {
                    word: word.clone(),
                    result: plan.result,
                    positions: plan.positions.into_iter().collect(),
                    gap: plan.gap,
                },
                true,
            ))]
        }
        TaskConfig::Exhaust { sizes } => exhaustion_dimension(sizes, continued_fraction_truncation, &opts)?
            .into_iter()
            .map(|rung| {
                let e = rung.result?;
                Ok((
                    Outputs::Rung {
                        size: rung.size,
                        h_lo: e.h_lo,
                        h_hi: e.h_hi,
                        depth: e.depth,
                    },
                    e.converged,
                ))
            })
            .collect(),
        TaskConfig::MarkovInvert { target } => {
            let inv = invert_dimension_markov(z(), sys(), *target, budgets.epsilon, &opts)?;
            let e = inv.enclosure;
            vec![Ok((
                Outputs::MarkovInversion {
                    target: *target,
                    m: inv.m,
                    beta: inv.beta,
                    h_lo: e.h_lo,
                    h_hi: e.h_hi,
                    depth: e.depth,
                    component: inv.component,
                    terminal: inv.terminal,
                },
                inv.converged,
            ))]
        }
    })
}
