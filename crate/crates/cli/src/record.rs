//! Result records and their CSV / JSON serialization.

use std::io::Write;

use dimspec_core::pressure::Method;
use dimspec_core::symbolic::{Letter, Word};
use serde::{Deserialize, Serialize};

use crate::config::{Format, ShiftConfig, SystemConfig, TaskConfig};
use crate::CliError;

/// One output row. Enclosures always appear as two bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub task: String,
    pub input: InputEcho,
    pub outputs: Outputs,
    pub flags: Flags,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputEcho {
    pub system: Option<SystemConfig>,
    pub shift: Option<ShiftConfig>,
    pub task: TaskConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    pub converged: bool,
    /// β window sums rejected inside the guard band during the whole run.
    pub guard_band_hits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Outputs {
    Dimension {
        h_lo: f64,
        h_hi: f64,
        depth: usize,
    },
    CurvePoint {
        beta: f64,
        h_lo: f64,
        h_hi: f64,
        depth: usize,
    },
    Inversion {
        target: f64,
        beta: f64,
        h_lo: f64,
        h_hi: f64,
        depth: usize,
        bracket_lo: f64,
        bracket_hi: f64,
    },
    MarkovInversion {
        target: f64,
        m: Option<usize>,
        beta: Option<f64>,
        h_lo: f64,
        h_hi: f64,
        depth: usize,
        component: Vec<Letter>,
        terminal: bool,
    },
    Pressure {
        t: f64,
        depth: usize,
        lower: f64,
        upper: f64,
        method: Method,
    },
    Language {
        n: usize,
        words: Vec<Word>,
    },
    Replacement {
        word: Word,
        result: Word,
        /// 1-based positions that were zeroed.
        positions: Vec<usize>,
        gap: usize,
    },
    Rung {
        size: usize,
        h_lo: f64,
        h_hi: f64,
        depth: usize,
    },
}

/// Decimal rendering with 17 significant digits and trailing zeros removed.
pub fn render(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=16).contains(&exp) {
        let s = format!("{x:.16e}");
        let (mantissa, e) = s.split_once('e').unwrap();
        return format!("{}e{e}", trim_zeros(mantissa));
    }
    let decimals = (16 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_header(task: &str) -> &'static [&'static str] {
    match task {
        "dimension" => &["h_lo", "h_hi", "depth", "converged"],
        "curve" => &["beta", "h_lo", "h_hi", "depth", "converged"],
        "invert" => &["target", "beta", "h_lo", "h_hi", "depth", "bracket_lo", "bracket_hi", "converged"],
        "markov-invert" => &["target", "m", "beta", "h_lo", "h_hi", "depth", "component", "terminal", "converged"],
        "pressure" => &["t", "depth", "lower", "upper", "method"],
        "language" => &["n", "word"],
        "replace" => &["word", "result", "positions", "gap"],
        "exhaust" => &["size", "h_lo", "h_hi", "depth", "converged"],
        _ => &[],
    }
}

fn csv_rows(r: &ResultRecord) -> Vec<Vec<String>> {
    let conv = r.flags.converged.to_string();
    match &r.outputs {
        Outputs::Dimension { h_lo, h_hi, depth } => {
            vec![vec![render(*h_lo), render(*h_hi), depth.to_string(), conv]]
        }
        Outputs::CurvePoint { beta, h_lo, h_hi, depth } => {
            vec![vec![render(*beta), render(*h_lo), render(*h_hi), depth.to_string(), conv]]
        }
        Outputs::Inversion { target, beta, h_lo, h_hi, depth, bracket_lo, bracket_hi } => vec![vec![
            render(*target),
            render(*beta),
            render(*h_lo),
            render(*h_hi),
            depth.to_string(),
            render(*bracket_lo),
            render(*bracket_hi),
            conv,
        ]],
        Outputs::MarkovInversion { target, m, beta, h_lo, h_hi, depth, component, terminal } => vec![vec![
            render(*target),
            m.map(|m| m.to_string()).unwrap_or_default(),
            beta.map(render).unwrap_or_default(),
            render(*h_lo),
            render(*h_hi),
            depth.to_string(),
            join(component),
            terminal.to_string(),
            conv,
        ]],
        Outputs::Pressure { t, depth, lower, upper, method } => vec![vec![
            render(*t),
            depth.to_string(),
            render(*lower),
            render(*upper),
            method.as_str().to_string(),
        ]],
        Outputs::Language { n, words } => words.iter().map(|w| vec![n.to_string(), w.to_string()]).collect(),
        Outputs::Replacement { word, result, positions, gap } => {
            vec![vec![word.to_string(), result.to_string(), join(positions), gap.to_string()]]
        }
        Outputs::Rung { size, h_lo, h_hi, depth } => {
            vec![vec![size.to_string(), render(*h_lo), render(*h_hi), depth.to_string(), conv]]
        }
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Writes `records` of `task` in the requested format.
pub fn emit<W: Write>(records: &[ResultRecord], task: &str, format: Format, out: W) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records).map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(out).map_err(|e| CliError::Io(e.to_string()))?;
            out.flush().map_err(|e| CliError::Io(e.to_string()))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(csv_header(task)).map_err(csv_error)?;
            for r in records {
                for row in csv_rows(r) {
                    w.write_record(&row).map_err(csv_error)?;
                }
            }
            w.flush().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}
