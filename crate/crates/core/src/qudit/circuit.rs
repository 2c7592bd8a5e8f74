//! Line-oriented circuit files.
//!
//! ```text
//! # comment
//! H 0 fourier
//! UF 0 1 0,1,1
//! QFT
//! MEASURE 1000 7
//! ```

use std::str::FromStr;

use serde::Serialize;

use super::gates::{hadamard, uf_gate, HadamardVariant};
use super::qft::qft;
use super::register::{measure, Histogram, HistogramFile, QuditRegister};
use super::{ModPFunction, QuditError, NORM_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instruction {
    Hadamard { pos: usize, variant: HadamardVariant },
    Uf { xpos: usize, spos: usize, table: Vec<u32> },
    Qft,
    Measure { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Circuit {
    pub instructions: Vec<Instruction>,
}

fn number<T: FromStr>(tok: Option<&str>, what: &str, line: usize) -> Result<T, QuditError> {
    let tok = tok.ok_or_else(|| QuditError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| QuditError::Parse {
        line,
        message: format!("invalid {what} {tok:?}"),
    })
}

impl FromStr for Circuit {
    type Err = QuditError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut instructions = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut toks = body.split_whitespace();
            let op = toks.next().unwrap_or_default().to_ascii_uppercase();
            let ins = match op.as_str() {
                "H" => {
                    let pos = number(toks.next(), "position", line)?;
                    let variant = match toks.next() {
                        None => HadamardVariant::default(),
                        Some(v) => v.parse().map_err(|message| QuditError::Parse { line, message })?,
                    };
                    Instruction::Hadamard { pos, variant }
                }
                "UF" => {
                    let xpos = number(toks.next(), "control position", line)?;
                    let spos = number(toks.next(), "target position", line)?;
                    let csv = toks.next().ok_or_else(|| QuditError::Parse {
                        line,
                        message: "missing f table".into(),
                    })?;
                    let table = csv
                        .split(',')
                        .map(|v| number(Some(v.trim()), "table entry", line))
                        .collect::<Result<Vec<u32>, _>>()?;
                    Instruction::Uf { xpos, spos, table }
                }
                "QFT" => Instruction::Qft,
                "MEASURE" => Instruction::Measure {
                    shots: number(toks.next(), "shot count", line)?,
                    seed: number(toks.next(), "seed", line)?,
                },
                other => {
                    return Err(QuditError::Parse {
                        line,
                        message: format!("unknown instruction {other:?}"),
                    })
                }
            };
            if let Some(extra) = toks.next() {
                return Err(QuditError::Parse {
                    line,
                    message: format!("unexpected token {extra:?}"),
                });
            }
            instructions.push(ins);
        }
        Ok(Circuit { instructions })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Rescale an unnormalized register to unit norm before measuring it.
    pub renormalize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub state: QuditRegister,
    pub histograms: Vec<Histogram>,
    pub warnings: Vec<String>,
}

impl RunReport {
    /// `{p, n, histograms, warnings}`; the final state is left out.
    pub fn to_json(&self) -> String {
        let report = ReportFile {
            p: self.state.levels(),
            n: self.state.qudits(),
            histograms: self.histograms.iter().map(Histogram::file).collect(),
            warnings: &self.warnings,
        };
        serde_json::to_string_pretty(&report).expect("serializable")
    }
}

#[derive(Serialize)]
struct ReportFile<'a> {
    p: u32,
    n: usize,
    histograms: Vec<HistogramFile>,
    warnings: &'a [String],
}

/// Applies the instructions in order. A non-unitary gate or a drift of the
/// norm adds a warning; measuring an unnormalized register is an error unless
/// `options.renormalize` is set.
pub fn run_circuit(circuit: &Circuit, initial: &QuditRegister, options: RunOptions) -> Result<RunReport, QuditError> {
    run_circuit_observed(circuit, initial, options, |_| {})
}

/// [`run_circuit`] that also hands each warning to `observe` as it is raised,
/// so that warnings preceding a failure are not lost.
pub fn run_circuit_observed(
    circuit: &Circuit,
    initial: &QuditRegister,
    options: RunOptions,
    mut observe: impl FnMut(&str),
) -> Result<RunReport, QuditError> {
    let mut warnings: Vec<String> = Vec::new();
    let mut warn = |w: String| {
        observe(&w);
        warnings.push(w);
    };
    let p = initial.levels();
    let mut state = initial.clone();
    let mut histograms = Vec::new();
    for (step, ins) in circuit.instructions.iter().enumerate() {
        let step = step + 1;
        match ins {
            Instruction::Hadamard { pos, variant } => {
                let h = hadamard(p, *variant)?;
                if h.unitarity_report() > NORM_TOLERANCE {
                    warn(format!(
                        "step {step}: Hadamard for p = {p} is not unitary (max |H†H - I| = {:.6})",
                        h.unitarity_report()
                    ));
                }
                state = state.apply_single(&h, *pos)?;
            }
            Instruction::Uf { xpos, spos, table } => {
                let g = uf_gate(&ModPFunction::new(p, table.clone())?);
                state = state.apply_pair(&g, *xpos, *spos)?;
            }
            Instruction::Qft => state = qft(&state),
            Instruction::Measure { shots, seed } => {
                if !state.is_normalized() {
                    if !options.renormalize {
                        return Err(QuditError::Unnormalized(state.squared_norm()));
                    }
                    warn(format!(
                        "step {step}: renormalized register with squared norm {:.6}",
                        state.squared_norm()
                    ));
                    state = state.renormalize()?;
                }
                histograms.push(measure(&state, *shots, *seed)?);
            }
        }
        if !state.is_normalized() {
            warn(format!(
                "step {step}: register is not normalized (squared norm {:.6})",
                state.squared_norm()
            ));
        }
    }
    Ok(RunReport {
        state,
        histograms,
        warnings,
    })
}
