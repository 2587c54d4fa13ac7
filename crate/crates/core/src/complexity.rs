//! Conditional complexity `C(x | l(x))` on the fixed machine.
//!
//! [`upper_bound`] reports the best description the stage schedule finds.
//! [`exact`] searches lengths in increasing order and resolves every shorter
//! program, so its value is certified. [`build_table`] inverts the search for a
//! whole length at once: run every program, bucket outputs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitSequence;
use crate::dovetail::{DovetailError, Dovetailer};
use crate::space::{opcode_class, MAX_ENUMERATION_LENGTH};
use crate::tbvm::{resolve, resolve_against, Program, ResolutionStatus, RunLimits, TargetVerdict};

/// Largest `n` a table is built for unless the caller raises it.
pub const DEFAULT_TABLE_MAX_N: usize = 12;

/// The search effort behind an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EstimateBudget {
    /// Dovetail stages run, absent for exhaustive searches.
    pub stages: Option<usize>,
    pub max_program_length: usize,
    pub limits: RunLimits,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityEstimate {
    pub value: usize,
    pub witness: Program,
    /// Every valid program shorter than `value` was resolved under the budget.
    pub certified: bool,
    pub budget: EstimateBudget,
}

impl ComplexityEstimate {
    fn literal(x: &BitSequence, budget: EstimateBudget) -> Self {
        Self {
            value: x.len() + 1,
            witness: Program::literal(x),
            certified: false,
            budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("cannot certify at this budget; best upper bound is {}", best.value)]
    UncertifiableAtBudget { best: Box<ComplexityEstimate> },
    #[error("table for n = {n} exceeds the configured maximum {max}")]
    TableTooLarge { n: usize, max: usize },
    #[error(transparent)]
    Dovetail(#[from] DovetailError),
}

/// Shortest description found by dovetailing to `max_stage`, or the literal.
pub fn upper_bound(
    x: &BitSequence,
    max_stage: usize,
    limits: &RunLimits,
) -> Result<ComplexityEstimate, DovetailError> {
    let budget = EstimateBudget {
        stages: Some(max_stage),
        max_program_length: MAX_ENUMERATION_LENGTH,
        limits: *limits,
    };
    let mut best = ComplexityEstimate::literal(x, budget);
    if max_stage == 0 {
        return Ok(best);
    }
    // Programs as long as the literal cannot improve on it.
    let mut search = Dovetailer::new(x, limits, x.len());
    for _ in 0..max_stage {
        search.run_stage()?;
        if let Some(d) = search.discoveries().iter().min_by_key(|d| d.program.len()) {
            if d.program.len() < best.value {
                best.value = d.program.len();
                best.witness = d.program.clone();
            }
        }
        if best.value > 0 {
            search.restrict_length(best.value - 1);
        }
    }
    best.certified = search.resolved_below(best.value);
    Ok(best)
}

/// Exact `C(x | l(x))` with the default enumeration limit.
pub fn exact(x: &BitSequence, limits: &RunLimits) -> Result<ComplexityEstimate, ComplexityError> {
    exact_with_max_length(x, limits, MAX_ENUMERATION_LENGTH)
}

/// Exact `C(x | l(x))`, resolving every valid program shorter than the answer.
///
/// Fails with [`ComplexityError::UncertifiableAtBudget`] when some shorter
/// program stays unresolved or the search would pass `max_program_length`.
pub fn exact_with_max_length(
    x: &BitSequence,
    limits: &RunLimits,
    max_program_length: usize,
) -> Result<ComplexityEstimate, ComplexityError> {
    let n = x.len() as u64;
    let budget = EstimateBudget {
        stages: None,
        max_program_length,
        limits: *limits,
    };
    let mut certified = true;
    let uncertified = |estimate: ComplexityEstimate| ComplexityError::UncertifiableAtBudget {
        best: Box::new(estimate),
    };
    // Literals shorter than the target's own literal emit the wrong length.
    for len in 0..=x.len() {
        if len > max_program_length {
            return Err(uncertified(ComplexityEstimate::literal(x, budget)));
        }
        let class = opcode_class(len);
        let (first_match, any_unresolved) = (0..class.index_count())
            .into_par_iter()
            .filter_map(|i| class.program(i).map(|p| (i, p)))
            .map(|(i, p)| match resolve_against(&p, n, x, limits) {
                TargetVerdict::Produces { .. } => (Some(i), false),
                TargetVerdict::Refuted => (None, false),
                TargetVerdict::Unresolved => (None, true),
            })
            .reduce(
                || (None, false),
                |a, b| {
                    let first = match (a.0, b.0) {
                        (Some(i), Some(j)) => Some(i.min(j)),
                        (i, j) => i.or(j),
                    };
                    (first, a.1 || b.1)
                },
            );
        if let Some(index) = first_match {
            let estimate = ComplexityEstimate {
                value: len,
                witness: class.program(index).expect("matched index is valid"),
                certified,
                budget,
            };
            return if certified {
                Ok(estimate)
            } else {
                Err(uncertified(estimate))
            };
        }
        certified &= !any_unresolved;
    }
    let mut literal = ComplexityEstimate::literal(x, budget);
    if certified {
        literal.certified = true;
        Ok(literal)
    } else {
        Err(uncertified(literal))
    }
}

/// `C(x | n)` for every `x` of one length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityTable {
    n: usize,
    // Indexed by x read as a big-endian integer, i.e. lexicographic order.
    entries: Vec<ComplexityEstimate>,
    limits: RunLimits,
}

pub fn build_table(n: usize, limits: &RunLimits) -> Result<ComplexityTable, ComplexityError> {
    build_table_with_max(n, limits, DEFAULT_TABLE_MAX_N)
}

fn as_index(x: &BitSequence) -> usize {
    x.iter().fold(0usize, |acc, b| (acc << 1) | b as usize)
}

/// Builds the table in one pass: every opcode program of length at most `n`
/// is resolved once, and each length-`n` output keeps its shortest,
/// lexicographically first producer.
pub fn build_table_with_max(
    n: usize,
    limits: &RunLimits,
    max_n: usize,
) -> Result<ComplexityTable, ComplexityError> {
    if n > max_n || n > MAX_ENUMERATION_LENGTH {
        return Err(ComplexityError::TableTooLarge {
            n,
            max: max_n.min(MAX_ENUMERATION_LENGTH),
        });
    }
    let size = 1usize << n;
    let mut producer: Vec<Option<(usize, u64)>> = vec![None; size];
    // Shortest length at which some program stayed unresolved.
    let mut first_unresolved: Option<usize> = None;
    for len in 0..=n {
        let class = opcode_class(len);
        let results: Vec<(u64, Option<usize>, bool)> = (0..class.index_count())
            .into_par_iter()
            .filter_map(|i| class.program(i).map(|p| (i, p)))
            .filter_map(|(i, p)| match resolve(&p, n as u64, limits) {
                ResolutionStatus::Halts(outcome) if outcome.output.len() == n => {
                    Some((i, Some(as_index(&outcome.output)), false))
                }
                ResolutionStatus::Unresolved { .. } => Some((i, None, true)),
                _ => None,
            })
            .collect();
        for (index, output, unresolved) in results {
            if unresolved {
                first_unresolved.get_or_insert(len);
            }
            if let Some(x) = output {
                if producer[x].is_none() {
                    producer[x] = Some((len, index));
                }
            }
        }
    }
    let budget = EstimateBudget {
        stages: None,
        max_program_length: n,
        limits: *limits,
    };
    let entries = (0..size)
        .map(|xi| {
            let x = BitSequence::from_uint(xi as u64, n);
            let (value, witness) = match producer[xi] {
                Some((len, index)) => (
                    len,
                    opcode_class(len).program(index).expect("producer index is valid"),
                ),
                None => (n + 1, Program::literal(&x)),
            };
            ComplexityEstimate {
                value,
                witness,
                certified: first_unresolved.is_none_or(|u| value <= u),
                budget,
            }
        })
        .collect();
    Ok(ComplexityTable {
        n,
        entries,
        limits: *limits,
    })
}

#[derive(Debug, Clone, Serialize)]
struct TableRow {
    x_bits: String,
    n: usize,
    c_value: usize,
    certified: bool,
    witness_bits: String,
}

#[derive(Serialize)]
struct TableDocument<'a> {
    n: usize,
    limits: &'a RunLimits,
    entries: Vec<TableRow>,
}

impl ComplexityTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn limits(&self) -> &RunLimits {
        &self.limits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, x: &BitSequence) -> Option<&ComplexityEstimate> {
        (x.len() == self.n).then(|| &self.entries[as_index(x)])
    }

    /// Entries in lexicographic order of `x`.
    pub fn iter(&self) -> impl Iterator<Item = (BitSequence, &ComplexityEstimate)> {
        let n = self.n;
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, e)| (BitSequence::from_uint(i as u64, n), e))
    }

    fn rows(&self) -> Vec<TableRow> {
        self.iter()
            .map(|(x, e)| TableRow {
                x_bits: x.to_string(),
                n: self.n,
                c_value: e.value,
                certified: e.certified,
                witness_bits: e.witness.code().to_string(),
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_bits,n,c_value,certified,witness_bits\n");
        for r in self.rows() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.x_bits, r.n, r.c_value, r.certified, r.witness_bits
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableDocument {
            n: self.n,
            limits: &self.limits,
            entries: self.rows(),
        })
        .expect("table rows serialize")
    }
}

/// `|{x : l(x) = n, C(x|n) < m}|`.
pub fn count_below(table: &ComplexityTable, m: usize) -> usize {
    table.entries.iter().filter(|e| e.value < m).count()
}

/// Number of entries per complexity value.
pub fn histogram(table: &ComplexityTable) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for e in &table.entries {
        *counts.entry(e.value).or_insert(0) += 1;
    }
    counts
}
