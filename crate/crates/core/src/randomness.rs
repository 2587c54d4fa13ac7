//! Randomness deficiency `δ0(x) = l(x) - C(x | l(x)) - 1` and one-sided verdicts.
//!
//! A short witness program proves a sequence non-random. Randomness can only be
//! asserted when the complexity value is certified exact, which at desk scale
//! means every shorter program was resolved. Anything else is reported as
//! "no evidence at budget" and never collapses into "random".

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitSequence;
use crate::complexity::{
    exact_with_max_length, upper_bound, ComplexityError, ComplexityEstimate, ComplexityTable,
};
use crate::dovetail::DovetailError;
use crate::space::MAX_ENUMERATION_LENGTH;
use crate::tbvm::{run, Program, RunLimits};

/// Smallest deficiency possible: the literal program has length `l(x) + 1`.
pub const MIN_DEFICIENCY: i64 = -2;

/// Default dovetail depth for classification.
pub const DEFAULT_MAX_STAGE: usize = 24;

pub fn delta0(n: usize, c_value: usize) -> i64 {
    n as i64 - c_value as i64 - 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deficiency {
    pub value: i64,
    pub basis: ComplexityEstimate,
}

impl Deficiency {
    pub fn of(x: &BitSequence, basis: ComplexityEstimate) -> Self {
        Self {
            value: delta0(x.len(), basis.value),
            basis,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeficiencyVerdict {
    /// A replayed witness shows `δ0 >= deficiency`.
    CertifiedNonRandom { deficiency: i64, witness: Program },
    /// `δ0 <= level` with an exact, certified complexity value.
    CertifiedRandom {
        level: i64,
        deficiency: i64,
        estimate: ComplexityEstimate,
    },
    /// Nothing could be certified either way.
    NoEvidenceAtBudget { best: ComplexityEstimate },
}

impl DeficiencyVerdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            DeficiencyVerdict::CertifiedNonRandom { .. } => VerdictKind::CertifiedNonRandom,
            DeficiencyVerdict::CertifiedRandom { .. } => VerdictKind::CertifiedRandom,
            DeficiencyVerdict::NoEvidenceAtBudget { .. } => VerdictKind::NoEvidenceAtBudget,
        }
    }

    /// The best known lower bound on `δ0` (exact for certified estimates).
    pub fn deficiency_lower_bound(&self, n: usize) -> i64 {
        match self {
            DeficiencyVerdict::CertifiedNonRandom { deficiency, .. } => *deficiency,
            DeficiencyVerdict::CertifiedRandom { deficiency, .. } => *deficiency,
            DeficiencyVerdict::NoEvidenceAtBudget { best } => delta0(n, best.value),
        }
    }

    pub fn witness(&self) -> Option<&Program> {
        match self {
            DeficiencyVerdict::CertifiedNonRandom { witness, .. } => Some(witness),
            DeficiencyVerdict::CertifiedRandom { estimate, .. } => Some(&estimate.witness),
            DeficiencyVerdict::NoEvidenceAtBudget { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    CertifiedNonRandom,
    CertifiedRandom,
    NoEvidenceAtBudget,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::CertifiedNonRandom => "certified-non-random",
            VerdictKind::CertifiedRandom => "certified-random",
            VerdictKind::NoEvidenceAtBudget => "no-evidence-at-budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandomnessError {
    #[error("level c = {0} is below the minimum possible deficiency -2")]
    LevelTooLow(i64),
    #[error("block length must be at least 1")]
    ZeroBlock,
    #[error("input has {available} bits, fewer than one block of {block_n}")]
    EmptyInput { available: usize, block_n: usize },
    #[error(transparent)]
    Dovetail(#[from] DovetailError),
}

/// Turns an estimate into a verdict at level `c`.
///
/// This is the only place verdicts are formed. The witness is replayed before
/// non-randomness is claimed, and randomness requires `estimate.certified`.
pub fn decide(x: &BitSequence, c: i64, estimate: ComplexityEstimate) -> DeficiencyVerdict {
    let deficiency = delta0(x.len(), estimate.value);
    let replays = run(&estimate.witness, x.len() as u64, &estimate.budget.limits).halted_with(x)
        && estimate.witness.len() == estimate.value;
    if !replays {
        let budget = estimate.budget;
        return DeficiencyVerdict::NoEvidenceAtBudget {
            best: ComplexityEstimate {
                value: x.len() + 1,
                witness: Program::literal(x),
                certified: false,
                budget,
            },
        };
    }
    if deficiency > c {
        DeficiencyVerdict::CertifiedNonRandom {
            deficiency,
            witness: estimate.witness,
        }
    } else if estimate.certified {
        DeficiencyVerdict::CertifiedRandom {
            level: c,
            deficiency,
            estimate,
        }
    } else {
        DeficiencyVerdict::NoEvidenceAtBudget { best: estimate }
    }
}

/// Search effort used to classify a sequence.
#[derive(Debug, Clone, Copy)]
pub struct Classifier<'t> {
    pub max_stage: usize,
    pub limits: RunLimits,
    /// Exhaustive certification is attempted only up to this program length.
    pub max_program_length: usize,
    table: Option<&'t ComplexityTable>,
}

impl Default for Classifier<'_> {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_STAGE, RunLimits::default())
    }
}

impl<'t> Classifier<'t> {
    pub fn new(max_stage: usize, limits: RunLimits) -> Self {
        Self {
            max_stage,
            limits,
            max_program_length: MAX_ENUMERATION_LENGTH,
            table: None,
        }
    }

    pub fn with_max_program_length(mut self, len: usize) -> Self {
        self.max_program_length = len;
        self
    }

    /// Uses precomputed values for sequences of the table's length.
    pub fn with_table(mut self, table: &'t ComplexityTable) -> Self {
        self.table = Some(table);
        self
    }

    pub fn classify(&self, x: &BitSequence, c: i64) -> Result<DeficiencyVerdict, RandomnessError> {
        if c < MIN_DEFICIENCY {
            return Err(RandomnessError::LevelTooLow(c));
        }
        if let Some(entry) = self.table.and_then(|t| t.get(x)) {
            return Ok(decide(x, c, entry.clone()));
        }
        let bound = upper_bound(x, self.max_stage, &self.limits)?;
        if delta0(x.len(), bound.value) > c || bound.certified {
            return Ok(decide(x, c, bound));
        }
        // The exhaustive search must reach length l(x) to certify anything.
        if x.len() > self.max_program_length {
            return Ok(decide(x, c, bound));
        }
        let estimate = match exact_with_max_length(x, &self.limits, self.max_program_length) {
            Ok(estimate) => estimate,
            Err(ComplexityError::UncertifiableAtBudget { best }) if best.value < bound.value => *best,
            Err(_) => bound,
        };
        Ok(decide(x, c, estimate))
    }

    /// Classifies consecutive complete blocks of `block_n` bits.
    pub fn analyze_stream(
        &self,
        bits: &BitSequence,
        block_n: usize,
        c: i64,
    ) -> Result<StreamReport, RandomnessError> {
        if block_n == 0 {
            return Err(RandomnessError::ZeroBlock);
        }
        if c < MIN_DEFICIENCY {
            return Err(RandomnessError::LevelTooLow(c));
        }
        if bits.len() < block_n {
            return Err(RandomnessError::EmptyInput {
                available: bits.len(),
                block_n,
            });
        }
        let count = bits.len() / block_n;
        let blocks = (0..count)
            .into_par_iter()
            .map(|index| {
                let x = bits.slice(index * block_n, (index + 1) * block_n);
                let verdict = self.classify(&x, c)?;
                Ok(BlockVerdict {
                    index,
                    verdict: verdict.kind(),
                    deficiency: verdict.deficiency_lower_bound(block_n),
                    witness_bits: match &verdict {
                        DeficiencyVerdict::CertifiedNonRandom { witness, .. } => {
                            Some(witness.code().to_string())
                        }
                        _ => None,
                    },
                })
            })
            .collect::<Result<Vec<_>, RandomnessError>>()?;
        let mut counts = VerdictCounts::default();
        for b in &blocks {
            match b.verdict {
                VerdictKind::CertifiedNonRandom => counts.certified_non_random += 1,
                VerdictKind::CertifiedRandom => counts.certified_random += 1,
                VerdictKind::NoEvidenceAtBudget => counts.no_evidence_at_budget += 1,
            }
        }
        Ok(StreamReport {
            block_n,
            level_c: c,
            flagged_fraction: counts.certified_non_random as f64 / count as f64,
            counts,
            trailing_bits: bits.len() % block_n,
            max_stage: self.max_stage,
            max_program_length: self.max_program_length,
            table_n: self.table.map(|t| t.n()),
            limits: self.limits,
            blocks,
        })
    }
}

pub fn classify(
    x: &BitSequence,
    c: i64,
    max_stage: usize,
    limits: &RunLimits,
) -> Result<DeficiencyVerdict, RandomnessError> {
    Classifier::new(max_stage, *limits).classify(x, c)
}

pub fn analyze_stream(
    bits: &BitSequence,
    block_n: usize,
    c: i64,
    max_stage: usize,
    limits: &RunLimits,
) -> Result<StreamReport, RandomnessError> {
    Classifier::new(max_stage, *limits).analyze_stream(bits, block_n, c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockVerdict {
    pub index: usize,
    pub verdict: VerdictKind,
    pub deficiency: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_bits: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub certified_non_random: usize,
    pub certified_random: usize,
    pub no_evidence_at_budget: usize,
}

impl VerdictCounts {
    pub fn total(&self) -> usize {
        self.certified_non_random + self.certified_random + self.no_evidence_at_budget
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamReport {
    pub block_n: usize,
    pub level_c: i64,
    pub blocks: Vec<BlockVerdict>,
    pub counts: VerdictCounts,
    pub flagged_fraction: f64,
    /// Bits after the last complete block, excluded from classification.
    pub trailing_bits: usize,
    pub max_stage: usize,
    pub max_program_length: usize,
    pub table_n: Option<usize>,
    pub limits: RunLimits,
}

impl StreamReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,verdict,deficiency,witness_bits\n");
        for b in &self.blocks {
            out.push_str(&format!(
                "{},{},{},{}\n",
                b.index,
                b.verdict.as_str(),
                b.deficiency,
                b.witness_bits.as_deref().unwrap_or("")
            ));
        }
        out
    }
}

/// Fraction of length-`n` sequences with `δ0 >= k`.
pub fn deficiency_fraction(table: &ComplexityTable, k: i64) -> f64 {
    let n = table.n();
    let hits = table.iter().filter(|(_, e)| delta0(n, e.value) >= k).count();
    hits as f64 / table.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::{build_table, EstimateBudget};

    fn bits(s: &str) -> BitSequence {
        BitSequence::parse(s).unwrap()
    }

    #[test]
    fn delta0_arithmetic() {
        assert_eq!(delta0(4, 5), -2);
        assert_eq!(delta0(20, 16), 3);
        for n in 0..50 {
            assert_eq!(delta0(n, n + 1), -2);
        }
    }

    #[test]
    fn four_zeros_are_random() {
        let v = classify(&bits("0000"), 0, 8, &RunLimits::default()).unwrap();
        match v {
            DeficiencyVerdict::CertifiedRandom { deficiency, estimate, .. } => {
                assert_eq!(deficiency, -2);
                assert!(estimate.certified);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn uncertified_estimate_never_random() {
        let x = bits("0110");
        let forced = ComplexityEstimate {
            value: 5,
            witness: Program::literal(&x),
            certified: false,
            budget: EstimateBudget {
                stages: None,
                max_program_length: 0,
                limits: RunLimits::default(),
            },
        };
        for c in -2..6 {
            assert_eq!(
                decide(&x, c, forced.clone()).kind(),
                VerdictKind::NoEvidenceAtBudget
            );
        }
    }

    #[test]
    fn bogus_witness_is_not_evidence() {
        let x = BitSequence::repeat(true, 20);
        let forced = ComplexityEstimate {
            value: 1,
            witness: crate::tbvm::parse(&bits("0")).unwrap(),
            certified: true,
            budget: EstimateBudget {
                stages: None,
                max_program_length: 0,
                limits: RunLimits::default(),
            },
        };
        assert_eq!(decide(&x, 0, forced).kind(), VerdictKind::NoEvidenceAtBudget);
    }

    #[test]
    fn level_validation() {
        assert_eq!(
            classify(&bits("0"), -3, 4, &RunLimits::default()),
            Err(RandomnessError::LevelTooLow(-3))
        );
        assert!(matches!(
            analyze_stream(&bits(""), 20, 0, 4, &RunLimits::default()),
            Err(RandomnessError::EmptyInput { .. })
        ));
        assert_eq!(
            analyze_stream(&bits("01"), 0, 0, 4, &RunLimits::default()),
            Err(RandomnessError::ZeroBlock)
        );
    }

    #[test]
    fn trailing_block_excluded() {
        let report = analyze_stream(&bits("0000000"), 3, 0, 4, &RunLimits::default()).unwrap();
        assert_eq!(report.blocks.len(), 2);
        assert_eq!(report.trailing_bits, 1);
        assert_eq!(report.counts.total(), 2);
    }

    #[test]
    fn table_fractions() {
        let table = build_table(8, &RunLimits::default()).unwrap();
        assert_eq!(deficiency_fraction(&table, -2), 1.0);
        assert_eq!(deficiency_fraction(&table, 0), 0.0);
        assert_eq!(deficiency_fraction(&table, 8), 0.0);
    }
}
