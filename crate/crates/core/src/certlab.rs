//! Checkable lower bounds on complexity, and nothing stronger.
//!
//! A certificate states `C^s(x | n) >= m`: no valid program shorter than `m`
//! bits halts with output `x` on input `n` within `s` steps. It is issued by
//! running every such program and recording how each one ended; a verifier
//! redoes the enumeration. Every certificate carries its step bound `s`. There
//! is deliberately no way to issue an unbounded lower bound.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSequence;
use crate::space::{literal_programs, opcode_class, MAX_ENUMERATION_LENGTH};
use crate::tbvm::{resolve, DivergenceReason, Program, ResolutionStatus, RunLimits};

pub const CERTIFICATE_VERSION: &str = "kolmo-cert/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedLowerBoundStatement {
    pub x_bits: BitSequence,
    pub n: u64,
    /// Claimed lower bound on the description length.
    pub m: usize,
    /// Step budget each program is run for.
    pub s: u64,
}

/// How the programs of one length ended.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthTally {
    pub length: usize,
    pub halted_other: u64,
    pub diverged: u64,
    pub step_limited: u64,
    pub output_limited: u64,
}

impl LengthTally {
    pub fn total(&self) -> u64 {
        self.halted_other + self.diverged + self.step_limited + self.output_limited
    }
}

/// Machine caps other than the step budget, fixed at issue time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssueLimits {
    pub output_cap: usize,
    pub reg_cap: u64,
    pub tracked_state_cap: usize,
}

impl IssueLimits {
    fn run_limits(&self, s: u64) -> RunLimits {
        RunLimits {
            step_budget: s,
            output_cap: self.output_cap,
            reg_cap: self.reg_cap,
            tracked_state_cap: self.tracked_state_cap,
        }
    }
}

impl From<&RunLimits> for IssueLimits {
    fn from(l: &RunLimits) -> Self {
        Self {
            output_cap: l.output_cap,
            reg_cap: l.reg_cap,
            tracked_state_cap: l.tracked_state_cap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedLowerBoundCertificate {
    pub version: String,
    pub statement: BoundedLowerBoundStatement,
    pub tally: Vec<LengthTally>,
    pub limits: IssueLimits,
}

impl BoundedLowerBoundCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("statement is false: program \"{}\" outputs x", .0.code())]
    WitnessExists(Program),
    #[error("invalid statement: {0}")]
    InvalidStatement(String),
    #[error("refusing to enumerate programs up to length {length} (limit {limit})")]
    SpaceTooLarge { length: usize, limit: usize },
    #[error("no candidate up to length {max_length} admits a certificate")]
    NotFoundWithinBudget { max_length: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum RejectReason {
    WitnessFound { witness_bits: String },
    TallyMismatch { length: usize },
    Malformed { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<RejectReason>,
    pub programs_checked: u64,
}

#[derive(Clone, Copy)]
enum Ending {
    Halted,
    Diverged,
    StepLimited,
    OutputLimited,
}

/// Resolutions of every valid program shorter than `m` on one input.
struct Census {
    tallies: Vec<LengthTally>,
    // Per length: outputs of length n, with how many programs emit each and the first one.
    producers: Vec<HashMap<BitSequence, (u64, Program)>>,
}

impl Census {
    fn take(n: u64, m: usize, limits: &RunLimits) -> Result<Census, CertError> {
        if m > MAX_ENUMERATION_LENGTH + 1 {
            return Err(CertError::SpaceTooLarge {
                length: m - 1,
                limit: MAX_ENUMERATION_LENGTH,
            });
        }
        let mut tallies = Vec::with_capacity(m);
        let mut producers = Vec::with_capacity(m);
        for len in 0..m {
            let class = opcode_class(len);
            let mut programs: Vec<Program> = (0..class.index_count())
                .into_par_iter()
                .filter_map(|i| class.program(i))
                .collect();
            programs.extend(literal_programs(len));
            let results: Vec<(Ending, Option<BitSequence>)> = programs
                .par_iter()
                .map(|p| match resolve(p, n, limits) {
                    ResolutionStatus::Halts(outcome) => {
                        let keep = outcome.output.len() as u64 == n;
                        (Ending::Halted, keep.then_some(outcome.output))
                    }
                    ResolutionStatus::Diverges {
                        reason: DivergenceReason::StateRepetition,
                        ..
                    } => (Ending::Diverged, None),
                    ResolutionStatus::Diverges {
                        reason: DivergenceReason::OutputOverflow,
                        ..
                    } => (Ending::OutputLimited, None),
                    ResolutionStatus::Unresolved { .. } => (Ending::StepLimited, None),
                })
                .collect();
            let mut tally = LengthTally {
                length: len,
                ..LengthTally::default()
            };
            let mut outputs: HashMap<BitSequence, (u64, Program)> = HashMap::new();
            for (program, (ending, output)) in programs.into_iter().zip(results) {
                match ending {
                    Ending::Halted => tally.halted_other += 1,
                    Ending::Diverged => tally.diverged += 1,
                    Ending::StepLimited => tally.step_limited += 1,
                    Ending::OutputLimited => tally.output_limited += 1,
                }
                if let Some(out) = output {
                    outputs.entry(out).or_insert((0, program)).0 += 1;
                }
            }
            tallies.push(tally);
            producers.push(outputs);
        }
        Ok(Census { tallies, producers })
    }

    fn witness(&self, x: &BitSequence) -> Option<&Program> {
        self.producers
            .iter()
            .find_map(|outputs| outputs.get(x).map(|(_, p)| p))
    }

    fn checked(&self) -> u64 {
        self.tallies.iter().map(|t| t.total()).sum()
    }
}

fn validate(statement: &BoundedLowerBoundStatement) -> Result<(), String> {
    if statement.x_bits.len() as u64 != statement.n {
        return Err(format!(
            "n = {} but x has {} bits",
            statement.n,
            statement.x_bits.len()
        ));
    }
    if statement.m == 0 {
        return Err("m must be at least 1".into());
    }
    if statement.s == 0 {
        return Err("s must be at least 1".into());
    }
    Ok(())
}

/// Issues `C^s(x | l(x)) >= m` with default machine caps.
pub fn issue(x: &BitSequence, m: usize, s: u64) -> Result<BoundedLowerBoundCertificate, CertError> {
    issue_with_limits(x, m, s, &RunLimits::default())
}

pub fn issue_with_limits(
    x: &BitSequence,
    m: usize,
    s: u64,
    caps: &RunLimits,
) -> Result<BoundedLowerBoundCertificate, CertError> {
    let statement = BoundedLowerBoundStatement {
        x_bits: x.clone(),
        n: x.len() as u64,
        m,
        s,
    };
    validate(&statement).map_err(CertError::InvalidStatement)?;
    let limits = IssueLimits::from(caps);
    let census = Census::take(statement.n, m, &limits.run_limits(s))?;
    certify(&census, statement, limits)
}

fn certify(
    census: &Census,
    statement: BoundedLowerBoundStatement,
    limits: IssueLimits,
) -> Result<BoundedLowerBoundCertificate, CertError> {
    if let Some(p) = census.witness(&statement.x_bits) {
        return Err(CertError::WitnessExists(p.clone()));
    }
    Ok(BoundedLowerBoundCertificate {
        version: CERTIFICATE_VERSION.to_string(),
        statement,
        tally: census.tallies.clone(),
        limits,
    })
}

/// Re-runs the enumeration behind `cert` and compares.
pub fn verify(cert: &BoundedLowerBoundCertificate) -> VerifyReport {
    let reject = |rejection: RejectReason, programs_checked: u64| VerifyReport {
        accepted: false,
        rejection: Some(rejection),
        programs_checked,
    };
    let malformed = |detail: String| reject(RejectReason::Malformed { detail }, 0);
    if cert.version != CERTIFICATE_VERSION {
        return malformed(format!("unsupported version {:?}", cert.version));
    }
    if let Err(detail) = validate(&cert.statement) {
        return malformed(detail);
    }
    let limits = cert.limits.run_limits(cert.statement.s);
    if let Err(e) = limits.validate() {
        return malformed(e.to_string());
    }
    let census = match Census::take(cert.statement.n, cert.statement.m, &limits) {
        Ok(c) => c,
        Err(e) => return malformed(e.to_string()),
    };
    let checked = census.checked();
    if let Some(p) = census.witness(&cert.statement.x_bits) {
        return reject(
            RejectReason::WitnessFound {
                witness_bits: p.code().to_string(),
            },
            checked,
        );
    }
    for (length, expected) in census.tallies.iter().enumerate() {
        if cert.tally.get(length) != Some(expected) {
            return reject(RejectReason::TallyMismatch { length }, checked);
        }
    }
    if cert.tally.len() != census.tallies.len() {
        return reject(
            RejectReason::TallyMismatch {
                length: census.tallies.len(),
            },
            checked,
        );
    }
    VerifyReport {
        accepted: true,
        rejection: None,
        programs_checked: checked,
    }
}

/// First sequence (by length, then lexicographically, up to `max_length`) for
/// which `C^s(x | l(x)) > big_n` can be certified.
pub fn search_high_complexity(
    big_n: usize,
    max_length: usize,
    s: u64,
) -> Result<(BitSequence, BoundedLowerBoundCertificate), CertError> {
    if big_n == 0 {
        return Err(CertError::InvalidStatement("N must be at least 1".into()));
    }
    if s == 0 {
        return Err(CertError::InvalidStatement("s must be at least 1".into()));
    }
    let m = big_n + 1;
    let caps = RunLimits::default();
    let limits = IssueLimits::from(&caps);
    for len in 0..=max_length {
        // The literal of every length-len sequence is shorter than m.
        if len + 1 < m {
            continue;
        }
        let census = Census::take(len as u64, m, &limits.run_limits(s))?;
        let produced = census
            .producers
            .iter()
            .flat_map(|outputs| outputs.keys())
            .collect::<std::collections::HashSet<_>>();
        let candidate = (0..=produced.len() as u64)
            .take_while(|&v| len >= 64 || v < (1u64 << len))
            .map(|v| BitSequence::from_uint(v, len))
            .find(|x| !produced.contains(x));
        if let Some(x) = candidate {
            let statement = BoundedLowerBoundStatement {
                x_bits: x.clone(),
                n: len as u64,
                m,
                s,
            };
            let cert = certify(&census, statement, limits)?;
            return Ok((x, cert));
        }
    }
    Err(CertError::NotFoundWithinBudget { max_length })
}

/// Largest `N >= 1` with `N <= log2(N) + c`, or 0 if there is none.
///
/// Compared exactly as `2^(N - c) <= N` for `N > c`.
pub fn chaitin_gap(c: u32) -> u64 {
    let c = c as u64;
    let holds = |big_n: u64| big_n <= c || (big_n - c < 64 && (1u64 << (big_n - c)) <= big_n);
    // N - log2(N) grows without bound; past c + 64 the inequality cannot hold.
    (1..=c + 64).filter(|&big_n| holds(big_n)).max().unwrap_or(0)
}
