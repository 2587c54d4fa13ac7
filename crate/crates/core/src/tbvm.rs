//! The fixed two-mode bit machine over which every complexity value is measured.
//!
//! A program is a bit string. The first bit selects the mode:
//!
//! * `1` followed by a payload: a *literal* that emits the payload, one step per bit.
//! * `0` followed by 3-bit opcodes: a tiny register machine with two registers
//!   `A` and `B` (both start at 0) and the input `n` readable through `LOADN`.
//!
//! The empty string is the empty opcode program. It halts at once with no output.
//!
//! | bits | opcode | effect                                   |
//! |------|--------|------------------------------------------|
//! | 000  | OUT0   | append `0`                               |
//! | 001  | OUT1   | append `1`                               |
//! | 010  | INC    | `A := min(A + 1, reg_cap)`               |
//! | 011  | DEC    | `A := max(A - 1, 0)`                     |
//! | 100  | LOOP   | if `A = 0`, jump past the matching `END` |
//! | 101  | END    | jump back to the matching `LOOP`         |
//! | 110  | LOADN  | `A := min(n, reg_cap)`                   |
//! | 111  | SWAP   | exchange `A` and `B`                     |
//!
//! Every executed opcode costs one step, including `LOOP` tests and `END` jumps.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Opcode {
    Out0,
    Out1,
    Inc,
    Dec,
    Loop,
    End,
    LoadN,
    Swap,
}

impl Opcode {
    pub const ALL: [Opcode; 8] = [
        Opcode::Out0,
        Opcode::Out1,
        Opcode::Inc,
        Opcode::Dec,
        Opcode::Loop,
        Opcode::End,
        Opcode::LoadN,
        Opcode::Swap,
    ];

    pub fn from_code(code: u8) -> Opcode {
        Self::ALL[(code & 0b111) as usize]
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Out0 => "OUT0",
            Opcode::Out1 => "OUT1",
            Opcode::Inc => "INC",
            Opcode::Dec => "DEC",
            Opcode::Loop => "LOOP",
            Opcode::End => "END",
            Opcode::LoadN => "LOADN",
            Opcode::Swap => "SWAP",
        }
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("trailing bits: opcode remainder has length {remainder}, not a multiple of 3")]
    TrailingBits { remainder: usize },
    #[error("LOOP at instruction {index} has no matching END")]
    UnmatchedLoop { index: usize },
    #[error("END at instruction {index} has no matching LOOP")]
    UnmatchedEnd { index: usize },
}

impl ParseError {
    pub fn reason(&self) -> &'static str {
        match self {
            ParseError::TrailingBits { .. } => "trailing-bits",
            ParseError::UnmatchedLoop { .. } => "unmatched-loop",
            ParseError::UnmatchedEnd { .. } => "unmatched-end",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgramBody {
    Literal(BitSequence),
    Opcodes(Vec<Opcode>),
}

/// A successfully parsed machine program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    code: BitSequence,
    body: ProgramBody,
    // For each LOOP the index of its END and vice versa; unused elsewhere.
    jumps: Vec<usize>,
}

fn match_brackets(ops: &[Opcode]) -> Result<Vec<usize>, ParseError> {
    let mut jumps = vec![0; ops.len()];
    let mut open = Vec::new();
    for (index, op) in ops.iter().enumerate() {
        match op {
            Opcode::Loop => open.push(index),
            Opcode::End => {
                let start = open.pop().ok_or(ParseError::UnmatchedEnd { index })?;
                jumps[start] = index;
                jumps[index] = start;
            }
            _ => {}
        }
    }
    match open.pop() {
        Some(index) => Err(ParseError::UnmatchedLoop { index }),
        None => Ok(jumps),
    }
}

/// Parses machine code. See the module docs for the encoding.
pub fn parse(code: &BitSequence) -> Result<Program, ParseError> {
    match code.get(0) {
        None => Ok(Program {
            code: code.clone(),
            body: ProgramBody::Opcodes(Vec::new()),
            jumps: Vec::new(),
        }),
        Some(true) => Ok(Program {
            code: code.clone(),
            body: ProgramBody::Literal(code.slice(1, code.len())),
            jumps: Vec::new(),
        }),
        Some(false) => {
            let remainder = code.len() - 1;
            if !remainder.is_multiple_of(3) {
                return Err(ParseError::TrailingBits { remainder });
            }
            let bits = code.as_slice();
            let ops: Vec<Opcode> = bits[1..]
                .chunks(3)
                .map(|c| Opcode::from_code(((c[0] as u8) << 2) | ((c[1] as u8) << 1) | c[2] as u8))
                .collect();
            let jumps = match_brackets(&ops)?;
            Ok(Program {
                code: code.clone(),
                body: ProgramBody::Opcodes(ops),
                jumps,
            })
        }
    }
}

impl Program {
    pub fn literal(payload: &BitSequence) -> Program {
        let mut code = BitSequence::with_capacity(payload.len() + 1);
        code.push(true);
        code.extend_from(payload);
        Program {
            code,
            body: ProgramBody::Literal(payload.clone()),
            jumps: Vec::new(),
        }
    }

    pub fn from_opcodes(ops: &[Opcode]) -> Result<Program, ParseError> {
        let jumps = match_brackets(ops)?;
        let mut code = BitSequence::with_capacity(1 + 3 * ops.len());
        code.push(false);
        for op in ops {
            code.extend_from(&BitSequence::from_uint(op.code() as u64, 3));
        }
        Ok(Program {
            code,
            body: ProgramBody::Opcodes(ops.to_vec()),
            jumps,
        })
    }

    /// The `index`-th `k`-opcode string in lexicographic order, if its brackets balance.
    pub fn nth_opcode_program(k: usize, index: u64) -> Option<Program> {
        let ops: Vec<Opcode> = (0..k)
            .map(|j| Opcode::from_code((index >> (3 * (k - 1 - j))) as u8))
            .collect();
        Program::from_opcodes(&ops).ok()
    }

    /// The serialized bit form; parsing it yields this program again.
    pub fn code(&self) -> &BitSequence {
        &self.code
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    pub fn body(&self) -> &ProgramBody {
        &self.body
    }

    pub fn is_literal(&self) -> bool {
        matches!(self.body, ProgramBody::Literal(_))
    }

    /// Human-readable listing, e.g. `0:LOADN LOOP OUT0 DEC END` or `1:0110`.
    pub fn disassemble(&self) -> String {
        match &self.body {
            ProgramBody::Literal(payload) => format!("1:{payload}"),
            ProgramBody::Opcodes(ops) if self.code.is_empty() => {
                debug_assert!(ops.is_empty());
                "ε".to_string()
            }
            ProgramBody::Opcodes(ops) => {
                let names: Vec<&str> = ops.iter().map(|op| op.mnemonic()).collect();
                format!("0:{}", names.join(" "))
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

/// Resource limits for one machine run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunLimits {
    pub step_budget: u64,
    pub output_cap: usize,
    pub reg_cap: u64,
    pub tracked_state_cap: usize,
}

pub const DEFAULT_STEP_BUDGET: u64 = 100_000;

impl Default for RunLimits {
    fn default() -> Self {
        Self {
            step_budget: DEFAULT_STEP_BUDGET,
            output_cap: 4096,
            reg_cap: 4096,
            tracked_state_cap: 65_536,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("run limit {field} must be at least 1")]
pub struct InvalidLimits {
    pub field: &'static str,
}

impl RunLimits {
    pub fn with_step_budget(step_budget: u64) -> Self {
        Self {
            step_budget,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), InvalidLimits> {
        let zero = [
            ("step_budget", self.step_budget == 0),
            ("output_cap", self.output_cap == 0),
            ("reg_cap", self.reg_cap == 0),
            ("tracked_state_cap", self.tracked_state_cap == 0),
        ];
        match zero.iter().find(|(_, z)| *z) {
            Some((field, _)) => Err(InvalidLimits { field }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Halted,
    StepLimit,
    OutputLimit,
    ParseError,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Halted => "halted",
            RunStatus::StepLimit => "step-limit",
            RunStatus::OutputLimit => "output-limit",
            RunStatus::ParseError => "parse-error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineOutcome {
    pub status: RunStatus,
    pub output: BitSequence,
    pub steps_used: u64,
}

impl MachineOutcome {
    pub fn halted_with(&self, x: &BitSequence) -> bool {
        self.status == RunStatus::Halted && &self.output == x
    }
}

/// What the next instruction would do.
pub(crate) enum Step {
    Halt,
    Emit(bool),
    Silent,
}

/// Resumable execution state, independent of where output goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct Core {
    pub pc: usize,
    pub a: u64,
    pub b: u64,
    pub steps: u64,
}

impl Core {
    /// Peeks at the instruction under the program counter without executing it.
    pub fn peek(&self, program: &Program) -> Step {
        match &program.body {
            ProgramBody::Literal(payload) => match payload.get(self.pc) {
                Some(bit) => Step::Emit(bit),
                None => Step::Halt,
            },
            ProgramBody::Opcodes(ops) => match ops.get(self.pc) {
                None => Step::Halt,
                Some(Opcode::Out0) => Step::Emit(false),
                Some(Opcode::Out1) => Step::Emit(true),
                Some(_) => Step::Silent,
            },
        }
    }

    /// Executes one instruction. The caller has checked it is not a halt.
    pub fn exec(&mut self, program: &Program, n: u64, reg_cap: u64) {
        self.steps += 1;
        let ops = match &program.body {
            ProgramBody::Literal(_) => {
                self.pc += 1;
                return;
            }
            ProgramBody::Opcodes(ops) => ops,
        };
        match ops[self.pc] {
            Opcode::Out0 | Opcode::Out1 => self.pc += 1,
            Opcode::Inc => {
                self.a = (self.a + 1).min(reg_cap);
                self.pc += 1;
            }
            Opcode::Dec => {
                self.a = self.a.saturating_sub(1);
                self.pc += 1;
            }
            Opcode::Loop => {
                self.pc = if self.a == 0 {
                    program.jumps[self.pc] + 1
                } else {
                    self.pc + 1
                };
            }
            Opcode::End => self.pc = program.jumps[self.pc],
            Opcode::LoadN => {
                self.a = n.min(reg_cap);
                self.pc += 1;
            }
            Opcode::Swap => {
                std::mem::swap(&mut self.a, &mut self.b);
                self.pc += 1;
            }
        }
    }
}

/// Runs a parsed program on input `n` under `limits`.
///
/// Budget breaches keep the partial output. The instruction that would breach
/// the output cap is not executed.
pub fn run(program: &Program, n: u64, limits: &RunLimits) -> MachineOutcome {
    let mut core = Core::default();
    let mut output = BitSequence::new();
    let status = loop {
        let step = core.peek(program);
        if let Step::Halt = step {
            break RunStatus::Halted;
        }
        if core.steps >= limits.step_budget {
            break RunStatus::StepLimit;
        }
        if let Step::Emit(bit) = step {
            if output.len() >= limits.output_cap {
                break RunStatus::OutputLimit;
            }
            output.push(bit);
        }
        core.exec(program, n, limits.reg_cap);
    };
    MachineOutcome {
        status,
        output,
        steps_used: core.steps,
    }
}

/// Parses then runs; an unparsable code yields a `ParseError` outcome.
pub fn run_code(code: &BitSequence, n: u64, limits: &RunLimits) -> MachineOutcome {
    match parse(code) {
        Ok(program) => run(&program, n, limits),
        Err(_) => MachineOutcome {
            status: RunStatus::ParseError,
            output: BitSequence::new(),
            steps_used: 0,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceReason {
    /// A `(pc, A, B)` state recurred with no output in between.
    StateRepetition,
    /// Output would exceed the cap; treated as non-halting.
    OutputOverflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnresolvedReason {
    StepBudget,
    TrackedStateCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionStatus {
    Halts(MachineOutcome),
    Diverges {
        reason: DivergenceReason,
        steps_used: u64,
    },
    Unresolved {
        reason: UnresolvedReason,
        steps_used: u64,
    },
}

impl ResolutionStatus {
    pub fn is_resolved(&self) -> bool {
        !matches!(self, ResolutionStatus::Unresolved { .. })
    }

    pub fn halted_with(&self, x: &BitSequence) -> bool {
        matches!(self, ResolutionStatus::Halts(outcome) if &outcome.output == x)
    }
}

/// Tracks `(pc, A, B)` since the last emitted bit.
///
/// Registers saturate and output only grows, so a repeat with no output in
/// between means the machine cycles forever without emitting anything.
pub(crate) struct CycleDetector {
    seen: HashSet<(usize, u64, u64)>,
    cap: usize,
}

pub(crate) enum CycleCheck {
    Fresh,
    Repeated,
    Overflow,
}

impl CycleDetector {
    pub fn new(cap: usize) -> Self {
        Self {
            seen: HashSet::new(),
            cap,
        }
    }

    pub fn observe(&mut self, core: &Core) -> CycleCheck {
        if !self.seen.insert((core.pc, core.a, core.b)) {
            CycleCheck::Repeated
        } else if self.seen.len() > self.cap {
            CycleCheck::Overflow
        } else {
            CycleCheck::Fresh
        }
    }

    pub fn reset(&mut self) {
        self.seen.clear();
    }
}

/// Decides halting where the budget allows: halts, provably diverges, or unresolved.
pub fn resolve(program: &Program, n: u64, limits: &RunLimits) -> ResolutionStatus {
    if program.is_literal() {
        let outcome = run(program, n, limits);
        return match outcome.status {
            RunStatus::Halted => ResolutionStatus::Halts(outcome),
            RunStatus::OutputLimit => ResolutionStatus::Diverges {
                reason: DivergenceReason::OutputOverflow,
                steps_used: outcome.steps_used,
            },
            _ => ResolutionStatus::Unresolved {
                reason: UnresolvedReason::StepBudget,
                steps_used: outcome.steps_used,
            },
        };
    }
    let mut core = Core::default();
    let mut output = BitSequence::new();
    let mut cycles = CycleDetector::new(limits.tracked_state_cap);
    loop {
        let step = core.peek(program);
        if let Step::Halt = step {
            return ResolutionStatus::Halts(MachineOutcome {
                status: RunStatus::Halted,
                output,
                steps_used: core.steps,
            });
        }
        match cycles.observe(&core) {
            CycleCheck::Fresh => {}
            CycleCheck::Repeated => {
                return ResolutionStatus::Diverges {
                    reason: DivergenceReason::StateRepetition,
                    steps_used: core.steps,
                }
            }
            CycleCheck::Overflow => {
                return ResolutionStatus::Unresolved {
                    reason: UnresolvedReason::TrackedStateCap,
                    steps_used: core.steps,
                }
            }
        }
        if core.steps >= limits.step_budget {
            return ResolutionStatus::Unresolved {
                reason: UnresolvedReason::StepBudget,
                steps_used: core.steps,
            };
        }
        if let Step::Emit(bit) = step {
            if output.len() >= limits.output_cap {
                return ResolutionStatus::Diverges {
                    reason: DivergenceReason::OutputOverflow,
                    steps_used: core.steps,
                };
            }
            output.push(bit);
            cycles.reset();
        }
        core.exec(program, n, limits.reg_cap);
    }
}

/// Outcome of running a program against one specific target output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TargetVerdict {
    Produces { steps: u64 },
    /// Can never halt with the target as output.
    Refuted,
    Unresolved,
}

/// Like [`resolve`], but stops as soon as the output leaves the target's prefix.
pub(crate) fn resolve_against(
    program: &Program,
    n: u64,
    target: &BitSequence,
    limits: &RunLimits,
) -> TargetVerdict {
    if let ProgramBody::Literal(payload) = &program.body {
        return if payload == target && target.len() <= limits.output_cap {
            if target.len() as u64 <= limits.step_budget {
                TargetVerdict::Produces {
                    steps: target.len() as u64,
                }
            } else {
                TargetVerdict::Unresolved
            }
        } else {
            TargetVerdict::Refuted
        };
    }
    let mut core = Core::default();
    let mut out_len = 0usize;
    let mut cycles = CycleDetector::new(limits.tracked_state_cap);
    loop {
        let step = core.peek(program);
        if let Step::Halt = step {
            return if out_len == target.len() {
                TargetVerdict::Produces { steps: core.steps }
            } else {
                TargetVerdict::Refuted
            };
        }
        match cycles.observe(&core) {
            CycleCheck::Fresh => {}
            CycleCheck::Repeated => return TargetVerdict::Refuted,
            CycleCheck::Overflow => return TargetVerdict::Unresolved,
        }
        if core.steps >= limits.step_budget {
            return TargetVerdict::Unresolved;
        }
        if let Step::Emit(bit) = step {
            if out_len >= limits.output_cap || target.get(out_len) != Some(bit) {
                return TargetVerdict::Refuted;
            }
            out_len += 1;
            cycles.reset();
        }
        core.exec(program, n, limits.reg_cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitSequence {
        BitSequence::parse(s).unwrap()
    }

    fn ops(list: &[Opcode]) -> Program {
        Program::from_opcodes(list).unwrap()
    }

    #[test]
    fn parse_modes() {
        let empty = parse(&bits("")).unwrap();
        assert_eq!(empty.body(), &ProgramBody::Opcodes(vec![]));
        assert_eq!(
            parse(&bits("10110")).unwrap().body(),
            &ProgramBody::Literal(bits("0110"))
        );
        assert_eq!(
            parse(&bits("000")),
            Err(ParseError::TrailingBits { remainder: 2 })
        );
        assert_eq!(parse(&bits("0000")).unwrap().body(), &ProgramBody::Opcodes(vec![Opcode::Out0]));
    }

    #[test]
    fn parse_brackets() {
        assert_eq!(parse(&bits("0100")).unwrap_err().reason(), "unmatched-loop");
        assert_eq!(parse(&bits("0101")).unwrap_err().reason(), "unmatched-end");
        assert_eq!(
            parse(&bits("0101100")),
            Err(ParseError::UnmatchedEnd { index: 0 })
        );
    }

    #[test]
    fn op_codes_round_trip() {
        let p = ops(&[Opcode::LoadN, Opcode::Loop, Opcode::Out0, Opcode::Dec, Opcode::End]);
        assert_eq!(p.code().to_string(), "0110100000011101");
        assert_eq!(parse(p.code()).unwrap(), p);
        assert_eq!(p.disassemble(), "0:LOADN LOOP OUT0 DEC END");
    }

    #[test]
    fn literal_run() {
        let p = parse(&bits("10110")).unwrap();
        let out = run(&p, 7, &RunLimits::default());
        assert_eq!(out.status, RunStatus::Halted);
        assert_eq!(out.output, bits("0110"));
        assert_eq!(out.steps_used, 4);
    }

    #[test]
    fn budget_breaches_keep_partial_output() {
        let p = parse(&bits("10110")).unwrap();
        let out = run(&p, 0, &RunLimits::with_step_budget(2));
        assert_eq!(out.status, RunStatus::StepLimit);
        assert_eq!(out.output, bits("01"));

        let limits = RunLimits {
            output_cap: 3,
            ..RunLimits::default()
        };
        let out = run(&p, 0, &limits);
        assert_eq!(out.status, RunStatus::OutputLimit);
        assert_eq!(out.output, bits("011"));
        assert_eq!(out.steps_used, 3);
    }

    #[test]
    fn parse_error_outcome() {
        let out = run_code(&bits("000"), 0, &RunLimits::default());
        assert_eq!(out.status, RunStatus::ParseError);
        assert!(out.output.is_empty());
        assert_eq!(out.steps_used, 0);
    }

    #[test]
    fn registers_saturate() {
        // INC LOOP INC END climbs to reg_cap, then repeats a state.
        let p = ops(&[Opcode::Inc, Opcode::Loop, Opcode::Inc, Opcode::End]);
        let limits = RunLimits {
            reg_cap: 5,
            ..RunLimits::default()
        };
        assert!(matches!(
            resolve(&p, 0, &limits),
            ResolutionStatus::Diverges {
                reason: DivergenceReason::StateRepetition,
                ..
            }
        ));
    }

    #[test]
    fn swap_exchanges_registers() {
        // LOADN SWAP LOOP OUT1 END: A=0 after swap so the loop is skipped.
        let p = ops(&[Opcode::LoadN, Opcode::Swap, Opcode::Loop, Opcode::Out1, Opcode::End]);
        let out = run(&p, 3, &RunLimits::default());
        assert_eq!(out.status, RunStatus::Halted);
        assert!(out.output.is_empty());
        assert_eq!(out.steps_used, 3);
    }

    #[test]
    fn resolve_reports_unresolved_on_tight_cap() {
        let p = ops(&[Opcode::Inc, Opcode::Loop, Opcode::Inc, Opcode::End]);
        let limits = RunLimits {
            tracked_state_cap: 10,
            ..RunLimits::default()
        };
        assert_eq!(
            resolve(&p, 0, &limits),
            ResolutionStatus::Unresolved {
                reason: UnresolvedReason::TrackedStateCap,
                steps_used: 10
            }
        );
        let limits = RunLimits::with_step_budget(10);
        assert!(matches!(
            resolve(&p, 0, &limits),
            ResolutionStatus::Unresolved {
                reason: UnresolvedReason::StepBudget,
                ..
            }
        ));
    }

    #[test]
    fn infinite_output_overflows() {
        // LOADN LOOP OUT0 END never decrements.
        let p = ops(&[Opcode::LoadN, Opcode::Loop, Opcode::Out0, Opcode::End]);
        let out = run(&p, 2, &RunLimits::default());
        assert_eq!(out.status, RunStatus::OutputLimit);
        assert_eq!(out.output.len(), 4096);
        assert!(matches!(
            resolve(&p, 2, &RunLimits::default()),
            ResolutionStatus::Diverges {
                reason: DivergenceReason::OutputOverflow,
                ..
            }
        ));
    }

    #[test]
    fn target_resolution_refutes_on_prefix_mismatch() {
        let p = ops(&[Opcode::Out1, Opcode::Inc, Opcode::Loop, Opcode::End]);
        assert_eq!(
            resolve_against(&p, 0, &bits("0"), &RunLimits::default()),
            TargetVerdict::Refuted
        );
        let p = ops(&[Opcode::Out0, Opcode::Out1]);
        assert_eq!(
            resolve_against(&p, 0, &bits("01"), &RunLimits::default()),
            TargetVerdict::Produces { steps: 2 }
        );
        assert_eq!(
            resolve_against(&Program::literal(&bits("01")), 0, &bits("01"), &RunLimits::default()),
            TargetVerdict::Produces { steps: 2 }
        );
    }

    #[test]
    fn nth_opcode_program_is_lexicographic() {
        let first = Program::nth_opcode_program(2, 0).unwrap();
        assert_eq!(first.code().to_string(), "0000000");
        // 100 101 = LOOP END
        assert!(Program::nth_opcode_program(2, 0b100_101).is_some());
        assert!(Program::nth_opcode_program(2, 0b101_100).is_none());
        assert_eq!(Program::nth_opcode_program(0, 0).unwrap().code().to_string(), "0");
    }
}
