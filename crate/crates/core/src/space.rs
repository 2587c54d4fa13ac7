//! Enumeration of the valid programs of a given length, in lexicographic order.
//!
//! Within one length, opcode-mode programs (leading `0`) precede literals
//! (leading `1`). Opcode strings with unbalanced brackets are skipped.

use crate::bits::BitSequence;
use crate::tbvm::{parse, Program};

/// Longest program length any exhaustive search will enumerate by default.
pub const MAX_ENUMERATION_LENGTH: usize = 26;

/// How the opcode-mode programs of one length are indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpcodeClass {
    /// Length 0: only the empty program.
    Empty,
    /// Length `1 + 3k`: indices `0..8^k`, some of which fail bracket matching.
    Opcodes { k: usize },
    /// No opcode program has this length.
    None,
}

pub fn opcode_class(len: usize) -> OpcodeClass {
    if len == 0 {
        OpcodeClass::Empty
    } else if (len - 1).is_multiple_of(3) {
        OpcodeClass::Opcodes { k: (len - 1) / 3 }
    } else {
        OpcodeClass::None
    }
}

impl OpcodeClass {
    /// Number of candidate indices (valid or not).
    pub fn index_count(self) -> u64 {
        match self {
            OpcodeClass::Empty => 1,
            OpcodeClass::Opcodes { k } => 1u64 << (3 * k),
            OpcodeClass::None => 0,
        }
    }

    pub fn program(self, index: u64) -> Option<Program> {
        match self {
            OpcodeClass::Empty => parse(&BitSequence::new()).ok(),
            OpcodeClass::Opcodes { k } => Program::nth_opcode_program(k, index),
            OpcodeClass::None => None,
        }
    }

    pub fn programs(self) -> impl Iterator<Item = Program> {
        (0..self.index_count()).filter_map(move |i| self.program(i))
    }
}

/// All literal programs of length `len`, payloads in lexicographic order.
pub fn literal_programs(len: usize) -> impl Iterator<Item = Program> {
    let payload_len = len.saturating_sub(1);
    let count = if len == 0 { 0 } else { 1u64 << payload_len };
    (0..count).map(move |v| Program::literal(&BitSequence::from_uint(v, payload_len)))
}

/// Every valid program of length `len`, lexicographically.
pub fn programs_of_length(len: usize) -> impl Iterator<Item = Program> {
    opcode_class(len).programs().chain(literal_programs(len))
}

/// Every valid program of length at most `max_len`, shortest first.
pub fn programs_up_to(max_len: usize) -> impl Iterator<Item = Program> {
    (0..=max_len).flat_map(programs_of_length)
}
