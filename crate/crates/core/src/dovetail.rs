//! Stage-scheduled search for every description of a target sequence.
//!
//! Stage `i` runs programs of length `i` for 1 step, length `i - 1` for 2 steps,
//! and so on down to length 0 for `i + 1` steps. Machines are suspended between
//! stages and resumed with the larger budget, so no step is executed twice.
//! A program that halts with output `x` after `s` steps is therefore found at
//! the first stage whose cell for its length has budget at least `s`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitSequence;
use crate::space::{opcode_class, MAX_ENUMERATION_LENGTH};
use crate::tbvm::{Core, Program, RunLimits, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DovetailError {
    #[error("stages are numbered from 1")]
    ZeroStage,
    #[error("refusing to enumerate all programs of length {length} (limit {limit})")]
    SpaceTooLarge { length: usize, limit: usize },
}

/// One `(program length, step budget)` pair of a stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StageCell {
    pub program_length: usize,
    pub step_budget: u64,
    pub stage: usize,
}

/// The cells of stage `i` in execution order: lengths `i, i-1, ..., 0`.
pub fn schedule_stage(i: usize) -> Result<Vec<StageCell>, DovetailError> {
    if i == 0 {
        return Err(DovetailError::ZeroStage);
    }
    Ok((0..=i)
        .rev()
        .map(|program_length| StageCell {
            program_length,
            step_budget: (i + 1 - program_length) as u64,
            stage: i,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discovery {
    pub program: Program,
    pub stage_found: usize,
    pub steps_used: u64,
}

struct Suspended {
    index: u64,
    core: Core,
    out_len: usize,
}

enum Advance {
    Found(Program, u64),
    Dead,
    Live,
}

#[derive(Default)]
struct LengthClass {
    started: bool,
    live: Vec<Suspended>,
}

/// Dovetailed search state for one target. Stages must be run in order.
pub struct Dovetailer<'a> {
    target: &'a BitSequence,
    limits: &'a RunLimits,
    length_cap: usize,
    enumeration_limit: usize,
    classes: Vec<LengthClass>,
    literal_found: bool,
    stages_run: usize,
    discoveries: Vec<Discovery>,
}

impl<'a> Dovetailer<'a> {
    /// Searches programs of length at most `length_cap` for descriptions of `target`
    /// on input `l(target)`.
    pub fn new(target: &'a BitSequence, limits: &'a RunLimits, length_cap: usize) -> Self {
        Self {
            target,
            limits,
            length_cap,
            enumeration_limit: MAX_ENUMERATION_LENGTH,
            classes: (0..=length_cap).map(|_| LengthClass::default()).collect(),
            literal_found: false,
            stages_run: 0,
            discoveries: Vec::new(),
        }
    }

    pub fn with_enumeration_limit(mut self, limit: usize) -> Self {
        self.enumeration_limit = limit;
        self
    }

    pub fn stages_run(&self) -> usize {
        self.stages_run
    }

    pub fn discoveries(&self) -> &[Discovery] {
        &self.discoveries
    }

    pub fn into_discoveries(self) -> Vec<Discovery> {
        self.discoveries
    }

    /// Lowers the length cap; classes above it are dropped.
    pub fn restrict_length(&mut self, cap: usize) {
        if cap < self.length_cap {
            self.length_cap = cap;
            self.classes.truncate(cap + 1);
        }
    }

    fn n(&self) -> u64 {
        self.target.len() as u64
    }

    /// True when every valid program shorter than `len` has been driven to a
    /// verdict other than "still running". Literals always halt.
    pub fn resolved_below(&self, len: usize) -> bool {
        (0..len).all(|l| {
            if opcode_class(l).index_count() == 0 {
                return true;
            }
            match self.classes.get(l) {
                Some(class) => class.started && class.live.is_empty(),
                None => false,
            }
        })
    }

    pub fn run_stage(&mut self) -> Result<(), DovetailError> {
        let stage = self.stages_run + 1;
        for cell in schedule_stage(stage)? {
            self.run_cell(cell)?;
        }
        self.stages_run = stage;
        Ok(())
    }

    pub fn run_until(&mut self, max_stage: usize) -> Result<(), DovetailError> {
        while self.stages_run < max_stage {
            self.run_stage()?;
        }
        Ok(())
    }

    fn run_cell(&mut self, cell: StageCell) -> Result<(), DovetailError> {
        let len = cell.program_length;
        let n = self.n();
        // Emitting n bits takes at least n steps; such cells cannot discover anything
        // and resuming later reaches the same machine states.
        if len > self.length_cap || cell.step_budget < n {
            return Ok(());
        }
        let budget = cell.step_budget.min(self.limits.step_budget);
        let class = opcode_class(len);
        if class.index_count() > 0 {
            if !self.classes[len].started {
                if len > self.enumeration_limit {
                    return Err(DovetailError::SpaceTooLarge {
                        length: len,
                        limit: self.enumeration_limit,
                    });
                }
                self.classes[len].live = (0..class.index_count())
                    .into_par_iter()
                    .filter(|&i| class.program(i).is_some())
                    .map(|index| Suspended {
                        index,
                        core: Core::default(),
                        out_len: 0,
                    })
                    .collect();
                self.classes[len].started = true;
            }
            let target = self.target;
            let limits = self.limits;
            let live = std::mem::take(&mut self.classes[len].live);
            let mut states: Vec<(Suspended, Advance)> = live
                .into_par_iter()
                .map(|mut s| {
                    let program = class.program(s.index).expect("validated at class start");
                    let verdict = advance(&mut s, &program, target, n, budget, limits);
                    (s, verdict)
                })
                .collect();
            let mut remaining = Vec::with_capacity(states.len());
            for (s, verdict) in states.drain(..) {
                match verdict {
                    Advance::Found(program, steps_used) => self.discoveries.push(Discovery {
                        program,
                        stage_found: cell.stage,
                        steps_used,
                    }),
                    Advance::Dead => {}
                    Advance::Live => remaining.push(s),
                }
            }
            self.classes[len].live = remaining;
        }
        // Only the literal whose payload is the target can describe it.
        if len as u64 == n + 1
            && !self.literal_found
            && budget >= n
            && self.target.len() <= self.limits.output_cap
        {
            self.literal_found = true;
            self.discoveries.push(Discovery {
                program: Program::literal(self.target),
                stage_found: cell.stage,
                steps_used: n,
            });
        }
        Ok(())
    }
}

fn advance(
    s: &mut Suspended,
    program: &Program,
    target: &BitSequence,
    n: u64,
    budget: u64,
    limits: &RunLimits,
) -> Advance {
    loop {
        let step = s.core.peek(program);
        if let Step::Halt = step {
            return if s.out_len == target.len() {
                Advance::Found(program.clone(), s.core.steps)
            } else {
                Advance::Dead
            };
        }
        if s.core.steps >= budget {
            return Advance::Live;
        }
        if let Step::Emit(bit) = step {
            if s.out_len >= limits.output_cap || target.get(s.out_len) != Some(bit) {
                return Advance::Dead;
            }
            s.out_len += 1;
        }
        s.core.exec(program, n, limits.reg_cap);
    }
}

/// All programs of length at most `max_stage` that the stage schedule up to
/// `max_stage` finds producing `x` on input `l(x)`, in discovery order.
pub fn find_descriptions(
    x: &BitSequence,
    max_stage: usize,
    limits: &RunLimits,
) -> Result<Vec<Discovery>, DovetailError> {
    let mut search = Dovetailer::new(x, limits, max_stage);
    search.run_until(max_stage)?;
    Ok(search.into_discoveries())
}

/// Exports discoveries as CSV: `stage,program_bits,program_length,steps_used`.
pub fn discoveries_csv(discoveries: &[Discovery]) -> String {
    let mut out = String::from("stage,program_bits,program_length,steps_used\n");
    for d in discoveries {
        out.push_str(&format!(
            "{},{},{},{}\n",
            d.stage_found,
            d.program.code(),
            d.program.len(),
            d.steps_used
        ));
    }
    out
}

/// Every valid program of length at most `max_length`, run on input `n`.
///
/// Order is by length, then lexicographic.
pub fn enumerate_outputs(
    max_length: usize,
    n: u64,
    limits: RunLimits,
) -> impl Iterator<Item = (Program, crate::tbvm::MachineOutcome)> {
    crate::space::programs_up_to(max_length).map(move |p| {
        let outcome = crate::tbvm::run(&p, n, &limits);
        (p, outcome)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitSequence {
        BitSequence::parse(s).unwrap()
    }

    fn pairs(i: usize) -> Vec<(usize, u64)> {
        schedule_stage(i)
            .unwrap()
            .into_iter()
            .map(|c| (c.program_length, c.step_budget))
            .collect()
    }

    #[test]
    fn stage_shapes() {
        assert_eq!(pairs(3), vec![(3, 1), (2, 2), (1, 3), (0, 4)]);
        assert_eq!(pairs(1), vec![(1, 1), (0, 2)]);
        assert_eq!(schedule_stage(0), Err(DovetailError::ZeroStage));
        for i in 1..20 {
            for cell in schedule_stage(i).unwrap() {
                assert_eq!(cell.program_length as u64 + cell.step_budget, i as u64 + 1);
                assert!(cell.step_budget >= 1);
            }
        }
    }

    #[test]
    fn single_zero() {
        let found = find_descriptions(&bits("0"), 6, &RunLimits::default()).unwrap();
        let codes: Vec<String> = found.iter().map(|d| d.program.code().to_string()).collect();
        assert_eq!(codes[0], "10");
        assert_eq!(found[0].stage_found, 2);
        assert!(codes.contains(&"0000".to_string()));
    }

    #[test]
    fn empty_target() {
        let found = find_descriptions(&bits(""), 1, &RunLimits::default()).unwrap();
        let codes: Vec<String> = found.iter().map(|d| d.program.code().to_string()).collect();
        assert_eq!(codes, vec!["0", "1", ""]);
        assert!(found.iter().all(|d| d.stage_found == 1));
    }

    #[test]
    fn two_bits() {
        let found = find_descriptions(&bits("01"), 8, &RunLimits::default()).unwrap();
        let codes: Vec<String> = found.iter().map(|d| d.program.code().to_string()).collect();
        assert!(codes.contains(&"101".to_string()));
        assert!(codes.contains(&"0000001".to_string()));
    }

    #[test]
    fn enumeration_prefix() {
        let limits = RunLimits::default();
        let zero: Vec<_> = enumerate_outputs(0, 0, limits).collect();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].0.is_empty());
        let one: Vec<String> = enumerate_outputs(1, 0, limits)
            .map(|(p, o)| format!("{}:{}", p.code(), o.output))
            .collect();
        assert_eq!(one, vec![":", "0:", "1:"]);
        let four: Vec<(String, String)> = enumerate_outputs(4, 4, limits)
            .map(|(p, o)| (p.code().to_string(), o.output.to_string()))
            .collect();
        assert!(four.contains(&("0000".into(), "0".into())));
        assert!(four.contains(&("0001".into(), "1".into())));
    }

    #[test]
    fn csv_export() {
        let found = find_descriptions(&bits("0"), 2, &RunLimits::default()).unwrap();
        assert_eq!(
            discoveries_csv(&found),
            "stage,program_bits,program_length,steps_used\n2,10,2,1\n"
        );
    }

    #[test]
    fn refuses_huge_classes() {
        let target = BitSequence::new();
        let limits = RunLimits::default();
        let mut search = Dovetailer::new(&target, &limits, 40).with_enumeration_limit(10);
        assert_eq!(
            search.run_until(13),
            Err(DovetailError::SpaceTooLarge {
                length: 13,
                limit: 10
            })
        );
    }
}
