//! Conditional Kolmogorov complexity and randomness deficiency on a fixed toy machine.
//!
//! * [`tbvm`]: the machine, its encoding and budgeted execution.
//! * [`dovetail`]: stage-scheduled search for every description of a target.
//! * [`complexity`]: upper bounds, certified exact values and whole-length tables.
//! * [`randomness`]: deficiency and one-sided randomness verdicts.
//! * [`generators`]: SHA-1 stream, π bits, patterns and RNG file ingestion.
//! * [`certlab`]: step-bounded lower-bound certificates and the incompleteness gap.

pub mod bits;
pub mod certlab;
pub mod complexity;
pub mod dovetail;
pub mod generators;
pub mod parallel;
pub mod randomness;
pub mod space;
pub mod tbvm;

pub use bits::BitSequence;
pub use complexity::{ComplexityEstimate, ComplexityTable};
pub use randomness::{DeficiencyVerdict, VerdictKind};
pub use tbvm::{MachineOutcome, Program, RunLimits, RunStatus};
