//! Implication between prenex quantifier prefixes over a shared, arbitrary
//! matrix.
//!
//! * [`prefix`]: the prefix data model, text grammar, runs and canonical classes.
//! * [`decider`]: the linear-time implication check with reject witnesses.
//! * [`oracle`]: brute-force reachability under the sound moves, for small `n`.
//! * [`census`]: class enumeration, the class implication graph and exact pair counts.
//! * [`bench`]: seeded inputs and timing for the scaling benchmark.
//! * [`cli`]: the `prenex` command line.

use thiserror::Error;

pub mod bench;
pub mod census;
pub mod cli;
pub mod decider;
pub mod oracle;
mod packed;
pub mod prefix;
mod quotient;

pub use decider::{implies, implies_with_stats, DecideError, DecideStats, RejectCase, RejectWitness, Verdict};
pub use oracle::{closure, oracle_implies, successors, Direction, Move, MoveKind, Oracle, OracleError};
pub use prefix::{format_prefix, parse_prefix_pair, CanonicalClass, Prefix, PrefixError, Quantifier, Run};

/// A brute-force routine was asked for more variables than its cap allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("instance has n = {n} variables, over the cap of {cap}")]
pub struct InstanceTooLarge {
    pub n: usize,
    pub cap: usize,
}
