//! Linear-time decision procedure for prefix implication.
//!
//! Given two prefixes over the same variables and an arbitrary shared
//! matrix, [`implies`] decides whether the first sentence implies the second.
//! The loop walks the right-hand prefix from its last position to its first,
//! locating each variable in the left-hand prefix through a position table.
//! Two situations reject:
//!
//! * the variable is existential on the left but universal on the right
//!   (an existential can never become universal), reported as case 5;
//! * the variable is universal on both sides but some still-unmatched
//!   existential sits after it on the left, so it cannot be moved behind
//!   that existential, reported as case 4.
//!
//! The index of the last unmatched existential on the left (the F pointer)
//! only ever moves towards the front, so all of its rescans together touch
//! each position at most once.

use serde::Serialize;
use thiserror::Error;

use crate::prefix::{Prefix, Quantifier};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("prefixes have different lengths ({lhs} vs {rhs})")]
    LengthMismatch { lhs: usize, rhs: usize },
    #[error("prefixes do not quantify the same variables")]
    VariableSetMismatch,
}

/// Which rejection condition fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RejectCase {
    /// Universal on both sides, but an unmatched existential follows it on the left.
    BlockedUniversal,
    /// Existential on the left, universal on the right.
    ExistsToForall,
}

impl RejectCase {
    /// The case number from the correctness argument: 4 or 5.
    pub fn id(self) -> u8 {
        match self {
            RejectCase::BlockedUniversal => 4,
            RejectCase::ExistsToForall => 5,
        }
    }
}

/// Where and why the decider rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RejectWitness {
    pub case: RejectCase,
    /// Position in the right-hand prefix at which the loop stopped.
    pub s2_position: usize,
    /// Variable index at that position.
    pub variable: u32,
    /// The F pointer at rejection; only set for [`RejectCase::BlockedUniversal`].
    pub blocking_f: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject(RejectWitness),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn witness(&self) -> Option<&RejectWitness> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject(w) => Some(w),
        }
    }
}

/// Work counters for one call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecideStats {
    /// Main-loop iterations.
    pub iterations: usize,
    /// Positions examined while moving the F pointer after its element was
    /// matched. Never exceeds `n`.
    pub rescan_steps: usize,
}

/// Scratch state of one decider run.
///
/// `slot[v]` packs the left-hand position of variable `v` with its
/// quantifier (`pos << 1 | forall`), so each loop step makes one random
/// read. Bit `j` of `pending` is set while position `j` on the left is an
/// existential not yet matched. As a bitset it stays in cache next to
/// `slot`, and the F rescan can pass over 64 positions per word.
struct DeciderState {
    slot: Vec<u32>,
    pending: Vec<u64>,
    /// Largest pending position, if any (the F pointer).
    f_ptr: Option<usize>,
    rescan_steps: usize,
}

impl DeciderState {
    fn new(lhs: &Prefix) -> Self {
        assert!(lhs.len() < (1 << 31), "prefix too long for packed positions");
        let mut slot = vec![0u32; lhs.len()];
        for (j, (v, q)) in lhs.iter().enumerate() {
            slot[v as usize] = (j as u32) << 1 | q.bit() as u32;
        }
        let pending = lhs
            .quantifiers()
            .chunks(64)
            .map(|chunk| {
                let mut word = 0u64;
                for (b, q) in chunk.iter().enumerate() {
                    word |= (q.is_exists() as u64) << b;
                }
                word
            })
            .collect();
        let mut state = DeciderState {
            slot,
            pending,
            f_ptr: None,
            rescan_steps: 0,
        };
        state.f_ptr = state.last_pending_below(lhs.len());
        state
    }

    #[inline]
    fn lookup(&self, var: u32) -> (usize, Quantifier) {
        let s = self.slot[var as usize];
        ((s >> 1) as usize, Quantifier::from_bit(s & 1 == 1))
    }

    /// Largest pending position strictly below `end`.
    fn last_pending_below(&self, end: usize) -> Option<usize> {
        let mut word_idx = end / 64;
        let mut word = match self.pending.get(word_idx) {
            Some(&w) => w & ((1u64 << (end % 64)) - 1),
            None => 0,
        };
        loop {
            if word != 0 {
                return Some(word_idx * 64 + 63 - word.leading_zeros() as usize);
            }
            if word_idx == 0 {
                return None;
            }
            word_idx -= 1;
            word = self.pending[word_idx];
        }
    }

    /// Marks the existential at `pos` as matched and moves F if it was there.
    #[inline]
    fn mark_verified(&mut self, pos: usize) {
        self.pending[pos / 64] &= !(1u64 << (pos % 64));
        if self.f_ptr == Some(pos) {
            // Nothing after `pos` is pending, so the scan resumes just below it.
            self.f_ptr = self.last_pending_below(pos);
            // Counted as positions passed over, as a cell-by-cell scan would.
            self.rescan_steps += pos - self.f_ptr.unwrap_or(0);
        }
    }
}

/// Decides whether `s1` implies `s2` for every matrix.
pub fn implies(s1: &Prefix, s2: &Prefix) -> Result<Verdict, DecideError> {
    implies_with_stats(s1, s2).map(|(verdict, _)| verdict)
}

/// [`implies`], also returning work counters.
pub fn implies_with_stats(s1: &Prefix, s2: &Prefix) -> Result<(Verdict, DecideStats), DecideError> {
    if s1.len() != s2.len() {
        return Err(DecideError::LengthMismatch {
            lhs: s1.len(),
            rhs: s2.len(),
        });
    }
    if !s1.same_variables(s2) {
        return Err(DecideError::VariableSetMismatch);
    }

    let mut state = DeciderState::new(s1);
    let mut stats = DecideStats::default();
    for (i, (var, rhs_quant)) in s2.iter().enumerate().rev() {
        stats.iterations += 1;
        let (pos, lhs_quant) = state.lookup(var);
        let case = match (lhs_quant, rhs_quant) {
            (Quantifier::Exists, Quantifier::Forall) => Some(RejectCase::ExistsToForall),
            (Quantifier::Forall, Quantifier::Forall) if state.f_ptr.is_some_and(|f| f > pos) => {
                Some(RejectCase::BlockedUniversal)
            }
            _ => None,
        };
        if let Some(case) = case {
            stats.rescan_steps = state.rescan_steps;
            let witness = RejectWitness {
                case,
                s2_position: i,
                variable: var,
                blocking_f: match case {
                    RejectCase::BlockedUniversal => state.f_ptr,
                    RejectCase::ExistsToForall => None,
                },
            };
            return Ok((Verdict::Reject(witness), stats));
        }
        // Universals on the left never block anything, so only existentials
        // need recording.
        if lhs_quant.is_exists() {
            state.mark_verified(pos);
        }
    }
    stats.rescan_steps = state.rescan_steps;
    Ok((Verdict::Accept, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefix::{generated_names, parse_prefix_pair};

    fn decide(lhs: &str, rhs: &str) -> Verdict {
        let (a, b) = parse_prefix_pair(lhs, rhs).unwrap();
        implies(&a, &b).unwrap()
    }

    #[test]
    fn within_run_permutation_accepts() {
        assert!(decide("A x1 A x2 E x3 A x4", "A x2 A x1 E x3 A x4").is_accepted());
    }

    #[test]
    fn single_moves_accept() {
        assert!(decide("A x1", "E x1").is_accepted());
        assert!(decide("E x1 A x2", "A x2 E x1").is_accepted());
    }

    #[test]
    fn exists_to_forall_rejects() {
        let v = decide("E x1", "A x1");
        assert_eq!(
            v,
            Verdict::Reject(RejectWitness {
                case: RejectCase::ExistsToForall,
                s2_position: 0,
                variable: 0,
                blocking_f: None,
            })
        );
        assert_eq!(v.witness().unwrap().case.id(), 5);
    }

    #[test]
    fn universal_behind_existential_rejects() {
        let v = decide("A x1 A x2 E x3 A x4", "A x1 A x4 E x3 A x2");
        assert_eq!(
            v,
            Verdict::Reject(RejectWitness {
                case: RejectCase::BlockedUniversal,
                s2_position: 3,
                variable: 1,
                blocking_f: Some(2),
            })
        );
    }

    #[test]
    fn reverse_of_swap_rejects() {
        let v = decide("A x2 E x1", "E x1 A x2");
        assert_eq!(v.witness().unwrap().case, RejectCase::BlockedUniversal);
        assert_eq!(v.witness().unwrap().s2_position, 1);
    }

    #[test]
    fn no_existential_means_no_blocking() {
        assert!(decide("A a A b A c", "A c E a A b").is_accepted());
        assert!(decide("A a A b A c", "A c A a A b").is_accepted());
    }

    #[test]
    fn mismatched_inputs_error() {
        let a = Prefix::parse("A x").unwrap();
        let b = Prefix::parse("A y").unwrap();
        assert_eq!(implies(&a, &b), Err(DecideError::VariableSetMismatch));
        let c = Prefix::parse("A x E y").unwrap();
        assert_eq!(implies(&a, &c), Err(DecideError::LengthMismatch { lhs: 1, rhs: 2 }));
    }

    #[test]
    fn rescan_is_bounded_by_length() {
        use Quantifier::{Exists as E, Forall as A};
        // Alternating lhs against an all-existential rhs matching its order
        // exercises every rescan.
        let n = 1000;
        let names = generated_names(n);
        let quants: Vec<_> = (0..n).map(|i| if i % 3 == 0 { A } else { E }).collect();
        let lhs = Prefix::new((0..n as u32).collect(), quants, names.clone()).unwrap();
        let rhs = Prefix::new((0..n as u32).collect(), vec![E; n], names).unwrap();
        let (v, stats) = implies_with_stats(&lhs, &rhs).unwrap();
        assert!(v.is_accepted());
        assert_eq!(stats.iterations, n);
        assert!(stats.rescan_steps <= n);
    }
}
