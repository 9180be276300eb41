//! Brute-force reference for implication: reachability under the three
//! sound moves, searched over raw prefixes.
//!
//! Only usable for small `n`; it exists to check the linear decider.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::packed::{Packed, PACK_LIMIT};
use crate::prefix::{CanonicalClass, Prefix, Quantifier};
use crate::quotient::{RunKey, QUOTIENT_LIMIT};
use crate::InstanceTooLarge;

/// Default size cap for oracle searches (8!·2^8 states in the worst case).
pub const DEFAULT_MAX_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    InstanceTooLarge(#[from] InstanceTooLarge),
    #[error("prefixes do not quantify the same variables")]
    VariableSetMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    /// Swap two adjacent variables carrying the same quantifier.
    SwapSame,
    /// Turn a universal into an existential in place.
    Flip,
    /// Swap an adjacent exists-forall pair into forall-exists.
    SwapExistsForall,
}

/// A single move at `position` (the left element for the swaps).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub kind: MoveKind,
    pub position: usize,
}

impl Move {
    pub fn applies_to(&self, p: &Prefix) -> bool {
        let q = p.quantifiers();
        let pair = || q.get(self.position).zip(q.get(self.position + 1));
        match self.kind {
            MoveKind::SwapSame => pair().is_some_and(|(a, b)| a == b),
            MoveKind::Flip => q.get(self.position).is_some_and(|a| a.is_forall()),
            MoveKind::SwapExistsForall => {
                pair().is_some_and(|(a, b)| a.is_exists() && b.is_forall())
            }
        }
    }

    /// The successor, or `None` if the move does not apply.
    pub fn apply(&self, p: &Prefix) -> Option<Prefix> {
        if !self.applies_to(p) {
            return None;
        }
        let mut sigma = p.sigma().to_vec();
        let mut quants = p.quantifiers().to_vec();
        match self.kind {
            MoveKind::SwapSame | MoveKind::SwapExistsForall => {
                sigma.swap(self.position, self.position + 1);
                quants.swap(self.position, self.position + 1);
            }
            MoveKind::Flip => quants[self.position] = Quantifier::Exists,
        }
        Some(p.with_parts_unchecked(sigma, quants))
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            MoveKind::SwapSame => "swap-same",
            MoveKind::Flip => "flip",
            MoveKind::SwapExistsForall => "swap-exists-forall",
        };
        write!(f, "{kind}@{}", self.position)
    }
}

/// Every move applicable to `p`.
pub fn moves(p: &Prefix) -> Vec<Move> {
    let kinds = [MoveKind::SwapSame, MoveKind::Flip, MoveKind::SwapExistsForall];
    (0..p.len())
        .flat_map(|position| kinds.map(|kind| Move { kind, position }))
        .filter(|m| m.applies_to(p))
        .collect()
}

/// All distinct prefixes one move away from `p`, sorted.
pub fn successors(p: &Prefix) -> Vec<Prefix> {
    let set: BTreeSet<Prefix> = moves(p).iter().filter_map(|m| m.apply(p)).collect();
    set.into_iter().collect()
}

/// Search direction for [`Oracle::closure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Everything `p` implies (its necessary consequences).
    Forward,
    /// Everything that implies `p` (its sufficient conditions).
    Backward,
}

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    max_n: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(DEFAULT_MAX_N)
    }
}

impl Oracle {
    /// Caps above the encoding limit of 12 are clamped.
    pub fn new(max_n: usize) -> Self {
        Oracle {
            max_n: max_n.min(PACK_LIMIT),
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    fn check_size(&self, n: usize) -> Result<(), InstanceTooLarge> {
        if n > self.max_n {
            Err(InstanceTooLarge { n, cap: self.max_n })
        } else {
            Ok(())
        }
    }

    /// True iff `s2` is reachable from `s1` by moves.
    ///
    /// Searches from both ends at once (forward from `s1`, backward from
    /// `s2` with inverse moves) and stops when the searches meet or either
    /// side is exhausted. Up to 10 variables the search runs on classes
    /// (runs as variable sets); larger inputs use [`Oracle::implies_raw`].
    pub fn implies(&self, s1: &Prefix, s2: &Prefix) -> Result<bool, OracleError> {
        self.check_pair(s1, s2)?;
        if s1.len() > QUOTIENT_LIMIT {
            return self.implies_raw(s1, s2);
        }
        Ok(meet_in_middle(RunKey::from_prefix(s1), RunKey::from_prefix(s2), |state, backward, f| {
            state.for_each_neighbor(backward, f)
        }))
    }

    /// [`Oracle::implies`] over raw prefixes, with in-run swaps as explicit
    /// moves. Reachable sets are unions of whole classes, so reaching `s2`
    /// itself is the same as reaching its class.
    pub fn implies_raw(&self, s1: &Prefix, s2: &Prefix) -> Result<bool, OracleError> {
        self.check_pair(s1, s2)?;
        let n = s1.len();
        Ok(meet_in_middle(Packed::from_prefix(s1), Packed::from_prefix(s2), |state, backward, f| {
            state.for_each_neighbor(n, backward, f)
        }))
    }

    fn check_pair(&self, s1: &Prefix, s2: &Prefix) -> Result<(), OracleError> {
        if !s1.same_variables(s2) {
            return Err(OracleError::VariableSetMismatch);
        }
        self.check_size(s1.len())?;
        Ok(())
    }

    /// Classes reachable from `p` in the given direction, including the
    /// class of `p`, sorted by canonical text.
    pub fn closure(&self, p: &Prefix, direction: Direction) -> Result<Vec<CanonicalClass>, OracleError> {
        let n = p.len();
        self.check_size(n)?;
        let reached = raw_closure(Packed::from_prefix(p), n, direction == Direction::Backward);

        let classes: FxHashSet<Packed> = reached.into_iter().map(|s| s.canonical(n)).collect();
        let mut out: Vec<CanonicalClass> = classes
            .into_iter()
            .map(|s| {
                let (sigma, quants) = s.unpack(n);
                p.with_parts_unchecked(sigma, quants).canonicalize()
            })
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Two-ended breadth-first search. `expand(state, backward, f)` must call
/// `f` on every forward (or, with `backward`, inverse) neighbour.
fn meet_in_middle<S, E>(start: S, goal: S, mut expand: E) -> bool
where
    S: Copy + Eq + Hash,
    E: FnMut(S, bool, &mut dyn FnMut(S)),
{
    if start == goal {
        return true;
    }
    let mut seen: [FxHashSet<S>; 2] = Default::default();
    seen[0].insert(start);
    seen[1].insert(goal);
    let mut frontiers = [vec![start], vec![goal]];

    while !frontiers[0].is_empty() && !frontiers[1].is_empty() {
        let side = usize::from(frontiers[1].len() < frontiers[0].len());
        let frontier = std::mem::take(&mut frontiers[side]);
        let [fwd, bwd] = &mut seen;
        let (own, other) = if side == 0 { (fwd, &*bwd) } else { (bwd, &*fwd) };
        let mut next = Vec::new();
        let mut met = false;
        for state in frontier {
            expand(state, side == 1, &mut |nb| {
                if other.contains(&nb) {
                    met = true;
                } else if own.insert(nb) {
                    next.push(nb);
                }
            });
            if met {
                return true;
            }
        }
        frontiers[side] = next;
    }
    false
}

fn raw_closure(start: Packed, n: usize, backward: bool) -> FxHashSet<Packed> {
    let mut seen = FxHashSet::default();
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        state.for_each_neighbor(n, backward, |nb| {
            if seen.insert(nb) {
                queue.push_back(nb);
            }
        });
    }
    seen
}

/// [`Oracle::implies`] with an explicit cap.
pub fn oracle_implies(s1: &Prefix, s2: &Prefix, max_n: usize) -> Result<bool, OracleError> {
    Oracle::new(max_n).implies(s1, s2)
}

/// Forward [`Oracle::closure`] with an explicit cap.
pub fn closure(p: &Prefix, max_n: usize) -> Result<Vec<CanonicalClass>, OracleError> {
    Oracle::new(max_n).closure(p, Direction::Forward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefix::parse_prefix_pair;

    fn texts(ps: &[Prefix]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn successors_examples() {
        let p = Prefix::parse("E x1 A x2").unwrap();
        let mut got = texts(&successors(&p));
        got.sort();
        assert_eq!(got, ["A x2 E x1", "E x1 E x2"]);
        let m = moves(&p);
        assert_eq!(
            m,
            [
                Move { kind: MoveKind::SwapExistsForall, position: 0 },
                Move { kind: MoveKind::Flip, position: 1 },
            ]
        );

        let p = Prefix::parse("A x1 A x2").unwrap();
        let mut got = texts(&successors(&p));
        got.sort();
        assert_eq!(got, ["A x1 E x2", "A x2 A x1", "E x1 A x2"]);

        assert!(successors(&Prefix::parse("E x1").unwrap()).is_empty());
    }

    #[test]
    fn moves_reject_inapplicable_positions() {
        let p = Prefix::parse("A a E b").unwrap();
        assert!(Move { kind: MoveKind::SwapExistsForall, position: 0 }.apply(&p).is_none());
        assert!(Move { kind: MoveKind::SwapSame, position: 0 }.apply(&p).is_none());
        assert!(Move { kind: MoveKind::Flip, position: 1 }.apply(&p).is_none());
        assert!(Move { kind: MoveKind::SwapSame, position: 1 }.apply(&p).is_none());
        assert!(Move { kind: MoveKind::Flip, position: 7 }.apply(&p).is_none());
    }

    #[test]
    fn packed_neighbors_match_moves() {
        for text in ["A a A b E c", "E a A b E c A d", "E a E b", "A a"] {
            let p = Prefix::parse(text).unwrap();
            let mut packed = Vec::new();
            Packed::from_prefix(&p).for_each_neighbor(p.len(), false, |q| packed.push(q));
            packed.sort();
            let mut expected: Vec<Packed> = successors(&p).iter().map(Packed::from_prefix).collect();
            expected.sort();
            assert_eq!(packed, expected, "{text}");
        }
    }

    fn check(lhs: &str, rhs: &str) -> bool {
        let (a, b) = parse_prefix_pair(lhs, rhs).unwrap();
        oracle_implies(&a, &b, DEFAULT_MAX_N).unwrap()
    }

    #[test]
    fn oracle_examples() {
        assert!(check("A x1", "E x1"));
        assert!(!check("E x1", "A x1"));
        assert!(check("E x1 A x2", "A x2 E x1"));
        assert!(!check("A x1 A x2 E x3 A x4", "A x1 A x4 E x3 A x2"));
        assert!(check("A x1 A x2 E x3 A x4", "A x2 A x1 E x3 A x4"));
    }

    #[test]
    fn closure_examples() {
        let p = Prefix::parse("E x1 A x2").unwrap();
        let got: Vec<String> = closure(&p, 8).unwrap().iter().map(|c| c.to_string()).collect();
        assert_eq!(got, ["A x2 E x1", "E x1 A x2", "E x1 E x2"]);

        let p = Prefix::parse("E x1 E x2").unwrap();
        assert_eq!(closure(&p, 8).unwrap().len(), 1);

        let p = Prefix::parse("A x1 A x2").unwrap();
        assert_eq!(closure(&p, 8).unwrap().len(), 6);
    }

    #[test]
    fn backward_closure_of_bottom_is_everything() {
        let p = Prefix::parse("E x1 E x2").unwrap();
        let got = Oracle::default().closure(&p, Direction::Backward).unwrap();
        assert_eq!(got.len(), 6);
        let top = Prefix::parse("A x1 A x2").unwrap();
        assert_eq!(Oracle::default().closure(&top, Direction::Backward).unwrap().len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let p = Prefix::parse("A a A b A c").unwrap();
        let err = oracle_implies(&p, &p, 2).unwrap_err();
        assert_eq!(err, OracleError::InstanceTooLarge(InstanceTooLarge { n: 3, cap: 2 }));
        assert!(closure(&p, 2).is_err());
        assert_eq!(Oracle::new(100).max_n(), PACK_LIMIT);
    }
}
