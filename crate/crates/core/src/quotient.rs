//! Search states for the class quotient: a prefix up to in-run reordering is
//! its sequence of runs, each run a set of variables.
//!
//! Key layout: run `j` is a 10-bit variable mask at bits `10j..10j+10`, the
//! first run's quantifier (1 = forall) is bit 127. Runs are nonempty, so the
//! run count is the number of nonzero slots.

use crate::prefix::Prefix;

pub(crate) const QUOTIENT_LIMIT: usize = 10;

const WIDTH: u32 = 10;
const MASK: u128 = (1 << WIDTH) - 1;
const FIRST_FORALL: u128 = 1 << 127;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct RunKey(u128);

/// Decoded runs, quantifiers alternating from `first_forall`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Runs {
    first_forall: bool,
    masks: Vec<u16>,
}

impl Runs {
    fn forall(&self, j: usize) -> bool {
        self.first_forall ^ (j % 2 == 1)
    }
}

/// Accumulates `(mask, forall)` pieces, dropping empty ones and merging
/// neighbours with equal quantifiers.
#[derive(Clone, Copy)]
struct Builder {
    first_forall: Option<bool>,
    last_forall: bool,
    masks: [u16; QUOTIENT_LIMIT],
    len: usize,
}

impl Builder {
    fn new() -> Self {
        Builder {
            first_forall: None,
            last_forall: false,
            masks: [0; QUOTIENT_LIMIT],
            len: 0,
        }
    }

    #[inline]
    fn push(&mut self, mask: u16, forall: bool) {
        if mask == 0 {
            return;
        }
        if self.len > 0 && self.last_forall == forall {
            self.masks[self.len - 1] |= mask;
        } else {
            self.first_forall.get_or_insert(forall);
            self.masks[self.len] = mask;
            self.last_forall = forall;
            self.len += 1;
        }
    }

    fn finish(&self) -> RunKey {
        let mut word = 0u128;
        for (j, &m) in self.masks[..self.len].iter().enumerate() {
            word |= (m as u128) << (WIDTH * j as u32);
        }
        if self.first_forall == Some(true) {
            word |= FIRST_FORALL;
        }
        RunKey(word)
    }
}

fn bits(mask: u16) -> impl Iterator<Item = u16> {
    (0..16).map(|b| 1u16 << b).filter(move |bit| mask & bit != 0)
}

impl RunKey {
    pub(crate) fn from_prefix(p: &Prefix) -> Self {
        debug_assert!(p.len() <= QUOTIENT_LIMIT);
        let mut b = Builder::new();
        for (var, q) in p.iter() {
            b.push(1 << var, q.is_forall());
        }
        b.finish()
    }

    fn decode(self) -> Runs {
        let masks = (0..QUOTIENT_LIMIT)
            .map(|j| ((self.0 >> (WIDTH * j as u32)) & MASK) as u16)
            .take_while(|&m| m != 0)
            .collect();
        Runs {
            first_forall: self.0 & FIRST_FORALL != 0,
            masks,
        }
    }

    /// Calls `f` on every class one quantifier-changing move away.
    ///
    /// Forward, a universal becomes existential anywhere inside its run
    /// (splitting the rest of the run into any left and right part), or the
    /// last element of an existential run trades places with the first of
    /// the following universal run. Backward is the same with the
    /// quantifiers exchanged, which is exactly the inverse moves.
    pub(crate) fn for_each_neighbor(self, backward: bool, mut f: impl FnMut(RunKey)) {
        let runs = self.decode();
        // Quantifier that the moves demote (forall going forward).
        let hi = !backward;
        let k = runs.masks.len();
        let prefix_of = |end: usize| {
            let mut b = Builder::new();
            for j in 0..end {
                b.push(runs.masks[j], runs.forall(j));
            }
            b
        };

        for j in (0..k).filter(|&j| runs.forall(j) == hi) {
            let run = runs.masks[j];
            let head = prefix_of(j);
            for x in bits(run) {
                let rest = run & !x;
                // Every subset of `rest` can end up on the left of `x`.
                let mut left = rest;
                loop {
                    let mut b = head;
                    b.push(left, hi);
                    b.push(x, !hi);
                    b.push(rest & !left, hi);
                    for t in j + 1..k {
                        b.push(runs.masks[t], runs.forall(t));
                    }
                    f(b.finish());
                    if left == 0 {
                        break;
                    }
                    left = (left - 1) & rest;
                }
            }
        }

        for j in (0..k.saturating_sub(1)).filter(|&j| runs.forall(j) != hi) {
            let (low_run, high_run) = (runs.masks[j], runs.masks[j + 1]);
            let head = prefix_of(j);
            for x in bits(low_run) {
                for y in bits(high_run) {
                    let mut b = head;
                    b.push(low_run & !x, !hi);
                    b.push(y, hi);
                    b.push(x, !hi);
                    b.push(high_run & !y, hi);
                    for t in j + 2..k {
                        b.push(runs.masks[t], runs.forall(t));
                    }
                    f(b.finish());
                }
            }
        }
    }
}
