//! Compact `u64` encoding of small prefixes for state-space search.
//!
//! Position `i` stores its variable in bits `4i..4i+4` and its quantifier
//! (1 = forall) in bit `48 + i`.

use crate::prefix::{Prefix, Quantifier};

/// Largest prefix length that fits the encoding.
pub(crate) const PACK_LIMIT: usize = 12;

const QUANT_SHIFT: u32 = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Packed(pub(crate) u64);

impl Packed {
    pub(crate) fn from_parts(sigma: &[u32], quants: &[Quantifier]) -> Self {
        debug_assert!(sigma.len() <= PACK_LIMIT);
        let mut word = 0u64;
        for (i, (&v, &q)) in sigma.iter().zip(quants).enumerate() {
            word |= (v as u64) << (4 * i);
            word |= (q.bit() as u64) << (QUANT_SHIFT + i as u32);
        }
        Packed(word)
    }

    pub(crate) fn from_prefix(p: &Prefix) -> Self {
        Self::from_parts(p.sigma(), p.quantifiers())
    }

    #[inline]
    pub(crate) fn var(self, i: usize) -> u32 {
        ((self.0 >> (4 * i)) & 0xf) as u32
    }

    #[inline]
    pub(crate) fn is_forall(self, i: usize) -> bool {
        (self.0 >> (QUANT_SHIFT + i as u32)) & 1 == 1
    }

    /// Exchanges positions `i` and `i + 1`, variables and quantifiers together.
    #[inline]
    pub(crate) fn swap(self, i: usize) -> Self {
        let var_mask = 0xffu64 << (4 * i);
        let vars = (self.0 & var_mask) >> (4 * i);
        let vars = ((vars & 0xf) << 4) | (vars >> 4);
        let q_shift = QUANT_SHIFT + i as u32;
        let q_mask = 0b11u64 << q_shift;
        let qs = (self.0 & q_mask) >> q_shift;
        let qs = ((qs & 1) << 1) | (qs >> 1);
        Packed((self.0 & !var_mask & !q_mask) | (vars << (4 * i)) | (qs << q_shift))
    }

    #[inline]
    pub(crate) fn toggle(self, i: usize) -> Self {
        Packed(self.0 ^ (1u64 << (QUANT_SHIFT + i as u32)))
    }

    pub(crate) fn unpack(self, n: usize) -> (Vec<u32>, Vec<Quantifier>) {
        let sigma = (0..n).map(|i| self.var(i)).collect();
        let quants = (0..n).map(|i| Quantifier::from_bit(self.is_forall(i))).collect();
        (sigma, quants)
    }

    /// Encoding of the class representative (variables sorted inside runs).
    pub(crate) fn canonical(self, n: usize) -> Self {
        let mut vars = [0u32; PACK_LIMIT];
        for (i, slot) in vars.iter_mut().enumerate().take(n) {
            *slot = self.var(i);
        }
        let mut start = 0;
        while start < n {
            let q = self.is_forall(start);
            let mut end = start + 1;
            while end < n && self.is_forall(end) == q {
                end += 1;
            }
            vars[start..end].sort_unstable();
            start = end;
        }
        let mut word = self.0 & !((1u64 << (4 * n)) - 1);
        for (i, &v) in vars.iter().enumerate().take(n) {
            word |= (v as u64) << (4 * i);
        }
        Packed(word)
    }

    /// Calls `f` on every state one move away, in either direction.
    ///
    /// Forward: swap of equal adjacent quantifiers, a forall turned into an
    /// exists, an adjacent exists-forall pair swapped into forall-exists.
    /// Backward applies the inverses of those moves.
    #[inline]
    pub(crate) fn for_each_neighbor(self, n: usize, backward: bool, mut f: impl FnMut(Packed)) {
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (self.is_forall(i), self.is_forall(i + 1));
            // Forward allows every adjacent swap except forall-exists;
            // backward every swap except exists-forall.
            let blocked = if backward { !a && b } else { a && !b };
            if !blocked {
                f(self.swap(i));
            }
        }
        for i in 0..n {
            if self.is_forall(i) != backward {
                f(self.toggle(i));
            }
        }
    }

    /// Forward moves that change the quantifier string, i.e. the moves that
    /// can leave the class.
    pub(crate) fn for_each_strict_successor(self, n: usize, mut f: impl FnMut(Packed)) {
        for i in 0..n.saturating_sub(1) {
            if !self.is_forall(i) && self.is_forall(i + 1) {
                f(self.swap(i));
            }
        }
        for i in 0..n {
            if self.is_forall(i) {
                f(self.toggle(i));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_swap() {
        let p = Prefix::parse("E c A a E b A d").unwrap();
        let packed = Packed::from_prefix(&p);
        let (sigma, quants) = packed.unpack(4);
        assert_eq!(sigma, p.sigma());
        assert_eq!(quants, p.quantifiers());

        let (sigma, quants) = packed.swap(1).unpack(4);
        assert_eq!(sigma, [2, 1, 0, 3]);
        assert_eq!(quants[1..3], [Quantifier::Exists, Quantifier::Forall]);
        assert_eq!(packed.swap(2).swap(2), packed);
    }

    #[test]
    fn canonical_matches_prefix_canonicalize() {
        let p = Prefix::parse("A d A b E c E a A e").unwrap();
        let c = Packed::from_prefix(&p).canonical(5);
        assert_eq!(c, Packed::from_prefix(p.canonicalize().rep()));
    }

    #[test]
    fn backward_inverts_forward() {
        let p = Prefix::parse("E a A b A c E d").unwrap();
        let s = Packed::from_prefix(&p);
        let mut fwd = Vec::new();
        s.for_each_neighbor(4, false, |q| fwd.push(q));
        for q in fwd {
            let mut back = Vec::new();
            q.for_each_neighbor(4, true, |r| back.push(r));
            assert!(back.contains(&s));
        }
    }
}
