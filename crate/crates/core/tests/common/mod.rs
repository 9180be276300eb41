#![allow(dead_code)]

use std::sync::Arc;

use itertools::Itertools;
use prenex::decider::{RejectCase, RejectWitness};
use prenex::prefix::generated_names;
use prenex::{Prefix, Quantifier};
use rand::seq::SliceRandom;
use rand::Rng;

/// All `n! * 2^n` raw prefixes over `x1..xn`.
pub fn all_prefixes(n: usize) -> Vec<Prefix> {
    let names = generated_names(n);
    let mut out = Vec::new();
    for sigma in (0..n as u32).permutations(n) {
        for mask in 0u32..1 << n {
            let quants = (0..n).map(|i| Quantifier::from_bit(mask >> i & 1 == 1)).collect();
            out.push(Prefix::new(sigma.clone(), quants, names.clone()).unwrap());
        }
    }
    out
}

pub fn random_prefix<R: Rng>(rng: &mut R, names: &Arc<[String]>) -> Prefix {
    let mut sigma: Vec<u32> = (0..names.len() as u32).collect();
    sigma.shuffle(rng);
    let quants = (0..names.len()).map(|_| Quantifier::from_bit(rng.gen())).collect();
    Prefix::new(sigma, quants, names.clone()).unwrap()
}

pub fn with_quantifiers(p: &Prefix, q: Quantifier) -> Prefix {
    Prefix::new(p.sigma().to_vec(), vec![q; p.len()], p.names().clone()).unwrap()
}

/// Re-derives a reject witness from the raw inputs, without the decider's
/// scratch state. Returns a description of the first violated condition.
pub fn witness_violation(s1: &Prefix, s2: &Prefix, w: &RejectWitness) -> Option<String> {
    let n = s1.len();
    if w.s2_position >= n {
        return Some("s2_position out of range".into());
    }
    if s2.sigma()[w.s2_position] != w.variable {
        return Some("variable does not sit at s2_position".into());
    }
    let lhs_pos = s1.sigma().iter().position(|&v| v == w.variable).unwrap();
    let lhs_q = s1.quantifiers()[lhs_pos];
    let rhs_q = s2.quantifiers()[w.s2_position];
    match w.case {
        RejectCase::ExistsToForall => {
            if !(lhs_q.is_exists() && rhs_q.is_forall()) {
                return Some("case 5 quantifiers do not match".into());
            }
            if w.blocking_f.is_some() {
                return Some("case 5 carries an F value".into());
            }
        }
        RejectCase::BlockedUniversal => {
            if !(lhs_q.is_forall() && rhs_q.is_forall()) {
                return Some("case 4 quantifiers are not both universal".into());
            }
            let Some(f) = w.blocking_f else {
                return Some("case 4 without F".into());
            };
            if f <= lhs_pos {
                return Some("F does not follow the variable".into());
            }
            if !s1.quantifiers()[f].is_exists() {
                return Some("F is not existential on the left".into());
            }
            // The blocking variable must not yet have been matched, i.e. it
            // sits before the rejection point on the right.
            let blocker = s1.sigma()[f];
            let rhs_pos = s2.sigma().iter().position(|&v| v == blocker).unwrap();
            if rhs_pos >= w.s2_position {
                return Some("F variable was already matched".into());
            }
        }
    }
    None
}

/// Ordered Bell numbers by `a(n) = sum_{k=1..n} C(n, k) a(n - k)`.
pub fn ordered_bell(n: usize) -> u64 {
    let mut a = vec![1u64];
    for m in 1..=n {
        let mut binom = 1u64;
        let mut total = 0u64;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u64 / k as u64;
            total += binom * a[m - k];
        }
        a.push(total);
    }
    a[n]
}
