mod common;

use prenex::prefix::{format_prefix, generated_names};
use prenex::{implies, parse_prefix_pair, Prefix, Quantifier};
use proptest::prelude::*;

fn arb_prefix(max_n: usize) -> impl Strategy<Value = Prefix> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(any::<bool>(), n),
            )
        })
        .prop_map(|(sigma, bits)| {
            let quants = bits.into_iter().map(Quantifier::from_bit).collect();
            Prefix::with_generated_names(sigma, quants).unwrap()
        })
}

/// Two prefixes over the same `n` variables.
fn arb_pair(max_n: usize) -> impl Strategy<Value = (Prefix, Prefix)> {
    (1..=max_n).prop_flat_map(|n| (arb_prefix_n(n), arb_prefix_n(n)))
}

fn arb_prefix_n(n: usize) -> impl Strategy<Value = Prefix> {
    (
        Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle(),
        proptest::collection::vec(any::<bool>(), n),
    )
        .prop_map(|(sigma, bits)| {
            let quants = bits.into_iter().map(Quantifier::from_bit).collect();
            Prefix::with_generated_names(sigma, quants).unwrap()
        })
}

/// Random prefix over `n` variables drawn from a narrow quantifier pool, so
/// that equivalent pairs actually occur.
fn arb_triple_same_quants(n: usize) -> impl Strategy<Value = (Prefix, Prefix, Prefix)> {
    let perm = || Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle();
    (proptest::collection::vec(any::<bool>(), n), perm(), perm(), perm()).prop_map(move |(bits, a, b, c)| {
        let quants: Vec<Quantifier> = bits.into_iter().map(Quantifier::from_bit).collect();
        let names = generated_names(n);
        let mk = |sigma| Prefix::new(sigma, quants.clone(), names.clone()).unwrap();
        (mk(a), mk(b), mk(c))
    })
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(p in arb_prefix(20)) {
        let once = p.canonicalize();
        prop_assert_eq!(once.rep().canonicalize(), once.clone());
    }

    #[test]
    fn canonicalize_keeps_quantifiers_and_run_contents(p in arb_prefix(20)) {
        let rep = p.canonicalize().into_rep();
        prop_assert_eq!(rep.quantifiers(), p.quantifiers());
        for run in p.runs() {
            let mut before = p.sigma()[run.start..run.end()].to_vec();
            let after = &rep.sigma()[run.start..run.end()];
            before.sort_unstable();
            prop_assert_eq!(&before[..], after);
            prop_assert!(after.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn runs_alternate_and_cover(p in arb_prefix(30)) {
        let runs = p.runs();
        prop_assert_eq!(runs.iter().map(|r| r.len).sum::<usize>(), p.len());
        prop_assert_eq!(runs[0].start, 0);
        for w in runs.windows(2) {
            prop_assert_eq!(w[0].end(), w[1].start);
            prop_assert_ne!(w[0].quant, w[1].quant);
        }
        for r in &runs {
            prop_assert!(r.len >= 1);
            prop_assert!(p.quantifiers()[r.start..r.end()].iter().all(|&q| q == r.quant));
        }
    }

    #[test]
    fn format_parse_round_trip(p in arb_prefix(15)) {
        let text = format_prefix(&p);
        let (a, b) = parse_prefix_pair(&text, &text).unwrap();
        prop_assert_eq!(&a, &p);
        prop_assert_eq!(&b, &p);
        prop_assert_eq!(Prefix::parse(&text).unwrap(), p);
    }

    #[test]
    fn equivalence_is_an_equivalence_relation((a, b, c) in (1usize..=5).prop_flat_map(arb_triple_same_quants)) {
        prop_assert!(a.equivalent(&a).unwrap());
        prop_assert_eq!(a.equivalent(&b).unwrap(), b.equivalent(&a).unwrap());
        if a.equivalent(&b).unwrap() && b.equivalent(&c).unwrap() {
            prop_assert!(a.equivalent(&c).unwrap());
        }
    }

    #[test]
    fn equivalent_prefixes_imply_each_other((a, b, _) in (1usize..=6).prop_flat_map(arb_triple_same_quants)) {
        if a.equivalent(&b).unwrap() {
            prop_assert!(implies(&a, &b).unwrap().is_accepted());
            prop_assert!(implies(&b, &a).unwrap().is_accepted());
        }
    }

    #[test]
    fn class_order_is_text_order((a, b) in arb_pair(12)) {
        let (ca, cb) = (a.canonicalize(), b.canonicalize());
        prop_assert_eq!(ca.cmp(&cb), ca.to_string().cmp(&cb.to_string()));
    }

    #[test]
    fn witnesses_hold((a, b) in arb_pair(40)) {
        if let Some(w) = implies(&a, &b).unwrap().witness() {
            prop_assert_eq!(common::witness_violation(&a, &b, w), None);
        }
    }
}
