//! Properties of normal forms, orbits and sequences on random terms.

mod common;

use common::random_term;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semilinear::poset::{orbits, Bounds};
use semilinear::terms::{
    materialize, min_size, normalize, normalize_sequence, one_orbits, orbit_count, parse_term,
    NfSequence, Tail, Term,
};
use std::collections::BTreeSet;

fn term_from(seed: u64) -> Term {
    random_term(&mut ChaCha8Rng::seed_from_u64(seed), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let nf = normalize(&term_from(seed));
        prop_assert_eq!(normalize(&nf), nf);
    }

    #[test]
    fn normalize_keeps_endpoints(seed in any::<u64>()) {
        let t = term_from(seed);
        let nf = normalize(&t);
        prop_assert_eq!(t.has_min(), nf.has_min());
        prop_assert_eq!(t.has_max(), nf.has_max());
    }

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let t = term_from(seed);
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t.clone());
        let nf = normalize(&t);
        prop_assert_eq!(parse_term(&nf.to_string()).unwrap(), nf);
    }

    #[test]
    fn samples_meet_every_orbit(seed in any::<u64>(), extra in 0usize..6) {
        let t = normalize(&term_from(seed));
        let s = materialize(&t, min_size(&t) + extra, seed).unwrap();
        let seen: BTreeSet<usize> = s.points.iter().map(|p| p.orbit).collect();
        prop_assert_eq!(seen.len(), orbit_count(&t));
    }

    #[test]
    fn sequence_windows_stay_normal(seeds in prop::collection::vec(any::<u64>(), 1..6), cut in any::<prop::sample::Index>()) {
        let members: Vec<Term> = seeds.iter().map(|&s| term_from(s)).collect();
        let nf = normalize_sequence(&members, None);
        prop_assert!(NfSequence::members_are_normal(&nf.prefix));
        let n = nf.prefix.len();
        if n > 0 {
            let i = cut.index(n);
            for j in i + 1..=n {
                prop_assert!(NfSequence::members_are_normal(&nf.prefix[i..j]));
            }
        }
    }
}

#[test]
fn finite_terms_have_one_orbit_per_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100 {
        let t = random_term(&mut rng, 4);
        let Some(n) = t.finite_len() else { continue };
        let s = materialize(&t, n, 0).unwrap();
        let brute = orbits(
            &s.to_poset(),
            1,
            &Bounds {
                max_nodes: 64,
                ..Bounds::default()
            },
        )
        .unwrap();
        assert_eq!(one_orbits(&normalize(&t)).len(), brute.count, "{t}");
        checked += 1;
    }
}

#[test]
fn omega_tails() {
    let one = parse_term("1").unwrap();
    let q = parse_term("Q(1)").unwrap();
    assert_eq!(
        normalize_sequence(&[], Some(std::slice::from_ref(&one))).tail,
        Tail::AllOnes
    );
    // a period that absorbs itself collapses the tail
    let s = normalize_sequence(std::slice::from_ref(&one), Some(std::slice::from_ref(&q)));
    assert_eq!(s.tail, Tail::None);
    assert_eq!(s.as_term().unwrap().to_string(), "1^Q(1)");
    // the rotation 1^Q(1) of Q(1)^1 absorbs itself
    let s = normalize_sequence(&[], Some(&[q.clone(), one.clone()]));
    assert_eq!(s.as_term().unwrap().to_string(), "Q(1)");
    // no rotation of 1^1^Q(1) absorbs itself
    let s = normalize_sequence(&[], Some(&[one.clone(), one, q]));
    assert!(matches!(s.tail, Tail::Periodic(_)));
}
