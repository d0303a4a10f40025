//! Paths and alternating ranks.

use proptest::prelude::*;
use semilinear::cfpo::{alt, alt_rank, path, validate_cfpo, PathResult};
use semilinear::poset::{meet, rooted_tree_catalogue, FinPoset, NodeId};
use std::collections::BTreeSet;

#[test]
fn paths_on_trees_run_through_the_meet() {
    for p in rooted_tree_catalogue(6) {
        for x in p.ids() {
            assert_eq!(path(&p, x, x), PathResult::Unique(BTreeSet::from([x])));
            for y in p.ids() {
                let m = meet(&p, x, y).unwrap();
                let expected: BTreeSet<NodeId> = p
                    .ids()
                    .filter(|&z| p.le(m, z) && (p.le(z, x) || p.le(z, y)))
                    .collect();
                assert_eq!(path(&p, x, y), PathResult::Unique(expected));
                assert_eq!(path(&p, x, y), path(&p, y, x));
            }
        }
    }
}

#[test]
fn alternating_posets_are_cycle_free() {
    for n in 1..=12 {
        for reversed in [false, true] {
            assert!(
                validate_cfpo(&alt(n, reversed)).unwrap().is_cfpo,
                "alt({n})"
            );
        }
    }
}

/// The subposet of `p` on the nodes whose bit is set in `mask`.
fn induced(p: &FinPoset, mask: u32) -> FinPoset {
    let keep: Vec<NodeId> = p.ids().filter(|&i| mask & (1 << i) != 0).collect();
    p.restrict(&keep)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alt_rank_is_monotone_under_embedding(n in 2usize..9, outer in any::<u32>(), inner in any::<u32>()) {
        let p = alt(n, false);
        let full = (1u32 << n) - 1;
        let big = (outer & full) | 1;
        let small = big & (inner | 1);
        let q = induced(&p, big);
        let r = induced(&p, small);
        prop_assert!(alt_rank(&r).unwrap() <= alt_rank(&q).unwrap());
        prop_assert!(alt_rank(&q).unwrap() <= n);
    }
}
