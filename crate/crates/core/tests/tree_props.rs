//! Pair equivalence and cut points on small samples of specified trees.

mod common;

use common::random_cut_spec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semilinear::poset::{meet, orbits, Bounds, FinPoset, NodeId};
use semilinear::tree::{
    annotate, check_categorical, materialize_tree, parse_spec, two_orbit_equiv, SampleBudget,
};

fn small(depth: usize, width: usize, size: usize) -> SampleBudget {
    SampleBudget {
        depth,
        width,
        size,
        max_nodes: 10,
    }
}

fn pairs(p: &FinPoset) -> Vec<(NodeId, NodeId)> {
    p.ids()
        .flat_map(|x| p.ids().map(move |y| (x, y)))
        .filter(|&(x, y)| p.lt(x, y))
        .collect()
}

const CATEGORICAL: [&str; 4] = [
    "T = spine Q(1) with omega x T at orbit 0",
    "T = spine Q(1,a) with 2 x L at orbit 1\nL = spine 1",
    "T = spine 1^Q(1) with 2 x L at top\nL = spine Q(1)",
    "T = spine Q(1)^a with 3 x L at orbit 1\nL = spine 1^1",
];

#[test]
fn specs_used_below_are_categorical() {
    for text in CATEGORICAL {
        assert!(
            check_categorical(&parse_spec(text).unwrap(), 3).categorical,
            "{text}"
        );
    }
}

#[test]
fn equivalence_matches_pair_orbits_on_small_samples() {
    let mut compared = 0;
    for text in CATEGORICAL {
        let spec = parse_spec(text).unwrap();
        for seed in 0..4 {
            let Ok(s) = materialize_tree(&spec, &small(1, 2, 2), seed) else {
                continue;
            };
            let p = &s.poset;
            let ann = annotate(p, 3).unwrap();
            let two = orbits(p, 2, &Bounds::default()).unwrap();
            let ps = pairs(p);
            for &a in &ps {
                assert!(two_orbit_equiv(p, &ann, a, a).unwrap().equivalent);
                for &b in &ps {
                    let ab = two_orbit_equiv(p, &ann, a, b).unwrap();
                    let ba = two_orbit_equiv(p, &ann, b, a).unwrap();
                    assert_eq!(ab.equivalent, ba.equivalent);
                    let same = two.orbit_of(&[a.0, a.1]) == two.orbit_of(&[b.0, b.1]);
                    assert_eq!(ab.equivalent, same, "{text}: {a:?} {b:?}");
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 100);
}

#[test]
fn cut_points_follow_the_pairs_they_separate() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let budget = SampleBudget {
        depth: 1,
        width: 2,
        size: 1,
        max_nodes: 12,
    };
    let mut seen_cut = 0;
    for seed in 0..40 {
        let spec = parse_spec(&random_cut_spec(&mut rng)).unwrap();
        let Ok(s) = materialize_tree(&spec, &budget, seed) else {
            continue;
        };
        let p = &s.poset;
        let irr = s.irrational_nodes();
        if irr.is_empty() {
            continue;
        }
        seen_cut += 1;
        let one = orbits(p, 1, &Bounds::default()).unwrap();
        let two = orbits(p, 2, &Bounds::default()).unwrap();
        // a cut point with incomparable points above it is their meet; the
        // 2-orbit of such a pair fixes the 1-orbit of the cut point
        let plain: Vec<NodeId> = p.ids().filter(|v| !irr.contains(v)).collect();
        let mut witnessed = Vec::new();
        for &x in &plain {
            for &y in &plain {
                if let Some(m) = meet(p, x, y) {
                    if irr.contains(&m) && !p.comparable(x, y) {
                        witnessed
                            .push((two.orbit_of(&[x, y]).unwrap(), one.orbit_of(&[m]).unwrap()));
                    }
                }
            }
        }
        for &(pair_orbit, cut_orbit) in &witnessed {
            for &(q, c) in &witnessed {
                if q == pair_orbit {
                    assert_eq!(c, cut_orbit);
                }
            }
        }
    }
    assert!(seen_cut > 5);
}

#[test]
fn verdicts_ignore_names_and_equivalent_spines() {
    for text in CATEGORICAL {
        let base = check_categorical(&parse_spec(text).unwrap(), 3).to_string();
        let renamed = text.replace('T', "Top").replace('L', "Leaf");
        assert_eq!(
            check_categorical(&parse_spec(&renamed).unwrap(), 3).to_string(),
            base
        );
    }
    let a = check_categorical(
        &parse_spec("T = spine Q(1,a) with omega x T at orbit 0").unwrap(),
        3,
    );
    let b = check_categorical(
        &parse_spec("T = spine Q(a,Q(1,a)) with omega x T at orbit 0").unwrap(),
        3,
    );
    assert_eq!(a, b);
}
