//! Cycle-free partial orders on finite diagrams: path completion,
//! connecting sets, paths, and the alternating chains that grade them.

use crate::poset::{FinPoset, Node, NodeId, PosetError};
use std::collections::BTreeSet;

pub use crate::poset::join;

/// Nodes the completion may add before giving up, per original node.
const COMPLETION_FACTOR: usize = 8;
/// Search steps allowed in [`alt_rank`].
pub const ALT_SEARCH_STEPS: u64 = 20_000_000;

fn lower_bounds(p: &FinPoset, x: NodeId, y: NodeId) -> Vec<NodeId> {
    p.ids().filter(|&z| p.le(z, x) && p.le(z, y)).collect()
}

fn upper_bounds(p: &FinPoset, x: NodeId, y: NodeId) -> Vec<NodeId> {
    p.ids().filter(|&z| p.le(x, z) && p.le(y, z)).collect()
}

fn has_greatest(p: &FinPoset, set: &[NodeId]) -> bool {
    set.iter().any(|&g| set.iter().all(|&z| p.le(z, g)))
}

fn has_least(p: &FinPoset, set: &[NodeId]) -> bool {
    set.iter().any(|&l| set.iter().all(|&z| p.le(l, z)))
}

fn fresh_name(p: &FinPoset, prefix: &str, k: &mut usize) -> String {
    loop {
        let name = format!("{prefix}{k}");
        *k += 1;
        if p.id(&name).is_err() {
            return name;
        }
    }
}

/// The smallest extension of `p` in which every pair with a common lower
/// bound has a meet and every pair with a common upper bound has a join.
/// Added nodes are flagged irrational and keep the ids after the original
/// ones. A missing meet of `x` and `y` is added just above all their
/// common lower bounds and below `x` and `y`; joins dually.
pub fn path_completion(p: &FinPoset) -> Result<FinPoset, PosetError> {
    let limit = p.len() + COMPLETION_FACTOR * p.len().max(1);
    let mut cur = p.clone();
    let mut counter = 0;
    loop {
        let pairs: Vec<(NodeId, NodeId)> = cur
            .ids()
            .flat_map(|x| (x + 1..cur.len()).map(move |y| (x, y)))
            .collect();
        let missing = pairs.into_iter().find_map(|(x, y)| {
            let low = lower_bounds(&cur, x, y);
            if !low.is_empty() && !has_greatest(&cur, &low) {
                return Some((low, vec![x, y], true));
            }
            let high = upper_bounds(&cur, x, y);
            if !high.is_empty() && !has_least(&cur, &high) {
                return Some((vec![x, y], high, false));
            }
            None
        });
        let Some((below, above, is_meet)) = missing else {
            return Ok(cur);
        };
        if cur.len() >= limit {
            return Err(PosetError::Budget(format!(
                "path completion exceeded {limit} nodes"
            )));
        }
        let name = fresh_name(&cur, if is_meet { "_m" } else { "_j" }, &mut counter);
        let mut nodes = cur.nodes().to_vec();
        nodes.push(Node::new(name).irrational());
        let new = cur.len();
        let mut rel = cur.relations();
        rel.extend(below.iter().map(|&b| (b, new)));
        rel.extend(above.iter().map(|&a| (new, a)));
        cur = FinPoset::new(nodes, &rel)?;
    }
}

/// A tuple `c_1 .. c_n` from `a` to `b`: consecutive members comparable
/// with strictly alternating direction, non-consecutive members
/// incomparable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConnectingSet {
    pub nodes: Vec<NodeId>,
}

impl ConnectingSet {
    /// `true` at position `i` when `c_i < c_{i+1}`.
    pub fn directions(&self, p: &FinPoset) -> Vec<bool> {
        self.nodes.windows(2).map(|w| p.lt(w[0], w[1])).collect()
    }
}

/// All connecting sets from `a` to `b` in `p` (which should already be
/// path complete), in lexicographic order.
pub fn connecting_sets(p: &FinPoset, a: NodeId, b: NodeId) -> Vec<ConnectingSet> {
    fn extend(p: &FinPoset, b: NodeId, tuple: &mut Vec<NodeId>, out: &mut Vec<ConnectingSet>) {
        let last = *tuple.last().expect("nonempty");
        let rising = (tuple.len() >= 2).then(|| p.lt(tuple[tuple.len() - 2], last));
        for next in p.ids() {
            if tuple.contains(&next) || !p.comparable(last, next) {
                continue;
            }
            // the direction must turn at `last`
            let up = p.lt(last, next);
            if rising == Some(up) {
                continue;
            }
            if tuple[..tuple.len() - 1]
                .iter()
                .any(|&c| p.comparable(c, next))
            {
                continue;
            }
            tuple.push(next);
            if next == b {
                out.push(ConnectingSet {
                    nodes: tuple.clone(),
                });
            } else {
                extend(p, b, tuple, out);
            }
            tuple.pop();
        }
    }
    let mut out = Vec::new();
    if a != b {
        extend(p, b, &mut vec![a], &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathResult {
    Unique(BTreeSet<NodeId>),
    Ambiguous,
    None,
}

/// Maximal chains of the interval `[lo, hi]`.
fn interval_chains(p: &FinPoset, lo: NodeId, hi: NodeId) -> Vec<Vec<NodeId>> {
    fn walk(
        p: &FinPoset,
        at: NodeId,
        hi: NodeId,
        chain: &mut Vec<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        if at == hi {
            out.push(chain.clone());
            return;
        }
        for c in p.upper_covers(at) {
            if p.le(c, hi) {
                chain.push(c);
                walk(p, c, hi, chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(p, lo, hi, &mut vec![lo], &mut out);
    out
}

/// Distinct node sets of paths along one connecting set, stopping once
/// `limit` sets are known.
fn paths_along(
    p: &FinPoset,
    c: &ConnectingSet,
    found: &mut BTreeSet<BTreeSet<NodeId>>,
    limit: usize,
) {
    let segments: Vec<Vec<Vec<NodeId>>> = c
        .nodes
        .windows(2)
        .map(|w| {
            let (lo, hi) = if p.lt(w[0], w[1]) {
                (w[0], w[1])
            } else {
                (w[1], w[0])
            };
            interval_chains(p, lo, hi)
        })
        .collect();
    fn choose(
        k: usize,
        c: &ConnectingSet,
        segments: &[Vec<Vec<NodeId>>],
        chosen: &mut Vec<usize>,
        found: &mut BTreeSet<BTreeSet<NodeId>>,
        limit: usize,
    ) {
        if found.len() >= limit {
            return;
        }
        if k == segments.len() {
            let set = chosen
                .iter()
                .enumerate()
                .flat_map(|(i, &s)| segments[i][s].iter().copied())
                .collect();
            found.insert(set);
            return;
        }
        for (s, sigma) in segments[k].iter().enumerate() {
            // earlier chains may only meet this one at the shared member
            let clash = (0..k).any(|i| {
                segments[i][chosen[i]]
                    .iter()
                    .any(|x| sigma.contains(x) && !(i + 1 == k && *x == c.nodes[k]))
            });
            if !clash {
                chosen.push(s);
                choose(k + 1, c, segments, chosen, found, limit);
                chosen.pop();
            }
        }
    }
    choose(0, c, &segments, &mut Vec::new(), found, limit);
}

/// The path from `a` to `b` in `p` (which should already be path
/// complete): unique, ambiguous, or absent.
pub fn path(p: &FinPoset, a: NodeId, b: NodeId) -> PathResult {
    if a == b {
        return PathResult::Unique(BTreeSet::from([a]));
    }
    let mut found = BTreeSet::new();
    for c in connecting_sets(p, a, b) {
        paths_along(p, &c, &mut found, 2);
        if found.len() > 1 {
            return PathResult::Ambiguous;
        }
    }
    match found.into_iter().next() {
        Some(set) => PathResult::Unique(set),
        None => PathResult::None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfpoReport {
    pub is_cfpo: bool,
    /// The first pair, in node order, joined by more than one path.
    pub witness: Option<(NodeId, NodeId)>,
}

/// Whether every pair of nodes of `p` is joined by at most one path in the
/// path completion.
pub fn validate_cfpo(p: &FinPoset) -> Result<CfpoReport, PosetError> {
    let full = path_completion(p)?;
    for x in p.ids() {
        for y in x + 1..p.len() {
            if path(&full, x, y) == PathResult::Ambiguous {
                return Ok(CfpoReport {
                    is_cfpo: false,
                    witness: Some((x, y)),
                });
            }
        }
    }
    Ok(CfpoReport {
        is_cfpo: true,
        witness: None,
    })
}

/// The alternating poset on `a0 .. a{n-1}` where odd-indexed points lie
/// below their neighbours; `reversed` flips the order.
pub fn alt(n: usize, reversed: bool) -> FinPoset {
    assert!(n >= 1, "alternating chains need at least one point");
    let nodes = (0..n).map(|i| Node::new(format!("a{i}"))).collect();
    let mut rel = Vec::new();
    for i in (1..n).step_by(2) {
        rel.push((i, i - 1));
        if i + 1 < n {
            rel.push((i, i + 1));
        }
    }
    if reversed {
        rel = rel.into_iter().map(|(x, y)| (y, x)).collect();
    }
    FinPoset::new(nodes, &rel).expect("alternating chains are acyclic")
}

/// The largest `n` such that the alternating poset on `n` points, or its
/// reverse, embeds in `p` (preserving both comparability and
/// incomparability).
pub fn alt_rank(p: &FinPoset) -> Result<usize, PosetError> {
    alt_rank_with_budget(p, ALT_SEARCH_STEPS)
}

pub fn alt_rank_with_budget(p: &FinPoset, steps: u64) -> Result<usize, PosetError> {
    struct Search<'a> {
        p: &'a FinPoset,
        best: usize,
        steps: u64,
        budget: u64,
    }
    impl Search<'_> {
        fn grow(&mut self, seq: &mut Vec<NodeId>) -> Result<(), ()> {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(());
            }
            self.best = self.best.max(seq.len());
            if self.best == self.p.len() {
                return Ok(());
            }
            let last = *seq.last().expect("nonempty");
            let rising = (seq.len() >= 2).then(|| self.p.lt(seq[seq.len() - 2], last));
            for next in self.p.ids() {
                if seq.contains(&next) || !self.p.comparable(last, next) {
                    continue;
                }
                if rising == Some(self.p.lt(last, next)) {
                    continue;
                }
                if seq[..seq.len() - 1]
                    .iter()
                    .any(|&c| self.p.comparable(c, next))
                {
                    continue;
                }
                seq.push(next);
                let r = self.grow(seq);
                seq.pop();
                r?;
            }
            Ok(())
        }
    }
    if p.is_empty() {
        return Err(PosetError::Budget("empty posets have no rank".into()));
    }
    let mut s = Search {
        p,
        best: 1,
        steps: 0,
        budget: steps,
    };
    for start in p.ids() {
        if s.grow(&mut vec![start]).is_err() {
            return Err(PosetError::Budget(format!(
                "alternating chain search stopped after {steps} steps, rank is at least {}",
                s.best
            )));
        }
    }
    Ok(s.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{orbits, rooted_tree_catalogue, Bounds};

    fn poset(names: &[&str], rel: &[(&str, &str)]) -> FinPoset {
        FinPoset::from_names(names.iter().map(|n| Node::new(*n)).collect(), rel).unwrap()
    }

    fn diamond() -> FinPoset {
        poset(
            &["r", "a", "b", "t"],
            &[("r", "a"), ("r", "b"), ("a", "t"), ("b", "t")],
        )
    }

    #[test]
    fn joins() {
        let c = FinPoset::chain(2);
        assert_eq!(join(&c, 0, 1), Some(1));
        let lambda = poset(&["a", "b", "t"], &[("a", "t"), ("b", "t")]);
        assert_eq!(join(&lambda, 0, 1), Some(2));
        assert_eq!(join(&FinPoset::antichain(2), 0, 1), None);
    }

    #[test]
    fn completion_of_complete_posets() {
        for p in rooted_tree_catalogue(5) {
            assert_eq!(path_completion(&p).unwrap(), p);
        }
        let n = poset(&["a", "b", "c", "d"], &[("a", "b"), ("c", "b"), ("c", "d")]);
        assert_eq!(path_completion(&n).unwrap(), n);
    }

    #[test]
    fn completion_adds_missing_meets() {
        // two minima below two maxima
        let bowtie = poset(
            &["a", "b", "c", "d"],
            &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
        );
        let full = path_completion(&bowtie).unwrap();
        assert_eq!(full.len(), 5);
        assert!(full.node(4).irrational);
        assert!(full.lt(0, 4) && full.lt(1, 4) && full.lt(4, 2) && full.lt(4, 3));
    }

    #[test]
    fn connecting_sets_examples() {
        let c = FinPoset::chain(2);
        assert_eq!(
            connecting_sets(&c, 0, 1),
            vec![ConnectingSet { nodes: vec![0, 1] }]
        );
        let v = poset(&["r", "a", "b"], &[("r", "a"), ("r", "b")]);
        assert_eq!(
            connecting_sets(&v, 1, 2),
            vec![ConnectingSet {
                nodes: vec![1, 0, 2]
            }]
        );
        // the endpoints of the diamond are comparable, so only the pair itself connects them
        assert_eq!(
            connecting_sets(&diamond(), 0, 3),
            vec![ConnectingSet { nodes: vec![0, 3] }]
        );
    }

    #[test]
    fn paths() {
        let c = FinPoset::chain(3);
        assert_eq!(
            path(&c, 0, 2),
            PathResult::Unique(BTreeSet::from([0, 1, 2]))
        );
        let v = poset(&["r", "a", "b"], &[("r", "a"), ("r", "b")]);
        assert_eq!(
            path(&v, 1, 2),
            PathResult::Unique(BTreeSet::from([0, 1, 2]))
        );
        assert_eq!(path(&v, 2, 1), path(&v, 1, 2));
        assert_eq!(path(&v, 1, 1), PathResult::Unique(BTreeSet::from([1])));
        assert_eq!(path(&diamond(), 0, 3), PathResult::Ambiguous);
        assert_eq!(path(&FinPoset::antichain(2), 0, 1), PathResult::None);
    }

    #[test]
    fn cfpo_validation() {
        for p in rooted_tree_catalogue(5) {
            assert!(validate_cfpo(&p).unwrap().is_cfpo);
        }
        let r = validate_cfpo(&diamond()).unwrap();
        assert!(!r.is_cfpo);
        assert_eq!(r.witness, Some((0, 3)));
        assert!(validate_cfpo(&alt(5, false)).unwrap().is_cfpo);
    }

    #[test]
    fn alternating_chains() {
        let a2 = alt(2, false);
        assert!(a2.lt(1, 0));
        let a3 = alt(3, false);
        assert!(a3.lt(1, 0) && a3.lt(1, 2) && !a3.comparable(0, 2));
        assert_eq!(alt(1, true).len(), 1);
        assert!(alt(2, true).lt(0, 1));
    }

    #[test]
    fn ranks() {
        assert_eq!(alt_rank(&alt(6, false)).unwrap(), 6);
        assert_eq!(alt_rank(&alt(6, true)).unwrap(), 6);
        assert_eq!(alt_rank(&FinPoset::antichain(4)).unwrap(), 1);
        assert_eq!(alt_rank(&FinPoset::chain(5)).unwrap(), 2);
        assert!(matches!(
            alt_rank_with_budget(&alt(8, false), 3),
            Err(PosetError::Budget(_))
        ));
    }

    #[test]
    fn pair_orbits_separate_path_lengths() {
        let p = alt(7, false);
        let report = orbits(&p, 2, &Bounds::default()).unwrap();
        let ids: BTreeSet<_> = (1..4)
            .map(|k| report.orbit_of(&[0, 2 * k]).unwrap())
            .collect();
        assert_eq!(ids.len(), 3);
    }
}
