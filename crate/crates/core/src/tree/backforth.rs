//! Ramification annotations of finite tree samples and the back-and-forth
//! construction of automorphisms moving one comparable pair to another.

use super::{Predicate, RamCount};
use crate::poset::{require_tree, FinPoset, NodeId, PosetError};
use crate::terms::Card;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

type Label = (Option<String>, bool);

/// Predicates realised by the nodes of a finite tree, computed from its
/// own maximal chains. Chain types are the distinct label words of the
/// maximal chains (bottom to top), in sorted order; the orbit of a node in
/// a finite chain is its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotations {
    pub words: Vec<Vec<Label>>,
    pub predicates: Vec<BTreeSet<Predicate>>,
}

impl Annotations {
    /// The predicates of `x` as text, for recolouring.
    pub fn render(&self, x: NodeId) -> String {
        self.predicates[x]
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("")
    }

    /// `p` with every node's colour extended by its predicates.
    pub fn apply(&self, p: &FinPoset) -> FinPoset {
        p.recolour(|x| {
            let base = p.node(x).colour.clone().unwrap_or_default();
            Some(format!("{base}|{}", self.render(x)))
        })
    }
}

pub fn annotate(p: &FinPoset, cap: u64) -> Result<Annotations, PosetError> {
    require_tree(p)?;
    let chains = p.maximal_chains();
    let word = |c: &[NodeId]| -> Vec<Label> {
        c.iter()
            .map(|&x| {
                let (colour, irr) = p.node(x).label();
                (colour.map(str::to_string), irr)
            })
            .collect()
    };
    let words: Vec<Vec<Label>> = chains
        .iter()
        .map(|c| word(c))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut counts: Vec<BTreeMap<(usize, usize), u64>> = vec![BTreeMap::new(); p.len()];
    for c in &chains {
        let m = words.binary_search(&word(c)).expect("word listed");
        for (n, &x) in c.iter().enumerate() {
            *counts[x].entry((m, n)).or_insert(0) += 1;
        }
    }
    let predicates = counts
        .into_iter()
        .map(|per| {
            per.into_iter()
                .map(|((chain, orbit), k)| Predicate {
                    count: RamCount::capped(Card::Finite(k), cap),
                    chain,
                    orbit,
                })
                .collect()
        })
        .collect();
    Ok(Annotations { words, predicates })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("`{0}` is not below `{1}`")]
    NotBelow(String, String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub equivalent: bool,
    /// The automorphism built, as the image of every node.
    pub map: Option<Vec<NodeId>>,
    /// Steps of the construction, or the reason it stopped.
    pub trace: Vec<String>,
}

impl Equivalence {
    fn refuse(trace: Vec<String>, why: String) -> Self {
        let mut trace = trace;
        trace.push(why);
        Equivalence {
            equivalent: false,
            map: None,
            trace,
        }
    }
}

/// Isomorphism codes of the cones `{y : y >= x}` of a finite tree, with
/// nodes labelled by colour, irrationality and predicates.
struct Codes {
    code: Vec<usize>,
    children: Vec<Vec<NodeId>>,
}

impl Codes {
    fn new(p: &FinPoset, ann: &Annotations) -> Self {
        let n = p.len();
        let children: Vec<Vec<NodeId>> = p.ids().map(|x| p.upper_covers(x)).collect();
        let mut order: Vec<NodeId> = p.ids().collect();
        // tops first, so children are coded before their parent
        order.sort_by_key(|&x| std::cmp::Reverse(p.down_set(x).len()));
        let mut table: HashMap<(Label, BTreeSet<Predicate>, Vec<usize>), usize> = HashMap::new();
        let mut code = vec![0; n];
        for x in order {
            let mut kids: Vec<usize> = children[x].iter().map(|&c| code[c]).collect();
            kids.sort_unstable();
            let (colour, irr) = p.node(x).label();
            let key = (
                (colour.map(str::to_string), irr),
                ann.predicates[x].clone(),
                kids,
            );
            let next = table.len();
            code[x] = *table.entry(key).or_insert(next);
        }
        Codes { code, children }
    }

    /// Children of `x` other than `skip`, ordered by code then node id.
    fn sorted_children(&self, x: NodeId, skip: Option<NodeId>) -> Vec<NodeId> {
        let mut kids: Vec<NodeId> = self.children[x]
            .iter()
            .copied()
            .filter(|&c| Some(c) != skip)
            .collect();
        kids.sort_by_key(|&c| (self.code[c], c));
        kids
    }

    fn same_children(
        &self,
        a: NodeId,
        a_skip: Option<NodeId>,
        b: NodeId,
        b_skip: Option<NodeId>,
    ) -> bool {
        let codes = |x, skip| {
            self.sorted_children(x, skip)
                .iter()
                .map(|&c| self.code[c])
                .collect::<Vec<_>>()
        };
        codes(a, a_skip) == codes(b, b_skip)
    }

    /// Maps the cone of `a` onto the cone of `b`; the codes must agree.
    fn map_cone(&self, a: NodeId, b: NodeId, map: &mut [Option<NodeId>]) {
        map[a] = Some(b);
        let ka = self.sorted_children(a, None);
        let kb = self.sorted_children(b, None);
        for (&ca, &cb) in ka.iter().zip(&kb) {
            self.map_cone(ca, cb, map);
        }
    }
}

fn path_to(p: &FinPoset, y: NodeId) -> Vec<NodeId> {
    let mut path = p.down_set(y);
    path.push(y);
    path.sort_by_key(|&v| p.down_set(v).len());
    path
}

fn is_automorphism(p: &FinPoset, map: &[NodeId]) -> bool {
    let mut hit = vec![false; map.len()];
    for &m in map {
        if std::mem::replace(&mut hit[m], true) {
            return false;
        }
    }
    p.ids().all(|a| {
        p.node(a).label() == p.node(map[a]).label()
            && p.ids().all(|b| p.lt(a, b) == p.lt(map[a], map[b]))
    })
}

/// Tries to build an automorphism of the tree `p` taking `pair0` to
/// `pair1`, in three stages. Base: map the chain from the root through
/// both points of `pair0` onto the chain through `pair1`. Forth: for each
/// mapped point, send each cone above it that holds no mapped point to a
/// cone above its image with the same code. Back: check that every cone
/// above an image point is reached.
pub fn two_orbit_equiv(
    p: &FinPoset,
    ann: &Annotations,
    pair0: (NodeId, NodeId),
    pair1: (NodeId, NodeId),
) -> Result<Equivalence, PairError> {
    require_tree(p)?;
    for &(x, y) in &[pair0, pair1] {
        if !p.lt(x, y) {
            return Err(PairError::NotBelow(p.name(x).into(), p.name(y).into()));
        }
    }
    let name = |v: NodeId| p.name(v).to_string();
    let mut trace = Vec::new();
    for (a, b) in [(pair0.0, pair1.0), (pair0.1, pair1.1)] {
        if p.node(a).label() != p.node(b).label() {
            return Ok(Equivalence::refuse(
                trace,
                format!("{} and {} carry different labels", name(a), name(b)),
            ));
        }
        if ann.predicates[a] != ann.predicates[b] {
            let diff = ann.predicates[a]
                .symmetric_difference(&ann.predicates[b])
                .next()
                .expect("sets differ");
            return Ok(Equivalence::refuse(
                trace,
                format!("{} and {} differ on predicate {diff}", name(a), name(b)),
            ));
        }
    }
    let codes = Codes::new(p, ann);
    let path0 = path_to(p, pair0.1);
    let path1 = path_to(p, pair1.1);
    let depth = |v: NodeId| p.down_set(v).len();
    if path0.len() != path1.len() || depth(pair0.0) != depth(pair1.0) {
        return Ok(Equivalence::refuse(
            trace,
            "the pairs sit at different heights".into(),
        ));
    }
    let mut map: Vec<Option<NodeId>> = vec![None; p.len()];
    for (k, (&a, &b)) in path0.iter().zip(&path1).enumerate() {
        let skip_a = path0.get(k + 1).copied();
        let skip_b = path1.get(k + 1).copied();
        if p.node(a).label() != p.node(b).label()
            || ann.predicates[a] != ann.predicates[b]
            || !codes.same_children(a, skip_a, b, skip_b)
        {
            return Ok(Equivalence::refuse(
                trace,
                format!(
                    "base: {} and {} have different cones above them",
                    name(a),
                    name(b)
                ),
            ));
        }
        map[a] = Some(b);
    }
    trace.push(format!(
        "base: {} -> {}",
        path0.iter().map(|&v| name(v)).collect::<Vec<_>>().join("<"),
        path1.iter().map(|&v| name(v)).collect::<Vec<_>>().join("<")
    ));
    for (k, (&a, &b)) in path0.iter().zip(&path1).enumerate() {
        let ka = codes.sorted_children(a, path0.get(k + 1).copied());
        let kb = codes.sorted_children(b, path1.get(k + 1).copied());
        for (&ca, &cb) in ka.iter().zip(&kb) {
            codes.map_cone(ca, cb, &mut map);
            trace.push(format!("forth: cone {} -> cone {}", name(ca), name(cb)));
        }
    }
    let mut image = vec![false; p.len()];
    for m in map.iter().flatten() {
        image[*m] = true;
    }
    if let Some(v) = p.ids().find(|&v| !image[v]) {
        return Ok(Equivalence::refuse(
            trace,
            format!("back: {} is not reached", name(v)),
        ));
    }
    trace.push("back: every cone above an image point is reached".into());
    let map: Vec<NodeId> = match map.into_iter().collect::<Option<Vec<_>>>() {
        Some(m) => m,
        None => {
            return Ok(Equivalence::refuse(
                trace,
                "forth: some node was not mapped".into(),
            ))
        }
    };
    if !is_automorphism(p, &map) {
        return Ok(Equivalence::refuse(
            trace,
            "the assembled map is not an automorphism".into(),
        ));
    }
    Ok(Equivalence {
        equivalent: true,
        map: Some(map),
        trace,
    })
}
