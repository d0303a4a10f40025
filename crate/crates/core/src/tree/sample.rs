//! Finite seeded samples of specified trees.

use super::{Multiplicity, SpecError, TreeSpec};
use crate::poset::{validate_tree, FinPoset, Node, NodeId};
use crate::terms::{materialize, min_size};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleBudget {
    /// Levels of attached copies below which recursion stops; the root copy
    /// is level 0.
    pub depth: usize,
    /// Copies realised for an `omega` multiplicity (at least 2).
    pub width: usize,
    /// Points sampled per spine (raised to the spine's minimum size).
    pub size: usize,
    /// Largest sample accepted.
    pub max_nodes: usize,
}

impl Default for SampleBudget {
    fn default() -> Self {
        SampleBudget {
            depth: 2,
            width: 2,
            size: 3,
            max_nodes: 2000,
        }
    }
}

/// Where a sampled node comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Origin {
    pub def: String,
    /// Sequence number of the copy of `def`, in creation order.
    pub copy: usize,
    /// Orbit in the completed spine of `def`.
    pub orbit: usize,
    pub level: usize,
}

#[derive(Debug, Clone)]
pub struct TreeSample {
    pub poset: FinPoset,
    pub origin: Vec<Origin>,
}

impl TreeSample {
    /// Nodes inserted for cuts.
    pub fn irrational_nodes(&self) -> Vec<NodeId> {
        self.poset
            .ids()
            .filter(|&i| self.poset.node(i).irrational)
            .collect()
    }

    /// The sample with the cut points removed.
    pub fn without_irrationals(&self) -> FinPoset {
        let keep: Vec<NodeId> = self
            .poset
            .ids()
            .filter(|&i| !self.poset.node(i).irrational)
            .collect();
        self.poset.restrict(&keep)
    }
}

/// Samples the tree: every spine copy gets `budget.size` points and every
/// sampled point of an attachment orbit gets its copies, down to
/// `budget.depth` levels.
pub fn materialize_tree(
    spec: &TreeSpec,
    budget: &SampleBudget,
    seed: u64,
) -> Result<TreeSample, SpecError> {
    if budget.size == 0 || budget.width == 0 {
        return Err(SpecError::Budget(
            "size and width budgets must be positive".into(),
        ));
    }
    let c = spec.compile();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes: Vec<Node> = Vec::new();
    let mut origin: Vec<Origin> = Vec::new();
    let mut relations: Vec<(NodeId, NodeId)> = Vec::new();
    let mut realised = BTreeSet::new();
    let mut queue: VecDeque<(usize, Option<NodeId>, usize)> = VecDeque::from([(c.root, None, 0)]);
    let mut copy = 0;
    while let Some((d, below, level)) = queue.pop_front() {
        let def = &c.defs[d];
        realised.insert(d);
        let points = budget.size.max(min_size(&def.completed));
        let sample = materialize(&def.completed, points, rng.next_u64())
            .map_err(|e| SpecError::Sample(e.to_string()))?;
        if nodes.len() + sample.len() > budget.max_nodes {
            return Err(SpecError::Budget(format!(
                "sample would exceed {} nodes",
                budget.max_nodes
            )));
        }
        let mut prev = below;
        let mut ids = Vec::new();
        for p in &sample.points {
            let id = nodes.len();
            let node = Node::new(format!("n{id}"));
            nodes.push(if p.colour.is_plain() {
                node
            } else if p.colour.is_irrational() {
                node.irrational()
            } else {
                node.coloured(p.colour.as_str())
            });
            origin.push(Origin {
                def: def.name.clone(),
                copy,
                orbit: p.orbit,
                level,
            });
            if let Some(q) = prev {
                relations.push((q, id));
            }
            prev = Some(id);
            ids.push(id);
        }
        copy += 1;
        if level == budget.depth {
            continue;
        }
        for e in &def.edges {
            let copies = match e.mult {
                Multiplicity::Finite(n) => n as usize,
                Multiplicity::Omega => budget.width.max(2),
            };
            for (k, p) in sample.points.iter().enumerate() {
                if p.orbit == e.orbit {
                    for _ in 0..copies {
                        queue.push_back((e.child, Some(ids[k]), level + 1));
                    }
                }
            }
        }
    }
    let reachable = reachable_defs(&c);
    if let Some(&missing) = reachable.difference(&realised).next() {
        return Err(SpecError::Budget(format!(
            "`{}` is not realised within depth {}",
            c.defs[missing].name, budget.depth
        )));
    }
    let poset = FinPoset::new(nodes, &relations).expect("sampled trees are acyclic");
    debug_assert!(validate_tree(&poset).is_ok());
    Ok(TreeSample { poset, origin })
}

fn reachable_defs(c: &super::Compiled) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([c.root]);
    let mut stack = vec![c.root];
    while let Some(d) = stack.pop() {
        for e in &c.defs[d].edges {
            if seen.insert(e.child) {
                stack.push(e.child);
            }
        }
    }
    seen
}
