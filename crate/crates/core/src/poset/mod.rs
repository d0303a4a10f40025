//! Finite partial orders with colour and irrationality labels.
//!
//! A [`FinPoset`] stores its strict order transitively closed, so `lt` is a
//! table lookup. Nodes are addressed by their index, which is also the
//! canonical order used for every deterministic output in this crate.

mod auto;
mod catalogue;
mod format;
mod tree;

pub use auto::{automorphisms, is_isomorphic, orbits, Bounds, OrbitReport, Permutation};
pub use catalogue::{rooted_tree_catalogue, rooted_trees};
pub use format::{parse_poset, render_poset, to_dot};
pub(crate) use tree::require_tree;
pub use tree::{
    complete_tuple, cones_above, join, meet, ramification_order, validate_tree, TreeReport,
    TreeViolation,
};

use std::collections::HashMap;
use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("order relation has a cycle through `{0}`")]
    Cycle(String),
    #[error("input is not a tree: {0}")]
    NotATree(String),
    #[error("meet of `{0}` and `{1}` is absent")]
    MissingMeet(String, String),
    #[error("search bound exceeded: {0}")]
    Budget(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub name: String,
    pub colour: Option<String>,
    pub irrational: bool,
}

impl Node {
    pub fn new(name: impl Into<String>) -> Self {
        Node {
            name: name.into(),
            colour: None,
            irrational: false,
        }
    }

    pub fn coloured(mut self, colour: impl Into<String>) -> Self {
        self.colour = Some(colour.into());
        self
    }

    pub fn irrational(mut self) -> Self {
        self.irrational = true;
        self
    }

    /// The part of a node that automorphisms must preserve.
    pub fn label(&self) -> (Option<&str>, bool) {
        (self.colour.as_deref(), self.irrational)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPoset {
    nodes: Vec<Node>,
    index: HashMap<String, NodeId>,
    less: Vec<Vec<bool>>,
}

impl FinPoset {
    /// Builds a poset from nodes and a list of strict relations `a < b`
    /// (covers or otherwise). The transitive closure is computed here.
    pub fn new(nodes: Vec<Node>, relations: &[(NodeId, NodeId)]) -> Result<Self, PosetError> {
        let n = nodes.len();
        let mut index = HashMap::with_capacity(n);
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.name.clone(), i).is_some() {
                return Err(PosetError::DuplicateNode(node.name.clone()));
            }
        }
        let mut less = vec![vec![false; n]; n];
        for &(a, b) in relations {
            assert!(a < n && b < n, "relation endpoint out of range");
            less[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| less[i][i]) {
            return Err(PosetError::Cycle(nodes[i].name.clone()));
        }
        Ok(FinPoset { nodes, index, less })
    }

    /// Same as [`FinPoset::new`] but relations are given by node name.
    pub fn from_names(nodes: Vec<Node>, relations: &[(&str, &str)]) -> Result<Self, PosetError> {
        let pos: HashMap<&str, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.as_str(), i))
            .collect();
        let mut rel = Vec::with_capacity(relations.len());
        for (a, b) in relations {
            let ia = *pos
                .get(a)
                .ok_or_else(|| PosetError::UnknownNode(a.to_string()))?;
            let ib = *pos
                .get(b)
                .ok_or_else(|| PosetError::UnknownNode(b.to_string()))?;
            rel.push((ia, ib));
        }
        FinPoset::new(nodes, &rel)
    }

    /// Unlabelled chain `x0 < x1 < ... < x{n-1}`.
    pub fn chain(n: usize) -> Self {
        let nodes = (0..n).map(|i| Node::new(format!("x{i}"))).collect();
        let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FinPoset::new(nodes, &rel).expect("chain is acyclic")
    }

    /// Unlabelled antichain on `n` points.
    pub fn antichain(n: usize) -> Self {
        let nodes = (0..n).map(|i| Node::new(format!("x{i}"))).collect();
        FinPoset::new(nodes, &[]).expect("antichain is acyclic")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: NodeId) -> &Node {
        &self.nodes[i]
    }

    pub fn name(&self, i: NodeId) -> &str {
        &self.nodes[i].name
    }

    pub fn id(&self, name: &str) -> Result<NodeId, PosetError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| PosetError::UnknownNode(name.to_string()))
    }

    pub fn ids(&self) -> std::ops::Range<NodeId> {
        0..self.nodes.len()
    }

    #[inline]
    pub fn lt(&self, a: NodeId, b: NodeId) -> bool {
        self.less[a][b]
    }

    #[inline]
    pub fn le(&self, a: NodeId, b: NodeId) -> bool {
        a == b || self.less[a][b]
    }

    #[inline]
    pub fn comparable(&self, a: NodeId, b: NodeId) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn up_set(&self, t: NodeId) -> Vec<NodeId> {
        self.ids().filter(|&s| self.less[t][s]).collect()
    }

    pub fn down_set(&self, t: NodeId) -> Vec<NodeId> {
        self.ids().filter(|&s| self.less[s][t]).collect()
    }

    /// Covering pairs `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for a in self.ids() {
            for b in self.ids() {
                if self.less[a][b] && !self.ids().any(|c| self.less[a][c] && self.less[c][b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn upper_covers(&self, t: NodeId) -> Vec<NodeId> {
        self.ids()
            .filter(|&b| self.less[t][b] && !self.ids().any(|c| self.less[t][c] && self.less[c][b]))
            .collect()
    }

    pub fn minimal(&self) -> Vec<NodeId> {
        self.ids()
            .filter(|&b| !self.ids().any(|a| self.less[a][b]))
            .collect()
    }

    pub fn maximal(&self) -> Vec<NodeId> {
        self.ids()
            .filter(|&a| !self.ids().any(|b| self.less[a][b]))
            .collect()
    }

    /// Strict relations as index pairs, in canonical order.
    pub fn relations(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for a in self.ids() {
            for b in self.ids() {
                if self.less[a][b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Induced sub-order on `keep` (kept in the given order).
    pub fn restrict(&self, keep: &[NodeId]) -> FinPoset {
        let nodes = keep.iter().map(|&i| self.nodes[i].clone()).collect();
        let mut rel = Vec::new();
        for (ni, &a) in keep.iter().enumerate() {
            for (nj, &b) in keep.iter().enumerate() {
                if self.less[a][b] {
                    rel.push((ni, nj));
                }
            }
        }
        FinPoset::new(nodes, &rel).expect("sub-order of a poset is a poset")
    }

    /// Copy with node colours replaced by `f(i)`.
    pub fn recolour(&self, mut f: impl FnMut(NodeId) -> Option<String>) -> FinPoset {
        let mut out = self.clone();
        for i in self.ids() {
            out.nodes[i].colour = f(i);
        }
        out
    }

    /// Copy with the reverse order.
    pub fn reversed(&self) -> FinPoset {
        let rel: Vec<_> = self.relations().into_iter().map(|(a, b)| (b, a)).collect();
        FinPoset::new(self.nodes.clone(), &rel).expect("reverse of a poset is a poset")
    }

    /// Maximal chains, each listed bottom-up, in lexicographic index order.
    pub fn maximal_chains(&self) -> Vec<Vec<NodeId>> {
        let mut out = Vec::new();
        for m in self.minimal() {
            let mut path = vec![m];
            self.extend_chains(&mut path, &mut out);
        }
        out.sort();
        out
    }

    fn extend_chains(&self, path: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        let top = *path.last().expect("non-empty path");
        let covers = self.upper_covers(top);
        if covers.is_empty() {
            out.push(path.clone());
            return;
        }
        for c in covers {
            path.push(c);
            self.extend_chains(path, out);
            path.pop();
        }
    }
}
