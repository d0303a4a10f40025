use super::{FinPoset, Node};
use std::collections::BTreeSet;

/// Canonical nested-parenthesis encodings of every unlabelled rooted tree
/// with exactly `n` nodes.
fn encodings(n: usize, memo: &mut Vec<Option<Vec<String>>>) -> Vec<String> {
    if let Some(Some(done)) = memo.get(n) {
        return done.clone();
    }
    let mut out = BTreeSet::new();
    if n == 1 {
        out.insert("()".to_string());
    } else if n > 1 {
        for children in forests(n - 1, n - 1, memo) {
            out.insert(format!("({})", children.concat()));
        }
    }
    let out: Vec<String> = out.into_iter().collect();
    if memo.len() <= n {
        memo.resize(n + 1, None);
    }
    memo[n] = Some(out.clone());
    out
}

/// Multisets of subtrees with `total` nodes and each subtree of size at most
/// `max`, as sorted lists of encodings.
fn forests(total: usize, max: usize, memo: &mut Vec<Option<Vec<String>>>) -> Vec<Vec<String>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = BTreeSet::new();
    for first in 1..=max.min(total) {
        for tree in encodings(first, memo) {
            for mut rest in forests(total - first, first, memo) {
                rest.push(tree.clone());
                rest.sort();
                out.insert(rest);
            }
        }
    }
    out.into_iter().collect()
}

fn decode(code: &str) -> FinPoset {
    let mut nodes = Vec::new();
    let mut rel = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for ch in code.chars() {
        match ch {
            '(' => {
                let id = nodes.len();
                nodes.push(Node::new(format!("v{id}")));
                if let Some(&parent) = stack.last() {
                    rel.push((parent, id));
                }
                stack.push(id);
            }
            ')' => {
                stack.pop();
            }
            _ => unreachable!("encodings only contain parentheses"),
        }
    }
    FinPoset::new(nodes, &rel).expect("rooted tree is acyclic")
}

/// Every finite tree (rooted, unlabelled) with exactly `n` nodes, up to
/// isomorphism. Node `v0` is the root.
pub fn rooted_trees(n: usize) -> Vec<FinPoset> {
    let mut memo = Vec::new();
    encodings(n, &mut memo).iter().map(|c| decode(c)).collect()
}

/// The exhaustive catalogue of trees with 1 to `max_nodes` nodes.
pub fn rooted_tree_catalogue(max_nodes: usize) -> Vec<FinPoset> {
    (1..=max_nodes).flat_map(rooted_trees).collect()
}
