//! Exhaustive backtracking search for automorphisms and isomorphisms.
//!
//! This is the brute-force oracle that every symbolic orbit claim is checked
//! against, so it deliberately uses nothing but the order relation and labels.

use super::{FinPoset, NodeId, PosetError};

pub type Permutation = Vec<NodeId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest poset the automorphism search accepts.
    pub max_nodes: usize,
    /// Largest number of n-tuples the orbit enumeration accepts.
    pub max_tuples: usize,
    /// Largest automorphism group the search will list.
    pub max_automorphisms: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_nodes: 12,
            max_tuples: 1_000_000,
            max_automorphisms: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub arity: usize,
    /// Orbit classes; tuples inside a class and the classes themselves are
    /// sorted lexicographically.
    pub orbits: Vec<Vec<Vec<NodeId>>>,
    pub count: usize,
}

impl OrbitReport {
    /// Index of the orbit containing `tuple`.
    pub fn orbit_of(&self, tuple: &[NodeId]) -> Option<usize> {
        self.orbits
            .iter()
            .position(|class| class.binary_search_by(|t| t.as_slice().cmp(tuple)).is_ok())
    }
}

fn signature(p: &FinPoset, i: NodeId) -> (Option<&str>, bool, usize, usize) {
    let (colour, irr) = p.node(i).label();
    let below = p.ids().filter(|&j| p.lt(j, i)).count();
    let above = p.ids().filter(|&j| p.lt(i, j)).count();
    (colour, irr, below, above)
}

struct Search<'a, F: FnMut(&[NodeId]) -> bool> {
    a: &'a FinPoset,
    b: &'a FinPoset,
    candidates: Vec<Vec<NodeId>>,
    image: Vec<NodeId>,
    used: Vec<bool>,
    visit: F,
}

impl<F: FnMut(&[NodeId]) -> bool> Search<'_, F> {
    /// Returns false once `visit` asks to stop.
    fn run(&mut self, i: usize) -> bool {
        if i == self.a.len() {
            return (self.visit)(&self.image);
        }
        for ci in 0..self.candidates[i].len() {
            let j = self.candidates[i][ci];
            if self.used[j] {
                continue;
            }
            let consistent = (0..i).all(|k| {
                let fk = self.image[k];
                self.a.lt(k, i) == self.b.lt(fk, j) && self.a.lt(i, k) == self.b.lt(j, fk)
            });
            if !consistent {
                continue;
            }
            self.image.push(j);
            self.used[j] = true;
            let go_on = self.run(i + 1);
            self.image.pop();
            self.used[j] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn search<F: FnMut(&[NodeId]) -> bool>(a: &FinPoset, b: &FinPoset, visit: F) {
    if a.len() != b.len() {
        return;
    }
    let sig_b: Vec<_> = b.ids().map(|j| signature(b, j)).collect();
    let candidates = a
        .ids()
        .map(|i| {
            let s = signature(a, i);
            b.ids().filter(|&j| sig_b[j] == s).collect()
        })
        .collect();
    let mut s = Search {
        a,
        b,
        candidates,
        image: Vec::with_capacity(a.len()),
        used: vec![false; b.len()],
        visit,
    };
    s.run(0);
}

/// Every label-, irrationality- and order-preserving permutation of `p`,
/// in lexicographic order (the identity first).
pub fn automorphisms(p: &FinPoset, bounds: &Bounds) -> Result<Vec<Permutation>, PosetError> {
    if p.len() > bounds.max_nodes {
        return Err(PosetError::Budget(format!(
            "{} nodes exceeds the automorphism search bound of {}",
            p.len(),
            bounds.max_nodes
        )));
    }
    let mut out = Vec::new();
    let mut overflow = false;
    search(p, p, |perm| {
        if out.len() == bounds.max_automorphisms {
            overflow = true;
            return false;
        }
        out.push(perm.to_vec());
        true
    });
    if overflow {
        return Err(PosetError::Budget(format!(
            "more than {} automorphisms",
            bounds.max_automorphisms
        )));
    }
    Ok(out)
}

/// An isomorphism `a -> b` if one exists (`witness[i]` is the image of `i`).
pub fn is_isomorphic(
    a: &FinPoset,
    b: &FinPoset,
    bounds: &Bounds,
) -> Result<Option<Permutation>, PosetError> {
    let n = a.len().max(b.len());
    if n > bounds.max_nodes {
        return Err(PosetError::Budget(format!(
            "{n} nodes exceeds the isomorphism search bound of {}",
            bounds.max_nodes
        )));
    }
    let mut found = None;
    search(a, b, |perm| {
        found = Some(perm.to_vec());
        false
    });
    Ok(found)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partition of all `n`-tuples of `p` into automorphism orbits.
pub fn orbits(p: &FinPoset, arity: usize, bounds: &Bounds) -> Result<OrbitReport, PosetError> {
    assert!(arity >= 1, "orbit arity must be positive");
    let len = p.len();
    let total = (len as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
    if total > bounds.max_tuples as u128 {
        return Err(PosetError::Budget(format!(
            "{total} tuples exceeds the orbit budget of {}",
            bounds.max_tuples
        )));
    }
    let total = total as usize;
    let auts = automorphisms(p, bounds)?;
    let decode = |mut code: usize| -> Vec<NodeId> {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = code % len;
            code /= len;
        }
        t
    };
    let encode = |t: &[NodeId]| t.iter().fold(0usize, |acc, &x| acc * len + x);
    let mut parent: Vec<usize> = (0..total).collect();
    for code in 0..total {
        let t = decode(code);
        for g in &auts {
            let image: Vec<NodeId> = t.iter().map(|&x| g[x]).collect();
            let (ra, rb) = (find(&mut parent, code), find(&mut parent, encode(&image)));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<Vec<NodeId>>> = Default::default();
    for code in 0..total {
        let root = find(&mut parent, code);
        classes.entry(root).or_default().push(decode(code));
    }
    // tuples are generated in lexicographic order, so each class is sorted
    // and keying by the smallest member sorts the classes
    let orbits: Vec<_> = classes.into_values().collect();
    Ok(OrbitReport {
        arity,
        count: orbits.len(),
        orbits,
    })
}
