use super::{FinPoset, NodeId, PosetError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeViolation {
    /// `x, y <= z` but `x` and `y` are incomparable.
    DownwardBranching { x: NodeId, y: NodeId, z: NodeId },
    /// `x` and `y` have no common lower bound.
    NoCommonLowerBound { x: NodeId, y: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeReport {
    pub violations: Vec<TreeViolation>,
}

impl TreeReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks downward linearity and the existence of common lower bounds.
pub fn validate_tree(p: &FinPoset) -> TreeReport {
    let mut violations = Vec::new();
    for x in p.ids() {
        for y in (x + 1)..p.len() {
            if p.comparable(x, y) {
                continue;
            }
            if let Some(z) = p.ids().find(|&z| p.le(x, z) && p.le(y, z)) {
                violations.push(TreeViolation::DownwardBranching { x, y, z });
            }
            if !p.ids().any(|z| p.le(z, x) && p.le(z, y)) {
                violations.push(TreeViolation::NoCommonLowerBound { x, y });
            }
        }
    }
    TreeReport { violations }
}

pub(crate) fn require_tree(p: &FinPoset) -> Result<(), PosetError> {
    let report = validate_tree(p);
    match report.violations.first() {
        None => Ok(()),
        Some(TreeViolation::DownwardBranching { x, y, z }) => Err(PosetError::NotATree(format!(
            "`{}` and `{}` lie below `{}` but are incomparable",
            p.name(*x),
            p.name(*y),
            p.name(*z)
        ))),
        Some(TreeViolation::NoCommonLowerBound { x, y }) => Err(PosetError::NotATree(format!(
            "`{}` and `{}` have no common lower bound",
            p.name(*x),
            p.name(*y)
        ))),
    }
}

/// Greatest common lower bound, if the set of common lower bounds is
/// nonempty and has a maximum.
pub fn meet(p: &FinPoset, x: NodeId, y: NodeId) -> Option<NodeId> {
    let lower: Vec<NodeId> = p.ids().filter(|&t| p.le(t, x) && p.le(t, y)).collect();
    lower
        .iter()
        .copied()
        .find(|&m| lower.iter().all(|&t| p.le(t, m)))
}

/// Least common upper bound, dual to [`meet`].
pub fn join(p: &FinPoset, x: NodeId, y: NodeId) -> Option<NodeId> {
    let upper: Vec<NodeId> = p.ids().filter(|&t| p.le(x, t) && p.le(y, t)).collect();
    upper
        .iter()
        .copied()
        .find(|&m| upper.iter().all(|&t| p.le(m, t)))
}

/// Partition of the strict up-set of `t` into cones.
pub fn cones_above(p: &FinPoset, t: NodeId) -> Result<Vec<Vec<NodeId>>, PosetError> {
    require_tree(p)?;
    Ok(cones_unchecked(p, t))
}

pub(crate) fn cones_unchecked(p: &FinPoset, t: NodeId) -> Vec<Vec<NodeId>> {
    let up = p.up_set(t);
    let mut cones: Vec<Vec<NodeId>> = Vec::new();
    for s in up {
        let found = cones.iter_mut().find(|cone| {
            // same cone iff a common lower bound sits strictly above t
            p.ids()
                .any(|u| p.lt(t, u) && p.le(u, s) && p.le(u, cone[0]))
        });
        match found {
            Some(cone) => cone.push(s),
            None => cones.push(vec![s]),
        }
    }
    cones
}

pub fn ramification_order(p: &FinPoset, t: NodeId) -> Result<usize, PosetError> {
    Ok(cones_above(p, t)?.len())
}

/// Smallest meet-closed extension of `tuple`: the tuple itself followed by
/// the added meets in ascending index order.
pub fn complete_tuple(p: &FinPoset, tuple: &[NodeId]) -> Result<Vec<NodeId>, PosetError> {
    require_tree(p)?;
    let mut members = vec![false; p.len()];
    for &x in tuple {
        members[x] = true;
    }
    loop {
        let current: Vec<NodeId> = p.ids().filter(|&i| members[i]).collect();
        let mut grew = false;
        for (k, &a) in current.iter().enumerate() {
            for &b in &current[k + 1..] {
                let m = meet(p, a, b).ok_or_else(|| {
                    PosetError::MissingMeet(p.name(a).to_string(), p.name(b).to_string())
                })?;
                if !members[m] {
                    members[m] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    for &x in tuple {
        members[x] = false;
    }
    let mut out = tuple.to_vec();
    out.extend(p.ids().filter(|&i| members[i]));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Node;

    fn v_shape() -> FinPoset {
        FinPoset::from_names(
            vec![Node::new("r"), Node::new("a"), Node::new("b")],
            &[("r", "a"), ("r", "b")],
        )
        .unwrap()
    }

    #[test]
    fn chain_and_v_are_trees() {
        assert!(validate_tree(&FinPoset::chain(3)).is_ok());
        assert!(validate_tree(&v_shape()).is_ok());
    }

    #[test]
    fn antichain_violates_lower_bound_axiom() {
        let report = validate_tree(&FinPoset::antichain(2));
        assert_eq!(
            report.violations,
            vec![TreeViolation::NoCommonLowerBound { x: 0, y: 1 }]
        );
    }

    #[test]
    fn lambda_violates_downward_linearity() {
        let p = v_shape().reversed();
        let report = validate_tree(&p);
        assert!(report
            .violations
            .contains(&TreeViolation::DownwardBranching { x: 1, y: 2, z: 0 }));
    }

    #[test]
    fn meets() {
        let c = FinPoset::chain(2);
        assert_eq!(meet(&c, 0, 1), Some(0));
        let v = v_shape();
        assert_eq!(meet(&v, 1, 2), Some(0));
        assert_eq!(meet(&FinPoset::antichain(2), 0, 1), None);
    }

    #[test]
    fn cones() {
        let v = v_shape();
        assert_eq!(cones_above(&v, 0).unwrap(), vec![vec![1], vec![2]]);
        assert_eq!(ramification_order(&v, 0).unwrap(), 2);
        assert_eq!(ramification_order(&v, 1).unwrap(), 0);
        let c = FinPoset::chain(3);
        assert_eq!(cones_above(&c, 0).unwrap(), vec![vec![1, 2]]);
        assert!(matches!(
            cones_above(&FinPoset::antichain(2), 0),
            Err(PosetError::NotATree(_))
        ));
    }

    #[test]
    fn cones_of_four_node_tree_match_pairwise_condition() {
        // r<a<b, r<c
        let p = FinPoset::from_names(
            vec![
                Node::new("r"),
                Node::new("a"),
                Node::new("b"),
                Node::new("c"),
            ],
            &[("r", "a"), ("a", "b"), ("r", "c")],
        )
        .unwrap();
        let cones = cones_above(&p, 0).unwrap();
        assert_eq!(cones, vec![vec![1, 2], vec![3]]);
        // brute force: s, s' share a cone iff their meet is strictly above r
        for s in 1..4 {
            for s2 in 1..4 {
                let same = cones.iter().any(|c| c.contains(&s) && c.contains(&s2));
                let m = meet(&p, s, s2).unwrap();
                assert_eq!(same, p.lt(0, m));
            }
        }
    }

    #[test]
    fn binary_tree_internal_node_has_order_two() {
        // depth-3 complete binary tree
        let mut nodes = Vec::new();
        let mut rel = Vec::new();
        for i in 0..7 {
            nodes.push(Node::new(format!("n{i}")));
            if i > 0 {
                rel.push(((i - 1) / 2, i));
            }
        }
        let p = FinPoset::new(nodes, &rel).unwrap();
        for internal in 0..3 {
            assert_eq!(ramification_order(&p, internal).unwrap(), 2);
        }
        for leaf in 3..7 {
            assert_eq!(ramification_order(&p, leaf).unwrap(), 0);
        }
    }

    #[test]
    fn completions() {
        let v = v_shape();
        assert_eq!(complete_tuple(&v, &[1, 2]).unwrap(), vec![1, 2, 0]);
        let c = FinPoset::chain(2);
        assert_eq!(complete_tuple(&c, &[0, 1]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn three_leaf_completion_matches_fixpoint() {
        // r < m < l1, m < l2, r < l3
        let p = FinPoset::from_names(
            vec![
                Node::new("r"),
                Node::new("m"),
                Node::new("l1"),
                Node::new("l2"),
                Node::new("l3"),
            ],
            &[("r", "m"), ("m", "l1"), ("m", "l2"), ("r", "l3")],
        )
        .unwrap();
        assert_eq!(complete_tuple(&p, &[2, 3, 4]).unwrap(), vec![2, 3, 4, 0, 1]);
    }
}
