//! Structural 1-orbit enumeration and the segment algebra around orbit
//! points.
//!
//! Orbits are numbered depth-first: the factors of a concatenation in
//! order, and for a shuffle the orbits of each constituent in constituent
//! order. All copies of one constituent position form a single orbit.

use super::{Card, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitDescriptor {
    pub index: usize,
    /// Child positions from the root of the term down to the singleton that
    /// defines the orbit.
    pub path: Vec<usize>,
}

pub fn orbit_count(t: &Term) -> usize {
    match t {
        Term::Singleton(_) => 1,
        Term::Shuffle(parts) | Term::Concat(parts) => parts.iter().map(orbit_count).sum(),
    }
}

pub fn one_orbits(t: &Term) -> Vec<OrbitDescriptor> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect(t, &mut path, &mut out);
    out
}

fn collect(t: &Term, path: &mut Vec<usize>, out: &mut Vec<OrbitDescriptor>) {
    match t {
        Term::Singleton(_) => out.push(OrbitDescriptor {
            index: out.len(),
            path: path.clone(),
        }),
        Term::Shuffle(parts) | Term::Concat(parts) => {
            for (k, p) in parts.iter().enumerate() {
                path.push(k);
                collect(p, path, out);
                path.pop();
            }
        }
    }
}

/// Child position holding orbit `idx` and the orbit's index inside it.
fn locate(parts: &[Term], mut idx: usize) -> (usize, usize) {
    for (k, p) in parts.iter().enumerate() {
        let n = orbit_count(p);
        if idx < n {
            return (k, idx);
        }
        idx -= n;
    }
    panic!("orbit index out of range");
}

/// Number of points in orbit `idx`: one for points outside every shuffle.
pub fn points_in_orbit(t: &Term, idx: usize) -> Card {
    match t {
        Term::Singleton(_) => {
            assert_eq!(idx, 0, "orbit index out of range");
            Card::ONE
        }
        Term::Shuffle(_) => Card::Omega,
        Term::Concat(parts) => {
            let (k, local) = locate(parts, idx);
            points_in_orbit(&parts[k], local)
        }
    }
}

/// The closed initial segment ending at a point of orbit `idx`
/// (not normalized).
pub fn down_through(t: &Term, idx: usize) -> Term {
    match t {
        Term::Singleton(_) => {
            assert_eq!(idx, 0, "orbit index out of range");
            t.clone()
        }
        Term::Concat(parts) => {
            let (k, local) = locate(parts, idx);
            let mut out = parts[..k].to_vec();
            out.push(down_through(&parts[k], local));
            Term::concat(out)
        }
        Term::Shuffle(parts) => {
            let (k, local) = locate(parts, idx);
            Term::concat(vec![t.clone(), down_through(&parts[k], local)])
        }
    }
}

/// The open final segment strictly above a point of orbit `idx`
/// (not normalized); `None` when the point is the maximum.
pub fn up_from(t: &Term, idx: usize) -> Option<Term> {
    match t {
        Term::Singleton(_) => {
            assert_eq!(idx, 0, "orbit index out of range");
            None
        }
        Term::Concat(parts) => {
            let (k, local) = locate(parts, idx);
            let mut out: Vec<Term> = up_from(&parts[k], local).into_iter().collect();
            out.extend_from_slice(&parts[k + 1..]);
            Term::concat_opt(out)
        }
        Term::Shuffle(parts) => {
            let (k, local) = locate(parts, idx);
            let mut out: Vec<Term> = up_from(&parts[k], local).into_iter().collect();
            out.push(t.clone());
            Term::concat_opt(out)
        }
    }
}

/// For a point `x` of orbit `from`, the possible shapes of the half-open
/// interval `(x, y]` over points `y >= x` of orbit `to`, each with the
/// number of such `y`. `None` is the empty interval (`y = x`).
pub fn segments_between(t: &Term, from: usize, to: usize) -> Vec<(Option<Term>, Card)> {
    match t {
        Term::Singleton(_) => {
            assert!(from == 0 && to == 0, "orbit index out of range");
            vec![(None, Card::ONE)]
        }
        Term::Concat(parts) => {
            let (i, a) = locate(parts, from);
            let (k, b) = locate(parts, to);
            if k < i {
                Vec::new()
            } else if k == i {
                segments_between(&parts[i], a, b)
            } else {
                let mut seg: Vec<Term> = up_from(&parts[i], a).into_iter().collect();
                seg.extend_from_slice(&parts[i + 1..k]);
                seg.push(down_through(&parts[k], b));
                vec![(Term::concat_opt(seg), points_in_orbit(&parts[k], b))]
            }
        }
        Term::Shuffle(parts) => {
            let (j, a) = locate(parts, from);
            let (l, b) = locate(parts, to);
            let mut out = if j == l {
                segments_between(&parts[j], a, b)
            } else {
                Vec::new()
            };
            // y in a later copy
            let mut seg: Vec<Term> = up_from(&parts[j], a).into_iter().collect();
            seg.push(t.clone());
            seg.push(down_through(&parts[l], b));
            out.push((Term::concat_opt(seg), Card::Omega));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{normalize, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(one_orbits(&t("1")).len(), 1);
        assert_eq!(one_orbits(&t("1^Q(1)")).len(), 2);
        assert_eq!(one_orbits(&t("Q(a,b)")).len(), 2);
        assert_eq!(one_orbits(&t("Q(1,1^a)")).len(), 3);
    }

    #[test]
    fn descriptors_carry_paths() {
        let d = one_orbits(&t("1^Q(a,b)"));
        assert_eq!(d[0].path, vec![0]);
        assert_eq!(d[1].path, vec![1, 0]);
        assert_eq!(d[2].path, vec![1, 1]);
        assert_eq!(d.iter().map(|d| d.index).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn segments_around_points() {
        let q = t("Q(1)");
        assert_eq!(normalize(&down_through(&q, 0)).to_string(), "Q(1)^1");
        assert_eq!(normalize(&up_from(&q, 0).unwrap()).to_string(), "Q(1)");
        let c = t("1^Q(1)^a");
        assert_eq!(down_through(&c, 0).to_string(), "1");
        assert_eq!(up_from(&c, 2), None);
        assert_eq!(points_in_orbit(&c, 0), Card::ONE);
        assert_eq!(points_in_orbit(&c, 1), Card::Omega);
    }

    #[test]
    fn intervals_between_orbits() {
        let c = t("1^Q(1)^a");
        assert_eq!(segments_between(&c, 2, 0), vec![]);
        assert_eq!(segments_between(&c, 0, 0), vec![(None, Card::ONE)]);
        assert_eq!(
            segments_between(&c, 0, 2),
            vec![(Some(t("Q(1)^a")), Card::ONE)]
        );
        let q = t("Q(1^a)");
        let segs = segments_between(&q, 0, 1);
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0], (Some(t("a")), Card::ONE));
        assert_eq!(segs[1], (Some(t("a^Q(1^a)^1^a")), Card::Omega));
    }
}
