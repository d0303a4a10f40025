//! Finite seeded samples of the order denoted by a term.

use super::{orbit_count, Colour, Term};
use crate::poset::{FinPoset, Node};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("budget {budget} is below the {needed} points needed to realise every constituent")]
    BudgetTooSmall { needed: usize, budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePoint {
    pub colour: Colour,
    /// Index into `one_orbits` of the sampled term.
    pub orbit: usize,
}

/// A finite chain sampled from a term, bottom to top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSample {
    pub points: Vec<SamplePoint>,
    /// `adjacent[i]` holds when points `i` and `i + 1` are neighbours in the
    /// sampled order itself, not only in the sample.
    pub adjacent: Vec<bool>,
}

impl LinearSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The sample as a coloured chain `p0 < p1 < ...`. Plain points are
    /// uncoloured and `I` points are flagged irrational.
    pub fn to_poset(&self) -> FinPoset {
        let nodes = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let node = Node::new(format!("p{i}"));
                if p.colour.is_plain() {
                    node
                } else if p.colour.is_irrational() {
                    node.irrational()
                } else {
                    node.coloured(p.colour.as_str())
                }
            })
            .collect();
        let rel: Vec<_> = (1..self.points.len()).map(|i| (i - 1, i)).collect();
        FinPoset::new(nodes, &rel).expect("chain is acyclic")
    }
}

/// Fewest points a sample of `t` can have.
pub fn min_size(t: &Term) -> usize {
    match t {
        Term::Singleton(_) => 1,
        Term::Shuffle(parts) | Term::Concat(parts) => parts.iter().map(min_size).sum(),
    }
}

/// Samples at most `budget` points of `t`.
///
/// Finite terms are realised exactly. A shuffle lays out up to three rounds
/// of its constituents, each round in a freshly shuffled order, so that at
/// budgets of at least three rounds every constituent sits between two
/// occurrences of any other; the remaining budget goes to randomly placed
/// extra copies.
pub fn materialize(t: &Term, budget: usize, seed: u64) -> Result<LinearSample, SampleError> {
    let needed = min_size(t);
    if budget < needed {
        return Err(SampleError::BudgetTooSmall { needed, budget });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = LinearSample {
        points: Vec::new(),
        adjacent: Vec::new(),
    };
    fill(t, budget, 0, &mut rng, &mut out);
    Ok(out)
}

fn fill(t: &Term, budget: usize, base: usize, rng: &mut ChaCha8Rng, out: &mut LinearSample) {
    match t {
        Term::Singleton(c) => push(out, c.clone(), base, false),
        Term::Concat(parts) => {
            let mut sizes: Vec<usize> = parts.iter().map(min_size).collect();
            let infinite: Vec<usize> = (0..parts.len())
                .filter(|&k| !parts[k].is_finite())
                .collect();
            if !infinite.is_empty() {
                let extra = budget - sizes.iter().sum::<usize>();
                for (n, &k) in infinite.iter().enumerate() {
                    sizes[k] += extra / infinite.len() + usize::from(n < extra % infinite.len());
                }
            }
            let mut offset = base;
            for (k, p) in parts.iter().enumerate() {
                let joined = k > 0 && parts[k - 1].has_max() && p.has_min();
                let start = out.points.len();
                fill(p, sizes[k], offset, rng, out);
                if start > 0 && k > 0 {
                    out.adjacent[start - 1] = joined;
                }
                offset += orbit_count(p);
            }
        }
        Term::Shuffle(parts) => {
            let mins: Vec<usize> = parts.iter().map(min_size).collect();
            let round: usize = mins.iter().sum();
            let mut copies: Vec<usize> = Vec::new();
            let mut left = budget;
            for r in 0..3 {
                if r > 0 && left < round {
                    break;
                }
                let mut order: Vec<usize> = (0..parts.len()).collect();
                order.shuffle(rng);
                copies.extend(order);
                left -= round;
            }
            loop {
                let fitting: Vec<usize> = (0..parts.len()).filter(|&k| mins[k] <= left).collect();
                let Some(&k) = fitting.choose(rng) else { break };
                let at = rng.gen_range(0..=copies.len());
                copies.insert(at, k);
                left -= mins[k];
            }
            let mut sizes: Vec<usize> = copies.iter().map(|&k| mins[k]).collect();
            let growable: Vec<usize> = (0..copies.len())
                .filter(|&i| !parts[copies[i]].is_finite())
                .collect();
            for (n, &i) in growable.iter().enumerate() {
                sizes[i] += left / growable.len() + usize::from(n < left % growable.len());
            }
            let offsets: Vec<usize> = parts
                .iter()
                .scan(base, |acc, p| {
                    let here = *acc;
                    *acc += orbit_count(p);
                    Some(here)
                })
                .collect();
            for (i, &k) in copies.iter().enumerate() {
                // distinct copies are never neighbours
                fill(&parts[k], sizes[i], offsets[k], rng, out);
            }
        }
    }
}

fn push(out: &mut LinearSample, colour: Colour, orbit: usize, adjacent_to_prev: bool) {
    if !out.points.is_empty() {
        out.adjacent.push(adjacent_to_prev);
    }
    out.points.push(SamplePoint { colour, orbit });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn finite_terms_are_exact() {
        let s = materialize(&t("1^1"), 2, 0).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.adjacent, vec![true]);
        assert_eq!(s.points[1].orbit, 1);
        let s = materialize(&t("1^a^1"), 10, 0).unwrap();
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn single_constituent_shuffle() {
        let s = materialize(&t("Q(1)"), 5, 7).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.points.iter().all(|p| p.orbit == 0));
        assert!(s.adjacent.iter().all(|a| !a));
    }

    #[test]
    fn two_colours_interleave() {
        for seed in 0..20 {
            let s = materialize(&t("Q(a,b)"), 8, seed).unwrap();
            assert_eq!(s.len(), 8);
            let colours: Vec<&str> = s.points.iter().map(|p| p.colour.as_str()).collect();
            assert!(colours.contains(&"a") && colours.contains(&"b"));
            let changes = colours.windows(2).filter(|w| w[0] != w[1]).count();
            // a ... b ... a or b ... a ... b occurs
            assert!(changes >= 2, "seed {seed}: {colours:?}");
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = materialize(&t("1^Q(a,b^c)"), 12, 3).unwrap();
        let b = materialize(&t("1^Q(a,b^c)"), 12, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_too_small() {
        assert_eq!(
            materialize(&t("Q(a,b^c)"), 2, 0),
            Err(SampleError::BudgetTooSmall {
                needed: 3,
                budget: 2
            })
        );
    }

    #[test]
    fn adjacency_inside_copies() {
        let s = materialize(&t("1^Q(a^b)"), 5, 1).unwrap();
        // the leading point is below a shuffle, so never adjacent to it
        assert!(!s.adjacent[0]);
        for i in 1..s.len() - 1 {
            let same_copy =
                s.points[i].colour.as_str() == "a" && s.points[i + 1].colour.as_str() == "b";
            assert_eq!(s.adjacent[i], same_copy);
        }
    }
}
