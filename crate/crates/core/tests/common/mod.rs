//! Shared oracles and generators for the integration tests.
//!
//! The embedding oracle is written from the order semantics of terms and
//! shares no code with the rewrite engine.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use semilinear::terms::{LinearSample, Term};

/// A finite coloured chain with the pairs of neighbours that must stay
/// neighbours under an embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub colours: Vec<String>,
    /// `adjacent[i]` requires points `i` and `i + 1` to be consecutive.
    pub adjacent: Vec<bool>,
}

impl Pattern {
    pub fn from_sample(s: &LinearSample) -> Self {
        Pattern {
            colours: s
                .points
                .iter()
                .map(|p| p.colour.as_str().to_string())
                .collect(),
            adjacent: s.adjacent.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }
}

/// Bit for an embedding whose first image is (or is not) the least point
/// and whose last image is (or is not) the greatest point.
fn bit(first_is_min: bool, last_is_max: bool) -> u8 {
    1 << (usize::from(first_is_min) * 2 + usize::from(last_is_max))
}

/// `table[i][j]` for `i < j`: endpoint behaviours of embeddings of the
/// pattern points `i..j` into the order, as a set of `bit`s.
type Table = Vec<Vec<u8>>;

fn table(t: &Term, pat: &Pattern) -> Table {
    let k = pat.len();
    let mut out = vec![vec![0u8; k + 1]; k + 1];
    match t {
        Term::Singleton(c) => {
            for i in 0..k {
                if pat.colours[i] == c.as_str() {
                    out[i][i + 1] = bit(true, true);
                }
            }
        }
        Term::Shuffle(parts) => {
            // Copies of constituents are dense and unbounded in both
            // directions, so a block of consecutive pattern points fits in
            // one copy with any endpoint behaviour, and two blocks are
            // never neighbours.
            let subs: Vec<Table> = parts.iter().map(|p| table(p, pat)).collect();
            let block = |i: usize, j: usize| subs.iter().any(|s| s[i][j] != 0);
            let mut reach = vec![vec![false; k + 1]; k + 1];
            for i in 0..k {
                for j in i + 1..=k {
                    let mut ok = block(i, j);
                    for m in i + 1..j {
                        if ok {
                            break;
                        }
                        ok = reach[i][m] && !pat.adjacent[m - 1] && block(m, j);
                    }
                    reach[i][j] = ok;
                    if ok {
                        out[i][j] = bit(false, false);
                    }
                }
            }
        }
        Term::Concat(parts) => {
            let subs: Vec<Table> = parts.iter().map(|p| table(p, pat)).collect();
            for i in 0..k {
                // state bits: (first_is_min, last_is_max of the last
                // non-empty factor, last factor seen was non-empty)
                let state = |f: bool, l: bool, p: bool| {
                    1u8 << (usize::from(f) * 4 + usize::from(l) * 2 + usize::from(p))
                };
                let mut acc = vec![0u8; k + 1];
                for (idx, sub) in subs.iter().enumerate() {
                    let mut next = vec![0u8; k + 1];
                    // factor left empty
                    for j in i + 1..=k {
                        for s in 0..8u8 {
                            if acc[j] & (1 << s) != 0 {
                                next[j] |= state(s & 4 != 0, s & 2 != 0, false);
                            }
                        }
                    }
                    // factor holds points j..m
                    for j in i..k {
                        for m in j + 1..=k {
                            let fl = sub[j][m];
                            if fl == 0 {
                                continue;
                            }
                            for a in [false, true] {
                                for b in [false, true] {
                                    if fl & bit(a, b) == 0 {
                                        continue;
                                    }
                                    if j == i {
                                        next[m] |= state(idx == 0 && a, b, true);
                                        continue;
                                    }
                                    for s in 0..8u8 {
                                        if acc[j] & (1 << s) == 0 {
                                            continue;
                                        }
                                        let (f, l, p) = (s & 4 != 0, s & 2 != 0, s & 1 != 0);
                                        if pat.adjacent[j - 1] && !(p && l && a) {
                                            continue;
                                        }
                                        next[m] |= state(f, b, true);
                                    }
                                }
                            }
                        }
                    }
                    acc = next;
                }
                for j in i + 1..=k {
                    for s in 0..8u8 {
                        if acc[j] & (1 << s) != 0 {
                            out[i][j] |= bit(s & 4 != 0, s & 2 != 0 && s & 1 != 0);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Endpoint behaviours (as `bit`s) of the embeddings of the whole pattern
/// into the order denoted by `t`; zero when it does not embed.
pub fn embeddings(t: &Term, pat: &Pattern) -> u8 {
    if pat.len() == 0 {
        return 0;
    }
    table(t, pat)[0][pat.len()]
}

/// Whether the pattern embeds with the given endpoint behaviour.
pub fn embeds_with(t: &Term, pat: &Pattern, first_is_min: bool, last_is_max: bool) -> bool {
    embeddings(t, pat) & bit(first_is_min, last_is_max) != 0
}

pub const COLOURS: [&str; 3] = ["1", "a", "b"];

/// A random term of depth at most `depth` over `COLOURS`.
pub fn random_term(rng: &mut ChaCha8Rng, depth: usize) -> Term {
    if depth <= 1 || rng.gen_bool(0.3) {
        return Term::colour(COLOURS.choose(rng).unwrap());
    }
    let n = rng.gen_range(1..=3);
    let parts: Vec<Term> = (0..n).map(|_| random_term(rng, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        Term::shuffle(parts)
    } else {
        // repeat a factor now and then so collapse windows occur
        let mut parts = parts;
        if rng.gen_bool(0.4) {
            let s = Term::shuffle(vec![random_term(rng, depth - 1)]);
            parts.insert(0, s.clone());
            parts.push(s);
        }
        Term::concat(parts)
    }
}

/// A random pattern over `COLOURS` with random adjacency demands.
pub fn random_pattern(rng: &mut ChaCha8Rng, max_len: usize) -> Pattern {
    let n = rng.gen_range(1..=max_len);
    Pattern {
        colours: (0..n)
            .map(|_| COLOURS.choose(rng).unwrap().to_string())
            .collect(),
        adjacent: (1..n).map(|_| rng.gen_bool(0.3)).collect(),
    }
}

/// A random tree specification whose spines contain cuts carrying
/// attachments. Orbit attachments are kept off the factor just below a cut
/// so every sampled cut point has a well-defined place.
pub fn random_cut_spec(rng: &mut ChaCha8Rng) -> String {
    let leaf_spines = ["1", "Q(1)", "1^1", "Q(1,a)", "a"];
    let mut text = String::new();
    // spine, and the first orbit of each top-level factor
    let spine_choices: [(&str, &[usize]); 5] = [
        ("Q(1)^Q(a)", &[0, 1]),
        ("Q(1)^a^Q(1)", &[0, 1, 2]),
        ("Q(a)^Q(1)", &[0, 1]),
        ("Q(1)", &[0]),
        ("Q(1,a)^Q(b)", &[0, 2]),
    ];
    let (spine, first_orbit) = spine_choices.choose(rng).unwrap();
    let factors = first_orbit.len();
    let mut attach = Vec::new();
    let cut = rng.gen_range(0..factors);
    if cut + 1 == factors {
        attach.push(format!("{} x L at top", rng.gen_range(2..=3)));
    } else {
        attach.push(format!("{} x L at cut {cut}", rng.gen_range(1..=2)));
    }
    let others: Vec<usize> = (0..factors).filter(|&f| f != cut).collect();
    if let Some(&f) = others.choose(rng) {
        if rng.gen_bool(0.5) {
            attach.push(format!("1 x M at orbit {}", first_orbit[f]));
        }
    }
    text.push_str(&format!("T = spine {spine} with {}\n", attach.join(", ")));
    text.push_str(&format!("L = spine {}\n", leaf_spines.choose(rng).unwrap()));
    text.push_str(&format!("M = spine {}\n", leaf_spines.choose(rng).unwrap()));
    text.push_str("root T\n");
    text
}
