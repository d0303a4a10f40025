//! Normal forms via the shuffle isomorphism laws.
//!
//! Permutation and repetition of constituents are absorbed by the set
//! representation of shuffles. The two remaining laws are rewrite rules:
//!
//! * absorption: `Q(s_0..s_{m-1}, Q(t_0..t_{n-1}))` becomes `Q(t_0..t_{n-1})`
//!   when every `s_i` is among the `t_j`;
//! * collapse: `S ^ τ ^ S` becomes `S` for a shuffle `S` when `τ` is empty or
//!   one of the constituents of `S`.

use super::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RewriteRule {
    Absorb,
    Collapse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub rule: RewriteRule,
    pub result: Term,
}

/// The nested shuffle that absorbs `cons`, if any.
fn absorbing(cons: &[Term]) -> Option<&Term> {
    cons.iter().find(|c| match c {
        Term::Shuffle(inner) => cons
            .iter()
            .all(|other| std::ptr::eq(other, *c) || inner.binary_search(other).is_ok()),
        _ => false,
    })
}

/// Every window `(i, j)` of `factors` that collapses.
fn collapse_windows(factors: &[Term]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, s) in factors.iter().enumerate() {
        let Term::Shuffle(cons) = s else { continue };
        for j in (i + 1)..factors.len() {
            if factors[j] != *s {
                continue;
            }
            let fits = match Term::concat_opt(factors[i + 1..j].to_vec()) {
                None => true,
                Some(middle) => cons.binary_search(&middle).is_ok(),
            };
            if fits {
                out.push((i, j));
            }
        }
    }
    out
}

fn collapse(factors: &[Term], (i, j): (usize, usize)) -> Vec<Term> {
    let mut out = factors[..=i].to_vec();
    out.extend_from_slice(&factors[j + 1..]);
    out
}

/// The normal form of `t`.
pub fn normalize(t: &Term) -> Term {
    match t {
        Term::Singleton(_) => t.clone(),
        Term::Shuffle(cons) => {
            let mut s = Term::shuffle(cons.iter().map(normalize).collect());
            while let Term::Shuffle(cons) = &s {
                match absorbing(cons) {
                    Some(inner) => s = inner.clone(),
                    None => break,
                }
            }
            s
        }
        Term::Concat(parts) => {
            let mut factors = Term::concat(parts.iter().map(normalize).collect())
                .factors()
                .to_vec();
            while let Some(&w) = collapse_windows(&factors).first() {
                factors = collapse(&factors, w);
            }
            Term::concat(factors)
        }
    }
}

/// True iff `t` is canonically represented and no law applies anywhere.
pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Singleton(_) => true,
        Term::Shuffle(cons) => {
            !cons.is_empty()
                && cons.windows(2).all(|w| w[0] < w[1])
                && cons.iter().all(is_normal)
                && absorbing(cons).is_none()
        }
        Term::Concat(parts) => {
            parts.len() >= 2
                && parts
                    .iter()
                    .all(|p| !matches!(p, Term::Concat(_)) && is_normal(p))
                && collapse_windows(parts).is_empty()
        }
    }
}

/// Every term reachable from `t` by one rule application at one position.
pub fn one_step_rewrites(t: &Term) -> Vec<Rewrite> {
    let mut out = Vec::new();
    match t {
        Term::Singleton(_) => {}
        Term::Shuffle(cons) => {
            for c in cons {
                if let Term::Shuffle(inner) = c {
                    if cons
                        .iter()
                        .all(|o| o == c || inner.binary_search(o).is_ok())
                    {
                        out.push(Rewrite {
                            rule: RewriteRule::Absorb,
                            result: c.clone(),
                        });
                    }
                }
            }
            for (k, c) in cons.iter().enumerate() {
                for step in one_step_rewrites(c) {
                    let mut next = cons.clone();
                    next[k] = step.result;
                    out.push(Rewrite {
                        rule: step.rule,
                        result: Term::shuffle(next),
                    });
                }
            }
        }
        Term::Concat(parts) => {
            for w in collapse_windows(parts) {
                out.push(Rewrite {
                    rule: RewriteRule::Collapse,
                    result: Term::concat(collapse(parts, w)),
                });
            }
            for (k, p) in parts.iter().enumerate() {
                for step in one_step_rewrites(p) {
                    let mut next = parts.clone();
                    next[k] = step.result;
                    out.push(Rewrite {
                        rule: step.rule,
                        result: Term::concat(next),
                    });
                }
            }
        }
    }
    out
}
