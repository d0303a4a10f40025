//! Normal forms for finite and eventually periodic concatenation sequences.

use super::{normalize, Term};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    None,
    /// The order type ω of uncoloured points.
    AllOnes,
    /// The listed members repeated ω times.
    Periodic(Vec<Term>),
}

/// A sequence of terms in normal form. Members alternate between maximal
/// finite runs (grouped into a single finite term) and shuffles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NfSequence {
    pub prefix: Vec<Term>,
    pub tail: Tail,
}

/// Normalized top-level factors of the concatenation of `terms`.
pub(crate) fn nf_factors(terms: &[Term]) -> Vec<Term> {
    match Term::concat_opt(terms.to_vec()) {
        None => Vec::new(),
        Some(t) => normalize(&t).factors().to_vec(),
    }
}

/// Groups consecutive finite factors into single finite members.
fn group(factors: &[Term]) -> Vec<Term> {
    let mut out = Vec::new();
    let mut run: Vec<Term> = Vec::new();
    for f in factors {
        if f.is_finite() {
            run.push(f.clone());
        } else {
            if !run.is_empty() {
                out.push(Term::concat(std::mem::take(&mut run)));
            }
            out.push(f.clone());
        }
    }
    if !run.is_empty() {
        out.push(Term::concat(run));
    }
    out
}

fn is_plain_one(t: &Term) -> bool {
    matches!(t, Term::Singleton(c) if c.is_plain())
}

fn smallest_period(factors: &[Term]) -> usize {
    let n = factors.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| factors[i] == factors[i - d]))
        .unwrap_or(n)
}

/// Normal form of `prefix ^ period ^ period ^ ...` (or of `prefix` alone).
///
/// An ω-tail is absorbed when some rotation `r` of the period has no
/// maximum and satisfies `r ^ r = r`; then `period^ω = X ^ r^ω = X ^ r`
/// where `period = X ^ Y` and `r = Y ^ X`.
pub fn normalize_sequence(prefix: &[Term], period: Option<&[Term]>) -> NfSequence {
    let mut head = nf_factors(prefix);
    let per = period.map(nf_factors).unwrap_or_default();
    if per.is_empty() {
        return NfSequence {
            prefix: group(&head),
            tail: Tail::None,
        };
    }
    if per.iter().all(is_plain_one) {
        while head.last().is_some_and(is_plain_one) {
            head.pop();
        }
        return NfSequence {
            prefix: group(&head),
            tail: Tail::AllOnes,
        };
    }
    for k in 0..per.len() {
        let (x, y) = per.split_at(k);
        let r = nf_factors(&[y, x].concat());
        if r.last().is_some_and(Term::has_max) {
            continue;
        }
        if nf_factors(&[r.as_slice(), r.as_slice()].concat()) == r {
            let all = nf_factors(&[head.as_slice(), x, r.as_slice()].concat());
            return NfSequence {
                prefix: group(&all),
                tail: Tail::None,
            };
        }
    }
    let mut per = per[..smallest_period(&per)].to_vec();
    while !head.is_empty() && head.last() == per.last() {
        head.pop();
        per.rotate_right(1);
    }
    NfSequence {
        prefix: group(&head),
        tail: Tail::Periodic(group(&per)),
    }
}

/// A chain given by a normal-form sequence is countably categorical iff
/// the sequence is finite, i.e. the chain is itself a term.
pub fn is_categorical_chain(s: &NfSequence) -> bool {
    s.tail == Tail::None
}

impl NfSequence {
    pub fn finite(members: Vec<Term>) -> Self {
        normalize_sequence(&members, None)
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty() && self.tail == Tail::None
    }

    /// The chain as a single term, when it is one.
    pub fn as_term(&self) -> Option<Term> {
        match self.tail {
            Tail::None => Term::concat_opt(self.prefix.clone()),
            _ => None,
        }
    }

    /// The period as a list of terms (`[1]` for an all-ones tail).
    pub fn period(&self) -> Option<Vec<Term>> {
        match &self.tail {
            Tail::None => None,
            Tail::AllOnes => Some(vec![Term::one()]),
            Tail::Periodic(p) => Some(p.clone()),
        }
    }

    /// Normal form of `front ^ self`.
    pub fn prepend(&self, front: &[Term]) -> NfSequence {
        let prefix: Vec<Term> = front.iter().chain(&self.prefix).cloned().collect();
        normalize_sequence(&prefix, self.period().as_deref())
    }

    /// Checks the normal-form clauses on a list of members: each member in
    /// normal form, no collapse across neighbouring members, and no two
    /// finite members in a row.
    pub fn members_are_normal(members: &[Term]) -> bool {
        members.iter().all(|m| normalize(m) == *m)
            && members
                .windows(2)
                .all(|w| !(w[0].is_finite() && w[1].is_finite()))
            && {
                let flat: Vec<Term> = members.iter().flat_map(|m| m.factors().to_vec()).collect();
                nf_factors(members) == flat
            }
    }
}

impl fmt::Display for NfSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, items: &[Term]| -> fmt::Result {
            f.write_str("[")?;
            for (i, t) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str("]")
        };
        list(f, &self.prefix)?;
        if let Some(p) = self.period() {
            f.write_str(" * ")?;
            list(f, &p)?;
            f.write_str(" w")?;
        }
        Ok(())
    }
}
