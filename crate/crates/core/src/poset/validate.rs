use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Condition, Label, LabelPair};
use crate::gf2::{Echelon, Word};

/// The nine clauses a condition must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Clause {
    /// `u` nonempty, `n, m_* > 0`, every `η_α` of length `n`.
    Domain = 1,
    /// `m_*` trees, each of height `n`.
    Trees = 2,
    /// `μ` defined on every pair with `ρ` of length `n` and `ℓ < m_*`.
    Pairing = 3,
    /// `η_α + ρ_{α,β}` and `η_β + ρ_{α,β}` are leaves of `t_{ℓ_{α,β}}`.
    PairLeaves = 4,
    /// `K_α < m_*` and `η_α` is a leaf of `t_{K_α}`.
    Anchor = 5,
    /// `{K_α, K_γ, ℓ_{α,γ}} ≠ {K_β, K_γ, ℓ_{β,γ}}` for `α < β < γ`.
    Triples = 6,
    /// Leaf sets are pairwise disjoint.
    Disjoint = 7,
    /// Every leaf is some `η_α` or `η_α + ρ_{α,β}`.
    Leaves = 8,
    /// The `η`s followed by the `ρ`s are linearly independent.
    Independence = 9,
}

impl Clause {
    pub fn number(self) -> u8 {
        self as u8
    }
}

impl From<Clause> for u8 {
    fn from(c: Clause) -> u8 {
        c.number()
    }
}

impl TryFrom<u8> for Clause {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, String> {
        use Clause::*;
        [
            Domain,
            Trees,
            Pairing,
            PairLeaves,
            Anchor,
            Triples,
            Disjoint,
            Leaves,
            Independence,
        ]
        .into_iter()
        .find(|c| c.number() == v)
        .ok_or_else(|| format!("no clause {v}"))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {}: {}", self.clause, self.detail)
    }
}

struct Report(Vec<Violation>);

impl Report {
    fn add(&mut self, clause: Clause, detail: String) {
        self.0.push(Violation { clause, detail });
    }
}

/// Checks every clause and lists all violations; an empty list means `p`
/// is a condition.
pub fn validate(p: &Condition) -> Vec<Violation> {
    let mut r = Report(Vec::new());
    let n = p.n;

    if p.u.is_empty() {
        r.add(Clause::Domain, "u is empty".into());
    }
    if n == 0 {
        r.add(Clause::Domain, "n = 0".into());
    }
    if p.m_star == 0 {
        r.add(Clause::Domain, "m_star = 0".into());
    }
    for a in p.labels() {
        match p.eta.get(&a) {
            None => r.add(Clause::Domain, format!("eta({a}) is missing")),
            Some(x) if x.len() != n => r.add(
                Clause::Domain,
                format!("eta({a}) = {x} has length {} != n = {n}", x.len()),
            ),
            Some(_) => {}
        }
    }
    for a in p.eta.keys().filter(|a| !p.u.contains(a)) {
        r.add(
            Clause::Domain,
            format!("eta is defined at {a}, which is not in u"),
        );
    }

    if p.trees.len() != p.m_star {
        r.add(
            Clause::Trees,
            format!("{} trees listed but m_star = {}", p.trees.len(), p.m_star),
        );
    }
    for (m, t) in p.trees.iter().enumerate() {
        if t.height() != n {
            r.add(
                Clause::Trees,
                format!("t_{m} has height {} != n = {n}", t.height()),
            );
        }
    }

    let tree_has = |m: usize, x: &Word| p.trees.get(m).is_some_and(|t| t.leaves().contains(x));
    let pairs = p.label_pairs();
    for pr in &pairs {
        let Some(d) = p.mu.get(pr) else {
            r.add(Clause::Pairing, format!("mu({pr}) is missing"));
            continue;
        };
        if d.rho.len() != n {
            r.add(
                Clause::Pairing,
                format!("rho({pr}) has length {} != n = {n}", d.rho.len()),
            );
            continue;
        }
        if d.ell >= p.m_star {
            r.add(
                Clause::Pairing,
                format!("ell({pr}) = {} >= m_star = {}", d.ell, p.m_star),
            );
            continue;
        }
        for a in [pr.lo(), pr.hi()] {
            if let Some(e) = p.eta.get(&a).filter(|e| e.len() == n) {
                let leaf = e.xor(&d.rho);
                if !tree_has(d.ell, &leaf) {
                    r.add(
                        Clause::PairLeaves,
                        format!("eta({a}) + rho({pr}) = {leaf} is not a leaf of t_{}", d.ell),
                    );
                }
            }
        }
    }
    for pr in
        p.mu.keys()
            .filter(|pr| !p.u.contains(&pr.lo()) || !p.u.contains(&pr.hi()))
    {
        r.add(
            Clause::Pairing,
            format!("mu is defined at {pr}, outside [u]^2"),
        );
    }

    for a in p.labels() {
        match p.k.get(&a) {
            None => r.add(Clause::Anchor, format!("K({a}) is missing")),
            Some(&m) if m >= p.m_star => r.add(
                Clause::Anchor,
                format!("K({a}) = {m} >= m_star = {}", p.m_star),
            ),
            Some(&m) => {
                if let Some(e) = p.eta.get(&a).filter(|e| e.len() == n) {
                    if !tree_has(m, e) {
                        r.add(
                            Clause::Anchor,
                            format!("eta({a}) = {e} is not a leaf of t_{m}"),
                        );
                    }
                }
            }
        }
    }
    for a in p.k.keys().filter(|a| !p.u.contains(a)) {
        r.add(
            Clause::Anchor,
            format!("K is defined at {a}, which is not in u"),
        );
    }

    check_triples(p, &mut r);

    let mut owner: BTreeMap<&Word, usize> = BTreeMap::new();
    for (m, t) in p.trees.iter().enumerate() {
        for x in t.leaves() {
            if let Some(prev) = owner.insert(x, m) {
                r.add(
                    Clause::Disjoint,
                    format!("{x} is a leaf of both t_{prev} and t_{m}"),
                );
            }
        }
    }

    let mut allowed: Vec<Word> = p.eta.values().cloned().collect();
    for pr in &pairs {
        if let Some(d) = p.mu.get(pr) {
            for a in [pr.lo(), pr.hi()] {
                if let Some(e) = p.eta.get(&a).filter(|e| e.len() == d.rho.len()) {
                    allowed.push(e.xor(&d.rho));
                }
            }
        }
    }
    allowed.sort();
    for (m, t) in p.trees.iter().enumerate() {
        for x in t.leaves() {
            if allowed.binary_search(x).is_err() {
                r.add(
                    Clause::Leaves,
                    format!("leaf {x} of t_{m} is neither an eta nor an eta + rho"),
                );
            }
        }
    }

    check_independence(p, &pairs, &mut r);
    r.0
}

fn check_triples(p: &Condition, r: &mut Report) {
    let u: Vec<Label> = p.labels().collect();
    let key = |a: Label, c: Label| -> Option<[usize; 3]> {
        let mut s = [*p.k.get(&a)?, *p.k.get(&c)?, p.pair(a, c)?.ell];
        s.sort_unstable();
        Some(s)
    };
    // Compare as sets: sorted triples with duplicates removed.
    let as_set = |s: [usize; 3]| {
        let mut v = s.to_vec();
        v.dedup();
        v
    };
    for (i, &a) in u.iter().enumerate() {
        for (j, &b) in u.iter().enumerate().skip(i + 1) {
            for &c in &u[j + 1..] {
                if let (Some(x), Some(y)) = (key(a, c), key(b, c)) {
                    if as_set(x) == as_set(y) {
                        r.add(
                            Clause::Triples,
                            format!(
                                "for {a} < {b} < {c}: {{K, K, ell}} sets coincide as {:?}",
                                as_set(x)
                            ),
                        );
                    }
                }
            }
        }
    }
}

fn check_independence(p: &Condition, pairs: &[LabelPair], r: &mut Report) {
    let mut e = Echelon::new(p.n);
    let mut named: Vec<(String, &Word)> = p
        .labels()
        .filter_map(|a| Some((format!("eta({a})"), p.eta.get(&a)?)))
        .collect();
    named.extend(
        pairs
            .iter()
            .filter_map(|pr| Some((format!("rho({pr})"), &p.mu.get(pr)?.rho))),
    );
    let count = named.len();
    for (name, x) in named {
        match e.insert(x) {
            Ok(true) => {}
            Ok(false) => r.add(
                Clause::Independence,
                format!("{name} = {x} lies in the span of the preceding vectors"),
            ),
            Err(_) => {} // wrong length, reported under (1) or (3)
        }
    }
    if count > p.n && e.rank() < count {
        r.add(
            Clause::Independence,
            format!(
                "{count} vectors cannot be independent in dimension n = {}",
                p.n
            ),
        );
    }
}
