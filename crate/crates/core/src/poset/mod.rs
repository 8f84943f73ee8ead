//! Conditions of the forcing poset, their validation, the order, and the
//! constructions that extend and amalgamate conditions.
//!
//! A condition is a tuple `⟨u, n, η̄, m_*, t̄, μ, K⟩`:
//!
//! * `u` is a finite nonempty set of labels (stand-ins for countable
//!   ordinals; only their order matters),
//! * `eta` assigns every label a word of length `n`,
//! * `trees` holds `m_*` finite trees of height `n`, each stored as its
//!   leaf set,
//! * `mu` assigns every unordered pair of labels a word `rho` of length `n`
//!   and a tree index `ell`,
//! * `k` assigns every label a tree index.
//!
//! [`validate`] checks the nine clauses a tuple must satisfy; [`leq`] is the
//! order, where the stronger condition is the larger one.

mod amalgam;
mod density;
mod order;
mod sums;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{Basis, Word};

pub use amalgam::{
    aligned, aligned_copy, amalgamate, tail_index_map, tail_length, Alignment, TailSlot,
};
pub use density::{extend, extend_with_label};
pub(crate) use order::order_violation;
pub use order::{check_leq, leq, OrderClause, OrderViolation};
pub use sums::{scan_equal_sums, PairShape, QuadrupleCertificate, QuadrupleReport};
pub use validate::{validate, Clause, Violation};

pub type Label = u64;

/// An unordered pair of distinct labels, stored as `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelPair {
    lo: Label,
    hi: Label,
}

impl LabelPair {
    /// Panics if `a == b`.
    pub fn new(a: Label, b: Label) -> Self {
        assert_ne!(a, b, "a label pair needs two distinct labels");
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn lo(self) -> Label {
        self.lo
    }

    pub fn hi(self) -> Label {
        self.hi
    }

    pub fn contains(self, x: Label) -> bool {
        self.lo == x || self.hi == x
    }
}

impl fmt::Display for LabelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.lo, self.hi)
    }
}

impl std::str::FromStr for LabelPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Rejected(format!(
                "invalid label pair {s:?}: expected \"a,b\" with a != b"
            ))
        };
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let a: Label = a.trim().parse().map_err(|_| bad())?;
        let b: Label = b.trim().parse().map_err(|_| bad())?;
        if a == b {
            return Err(bad());
        }
        Ok(LabelPair::new(a, b))
    }
}

impl Serialize for LabelPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LabelPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `μ(α, β) = (ρ_{α,β}, ℓ_{α,β})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairData {
    pub rho: Word,
    pub ell: usize,
}

/// A finite tree of height `height` whose maximal nodes all have length
/// `height`; represented by that (nonempty) set of maximal nodes. The tree
/// itself is the prefix closure of the leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTree {
    height: usize,
    leaves: BTreeSet<Word>,
}

impl FiniteTree {
    pub fn new<I: IntoIterator<Item = Word>>(height: usize, leaves: I) -> Result<Self> {
        let leaves: BTreeSet<Word> = leaves.into_iter().collect();
        if leaves.is_empty() {
            return Err(Error::Rejected("trees must have at least one leaf".into()));
        }
        if let Some(x) = leaves.iter().find(|x| x.len() != height) {
            return Err(Error::LengthMismatch {
                left: height,
                right: x.len(),
            });
        }
        Ok(Self { height, leaves })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn leaves(&self) -> &BTreeSet<Word> {
        &self.leaves
    }

    /// Whether `node` belongs to the prefix closure.
    pub fn contains(&self, node: &Word) -> bool {
        if node.len() > self.height {
            return false;
        }
        self.leaves.iter().any(|l| node.is_prefix_of(l))
    }

    /// `t ∩ ᵏ2` for `k ≤ height`.
    pub fn level(&self, k: usize) -> Result<BTreeSet<Word>> {
        self.leaves.iter().map(|l| l.restrict(k)).collect()
    }

    /// The tree whose leaves are the current leaves followed by `k` zeros.
    pub fn padded(&self, k: usize) -> FiniteTree {
        FiniteTree {
            height: self.height + k,
            leaves: self.leaves.iter().map(|l| l.pad_zeros(k)).collect(),
        }
    }
}

/// A condition `⟨u, n, η̄, m_*, t̄, μ, K⟩`. Fields are public so that
/// arbitrary (possibly invalid) tuples can be built and handed to
/// [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    into = "crate::format::ConditionRepr",
    try_from = "crate::format::ConditionRepr"
)]
pub struct Condition {
    pub u: BTreeSet<Label>,
    pub n: usize,
    pub m_star: usize,
    pub eta: BTreeMap<Label, Word>,
    pub trees: Vec<FiniteTree>,
    pub mu: BTreeMap<LabelPair, PairData>,
    pub k: BTreeMap<Label, usize>,
}

/// The smallest condition containing `label`: `n = m_* = 1`, `η = ⟨1⟩`.
pub fn minimal_condition(label: Label) -> Condition {
    let one = Word::ones(1);
    Condition {
        u: BTreeSet::from([label]),
        n: 1,
        m_star: 1,
        eta: BTreeMap::from([(label, one.clone())]),
        trees: vec![FiniteTree::new(1, [one]).expect("one leaf")],
        mu: BTreeMap::new(),
        k: BTreeMap::from([(label, 0)]),
    }
}

impl Condition {
    pub fn eta(&self, alpha: Label) -> Option<&Word> {
        self.eta.get(&alpha)
    }

    pub fn pair(&self, a: Label, b: Label) -> Option<&PairData> {
        if a == b {
            return None;
        }
        self.mu.get(&LabelPair::new(a, b))
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.u.iter().copied()
    }

    pub fn max_label(&self) -> Option<Label> {
        self.u.last().copied()
    }

    /// All pairs `α < β` of `u` in lex order.
    pub fn label_pairs(&self) -> Vec<LabelPair> {
        let u: Vec<Label> = self.labels().collect();
        let mut out = Vec::with_capacity(u.len() * u.len().saturating_sub(1) / 2);
        for (i, &a) in u.iter().enumerate() {
            for &b in &u[i + 1..] {
                out.push(LabelPair::new(a, b));
            }
        }
        out
    }

    /// The union of all leaf sets, `⋃ t_m ∩ ⁿ2`.
    pub fn all_leaves(&self) -> BTreeSet<Word> {
        self.trees
            .iter()
            .flat_map(|t| t.leaves.iter().cloned())
            .collect()
    }

    /// Indices of the trees having `x` as a leaf.
    pub fn trees_with_leaf(&self, x: &Word) -> Vec<usize> {
        (0..self.trees.len())
            .filter(|&m| self.trees[m].leaves.contains(x))
            .collect()
    }

    /// Renames labels through `map`, which must be order preserving on `u`.
    pub fn relabel(&self, map: &BTreeMap<Label, Label>) -> Result<Condition> {
        let f = |a: Label| {
            map.get(&a)
                .copied()
                .ok_or_else(|| Error::Rejected(format!("label {a} has no image")))
        };
        let image: Vec<Label> = self.labels().map(f).collect::<Result<_>>()?;
        if image.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Rejected(
                "relabeling must preserve the label order".into(),
            ));
        }
        Ok(Condition {
            u: image.iter().copied().collect(),
            n: self.n,
            m_star: self.m_star,
            eta: self
                .eta
                .iter()
                .map(|(a, x)| Ok((f(*a)?, x.clone())))
                .collect::<Result<_>>()?,
            trees: self.trees.clone(),
            mu: self
                .mu
                .iter()
                .map(|(p, d)| Ok((LabelPair::new(f(p.lo)?, f(p.hi)?), d.clone())))
                .collect::<Result<_>>()?,
            k: self
                .k
                .iter()
                .map(|(a, m)| Ok((f(*a)?, *m)))
                .collect::<Result<_>>()?,
        })
    }
}

/// A member of the independent family `⟨η_α⟩⌢⟨ρ_{α,β} : α < β⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Eta(Label),
    Rho(LabelPair),
}

/// The independent family of a valid condition, prepared for repeated
/// basis expansions.
#[derive(Debug, Clone)]
pub struct ConditionBasis {
    basis: Basis,
    terms: Vec<Term>,
}

impl ConditionBasis {
    /// Fails with `DependentBasis` when the family is not independent.
    pub fn new(p: &Condition) -> Result<Self> {
        let mut terms: Vec<Term> = p.labels().map(Term::Eta).collect();
        terms.extend(p.label_pairs().into_iter().map(Term::Rho));
        let words: Vec<Word> = terms
            .iter()
            .map(|t| match t {
                Term::Eta(a) => p.eta.get(a).cloned(),
                Term::Rho(pr) => p.mu.get(pr).map(|d| d.rho.clone()),
            })
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Rejected("condition is missing eta or mu entries".into()))?;
        Ok(Self {
            basis: Basis::new(p.n, &words)?,
            terms,
        })
    }

    /// The terms summing to `x`, sorted, or `None` outside the span.
    pub fn decode(&self, x: &Word) -> Result<Option<Vec<Term>>> {
        Ok(self
            .basis
            .express(x)?
            .map(|idx| idx.into_iter().map(|i| self.terms[i]).collect()))
    }
}

pub(crate) fn require_valid(p: &Condition) -> Result<()> {
    let v = validate(p);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidCondition(v))
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::gf2::w;

    /// The condition with `u = {5, 9}` obtained by adding label 9 to the
    /// minimal condition on 5.
    pub fn worked_pair() -> Condition {
        Condition {
            u: BTreeSet::from([5, 9]),
            n: 3,
            m_star: 3,
            eta: BTreeMap::from([(5, w("100")), (9, w("010"))]),
            trees: vec![
                FiniteTree::new(3, [w("100")]).unwrap(),
                FiniteTree::new(3, [w("101"), w("011")]).unwrap(),
                FiniteTree::new(3, [w("010")]).unwrap(),
            ],
            mu: BTreeMap::from([(
                LabelPair::new(5, 9),
                PairData {
                    rho: w("001"),
                    ell: 1,
                },
            )]),
            k: BTreeMap::from([(5, 0), (9, 2)]),
        }
    }

    /// The amalgam of [`worked_pair`] with its copy on `{5, 13}`.
    pub fn worked_amalgam() -> Condition {
        let tree = |ls: &[&str]| FiniteTree::new(6, ls.iter().map(|s| w(s))).unwrap();
        let pd = |rho: &str, ell| PairData { rho: w(rho), ell };
        Condition {
            u: BTreeSet::from([5, 9, 13]),
            n: 6,
            m_star: 4,
            eta: BTreeMap::from([(5, w("100000")), (9, w("010000")), (13, w("010100"))]),
            trees: vec![
                tree(&["100000"]),
                tree(&["101000", "011000", "101010", "011110"]),
                tree(&["010000", "010100"]),
                tree(&["010001", "010101"]),
            ],
            mu: BTreeMap::from([
                (LabelPair::new(5, 9), pd("001000", 1)),
                (LabelPair::new(5, 13), pd("001010", 1)),
                (LabelPair::new(9, 13), pd("000001", 3)),
            ]),
            k: BTreeMap::from([(5, 0), (9, 2), (13, 2)]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::gf2::w;

    #[test]
    fn minimal_is_deterministic_and_valid() {
        assert_eq!(minimal_condition(7), minimal_condition(7));
        assert!(validate(&minimal_condition(0)).is_empty());
    }

    #[test]
    fn tree_basics() {
        let t = FiniteTree::new(3, [w("101"), w("011")]).unwrap();
        assert!(t.contains(&w("")));
        assert!(t.contains(&w("10")));
        assert!(!t.contains(&w("11")));
        assert!(!t.contains(&w("1010")));
        assert_eq!(t.level(1).unwrap(), BTreeSet::from([w("1"), w("0")]));
        assert_eq!(t.padded(2).leaves().len(), 2);
        assert!(FiniteTree::new(3, []).is_err());
        assert!(FiniteTree::new(3, [w("10")]).is_err());
    }

    #[test]
    fn label_pair_text() {
        let p: LabelPair = "9,5".parse().unwrap();
        assert_eq!(p, LabelPair::new(5, 9));
        assert_eq!(p.to_string(), "5,9");
        assert!("5,5".parse::<LabelPair>().is_err());
        assert!("5".parse::<LabelPair>().is_err());
    }

    #[test]
    fn decode_worked_leaves() {
        let p = worked_pair();
        let b = ConditionBasis::new(&p).unwrap();
        let rho = Term::Rho(LabelPair::new(5, 9));
        assert_eq!(b.decode(&w("011")).unwrap(), Some(vec![Term::Eta(9), rho]));
        assert_eq!(
            b.decode(&w("110")).unwrap(),
            Some(vec![Term::Eta(5), Term::Eta(9)])
        );
    }

    #[test]
    fn relabel_preserves_validity() {
        let p = worked_pair();
        let q = p.relabel(&BTreeMap::from([(5, 5), (9, 13)])).unwrap();
        assert!(validate(&q).is_empty());
        assert_eq!(q.eta(13), Some(&w("010")));
        assert!(p.relabel(&BTreeMap::from([(5, 20), (9, 13)])).is_err());
    }
}
