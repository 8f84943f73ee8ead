//! Increasing chains of conditions and the finite shadows of the generic
//! objects they approximate: `h̃_α` (the `η`s), `T̃_m` (the trees) and
//! `r̃_{α,β}` (the `ρ`s).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrange::Color;
use crate::error::{Error, Result};
use crate::gf2::Word;
use crate::poset::{
    extend_with_label, minimal_condition, order_violation, validate, Condition, ConditionBasis,
    Label, LabelPair, Term,
};

/// A nonempty list of conditions, each `≤` the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    into = "crate::format::ChainRepr",
    try_from = "crate::format::ChainRepr"
)]
pub struct Chain {
    stages: Vec<Condition>,
}

impl Chain {
    /// Checks that every stage is valid and that consecutive stages are
    /// ordered.
    pub fn new(stages: Vec<Condition>) -> Result<Self> {
        let c = Self::from_stages_unchecked(stages)?;
        c.check()?;
        Ok(c)
    }

    /// Only checks that there is at least one stage; [`approximation`] and
    /// [`Chain::check`] do the rest.
    pub fn from_stages_unchecked(stages: Vec<Condition>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::Rejected("a chain needs at least one stage".into()));
        }
        Ok(Self { stages })
    }

    pub fn stages(&self) -> &[Condition] {
        &self.stages
    }

    pub fn last(&self) -> &Condition {
        self.stages.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every stage valid and every `s < t` ordered.
    pub fn check(&self) -> Result<()> {
        for p in &self.stages {
            let v = validate(p);
            if !v.is_empty() {
                return Err(Error::InvalidCondition(v));
            }
        }
        for t in 1..self.stages.len() {
            for s in 0..t {
                if let Some(v) = order_violation(&self.stages[s], &self.stages[t]) {
                    return Err(Error::Unstable {
                        earlier: s,
                        later: t,
                        detail: v.to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Number of single-label extensions needed, starting from one label, to
/// reach height `target_n` and to hold `needed` more labels.
fn insertions_needed(needed: usize, target_n: usize) -> usize {
    let (mut n, mut size, mut j) = (1usize, 1usize, 0usize);
    while n < target_n || j < needed {
        n += size + 1;
        size += 1;
        j += 1;
    }
    j
}

/// A chain from `minimal_condition(labels[0])` that adds the remaining
/// labels in order, interleaved with fresh scratch labels until the height
/// reaches `target_n`. The seed only decides where the scratch labels go.
pub fn build_chain(labels: &[Label], target_n: usize, seed: u64) -> Result<Chain> {
    let (&first, rest) = labels
        .split_first()
        .ok_or_else(|| Error::Rejected("build_chain needs at least one label".into()))?;
    let distinct: BTreeSet<Label> = labels.iter().copied().collect();
    if distinct.len() != labels.len() {
        return Err(Error::Rejected("labels must be distinct".into()));
    }

    let total = insertions_needed(rest.len(), target_n);
    let mut slots = vec![false; total];
    slots[..total - rest.len()].fill(true);
    slots.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut fresh = *distinct.last().expect("nonempty");
    let mut next = rest.iter();
    let mut stages = vec![minimal_condition(first)];
    for scratch in slots {
        let alpha = if scratch {
            fresh = fresh
                .checked_add(1)
                .ok_or_else(|| Error::Rejected("no fresh label above the given ones".into()))?;
            fresh
        } else {
            *next.next().expect("one slot per label")
        };
        let q = extend_with_label(stages.last().expect("nonempty"), alpha)?;
        stages.push(q);
    }
    Ok(Chain { stages })
}

/// The last stage of a chain, read as an approximation of the generic
/// objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericApproximation {
    pub n: usize,
    pub h: BTreeMap<Label, Word>,
    pub trees: Vec<BTreeSet<Word>>,
    pub r: BTreeMap<LabelPair, Word>,
}

impl GenericApproximation {
    fn of(p: &Condition) -> Self {
        Self {
            n: p.n,
            h: p.eta.clone(),
            trees: p.trees.iter().map(|t| t.leaves().clone()).collect(),
            r: p.mu.iter().map(|(pr, d)| (*pr, d.rho.clone())).collect(),
        }
    }

    /// The first tree having `x` as a leaf.
    pub fn tree_of(&self, x: &Word) -> Option<usize> {
        self.trees.iter().position(|t| t.contains(x))
    }
}

/// Snapshot of the last stage, after checking that the whole chain is
/// valid and stable: every later stage restricts to every earlier one.
pub fn approximation(c: &Chain) -> Result<GenericApproximation> {
    c.check()?;
    Ok(GenericApproximation::of(c.last()))
}

/// `x = h_label + leaf` with `leaf ∈ T_tree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub label: Label,
    pub leaf: Word,
    pub tree: usize,
}

/// A member of `(h_α + B) ∩ (h_β + B)` with both memberships.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub word: Word,
    pub via_alpha: Membership,
    pub via_beta: Membership,
}

/// The four witnesses `0, r, h_α+h_β, h_α+h_β+r`, in that order, each
/// certified from both sides.
pub fn intersection_witnesses(
    g: &GenericApproximation,
    alpha: Label,
    beta: Label,
) -> Result<Vec<Witness>> {
    if alpha == beta {
        return Err(Error::Rejected("alpha and beta must differ".into()));
    }
    let missing = |a: Label| Error::Rejected(format!("label {a} is not in the approximation"));
    let ha = g.h.get(&alpha).ok_or_else(|| missing(alpha))?;
    let hb = g.h.get(&beta).ok_or_else(|| missing(beta))?;
    let pair = LabelPair::new(alpha, beta);
    let r =
        g.r.get(&pair)
            .ok_or_else(|| Error::ClaimViolation(format!("no r for the pair {pair}")))?;

    let hab = ha.xor(hb);
    let words = [Word::zeros(g.n), r.clone(), hab.clone(), hab.xor(r)];
    let distinct: BTreeSet<&Word> = words.iter().collect();
    if distinct.len() != 4 {
        return Err(Error::ClaimViolation(format!(
            "witnesses for {pair} are not pairwise distinct: {}",
            words
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        )));
    }

    let member = |x: &Word, label: Label, h: &Word| -> Result<Membership> {
        let leaf = x.xor(h);
        let tree = g.tree_of(&leaf).ok_or_else(|| {
            Error::ClaimViolation(format!(
                "{x} + h({label}) = {leaf} is not a leaf of any tree"
            ))
        })?;
        Ok(Membership { label, leaf, tree })
    };
    words
        .into_iter()
        .map(|x| {
            Ok(Witness {
                via_alpha: member(&x, alpha, ha)?,
                via_beta: member(&x, beta, hb)?,
                word: x,
            })
        })
        .collect()
}

/// The trichotomy for sums of two leaves, with the labels `α < β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SumClass {
    /// `η_α + η_β`.
    TypeA {
        alpha: Label,
        beta: Label,
    },
    /// `η_α + η_β + ρ_{α,β}`.
    TypeB {
        alpha: Label,
        beta: Label,
    },
    /// `ρ_{α,β}`.
    TypeC {
        alpha: Label,
        beta: Label,
    },
    Other,
}

impl SumClass {
    pub fn color(self) -> Option<Color> {
        match self {
            SumClass::TypeA { .. } => Some(Color::One),
            SumClass::TypeB { .. } | SumClass::TypeC { .. } => Some(Color::Zero),
            SumClass::Other => None,
        }
    }

    fn is_zero(self) -> bool {
        self.color() == Some(Color::Zero)
    }
}

/// Classifies sums against one condition.
///
/// For a valid condition the class is read off the basis expansion. When
/// the family is dependent (only possible outside the poset) the three
/// forms are matched literally, first pair in lex order winning.
pub struct SumClassifier {
    inner: ClassifierKind,
    n: usize,
}

enum ClassifierKind {
    Basis(ConditionBasis),
    Table(HashMap<Word, SumClass>),
}

impl SumClassifier {
    pub fn new(p: &Condition) -> Result<Self> {
        let inner = match ConditionBasis::new(p) {
            Ok(b) => ClassifierKind::Basis(b),
            Err(Error::DependentBasis) => {
                let mut table = HashMap::new();
                for pr in p.label_pairs() {
                    let (alpha, beta) = (pr.lo(), pr.hi());
                    let eab = p.eta[&alpha].xor(&p.eta[&beta]);
                    let rho = &p.mu[&pr].rho;
                    for (x, c) in [
                        (eab.clone(), SumClass::TypeA { alpha, beta }),
                        (eab.xor(rho), SumClass::TypeB { alpha, beta }),
                        (rho.clone(), SumClass::TypeC { alpha, beta }),
                    ] {
                        table.entry(x).or_insert(c);
                    }
                }
                ClassifierKind::Table(table)
            }
            Err(e) => return Err(e),
        };
        Ok(Self { inner, n: p.n })
    }

    pub fn classify(&self, s: &Word) -> Result<SumClass> {
        if s.len() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: s.len(),
            });
        }
        Ok(match &self.inner {
            ClassifierKind::Table(t) => t.get(s).copied().unwrap_or(SumClass::Other),
            ClassifierKind::Basis(b) => match b.decode(s)?.as_deref() {
                Some([Term::Eta(a), Term::Eta(b)]) => SumClass::TypeA {
                    alpha: *a,
                    beta: *b,
                },
                Some([Term::Eta(a), Term::Eta(b), Term::Rho(pr)])
                    if pr.lo() == *a && pr.hi() == *b =>
                {
                    SumClass::TypeB {
                        alpha: *a,
                        beta: *b,
                    }
                }
                Some([Term::Rho(pr)]) => SumClass::TypeC {
                    alpha: pr.lo(),
                    beta: pr.hi(),
                },
                _ => SumClass::Other,
            },
        })
    }
}

/// Classifies `s` for a valid condition `p`.
pub fn classify_sum(p: &Condition, s: &Word) -> Result<SumClass> {
    crate::poset::require_valid(p)?;
    SumClassifier::new(p)?.classify(s)
}

/// Three realized sums, pairwise color 0, with `third = first + second`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroTriangle {
    pub sums: [Word; 3],
    pub classes: [SumClass; 3],
}

/// Looks for two color-0 sums of leaf pairs whose sum is again color 0.
/// Accepts invalid conditions, where such triangles may exist.
pub fn triangle_scan(p: &Condition) -> Result<Option<ZeroTriangle>> {
    let classifier = SumClassifier::new(p)?;
    let leaves: Vec<Word> = p.all_leaves().into_iter().collect();
    let mut sums = BTreeSet::new();
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            sums.insert(leaves[i].xor(&leaves[j]));
        }
    }
    let mut zero = Vec::new();
    for s in sums {
        let c = classifier.classify(&s)?;
        if c.is_zero() {
            zero.push((s, c));
        }
    }
    for (i, (s, cs)) in zero.iter().enumerate() {
        for (t, ct) in &zero[i + 1..] {
            let st = s.xor(t);
            let c = classifier.classify(&st)?;
            if c.is_zero() {
                return Ok(Some(ZeroTriangle {
                    sums: [s.clone(), t.clone(), st],
                    classes: [*cs, *ct, c],
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::w;
    use crate::poset::{leq, FiniteTree, PairData};

    fn worked() -> Condition {
        extend_with_label(&minimal_condition(5), 9).unwrap()
    }

    #[test]
    fn worked_chain() {
        let c = build_chain(&[5, 9], 3, 7).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.stages()[0], minimal_condition(5));
        assert_eq!(c.stages()[1], worked());
        let g = approximation(&c).unwrap();
        assert_eq!(g.h[&5], w("100"));
        assert_eq!(g.h[&9], w("010"));
        assert_eq!(g.r[&LabelPair::new(5, 9)], w("001"));
        let t: Vec<BTreeSet<Word>> = vec![
            BTreeSet::from([w("100")]),
            BTreeSet::from([w("101"), w("011")]),
            BTreeSet::from([w("010")]),
        ];
        assert_eq!(g.trees, t);
    }

    #[test]
    fn single_stage() {
        let c = build_chain(&[0], 1, 1).unwrap();
        assert_eq!(c.len(), 1);
        let g = approximation(&c).unwrap();
        assert_eq!(g.n, 1);
        assert_eq!(g.h[&0], w("1"));
    }

    #[test]
    fn longer_chain_is_stable() {
        for seed in 0..5 {
            let c = build_chain(&[2, 4, 6, 8], 30, seed).unwrap();
            assert!(c.last().n >= 30);
            for l in [2, 4, 6, 8] {
                assert!(c.last().u.contains(&l));
            }
            for pair in c.stages().windows(2) {
                assert!(leq(&pair[0], &pair[1]).unwrap());
            }
            approximation(&c).unwrap();
        }
    }

    #[test]
    fn seed_moves_scratch_labels() {
        let a = build_chain(&[1, 2, 3], 40, 1).unwrap();
        let orders: BTreeSet<Vec<Label>> = (0..20)
            .map(|s| {
                let c = build_chain(&[1, 2, 3], 40, s).unwrap();
                c.stages()
                    .windows(2)
                    .map(|w| *w[1].u.difference(&w[0].u).next().unwrap())
                    .collect()
            })
            .collect();
        assert!(orders.len() > 1);
        assert_eq!(a, build_chain(&[1, 2, 3], 40, 1).unwrap());
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(build_chain(&[], 3, 0).is_err());
        assert!(build_chain(&[3, 3], 3, 0).is_err());
    }

    #[test]
    fn unordered_chain_is_unstable() {
        let c = Chain::from_stages_unchecked(vec![worked(), minimal_condition(5)]).unwrap();
        assert!(matches!(approximation(&c), Err(Error::Unstable { .. })));
    }

    #[test]
    fn worked_witnesses() {
        let g = approximation(&build_chain(&[5, 9], 3, 0).unwrap()).unwrap();
        let ws = intersection_witnesses(&g, 5, 9).unwrap();
        let words: Vec<Word> = ws.iter().map(|x| x.word.clone()).collect();
        assert_eq!(words, vec![w("000"), w("001"), w("110"), w("111")]);
        assert_eq!(
            ws[0].via_alpha,
            Membership {
                label: 5,
                leaf: w("100"),
                tree: 0
            }
        );
        assert_eq!(
            ws[1].via_alpha,
            Membership {
                label: 5,
                leaf: w("101"),
                tree: 1
            }
        );
        assert_eq!(
            ws[2].via_alpha,
            Membership {
                label: 5,
                leaf: w("010"),
                tree: 2
            }
        );
        assert_eq!(
            ws[2].via_beta,
            Membership {
                label: 9,
                leaf: w("100"),
                tree: 0
            }
        );
        assert_eq!(ws[3].via_alpha.leaf, w("011"));
        assert_eq!(ws[3].via_beta.leaf, w("101"));
        assert!(intersection_witnesses(&g, 5, 5).is_err());
        assert!(intersection_witnesses(&g, 5, 7).is_err());
    }

    #[test]
    fn witnesses_restrict_along_chain() {
        let c = build_chain(&[5, 9], 20, 3).unwrap();
        let k = c.stages().iter().position(|p| p.u.contains(&9)).unwrap();
        let early = approximation(&Chain::new(c.stages()[..=k].to_vec()).unwrap()).unwrap();
        let late = approximation(&c).unwrap();
        let a = intersection_witnesses(&early, 5, 9).unwrap();
        let b = intersection_witnesses(&late, 5, 9).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(y.word.restrict(early.n).unwrap(), x.word);
        }
    }

    #[test]
    fn worked_classification() {
        let p = worked();
        assert_eq!(
            classify_sum(&p, &w("110")).unwrap(),
            SumClass::TypeA { alpha: 5, beta: 9 }
        );
        assert_eq!(
            classify_sum(&p, &w("001")).unwrap(),
            SumClass::TypeC { alpha: 5, beta: 9 }
        );
        assert_eq!(
            classify_sum(&p, &w("111")).unwrap(),
            SumClass::TypeB { alpha: 5, beta: 9 }
        );
        assert_eq!(classify_sum(&p, &w("100")).unwrap(), SumClass::Other);
        assert!(classify_sum(&p, &w("10")).is_err());
    }

    #[test]
    fn worked_triangle_scans() {
        assert_eq!(triangle_scan(&worked()).unwrap(), None);
        let q = crate::poset::aligned_copy(&worked(), 1).unwrap();
        let am = crate::poset::amalgamate(&worked(), &q).unwrap();
        assert_eq!(triangle_scan(&am).unwrap(), None);
    }

    /// Three labels whose `ρ`s are dependent: `ρ_{0,1} + ρ_{1,2} = ρ_{0,2}`.
    fn dependent_rhos() -> Condition {
        let e = [w("10000"), w("01000"), w("00100")];
        let r01 = w("00010");
        let r12 = w("00001");
        let r02 = w("00011");
        let mut leaves = BTreeSet::new();
        let pairs = [((0, 1), &r01), ((1, 2), &r12), ((0, 2), &r02)];
        for ((a, b), r) in pairs {
            leaves.insert(e[a].xor(r));
            leaves.insert(e[b].xor(r));
        }
        for x in &e {
            leaves.insert(x.clone());
        }
        Condition {
            u: BTreeSet::from([0, 1, 2]),
            n: 5,
            m_star: 1,
            eta: (0..3).map(|a| (a as Label, e[a].clone())).collect(),
            trees: vec![FiniteTree::new(5, leaves).unwrap()],
            mu: pairs
                .iter()
                .map(|&((a, b), r)| {
                    (
                        LabelPair::new(a as Label, b as Label),
                        PairData {
                            rho: r.clone(),
                            ell: 0,
                        },
                    )
                })
                .collect(),
            k: (0..3).map(|a| (a, 0)).collect(),
        }
    }

    #[test]
    fn dependent_family_fails_scan() {
        let p = dependent_rhos();
        assert!(!validate(&p).is_empty());
        let t = triangle_scan(&p).unwrap().expect("a zero triangle");
        assert_eq!(t.sums[0].xor(&t.sums[1]), t.sums[2]);
        assert!(t.classes.iter().all(|c| c.color() == Some(Color::Zero)));
    }
}
