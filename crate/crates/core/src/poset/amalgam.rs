//! Amalgamation of two conditions forming a Δ-system pair.
//!
//! `p` and `q` are aligned when they carry the same numeric data and trees,
//! their label sets have the same size, meet in a nonempty common initial
//! segment (the root `γ_0 < … < γ_{k0}`), the private labels of `p`
//! (`α_0 < … < α_{k1}`) all lie below those of `q` (`β_0 < … < β_{k1}`),
//! and the order isomorphism `π: u^p → u^q` transports `η`, `K` and `μ`.
//!
//! The amalgam appends a tail of length `k*` to every word; the tails of
//! the `β`-side words are distinct unit vectors `ν_i`, which keeps the
//! merged family independent.

use std::collections::{BTreeMap, BTreeSet};

use super::order::order_violation;
use super::{require_valid, validate, Condition, FiniteTree, Label, LabelPair, PairData};
use crate::error::{Error, Result};
use crate::gf2::Word;

/// The Δ-system shape of an aligned pair, with the order isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub root: Vec<Label>,
    pub left: Vec<Label>,
    pub right: Vec<Label>,
    pub pi: BTreeMap<Label, Label>,
}

/// Checks that `p`, `q` can be amalgamated, returning the alignment or
/// `Error::NotAligned` with the first failed requirement.
pub fn aligned(p: &Condition, q: &Condition) -> Result<Alignment> {
    require_valid(p)?;
    require_valid(q)?;
    let no = |why: String| Err(Error::NotAligned(why));

    if p.n != q.n {
        return no(format!("n differs ({} vs {})", p.n, q.n));
    }
    if p.m_star != q.m_star {
        return no(format!("m_star differs ({} vs {})", p.m_star, q.m_star));
    }
    if p.trees != q.trees {
        return no("tree sequences differ".into());
    }
    if p.u.len() != q.u.len() {
        return no(format!("|u| differs ({} vs {})", p.u.len(), q.u.len()));
    }
    let root: Vec<Label> = p.u.intersection(&q.u).copied().collect();
    let left: Vec<Label> = p.u.difference(&q.u).copied().collect();
    let right: Vec<Label> = q.u.difference(&p.u).copied().collect();
    if root.is_empty() {
        return no("the label sets are disjoint".into());
    }
    if left.is_empty() {
        return no("the label sets coincide".into());
    }
    let up: Vec<Label> = p.labels().collect();
    let uq: Vec<Label> = q.labels().collect();
    if up[..root.len()] != root[..] || uq[..root.len()] != root[..] {
        return no("the common labels are not an initial segment of both".into());
    }
    if left.last() >= right.first() {
        return no(
            "the private labels of the first condition are not all below those of the second"
                .into(),
        );
    }
    let pi: BTreeMap<Label, Label> = up.iter().copied().zip(uq.iter().copied()).collect();
    for (&a, &b) in &pi {
        if p.k[&a] != q.k[&b] {
            return no(format!("K({a}) != K({b})"));
        }
        if p.eta[&a] != q.eta[&b] {
            return no(format!("eta({a}) != eta({b})"));
        }
    }
    for pr in p.label_pairs() {
        let image = LabelPair::new(pi[&pr.lo()], pi[&pr.hi()]);
        if p.mu[&pr] != q.mu[&image] {
            return no(format!("mu({pr}) != mu({image})"));
        }
    }
    Ok(Alignment {
        root,
        left,
        right,
        pi,
    })
}

/// A copy of `p` that keeps its first `root_len` labels and renames the
/// others to fresh labels above `max(u^p)`, so that `aligned(p, copy)`
/// holds.
pub fn aligned_copy(p: &Condition, root_len: usize) -> Result<Condition> {
    if root_len == 0 || root_len >= p.u.len() {
        return Err(Error::Rejected(format!(
            "root length must be in 1..{}, got {root_len}",
            p.u.len()
        )));
    }
    let top = p.max_label().expect("nonempty");
    let map: BTreeMap<Label, Label> = p
        .labels()
        .enumerate()
        .map(|(i, a)| {
            if i < root_len {
                (a, a)
            } else {
                (a, top + 1 + (i - root_len) as Label)
            }
        })
        .collect();
    p.relabel(&map)
}

/// Which word a tail unit vector `ν_k` is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TailSlot {
    /// `η_{β_i}`.
    Eta { i: usize },
    /// `ρ_{γ_i, β_j}`.
    RootPair { i: usize, j: usize },
    /// `ρ_{α_i, β_j}`.
    CrossPair { i: usize, j: usize },
    /// `ρ_{β_i, β_j}` for `i < j`.
    RightPair { i: usize, j: usize },
}

/// `k* = (k1+1)(k0+k1+3) + (k1-1)(k1+2)/2 + 1`.
pub fn tail_length(k0: usize, k1: usize) -> usize {
    let (k0, k1) = (k0 as i64, k1 as i64);
    let v = (k1 + 1) * (k0 + k1 + 3) + (k1 - 1) * (k1 + 2) / 2 + 1;
    usize::try_from(v).expect("tail length is positive")
}

/// Every tail index used by the amalgam of a pair with `k0 + 1` root
/// labels and `k1 + 1` private labels on each side.
pub fn tail_index_map(k0: usize, k1: usize) -> Vec<(TailSlot, usize)> {
    let w = k1 + 1;
    let mut out = Vec::new();
    for i in 0..=k1 {
        out.push((TailSlot::Eta { i }, i));
    }
    for i in 0..=k0 {
        for j in 0..=k1 {
            out.push((TailSlot::RootPair { i, j }, w + i * w + j));
        }
    }
    for i in 0..=k1 {
        for j in 0..=k1 {
            out.push((TailSlot::CrossPair { i, j }, (k0 + 2) * w + i * w + j));
        }
    }
    for i in 0..=k1 {
        for j in i + 1..=k1 {
            let k = w * (k0 + k1 + 3) + i * (2 * k1 - i + 1) / 2 + (j - i - 1);
            out.push((TailSlot::RightPair { i, j }, k));
        }
    }
    out
}

/// A common upper bound of two aligned conditions.
///
/// Writing `n^q` for the common height, the amalgam has height
/// `n^q + k*` and `m_*^q + (k1+1)^2` trees. Words from `p` get a zero tail;
/// `η_{β_i}` gets `ν_i`; `ρ_{γ_i,β_j}`, `ρ_{α_i,β_j}` and `ρ_{β_i,β_j}` get
/// the tails listed by [`tail_index_map`], the cross pairs `{α_i, β_j}`
/// being fresh (zero head) with their own two-leaf tree
/// `m_*^q + i(k1+1) + j`. The first `m_*^q` trees gain the `β`-side leaves
/// that share their index.
pub fn amalgamate(p: &Condition, q: &Condition) -> Result<Condition> {
    let al = aligned(p, q)?;
    let (gamma, alpha, beta) = (&al.root, &al.left, &al.right);
    let k0 = gamma.len() - 1;
    let k1 = alpha.len() - 1;
    let w = k1 + 1;
    let kstar = tail_length(k0, k1);
    let n = q.n + kstar;
    let m_star = q.m_star + w * w;
    let slots: BTreeMap<TailSlot, usize> = tail_index_map(k0, k1).into_iter().collect();
    let nu = |slot: TailSlot| Word::unit(kstar, slots[&slot]);
    let zeros = Word::zeros(kstar);

    let mut eta = BTreeMap::new();
    let mut kmap = BTreeMap::new();
    for &a in gamma.iter().chain(alpha) {
        eta.insert(a, p.eta[&a].concat(&zeros));
        kmap.insert(a, p.k[&a]);
    }
    for (i, &b) in beta.iter().enumerate() {
        eta.insert(b, q.eta[&b].concat(&nu(TailSlot::Eta { i })));
        kmap.insert(b, q.k[&b]);
    }

    let mut mu = BTreeMap::new();
    for (pr, d) in &p.mu {
        mu.insert(
            *pr,
            PairData {
                rho: d.rho.concat(&zeros),
                ell: d.ell,
            },
        );
    }
    for (i, &g) in gamma.iter().enumerate() {
        for (j, &b) in beta.iter().enumerate() {
            let d = &q.mu[&LabelPair::new(g, b)];
            mu.insert(
                LabelPair::new(g, b),
                PairData {
                    rho: d.rho.concat(&nu(TailSlot::RootPair { i, j })),
                    ell: d.ell,
                },
            );
        }
    }
    for (i, &a) in alpha.iter().enumerate() {
        for (j, &b) in beta.iter().enumerate() {
            mu.insert(
                LabelPair::new(a, b),
                PairData {
                    rho: Word::zeros(q.n).concat(&nu(TailSlot::CrossPair { i, j })),
                    ell: q.m_star + i * w + j,
                },
            );
        }
    }
    for (i, &bi) in beta.iter().enumerate() {
        for (j, &bj) in beta.iter().enumerate().skip(i + 1) {
            let d = &q.mu[&LabelPair::new(bi, bj)];
            mu.insert(
                LabelPair::new(bi, bj),
                PairData {
                    rho: d.rho.concat(&nu(TailSlot::RightPair { i, j })),
                    ell: d.ell,
                },
            );
        }
    }

    let mut leaves: Vec<BTreeSet<Word>> = q
        .trees
        .iter()
        .map(|t| t.leaves().iter().map(|l| l.concat(&zeros)).collect())
        .collect();
    leaves.resize(m_star, BTreeSet::new());
    for &b in beta {
        leaves[kmap[&b]].insert(eta[&b].clone());
    }
    // Every pair involving a β label: root-β and β-β pairs land in the old
    // trees, α-β pairs in their fresh ones.
    for (pr, d) in mu.iter().filter(|(pr, _)| beta.contains(&pr.hi())) {
        for a in [pr.lo(), pr.hi()] {
            leaves[d.ell].insert(eta[&a].xor(&d.rho));
        }
    }
    let trees = leaves
        .into_iter()
        .map(|ls| FiniteTree::new(n, ls))
        .collect::<Result<Vec<_>>>()?;

    let u: BTreeSet<Label> = p.u.union(&q.u).copied().collect();
    let r = Condition {
        u,
        n,
        m_star,
        eta,
        trees,
        mu,
        k: kmap,
    };

    let trace = || {
        vec![
            format!("root {gamma:?}, left {alpha:?}, right {beta:?}"),
            format!("k0 = {k0}, k1 = {k1}, k* = {kstar}, n = {n}, m_star = {m_star}"),
            format!("tail slots {slots:?}"),
        ]
    };
    let violations = validate(&r);
    if !violations.is_empty() {
        return Err(Error::Construction {
            step: "amalgamate",
            violations,
            trace: trace(),
        });
    }
    for (side, below) in [("first", p), ("second", q)] {
        if let Some(v) = order_violation(below, &r) {
            let mut t = trace();
            t.push(format!("amalgam is not above the {side} input: {v}"));
            return Err(Error::Construction {
                step: "amalgamate",
                violations: Vec::new(),
                trace: t,
            });
        }
    }
    Ok(r)
}
