use std::collections::BTreeMap;

use super::order::order_violation;
use super::{require_valid, validate, Condition, FiniteTree, Label, LabelPair, PairData};
use crate::error::{Error, Result};
use crate::gf2::Word;

/// Adds a fresh label `alpha` to `p`.
///
/// With `α_0 < … < α_k` the labels of `p`, the result has
/// `n = n^p + k + 2` and `m_* = m_*^p + k + 2`. Old words are padded with
/// zeros; `η_α` is the unit vector at `n^p`, `ρ_{α_i,α}` the unit vector at
/// `n^p + i + 1`, `ℓ_{α_i,α} = m_*^p + i` and `K_α = m_* - 1`. Tree
/// `m_*^p + i` has the two leaves `η_{α_i} + ρ_{α_i,α}` and
/// `η_α + ρ_{α_i,α}`; the last tree has the single leaf `η_α`.
///
/// The result is re-validated (and checked to lie above `p`) before it is
/// returned.
pub fn extend_with_label(p: &Condition, alpha: Label) -> Result<Condition> {
    require_valid(p)?;
    if p.u.contains(&alpha) {
        return Err(Error::LabelPresent(alpha));
    }
    let olds: Vec<Label> = p.labels().collect();
    let k = olds.len() - 1;
    let pad = k + 2;
    let n = p.n + pad;
    let m_star = p.m_star + pad;

    let mut eta: BTreeMap<Label, Word> =
        p.eta.iter().map(|(a, x)| (*a, x.pad_zeros(pad))).collect();
    let eta_alpha = Word::unit(n, p.n);
    eta.insert(alpha, eta_alpha.clone());

    let mut mu: BTreeMap<LabelPair, PairData> =
        p.mu.iter()
            .map(|(pr, d)| {
                (
                    *pr,
                    PairData {
                        rho: d.rho.pad_zeros(pad),
                        ell: d.ell,
                    },
                )
            })
            .collect();

    let mut trees: Vec<FiniteTree> = p.trees.iter().map(|t| t.padded(pad)).collect();
    for (i, &ai) in olds.iter().enumerate() {
        let rho = Word::unit(n, p.n + i + 1);
        let ell = p.m_star + i;
        trees.push(FiniteTree::new(
            n,
            [eta[&ai].xor(&rho), eta_alpha.xor(&rho)],
        )?);
        mu.insert(LabelPair::new(ai, alpha), PairData { rho, ell });
    }
    trees.push(FiniteTree::new(n, [eta_alpha])?);

    let mut kmap = p.k.clone();
    kmap.insert(alpha, m_star - 1);

    let mut u = p.u.clone();
    u.insert(alpha);
    let q = Condition {
        u,
        n,
        m_star,
        eta,
        trees,
        mu,
        k: kmap,
    };
    certify("extend_with_label", p, &q)?;
    Ok(q)
}

pub(super) fn certify(step: &'static str, below: &Condition, q: &Condition) -> Result<()> {
    let violations = validate(q);
    if !violations.is_empty() {
        return Err(Error::Construction {
            step,
            violations,
            trace: vec![format!(
                "input: u = {:?}, n = {}, m_star = {}",
                below.u, below.n, below.m_star
            )],
        });
    }
    if let Some(v) = order_violation(below, q) {
        return Err(Error::Construction {
            step,
            violations: Vec::new(),
            trace: vec![format!("result is not above its input: {v}")],
        });
    }
    Ok(())
}

/// A condition `q ≥ p` with `alpha ∈ u^q`, `n^q ≥ min_n` and
/// `m_*^q ≥ min_m`. Adds `alpha` if needed, then fresh labels above every
/// label in use until both thresholds are met.
pub fn extend(p: &Condition, alpha: Label, min_n: usize, min_m: usize) -> Result<Condition> {
    require_valid(p)?;
    let mut q = if p.u.contains(&alpha) {
        p.clone()
    } else {
        extend_with_label(p, alpha)?
    };
    while q.n < min_n || q.m_star < min_m {
        let fresh = q.max_label().map_or(0, |m| m + 1);
        q = extend_with_label(&q, fresh)?;
    }
    Ok(q)
}
