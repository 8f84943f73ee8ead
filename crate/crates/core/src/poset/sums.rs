use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{require_valid, Condition, ConditionBasis, Label, LabelPair, Term};
use crate::error::Result;
use crate::gf2::Word;

/// The shape of one of the two pairs in an equal-sum quadruple, for the
/// certifying labels `α ≠ β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairShape {
    /// `{η_α, η_β}`.
    EtaEta,
    /// `{η_α + ρ_{α,β}, η_β}`.
    CrossRho,
    /// `{η_α + ρ_{α,β}, η_α}`.
    SameRho,
}

/// Labels `α < β` with `{b0, c0, b1, c1} = {η_α, η_β, η_α+ρ, η_β+ρ}`, and
/// the shape of pair `pair_index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrupleCertificate {
    pub alpha: Label,
    pub beta: Label,
    pub pair_index: usize,
    pub shape: PairShape,
}

/// Two disjoint pairs of leaves with the same sum. `certificate` is `None`
/// for a quadruple of the wrong form, which is a claim violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrupleReport {
    pub sum: Word,
    pub pairs: [[Word; 2]; 2],
    pub certificate: Option<QuadrupleCertificate>,
}

impl QuadrupleReport {
    pub fn is_violation(&self) -> bool {
        self.certificate.is_none()
    }
}

/// Every pair of disjoint leaf pairs `{b0, c0}`, `{b1, c1}` with
/// `b0 + c0 = b1 + c1`, each certified by decoding the leaves in the
/// condition's independent family.
pub fn scan_equal_sums(p: &Condition) -> Result<Vec<QuadrupleReport>> {
    require_valid(p)?;
    let basis = ConditionBasis::new(p)?;
    let leaves: Vec<Word> = p.all_leaves().into_iter().collect();
    let decoded: Vec<Option<Vec<Term>>> = leaves
        .iter()
        .map(|x| basis.decode(x))
        .collect::<Result<_>>()?;

    let mut by_sum: BTreeMap<Word, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            by_sum
                .entry(leaves[i].xor(&leaves[j]))
                .or_default()
                .push((i, j));
        }
    }

    let mut out = Vec::new();
    for (sum, group) in by_sum {
        for (x, &(b0, c0)) in group.iter().enumerate() {
            for &(b1, c1) in &group[x + 1..] {
                let quad = [b0, c0, b1, c1];
                let certificate = certify(p, &leaves, &decoded, quad);
                out.push(QuadrupleReport {
                    sum: sum.clone(),
                    pairs: [
                        [leaves[b0].clone(), leaves[c0].clone()],
                        [leaves[b1].clone(), leaves[c1].clone()],
                    ],
                    certificate,
                });
            }
        }
    }
    Ok(out)
}

fn certify(
    p: &Condition,
    leaves: &[Word],
    decoded: &[Option<Vec<Term>>],
    quad: [usize; 4],
) -> Option<QuadrupleCertificate> {
    let mut rhos = BTreeSet::new();
    for &i in &quad {
        for t in decoded[i].as_ref()? {
            if let Term::Rho(pr) = t {
                rhos.insert(*pr);
            }
        }
    }
    let [pr]: [LabelPair; 1] = rhos.into_iter().collect::<Vec<_>>().try_into().ok()?;
    let (a, b) = (pr.lo(), pr.hi());
    let rho = &p.mu[&pr].rho;
    let (ea, eb) = (&p.eta[&a], &p.eta[&b]);
    let (ear, ebr) = (ea.xor(rho), eb.xor(rho));
    let want: BTreeSet<&Word> = [ea, eb, &ear, &ebr].into_iter().collect();
    let got: BTreeSet<&Word> = quad.iter().map(|&i| &leaves[i]).collect();
    if want != got {
        return None;
    }
    for (pair_index, (x, y)) in [(quad[0], quad[1]), (quad[2], quad[3])]
        .into_iter()
        .enumerate()
    {
        let pair: BTreeSet<&Word> = [&leaves[x], &leaves[y]].into_iter().collect();
        let is = |u: &Word, v: &Word| pair == [u, v].into_iter().collect::<BTreeSet<_>>();
        let shape = if is(ea, eb) {
            Some(PairShape::EtaEta)
        } else if is(&ear, eb) || is(&ebr, ea) {
            Some(PairShape::CrossRho)
        } else if is(&ear, ea) || is(&ebr, eb) {
            Some(PairShape::SameRho)
        } else {
            None
        };
        if let Some(shape) = shape {
            return Some(QuadrupleCertificate {
                alpha: a,
                beta: b,
                pair_index,
                shape,
            });
        }
    }
    None
}
