//! Translations of a set into an independent family.
//!
//! If `B` is linearly independent and `A + A ⊆ B + B` with `|A| ≥ 5`, there
//! is exactly one `x` with `A + x ⊆ B`. [`recover_translation`] finds it from
//! three members of `A`; [`brute_translation`] is the reference that tries
//! every candidate.

use std::collections::BTreeSet;

use crate::error::{Error, Result, Trace};
use crate::gf2::{Basis, Word};

/// Largest length for which [`brute_translation_full`] scans all of `ⁿ2`.
pub const MAX_FULL_SCAN_LEN: usize = 20;

/// `a + b = eta + nu` and `a + c = eta + rho` with `eta, nu, rho` distinct
/// members of the basis (indices refer to the basis list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedDecomposition {
    pub eta: Word,
    pub nu: Word,
    pub rho: Word,
    pub indices: [usize; 3],
}

fn two_term_support(basis: &Basis, s: &Word, pair: (usize, usize)) -> Result<[usize; 2]> {
    match basis.express(s)? {
        Some(v) if v.len() == 2 => Ok([v[0], v[1]]),
        other => Err(Error::NotInSumset {
            first: pair.0,
            second: pair.1,
            support: other.map(|v| v.len()),
        }),
    }
}

fn basis_for(words: &[&Word], b: &[Word]) -> Result<Basis> {
    let Some(first) = b.first() else {
        return Err(Error::Rejected("basis is empty".into()));
    };
    for x in words.iter().copied().chain(b) {
        if x.len() != first.len() {
            return Err(Error::LengthMismatch {
                left: first.len(),
                right: x.len(),
            });
        }
    }
    Basis::new(first.len(), b)
}

/// Finds the basis element shared by the two-term expansions of `a + b`
/// and `a + c`.
///
/// The pairwise sums of `a, b, c` (members 0, 1, 2) must each be a sum of
/// two distinct basis elements; otherwise the offending pair is reported.
pub fn decompose_shared(
    a: &Word,
    b: &Word,
    c: &Word,
    basis: &[Word],
) -> Result<SharedDecomposition> {
    let bs = basis_for(&[a, b, c], basis)?;
    decompose_with(&bs, a, b, c, basis)
}

fn decompose_with(
    bs: &Basis,
    a: &Word,
    b: &Word,
    c: &Word,
    basis: &[Word],
) -> Result<SharedDecomposition> {
    if a == b || a == c || b == c {
        return Err(Error::Rejected("a, b, c must be pairwise distinct".into()));
    }
    let ab = two_term_support(bs, &a.xor(b), (0, 1))?;
    let ac = two_term_support(bs, &a.xor(c), (0, 2))?;
    two_term_support(bs, &b.xor(c), (1, 2))?;
    let shared: Vec<usize> = ab.iter().copied().filter(|i| ac.contains(i)).collect();
    let [eta] = shared[..] else {
        return Err(Error::Rejected(format!(
            "supports {ab:?} and {ac:?} of a+b and a+c do not share exactly one element"
        )));
    };
    let nu = if ab[0] == eta { ab[1] } else { ab[0] };
    let rho = if ac[0] == eta { ac[1] } else { ac[0] };
    Ok(SharedDecomposition {
        eta: basis[eta].clone(),
        nu: basis[nu].clone(),
        rho: basis[rho].clone(),
        indices: [eta, nu, rho],
    })
}

/// The unique `x` with `A + x ⊆ B`.
///
/// With `a0 < a1 < a2` the three lex-least members of `A`, the element
/// `eta` shared by `a0 + a1` and `a0 + a2` must be `a0 + x`.
pub fn recover_translation(a: &[Word], basis: &[Word]) -> Result<Word> {
    let set: BTreeSet<&Word> = a.iter().collect();
    if set.len() < 5 {
        return Err(Error::Rejected(format!(
            "need at least 5 distinct members, got {}",
            set.len()
        )));
    }
    let members: Vec<&Word> = set.into_iter().collect();
    let bs = basis_for(&members, basis)?;
    let dec = decompose_with(&bs, members[0], members[1], members[2], basis)?;
    let x = members[0].xor(&dec.eta);
    let targets: BTreeSet<&Word> = basis.iter().collect();
    let mut trace = Trace::new("translation does not map A into B");
    trace.step(format!(
        "a0 = {}, a1 = {}, a2 = {}, eta = {}, x = {x}",
        members[0], members[1], members[2], dec.eta
    ));
    let mut ok = true;
    for m in &members {
        let image = m.xor(&x);
        if !targets.contains(&image) {
            trace.step(format!("{m} + x = {image} is not in B"));
            ok = false;
        }
    }
    if ok {
        Ok(x)
    } else {
        trace.words = basis.to_vec();
        Err(Error::LemmaViolation(Box::new(trace)))
    }
}

fn maps_into(a: &[Word], targets: &BTreeSet<&Word>, x: &Word) -> bool {
    a.iter().all(|m| targets.contains(&m.xor(x)))
}

fn check_lengths(a: &[Word], basis: &[Word]) -> Result<Option<usize>> {
    let Some(first) = a.iter().chain(basis).next() else {
        return Ok(None);
    };
    if let Some(x) = a.iter().chain(basis).find(|x| x.len() != first.len()) {
        return Err(Error::LengthMismatch {
            left: first.len(),
            right: x.len(),
        });
    }
    Ok(Some(first.len()))
}

/// All `x` with `A + x ⊆ B`, checked over the candidates `a0 + β` (for the
/// lex-least `a0 ∈ A` and `β ∈ B`) together with the zero word. Every
/// solution is among these candidates since `a0 + x` must lie in `B`.
pub fn brute_translation(a: &[Word], basis: &[Word]) -> Result<BTreeSet<Word>> {
    let Some(len) = check_lengths(a, basis)? else {
        return Ok(BTreeSet::new());
    };
    let targets: BTreeSet<&Word> = basis.iter().collect();
    let mut candidates = BTreeSet::from([Word::zeros(len)]);
    if let Some(a0) = a.iter().min() {
        candidates.extend(basis.iter().map(|b| a0.xor(b)));
    }
    Ok(candidates
        .into_iter()
        .filter(|x| maps_into(a, &targets, x))
        .collect())
}

/// All `x` with `A + x ⊆ B`, scanning every word of length `n ≤ 20`.
pub fn brute_translation_full(a: &[Word], basis: &[Word]) -> Result<BTreeSet<Word>> {
    let Some(len) = check_lengths(a, basis)? else {
        return Ok(BTreeSet::new());
    };
    if len > MAX_FULL_SCAN_LEN {
        return Err(Error::Rejected(format!(
            "full translation scan needs length <= {MAX_FULL_SCAN_LEN}, got {len}"
        )));
    }
    let targets: BTreeSet<&Word> = basis.iter().collect();
    Ok((0..1u64 << len)
        .map(|v| Word::from_u64(len, v))
        .filter(|x| maps_into(a, &targets, x))
        .collect())
}
