//! Seeded random inputs for the test suites and the CLI drivers. Every
//! generator is a pure function of its seed.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chainlab::{build_chain, Chain};
use crate::error::Result;
use crate::gf2::{Echelon, Word};
use crate::poset::{aligned_copy, Condition, Label};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize) -> Word {
    Word::from_bits((0..n).map(|_| rng.random::<bool>()))
}

/// `k ≤ n` independent words of length `n`.
pub fn random_independent<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<Word> {
    assert!(k <= n, "cannot pick {k} independent words of length {n}");
    let mut ech = Echelon::new(n);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let x = random_word(rng, n);
        if ech.insert(&x).expect("lengths agree") {
            out.push(x);
        }
    }
    out
}

/// `A = x + A'` for a subset `A'` of an independent set `B`.
#[derive(Debug, Clone)]
pub struct TranslationInstance {
    pub n: usize,
    pub basis: Vec<Word>,
    pub x: Word,
    pub subset: Vec<Word>,
    pub translated: Vec<Word>,
}

/// `n ∈ [6, max_n]`, `|B| ∈ [5, min(12, n)]`, `|A| ∈ [5, |B|]`.
pub fn translation_instance(seed: u64, max_n: usize) -> TranslationInstance {
    let max_n = max_n.max(6);
    let mut r = rng(seed);
    let n = r.random_range(6..=max_n);
    let size = r.random_range(5..=n.min(12));
    let basis = random_independent(&mut r, n, size);
    let x = random_word(&mut r, n);
    let a_size = r.random_range(5..=size);
    let subset: Vec<Word> = basis.choose_multiple(&mut r, a_size).cloned().collect();
    let mut translated: Vec<Word> = subset.iter().map(|b| b.xor(&x)).collect();
    translated.shuffle(&mut r);
    TranslationInstance {
        n,
        basis,
        x,
        subset,
        translated,
    }
}

/// Up to 12 words of a common length up to 16. Roughly half the sets get a
/// planted dependency.
pub fn vector_set(seed: u64) -> Vec<Word> {
    let mut r = rng(seed);
    let n = r.random_range(1..=16);
    let k = r.random_range(1..=12);
    let mut ws: Vec<Word> = (0..k).map(|_| random_word(&mut r, n)).collect();
    if k >= 2 && r.random_bool(0.5) {
        let i = r.random_range(0..k);
        let mut sum = Word::zeros(n);
        for (j, w) in ws.iter().enumerate() {
            if j != i && r.random_bool(0.5) {
                sum.xor_assign(w);
            }
        }
        ws[i] = sum;
    }
    ws
}

/// `size` distinct labels below 100.
pub fn labels<R: Rng>(rng: &mut R, size: usize) -> Vec<Label> {
    let pool: Vec<Label> = (0..100).collect();
    pool.choose_multiple(rng, size).copied().collect()
}

/// Label list of size at most `max_labels` and a target height up to
/// `max_n`, with the chain seed.
#[derive(Debug, Clone)]
pub struct ChainParams {
    pub labels: Vec<Label>,
    pub target_n: usize,
    pub seed: u64,
}

pub fn chain_params(seed: u64, max_labels: usize, max_n: usize) -> ChainParams {
    let mut r = rng(seed);
    let size = r.random_range(1..=max_labels.max(1));
    ChainParams {
        labels: labels(&mut r, size),
        target_n: r.random_range(1..=max_n.max(1)),
        seed: r.random(),
    }
}

pub fn random_chain(seed: u64, max_labels: usize, max_n: usize) -> Result<Chain> {
    let cp = chain_params(seed, max_labels, max_n);
    build_chain(&cp.labels, cp.target_n, cp.seed)
}

/// A condition with `|u| = size` and no scratch labels.
pub fn condition_with_labels<R: Rng>(rng: &mut R, size: usize) -> Result<Condition> {
    let ls = labels(rng, size);
    Ok(build_chain(&ls, 1, 0)?.last().clone())
}

/// An input for the density check: a condition, a label that may or may
/// not be present, and thresholds `N, M ≤ 40`.
#[derive(Debug, Clone)]
pub struct DensityInput {
    pub p: Condition,
    pub alpha: Label,
    pub min_n: usize,
    pub min_m: usize,
}

pub fn density_input(seed: u64) -> Result<DensityInput> {
    let mut r = rng(seed);
    let size = r.random_range(1..=4);
    let p = condition_with_labels(&mut r, size)?;
    let alpha = if r.random_bool(0.25) {
        **p.u
            .iter()
            .collect::<Vec<_>>()
            .choose(&mut r)
            .expect("nonempty")
    } else {
        r.random_range(0..120)
    };
    Ok(DensityInput {
        p,
        alpha,
        min_n: r.random_range(0..=40),
        min_m: r.random_range(0..=40),
    })
}

/// Two aligned conditions with `|u| ≤ 5`: a condition and a copy of it
/// with a nonempty root kept and the other labels renamed upwards.
pub fn aligned_pair(seed: u64) -> Result<(Condition, Condition)> {
    let mut r = rng(seed);
    let size = r.random_range(2..=5);
    let p = condition_with_labels(&mut r, size)?;
    let root_len = r.random_range(1..size);
    let q = aligned_copy(&p, root_len)?;
    Ok((p, q))
}

/// Distinct random words of length `ell`, at most `2^ell` of them.
pub fn word_set(seed: u64, ell: usize, max: usize) -> Vec<Word> {
    let mut r = rng(seed);
    let cap = if ell >= 63 { usize::MAX } else { 1usize << ell };
    let want = r.random_range(0..=max.min(cap));
    let mut set = BTreeSet::new();
    while set.len() < want {
        set.insert(random_word(&mut r, ell));
    }
    set.into_iter().collect()
}
