//! 4-arrangements, pair colorings without 0-colored triangles, and the
//! staged extraction of a 1-homogeneous set containing a 4-arrangement.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Trace};
use crate::gf2::Word;

/// Largest word length for which full enumeration of `ℓ2` is attempted.
pub const MAX_ENUMERABLE_ELL: usize = 26;

/// Largest word length for the exhaustive triangle scan.
pub const MAX_EXHAUSTIVE_TRIANGLE_ELL: usize = 8;

/// Least word length accepted by [`extract_homogeneous`].
pub const MIN_EXTRACTION_ELL: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    AllOne,
    Matching,
    Bipartite,
    SeededTriangleFree,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::AllOne,
        Strategy::Matching,
        Strategy::Bipartite,
        Strategy::SeededTriangleFree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::AllOne => "all-one",
            Strategy::Matching => "matching",
            Strategy::Bipartite => "bipartite",
            Strategy::SeededTriangleFree => "seeded-triangle-free",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Rejected(format!("unknown coloring strategy {s:?}")))
    }
}

type ColorFn = Arc<dyn Fn(&Word, &Word) -> Color + Send + Sync>;

#[derive(Clone)]
enum Rule {
    AllOne,
    Matching,
    Bipartite,
    Seeded(Box<SeededKeys>),
    Custom(ColorFn),
    Stored(HashSet<(Word, Word)>),
}

/// Keys for the keyed ChaCha streams behind the seeded coloring.
#[derive(Clone)]
struct SeededKeys {
    seed: u64,
    side: [u8; 32],
    pair: [u8; 32],
    edge: [u8; 32],
    fold: [u8; 32],
}

impl SeededKeys {
    fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut key = || {
            let mut k = [0u8; 32];
            rng.fill_bytes(&mut k);
            k
        };
        Self {
            seed,
            side: key(),
            pair: key(),
            edge: key(),
            fold: key(),
        }
    }

    fn prf(key: &[u8; 32], input: u64) -> u64 {
        let mut r = ChaCha8Rng::from_seed(*key);
        r.set_stream(input);
        r.next_u64()
    }

    fn word_key(&self, x: &Word) -> u64 {
        match x.to_u64() {
            Some(v) => v,
            None => x
                .limbs()
                .iter()
                .fold(x.len() as u64, |acc, &l| Self::prf(&self.fold, acc ^ l)),
        }
    }

    fn side(&self, x: &Word) -> bool {
        Self::prf(&self.side, self.word_key(x)) & 1 == 1
    }

    fn color(&self, a: &Word, b: &Word) -> Color {
        if self.side(a) == self.side(b) {
            return Color::One;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let k = Self::prf(&self.pair, self.word_key(lo)) ^ self.word_key(hi);
        if Self::prf(&self.edge, k) & 1 == 1 {
            Color::Zero
        } else {
            Color::One
        }
    }
}

/// A symmetric coloring of pairs of distinct words of length `ell`,
/// evaluated lazily through its rule.
#[derive(Clone)]
pub struct PairColoring {
    ell: usize,
    rule: Rule,
}

impl fmt::Debug for PairColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match &self.rule {
            Rule::AllOne => "all-one".to_string(),
            Rule::Matching => "matching".to_string(),
            Rule::Bipartite => "bipartite".to_string(),
            Rule::Seeded(k) => format!("seeded-triangle-free({})", k.seed),
            Rule::Custom(_) => "custom".to_string(),
            Rule::Stored(e) => format!("stored({} zero edges)", e.len()),
        };
        write!(f, "PairColoring(ell={}, {tag})", self.ell)
    }
}

impl PairColoring {
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `true` for colorings backed by an explicit edge set rather than a rule.
    pub fn is_stored(&self) -> bool {
        matches!(self.rule, Rule::Stored(_))
    }

    /// A coloring from an arbitrary rule. The rule is called with its
    /// arguments in lex order, which makes it symmetric by construction.
    pub fn from_fn<F>(ell: usize, f: F) -> Self
    where
        F: Fn(&Word, &Word) -> Color + Send + Sync + 'static,
    {
        Self {
            ell,
            rule: Rule::Custom(Arc::new(f)),
        }
    }

    /// A stored coloring: the listed pairs get color 0, all others color 1.
    pub fn from_zero_edges<I>(ell: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Word)>,
    {
        let mut set = HashSet::new();
        for (a, b) in edges {
            if a.len() != ell || b.len() != ell {
                return Err(Error::LengthMismatch {
                    left: ell,
                    right: if a.len() != ell { a.len() } else { b.len() },
                });
            }
            if a == b {
                return Err(Error::Rejected(format!("edge {a}-{a} is a loop")));
            }
            set.insert(if a < b { (a, b) } else { (b, a) });
        }
        Ok(Self {
            ell,
            rule: Rule::Stored(set),
        })
    }

    /// The color of the pair `{a, b}`. Callers pass distinct words of
    /// length `ell`.
    pub fn color(&self, a: &Word, b: &Word) -> Color {
        debug_assert_eq!(a.len(), self.ell);
        debug_assert_eq!(b.len(), self.ell);
        debug_assert_ne!(a, b);
        match &self.rule {
            Rule::AllOne => Color::One,
            Rule::Matching => {
                if a.xor(b).count_ones() == self.ell {
                    Color::Zero
                } else {
                    Color::One
                }
            }
            Rule::Bipartite => {
                if a.get(0) != b.get(0) {
                    Color::Zero
                } else {
                    Color::One
                }
            }
            Rule::Seeded(keys) => keys.color(a, b),
            Rule::Custom(f) => {
                if a < b {
                    f(a, b)
                } else {
                    f(b, a)
                }
            }
            Rule::Stored(zero) => {
                let key = if a < b {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                };
                if zero.contains(&key) {
                    Color::Zero
                } else {
                    Color::One
                }
            }
        }
    }

    fn is_one(&self, a: &Word, b: &Word) -> bool {
        self.color(a, b) == Color::One
    }
}

/// Colorings whose 0-graph is triangle-free by construction.
///
/// * `AllOne`: no 0-edges.
/// * `Matching`: `{a, b}` is 0 iff `b = a + 1^ℓ`.
/// * `Bipartite`: `{a, b}` is 0 iff exactly one of them starts with 1.
/// * `SeededTriangleFree`: a seeded random side for every word, and each
///   pair across the two sides is a 0-edge with probability 1/2.
pub fn gen_star_coloring(ell: usize, strategy: Strategy, seed: u64) -> Result<PairColoring> {
    if ell < 2 {
        return Err(Error::Rejected(format!(
            "coloring length must be at least 2, got {ell}"
        )));
    }
    let rule = match strategy {
        Strategy::AllOne => Rule::AllOne,
        Strategy::Matching => Rule::Matching,
        Strategy::Bipartite => Rule::Bipartite,
        Strategy::SeededTriangleFree => Rule::Seeded(Box::new(SeededKeys::new(seed))),
    };
    Ok(PairColoring { ell, rule })
}

/// All words of length `ell`, in lex order.
pub fn all_words(ell: usize) -> Result<Vec<Word>> {
    if ell > MAX_ENUMERABLE_ELL {
        return Err(Error::Rejected(format!(
            "enumerating all words of length {ell} is infeasible (limit {MAX_ENUMERABLE_ELL})"
        )));
    }
    Ok((0..1u64 << ell).map(|v| Word::from_u64(ell, v)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// Looks for three distinct words whose three pairs all have color 0.
/// Returns the first such triple found, `None` on pass.
pub fn check_no_zero_triangle(h: &PairColoring, mode: TriangleMode) -> Result<Option<[Word; 3]>> {
    let ell = h.ell;
    match mode {
        TriangleMode::Exhaustive => {
            if ell > MAX_EXHAUSTIVE_TRIANGLE_ELL {
                return Err(Error::Rejected(format!(
                    "exhaustive triangle scan needs ell <= {MAX_EXHAUSTIVE_TRIANGLE_ELL} \
                     (got {ell}); use sampled mode"
                )));
            }
            let words = all_words(ell)?;
            let n = words.len();
            Ok((0..n).into_par_iter().find_map_first(|i| {
                for j in i + 1..n {
                    if h.is_one(&words[i], &words[j]) {
                        continue;
                    }
                    for k in j + 1..n {
                        if !h.is_one(&words[i], &words[k]) && !h.is_one(&words[j], &words[k]) {
                            return Some([words[i].clone(), words[j].clone(), words[k].clone()]);
                        }
                    }
                }
                None
            }))
        }
        TriangleMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let random_word =
                |rng: &mut ChaCha8Rng| Word::from_bits((0..ell).map(|_| rng.random::<bool>()));
            for _ in 0..count {
                let a = random_word(&mut rng);
                let b = random_word(&mut rng);
                let c = random_word(&mut rng);
                if a == b || a == c || b == c {
                    continue;
                }
                if !h.is_one(&a, &b) && !h.is_one(&a, &c) && !h.is_one(&b, &c) {
                    let mut t = [a, b, c];
                    t.sort();
                    return Ok(Some(t));
                }
            }
            Ok(None)
        }
    }
}

/// `Z_a`: the words other than `a` that form a 0-edge with `a`, lex sorted.
pub fn zero_neighborhood(h: &PairColoring, a: &Word) -> Result<Vec<Word>> {
    if a.len() != h.ell {
        return Err(Error::LengthMismatch {
            left: h.ell,
            right: a.len(),
        });
    }
    if let Rule::Matching = h.rule {
        return Ok(vec![a.xor(&Word::ones(h.ell))]);
    }
    if let Rule::AllOne = h.rule {
        return Ok(Vec::new());
    }
    Ok(all_words(h.ell)?
        .into_par_iter()
        .filter(|x| x != a && !h.is_one(a, x))
        .collect())
}

/// Lex-increasing with all four cross first-difference indices equal.
pub fn is_four_arrangement(a: &Word, b: &Word, c: &Word, d: &Word) -> Result<bool> {
    for x in [b, c, d] {
        if x.len() != a.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: x.len(),
            });
        }
    }
    if a.len() <= 1 {
        return Err(Error::Rejected(format!(
            "4-arrangements need word length > 1, got {}",
            a.len()
        )));
    }
    Ok(arrangement_unchecked(a, b, c, d))
}

fn arrangement_unchecked(a: &Word, b: &Word, c: &Word, d: &Word) -> bool {
    if !(a < b && b < c && c < d) {
        return false;
    }
    let k = a.first_diff_unchecked(c);
    k == b.first_diff_unchecked(c)
        && k == a.first_diff_unchecked(d)
        && k == b.first_diff_unchecked(d)
}

fn sorted_distinct(s: &[Word]) -> Result<Vec<Word>> {
    if let Some(first) = s.first() {
        if let Some(x) = s.iter().find(|x| x.len() != first.len()) {
            return Err(Error::LengthMismatch {
                left: first.len(),
                right: x.len(),
            });
        }
    }
    let mut v = s.to_vec();
    v.sort();
    v.dedup();
    Ok(v)
}

/// Some 4-arrangement drawn from `s`, or `None` if there is none.
///
/// Sets of at most 64 words are scanned exhaustively (the lex-first
/// quadruple is returned); larger sets use [`find_four_arrangement_structured`].
pub fn find_four_arrangement(s: &[Word]) -> Result<Option<[Word; 4]>> {
    let v = sorted_distinct(s)?;
    if v.len() < 4 || v[0].len() <= 1 {
        return Ok(None);
    }
    if v.len() > 64 {
        return Ok(structured(&v, 0));
    }
    let n = v.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if arrangement_unchecked(&v[i], &v[j], &v[k], &v[l]) {
                        return Ok(Some([
                            v[i].clone(),
                            v[j].clone(),
                            v[k].clone(),
                            v[l].clone(),
                        ]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Complete search by splitting on successive coordinates: an arrangement
/// exists iff some common prefix `π` has two members below `π⌢0` and two
/// below `π⌢1`.
pub fn find_four_arrangement_structured(s: &[Word]) -> Result<Option<[Word; 4]>> {
    let v = sorted_distinct(s)?;
    if v.len() < 4 || v[0].len() <= 1 {
        return Ok(None);
    }
    Ok(structured(&v, 0))
}

fn structured(v: &[Word], depth: usize) -> Option<[Word; 4]> {
    if v.len() < 4 || depth >= v[0].len() {
        return None;
    }
    let split = v.partition_point(|x| !x.get(depth));
    let (lo, hi) = v.split_at(split);
    if lo.len() >= 2 && hi.len() >= 2 {
        return Some([lo[0].clone(), lo[1].clone(), hi[0].clone(), hi[1].clone()]);
    }
    structured(lo, depth + 1).or_else(|| structured(hi, depth + 1))
}

/// How a certificate was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Route {
    /// The staged picks produced `a, b, c, d, e` directly.
    Staged,
    /// Drawn from the 0-neighborhood of `center`, which is 1-homogeneous.
    ZeroNeighborhood { center: Word },
}

/// A 1-homogeneous set of at least five words with a 4-arrangement inside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementCertificate {
    pub ell: usize,
    pub members: Vec<Word>,
    pub arrangement: [Word; 4],
    pub route: Route,
}

impl ArrangementCertificate {
    /// Re-checks the certificate against `h` from scratch.
    pub fn verify(&self, h: &PairColoring) -> std::result::Result<(), String> {
        if self.ell != h.ell {
            return Err(format!(
                "certificate length {} vs coloring {}",
                self.ell, h.ell
            ));
        }
        let mut distinct = self.members.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != self.members.len() {
            return Err("members repeat".into());
        }
        if self.members.len() < 5 {
            return Err(format!("only {} members", self.members.len()));
        }
        if let Some(x) = self.members.iter().find(|x| x.len() != self.ell) {
            return Err(format!("member {x} has wrong length"));
        }
        if let Some(x) = self.arrangement.iter().find(|x| !self.members.contains(x)) {
            return Err(format!("arrangement word {x} is not a member"));
        }
        let [a, b, c, d] = &self.arrangement;
        if !is_four_arrangement(a, b, c, d).map_err(|e| e.to_string())? {
            return Err(format!("({a}, {b}, {c}, {d}) is not a 4-arrangement"));
        }
        for (i, x) in self.members.iter().enumerate() {
            for y in &self.members[i + 1..] {
                if !h.is_one(x, y) {
                    return Err(format!("pair {x}, {y} has color 0"));
                }
            }
        }
        Ok(())
    }
}

struct PickFailure {
    filter: Word,
}

struct Extractor<'a> {
    h: &'a PairColoring,
    ell: usize,
    trace: Trace,
}

impl Extractor<'_> {
    /// The lex-least word extending `sigma` to full length that has color 1
    /// with `f`.
    fn pick_leaf(&self, sigma: &Word, f: &Word) -> Option<Word> {
        let extra = self.ell - sigma.len();
        (0..1u64 << extra)
            .map(|v| sigma.concat(&Word::from_u64(extra, v)))
            .find(|x| x != f && self.h.is_one(f, x))
    }

    /// Value of a cell `sigma` at level `ell - 3 * stage`: a full-length word
    /// extending `sigma` with color 1 against `filters[0..stage]`.
    fn cell_value(
        &self,
        sigma: &Word,
        stage: usize,
        filters: &[Word],
    ) -> std::result::Result<Word, PickFailure> {
        let f = &filters[stage - 1];
        if stage == 1 {
            return self
                .pick_leaf(sigma, f)
                .ok_or(PickFailure { filter: f.clone() });
        }
        for v in 0..8u64 {
            let child = sigma.concat(&Word::from_u64(3, v));
            let x = self.cell_value(&child, stage - 1, filters)?;
            if &x != f && self.h.is_one(f, &x) {
                return Ok(x);
            }
        }
        Err(PickFailure { filter: f.clone() })
    }

    /// Runs `filters.len() - 1` stages at levels `ell-3, ell-6, …`, then
    /// picks the lex-first top-level cell (among those starting with
    /// `pattern`) whose value also has color 1 with the last filter.
    fn staged_pick(
        &mut self,
        name: &str,
        pattern: &Word,
        filters: &[Word],
    ) -> std::result::Result<Word, PickFailure> {
        let stages = filters.len() - 1;
        let top = self.ell - 3 * stages;
        let free = top - pattern.len();
        let last = &filters[stages];
        for v in 0..1u64 << free {
            let sigma = pattern.concat(&Word::from_u64(free, v));
            let x = self.cell_value(&sigma, stages, filters)?;
            if &x != last && self.h.is_one(last, &x) {
                self.trace
                    .step(format!("{name} = {x} via top cell {sigma}"));
                return Ok(x);
            }
        }
        Err(PickFailure {
            filter: last.clone(),
        })
    }

    fn staged_branch(&mut self) -> std::result::Result<ArrangementCertificate, Option<Word>> {
        let ell = self.ell;
        let a = Word::zeros(ell);
        let d = (0..1u64 << ell)
            .rev()
            .map(|v| Word::from_u64(ell, v))
            .find(|x| x == &a || self.h.is_one(&a, x))
            .expect("a itself lies outside Z_a");
        self.trace.step(format!("a = {a}, d = {d}"));
        if d == a {
            self.trace.step("every other word lies in Z_a".to_string());
            return Err(Some(a));
        }
        let on_fail = |t: &mut Trace, name: &str, e: PickFailure| {
            t.step(format!("pick for {name} failed against {}", e.filter));
            Some(e.filter)
        };
        let b = self
            .staged_pick("b", &Word::from_u64(2, 0b01), &[a.clone(), d.clone()])
            .map_err(|e| on_fail(&mut self.trace, "b", e))?;
        let c = self
            .staged_pick(
                "c",
                &Word::from_u64(2, 0b10),
                &[a.clone(), b.clone(), d.clone()],
            )
            .map_err(|e| on_fail(&mut self.trace, "c", e))?;
        let e = self
            .staged_pick(
                "e",
                &Word::from_u64(3, 0b001),
                &[a.clone(), b.clone(), c.clone(), d.clone()],
            )
            .map_err(|e| on_fail(&mut self.trace, "e", e))?;
        let mut members = vec![a.clone(), b.clone(), c.clone(), d.clone(), e];
        members.sort();
        Ok(ArrangementCertificate {
            ell,
            members,
            arrangement: [a, b, c, d],
            route: Route::Staged,
        })
    }

    fn try_zero_neighborhood(&mut self, center: &Word) -> Result<Option<ArrangementCertificate>> {
        let z = zero_neighborhood(self.h, center)?;
        self.trace.step(format!("|Z_{center}| = {}", z.len()));
        if z.len() < 5 {
            return Ok(None);
        }
        let Some(arr) = find_four_arrangement(&z)? else {
            self.trace.step(format!("Z_{center} has no 4-arrangement"));
            return Ok(None);
        };
        let fifth = z
            .iter()
            .find(|x| !arr.contains(x))
            .expect("at least five members")
            .clone();
        let mut members = arr.to_vec();
        members.push(fifth);
        members.sort();
        Ok(Some(ArrangementCertificate {
            ell: self.ell,
            members,
            arrangement: arr,
            route: Route::ZeroNeighborhood {
                center: center.clone(),
            },
        }))
    }
}

/// Finds a set of at least five words, pairwise of color 1, containing a
/// 4-arrangement, for a coloring with no 0-colored triangle.
///
/// The staged picks run first with `a = 0^ℓ` and `d` the lex-last word
/// outside `Z_a`. A pick that fails against a filter point `f` shows that
/// `Z_f` is large, so `Z_f` (and then `Z_a`, `Z_d`) is tried directly.
/// Every certificate is re-verified before it is returned; if nothing
/// verifies, the coloring must contain a 0-colored triangle and a
/// `LemmaViolation` with the full trace is returned.
pub fn extract_homogeneous(h: &PairColoring) -> Result<ArrangementCertificate> {
    let ell = h.ell;
    if ell < MIN_EXTRACTION_ELL {
        return Err(Error::Rejected(format!(
            "homogeneous-set extraction needs ell >= {MIN_EXTRACTION_ELL}, got {ell}"
        )));
    }
    if ell > MAX_ENUMERABLE_ELL {
        return Err(Error::Rejected(format!(
            "homogeneous-set extraction supports ell <= {MAX_ENUMERABLE_ELL}, got {ell}"
        )));
    }
    let mut ex = Extractor {
        h,
        ell,
        trace: Trace::new(format!("extraction failed for {h:?}")),
    };
    let mut centers = Vec::new();
    match ex.staged_branch() {
        Ok(cert) => match cert.verify(h) {
            Ok(()) => return Ok(cert),
            Err(why) => {
                ex.trace.step(format!("staged certificate rejected: {why}"));
                ex.trace.words.extend(cert.members.iter().cloned());
            }
        },
        Err(Some(f)) => centers.push(f),
        Err(None) => {}
    }
    let a = Word::zeros(ell);
    centers.push(a.clone());
    if let Some(d) = (0..1u64 << ell)
        .rev()
        .map(|v| Word::from_u64(ell, v))
        .find(|x| x != &a && h.is_one(&a, x))
    {
        centers.push(d);
    }
    let mut seen = HashSet::new();
    for f in centers {
        if !seen.insert(f.clone()) {
            continue;
        }
        if let Some(cert) = ex.try_zero_neighborhood(&f)? {
            match cert.verify(h) {
                Ok(()) => return Ok(cert),
                Err(why) => ex.trace.step(format!("Z_{f} certificate rejected: {why}")),
            }
        }
    }
    Err(Error::LemmaViolation(Box::new(ex.trace)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::w;

    #[test]
    fn arrangement_examples() {
        assert!(is_four_arrangement(&w("00"), &w("01"), &w("10"), &w("11")).unwrap());
        assert!(!is_four_arrangement(&w("000"), &w("001"), &w("010"), &w("100")).unwrap());
        let base = "1".repeat(13);
        let q = ["000", "001", "100", "101"].map(|t| w(&format!("{base}{t}")));
        assert!(is_four_arrangement(&q[0], &q[1], &q[2], &q[3]).unwrap());
        assert_eq!(q[0].first_diff(&q[2]).unwrap(), Some(13));
        assert!(is_four_arrangement(&w("1"), &w("0"), &w("1"), &w("0")).is_err());
        assert!(is_four_arrangement(&w("10"), &w("0"), &w("11"), &w("01")).is_err());
        // Not lex-increasing.
        assert!(!is_four_arrangement(&w("01"), &w("00"), &w("10"), &w("11")).unwrap());
    }

    #[test]
    fn find_examples() {
        let s = ["00", "01", "10", "11"].map(w);
        assert_eq!(find_four_arrangement(&s).unwrap(), Some(s.clone()));
        assert_eq!(
            find_four_arrangement(&["000", "001", "011"].map(w)).unwrap(),
            None
        );
        let base = "1".repeat(13);
        let ext: Vec<Word> = (0..8)
            .map(|v| w(&base).concat(&Word::from_u64(3, v)))
            .collect();
        let q = find_four_arrangement(&ext).unwrap().unwrap();
        assert!(is_four_arrangement(&q[0], &q[1], &q[2], &q[3]).unwrap());
        assert!(find_four_arrangement_structured(&ext).unwrap().is_some());
        assert!(find_four_arrangement(&[w("01"), w("011")]).is_err());
    }

    #[test]
    fn chain_like_sets_have_no_arrangement() {
        // 0^k 1 0… : each splits off a single word per level.
        let s: Vec<Word> = (0..10).map(|k| Word::unit(10, k)).collect();
        assert_eq!(find_four_arrangement(&s).unwrap(), None);
        let big: Vec<Word> = (0..100).map(|k| Word::unit(100, k)).collect();
        assert_eq!(find_four_arrangement(&big).unwrap(), None);
    }

    #[test]
    fn coloring_rules() {
        let m = gen_star_coloring(3, Strategy::Matching, 0).unwrap();
        assert_eq!(m.color(&w("000"), &w("111")), Color::Zero);
        assert_eq!(m.color(&w("000"), &w("110")), Color::One);
        let one = gen_star_coloring(3, Strategy::AllOne, 0).unwrap();
        let words = all_words(3).unwrap();
        for (i, x) in words.iter().enumerate() {
            for y in &words[i + 1..] {
                assert_eq!(one.color(x, y), Color::One);
            }
        }
        assert!(gen_star_coloring(1, Strategy::AllOne, 0).is_err());
        let s = gen_star_coloring(20, Strategy::SeededTriangleFree, 9).unwrap();
        let (a, b) = (Word::from_u64(20, 77), Word::from_u64(20, 12345));
        assert_eq!(s.color(&a, &b), s.color(&b, &a));
    }

    #[test]
    fn triangle_examples() {
        let one = gen_star_coloring(4, Strategy::AllOne, 0).unwrap();
        assert_eq!(
            check_no_zero_triangle(&one, TriangleMode::Exhaustive).unwrap(),
            None
        );
        let zero = PairColoring::from_fn(2, |_, _| Color::Zero);
        assert_eq!(
            check_no_zero_triangle(&zero, TriangleMode::Exhaustive).unwrap(),
            Some(["00", "01", "10"].map(w))
        );
        let m = gen_star_coloring(5, Strategy::Matching, 0).unwrap();
        assert_eq!(
            check_no_zero_triangle(&m, TriangleMode::Exhaustive).unwrap(),
            None
        );
        let big = gen_star_coloring(9, Strategy::AllOne, 0).unwrap();
        assert!(check_no_zero_triangle(&big, TriangleMode::Exhaustive).is_err());
    }

    #[test]
    fn bipartite_triangle_free_at_three() {
        // 56 triples at ℓ = 3.
        let b = gen_star_coloring(3, Strategy::Bipartite, 0).unwrap();
        assert_eq!(
            check_no_zero_triangle(&b, TriangleMode::Exhaustive).unwrap(),
            None
        );
    }

    #[test]
    fn zero_neighborhood_examples() {
        let one = gen_star_coloring(4, Strategy::AllOne, 0).unwrap();
        assert!(zero_neighborhood(&one, &w("0110")).unwrap().is_empty());
        let m = gen_star_coloring(4, Strategy::Matching, 0).unwrap();
        assert_eq!(zero_neighborhood(&m, &w("0110")).unwrap(), vec![w("1001")]);
        let b = gen_star_coloring(4, Strategy::Bipartite, 0).unwrap();
        let z = zero_neighborhood(&b, &w("0000")).unwrap();
        assert_eq!(z.len(), 8);
        assert!(z.iter().all(|x| x.get(0)));
        assert!(find_four_arrangement(&z).unwrap().is_some());
        assert!(zero_neighborhood(&b, &w("000")).is_err());
    }

    #[test]
    fn stored_coloring() {
        let h =
            PairColoring::from_zero_edges(3, [(w("001"), w("000")), (w("110"), w("111"))]).unwrap();
        assert!(h.is_stored());
        assert_eq!(h.color(&w("000"), &w("001")), Color::Zero);
        assert_eq!(h.color(&w("111"), &w("110")), Color::Zero);
        assert_eq!(h.color(&w("000"), &w("111")), Color::One);
        assert!(PairColoring::from_zero_edges(3, [(w("00"), w("000"))]).is_err());
    }

    #[test]
    fn extraction_all_one() {
        let h = gen_star_coloring(16, Strategy::AllOne, 0).unwrap();
        let cert = extract_homogeneous(&h).unwrap();
        assert_eq!(cert.route, Route::Staged);
        assert_eq!(cert.arrangement[0], Word::zeros(16));
        assert_eq!(cert.arrangement[3], Word::ones(16));
        cert.verify(&h).unwrap();
    }

    #[test]
    fn extraction_bipartite_uses_zero_neighborhood() {
        let h = gen_star_coloring(16, Strategy::Bipartite, 0).unwrap();
        let cert = extract_homogeneous(&h).unwrap();
        assert_eq!(
            cert.route,
            Route::ZeroNeighborhood {
                center: Word::zeros(16)
            }
        );
        assert!(cert.members.iter().all(|x| x.get(0)));
        cert.verify(&h).unwrap();
    }

    #[test]
    fn extraction_matching() {
        let h = gen_star_coloring(16, Strategy::Matching, 0).unwrap();
        let cert = extract_homogeneous(&h).unwrap();
        assert_eq!(cert.route, Route::Staged);
        for (i, x) in cert.members.iter().enumerate() {
            for y in &cert.members[i + 1..] {
                assert_ne!(x.xor(y), Word::ones(16));
            }
        }
        cert.verify(&h).unwrap();
    }

    #[test]
    fn extraction_rejects_short_words() {
        let h = gen_star_coloring(15, Strategy::AllOne, 0).unwrap();
        assert!(matches!(extract_homogeneous(&h), Err(Error::Rejected(_))));
    }

    #[test]
    fn extraction_reports_violation_on_zero_coloring() {
        let h = PairColoring::from_fn(16, |_, _| Color::Zero);
        match extract_homogeneous(&h) {
            Err(Error::LemmaViolation(trace)) => assert!(!trace.steps.is_empty()),
            other => panic!("expected a lemma violation, got {other:?}"),
        }
    }
}
