//! Binary words of fixed length and linear algebra over GF(2).
//!
//! A [`Word`] stores coordinate `k` in limb `k / 64` at bit `63 - k % 64`,
//! so comparing limbs as unsigned integers is lexicographic comparison of
//! the words and the first differing coordinate is a leading-zero count.
//! Bits past `len` in the last limb are always zero.
//!
//! Words of up to 64 coordinates live inline in one machine word; longer
//! words spill to the heap.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

const LIMB: usize = 64;

type Limbs = SmallVec<[u64; 1]>;

fn limbs_for(len: usize) -> usize {
    len.div_ceil(LIMB)
}

/// An element of `ⁿ2`: a 0-1 sequence of explicit length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    len: usize,
    limbs: Limbs,
}

impl Word {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            limbs: smallvec![0; limbs_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self::zeros(len);
        for l in w.limbs.iter_mut() {
            *l = u64::MAX;
        }
        w.mask_tail();
        w
    }

    /// The unit vector with a single 1 at coordinate `k`.
    ///
    /// Panics if `k >= len`.
    pub fn unit(len: usize, k: usize) -> Self {
        assert!(k < len, "unit coordinate {k} out of range for length {len}");
        let mut w = Self::zeros(len);
        w.limbs[k / LIMB] |= bit_mask(k);
        w
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut w = Self::zeros(bits.len());
        for (k, b) in bits.into_iter().enumerate() {
            if b {
                w.limbs[k / LIMB] |= bit_mask(k);
            }
        }
        w
    }

    /// Builds a word of length `len <= 64` whose coordinate `k` is bit
    /// `len - 1 - k` of `value`, i.e. the usual reading of a binary numeral.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= LIMB, "from_u64 supports at most 64 coordinates");
        let mut w = Self::zeros(len);
        if len > 0 {
            let v = if len == LIMB {
                value
            } else {
                value & ((1u64 << len) - 1)
            };
            w.limbs[0] = v << (LIMB - len);
        }
        w
    }

    /// Inverse of [`Word::from_u64`]; `None` for words longer than 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.len {
            0 => Some(0),
            l if l <= LIMB => Some(self.limbs[0] >> (LIMB - l)),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, k: usize) -> bool {
        assert!(
            k < self.len,
            "coordinate {k} out of range for length {}",
            self.len
        );
        self.limbs[k / LIMB] & bit_mask(k) != 0
    }

    pub fn with_bit(&self, k: usize, value: bool) -> Self {
        assert!(
            k < self.len,
            "coordinate {k} out of range for length {}",
            self.len
        );
        let mut w = self.clone();
        if value {
            w.limbs[k / LIMB] |= bit_mask(k);
        } else {
            w.limbs[k / LIMB] &= !bit_mask(k);
        }
        w
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |k| self.get(k))
    }

    pub(crate) fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Index of the first coordinate equal to 1.
    pub fn first_one(&self) -> Option<usize> {
        self.limbs
            .iter()
            .enumerate()
            .find(|(_, &l)| l != 0)
            .map(|(i, l)| i * LIMB + l.leading_zeros() as usize)
    }

    fn check_len(&self, other: &Word) -> Result<()> {
        if self.len == other.len {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            })
        }
    }

    /// Coordinatewise addition modulo 2.
    pub fn add(&self, other: &Word) -> Result<Word> {
        self.check_len(other)?;
        Ok(self.xor(other))
    }

    /// Addition for callers that already guarantee equal lengths.
    pub(crate) fn xor(&self, other: &Word) -> Word {
        debug_assert_eq!(self.len, other.len);
        let mut w = self.clone();
        w.xor_assign(other);
        w
    }

    pub(crate) fn xor_assign(&mut self, other: &Word) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.limbs.iter_mut().zip(other.limbs.iter()) {
            *a ^= *b;
        }
    }

    pub fn lex_less(&self, other: &Word) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.limbs < other.limbs)
    }

    /// Least coordinate where the two words differ.
    pub fn first_diff(&self, other: &Word) -> Result<Option<usize>> {
        self.check_len(other)?;
        Ok(self.first_diff_unchecked(other))
    }

    pub(crate) fn first_diff_unchecked(&self, other: &Word) -> Option<usize> {
        self.limbs
            .iter()
            .zip(other.limbs.iter())
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(i, (a, b))| i * LIMB + (a ^ b).leading_zeros() as usize)
    }

    /// Appends `k` zero coordinates.
    pub fn pad_zeros(&self, k: usize) -> Word {
        let mut w = Word::zeros(self.len + k);
        w.limbs[..self.limbs.len()].copy_from_slice(&self.limbs);
        w
    }

    /// The initial segment of length `k`.
    pub fn restrict(&self, k: usize) -> Result<Word> {
        if k > self.len {
            return Err(Error::RestrictBeyondLength { len: self.len, k });
        }
        let mut w = Word::zeros(k);
        let n = w.limbs.len();
        w.limbs.copy_from_slice(&self.limbs[..n]);
        w.mask_tail();
        Ok(w)
    }

    /// Whether `self` is an initial segment of `other` (possibly equal).
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len <= other.len && other.restrict(self.len).is_ok_and(|r| &r == self)
    }

    /// Concatenation `self ⌢ tail`.
    pub fn concat(&self, tail: &Word) -> Word {
        let mut w = self.pad_zeros(tail.len);
        for k in 0..tail.len {
            if tail.get(k) {
                let j = self.len + k;
                w.limbs[j / LIMB] |= bit_mask(j);
            }
        }
        w
    }

    fn mask_tail(&mut self) {
        let rem = self.len % LIMB;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= u64::MAX << (LIMB - rem);
            }
        }
    }
}

fn bit_mask(k: usize) -> u64 {
    1u64 << (LIMB - 1 - k % LIMB)
}

/// Words are ordered by length first, then lexicographically.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.limbs.cmp(&other.limbs))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::from_bits(bits))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for parsing a word literal in tests and examples.
///
/// Panics on characters other than `0` and `1`.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

fn common_len(ws: &[Word]) -> Result<Option<usize>> {
    let Some(first) = ws.first() else {
        return Ok(None);
    };
    for x in ws {
        first.check_len(x)?;
    }
    Ok(Some(first.len))
}

/// Incremental row-echelon form over GF(2) that remembers, for every row,
/// which input vectors were summed to produce it.
///
/// Rows are kept sorted by pivot (the first 1), and reduction walks them in
/// that order, so the lowest-index pivot is always used first.
#[derive(Debug, Clone)]
pub struct Echelon {
    len: usize,
    inputs: usize,
    rows: Vec<(usize, Word, Word)>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            inputs: 0,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows. Returns the residue and the set
    /// of inputs (as a membership word over input indices, of length
    /// `capacity`) whose sum was subtracted.
    fn reduce(&self, v: &Word, capacity: usize) -> (Word, Word) {
        let mut residue = v.clone();
        let mut combo = Word::zeros(capacity);
        for (pivot, row, rc) in &self.rows {
            if residue.get(*pivot) {
                residue.xor_assign(row);
                combo.xor_assign(&rc.pad_zeros(capacity - rc.len()));
            }
        }
        (residue, combo)
    }

    /// Adds `v` as the next input vector; returns `true` when it raised the
    /// rank.
    pub fn insert(&mut self, v: &Word) -> Result<bool> {
        if v.len() != self.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: v.len(),
            });
        }
        let idx = self.inputs;
        self.inputs += 1;
        let cap = self.inputs;
        let (residue, mut combo) = self.reduce(v, cap);
        let Some(pivot) = residue.first_one() else {
            return Ok(false);
        };
        combo = combo.with_bit(idx, true);
        let pos = self.rows.partition_point(|(p, _, _)| *p < pivot);
        self.rows.insert(pos, (pivot, residue, combo));
        Ok(true)
    }

    /// Indices of inputs summing to `target`, if it lies in the span.
    pub fn express(&self, target: &Word) -> Result<Option<Vec<usize>>> {
        if target.len() != self.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: target.len(),
            });
        }
        let (residue, combo) = self.reduce(target, self.inputs);
        if !residue.is_zero() {
            return Ok(None);
        }
        Ok(Some((0..self.inputs).filter(|&i| combo.get(i)).collect()))
    }
}

/// Dimension of the span of `ws`.
pub fn rank(ws: &[Word]) -> Result<usize> {
    let Some(len) = common_len(ws)? else {
        return Ok(0);
    };
    let mut e = Echelon::new(len);
    for x in ws {
        e.insert(x)?;
    }
    Ok(e.rank())
}

pub fn is_independent(ws: &[Word]) -> Result<bool> {
    Ok(rank(ws)? == ws.len())
}

/// Elimination state for an independent basis, reusable across many
/// [`Basis::express`] queries.
#[derive(Debug, Clone)]
pub struct Basis {
    echelon: Echelon,
    size: usize,
}

impl Basis {
    pub fn new(len: usize, basis: &[Word]) -> Result<Self> {
        let mut echelon = Echelon::new(len);
        for b in basis {
            if !echelon.insert(b)? {
                return Err(Error::DependentBasis);
            }
        }
        Ok(Self {
            echelon,
            size: basis.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// The unique sorted index set whose basis elements sum to `target`.
    pub fn express(&self, target: &Word) -> Result<Option<Vec<usize>>> {
        self.echelon.express(target)
    }
}

/// The unique subset of `basis` summing to `target`, or `None` when
/// `target` lies outside the span.
pub fn express_in_basis(target: &Word, basis: &[Word]) -> Result<Option<Vec<usize>>> {
    if let Some(len) = common_len(basis)? {
        target.check_len(&basis[0])?;
        Basis::new(len, basis)?.express(target)
    } else if target.is_zero() {
        Ok(Some(Vec::new()))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_examples() {
        assert_eq!(w("0110").add(&w("0011")).unwrap(), w("0101"));
        let x = w("10110");
        assert_eq!(x.add(&x).unwrap(), Word::zeros(5));
        let b = w("01101");
        let mid = x.add(&b).unwrap();
        assert_eq!(mid, w("11011"));
        assert_eq!(mid.add(&b).unwrap(), x);
        assert!(matches!(
            w("01").add(&w("011")),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn lex_and_first_diff() {
        assert!(w("001").lex_less(&w("010")).unwrap());
        assert!(!w("110").lex_less(&w("110")).unwrap());
        assert!(!w("111").lex_less(&w("011")).unwrap());
        assert_eq!(w("0011").first_diff(&w("0101")).unwrap(), Some(1));
        assert_eq!(w("0011").first_diff(&w("0011")).unwrap(), None);
        assert_eq!(w("1000").first_diff(&w("0000")).unwrap(), Some(0));
        assert!(w("1").first_diff(&w("10")).is_err());
        assert!(w("1").lex_less(&w("10")).is_err());
    }

    #[test]
    fn rank_examples() {
        let std3 = [w("100"), w("010"), w("001")];
        assert_eq!(rank(&std3).unwrap(), 3);
        assert!(is_independent(&std3).unwrap());
        let cyc = [w("110"), w("011"), w("101")];
        assert_eq!(rank(&cyc).unwrap(), 2);
        assert!(!is_independent(&cyc).unwrap());
        let fam = ["100000", "010000", "010100", "001000", "001010", "000001"].map(w);
        assert_eq!(rank(&fam).unwrap(), 6);
        assert_eq!(rank(&[]).unwrap(), 0);
        assert!(is_independent(&[]).unwrap());
        assert!(rank(&[w("10"), w("100")]).is_err());
    }

    #[test]
    fn express_examples() {
        let std3 = [w("100"), w("010"), w("001")];
        assert_eq!(
            express_in_basis(&w("110"), &std3).unwrap(),
            Some(vec![0, 1])
        );
        assert_eq!(express_in_basis(&w("000"), &std3).unwrap(), Some(vec![]));
        assert_eq!(
            express_in_basis(&w("111"), &[w("100"), w("010")]).unwrap(),
            None
        );
        assert_eq!(
            express_in_basis(&w("111"), &[w("110"), w("011"), w("101")]),
            Err(Error::DependentBasis)
        );
        let mixed = [w("110"), w("011"), w("001")];
        assert_eq!(
            express_in_basis(&w("101"), &mixed).unwrap(),
            Some(vec![0, 1])
        );
    }

    #[test]
    fn pad_and_restrict() {
        assert_eq!(w("11").pad_zeros(2), w("1100"));
        assert_eq!(w("1100").restrict(2).unwrap(), w("11"));
        let x = w("10110");
        assert_eq!(x.restrict(5).unwrap(), x);
        assert_eq!(
            x.restrict(6),
            Err(Error::RestrictBeyondLength { len: 5, k: 6 })
        );
        assert!(w("101").is_prefix_of(&w("10110")));
        assert!(!w("111").is_prefix_of(&w("10110")));
        assert_eq!(w("10").concat(&w("011")), w("10011"));
    }

    #[test]
    fn long_words_cross_limbs() {
        let a = Word::unit(130, 64);
        let b = Word::unit(130, 129);
        assert_eq!(a.first_one(), Some(64));
        assert!(b.lex_less(&a).unwrap());
        assert_eq!(a.first_diff(&b).unwrap(), Some(64));
        let s = a.add(&b).unwrap();
        assert_eq!(s.count_ones(), 2);
        assert_eq!(s.restrict(65).unwrap(), Word::unit(65, 64));
        assert_eq!(Word::ones(70).count_ones(), 70);
        let text = s.to_string();
        assert_eq!(text.parse::<Word>().unwrap(), s);
        let ws: Vec<Word> = (0..130).map(|k| Word::unit(130, k)).collect();
        assert_eq!(rank(&ws).unwrap(), 130);
    }

    #[test]
    fn numeral_conversion() {
        assert_eq!(Word::from_u64(4, 0b0110), w("0110"));
        assert_eq!(w("0110").to_u64(), Some(6));
        assert_eq!(Word::from_u64(64, u64::MAX), Word::ones(64));
    }

    #[test]
    fn bad_literal() {
        assert!(matches!("0120".parse::<Word>(), Err(Error::InvalidWord(_))));
        assert_eq!("".parse::<Word>().unwrap(), Word::zeros(0));
    }
}
