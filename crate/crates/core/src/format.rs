//! The textual form shared by every file the tools read or write: pretty
//! JSON, keys in a fixed order, words as bit strings, leaf lists sorted.
//!
//! A condition looks like
//!
//! ```json
//! {
//!   "u": [5, 9],
//!   "n": 3,
//!   "m_star": 3,
//!   "eta": { "5": "100", "9": "010" },
//!   "trees": [["100"], ["011", "101"], ["010"]],
//!   "mu": { "5,9": { "rho": "001", "ell": 1 } },
//!   "K": { "5": 0, "9": 2 }
//! }
//! ```
//!
//! and a chain is `{ "stages": [condition, ...] }`.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::chainlab::Chain;
use crate::error::{Error, Result};
use crate::gf2::Word;
use crate::poset::{Condition, FiniteTree, Label, LabelPair, PairData};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionRepr {
    u: BTreeSet<Label>,
    n: usize,
    m_star: usize,
    eta: BTreeMap<Label, Word>,
    trees: Vec<Vec<Word>>,
    mu: BTreeMap<LabelPair, PairData>,
    #[serde(rename = "K")]
    k: BTreeMap<Label, usize>,
}

impl From<Condition> for ConditionRepr {
    fn from(p: Condition) -> Self {
        Self {
            u: p.u,
            n: p.n,
            m_star: p.m_star,
            eta: p.eta,
            trees: p
                .trees
                .iter()
                .map(|t| t.leaves().iter().cloned().collect())
                .collect(),
            mu: p.mu,
            k: p.k,
        }
    }
}

impl TryFrom<ConditionRepr> for Condition {
    type Error = Error;

    /// Only the shape is checked here; a tree whose leaves have a common
    /// length other than `n` parses and is left to the validator.
    fn try_from(r: ConditionRepr) -> Result<Self> {
        let trees = r
            .trees
            .into_iter()
            .enumerate()
            .map(|(m, leaves)| {
                let height = leaves.first().map_or(r.n, Word::len);
                FiniteTree::new(height, leaves)
                    .map_err(|e| Error::Rejected(format!("tree {m}: {e}")))
            })
            .collect::<Result<_>>()?;
        Ok(Condition {
            u: r.u,
            n: r.n,
            m_star: r.m_star,
            eta: r.eta,
            trees,
            mu: r.mu,
            k: r.k,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainRepr {
    stages: Vec<Condition>,
}

impl From<Chain> for ChainRepr {
    fn from(c: Chain) -> Self {
        Self {
            stages: c.stages().to_vec(),
        }
    }
}

impl TryFrom<ChainRepr> for Chain {
    type Error = Error;

    fn try_from(r: ChainRepr) -> Result<Self> {
        Chain::from_stages_unchecked(r.stages)
    }
}

/// Canonical text of `x`, ending in a newline.
pub fn to_text<T: Serialize + ?Sized>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("all types serialize to JSON");
    s.push('\n');
    s
}

/// Parses canonical (or any equivalent) JSON text. Errors carry the line
/// and column.
pub fn from_text<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}
