use std::fmt;

use crate::gf2::Word;
use crate::poset::{Label, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("cannot restrict a word of length {len} to {k} coordinates")]
    RestrictBeyondLength { len: usize, k: usize },

    #[error("invalid word literal {0:?}: expected a string over {{0,1}}")]
    InvalidWord(String),

    #[error("basis is linearly dependent")]
    DependentBasis,

    #[error("{0}")]
    Rejected(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("pairwise sum of members {first} and {second} is not a sum of two basis vectors ({})", support_text(.support))]
    NotInSumset {
        first: usize,
        second: usize,
        support: Option<usize>,
    },

    #[error("label {0} is already present in the condition")]
    LabelPresent(Label),

    #[error("condition is not valid: {}", list_violations(.0))]
    InvalidCondition(Vec<Violation>),

    #[error("conditions are not aligned: {0}")]
    NotAligned(String),

    #[error("construction produced an invalid condition ({step}): {}", list_violations(.violations))]
    Construction {
        step: &'static str,
        violations: Vec<Violation>,
        trace: Vec<String>,
    },

    #[error("chain is not stable between stages {earlier} and {later}: {detail}")]
    Unstable {
        earlier: usize,
        later: usize,
        detail: String,
    },

    #[error("CLAIM-VIOLATION: {0}")]
    ClaimViolation(String),

    #[error("LEMMA-VIOLATION: {0}")]
    LemmaViolation(Box<Trace>),
}

fn support_text(support: &Option<usize>) -> String {
    match support {
        Some(k) => format!("{k} terms"),
        None => "outside the span".into(),
    }
}

fn list_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Step-by-step record of a procedure that ended in a lemma violation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub summary: String,
    pub steps: Vec<String>,
    pub words: Vec<Word>,
}

impl Trace {
    pub fn new(summary: impl Into<String>) -> Self {
        Self {
            summary: summary.into(),
            ..Self::default()
        }
    }

    pub fn step(&mut self, s: impl Into<String>) {
        self.steps.push(s.into());
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary)?;
        for s in &self.steps {
            write!(f, "\n  - {s}")?;
        }
        if !self.words.is_empty() {
            let ws: Vec<String> = self.words.iter().map(ToString::to_string).collect();
            write!(f, "\n  words: {}", ws.join(" "))?;
        }
        Ok(())
    }
}
