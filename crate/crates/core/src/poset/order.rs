use std::fmt;

use serde::{Deserialize, Serialize};

use super::{require_valid, Condition};
use crate::error::Result;

/// The four clauses of the order `p ≤ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderClause {
    /// `u^p ⊆ u^q`, `n^p ≤ n^q`, `m_*^p ≤ m_*^q`.
    Growth,
    /// `η^q_α ↾ n^p = η^p_α`.
    Eta,
    /// `t^q_m ∩ ^{n^p}2 = t^p_m ∩ ^{n^p}2` for `m < m_*^p`.
    Levels,
    /// `K` and `ℓ` preserved, `ρ^p ⊴ ρ^q`.
    Pairs,
}

impl fmt::Display for OrderClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderClause::Growth => "(i)",
            OrderClause::Eta => "(ii)",
            OrderClause::Levels => "(iii)",
            OrderClause::Pairs => "(iv)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderViolation {
    pub clause: OrderClause,
    pub detail: String,
}

impl fmt::Display for OrderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order clause {}: {}", self.clause, self.detail)
    }
}

/// `Ok(None)` when `p ≤ q`, otherwise the first failing clause. Both
/// conditions must be valid.
pub fn check_leq(p: &Condition, q: &Condition) -> Result<Option<OrderViolation>> {
    require_valid(p)?;
    require_valid(q)?;
    Ok(order_violation(p, q))
}

/// `p ≤ q`: `q` is the stronger condition.
pub fn leq(p: &Condition, q: &Condition) -> Result<bool> {
    Ok(check_leq(p, q)?.is_none())
}

/// The order check for conditions already known to be valid.
pub(crate) fn order_violation(p: &Condition, q: &Condition) -> Option<OrderViolation> {
    let fail = |clause, detail: String| Some(OrderViolation { clause, detail });

    if let Some(a) = p.labels().find(|a| !q.u.contains(a)) {
        return fail(
            OrderClause::Growth,
            format!("label {a} is missing from the upper condition"),
        );
    }
    if p.n > q.n {
        return fail(
            OrderClause::Growth,
            format!("n shrinks from {} to {}", p.n, q.n),
        );
    }
    if p.m_star > q.m_star {
        return fail(
            OrderClause::Growth,
            format!("m_star shrinks from {} to {}", p.m_star, q.m_star),
        );
    }

    for a in p.labels() {
        let (ep, eq) = (&p.eta[&a], &q.eta[&a]);
        if !ep.is_prefix_of(eq) {
            return fail(
                OrderClause::Eta,
                format!("eta({a}) = {eq} does not extend {ep}"),
            );
        }
    }

    for (m, tp) in p.trees.iter().enumerate() {
        let level = q.trees[m].level(p.n).expect("n^p <= n^q");
        if &level != tp.leaves() {
            let fmt_set = |s: &std::collections::BTreeSet<crate::gf2::Word>| {
                s.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            };
            return fail(
                OrderClause::Levels,
                format!(
                    "level {} of t_{m} is {{{}}} above but {{{}}} below",
                    p.n,
                    fmt_set(&level),
                    fmt_set(tp.leaves())
                ),
            );
        }
    }

    for a in p.labels() {
        if p.k[&a] != q.k[&a] {
            return fail(
                OrderClause::Pairs,
                format!("K({a}) changes from {} to {}", p.k[&a], q.k[&a]),
            );
        }
    }
    for (pr, dp) in &p.mu {
        let dq = &q.mu[pr];
        if dp.ell != dq.ell {
            return fail(
                OrderClause::Pairs,
                format!("ell({pr}) changes from {} to {}", dp.ell, dq.ell),
            );
        }
        if !dp.rho.is_prefix_of(&dq.rho) {
            return fail(
                OrderClause::Pairs,
                format!("rho({pr}) = {} does not extend {}", dq.rho, dp.rho),
            );
        }
    }
    None
}
