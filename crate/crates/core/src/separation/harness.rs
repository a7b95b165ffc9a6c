//! Cross-checks between decided properties. A property that holds through
//! level `n` contradicts a failure at level `≤ n` of anything it implies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verdict::Claim;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Consistent,
    Violated,
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyEntry {
    pub implication: String,
    pub status: Status,
    pub left: Claim,
    pub right: Claim,
}

/// Everything the harness reasons about, one claim per property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claims {
    /// Level-one pieces pairwise disjoint.
    pub ssc: Claim,
    pub osc: Claim,
    pub sosc: Claim,
    pub hausdorff_positive: Claim,
    pub dim_h_equals_alpha: Claim,
    /// Irreducibility from the level checks alone.
    pub irreducible_levels: Claim,
    /// Irreducibility after propagation from the open set condition.
    pub irreducible: Claim,
    pub lsp: Claim,
    pub tiling: Claim,
    pub finite_overlaps: Claim,
    pub dim4_equals_alpha: Claim,
    pub h4_positive: Claim,
    pub bounded_neighbours: Claim,
    pub finite_order: Claim,
    pub wosc: Claim,
}

fn covers(through: Option<usize>, level: Option<usize>) -> bool {
    match (through, level) {
        (None, _) => true,
        (Some(n), Some(l)) => l <= n,
        (Some(_), None) => false,
    }
}

/// Status of `left ⇒ right`.
pub fn implication_status(left: Claim, right: Claim) -> Status {
    match (left, right) {
        (Claim::Holds { .. }, Claim::Holds { .. }) | (Claim::Fails { .. }, Claim::Fails { .. }) => Status::Consistent,
        (Claim::Holds { through }, Claim::Fails { level }) if covers(through, level) => Status::Violated,
        _ => Status::Vacuous,
    }
}

/// Status of `left ⇔ right`.
pub fn equivalence_status(left: Claim, right: Claim) -> Status {
    let (a, b) = (implication_status(left, right), implication_status(right, left));
    if a == Status::Violated || b == Status::Violated {
        Status::Violated
    } else if a == Status::Consistent && b == Status::Consistent {
        Status::Consistent
    } else {
        Status::Vacuous
    }
}

pub fn consistency_harness(c: &Claims) -> Vec<ConsistencyEntry> {
    let imp = |name: &str, l: Claim, r: Claim| ConsistencyEntry {
        implication: name.to_string(),
        status: implication_status(l, r),
        left: l,
        right: r,
    };
    let eqv = |name: &str, l: Claim, r: Claim| ConsistencyEntry {
        implication: name.to_string(),
        status: equivalence_status(l, r),
        left: l,
        right: r,
    };
    vec![
        imp("H_H^α(K) > 0 ⇒ SOSC", c.hausdorff_positive, c.sosc),
        imp("SOSC ⇒ dim_H(K) = α", c.sosc, c.dim_h_equals_alpha),
        imp("dim_H(K) = α ⇒ WOSC", c.dim_h_equals_alpha, c.wosc),
        eqv("WOSC ⇔ H_4^α(K) > 0", c.wosc, c.h4_positive),
        eqv("H_4^α(K) > 0 ⇔ dim_4(K) = α", c.h4_positive, c.dim4_equals_alpha),
        imp("bounded neighbours ⇒ finite order", c.bounded_neighbours, c.finite_order),
        imp("finite order ⇒ irreducible", c.finite_order, c.irreducible_levels),
        imp("OSC ⇒ finite order", c.osc, c.finite_order),
        imp("OSC ⇒ irreducible", c.osc, c.irreducible_levels),
        imp("finite overlaps ⇒ LSP", c.finite_overlaps, c.lsp),
        eqv("irreducible ⇔ LSP", c.irreducible_levels, c.lsp),
        eqv("irreducible ⇔ tiling", c.irreducible_levels, c.tiling),
        eqv("LSP ⇔ tiling", c.lsp, c.tiling),
        eqv("dim_4(K) = α ⇔ irreducible", c.dim4_equals_alpha, c.irreducible_levels),
        eqv("irreducible ⇔ H_4^α(K) > 0", c.irreducible_levels, c.h4_positive),
    ]
}

/// Turns any violated entry into an error carrying the whole table.
pub fn check_consistency(entries: &[ConsistencyEntry]) -> Result<()> {
    if entries.iter().all(|e| e.status != Status::Violated) {
        return Ok(());
    }
    let dump: Vec<String> =
        entries.iter().map(|e| format!("{:?}: {} ({:?} vs {:?})", e.status, e.implication, e.left, e.right)).collect();
    Err(Error::ConsistencyViolation(dump.join("; ")))
}
