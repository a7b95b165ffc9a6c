//! Built-in systems with the values an analysis is expected to reproduce.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use selfsim_core::{Ifs64, Outcome, Similitude64};

use crate::report::Report;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Stated in the literature for this system.
    Published,
    /// Immediate from the definition.
    Elementary,
    /// Computed by an independent method (closed forms, box counts).
    Computed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Alpha,
    Dim4Lower,
    Dim4Upper,
    BoxSlope,
    /// Every examined level.
    IrreducibleLevels,
    Lsp,
    Tiling,
    FiniteOverlap,
    Osc,
    Sosc,
    Wosc,
    H4Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Number(f64),
    Outcome(Outcome),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub quantity: Quantity,
    pub value: Value,
    /// Absolute tolerance; zero for outcomes.
    pub tolerance: f64,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub ifs: Ifs64,
    pub expected: Vec<Expected>,
}

pub const NAMES: [&str; 7] =
    ["bisection", "cantor", "gasket", "squares", "duplicate_cantor", "mattila", "mattila_proj:<θ>"];

/// Generic projection angle used by the regression suite.
pub const PROJECTION_ANGLE: f64 = 0.7;

const MATTILA_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.28867513459481287]];

fn num(quantity: Quantity, value: f64, tolerance: f64, source: Source) -> Expected {
    Expected { quantity, value: Value::Number(value), tolerance, source }
}

fn outcome(quantity: Quantity, o: Outcome, source: Source) -> Expected {
    Expected { quantity, value: Value::Outcome(o), tolerance: 0.0, source }
}

fn homotheties(label: &str, c: f64, shifts: &[&[f64]]) -> Ifs64 {
    let maps = shifts.iter().map(|t| Similitude64::homothety(c, t.to_vec())).collect();
    Ifs64::new(label, maps).expect("corpus systems are valid")
}

pub fn mattila_ifs() -> Ifs64 {
    let shifts: Vec<Vec<f64>> = MATTILA_VERTICES.iter().map(|p| vec![2.0 / 3.0 * p[0], 2.0 / 3.0 * p[1]]).collect();
    let maps = shifts.into_iter().map(|t| Similitude64::homothety(1.0 / 3.0, t)).collect();
    Ifs64::new("mattila", maps).expect("corpus systems are valid")
}

/// Image of a planar system of homotheties under `x ↦ ⟨x, e_θ⟩`:
/// `f_i(x) = c_i x + t_i` becomes `p ↦ c_i p + ⟨t_i, e_θ⟩`.
pub fn project(ifs: &Ifs64, theta: f64) -> Result<Ifs64, String> {
    if ifs.dim() != 2 {
        return Err(format!("projection needs a planar system, got dim {}", ifs.dim()));
    }
    let (s, c) = theta.sin_cos();
    let maps = ifs
        .maps()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if f.orthogonal() != [1.0, 0.0, 0.0, 1.0] {
                return Err(format!("map {} is not a homothety, so the projection is not self-similar", i + 1));
            }
            let t = f.translation();
            Ok(Similitude64::homothety(f.scale(), vec![t[0] * c + t[1] * s]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ifs64::new(format!("{}_proj:{theta}", ifs.label()), maps).map_err(|e| e.to_string())
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    use Outcome::*;
    use Quantity::*;
    use Source::*;
    let third = 1.0 / 3.0;
    let ln3 = 3f64.ln();
    let log32 = ln3 / LN_2;
    let log23 = LN_2 / ln3;
    let (ifs, expected) = match name {
        "bisection" => (
            homotheties("bisection", 0.5, &[&[0.0], &[0.5]]),
            vec![
                num(Alpha, 1.0, 1e-9, Elementary),
                num(Dim4Lower, 1.0, 1e-9, Computed),
                num(Dim4Upper, 1.0, 1e-9, Computed),
                num(BoxSlope, 1.0, 0.05, Computed),
                outcome(IrreducibleLevels, Holds, Computed),
                outcome(Tiling, Holds, Computed),
                outcome(Osc, Holds, Elementary),
                outcome(Wosc, Holds, Computed),
            ],
        ),
        "cantor" => (
            homotheties("cantor", third, &[&[0.0], &[2.0 / 3.0]]),
            vec![
                num(Alpha, log23, 1e-9, Computed),
                num(Dim4Lower, log23, 1e-9, Computed),
                num(Dim4Upper, log23, 1e-9, Computed),
                num(BoxSlope, log23, 0.05, Computed),
                outcome(IrreducibleLevels, Holds, Computed),
                outcome(Osc, Holds, Elementary),
                outcome(Wosc, Holds, Computed),
                outcome(H4Positive, Holds, Computed),
            ],
        ),
        "gasket" => {
            let h = 3f64.sqrt() / 4.0;
            (
                homotheties("gasket", 0.5, &[&[0.0, 0.0], &[0.5, 0.0], &[0.25, h]]),
                vec![
                    num(Alpha, log32, 1e-9, Computed),
                    num(Dim4Lower, log32, 1e-9, Computed),
                    num(Dim4Upper, log32, 1e-9, Computed),
                    num(BoxSlope, log32, 0.05, Computed),
                    outcome(IrreducibleLevels, Holds, Computed),
                    outcome(Osc, Holds, Elementary),
                    outcome(Sosc, Holds, Elementary),
                    outcome(FiniteOverlap, Holds, Computed),
                    outcome(Lsp, Holds, Computed),
                    outcome(Tiling, Holds, Computed),
                    outcome(Wosc, Holds, Computed),
                ],
            )
        }
        "squares" => (
            homotheties("squares", 0.5, &[&[0.0, 0.0], &[0.5, 0.0], &[0.0, 0.5], &[0.5, 0.5]]),
            vec![
                num(Alpha, 2.0, 1e-9, Elementary),
                num(Dim4Lower, 2.0, 1e-9, Computed),
                num(Dim4Upper, 2.0, 1e-9, Computed),
                outcome(IrreducibleLevels, Holds, Computed),
                outcome(Osc, Holds, Elementary),
                outcome(Wosc, Holds, Computed),
            ],
        ),
        "duplicate_cantor" => (
            homotheties("duplicate_cantor", third, &[&[0.0], &[0.0], &[2.0 / 3.0]]),
            vec![
                num(Alpha, 1.0, 1e-9, Elementary),
                num(Dim4Upper, log23, 1e-9, Computed),
                outcome(IrreducibleLevels, Fails, Elementary),
                outcome(Lsp, Fails, Computed),
                outcome(Tiling, Fails, Computed),
                outcome(Osc, Fails, Elementary),
                outcome(Wosc, Fails, Computed),
                outcome(H4Positive, Fails, Computed),
            ],
        ),
        "mattila" => (
            mattila_ifs(),
            vec![
                num(Alpha, 1.0, 1e-9, Published),
                num(Dim4Lower, 1.0, 1e-9, Computed),
                num(Dim4Upper, 1.0, 1e-9, Computed),
                outcome(IrreducibleLevels, Holds, Computed),
                outcome(Osc, Holds, Published),
                outcome(Sosc, Holds, Published),
                outcome(Wosc, Holds, Computed),
            ],
        ),
        _ => {
            let theta: f64 = name.strip_prefix("mattila_proj:")?.parse().ok()?;
            let ifs = project(&mattila_ifs(), theta).ok()?;
            let mut expected = vec![num(Alpha, 1.0, 1e-9, Published)];
            if theta == PROJECTION_ANGLE {
                expected.extend([
                    num(BoxSlope, 1.0, 0.15, Published),
                    outcome(Osc, Inconclusive, Computed),
                    outcome(Wosc, Inconclusive, Computed),
                ]);
            }
            (ifs, expected)
        }
    };
    Some(CorpusEntry { name: name.to_string(), ifs, expected })
}

/// Every entry, with the projection at the regression angle.
pub fn all_entries() -> Vec<CorpusEntry> {
    let mut names: Vec<String> = NAMES[..6].iter().map(|s| s.to_string()).collect();
    names.push(format!("mattila_proj:{PROJECTION_ANGLE}"));
    names.iter().map(|n| entry(n).expect("built-in name")).collect()
}

/// Value of `q` in a report, when the report contains it.
pub fn observed(report: &Report, q: Quantity) -> Option<Value> {
    let d = &report.dimensions;
    let sep = report.separation.as_ref();
    let claim = |c: selfsim_core::Claim| match c {
        selfsim_core::Claim::Holds { .. } => Outcome::Holds,
        selfsim_core::Claim::Fails { .. } => Outcome::Fails,
        selfsim_core::Claim::Inconclusive => Outcome::Inconclusive,
    };
    Some(match q {
        Quantity::Alpha => Value::Number(d.alpha),
        Quantity::Dim4Lower => Value::Number(d.dim4.as_ref()?.lower),
        Quantity::Dim4Upper => Value::Number(d.dim4.as_ref()?.upper),
        Quantity::BoxSlope => Value::Number(d.box_estimate.as_ref()?.slope),
        Quantity::H4Positive => Value::Outcome(d.h4_alpha.as_ref()?.positive.outcome),
        Quantity::IrreducibleLevels => {
            let levels = &sep?.irreducible;
            let o = if levels.iter().all(|v| v.is_holds()) {
                Outcome::Holds
            } else if levels.iter().any(|v| v.is_fails()) {
                Outcome::Fails
            } else {
                Outcome::Inconclusive
            };
            Value::Outcome(o)
        }
        Quantity::Lsp => Value::Outcome(claim(sep?.claims.lsp)),
        Quantity::Tiling => Value::Outcome(claim(sep?.claims.tiling)),
        Quantity::FiniteOverlap => Value::Outcome(claim(sep?.claims.finite_overlaps)),
        Quantity::Osc => Value::Outcome(sep?.osc.outcome),
        Quantity::Sosc => Value::Outcome(sep?.sosc.outcome),
        Quantity::Wosc => Value::Outcome(sep?.wosc.outcome),
    })
}

/// Expectations of `entry` that `report` does not meet.
pub fn mismatches(entry: &CorpusEntry, report: &Report) -> Vec<String> {
    entry
        .expected
        .iter()
        .filter_map(|e| {
            let got = observed(report, e.quantity);
            let ok = match (e.value, got) {
                (Value::Number(want), Some(Value::Number(v))) => (v - want).abs() <= e.tolerance,
                (Value::Outcome(want), Some(Value::Outcome(o))) => o == want,
                _ => false,
            };
            (!ok).then(|| {
                format!("{} {:?}: expected {:?} ± {}, got {:?}", entry.name, e.quantity, e.value, e.tolerance, got)
            })
        })
        .collect()
}
