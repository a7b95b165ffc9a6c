//! Analysis runs and the JSON report they produce.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use selfsim_core::dimensions::{Dim3Verification, Dim4Bounds};
use selfsim_core::separation::OrderBound;
use selfsim_core::{
    separation_report, Attractor64, BoxEstimate, Claim, Claims, Config64, ConsistencyEntry, Ifs64, Oracle, Outcome,
    Result, SeparationReport64, Verdict64,
};

use crate::ifs_file::IfsFile;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Irreducible,
    Lsp,
    Tiling,
    Osc,
    Sosc,
    Wosc,
    Overlaps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DimSelection {
    Sim,
    Dim3,
    Dim4,
    Box,
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub check: Option<Check>,
    pub dim: Option<DimSelection>,
    /// Outcome of the requested check.
    pub outcome: Option<Outcome>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Input {
    /// `corpus:<name>` or the path of the IFS file.
    pub source: String,
    pub label: String,
    pub dim: usize,
    pub k: usize,
    pub ratios: Vec<f64>,
    pub ifs: IfsFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dim3Section {
    pub value: f64,
    pub verification: Dim3Verification<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct H4Section {
    pub upper: f64,
    pub positive: Verdict64,
    /// Minimum α-weight of a cover drawn from level `m`, `m = 1, 2, ...`.
    pub level_weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dimensions {
    pub alpha: f64,
    pub alpha_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim3: Option<Dim3Section>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim4: Option<Dim4Bounds<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h4_alpha: Option<H4Section>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_estimate: Option<BoxEstimate<f64>>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub levels: usize,
    pub irreducible: Vec<Verdict64>,
    pub lsp1: Vec<Verdict64>,
    pub lsp2: Vec<Verdict64>,
    pub tiling: Vec<Verdict64>,
    pub finite_overlap: Vec<Verdict64>,
    pub ssc: Verdict64,
    pub osc: Verdict64,
    pub sosc: Verdict64,
    pub wosc: Verdict64,
    pub order: Option<OrderBound<f64>>,
    pub claims: Claims,
    pub propagation: Vec<String>,
    pub consistency: Vec<ConsistencyEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    /// The only field that differs between identical runs.
    pub timestamp: String,
    pub input: Input,
    pub config: Config64,
    pub request: Request,
    pub dimensions: Dimensions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<Separation>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }
}

fn outcome_of_claim(c: Claim) -> Outcome {
    match c {
        Claim::Holds { .. } => Outcome::Holds,
        Claim::Fails { .. } => Outcome::Fails,
        Claim::Inconclusive => Outcome::Inconclusive,
    }
}

/// Outcome of a requested property. Level-wise properties use the combined
/// claim over all examined levels.
pub fn check_outcome(sep: &SeparationReport64, check: Check) -> Outcome {
    match check {
        Check::Irreducible => outcome_of_claim(sep.claims.irreducible),
        Check::Lsp => outcome_of_claim(sep.claims.lsp),
        Check::Tiling => outcome_of_claim(sep.claims.tiling),
        Check::Overlaps => outcome_of_claim(sep.claims.finite_overlaps),
        Check::Osc => sep.osc.outcome,
        Check::Sosc => sep.sosc.outcome,
        Check::Wosc => sep.wosc.outcome,
    }
}

pub struct Analysis {
    pub source: String,
    pub ifs: Ifs64,
    pub config: Config64,
    pub check: Option<Check>,
    pub dim: Option<DimSelection>,
}

/// Everything is computed every time; the request only decides which parts
/// are written out. Without `--check`, a `--dim` request drops the
/// separation section.
pub fn run_analysis(a: &Analysis) -> Result<Report> {
    let att = Attractor64::new(a.ifs.clone())?;
    let oracle = Oracle::new(&att, &a.config);
    let sep = separation_report(&oracle, &a.config)?;
    Ok(assemble(a, sep))
}

fn assemble(a: &Analysis, sep: SeparationReport64) -> Report {
    let sel = a.dim.unwrap_or(DimSelection::All);
    let want = |s: DimSelection| sel == DimSelection::All || sel == s;
    let d = &sep.dimensions;
    let dimensions = Dimensions {
        alpha: d.alpha,
        alpha_tol: d.alpha_tol,
        dim3: want(DimSelection::Dim3)
            .then(|| Dim3Section { value: d.dim3, verification: d.dim3_verification.clone() }),
        dim4: want(DimSelection::Dim4).then(|| d.dim4.clone()),
        h4_alpha: want(DimSelection::Dim4).then(|| H4Section {
            upper: d.h4_alpha_upper,
            positive: d.h4_alpha_positive.clone(),
            level_weights: d.h4_level_weights.clone(),
        }),
        box_estimate: if want(DimSelection::Box) { d.box_estimate.clone() } else { None },
        notes: d.notes.clone(),
    };
    let outcome = a.check.map(|c| check_outcome(&sep, c));
    let separation = (a.check.is_some() || a.dim.is_none()).then_some(Separation {
        levels: sep.levels,
        irreducible: sep.irreducible,
        lsp1: sep.lsp1,
        lsp2: sep.lsp2,
        tiling: sep.tiling,
        finite_overlap: sep.finite_overlap,
        ssc: sep.ssc,
        osc: sep.osc,
        sosc: sep.sosc,
        wosc: sep.wosc,
        order: sep.order,
        claims: sep.claims,
        propagation: sep.propagation,
        consistency: sep.consistency,
    });
    Report {
        schema_version: SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        input: Input {
            source: a.source.clone(),
            label: a.ifs.label().to_string(),
            dim: a.ifs.dim(),
            k: a.ifs.k(),
            ratios: a.ifs.ratios(),
            ifs: IfsFile::from_ifs(&a.ifs),
        },
        config: a.config.clone(),
        request: Request { check: a.check, dim: a.dim, outcome },
        dimensions,
        separation,
    }
}
