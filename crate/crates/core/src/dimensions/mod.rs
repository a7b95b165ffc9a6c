//! Similarity dimension, fractal dimensions III and IV of `K` with respect to
//! its natural structure, bounds for `H_4^α(K)` and a box-counting estimate.

mod boxcount;
pub mod cover;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use boxcount::{
    attractor_sample, box_dimension_estimate, box_estimate_auto, default_sample_depth, default_scales, BoxEstimate,
};

use crate::attractor::{Attractor, Piece};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg;
use crate::oracle::{balls_meet, Oracle};
use crate::scalar::Real;
use crate::verdict::{Certificate, Claim, Resolution, Verdict, Witness};
use crate::words::{self, is_prefix, Word};
use cover::{Bits, CoverInstance};

/// Largest level used as a single-level cover instance.
pub const LEVEL_COVER_CAP: usize = 1024;

/// Root of `Σ c_i^s = 1` by bisection on the decreasing map `s ↦ Σ c_i^s`.
pub fn similarity_dimension<T: Real>(ratios: &[T], tol: T) -> Result<T> {
    if ratios.len() < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 ratios, got {}", ratios.len())));
    }
    if let Some(c) = ratios.iter().find(|&&c| !(c > T::zero() && c < T::one())) {
        return Err(Error::InvalidArgument(format!("ratio out of (0,1): {c}")));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let sum = |s: T| ratios.iter().fold(T::zero(), |acc, &c| acc + c.powf(s));
    let (mut lo, mut hi) = (T::zero(), T::one());
    while sum(hi) >= T::one() {
        lo = hi;
        hi = hi + hi;
    }
    for _ in 0..400 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum(mid) >= T::one() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = if (sum(lo) - T::one()).abs() <= (sum(hi) - T::one()).abs() { lo } else { hi };
    if (sum(alpha) - T::one()).abs() > tol {
        return Err(Error::InvalidArgument(format!("bisection did not reach tolerance {tol}")));
    }
    Ok(alpha)
}

/// `Σ_{|w|=n} diam(K_w)^s = diam(K)^s · (Σ c_i^s)^n`.
pub fn h3_level_sum<T: Real>(att: &Attractor<T>, s: T, n: usize) -> T {
    let base = att.ifs().ratios().iter().fold(T::zero(), |acc, &c| acc + c.powf(s));
    att.diam_upper().powf(s) * base.powi(n.min(i32::MAX as usize) as i32)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RegimeCheck<T> {
    pub s: T,
    pub first: T,
    pub last: T,
    /// Last level examined; for the divergent regimes, where the threshold
    /// was first crossed.
    pub last_level: usize,
    pub monotone: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Dim3Verification<T> {
    pub alpha: T,
    pub spread: T,
    pub levels: usize,
    pub below: RegimeCheck<T>,
    pub at: RegimeCheck<T>,
    /// Largest relative deviation of the level sums at `s = α`.
    pub at_deviation: T,
    pub above: RegimeCheck<T>,
    pub passed: bool,
}

const DIVERGENCE_FACTOR: f64 = 10.0;
const MAX_REGIME_LEVELS: usize = 100_000;

/// Checks the three regimes of the level sums: growth by at least 10× at
/// `α − spread`, decay below 0.1× at `α + spread`, and constancy to 1e-9 at
/// `α` over levels `1..=levels`. The divergent regimes keep going past
/// `levels` until the factor is reached.
pub fn verify_dim3<T: Real>(att: &Attractor<T>, alpha: T, spread: T, levels: usize) -> Dim3Verification<T> {
    let levels = levels.max(1);
    let sums_at: Vec<T> = (1..=levels).map(|n| h3_level_sum(att, alpha, n)).collect();
    let first = sums_at[0];
    let at_deviation = sums_at.iter().fold(T::zero(), |m, &v| m.max(((v - first) / first).abs()));
    let at = RegimeCheck {
        s: alpha,
        first,
        last: sums_at[levels - 1],
        last_level: levels,
        monotone: true,
        passed: at_deviation <= T::map_tol(),
    };
    let factor = T::lit(DIVERGENCE_FACTOR);
    let below = divergent_regime(att, alpha - spread, levels, |first, v| v >= first * factor, |a, b| b > a);
    let above = divergent_regime(att, alpha + spread, levels, |first, v| v <= first / factor, |a, b| b < a);
    let passed = below.passed && at.passed && above.passed;
    Dim3Verification { alpha, spread, levels, below, at, at_deviation, above, passed }
}

fn divergent_regime<T: Real>(
    att: &Attractor<T>,
    s: T,
    levels: usize,
    reached: impl Fn(T, T) -> bool,
    step_ok: impl Fn(T, T) -> bool,
) -> RegimeCheck<T> {
    let first = h3_level_sum(att, s, 1);
    let mut prev = first;
    let mut monotone = true;
    let mut n = 1;
    while n < MAX_REGIME_LEVELS {
        n += 1;
        let v = h3_level_sum(att, s, n);
        monotone &= step_ok(prev, v);
        prev = v;
        if n >= levels && reached(first, v) {
            break;
        }
    }
    RegimeCheck { s, first, last: prev, last_level: n, monotone, passed: monotone && reached(first, prev) }
}

// ----- finite subcovers ----------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SubcoverResult<T> {
    pub s: T,
    /// Candidates were drawn from levels `min_level..=max_level`.
    pub min_level: usize,
    pub max_level: usize,
    pub weight: T,
    pub cover: Vec<Word>,
    pub nodes: usize,
    pub budget_exhausted: bool,
}

/// Minimum of `Σ diam(A)^s` over families drawn from levels `1..=max_level`
/// that cover `K`. A family covers when every level-`max_level` piece lies
/// inside one of its members by a word match.
pub fn min_subcover_weight<T: Real>(
    oracle: &Oracle<T>,
    s: T,
    max_level: usize,
    budget: usize,
) -> Result<SubcoverResult<T>> {
    subcover_between(oracle, s, 1, max_level, budget)
}

/// As [`min_subcover_weight`] with candidates from the single level `n`.
pub fn level_subcover<T: Real>(oracle: &Oracle<T>, s: T, n: usize, budget: usize) -> Result<SubcoverResult<T>> {
    subcover_between(oracle, s, n, n, budget)
}

fn subcover_between<T: Real>(
    oracle: &Oracle<T>,
    s: T,
    min_level: usize,
    max_level: usize,
    budget: usize,
) -> Result<SubcoverResult<T>> {
    let att = oracle.attractor();
    if min_level == 0 || min_level > max_level {
        return Err(Error::InvalidArgument(format!("bad level range {min_level}..={max_level}")));
    }
    let universe = att.build_level(max_level, budget)?.pieces;
    let mut candidates: Vec<Piece<T>> = vec![];
    for l in min_level..max_level {
        candidates.extend(att.build_level(l, budget)?.pieces);
    }
    candidates.extend(universe.iter().cloned());
    if candidates.len() > budget {
        return Err(Error::BudgetExceeded { requested: candidates.len() as u128, budget });
    }
    let sets: Vec<Bits> = candidates.par_iter().map(|a| contained_pieces(oracle, a, &universe)).collect();
    let mut inst = CoverInstance::new(universe.len());
    for (a, set) in candidates.iter().zip(sets) {
        inst.add(set, a.diameter.powf(s).to_f64_lossy());
    }
    let sol =
        inst.solve(budget).ok_or_else(|| Error::ConsistencyViolation("a level does not cover the attractor".into()))?;
    let weight = sol.chosen.iter().fold(T::zero(), |acc, &i| acc + candidates[i].diameter.powf(s));
    Ok(SubcoverResult {
        s,
        min_level,
        max_level,
        weight,
        cover: sol.chosen.iter().map(|&i| candidates[i].word.clone()).collect(),
        nodes: sol.nodes,
        budget_exhausted: sol.budget_exhausted,
    })
}

/// Universe pieces certified inside `a`: descendants, and pieces matched by
/// a word `f_a⁻¹ ∘ f_P = f_w`.
fn contained_pieces<T: Real>(oracle: &Oracle<T>, a: &Piece<T>, universe: &[Piece<T>]) -> Bits {
    let att = oracle.attractor();
    let mut set = Bits::new(universe.len());
    for (j, p) in universe.iter().enumerate() {
        if is_prefix(&a.word, &p.word) {
            set.insert(j);
            continue;
        }
        if p.ratio > a.ratio * (T::one() + T::map_tol()) || !balls_meet(p, a, oracle.margin()) {
            continue;
        }
        let inside_ball =
            att.representatives(p).iter().all(|x| linalg::dist(x, &a.center) <= a.radius + oracle.margin());
        if inside_ball && oracle.subset_word(p, a).is_some() {
            set.insert(j);
        }
    }
    set
}

// ----- dimension IV and H_4^α ---------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ProperSubcover<T> {
    pub level: usize,
    pub words: Vec<Word>,
    /// Root `t` of `Σ_{w ∈ J} c_w^t = 1`.
    pub root: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Dim4Bounds<T> {
    pub lower: T,
    pub upper: T,
    pub lower_provenance: String,
    pub upper_provenance: String,
    /// False when the lower bound comes from the box-counting fit.
    pub lower_rigorous: bool,
    pub subcover: Option<ProperSubcover<T>>,
    pub levels_searched: usize,
}

/// Levels `1..=max_level` small enough for a single-level cover instance.
fn searchable_levels(k: usize, max_level: usize, budget: usize) -> usize {
    (1..=max_level)
        .take_while(|&n| words::level_size(k, n).is_some_and(|s| s <= LEVEL_COVER_CAP.min(budget) as u128))
        .last()
        .unwrap_or(0)
}

/// The proper subcover of `Γ_n` with the smallest root `t`, found by
/// re-solving the weighted cover at the root of the previous optimum.
pub fn best_proper_subcover<T: Real>(
    oracle: &Oracle<T>,
    alpha: T,
    n: usize,
    budget: usize,
) -> Result<Option<ProperSubcover<T>>> {
    let att = oracle.attractor();
    let full = att.diam_upper().powf(alpha);
    let mut sol = level_subcover(oracle, alpha, n, budget)?;
    if sol.weight >= full * (T::one() - T::map_tol()) {
        return Ok(None);
    }
    let mut best = ProperSubcover { level: n, root: subcover_root(att, &sol.cover)?, words: sol.cover };
    for _ in 0..16 {
        sol = level_subcover(oracle, best.root, n, budget)?;
        let sum = sol.cover.iter().fold(T::zero(), |acc, w| acc + att.ifs().ratio_of(w).powf(best.root));
        if sum >= T::one() - T::exact_tol() {
            break;
        }
        best = ProperSubcover { level: n, root: subcover_root(att, &sol.cover)?, words: sol.cover };
    }
    Ok(Some(best))
}

fn subcover_root<T: Real>(att: &Attractor<T>, cover: &[Word]) -> Result<T> {
    let ratios: Vec<T> = cover.iter().map(|w| att.ifs().ratio_of(w)).collect();
    if ratios.len() < 2 {
        return Ok(T::zero());
    }
    similarity_dimension(&ratios, T::exact_tol())
}

/// `lower` is `α` when irreducibility is certified, otherwise the box fit
/// (heuristic). `upper` is the smallest root over proper subcovers found at
/// levels `1..=max_level`, or `α`.
pub fn dim4_bounds<T: Real>(
    oracle: &Oracle<T>,
    alpha: T,
    irreducibility: Claim,
    box_estimate: Option<&BoxEstimate<T>>,
    max_level: usize,
    budget: usize,
) -> Result<Dim4Bounds<T>> {
    let levels = searchable_levels(oracle.attractor().k(), max_level, budget);
    let mut subcover: Option<ProperSubcover<T>> = None;
    for n in 1..=levels {
        if let Some(found) = best_proper_subcover(oracle, alpha, n, budget)? {
            if subcover.as_ref().is_none_or(|b| found.root < b.root) {
                subcover = Some(found);
            }
        }
    }
    let (upper, upper_provenance) = match &subcover {
        Some(j) => (j.root, format!("root of the proper subcover at level {} ({} pieces)", j.level, j.words.len())),
        None => (alpha, format!("no proper subcover at levels 1..={levels}; similarity dimension")),
    };
    let (lower, lower_provenance, lower_rigorous) = match (irreducibility, box_estimate) {
        (Claim::Holds { through: None }, _) => (alpha, "irreducibility certified for all levels".to_string(), true),
        (Claim::Holds { through: Some(n) }, _) => {
            (alpha, format!("irreducibility certified through level {n} (finite evidence)"), true)
        }
        (_, Some(est)) => {
            (est.lower().max(T::zero()), "box-counting fit, slope minus its error (heuristic)".to_string(), false)
        }
        (_, None) => (T::zero(), "trivial".to_string(), true),
    };
    let mut bounds = Dim4Bounds {
        lower,
        upper,
        lower_provenance,
        upper_provenance,
        lower_rigorous,
        subcover,
        levels_searched: levels,
    };
    if bounds.lower > bounds.upper {
        bounds.lower = bounds.upper;
        bounds.lower_provenance.push_str("; clamped to the upper bound");
    }
    Ok(bounds)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct H4Bounds<T> {
    pub upper: T,
    pub positive: Verdict<T>,
    /// Minimum α-weight of a cover drawn from level `m`, for `m = 1, 2, ...`.
    pub level_weights: Vec<T>,
    pub cover: SubcoverResult<T>,
}

/// `upper` is the minimum α-weight over covers from levels up to the cover
/// horizon. Positivity holds with certified irreducibility and fails when
/// some level has a cover lighter than `diam(K)^α`, since iterating that
/// subcover drives the weights to zero.
pub fn h4_alpha_bounds<T: Real>(
    oracle: &Oracle<T>,
    alpha: T,
    irreducibility: Claim,
    horizon: usize,
    budget: usize,
) -> Result<H4Bounds<T>> {
    let att = oracle.attractor();
    let levels = searchable_levels(att.k(), horizon, budget);
    let horizon = levels.max(1);
    let cover = min_subcover_weight(oracle, alpha, horizon, budget)?;
    let mut level_weights = vec![];
    for m in 1..=levels {
        level_weights.push(level_subcover(oracle, alpha, m, budget)?.weight);
    }
    let full = att.diam_upper().powf(alpha);
    let upper = level_weights.iter().fold(cover.weight, |m, &w| m.min(w));
    let res = Resolution::new(horizon, oracle.eps());
    let lighter = level_weights.iter().position(|&w| w < full * (T::one() - T::map_tol()));
    let positive = match (irreducibility, lighter) {
        (_, Some(m)) => Verdict::fails(Witness::ShrinkingSubcovers { weights: level_weights.clone() }, res)
            .with_note(format!("a proper subcover at level {} has α-weight below diam(K)^α", m + 1)),
        (Claim::Holds { through: None }, None) => Verdict::holds(
            Certificate::Implication {
                rule: "irreducible implies H_4^α(K) > 0".into(),
                premises: vec!["irreducibility certified for all levels".into()],
            },
            res,
        ),
        (Claim::Holds { through: Some(n) }, None) => Verdict::inconclusive(res)
            .with_note(format!("irreducible through level {n} only; positivity expected, not certified")),
        _ => Verdict::inconclusive(res),
    };
    Ok(H4Bounds { upper, positive, level_weights, cover })
}

// ----- report ----------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DimensionReport<T> {
    pub alpha: T,
    pub alpha_tol: T,
    pub dim3: T,
    pub dim3_verification: Dim3Verification<T>,
    pub dim4: Dim4Bounds<T>,
    pub h4_alpha_upper: T,
    pub h4_alpha_positive: Verdict<T>,
    pub h4_level_weights: Vec<T>,
    pub box_estimate: Option<BoxEstimate<T>>,
    pub notes: Vec<String>,
}

pub const DIM3_SPREAD: f64 = 0.05;
pub const DIM3_LEVELS: usize = 40;
const BOX_POINTS: usize = 1 << 19;

pub fn dimension_report<T: Real>(
    oracle: &Oracle<T>,
    config: &Config<T>,
    irreducibility: Claim,
) -> Result<DimensionReport<T>> {
    let att = oracle.attractor();
    let alpha_tol = T::exact_tol();
    let alpha = similarity_dimension(&att.ifs().ratios(), alpha_tol)?;
    let dim3_verification = verify_dim3(att, alpha, T::lit(DIM3_SPREAD), DIM3_LEVELS);
    let mut notes = vec![];
    let box_estimate =
        match box_estimate_auto(att, BOX_POINTS.min(config.budget.max(1 << 12)), config.budget.max(1 << 12)) {
            Ok(est) => Some(est),
            Err(e) => {
                notes.push(format!("box-counting estimate unavailable: {e}"));
                None
            }
        };
    let dim4 = dim4_bounds(oracle, alpha, irreducibility, box_estimate.as_ref(), config.levels, config.budget)?;
    let h4 = h4_alpha_bounds(oracle, alpha, irreducibility, config.cover_horizon, config.budget)?;
    notes.push("dim3 equals α for the natural structure; the level sums are closed-form".into());
    Ok(DimensionReport {
        alpha,
        alpha_tol,
        dim3: alpha,
        dim3_verification,
        dim4,
        h4_alpha_upper: h4.upper,
        h4_alpha_positive: h4.positive,
        h4_level_weights: h4.level_weights,
        box_estimate,
        notes,
    })
}
