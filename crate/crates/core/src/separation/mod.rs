//! Three-valued decisions for the separation properties of the natural
//! structure: irreducibility, the level separation property (disjoint and
//! nonempty interiors in `K`), tiling, finite overlaps, the open set
//! conditions and the order. Interiors are always taken in `K`.

pub mod harness;
mod osc;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use harness::{
    check_consistency, consistency_harness, equivalence_status, implication_status, Claims, ConsistencyEntry, Status,
};
pub use osc::{builtin_candidates, osc_certificate_search, sosc_check, ConvexCandidate, OscSearch};

use crate::attractor::Piece;
use crate::config::Config;
use crate::dimensions::{dimension_report, DimensionReport};
use crate::error::{Error, Result};
use crate::oracle::{ball_lower, balls_meet, Oracle, Proximity};
use crate::scalar::Real;
use crate::verdict::{Certificate, Claim, ExposedPoint, Resolution, Verdict, Witness};
use crate::words::Word;

/// Relative depth of the search for exposed points.
const EXPOSURE_DEPTH: usize = 8;
/// Relative depth of the search for a common sub-piece.
const COMMON_SUB_DEPTH: usize = 2;
/// The order bound is computed on levels up to this one.
const ORDER_LEVELS: usize = 3;

/// The first pair `(i, j)`, `i < j`, of pieces with equal maps.
fn duplicate_pair<T: Real>(pieces: &[Piece<T>], tol: T) -> Option<(usize, usize)> {
    let quant = |v: T| (v.to_f64_lossy() / tol.to_f64_lossy()).round() as i64;
    let mut seen: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (j, p) in pieces.iter().enumerate() {
        let mut key = vec![quant(p.map.scale())];
        key.extend(p.map.orthogonal().iter().map(|&v| quant(v)));
        key.extend(p.map.translation().iter().map(|&v| quant(v)));
        let bucket = seen.entry(key).or_default();
        if let Some(&i) = bucket.iter().find(|&&i| pieces[i].map.approx_eq(&p.map, tol)) {
            return Some((i, j));
        }
        bucket.push(j);
    }
    None
}

/// Pieces other than `pieces[i]` whose balls meet its ball.
fn neighbours<T: Real>(oracle: &Oracle<T>, pieces: &[Piece<T>], i: usize) -> Vec<Piece<T>> {
    pieces
        .iter()
        .enumerate()
        .filter(|&(j, b)| j != i && balls_meet(&pieces[i], b, oracle.margin()))
        .map(|(_, b)| b.clone())
        .collect()
}

/// Certified distance from `x` to the pieces not among the neighbours of `i`.
fn far_lower<T: Real>(oracle: &Oracle<T>, pieces: &[Piece<T>], i: usize, x: &[T]) -> T {
    pieces
        .iter()
        .enumerate()
        .filter(|&(j, b)| j != i && !balls_meet(&pieces[i], b, oracle.margin()))
        .map(|(_, b)| ball_lower(x, b))
        .fold(T::infinity(), T::min)
}

fn merge_resolution<T: Real>(res: &mut Resolution<T>, v: &Verdict<T>) {
    res.nodes += v.resolution.nodes;
    res.budget_exhausted |= v.resolution.budget_exhausted;
}

// ----- irreducibility ------------------------------------------------------

/// Irreducibility of `Γ_n`: no piece is covered by the others.
pub fn level_irreducible<T: Real>(oracle: &Oracle<T>, n: usize, budget: usize) -> Result<Verdict<T>> {
    let level = oracle.attractor().build_level(n, budget)?;
    Ok(irreducible_on(oracle, n, &level.pieces))
}

fn irreducible_on<T: Real>(oracle: &Oracle<T>, n: usize, pieces: &[Piece<T>]) -> Verdict<T> {
    let mut res = oracle.resolution();
    if let Some((i, j)) = duplicate_pair(pieces, T::map_tol()) {
        let w = Witness::DuplicatePieces { piece: pieces[j].word.clone(), duplicate_of: pieces[i].word.clone() };
        return Verdict::fails(w, res).with_note("equal maps give equal pieces");
    }
    let verdicts: Vec<Verdict<T>> = (0..pieces.len())
        .into_par_iter()
        .map(|i| oracle.covered_by(&pieces[i], &neighbours(oracle, pieces, i), oracle.eps(), oracle.depth()))
        .collect();
    verdicts.iter().for_each(|v| merge_resolution(&mut res, v));
    if let Some((i, v)) = verdicts.iter().enumerate().find(|(_, v)| v.is_holds()) {
        let assignment = match &v.certificate {
            Some(Certificate::Covering { assignment }) => assignment.clone(),
            _ => vec![],
        };
        return Verdict::fails(Witness::Reducible { level: n, piece: pieces[i].word.clone(), assignment }, res);
    }
    let mut points = vec![];
    for (i, v) in verdicts.iter().enumerate() {
        match &v.witness {
            Some(Witness::Point { point, distance_lower, .. }) if v.is_fails() => points.push(ExposedPoint {
                piece: pieces[i].word.clone(),
                distance_lower: distance_lower.min(far_lower(oracle, pieces, i, point)),
                point: point.clone(),
            }),
            _ => {}
        }
    }
    if points.len() == pieces.len() {
        Verdict::holds(Certificate::ExposedPoints { level: n, points }, res)
    } else {
        Verdict::inconclusive(res).with_note(format!(
            "{} of {} pieces undecided",
            pieces.len() - points.len(),
            pieces.len()
        ))
    }
}

// ----- level separation property -------------------------------------------

/// Nonempty interiors: every piece owns an exact point away from all other
/// pieces of its level. Never fails.
pub fn lsp2_check<T: Real>(oracle: &Oracle<T>, n: usize, budget: usize) -> Result<Verdict<T>> {
    let level = oracle.attractor().build_level(n, budget)?;
    Ok(lsp2_on(oracle, n, &level.pieces))
}

fn lsp2_on<T: Real>(oracle: &Oracle<T>, n: usize, pieces: &[Piece<T>]) -> Verdict<T> {
    let found: Vec<Option<ExposedPoint<T>>> = (0..pieces.len())
        .into_par_iter()
        .map(|i| {
            let mut p = oracle.exposed_point(&pieces[i], &neighbours(oracle, pieces, i), EXPOSURE_DEPTH)?;
            p.distance_lower = p.distance_lower.min(far_lower(oracle, pieces, i, &p.point));
            Some(p)
        })
        .collect();
    let res = Resolution::new(EXPOSURE_DEPTH, oracle.eps());
    let missing: Vec<String> =
        found.iter().zip(pieces).filter(|(f, _)| f.is_none()).map(|(_, p)| p.word.to_string()).collect();
    if missing.is_empty() {
        let points = found.into_iter().flatten().collect();
        return Verdict::holds(Certificate::ExposedPoints { level: n, points }, res);
    }
    let shown: Vec<&str> = missing.iter().take(8).map(String::as_str).collect();
    Verdict::inconclusive(res).with_note(format!("no interior certificate for pieces {}", shown.join(", ")))
}

/// Outcome of examining every pair of pieces of one level whose balls meet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PairAnalysis<T> {
    pub level: usize,
    pub pairs: usize,
    pub disjoint_pairs: usize,
    pub touching_pairs: usize,
    pub max_leaf_pairs: usize,
    pub unresolved_pairs: usize,
    /// A common sub-piece of two distinct pieces, if one was found.
    pub common: Option<Witness<T>>,
    pub resolution: Resolution<T>,
}

enum PairOutcome<T> {
    Common(Witness<T>),
    Disjoint,
    Touching(usize),
    Unresolved,
}

pub fn pair_analysis<T: Real>(
    oracle: &Oracle<T>,
    n: usize,
    depth: usize,
    max_contacts: usize,
    budget: usize,
) -> Result<PairAnalysis<T>> {
    let level = oracle.attractor().build_level(n, budget)?;
    Ok(pairs_on(oracle, n, &level.pieces, depth, max_contacts))
}

/// Deepest relative depth at which enclosing balls stay well above the
/// rounding margin; below it every nearby pair looks like a contact.
fn useful_depth<T: Real>(oracle: &Oracle<T>) -> usize {
    let att = oracle.attractor();
    let ratio = (T::lit(100.0) * oracle.margin() / att.root_radius()).ln() / att.ifs().max_ratio().ln();
    ratio.floor().to_usize().unwrap_or(1).max(1)
}

fn pairs_on<T: Real>(
    oracle: &Oracle<T>,
    n: usize,
    pieces: &[Piece<T>],
    depth: usize,
    max_contacts: usize,
) -> PairAnalysis<T> {
    let depth = depth.min(useful_depth(oracle));
    let pairs: Vec<(usize, usize)> = (0..pieces.len())
        .flat_map(|i| (i + 1..pieces.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| balls_meet(&pieces[i], &pieces[j], oracle.margin()))
        .collect();
    let outcomes: Vec<(PairOutcome<T>, usize, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&pieces[i], &pieces[j]);
            let common = oracle
                .common_sub_piece(a, b, COMMON_SUB_DEPTH)
                .map(|c| (a, b, c))
                .or_else(|| oracle.common_sub_piece(b, a, COMMON_SUB_DEPTH).map(|c| (b, a, c)));
            if let Some((a, b, c)) = common {
                let w =
                    Witness::CommonSubPiece { a: a.word.clone(), b: b.word.clone(), sub: c.sub, sub_in_b: c.sub_in_b };
                return (PairOutcome::Common(w), 0, false);
            }
            let contacts = oracle.contacts(a, b, depth, Some(max_contacts), false);
            let outcome = if contacts.disjoint() {
                PairOutcome::Disjoint
            } else if contacts.complete() {
                PairOutcome::Touching(contacts.leaves.len())
            } else {
                PairOutcome::Unresolved
            };
            (outcome, contacts.nodes, contacts.budget_exhausted)
        })
        .collect();
    let mut out = PairAnalysis {
        level: n,
        pairs: pairs.len(),
        disjoint_pairs: pieces.len() * (pieces.len() - 1) / 2 - pairs.len(),
        touching_pairs: 0,
        max_leaf_pairs: 0,
        unresolved_pairs: 0,
        common: None,
        resolution: Resolution::new(depth, oracle.eps()),
    };
    for (outcome, nodes, exhausted) in outcomes {
        out.resolution.nodes += nodes;
        out.resolution.budget_exhausted |= exhausted;
        match outcome {
            PairOutcome::Common(w) => {
                if out.common.is_none() {
                    out.common = Some(w);
                }
            }
            PairOutcome::Disjoint => out.disjoint_pairs += 1,
            PairOutcome::Touching(leaves) => {
                out.touching_pairs += 1;
                out.max_leaf_pairs = out.max_leaf_pairs.max(leaves);
            }
            PairOutcome::Unresolved => out.unresolved_pairs += 1,
        }
    }
    out
}

impl<T: Real> PairAnalysis<T> {
    fn bounded(&self) -> Certificate<T> {
        Certificate::BoundedContacts {
            level: self.level,
            max_leaf_pairs: self.max_leaf_pairs,
            disjoint_pairs: self.disjoint_pairs,
            touching_pairs: self.touching_pairs,
        }
    }

    fn verdict(&self, holds_note: &str) -> Verdict<T> {
        let res = self.resolution.clone();
        if let Some(w) = &self.common {
            return Verdict::fails(w.clone(), res).with_note("a common sub-piece is a copy of K inside both pieces");
        }
        if self.unresolved_pairs == 0 {
            return Verdict::holds(self.bounded(), res).with_note(holds_note);
        }
        Verdict::inconclusive(res).with_note(format!("{} pairs with unbounded contact", self.unresolved_pairs))
    }

    /// Disjoint interiors: every pair is disjoint or meets in isolated points.
    pub fn lsp1_verdict(&self) -> Verdict<T> {
        self.verdict("every intersection is empty or a few isolated points")
    }

    pub fn finite_overlap_verdict(&self) -> Verdict<T> {
        self.verdict("evidence of finite overlaps: no common sub-piece and bounded contact leaves")
    }
}

/// Disjoint interiors in `K` for the pieces of `Γ_n`.
pub fn lsp1_check<T: Real>(
    oracle: &Oracle<T>,
    n: usize,
    depth: usize,
    max_contacts: usize,
    budget: usize,
) -> Result<Verdict<T>> {
    Ok(pair_analysis(oracle, n, depth, max_contacts, budget)?.lsp1_verdict())
}

pub fn finite_overlap_check<T: Real>(
    oracle: &Oracle<T>,
    n: usize,
    depth: usize,
    max_contacts: usize,
    budget: usize,
) -> Result<Verdict<T>> {
    Ok(pair_analysis(oracle, n, depth, max_contacts, budget)?.finite_overlap_verdict())
}

// ----- tiling ----------------------------------------------------------------

/// Regularly closed pieces with disjoint interiors. Fails with the disjoint
/// interiors witness; holds when interior certificates are `eps`-dense in
/// every piece down to relative depth `q`.
pub fn tiling_check<T: Real>(
    oracle: &Oracle<T>,
    n: usize,
    lsp1: &Verdict<T>,
    eps: T,
    q: usize,
    budget: usize,
) -> Result<Verdict<T>> {
    let level = oracle.attractor().build_level(n, budget)?;
    Ok(tiling_on(oracle, n, &level.pieces, lsp1, eps, q))
}

fn tiling_on<T: Real>(
    oracle: &Oracle<T>,
    n: usize,
    pieces: &[Piece<T>],
    lsp1: &Verdict<T>,
    eps: T,
    q: usize,
) -> Verdict<T> {
    let res = Resolution::new(q, eps);
    if lsp1.is_fails() {
        let w = lsp1.witness.clone().expect("a failing verdict carries a witness");
        return Verdict::fails(w, res).with_note("interiors of two pieces meet");
    }
    if !lsp1.is_holds() {
        return Verdict::inconclusive(res).with_note("disjoint interiors undecided");
    }
    let cells: Vec<Option<usize>> =
        (0..pieces.len()).into_par_iter().map(|i| dense_interior(oracle, pieces, i, eps, q)).collect();
    if cells.iter().all(Option::is_some) {
        let cells = cells.into_iter().flatten().sum();
        Verdict::holds(Certificate::DenseInterior { level: n, eps, cells }, res)
    } else {
        Verdict::inconclusive(res).with_note("interior certificates not dense at this resolution")
    }
}

/// Subdivides piece `i` into cells that are either cleared from every other
/// piece (all their points are interior) or have diameter at most `eps` and
/// contain an exposed point. Returns the number of cells.
fn dense_interior<T: Real>(oracle: &Oracle<T>, pieces: &[Piece<T>], i: usize, eps: T, q: usize) -> Option<usize> {
    let a = &pieces[i];
    let others = neighbours(oracle, pieces, i);
    let mut stack = vec![a.clone()];
    let mut cells = 0;
    let mut nodes = 0;
    while let Some(d) = stack.pop() {
        nodes += 1;
        if nodes > oracle.node_budget() {
            return None;
        }
        let near: Vec<Piece<T>> = others.iter().filter(|b| balls_meet(&d, b, oracle.margin())).cloned().collect();
        let threshold = d.radius + oracle.margin();
        if near.iter().all(|b| matches!(oracle.proximity(&d.center, b, threshold), Proximity::Far(_))) {
            cells += 1;
            continue;
        }
        if d.diameter <= eps {
            oracle.exposed_point(&d, &near, EXPOSURE_DEPTH)?;
            cells += 1;
            continue;
        }
        if d.word.len() - a.word.len() >= q {
            return None;
        }
        stack.extend(oracle.attractor().children(&d));
    }
    Some(cells)
}

// ----- order -----------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct OrderBound<T> {
    /// `max_x #{B ∈ Γ_n : x ∈ B} − 1` over the sampled points.
    pub order: usize,
    pub level: usize,
    pub point: Vec<T>,
    pub pieces: Vec<Word>,
}

/// Lower bound for `ord(Γ_n)` from exact points of the descendants at
/// relative depth `r`. Membership means an exact point of the piece within
/// the rounding margin.
pub fn order_lower_bound<T: Real>(oracle: &Oracle<T>, n: usize, r: usize, budget: usize) -> Result<OrderBound<T>> {
    let att = oracle.attractor();
    let pieces = att.build_level(n, budget)?.pieces;
    let mut frontier = pieces.clone();
    for _ in 0..r {
        if frontier.len().saturating_mul(att.k()) > budget {
            return Err(Error::BudgetExceeded { requested: (frontier.len() * att.k()) as u128, budget });
        }
        frontier = frontier.iter().flat_map(|p| att.children(p)).collect();
    }
    let points: Vec<Vec<T>> = frontier.iter().flat_map(|p| att.representatives(p)).collect();
    let best = points
        .par_iter()
        .map(|x| {
            let inside: Vec<Word> = pieces
                .iter()
                .filter(|b| {
                    ball_lower(x, b) <= oracle.margin()
                        && matches!(oracle.proximity(x, b, oracle.margin()), Proximity::Near(_))
                })
                .map(|b| b.word.clone())
                .collect();
            (inside, x)
        })
        .reduce_with(|u, v| if v.0.len() > u.0.len() { v } else { u });
    let (inside, point) = best.ok_or_else(|| Error::InvalidArgument("empty sample".into()))?;
    Ok(OrderBound { order: inside.len().saturating_sub(1), level: n, point: point.clone(), pieces: inside })
}

// ----- report ----------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SeparationReport<T> {
    pub levels: usize,
    pub irreducible: Vec<Verdict<T>>,
    pub lsp1: Vec<Verdict<T>>,
    pub lsp2: Vec<Verdict<T>>,
    pub tiling: Vec<Verdict<T>>,
    pub finite_overlap: Vec<Verdict<T>>,
    pub ssc: Verdict<T>,
    pub osc: Verdict<T>,
    pub sosc: Verdict<T>,
    pub order: Option<OrderBound<T>>,
    pub dimensions: DimensionReport<T>,
    pub claims: Claims,
    pub wosc: Verdict<T>,
    /// Conclusions carried from one property to another.
    pub propagation: Vec<String>,
    pub consistency: Vec<ConsistencyEntry>,
}

fn budget_verdict<T: Real>(r: Result<Verdict<T>>, res: Resolution<T>) -> Verdict<T> {
    r.unwrap_or_else(|e| Verdict::inconclusive(res).with_note(e.to_string()))
}

fn structural<T: Real>(v: &Verdict<T>) -> Claim {
    if v.is_holds() {
        Claim::ALL
    } else if v.is_fails() {
        Claim::Fails { level: None }
    } else {
        Claim::Inconclusive
    }
}

/// Level one pieces pairwise disjoint.
fn ssc_verdict<T: Real>(oracle: &Oracle<T>, budget: usize) -> Result<Verdict<T>> {
    let pieces = oracle.attractor().build_level(1, budget)?.pieces;
    let mut res = oracle.resolution();
    let mut gaps = T::infinity();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let v = oracle.pieces_intersect(&pieces[i], &pieces[j], oracle.eps(), oracle.depth());
            merge_resolution(&mut res, &v);
            if v.is_fails() {
                if let Some(Witness::Gap { gap }) = v.witness {
                    gaps = gaps.min(gap);
                }
                continue;
            }
            if v.is_holds() {
                let premise = format!("pieces {} and {} meet", pieces[i].word, pieces[j].word);
                let rule = "intersecting level-one pieces".to_string();
                return Ok(Verdict::fails(Witness::Implication { rule, premises: vec![premise] }, res));
            }
            return Ok(Verdict::inconclusive(res));
        }
    }
    Ok(Verdict::holds(
        Certificate::Implication {
            rule: "pairwise disjoint level-one pieces".into(),
            premises: vec![format!("smallest certified gap {gaps}")],
        },
        res,
    ))
}

/// Runs every check on levels `1..=config.levels`, the dimension report and
/// the consistency harness. A violated consistency entry is an error.
pub fn separation_report<T: Real>(oracle: &Oracle<T>, config: &Config<T>) -> Result<SeparationReport<T>> {
    let att = oracle.attractor();
    let levels = config.levels.max(1);
    let budget = config.budget;
    let contact_depth = config.contact_depth.max(oracle.depth());
    let tiling_eps = config.tiling_eps * att.diam_upper();

    let (mut irreducible, mut lsp1, mut lsp2, mut tiling, mut finite_overlap) =
        (vec![], vec![], vec![], vec![], vec![]);
    for n in 1..=levels {
        let pieces = match att.build_level(n, budget) {
            Ok(level) => level.pieces,
            Err(e) => {
                let v = Verdict::inconclusive(oracle.resolution()).with_note(e.to_string());
                for list in [&mut irreducible, &mut lsp1, &mut lsp2, &mut tiling, &mut finite_overlap] {
                    list.push(v.clone());
                }
                continue;
            }
        };
        irreducible.push(irreducible_on(oracle, n, &pieces));
        let pairs = pairs_on(oracle, n, &pieces, contact_depth, config.max_contacts);
        let l1 = pairs.lsp1_verdict();
        lsp2.push(lsp2_on(oracle, n, &pieces));
        tiling.push(tiling_on(oracle, n, &pieces, &l1, tiling_eps, config.tiling_depth));
        finite_overlap.push(pairs.finite_overlap_verdict());
        lsp1.push(l1);
    }

    let ssc = budget_verdict(ssc_verdict(oracle, budget), oracle.resolution());
    let search = osc_certificate_search(att, &builtin_candidates(att));
    let osc = search.verdict.clone();
    let sosc = match &search.certified {
        Some(v) => sosc_check(att, v),
        None if osc.is_fails() => osc.clone().with_note("no open set exists, so none meets K"),
        None => Verdict::inconclusive(osc.resolution.clone()),
    };
    let order = (1..=levels.min(ORDER_LEVELS))
        .filter_map(|n| order_lower_bound(oracle, n, config.sample_depth, budget).ok())
        .reduce(|a, b| if b.order > a.order { b } else { a });

    let mut propagation = vec![];
    let irreducible_levels = Claim::from_levels(&irreducible);
    let duplicate_maps = osc.is_fails();
    let irreducible_claim = match irreducible_levels {
        Claim::Fails { .. } => irreducible_levels,
        _ if ssc.is_holds() || osc.is_holds() => {
            propagation.push("irreducible at every level: the open set condition gives finite order".to_string());
            Claim::ALL
        }
        c => c,
    };

    let dimensions = dimension_report(oracle, config, irreducible_claim)?;
    let alpha = dimensions.alpha;
    let tol = T::map_tol();
    let proper = dimensions.dim4.subcover.as_ref().filter(|j| j.root < alpha - tol);
    let dim4_claim = match (proper, irreducible_claim) {
        (Some(j), _) => Claim::Fails { level: Some(j.level) },
        (None, Claim::Holds { through }) if dimensions.dim4.lower >= alpha - tol => Claim::Holds { through },
        _ => Claim::Inconclusive,
    };
    let full = att.diam_upper().powf(alpha);
    let h4_claim = if dimensions.h4_alpha_positive.is_holds() {
        Claim::ALL
    } else if dimensions.h4_alpha_positive.is_fails() {
        let m = dimensions.h4_level_weights.iter().position(|&w| w < full * (T::one() - tol));
        Claim::Fails { level: m.map(|m| m + 1) }
    } else {
        Claim::Inconclusive
    };
    let lsp_levels: Vec<Verdict<T>> = lsp1
        .iter()
        .zip(&lsp2)
        .map(|(a, b)| match (a.is_fails(), a.is_holds() && b.is_holds()) {
            (true, _) => a.clone(),
            (_, true) => b.clone(),
            _ => Verdict::inconclusive(a.resolution.clone()),
        })
        .collect();
    let dim_h = if proper.is_some() { Claim::Fails { level: None } } else { Claim::Inconclusive };
    let mut claims = Claims {
        ssc: structural(&ssc),
        osc: structural(&osc),
        sosc: structural(&sosc),
        hausdorff_positive: if dim_h.is_fails() { dim_h } else { Claim::Inconclusive },
        dim_h_equals_alpha: dim_h,
        irreducible_levels,
        irreducible: irreducible_claim,
        lsp: Claim::from_levels(&lsp_levels),
        tiling: Claim::from_levels(&tiling),
        finite_overlaps: Claim::from_levels(&finite_overlap),
        dim4_equals_alpha: dim4_claim,
        h4_positive: h4_claim,
        bounded_neighbours: if ssc.is_holds() {
            Claim::ALL
        } else if duplicate_maps {
            Claim::Fails { level: None }
        } else {
            Claim::Inconclusive
        },
        finite_order: Claim::Inconclusive,
        wosc: Claim::Inconclusive,
    };
    claims.finite_order = claims.bounded_neighbours;

    let wosc = wosc_verdict(&claims, &dimensions, &irreducible, &lsp1, oracle.resolution());
    claims.wosc = match &wosc {
        v if v.is_holds() => Claim::ALL,
        v if v.is_fails() => {
            [claims.irreducible, claims.lsp, claims.tiling, claims.dim4_equals_alpha, claims.h4_positive]
                .into_iter()
                .find(Claim::is_fails)
                .unwrap_or(Claim::Fails { level: None })
        }
        _ => Claim::Inconclusive,
    };
    let consistency = consistency_harness(&claims);
    check_consistency(&consistency)?;
    Ok(SeparationReport {
        levels,
        irreducible,
        lsp1,
        lsp2,
        tiling,
        finite_overlap,
        ssc,
        osc,
        sosc,
        order,
        dimensions,
        claims,
        wosc,
        propagation,
        consistency,
    })
}

/// Fails when any equivalent statement fails, holds when one of them is
/// certified at every level. Agreement with finitely many levels is not
/// enough for a structure-wide conclusion.
fn wosc_verdict<T: Real>(
    claims: &Claims,
    dims: &DimensionReport<T>,
    irreducible: &[Verdict<T>],
    lsp1: &[Verdict<T>],
    res: Resolution<T>,
) -> Verdict<T> {
    let equivalents = [
        ("irreducible", claims.irreducible),
        ("level separation property", claims.lsp),
        ("tiling", claims.tiling),
        ("dim_4(K) = α", claims.dim4_equals_alpha),
        ("H_4^α(K) > 0", claims.h4_positive),
    ];
    let failing: Vec<&str> = equivalents.iter().filter(|(_, c)| c.is_fails()).map(|(n, _)| *n).collect();
    if !failing.is_empty() {
        let witness = if let Some(j) = &dims.dim4.subcover {
            Witness::Subcover { level: j.level, words: j.words.clone() }
        } else if let Some(w) = irreducible.iter().chain(lsp1).find(|v| v.is_fails()).and_then(|v| v.witness.clone()) {
            w
        } else {
            Witness::Implication { rule: "an equivalent statement fails".into(), premises: vec![] }
        };
        return Verdict::fails(witness, res).with_note(format!("failing: {}", failing.join(", ")));
    }
    let holding: Vec<String> =
        equivalents.iter().filter(|(_, c)| c.holds_everywhere()).map(|(n, _)| n.to_string()).collect();
    if !holding.is_empty() {
        let rule = "an equivalent statement holds at every level".to_string();
        return Verdict::holds(Certificate::Implication { rule, premises: holding }, res);
    }
    let mut v = Verdict::inconclusive(res);
    let close = dims.box_estimate.as_ref().is_some_and(|b| (b.slope - dims.alpha).abs() <= T::lit(0.15));
    if close {
        v = v.with_note("irreducible expected (dim_H = α), not certifiable at this resolution");
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn irreducibility_examples() {
        let b = bisection();
        let o = Oracle::with_defaults(&b);
        let v = level_irreducible(&o, 1, 100).unwrap();
        let Some(Certificate::ExposedPoints { points, .. }) = &v.certificate else { panic!("{v:?}") };
        assert_eq!(points[0].point, vec![0.0]);
        assert_eq!(points[1].point, vec![1.0]);

        let d = duplicate_cantor();
        let o = Oracle::with_defaults(&d);
        let v = level_irreducible(&o, 1, 100).unwrap();
        assert_eq!(v.witness, Some(Witness::DuplicatePieces { piece: w("2"), duplicate_of: w("1") }));
        for n in 2..=4 {
            assert!(level_irreducible(&o, n, 1000).unwrap().is_fails());
        }

        let g = gasket();
        let o = Oracle::with_defaults(&g);
        let v = level_irreducible(&o, 2, 100).unwrap();
        let Some(Certificate::ExposedPoints { points, .. }) = &v.certificate else { panic!("{v:?}") };
        assert_eq!(points.len(), 9);
        assert!(points.iter().all(|p| p.distance_lower > 0.0));
    }

    #[test]
    fn lsp_examples() {
        let b = bisection();
        let o = Oracle::with_defaults(&b);
        assert!(lsp1_check(&o, 1, 40, 8, 100).unwrap().is_holds());
        let v = lsp2_check(&o, 1, 100).unwrap();
        let Some(Certificate::ExposedPoints { points, .. }) = &v.certificate else { panic!("{v:?}") };
        assert_eq!(points[0].point, vec![0.0]);
        assert!((points[0].distance_lower - 0.5).abs() < 1e-9);

        let c = cantor();
        let o = Oracle::with_defaults(&c);
        let pairs = pair_analysis(&o, 1, 30, 8, 100).unwrap();
        assert_eq!(pairs.disjoint_pairs, 1);
        assert!(pairs.lsp1_verdict().is_holds());

        let d = duplicate_cantor();
        let o = Oracle::with_defaults(&d);
        let v = lsp1_check(&o, 1, 30, 8, 100).unwrap();
        assert_eq!(v.witness, Some(Witness::CommonSubPiece { a: w("1"), b: w("2"), sub: w("11"), sub_in_b: w("21") }));
        assert!(lsp2_check(&o, 1, 100).unwrap().is_inconclusive());

        let g = gasket();
        let o = Oracle::with_defaults(&g);
        assert!(lsp2_check(&o, 1, 100).unwrap().is_holds());
    }

    #[test]
    fn finite_overlap_examples() {
        let b = bisection();
        let o = Oracle::with_defaults(&b);
        let v = finite_overlap_check(&o, 1, 40, 8, 100).unwrap();
        assert!(matches!(v.certificate, Some(Certificate::BoundedContacts { touching_pairs: 1, .. })), "{v:?}");

        let g = gasket();
        let o = Oracle::with_defaults(&g);
        let v = finite_overlap_check(&o, 1, 40, 8, 100).unwrap();
        assert!(matches!(v.certificate, Some(Certificate::BoundedContacts { touching_pairs: 3, .. })), "{v:?}");

        let d = duplicate_cantor();
        let o = Oracle::with_defaults(&d);
        assert!(finite_overlap_check(&o, 1, 40, 8, 100).unwrap().is_fails());
    }

    #[test]
    fn tiling_examples() {
        for (att, expect_holds) in [(bisection(), true), (gasket(), true), (duplicate_cantor(), false)] {
            let o = Oracle::with_defaults(&att);
            let lsp1 = lsp1_check(&o, 1, 40, 8, 100).unwrap();
            let v = tiling_check(&o, 1, &lsp1, 1e-3 * att.diam_upper(), 12, 100).unwrap();
            if expect_holds {
                assert!(v.is_holds(), "{}: {v:?}", att.ifs().label());
            } else {
                assert!(v.is_fails());
            }
        }
    }

    #[test]
    fn order_examples() {
        let b = bisection();
        let o = Oracle::with_defaults(&b);
        let ord = order_lower_bound(&o, 1, 2, 1000).unwrap();
        assert_eq!(ord.order, 1);
        assert_eq!(ord.point, vec![0.5]);

        let c = cantor();
        let o = Oracle::with_defaults(&c);
        assert_eq!(order_lower_bound(&o, 1, 2, 1000).unwrap().order, 0);

        let d = duplicate_cantor();
        let o = Oracle::with_defaults(&d);
        assert!(order_lower_bound(&o, 2, 2, 1000).unwrap().order >= 3);
    }

    #[test]
    fn reports_on_the_corpus() {
        let config = Config { levels: 3, ..Config::default() };
        let g = gasket();
        let o = Oracle::new(&g, &config);
        let r = separation_report(&o, &config).unwrap();
        assert!(r.wosc.is_holds() && r.osc.is_holds() && r.sosc.is_holds());
        let osc_irr = r.consistency.iter().find(|e| e.implication == "OSC ⇒ irreducible").unwrap();
        assert_eq!(osc_irr.status, Status::Consistent);

        let d = duplicate_cantor();
        let o = Oracle::new(&d, &config);
        let r = separation_report(&o, &config).unwrap();
        assert!(r.wosc.is_fails());
        assert!(matches!(r.wosc.witness, Some(Witness::Subcover { level: 1, .. })));
        let e = r.consistency.iter().find(|e| e.implication == "dim_4(K) = α ⇔ irreducible").unwrap();
        assert_eq!(e.status, Status::Consistent);

        let b = bisection();
        let o = Oracle::new(&b, &config);
        let r = separation_report(&o, &config).unwrap();
        let e = r.consistency.iter().find(|e| e.implication == "finite overlaps ⇒ LSP").unwrap();
        assert_eq!(e.status, Status::Consistent);
    }
}
