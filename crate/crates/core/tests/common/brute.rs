//! Brute-force references for small instances: subcover weights by
//! enumerating every subfamily, and coverage on the line by a grid of
//! spacing 1e-4.

#![allow(dead_code)]

use std::collections::HashSet;

use selfsim_core::{Attractor64, Oracle, Piece64, Word};

fn descendants(att: &Attractor64, piece: &Piece64, r: usize) -> Vec<Piece64> {
    let mut out = vec![piece.clone()];
    for _ in 0..r {
        out = out.iter().flat_map(|p| att.children(p)).collect();
    }
    out
}

fn exact_points(att: &Attractor64, piece: &Piece64, r: usize) -> Vec<Vec<f64>> {
    descendants(att, piece, r).iter().flat_map(|p| att.representatives(p)).collect()
}

const GRID: f64 = 1e-9;

fn key(x: &[f64]) -> Vec<i64> {
    x.iter().map(|v| (v / GRID).round() as i64).collect()
}

fn near_keys(x: &[f64]) -> Vec<Vec<i64>> {
    let base = key(x);
    let mut keys = vec![base.clone()];
    for i in 0..base.len() {
        let mut next = vec![];
        for k in &keys {
            for d in [-1, 1] {
                let mut k2 = k.clone();
                k2[i] += d;
                next.push(k2);
            }
        }
        keys.extend(next);
    }
    keys
}

/// Minimum of `Σ diam(A)^s` over all subfamilies of levels `1..=max_level`
/// whose union contains every exact point of depth `depth`.
pub fn exhaustive_min_weight(att: &Attractor64, s: f64, max_level: usize, depth: usize) -> f64 {
    let sample = exact_points(att, &att.root(), depth);
    let candidates: Vec<Piece64> = (1..=max_level).flat_map(|l| att.build_level(l, 10_000).unwrap().pieces).collect();
    assert!(candidates.len() < 32, "too many candidates for enumeration");
    let words = sample.len().div_ceil(64);
    let masks: Vec<Vec<u64>> = candidates
        .iter()
        .map(|a| {
            let own: HashSet<Vec<i64>> = exact_points(att, a, depth - a.word.len()).iter().map(|x| key(x)).collect();
            let mut bits = vec![0u64; words];
            for (i, x) in sample.iter().enumerate() {
                if near_keys(x).iter().any(|k| own.contains(k)) {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            bits
        })
        .collect();
    let full: Vec<u64> = (0..words)
        .map(|w| if (w + 1) * 64 <= sample.len() { u64::MAX } else { (1u64 << (sample.len() % 64)) - 1 })
        .collect();
    let weights: Vec<f64> = candidates.iter().map(|a| a.diameter.powf(s)).collect();
    let mut best = f64::INFINITY;
    for subset in 1u32..(1 << candidates.len()) {
        let mut cov = vec![0u64; words];
        let mut w = 0.0;
        for (i, m) in masks.iter().enumerate() {
            if subset >> i & 1 == 1 {
                w += weights[i];
                cov.iter_mut().zip(m).for_each(|(c, b)| *c |= b);
            }
        }
        if cov == full {
            best = best.min(w);
        }
    }
    best
}

const SPACING: f64 = 1e-4;

/// Grid cells met by the hull intervals of the descendants of `piece` at
/// absolute depth `depth`. Maps are increasing homotheties, so the hull of
/// `K` runs between the extreme fixed points.
fn hull_cells(att: &Attractor64, piece: &Piece64, depth: usize) -> HashSet<i64> {
    let (lo, hi) = att.seeds().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), s| (l.min(s[0]), h.max(s[0])));
    let mut cells = HashSet::new();
    for d in descendants(att, piece, depth - piece.word.len()) {
        let a = d.map.apply(&[lo]).unwrap()[0];
        let b = d.map.apply(&[hi]).unwrap()[0];
        for c in (a / SPACING).floor() as i64..=(b / SPACING).floor() as i64 {
            cells.insert(c);
        }
    }
    cells
}

#[derive(Debug, Default)]
pub struct GridAgreement {
    pub total: usize,
    pub decided: usize,
    pub holds: usize,
    pub disagreements: Vec<String>,
}

/// Compares `covered_by(A, F)` with the grid for every piece `A` of levels
/// 1 and 2 and every family `F` of other pieces of the same level. The grid
/// says "not covered" when some exact point of `A` lies in a cell that no
/// hull interval of `F` meets.
pub fn covered_by_against_grid(att: &Attractor64) -> GridAgreement {
    assert_eq!(att.dim(), 1);
    let depth = (1..).find(|&m| att.ifs().max_ratio().powi(m) * att.diam_upper() <= SPACING).unwrap() as usize;
    let oracle = Oracle::with_defaults(att);
    let mut out = GridAgreement::default();
    for n in 1..=2 {
        let pieces = att.build_level(n, 100).unwrap().pieces;
        let hulls: Vec<HashSet<i64>> = pieces.iter().map(|p| hull_cells(att, p, depth)).collect();
        let cells: Vec<Vec<i64>> = pieces
            .iter()
            .map(|p| exact_points(att, p, depth - n).iter().map(|x| (x[0] / SPACING).floor() as i64).collect())
            .collect();
        for (i, a) in pieces.iter().enumerate() {
            let others: Vec<usize> = (0..pieces.len()).filter(|&j| j != i).collect();
            for subset in 0u32..(1 << others.len()) {
                let chosen: Vec<usize> =
                    others.iter().enumerate().filter(|&(b, _)| subset >> b & 1 == 1).map(|(_, &j)| j).collect();
                let family: Vec<Piece64> = chosen.iter().map(|&j| pieces[j].clone()).collect();
                let v = oracle.covered_by(a, &family, oracle.eps(), oracle.depth());
                out.total += 1;
                if v.is_inconclusive() {
                    continue;
                }
                out.decided += 1;
                out.holds += usize::from(v.is_holds());
                let grid = cells[i].iter().all(|c| chosen.iter().any(|&j| hulls[j].contains(c)));
                if v.is_holds() != grid {
                    let words: Vec<&Word> = family.iter().map(|f| &f.word).collect();
                    out.disagreements.push(format!("{}: {} by {words:?}: {:?}", att.ifs().label(), a.word, v.outcome));
                }
            }
        }
    }
    out
}
