use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attractor::Attractor;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::words;

/// Least-squares fit of `log N(ε)` against `log(1/ε)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BoxEstimate<T> {
    pub slope: T,
    pub intercept: T,
    /// Largest absolute deviation of a point from the fitted line.
    pub residual: T,
    /// Standard error of the slope.
    pub slope_std_error: T,
    pub scales: Vec<T>,
    pub counts: Vec<usize>,
    pub sample_depth: usize,
    pub sample_size: usize,
    /// All counts were equal, so the slope carries no information.
    pub degenerate: bool,
}

impl<T: Real> BoxEstimate<T> {
    /// Heuristic lower value used as dimension evidence.
    pub fn lower(&self) -> T {
        self.slope - self.residual.max(self.slope_std_error)
    }
}

/// The deterministic sample `{f_v(p1) : |v| = q}`.
pub fn attractor_sample<T: Real>(att: &Attractor<T>, q: usize, budget: usize) -> Result<Vec<Vec<T>>> {
    words::check_budget(att.k(), q, budget)?;
    let mut points = vec![att.seeds()[0].clone()];
    for _ in 0..q {
        points =
            points.par_iter().flat_map_iter(|p| att.ifs().maps().iter().map(move |f| f.apply_unchecked(p))).collect();
    }
    Ok(points)
}

/// Largest sampling depth with at most `max_points` points.
pub fn default_sample_depth(k: usize, max_points: usize) -> usize {
    let mut q = 1;
    while words::level_size(k, q + 1).is_some_and(|s| s <= max_points as u128) {
        q += 1;
    }
    q
}

/// Dyadic grid sizes `diam · 2^-j`, `j ≥ 2`, down to four times the sample
/// resolution `(max c)^q · diam`.
pub fn default_scales<T: Real>(att: &Attractor<T>, q: usize) -> Vec<T> {
    let diam = att.diam_upper();
    let floor = T::lit(4.0) * att.ifs().max_ratio().powi(q as i32) * diam;
    let mut scales = vec![];
    let mut eps = diam / T::lit(4.0);
    while eps >= floor && scales.len() < 40 {
        scales.push(eps);
        eps = eps / T::lit(2.0);
    }
    scales
}

pub fn box_dimension_estimate<T: Real>(
    att: &Attractor<T>,
    scales: &[T],
    depth: usize,
    budget: usize,
) -> Result<BoxEstimate<T>> {
    if scales.len() < 4 {
        return Err(Error::InvalidArgument(format!("need at least 4 scales, got {}", scales.len())));
    }
    let (lo, hi) = scales.iter().fold((T::infinity(), T::zero()), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    if !(lo > T::zero()) || hi / lo < T::lit(100.0) {
        return Err(Error::InvalidArgument("scales must be positive and span at least two decades".into()));
    }
    let resolution = att.ifs().max_ratio().powi(depth as i32) * att.diam_upper();
    if lo < resolution {
        return Err(Error::InvalidArgument(format!("scale {lo} is below the sample resolution {resolution}")));
    }
    let sample = attractor_sample(att, depth, budget)?;
    let origin: Vec<T> = (0..att.dim()).map(|i| sample.iter().fold(T::infinity(), |m, p| m.min(p[i]))).collect();
    let counts: Vec<usize> = scales.par_iter().map(|&eps| count_boxes(&sample, &origin, eps)).collect();
    Ok(fit(scales, &counts, depth, sample.len()))
}

/// Picks the depth and scales automatically: a sample of at most
/// `max_points`, and scales at which the sample is not yet saturated.
pub fn box_estimate_auto<T: Real>(att: &Attractor<T>, max_points: usize, budget: usize) -> Result<BoxEstimate<T>> {
    let depth = default_sample_depth(att.k(), max_points.min(budget));
    let sample = attractor_sample(att, depth, budget)?;
    let origin: Vec<T> = (0..att.dim()).map(|i| sample.iter().fold(T::infinity(), |m, p| m.min(p[i]))).collect();
    let mut scales = default_scales(att, depth);
    let mut counts: Vec<usize> = scales.par_iter().map(|&eps| count_boxes(&sample, &origin, eps)).collect();
    // too few points per box at fine scales biases the count downwards
    let keep = counts.iter().take_while(|&&c| c * 8 <= sample.len()).count().max(4.min(counts.len()));
    scales.truncate(keep);
    counts.truncate(keep);
    if scales.len() < 4 {
        return Err(Error::InvalidArgument("sample too small for four scales".into()));
    }
    Ok(fit(&scales, &counts, depth, sample.len()))
}

fn count_boxes<T: Real>(sample: &[Vec<T>], origin: &[T], eps: T) -> usize {
    let cells: HashSet<Vec<i64>> = sample
        .iter()
        .map(|p| p.iter().zip(origin).map(|(&x, &o)| ((x - o) / eps).floor().to_i64().unwrap_or(i64::MAX)).collect())
        .collect();
    cells.len()
}

fn fit<T: Real>(scales: &[T], counts: &[usize], depth: usize, sample_size: usize) -> BoxEstimate<T> {
    let xs: Vec<T> = scales.iter().map(|&s| (T::one() / s).ln()).collect();
    let ys: Vec<T> = counts.iter().map(|&c| T::from_usize_lossy(c).ln()).collect();
    let n = T::from_usize_lossy(xs.len());
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let sxx = xs.iter().fold(T::zero(), |a, &x| a + (x - mx) * (x - mx));
    let sxy = xs.iter().zip(&ys).fold(T::zero(), |a, (&x, &y)| a + (x - mx) * (y - my));
    let slope = if sxx > T::zero() { sxy / sxx } else { T::zero() };
    let intercept = my - slope * mx;
    let resid: Vec<T> = xs.iter().zip(&ys).map(|(&x, &y)| y - (intercept + slope * x)).collect();
    let residual = resid.iter().fold(T::zero(), |m, r| m.max(r.abs()));
    let dof = T::from_usize_lossy(xs.len().saturating_sub(2).max(1));
    let ss = resid.iter().fold(T::zero(), |a, &r| a + r * r);
    let slope_std_error = if sxx > T::zero() { (ss / dof / sxx).sqrt() } else { T::infinity() };
    BoxEstimate {
        slope,
        intercept,
        residual,
        slope_std_error,
        scales: scales.to_vec(),
        counts: counts.to_vec(),
        sample_depth: depth,
        sample_size,
        degenerate: counts.windows(2).all(|w| w[0] == w[1]),
    }
}
