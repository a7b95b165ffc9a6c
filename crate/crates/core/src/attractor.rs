//! The iterated function system, certified metric data of its attractor `K`,
//! and the levels `Γ_n = {f_w(K) : |w| = n}` of its natural fractal structure.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Similitude;
use crate::linalg;
use crate::scalar::Real;
use crate::words::{self, Word};

/// A finite family of contracting similitudes of `R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Ifs<T> {
    label: String,
    dim: usize,
    maps: Vec<Similitude<T>>,
}

impl<T: Real> Ifs<T> {
    pub fn new(label: impl Into<String>, maps: Vec<Similitude<T>>) -> Result<Self> {
        if maps.len() < 2 {
            return Err(Error::InvalidSystem(format!("need at least 2 maps, got {}", maps.len())));
        }
        if maps.len() > usize::from(u16::MAX) {
            return Err(Error::InvalidSystem("too many maps".into()));
        }
        let dim = maps[0].dim();
        if dim == 0 {
            return Err(Error::InvalidSystem("dimension must be at least 1".into()));
        }
        for (i, f) in maps.iter().enumerate() {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: f.dim() });
            }
            if !(f.scale() > T::zero() && f.scale() < T::one()) {
                return Err(Error::InvalidSystem(format!("map {}: scale out of (0,1): {}", i + 1, f.scale())));
            }
        }
        Ok(Ifs { label: label.into(), dim, maps })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of maps.
    pub fn k(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Similitude<T>] {
        &self.maps
    }

    pub fn ratios(&self) -> Vec<T> {
        self.maps.iter().map(Similitude::scale).collect()
    }

    pub fn max_ratio(&self) -> T {
        self.maps.iter().map(Similitude::scale).fold(T::zero(), T::max)
    }

    /// `f_w = f_{w1} ∘ ... ∘ f_{wn}`.
    pub fn composite(&self, word: &Word) -> Similitude<T> {
        word.indices().fold(Similitude::identity(self.dim), |acc, i| acc.compose_unchecked(&self.maps[i]))
    }

    pub fn ratio_of(&self, word: &Word) -> T {
        word.indices().fold(T::one(), |acc, i| acc * self.maps[i].scale())
    }

    pub(crate) fn check_word(&self, word: &Word) -> Result<()> {
        if usize::from(word.max_symbol()) > self.k() {
            return Err(Error::InvalidSystem(format!("word {word} uses a symbol beyond k = {}", self.k())));
        }
        Ok(())
    }
}

/// Lower and upper bound for `diam(K)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DiameterBracket<T> {
    pub lower: T,
    pub upper: T,
    /// False when the node budget ran out before `upper - lower <= tol`.
    pub converged: bool,
}

impl<T: Real> DiameterBracket<T> {
    pub fn width(&self) -> T {
        self.upper - self.lower
    }
}

/// A piece `K_w = f_w(K)` with its certified enclosing ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Piece<T> {
    pub word: Word,
    pub map: Similitude<T>,
    pub ratio: T,
    /// `ratio · diam_upper(K)`.
    pub diameter: T,
    pub center: Vec<T>,
    pub radius: T,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Level<T> {
    pub n: usize,
    pub pieces: Vec<Piece<T>>,
}

impl<T: Real> Level<T> {
    pub fn max_diameter(&self) -> T {
        self.pieces.iter().map(|p| p.diameter).fold(T::zero(), T::max)
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

/// An IFS together with the certified data every analysis needs: the fixed
/// points of the maps (points of `K`), an invariant ball `K ⊆ B(x0, R0)` and
/// a diameter bracket.
#[derive(Clone, Debug)]
pub struct Attractor<T> {
    ifs: Ifs<T>,
    seeds: Vec<Vec<T>>,
    root_center: Vec<T>,
    root_radius: T,
    diameter: DiameterBracket<T>,
}

const TIGHTEN_PIECES: usize = 4096;
const DIAMETER_NODES: usize = 200_000;

impl<T: Real> Attractor<T> {
    /// Computes the enclosure and a diameter bracket to `1e-9` relative width
    /// (for `f64`).
    pub fn new(ifs: Ifs<T>) -> Result<Self> {
        let seeds: Vec<Vec<T>> = ifs
            .maps()
            .iter()
            .map(|f| f.fixed_point())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidSystem("a map has no computable fixed point".into()))?;
        let (root_center, root_radius) = invariant_ball(&ifs, &seeds);
        let mut attractor = Attractor {
            ifs,
            seeds,
            root_center,
            root_radius,
            diameter: DiameterBracket { lower: T::zero(), upper: T::zero(), converged: false },
        };
        let tol = T::map_tol() * attractor.root_radius;
        attractor.diameter = estimate_diameter_with(&attractor, tol, DIAMETER_NODES);
        Ok(attractor)
    }

    pub fn ifs(&self) -> &Ifs<T> {
        &self.ifs
    }

    pub fn k(&self) -> usize {
        self.ifs.k()
    }

    pub fn dim(&self) -> usize {
        self.ifs.dim()
    }

    /// Fixed points of the maps, in map order.
    pub fn seeds(&self) -> &[Vec<T>] {
        &self.seeds
    }

    pub fn root_center(&self) -> &[T] {
        &self.root_center
    }

    pub fn root_radius(&self) -> T {
        self.root_radius
    }

    pub fn diameter(&self) -> DiameterBracket<T> {
        self.diameter
    }

    /// Certified upper bound for `diam(K)`; used in every piece diameter.
    pub fn diam_upper(&self) -> T {
        self.diameter.upper
    }

    pub fn root(&self) -> Piece<T> {
        self.make_piece(Word::empty(), Similitude::identity(self.dim()))
    }

    pub fn piece(&self, word: &Word) -> Result<Piece<T>> {
        self.ifs.check_word(word)?;
        Ok(self.make_piece(word.clone(), self.ifs.composite(word)))
    }

    pub(crate) fn piece_unchecked(&self, word: &Word) -> Piece<T> {
        self.make_piece(word.clone(), self.ifs.composite(word))
    }

    /// The child `K_{w·j}`; `symbol` is 1-based.
    pub fn child(&self, parent: &Piece<T>, symbol: u16) -> Piece<T> {
        let map = parent.map.compose_unchecked(&self.ifs.maps()[usize::from(symbol) - 1]);
        self.make_piece(parent.word.child(symbol), map)
    }

    pub fn children(&self, parent: &Piece<T>) -> Vec<Piece<T>> {
        (1..=self.k() as u16).map(|j| self.child(parent, j)).collect()
    }

    fn make_piece(&self, word: Word, map: Similitude<T>) -> Piece<T> {
        let ratio = map.scale();
        let center = map.apply_unchecked(&self.root_center);
        Piece { word, ratio, diameter: ratio * self.diam_upper(), center, radius: ratio * self.root_radius, map }
    }

    /// Exact points of `K_w`: the images of the fixed points of the maps.
    pub fn representatives(&self, piece: &Piece<T>) -> Vec<Vec<T>> {
        self.seeds.iter().map(|s| piece.map.apply_unchecked(s)).collect()
    }

    pub fn build_level(&self, n: usize, budget: usize) -> Result<Level<T>> {
        let words = words::enumerate_level(self.k(), n, budget)?;
        let pieces = words.par_iter().map(|w| self.piece_unchecked(w)).collect();
        Ok(Level { n, pieces })
    }

    /// The `k^q` points `f_w ∘ f_v(p1)`, `|v| = q`, where `p1` is the fixed
    /// point of the first map. Lexicographic in `v`.
    pub fn sample_points(&self, piece: &Piece<T>, q: usize, budget: usize) -> Result<Vec<Vec<T>>> {
        let suffixes = words::enumerate_level(self.k(), q, budget)?;
        let seed = &self.seeds[0];
        Ok(suffixes
            .par_iter()
            .map(|v| piece.map.apply_unchecked(&self.ifs.composite(v).apply_unchecked(seed)))
            .collect())
    }

    /// Structural self-test that `Γ_{n+1}` refines `Γ_n` with every level-n
    /// piece equal to the union of its children.
    pub fn refinement_check(&self, n: usize, budget: usize) -> Result<bool> {
        let upper = words::enumerate_level(self.k(), n, budget)?;
        let lower = words::enumerate_level(self.k(), n + 1, budget)?;
        let k = self.k();
        let every_child_has_parent =
            lower.iter().all(|w| upper.binary_search(&w.prefix(n)).is_ok() && w.len() == n + 1);
        let parents_reproduced = upper.iter().enumerate().all(|(i, u)| {
            let block = &lower[i * k..(i + 1) * k];
            block.iter().all(|w| words::is_prefix(u, w)) && block.iter().map(|w| w.symbols()[n]).eq(1..=k as u16)
        });
        Ok(every_child_has_parent && parents_reproduced)
    }

    /// Re-estimates the diameter bracket with an explicit tolerance and node
    /// budget.
    pub fn estimate_diameter(&self, tol: T, max_nodes: usize) -> DiameterBracket<T> {
        estimate_diameter_with(self, tol, max_nodes)
    }
}

/// `x0` is the centroid of the distinct fixed points; `R0` starts from the invariance
/// bound `max_i |f_i(x0) − x0| / (1 − c_i)` and is tightened through
/// `R ← max_w (|f_w(x0) − x0| + c_w R)`, which keeps `K ⊆ B(x0, R)`.
fn invariant_ball<T: Real>(ifs: &Ifs<T>, seeds: &[Vec<T>]) -> (Vec<T>, T) {
    let d = ifs.dim();
    let mut distinct: Vec<&Vec<T>> = vec![];
    for s in seeds {
        if !distinct.iter().any(|t| linalg::dist(s, t) <= T::exact_tol() * (T::one() + linalg::norm(s))) {
            distinct.push(s);
        }
    }
    let count = T::from_usize_lossy(distinct.len());
    let center: Vec<T> = (0..d).map(|i| distinct.iter().fold(T::zero(), |acc, s| acc + s[i]) / count).collect();
    let mut radius = ifs
        .maps()
        .iter()
        .map(|f| linalg::dist(&f.apply_unchecked(&center), &center) / (T::one() - f.scale()))
        .fold(T::zero(), T::max);

    let mut depth = 1;
    while words::level_size(ifs.k(), depth + 1).is_some_and(|s| s <= TIGHTEN_PIECES as u128) {
        depth += 1;
    }
    let composites: Vec<Similitude<T>> = words::enumerate_level(ifs.k(), depth, TIGHTEN_PIECES)
        .map(|ws| ws.iter().map(|w| ifs.composite(w)).collect())
        .unwrap_or_default();
    let offsets: Vec<(T, T)> =
        composites.iter().map(|f| (linalg::dist(&f.apply_unchecked(&center), &center), f.scale())).collect();
    for _ in 0..8 {
        let next = offsets.iter().map(|&(off, c)| off + c * radius).fold(T::zero(), T::max);
        if next >= radius {
            break;
        }
        radius = next;
    }
    // absorb rounding in the centre and the offsets
    let scale = radius + linalg::norm(&center);
    radius = radius + T::exact_tol() * scale + T::min_positive_value();
    (center, radius)
}

struct PairNode<T> {
    upper: T,
    a: Piece<T>,
    b: Piece<T>,
}

impl<T: Real> PartialEq for PairNode<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for PairNode<T> {}
impl<T: Real> PartialOrd for PairNode<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for PairNode<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper
            .partial_cmp(&other.upper)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.a.word.cmp(&self.a.word))
            .then_with(|| other.b.word.cmp(&self.b.word))
    }
}

/// Best-first branch and bound over pairs of pieces. The lower bound is the
/// largest distance between exact points seen; the upper bound is the
/// largest `|c_A − c_B| + r_A + r_B` over pairs not yet resolved. Pairs
/// with the same enclosures (from coinciding composites) are expanded once.
fn estimate_diameter_with<T: Real>(att: &Attractor<T>, tol: T, max_nodes: usize) -> DiameterBracket<T> {
    let root = att.root();
    let step = (T::exact_tol() * (att.root_radius + linalg::norm(&att.root_center))).to_f64_lossy();
    let key = |a: &Piece<T>, b: &Piece<T>| -> Vec<i64> {
        let mut k: Vec<i64> =
            a.center.iter().chain(&b.center).map(|v| (v.to_f64_lossy() / step).round() as i64).collect();
        k.push((a.radius.to_f64_lossy() / step).round() as i64);
        k.push((b.radius.to_f64_lossy() / step).round() as i64);
        k
    };
    let mut seen = HashSet::new();
    let pair_upper = |a: &Piece<T>, b: &Piece<T>| linalg::dist(&a.center, &b.center) + a.radius + b.radius;
    let mut lower = T::zero();
    let reps = att.representatives(&root);
    for (i, p) in reps.iter().enumerate() {
        for q in &reps[i + 1..] {
            lower = lower.max(linalg::dist(p, q));
        }
    }
    let mut heap = BinaryHeap::new();
    heap.push(PairNode { upper: pair_upper(&root, &root), a: root.clone(), b: root });
    let mut dropped = T::zero();
    let mut nodes = 0;
    while let Some(top) = heap.peek() {
        if top.upper <= lower + tol || nodes >= max_nodes {
            break;
        }
        let PairNode { a, b, .. } = heap.pop().expect("peeked");
        nodes += 1;
        let same = a.word == b.word;
        let (split_a, split_b) = if same { (true, true) } else { (a.radius >= b.radius, a.radius < b.radius) };
        let left = if split_a { att.children(&a) } else { vec![a.clone()] };
        let right = if split_b { att.children(&b) } else { vec![b.clone()] };
        let left_reps: Vec<Vec<Vec<T>>> = left.iter().map(|p| att.representatives(p)).collect();
        let right_reps: Vec<Vec<Vec<T>>> = right.iter().map(|p| att.representatives(p)).collect();
        for (i, pa) in left.iter().enumerate() {
            for (j, pb) in right.iter().enumerate() {
                if same && j < i {
                    continue;
                }
                for x in &left_reps[i] {
                    for y in &right_reps[j] {
                        lower = lower.max(linalg::dist(x, y));
                    }
                }
                let upper = pair_upper(pa, pb);
                if !seen.insert(key(pa, pb)) {
                    continue;
                }
                if upper > lower + tol {
                    heap.push(PairNode { upper, a: pa.clone(), b: pb.clone() });
                } else {
                    dropped = dropped.max(upper);
                }
            }
        }
    }
    let remaining = heap.peek().map_or(T::zero(), |n| n.upper);
    let upper = lower.max(dropped).max(remaining);
    DiameterBracket { lower, upper, converged: upper - lower <= tol }
}
