//! Open set condition with convex candidates. Containment of the images is
//! checked on vertices against facet inequalities, disjointness of the open
//! images by separating axes.

use serde::{Deserialize, Serialize};

use crate::attractor::Attractor;
use crate::dimensions::attractor_sample;
use crate::geometry::Similitude;
use crate::linalg;
use crate::scalar::Real;
use crate::verdict::{Certificate, Resolution, Verdict, Witness};
use crate::words;

/// A closed convex polytope `{x : ⟨n, x⟩ ≤ b for every facet}` whose
/// interior is the candidate open set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ConvexCandidate<T> {
    pub name: String,
    pub vertices: Vec<Vec<T>>,
    facets: Vec<(Vec<T>, T)>,
    /// Edge directions, needed for separating axes in three dimensions.
    edges: Vec<Vec<T>>,
}

impl<T: Real> ConvexCandidate<T> {
    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Axis-parallel box `[lo, hi]`, any `d ≤ 3`. `None` if some side is
    /// degenerate.
    pub fn boxed(name: impl Into<String>, lo: &[T], hi: &[T]) -> Option<Self> {
        let d = lo.len();
        if d == 0 || d > 3 || hi.len() != d || lo.iter().zip(hi).any(|(&l, &h)| !(h > l)) {
            return None;
        }
        let vertices = (0..1usize << d)
            .map(|mask| (0..d).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }).collect())
            .collect();
        let mut facets = vec![];
        let mut edges = vec![];
        for i in 0..d {
            let e: Vec<T> = (0..d).map(|j| if j == i { T::one() } else { T::zero() }).collect();
            facets.push((e.clone(), hi[i]));
            facets.push((e.iter().map(|&v| -v).collect(), -lo[i]));
            edges.push(e);
        }
        Some(ConvexCandidate { name: name.into(), vertices, facets, edges })
    }

    pub fn interval(name: impl Into<String>, lo: T, hi: T) -> Option<Self> {
        Self::boxed(name, &[lo], &[hi])
    }

    /// Convex hull of planar points (monotone chain). `None` if the hull
    /// has no interior.
    pub fn polygon(name: impl Into<String>, points: &[Vec<T>]) -> Option<Self> {
        if points.iter().any(|p| p.len() != 2) {
            return None;
        }
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return None;
        }
        let facets = (0..hull.len())
            .map(|i| {
                let (p, q) = (&hull[i], &hull[(i + 1) % hull.len()]);
                let n = vec![q[1] - p[1], p[0] - q[0]];
                let b = linalg::dot(&n, p);
                (n, b)
            })
            .collect();
        Some(ConvexCandidate { name: name.into(), vertices: hull, facets, edges: vec![] })
    }

    /// Smallest signed distance from `x` to the facets; positive inside.
    pub fn interior_margin(&self, x: &[T]) -> T {
        self.facets.iter().map(|(n, b)| (*b - linalg::dot(n, x)) / linalg::norm(n)).fold(T::infinity(), T::min)
    }

    fn tolerance(&self) -> T {
        let size = self.vertices.iter().flatten().fold(T::one(), |m, v| m.max(v.abs()));
        T::exact_tol() * size
    }
}

/// Counter-clockwise hull without collinear points.
fn convex_hull<T: Real>(points: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut pts: Vec<Vec<T>> = points.to_vec();
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &[T], a: &[T], b: &[T]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<Vec<T>> = vec![];
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= T::zero() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<T>> = vec![];
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= T::zero() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Fixed points of all composites of length at most two; their hull is
/// usually the hull of `K`.
fn hull_generators<T: Real>(att: &Attractor<T>) -> Vec<Vec<T>> {
    let k = att.k();
    let mut pts = vec![];
    for n in 1..=2 {
        let Ok(ws) = words::enumerate_level(k, n, usize::MAX) else {
            continue;
        };
        pts.extend(ws.iter().filter_map(|w| att.ifs().composite(w).fixed_point()));
    }
    pts
}

/// Built-in candidates: the convex hull (planar only) and the bounding box
/// of the fixed points of short composites.
pub fn builtin_candidates<T: Real>(att: &Attractor<T>) -> Vec<ConvexCandidate<T>> {
    let d = att.dim();
    let pts = hull_generators(att);
    let mut out = vec![];
    if d == 2 {
        out.extend(ConvexCandidate::polygon("convex hull", &pts));
    }
    if d <= 3 {
        let lo: Vec<T> = (0..d).map(|i| pts.iter().fold(T::infinity(), |m, p| m.min(p[i]))).collect();
        let hi: Vec<T> = (0..d).map(|i| pts.iter().fold(T::neg_infinity(), |m, p| m.max(p[i]))).collect();
        let name = if d == 1 { "interval hull" } else { "bounding box" };
        out.extend(ConvexCandidate::boxed(name, &lo, &hi));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct OscSearch<T> {
    pub verdict: Verdict<T>,
    pub certified: Option<ConvexCandidate<T>>,
    /// Candidates tried and why each was rejected.
    pub rejected: Vec<String>,
}

/// Holds with the first candidate `V` such that every `f_i(V̄) ⊆ V̄` and the
/// open images are pairwise disjoint. Fails only for identical maps.
pub fn osc_certificate_search<T: Real>(att: &Attractor<T>, candidates: &[ConvexCandidate<T>]) -> OscSearch<T> {
    let res = Resolution::new(0, T::exact_tol());
    let maps = att.ifs().maps();
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            if maps[i].approx_eq(&maps[j], T::map_tol()) {
                let verdict = Verdict::fails(Witness::IdenticalImages { i: i + 1, j: j + 1 }, res)
                    .with_note("identical maps give identical images of every open set");
                return OscSearch { verdict, certified: None, rejected: vec![] };
            }
        }
    }
    let mut rejected = vec![];
    for cand in candidates {
        if cand.dim() != att.dim() {
            rejected.push(format!("{}: dimension {} does not match", cand.name, cand.dim()));
            continue;
        }
        match check_candidate(maps, cand) {
            Ok(()) => {
                let verdict = Verdict::holds(
                    Certificate::OpenSet { candidate: cand.name.clone(), vertices: cand.vertices.clone() },
                    res,
                );
                return OscSearch { verdict, certified: Some(cand.clone()), rejected };
            }
            Err(why) => rejected.push(format!("{}: {why}", cand.name)),
        }
    }
    let mut verdict = Verdict::inconclusive(res);
    for r in &rejected {
        verdict = verdict.with_note(r.clone());
    }
    OscSearch { verdict, certified: None, rejected }
}

fn check_candidate<T: Real>(maps: &[Similitude<T>], cand: &ConvexCandidate<T>) -> Result<(), String> {
    let tol = cand.tolerance();
    let images: Vec<Vec<Vec<T>>> =
        maps.iter().map(|f| cand.vertices.iter().map(|v| f.apply_unchecked(v)).collect()).collect();
    for (i, img) in images.iter().enumerate() {
        for x in img {
            if cand.facets.iter().any(|(n, b)| linalg::dot(n, x) > *b + tol * linalg::norm(n)) {
                return Err(format!("image {} leaves the candidate", i + 1));
            }
        }
    }
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            let axes = separating_axes(&maps[i], &maps[j], cand);
            let separated = axes.iter().any(|a| {
                let (lo_i, hi_i) = project(&images[i], a);
                let (lo_j, hi_j) = project(&images[j], a);
                let slack = tol * linalg::norm(a);
                hi_i <= lo_j + slack || hi_j <= lo_i + slack
            });
            if !separated {
                return Err(format!("images {} and {} overlap", i + 1, j + 1));
            }
        }
    }
    Ok(())
}

fn rotate<T: Real>(f: &Similitude<T>, v: &[T]) -> Vec<T> {
    linalg::mat_vec(f.orthogonal(), v)
}

/// Facet normals of both images, plus cross products of their edges in
/// three dimensions.
fn separating_axes<T: Real>(f: &Similitude<T>, g: &Similitude<T>, cand: &ConvexCandidate<T>) -> Vec<Vec<T>> {
    let mut axes: Vec<Vec<T>> = vec![];
    for (n, _) in &cand.facets {
        axes.push(rotate(f, n));
        axes.push(rotate(g, n));
    }
    if cand.dim() == 3 {
        let small = T::exact_tol();
        for e in &cand.edges {
            for e2 in &cand.edges {
                let (u, v) = (rotate(f, e), rotate(g, e2));
                let c = vec![u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
                if linalg::norm(&c) > small {
                    axes.push(c);
                }
            }
        }
    }
    axes
}

fn project<T: Real>(points: &[Vec<T>], axis: &[T]) -> (T, T) {
    points.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), p| {
        let t = linalg::dot(p, axis);
        (lo.min(t), hi.max(t))
    })
}

/// Sample depth used when looking for an attractor point inside `V`.
fn sosc_depth(k: usize) -> usize {
    (1..=12).take_while(|&q| words::level_size(k, q).is_some_and(|s| s <= 4096)).last().unwrap_or(1)
}

/// Holds with the sample point of `K` deepest inside `V`.
pub fn sosc_check<T: Real>(att: &Attractor<T>, candidate: &ConvexCandidate<T>) -> Verdict<T> {
    let depth = sosc_depth(att.k());
    let res = Resolution::new(depth, T::exact_tol());
    let Ok(sample) = attractor_sample(att, depth, usize::MAX) else {
        return Verdict::inconclusive(res);
    };
    let best = sample.into_iter().map(|x| (candidate.interior_margin(&x), x)).fold(
        None,
        |best: Option<(T, Vec<T>)>, (m, x)| match best {
            Some((bm, _)) if bm >= m => best,
            _ => Some((m, x)),
        },
    );
    match best {
        Some((margin, point)) if margin > candidate.tolerance() => {
            Verdict::holds(Certificate::InteriorPoint { point, margin }, res)
        }
        _ => Verdict::inconclusive(res).with_note("no sample point strictly inside the open set"),
    }
}
