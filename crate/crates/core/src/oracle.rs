//! Three-valued geometric decisions about pieces: distance brackets,
//! containment, intersection and coverage.
//!
//! Every `Fails` witness is an exact attractor point (a composite applied to
//! a fixed point) whose distance to the other set is bounded below through
//! ball enclosures. Every `Holds` rests on a word match `f_B⁻¹ ∘ f_A = f_w`,
//! a coincidence of exact points, or a complete subdivision.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::attractor::{Attractor, Piece};
use crate::config::Config;
use crate::geometry::Similitude;
use crate::linalg;
use crate::scalar::Real;
use crate::verdict::{Certificate, Discharge, ExposedPoint, Resolution, Verdict, Witness};
use crate::words::{is_prefix, Word};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DistanceBracket<T> {
    pub lower: T,
    pub upper: T,
    pub nodes: usize,
    /// The node budget ran out; the bracket is valid but loose.
    pub budget_exhausted: bool,
}

/// Outcome of comparing a point against a piece at a threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Proximity<T> {
    /// Certified `dist(x, K_B) >= lower > threshold`.
    Far(T),
    /// An exact point of `K_B` lies within the threshold.
    Near(T),
    Unknown,
}

/// Summary of a pair descent between two pieces.
#[derive(Clone, Debug)]
pub struct Contacts<T> {
    /// Smallest certified gap among separated sub-pairs.
    pub min_gap: T,
    /// Sub-pairs still touching at the depth limit.
    pub leaves: Vec<(Word, Word)>,
    /// Two exact points within the rounding margin, if any were seen.
    pub contact: Option<(Vec<T>, Vec<T>, T)>,
    /// Closest pair of exact points seen.
    pub closest: Option<(Vec<T>, Vec<T>, T)>,
    pub nodes: usize,
    pub budget_exhausted: bool,
    /// Stopped because more than the allowed number of leaves appeared.
    pub overflow: bool,
}

impl<T: Real> Contacts<T> {
    /// Every sub-pair was separated.
    pub fn disjoint(&self) -> bool {
        self.leaves.is_empty() && !self.budget_exhausted && !self.overflow && self.contact.is_none()
    }

    pub fn complete(&self) -> bool {
        !self.budget_exhausted && !self.overflow
    }
}

/// A proper descendant `sub` of `a` equal to the piece `sub_in_b` below `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommonSub {
    pub sub: Word,
    pub sub_in_b: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct MemoKey {
    depth: usize,
    map: Vec<i64>,
}

pub struct Oracle<'a, T: Real> {
    att: &'a Attractor<T>,
    eps: T,
    depth: usize,
    nodes: usize,
    map_tol: T,
    margin: T,
    memo: Mutex<HashMap<MemoKey, Option<Word>>>,
}

impl<'a, T: Real> Oracle<'a, T> {
    pub fn new(att: &'a Attractor<T>, config: &Config<T>) -> Self {
        let scale = att.root_radius() + linalg::norm(att.root_center());
        Oracle {
            att,
            eps: config.eps_for(att),
            depth: config.depth_for(att),
            nodes: config.query_nodes,
            map_tol: config.map_tol,
            margin: T::exact_tol() * scale,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_defaults(att: &'a Attractor<T>) -> Self {
        Self::new(att, &Config::default())
    }

    pub fn attractor(&self) -> &'a Attractor<T> {
        self.att
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node_budget(&self) -> usize {
        self.nodes
    }

    /// Distances above this are treated as certified positive; it absorbs
    /// rounding in centres and exact points.
    pub fn margin(&self) -> T {
        self.margin
    }

    pub fn resolution(&self) -> Resolution<T> {
        Resolution::new(self.depth, self.eps)
    }

    // ----- distances -------------------------------------------------------

    /// Best-first bracket of `dist(x, K_B)` over descendants of `B` down to
    /// relative depth `q`.
    pub fn point_piece_distance(&self, x: &[T], piece: &Piece<T>, q: usize) -> DistanceBracket<T> {
        let mut heap = BinaryHeap::new();
        let mut upper = self.nearest_rep(x, piece);
        let mut seq = 0usize;
        heap.push(Node { key: ball_lower(x, piece), seq, depth: 0, piece: piece.clone() });
        let mut leaf_lower = T::infinity();
        let mut nodes = 0;
        let mut exhausted = false;
        let mut lower = None;
        while let Some(node) = heap.pop() {
            if node.key >= upper {
                lower = Some(node.key);
                break;
            }
            if nodes >= self.nodes {
                exhausted = true;
                lower = Some(node.key);
                break;
            }
            nodes += 1;
            if node.depth >= q {
                leaf_lower = leaf_lower.min(node.key);
                continue;
            }
            for child in self.att.children(&node.piece) {
                upper = upper.min(self.nearest_rep(x, &child));
                seq += 1;
                heap.push(Node { key: ball_lower(x, &child), seq, depth: node.depth + 1, piece: child });
            }
        }
        let lower = lower.map_or(leaf_lower, |l| l.min(leaf_lower)).min(upper).max(T::zero());
        DistanceBracket { lower, upper, nodes, budget_exhausted: exhausted }
    }

    /// Decides whether `dist(x, K_B) > threshold`, searching closest
    /// descendants first. Used with `threshold = margin` as a membership
    /// test and with a ball radius to clear whole balls.
    pub fn proximity(&self, x: &[T], piece: &Piece<T>, threshold: T) -> Proximity<T> {
        let limit = self.depth * 2 + 8;
        let mut stack = vec![(piece.clone(), 0usize)];
        let mut far = T::infinity();
        let mut nodes = 0;
        while let Some((node, depth)) = stack.pop() {
            let lower = ball_lower(x, &node);
            if lower > threshold {
                far = far.min(lower);
                continue;
            }
            let near = self.nearest_rep(x, &node);
            if near <= threshold {
                return Proximity::Near(near);
            }
            nodes += 1;
            if depth >= limit || nodes >= self.nodes || node.radius <= self.margin {
                return Proximity::Unknown;
            }
            let mut kids = self.att.children(&node);
            kids.sort_by(|a, b| cmp_t(ball_lower(x, b), ball_lower(x, a)));
            stack.extend(kids.into_iter().map(|c| (c, depth + 1)));
        }
        Proximity::Far(far)
    }

    fn nearest_rep(&self, x: &[T], piece: &Piece<T>) -> T {
        self.att.representatives(piece).iter().map(|p| linalg::dist(x, p)).fold(T::infinity(), T::min)
    }

    // ----- containment -----------------------------------------------------

    /// A word `w` with `f_B⁻¹ ∘ f_A ≈ f_w`, which gives `K_A ⊆ K_B`.
    pub fn subset_word(&self, a: &Piece<T>, b: &Piece<T>) -> Option<Word> {
        self.subset_word_with(a, b, self.map_tol)
    }

    fn subset_word_with(&self, a: &Piece<T>, b: &Piece<T>, tol: T) -> Option<Word> {
        if let Some(suffix) = a.word.strip_prefix(&b.word) {
            return Some(suffix);
        }
        let h = a.map.relative_to(&b.map).ok()?;
        if h.scale() > T::one() + tol {
            return None;
        }
        let key = self.memo_key(&h, tol);
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let found = self.search_word(&h, tol);
        self.memo.lock().expect("memo lock").insert(key, found.clone());
        found
    }

    fn memo_key(&self, h: &Similitude<T>, tol: T) -> MemoKey {
        let step = T::exact_tol().to_f64_lossy();
        let quant = |v: T| (v.to_f64_lossy() / step).round() as i64;
        let mut map = vec![quant(h.scale()), quant(tol)];
        map.extend(h.orthogonal().iter().map(|&v| quant(v)));
        map.extend(h.translation().iter().map(|&v| quant(v)));
        MemoKey { depth: self.depth, map }
    }

    /// Depth-first over words, lexicographic, pruning subtrees whose ratio
    /// falls below the target or whose ball misses `h(p1)`.
    fn search_word(&self, h: &Similitude<T>, tol: T) -> Option<Word> {
        let target = h.scale();
        let anchor = h.apply_unchecked(&self.att.seeds()[0]);
        let coord_scale = T::one() + linalg::norm(self.att.root_center()) + self.att.root_radius();
        let slack = tol * coord_scale;
        let maps = self.att.ifs().maps();
        let mut stack = vec![(Word::empty(), Similitude::identity(self.att.dim()))];
        let mut nodes = 0;
        while let Some((word, f)) = stack.pop() {
            nodes += 1;
            if nodes > self.nodes {
                return None;
            }
            let c = f.scale();
            if c < target * (T::one() - tol) {
                continue;
            }
            let centre = f.apply_unchecked(self.att.root_center());
            if linalg::dist(&centre, &anchor) > c * self.att.root_radius() + slack {
                continue;
            }
            if (c - target).abs() <= tol * target && maps_match(&f, h, tol, slack) {
                return Some(word);
            }
            for j in (1..=maps.len() as u16).rev() {
                let g = f.compose_unchecked(&maps[usize::from(j) - 1]);
                stack.push((word.child(j), g));
            }
        }
        None
    }

    pub fn piece_subset(&self, a: &Piece<T>, b: &Piece<T>, tol: T, q: usize) -> Verdict<T> {
        let res = Resolution::new(q, self.eps);
        if let Some(word) = self.subset_word_with(a, b, tol) {
            return Verdict::holds(Certificate::WordMatch { word }, res);
        }
        self.covered_by(a, std::slice::from_ref(b), self.eps, q)
    }

    // ----- intersection ----------------------------------------------------

    pub fn pieces_intersect(&self, a: &Piece<T>, b: &Piece<T>, eps: T, q: usize) -> Verdict<T> {
        let mut res = Resolution::new(q, eps);
        if a.word == b.word || self.subset_word(a, b).is_some() || self.subset_word(b, a).is_some() {
            let x = self.att.representatives(a).swap_remove(0);
            return Verdict::holds(Certificate::PointPair { a: x.clone(), b: x, distance: T::zero() }, res);
        }
        let contacts = self.contacts(a, b, q, None, true);
        res.nodes = contacts.nodes;
        res.budget_exhausted = contacts.budget_exhausted;
        if let Some((x, y, d)) = contacts.contact {
            return Verdict::holds(Certificate::PointPair { a: x, b: y, distance: d }, res);
        }
        if contacts.disjoint() {
            return Verdict::fails(Witness::Gap { gap: contacts.min_gap }, res);
        }
        match contacts.closest {
            Some((x, y, d)) if d <= eps => Verdict::holds(Certificate::PointPair { a: x, b: y, distance: d }, res),
            _ => Verdict::inconclusive(res),
        }
    }

    /// Depth-first descent over pairs of sub-pieces of `a` and `b`, closest
    /// pairs first. Pairs whose balls are more than `margin` apart are
    /// separated; pairs still touching at relative depth `q` are leaves.
    pub fn contacts(
        &self,
        a: &Piece<T>,
        b: &Piece<T>,
        q: usize,
        max_leaves: Option<usize>,
        stop_on_contact: bool,
    ) -> Contacts<T> {
        let mut out = Contacts {
            min_gap: T::infinity(),
            leaves: vec![],
            contact: None,
            closest: None,
            nodes: 0,
            budget_exhausted: false,
            overflow: false,
        };
        let mut stack = vec![(a.clone(), b.clone(), 0usize)];
        while let Some((d, e, depth)) = stack.pop() {
            let gap = linalg::dist(&d.center, &e.center) - d.radius - e.radius;
            if gap > self.margin {
                out.min_gap = out.min_gap.min(gap);
                continue;
            }
            if out.nodes >= self.nodes {
                out.budget_exhausted = true;
                break;
            }
            out.nodes += 1;
            let (x, y, dist) = closest_reps(&self.att.representatives(&d), &self.att.representatives(&e));
            if dist <= self.margin && out.contact.is_none() {
                out.contact = Some((x.clone(), y.clone(), dist));
                if stop_on_contact {
                    out.closest = Some((x, y, dist));
                    break;
                }
            }
            if out.closest.as_ref().is_none_or(|c| dist < c.2) {
                out.closest = Some((x, y, dist));
            }
            if depth >= q {
                out.leaves.push((d.word, e.word));
                if max_leaves.is_some_and(|m| out.leaves.len() > m) {
                    out.overflow = true;
                    break;
                }
                continue;
            }
            let left = if d.radius >= e.radius { self.att.children(&d) } else { vec![d.clone()] };
            let right = if e.radius >= d.radius { self.att.children(&e) } else { vec![e.clone()] };
            let mut next = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let gap = linalg::dist(&l.center, &r.center) - l.radius - r.radius;
                    next.push((gap, l.clone(), r.clone()));
                }
            }
            next.sort_by(|u, v| cmp_t(v.0, u.0));
            stack.extend(next.into_iter().map(|(_, l, r)| (l, r, depth + 1)));
        }
        out
    }

    /// Searches descendants of `a` at relative depth `1..=r` for one that
    /// lies inside `b` by a word match.
    pub fn common_sub_piece(&self, a: &Piece<T>, b: &Piece<T>, r: usize) -> Option<CommonSub> {
        let mut frontier = vec![a.clone()];
        for _ in 0..r {
            let mut next = vec![];
            for p in &frontier {
                for c in self.att.children(p) {
                    if !balls_meet(&c, b, self.margin) {
                        continue;
                    }
                    if let Some(w) = self.subset_word(&c, b) {
                        return Some(CommonSub { sub_in_b: b.word.concat(&w), sub: c.word });
                    }
                    next.push(c);
                }
            }
            if next.len() > self.nodes {
                return None;
            }
            frontier = next;
        }
        None
    }

    // ----- coverage --------------------------------------------------------

    /// Breadth-first subdivision of `a`. A descendant is discharged only by a
    /// word match into a family member; a witness is an exact point of a
    /// descendant certified away from every member.
    pub fn covered_by(&self, a: &Piece<T>, family: &[Piece<T>], eps: T, q: usize) -> Verdict<T> {
        let mut res = Resolution::new(q, eps);
        if let Some(member) = family.iter().find(|f| is_prefix(&f.word, &a.word)) {
            let via = a.word.strip_prefix(&member.word).unwrap_or_default();
            let assignment = vec![Discharge { piece: a.word.clone(), member: member.word.clone(), via }];
            return Verdict::holds(Certificate::Covering { assignment }, res);
        }
        let relevant: Vec<usize> = (0..family.len()).filter(|&i| balls_meet(a, &family[i], self.margin)).collect();
        let mut queue = VecDeque::from([(a.clone(), relevant)]);
        let mut assignment = vec![];
        let mut unresolved = false;
        while let Some((d, rel)) = queue.pop_front() {
            if res.nodes >= self.nodes {
                res.budget_exhausted = true;
                unresolved = true;
                break;
            }
            res.nodes += 1;
            let reps = self.att.representatives(&d);
            let discharged = rel.iter().find_map(|&i| {
                let f = &family[i];
                // exact points of D must lie in the ball of F
                if reps.iter().any(|x| linalg::dist(x, &f.center) > f.radius + self.margin) {
                    return None;
                }
                self.subset_word(&d, f).map(|via| Discharge { piece: d.word.clone(), member: f.word.clone(), via })
            });
            if let Some(dis) = discharged {
                assignment.push(dis);
                continue;
            }
            let rel: Vec<usize> = rel.into_iter().filter(|&i| balls_meet(&d, &family[i], self.margin)).collect();
            if let Some(w) = self.exposed_rep(&d, family, &rel) {
                return Verdict::fails(w, res);
            }
            if d.word.len() - a.word.len() >= q {
                unresolved = true;
                continue;
            }
            for c in self.att.children(&d) {
                queue.push_back((c, rel.clone()));
            }
        }
        if unresolved {
            Verdict::inconclusive(res)
        } else {
            Verdict::holds(Certificate::Covering { assignment }, res)
        }
    }

    /// Breadth-first search below `a`, down to relative depth `q`, for an
    /// exact point certified away from every member of `others`.
    pub fn exposed_point(&self, a: &Piece<T>, others: &[Piece<T>], q: usize) -> Option<ExposedPoint<T>> {
        let rel: Vec<usize> = (0..others.len()).filter(|&i| balls_meet(a, &others[i], self.margin)).collect();
        let mut queue = VecDeque::from([(a.clone(), rel)]);
        let mut nodes = 0;
        while let Some((d, rel)) = queue.pop_front() {
            nodes += 1;
            if nodes > self.nodes {
                return None;
            }
            let rel: Vec<usize> = rel.into_iter().filter(|&i| balls_meet(&d, &others[i], self.margin)).collect();
            // a descendant inside another piece has no exposed points
            if rel.iter().any(|&i| self.subset_word(&d, &others[i]).is_some()) {
                continue;
            }
            if let Some(Witness::Point { point, distance_lower, .. }) = self.exposed_rep(&d, others, &rel) {
                return Some(ExposedPoint { piece: a.word.clone(), point, distance_lower });
            }
            if d.word.len() - a.word.len() < q {
                for c in self.att.children(&d) {
                    queue.push_back((c, rel.clone()));
                }
            }
        }
        None
    }

    /// An exact point of `d` certified away from all of `family`. Members
    /// outside `rel` are cleared by their balls alone.
    fn exposed_rep(&self, d: &Piece<T>, family: &[Piece<T>], rel: &[usize]) -> Option<Witness<T>> {
        'reps: for x in self.att.representatives(d) {
            let mut lower = T::max_value();
            for (i, f) in family.iter().enumerate() {
                let bound = ball_lower(&x, f);
                if !rel.contains(&i) && bound > self.margin {
                    lower = lower.min(bound);
                    continue;
                }
                match self.proximity(&x, f, self.margin) {
                    Proximity::Far(l) => lower = lower.min(l),
                    _ => continue 'reps,
                }
            }
            return Some(Witness::Point { piece: d.word.clone(), point: x, distance_lower: lower });
        }
        None
    }
}

fn maps_match<T: Real>(f: &Similitude<T>, h: &Similitude<T>, tol: T, slack: T) -> bool {
    f.orthogonal().iter().zip(h.orthogonal()).all(|(&u, &v)| (u - v).abs() <= tol)
        && f.translation().iter().zip(h.translation()).all(|(&u, &v)| (u - v).abs() <= slack)
}

/// `(|x − c| − r)₊`, a lower bound for the distance from `x` to the piece.
pub(crate) fn ball_lower<T: Real>(x: &[T], piece: &Piece<T>) -> T {
    (linalg::dist(x, &piece.center) - piece.radius).max(T::zero())
}

pub(crate) fn balls_meet<T: Real>(a: &Piece<T>, b: &Piece<T>, margin: T) -> bool {
    linalg::dist(&a.center, &b.center) <= a.radius + b.radius + margin
}

fn closest_reps<T: Real>(xs: &[Vec<T>], ys: &[Vec<T>]) -> (Vec<T>, Vec<T>, T) {
    let mut best = (0, 0, T::infinity());
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let d = linalg::dist(x, y);
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    (xs[best.0].clone(), ys[best.1].clone(), best.2)
}

fn cmp_t<T: Real>(a: T, b: T) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Min-heap entry keyed by a distance lower bound.
struct Node<T> {
    key: T,
    seq: usize,
    depth: usize,
    piece: Piece<T>,
}

impl<T: Real> PartialEq for Node<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Node<T> {}
impl<T: Real> PartialOrd for Node<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Node<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_t(other.key, self.key).then_with(|| other.seq.cmp(&self.seq))
    }
}
