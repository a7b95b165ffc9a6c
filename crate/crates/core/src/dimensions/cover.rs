//! Minimum-weight set cover by depth-first branch and bound on bitsets.
//!
//! Candidates are kept in the order they were added; ties between equally
//! good branches are always broken towards the lower index, so the result
//! depends only on the instance and the node budget.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bits::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    /// `|self \ covered|`.
    fn count_new(&self, covered: &Bits) -> usize {
        self.0.iter().zip(&covered.0).map(|(a, c)| (a & !c).count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b))
    }
}

#[derive(Clone, Debug)]
pub struct CoverInstance {
    universe: usize,
    sets: Vec<Bits>,
    weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverSolution {
    pub weight: f64,
    /// Indices of the chosen candidates, ascending.
    pub chosen: Vec<usize>,
    pub nodes: usize,
    pub budget_exhausted: bool,
}

/// Relative slack when comparing a branch against the incumbent.
const PRUNE_TOL: f64 = 1e-12;

impl CoverInstance {
    pub fn new(universe: usize) -> Self {
        CoverInstance { universe, sets: vec![], weights: vec![] }
    }

    pub fn add(&mut self, set: Bits, weight: f64) -> usize {
        self.sets.push(set);
        self.weights.push(weight);
        self.sets.len() - 1
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `None` when some element lies in no candidate.
    pub fn solve(&self, node_budget: usize) -> Option<CoverSolution> {
        let mut by_elem: Vec<Vec<usize>> = vec![vec![]; self.universe];
        for (i, s) in self.sets.iter().enumerate() {
            for e in s.iter() {
                by_elem[e].push(i);
            }
        }
        if by_elem.iter().any(Vec::is_empty) {
            return None;
        }
        let (greedy_weight, greedy) = self.greedy();
        let mut search = Search {
            inst: self,
            by_elem: &by_elem,
            best_weight: greedy_weight,
            best: greedy,
            nodes: 0,
            budget: node_budget,
            exhausted: false,
        };
        let mut chosen = vec![];
        search.dfs(&Bits::new(self.universe), &mut chosen, 0.0);
        let mut best = search.best;
        best.sort_unstable();
        Some(CoverSolution {
            weight: search.best_weight,
            chosen: best,
            nodes: search.nodes,
            budget_exhausted: search.exhausted,
        })
    }

    /// Greedy by price `w / |new|`, then drop redundant sets heaviest first.
    fn greedy(&self) -> (f64, Vec<usize>) {
        let mut covered = Bits::new(self.universe);
        let mut chosen = vec![];
        while covered.count() < self.universe {
            let pick = (0..self.sets.len())
                .filter_map(|i| {
                    let gain = self.sets[i].count_new(&covered);
                    (gain > 0).then(|| (self.weights[i] / gain as f64, i))
                })
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let Some((_, i)) = pick else { break };
            covered.union_with(&self.sets[i]);
            chosen.push(i);
        }
        let mut order = chosen.clone();
        order.sort_by(|&a, &b| self.weights[b].total_cmp(&self.weights[a]).then(a.cmp(&b)));
        for drop in order {
            let rest: Vec<usize> = chosen.iter().copied().filter(|&i| i != drop).collect();
            let mut cov = Bits::new(self.universe);
            for &i in &rest {
                cov.union_with(&self.sets[i]);
            }
            if cov.count() == self.universe {
                chosen = rest;
            }
        }
        (chosen.iter().map(|&i| self.weights[i]).sum(), chosen)
    }
}

struct Search<'a> {
    inst: &'a CoverInstance,
    by_elem: &'a [Vec<usize>],
    best_weight: f64,
    best: Vec<usize>,
    nodes: usize,
    budget: usize,
    exhausted: bool,
}

impl Search<'_> {
    fn dfs(&mut self, covered: &Bits, chosen: &mut Vec<usize>, cost: f64) {
        if self.exhausted {
            return;
        }
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        let universe = self.inst.universe;
        if covered.count() == universe {
            if cost < self.best_weight * (1.0 - PRUNE_TOL) {
                self.best_weight = cost;
                self.best = chosen.clone();
            }
            return;
        }
        // price lower bound: each uncovered element pays at least the
        // cheapest per-element price of a set containing it
        let gains: Vec<usize> = self.inst.sets.iter().map(|s| s.count_new(covered)).collect();
        let mut bound = 0.0;
        let mut pivot: Option<(usize, usize)> = None;
        for e in 0..universe {
            if covered.contains(e) {
                continue;
            }
            let cands = &self.by_elem[e];
            bound += cands.iter().map(|&i| self.inst.weights[i] / gains[i] as f64).fold(f64::INFINITY, f64::min);
            if pivot.is_none_or(|(_, n)| cands.len() < n) {
                pivot = Some((e, cands.len()));
            }
        }
        if cost + bound >= self.best_weight * (1.0 - PRUNE_TOL) {
            return;
        }
        let (e, _) = pivot.expect("an uncovered element exists");
        let mut options: Vec<usize> = self.by_elem[e].clone();
        options.sort_by(|&a, &b| {
            let pa = self.inst.weights[a] / gains[a] as f64;
            let pb = self.inst.weights[b] / gains[b] as f64;
            pa.total_cmp(&pb).then(a.cmp(&b))
        });
        for i in options {
            let mut next = covered.clone();
            next.union_with(&self.inst.sets[i]);
            chosen.push(i);
            self.dfs(&next, chosen, cost + self.inst.weights[i]);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(len: usize, elems: &[usize]) -> Bits {
        let mut b = Bits::new(len);
        for &e in elems {
            b.insert(e);
        }
        b
    }

    fn brute(inst: &CoverInstance) -> f64 {
        let n = inst.len();
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << n) {
            let mut cov = Bits::new(inst.universe);
            let mut w = 0.0;
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    cov.union_with(&inst.sets[i]);
                    w += inst.weights[i];
                }
            }
            if cov.count() == inst.universe {
                best = best.min(w);
            }
        }
        best
    }

    #[test]
    fn greedy_trap_is_escaped() {
        // optimum is {1, 2} at weight 1.05
        let mut inst = CoverInstance::new(6);
        inst.add(set(6, &[0, 1, 2, 3]), 1.0);
        inst.add(set(6, &[0, 1, 2, 4]), 0.55);
        inst.add(set(6, &[3, 5]), 0.5);
        inst.add(set(6, &[4, 5]), 0.5);
        inst.add(set(6, &[3, 4, 5]), 0.6);
        let sol = inst.solve(10_000).unwrap();
        assert!((sol.weight - brute(&inst)).abs() < 1e-15);
        assert_eq!(sol.chosen, vec![1, 2]);
    }

    #[test]
    fn infeasible_instance() {
        let mut inst = CoverInstance::new(3);
        inst.add(set(3, &[0, 1]), 1.0);
        assert!(inst.solve(100).is_none());
    }

    #[test]
    fn bits_roundtrip() {
        let b = set(130, &[0, 63, 64, 129]);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(b.count(), 4);
        assert_eq!(Bits::full(70).count(), 70);
    }

    proptest::proptest! {
        #[test]
        fn matches_exhaustive_search(
            universe in 1usize..7,
            raw in proptest::collection::vec((proptest::collection::vec(0usize..7, 1..4), 0.05f64..2.0), 1..9),
        ) {
            let mut inst = CoverInstance::new(universe);
            for (elems, w) in &raw {
                let elems: Vec<usize> = elems.iter().map(|e| e % universe).collect();
                inst.add(set(universe, &elems), *w);
            }
            let exhaustive = brute(&inst);
            match inst.solve(1_000_000) {
                Some(sol) => {
                    proptest::prop_assert!((sol.weight - exhaustive).abs() <= 1e-12 * exhaustive.max(1.0));
                    let mut cov = Bits::new(universe);
                    for &i in &sol.chosen {
                        cov.union_with(&inst.sets[i]);
                    }
                    proptest::prop_assert_eq!(cov.count(), universe);
                }
                None => proptest::prop_assert!(exhaustive.is_infinite()),
            }
        }
    }
}
