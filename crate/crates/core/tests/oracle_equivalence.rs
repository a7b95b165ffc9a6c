mod common;

use common::brute::{covered_by_against_grid, exhaustive_min_weight};
use selfsim_core::{min_subcover_weight, similarity_dimension, Oracle};

#[test]
fn subcover_weight_matches_exhaustive_enumeration() {
    for att in common::corpus().into_iter().filter(|a| a.k() <= 3) {
        let alpha = similarity_dimension(&att.ifs().ratios(), 1e-12).unwrap();
        let oracle = Oracle::with_defaults(&att);
        for max_level in 1..=2 {
            for s in [alpha, alpha - 0.2, alpha + 0.2, 0.5] {
                let ours = min_subcover_weight(&oracle, s, max_level, 10_000).unwrap();
                assert!(!ours.budget_exhausted);
                let brute = exhaustive_min_weight(&att, s, max_level, max_level + 5);
                assert!(
                    (ours.weight - brute).abs() <= 1e-12 * brute,
                    "{} L={max_level} s={s}: {} vs {brute}",
                    att.ifs().label(),
                    ours.weight
                );
            }
        }
    }
}

#[test]
fn covered_by_matches_grid_oracle_on_the_line() {
    let line = [common::bisection(), common::cantor(), common::duplicate_cantor(), common::mattila_proj(0.7)];
    let (mut holds, mut decided) = (0, 0);
    for att in &line {
        let g = covered_by_against_grid(att);
        assert!(g.disagreements.is_empty(), "{:?}", g.disagreements);
        assert!(g.decided * 10 >= g.total * 9, "{}: only {} of {} decided", att.ifs().label(), g.decided, g.total);
        holds += g.holds;
        decided += g.decided;
    }
    assert!(holds > 0 && holds < decided, "{holds} of {decided}");
}
