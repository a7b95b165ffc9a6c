//! Small systems shared by the unit tests.

use crate::attractor::{Attractor, Ifs};
use crate::geometry::Similitude;

fn build(label: &str, maps: Vec<Similitude<f64>>) -> Attractor<f64> {
    Attractor::new(Ifs::new(label, maps).unwrap()).unwrap()
}

fn homotheties(label: &str, c: f64, shifts: &[&[f64]]) -> Attractor<f64> {
    build(label, shifts.iter().map(|t| Similitude::homothety(c, t.to_vec())).collect())
}

pub fn bisection() -> Attractor<f64> {
    homotheties("bisection", 0.5, &[&[0.0], &[0.5]])
}

pub fn cantor() -> Attractor<f64> {
    homotheties("cantor", 1.0 / 3.0, &[&[0.0], &[2.0 / 3.0]])
}

pub fn duplicate_cantor() -> Attractor<f64> {
    homotheties("duplicate_cantor", 1.0 / 3.0, &[&[0.0], &[0.0], &[2.0 / 3.0]])
}

pub fn gasket() -> Attractor<f64> {
    let h = 3f64.sqrt() / 2.0;
    homotheties("gasket", 0.5, &[&[0.0, 0.0], &[0.5, 0.0], &[0.25, h / 2.0]])
}

pub fn squares() -> Attractor<f64> {
    homotheties("squares", 0.5, &[&[0.0, 0.0], &[0.5, 0.0], &[0.0, 0.5], &[0.5, 0.5]])
}

pub fn mattila() -> Attractor<f64> {
    let x3 = [0.5, 0.5 / 3f64.sqrt()];
    let t = |p: [f64; 2]| vec![2.0 / 3.0 * p[0], 2.0 / 3.0 * p[1]];
    build(
        "mattila",
        vec![
            Similitude::homothety(1.0 / 3.0, t([0.0, 0.0])),
            Similitude::homothety(1.0 / 3.0, t([1.0, 0.0])),
            Similitude::homothety(1.0 / 3.0, t(x3)),
        ],
    )
}

pub fn mattila_proj(theta: f64) -> Attractor<f64> {
    let (s, c) = theta.sin_cos();
    let x3 = [0.5, 0.5 / 3f64.sqrt()];
    let pts = [[0.0, 0.0], [1.0, 0.0], x3];
    build(
        "mattila_proj",
        pts.iter().map(|p| Similitude::homothety(1.0 / 3.0, vec![2.0 / 3.0 * (p[0] * c + p[1] * s)])).collect(),
    )
}
