#![allow(dead_code)]

pub mod brute;

use selfsim_core::{Attractor64, Ifs, Similitude};

fn homotheties(label: &str, c: f64, shifts: &[Vec<f64>]) -> Attractor64 {
    let maps = shifts.iter().map(|t| Similitude::homothety(c, t.clone())).collect();
    Attractor64::new(Ifs::new(label, maps).unwrap()).unwrap()
}

pub fn bisection() -> Attractor64 {
    homotheties("bisection", 0.5, &[vec![0.0], vec![0.5]])
}

pub fn cantor() -> Attractor64 {
    homotheties("cantor", 1.0 / 3.0, &[vec![0.0], vec![2.0 / 3.0]])
}

pub fn duplicate_cantor() -> Attractor64 {
    homotheties("duplicate_cantor", 1.0 / 3.0, &[vec![0.0], vec![0.0], vec![2.0 / 3.0]])
}

pub fn gasket() -> Attractor64 {
    let h = 3f64.sqrt() / 2.0;
    homotheties("gasket", 0.5, &[vec![0.0, 0.0], vec![0.5, 0.0], vec![0.25, h / 2.0]])
}

pub fn squares() -> Attractor64 {
    homotheties("squares", 0.5, &[vec![0.0, 0.0], vec![0.5, 0.0], vec![0.0, 0.5], vec![0.5, 0.5]])
}

const MATTILA_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.28867513459481287]];

pub fn mattila() -> Attractor64 {
    let shifts: Vec<Vec<f64>> = MATTILA_VERTICES.iter().map(|p| vec![2.0 / 3.0 * p[0], 2.0 / 3.0 * p[1]]).collect();
    homotheties("mattila", 1.0 / 3.0, &shifts)
}

pub fn mattila_proj(theta: f64) -> Attractor64 {
    let (s, c) = theta.sin_cos();
    let shifts: Vec<Vec<f64>> = MATTILA_VERTICES.iter().map(|p| vec![2.0 / 3.0 * (p[0] * c + p[1] * s)]).collect();
    homotheties("mattila_proj", 1.0 / 3.0, &shifts)
}

pub fn corpus() -> Vec<Attractor64> {
    vec![bisection(), cantor(), gasket(), squares(), duplicate_cantor(), mattila(), mattila_proj(0.7)]
}
