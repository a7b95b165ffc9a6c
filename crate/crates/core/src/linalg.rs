//! Small dense vector and matrix helpers. Matrices are row-major `d*d` slices.

use crate::scalar::Real;

pub fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y)).sqrt()
}

pub fn norm<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn identity<T: Real>(d: usize) -> Vec<T> {
    let mut m = vec![T::zero(); d * d];
    for i in 0..d {
        m[i * d + i] = T::one();
    }
    m
}

pub fn mat_vec<T: Real>(m: &[T], x: &[T]) -> Vec<T> {
    let d = x.len();
    (0..d).map(|i| (0..d).fold(T::zero(), |acc, j| acc + m[i * d + j] * x[j])).collect()
}

pub fn mat_mul<T: Real>(a: &[T], b: &[T], d: usize) -> Vec<T> {
    let mut out = vec![T::zero(); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            for j in 0..d {
                out[i * d + j] = out[i * d + j] + aik * b[k * d + j];
            }
        }
    }
    out
}

pub fn transpose<T: Real>(m: &[T], d: usize) -> Vec<T> {
    let mut out = vec![T::zero(); d * d];
    for i in 0..d {
        for j in 0..d {
            out[j * d + i] = m[i * d + j];
        }
    }
    out
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot vanishes.
pub fn solve<T: Real>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    let d = b.len();
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..d {
        let pivot = (col..d).max_by(|&i, &j| {
            m[i * d + col].abs().partial_cmp(&m[j * d + col].abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot * d + col].abs() <= T::min_positive_value() {
            return None;
        }
        if pivot != col {
            for j in 0..d {
                m.swap(col * d + j, pivot * d + j);
            }
            rhs.swap(col, pivot);
        }
        for row in col + 1..d {
            let factor = m[row * d + col] / m[col * d + col];
            for j in col..d {
                m[row * d + j] = m[row * d + j] - factor * m[col * d + j];
            }
            rhs[row] = rhs[row] - factor * rhs[col];
        }
    }
    let mut x = vec![T::zero(); d];
    for row in (0..d).rev() {
        let tail = (row + 1..d).fold(T::zero(), |acc, j| acc + m[row * d + j] * x[j]);
        x[row] = (rhs[row] - tail) / m[row * d + row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let a = [2.0f64, 1.0, 1.0, 3.0];
        let x = solve(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12);
        assert!((x[1] - 1.4).abs() < 1e-12);
    }

    #[test]
    fn singular_system_is_rejected() {
        assert!(solve(&[1.0f64, 2.0, 2.0, 4.0], &[1.0, 1.0]).is_none());
    }
}
