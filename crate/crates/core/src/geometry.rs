//! Euclidean similitudes `x ↦ c·Q·x + t` with `Q` orthogonal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Similitude<T> {
    scale: T,
    /// Row-major `d×d` orthogonal matrix.
    orthogonal: Vec<T>,
    translation: Vec<T>,
}

impl<T: Real> Similitude<T> {
    /// Builds a similitude, checking shapes and that `Q` preserves norms on
    /// the standard basis to within `orthogonality_tol`.
    pub fn new(scale: T, orthogonal: Vec<T>, translation: Vec<T>, orthogonality_tol: T) -> Result<Self> {
        let d = translation.len();
        if orthogonal.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, got: orthogonal.len() });
        }
        if !(scale > T::zero()) || !scale.is_finite() {
            return Err(Error::InvalidSystem(format!("scale {scale} must be positive and finite")));
        }
        let f = Similitude { scale, orthogonal, translation };
        if !f.is_orthogonal(orthogonality_tol) {
            return Err(Error::InvalidSystem("matrix is not orthogonal".into()));
        }
        Ok(f)
    }

    pub fn identity(d: usize) -> Self {
        Similitude { scale: T::one(), orthogonal: linalg::identity(d), translation: vec![T::zero(); d] }
    }

    /// `c·x + t` in any dimension.
    pub fn homothety(scale: T, translation: Vec<T>) -> Self {
        let d = translation.len();
        Similitude { scale, orthogonal: linalg::identity(d), translation }
    }

    /// Planar map given by a rotation angle (radians) and an optional
    /// reflection in the first axis, applied before the rotation.
    pub fn planar(scale: T, angle: T, reflect: bool, translation: [T; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        let flip = if reflect { -T::one() } else { T::one() };
        Similitude { scale, orthogonal: vec![c, -s * flip, s, c * flip], translation: translation.to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn orthogonal(&self) -> &[T] {
        &self.orthogonal
    }

    pub fn translation(&self) -> &[T] {
        &self.translation
    }

    /// `‖Q e_i‖ = 1` and `⟨Q e_i, Q e_j⟩ = 0` to within `tol`.
    pub fn is_orthogonal(&self, tol: T) -> bool {
        let d = self.dim();
        let qtq = linalg::mat_mul(&linalg::transpose(&self.orthogonal, d), &self.orthogonal, d);
        let id = linalg::identity::<T>(d);
        qtq.iter().zip(&id).all(|(&a, &b)| (a - b).abs() <= tol)
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_dim(x.len())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &[T]) -> Vec<T> {
        let d = x.len();
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            let row = &self.orthogonal[i * d..(i + 1) * d];
            out.push(self.scale * linalg::dot(row, x) + self.translation[i]);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Similitude<T>) -> Result<Similitude<T>> {
        self.check_dim(other.dim())?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Similitude<T>) -> Similitude<T> {
        Similitude {
            scale: self.scale * other.scale,
            orthogonal: linalg::mat_mul(&self.orthogonal, &other.orthogonal, self.dim()),
            translation: self.apply_unchecked(&other.translation),
        }
    }

    /// `other⁻¹ ∘ self`: the map `h` with `other ∘ h = self`. Its scale may
    /// exceed one.
    pub fn relative_to(&self, other: &Similitude<T>) -> Result<Similitude<T>> {
        self.check_dim(other.dim())?;
        let d = self.dim();
        let qt = linalg::transpose(&other.orthogonal, d);
        let shift = linalg::sub(&self.translation, &other.translation);
        let translation = linalg::mat_vec(&qt, &shift).into_iter().map(|v| v / other.scale).collect();
        Ok(Similitude {
            scale: self.scale / other.scale,
            orthogonal: linalg::mat_mul(&qt, &self.orthogonal, d),
            translation,
        })
    }

    pub fn approx_eq(&self, other: &Similitude<T>, tol: T) -> bool {
        self.dim() == other.dim()
            && (self.scale - other.scale).abs() <= tol
            && self.orthogonal.iter().zip(&other.orthogonal).all(|(&a, &b)| (a - b).abs() <= tol)
            && self.translation.iter().zip(&other.translation).all(|(&a, &b)| (a - b).abs() <= tol)
    }

    /// Unique fixed point of a contraction, from `(I − cQ)x = t`.
    pub fn fixed_point(&self) -> Option<Vec<T>> {
        if self.scale >= T::one() {
            return None;
        }
        let d = self.dim();
        let mut a = linalg::identity::<T>(d);
        for (entry, &q) in a.iter_mut().zip(&self.orthogonal) {
            *entry = *entry - self.scale * q;
        }
        linalg::solve(&a, &self.translation)
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), got })
        }
    }
}

/// `g⁻¹ ∘ f`.
pub fn relative_map<T: Real>(f: &Similitude<T>, g: &Similitude<T>) -> Result<Similitude<T>> {
    f.relative_to(g)
}

pub fn compose<T: Real>(f: &Similitude<T>, g: &Similitude<T>) -> Result<Similitude<T>> {
    f.compose(g)
}

pub fn approx_equal<T: Real>(f: &Similitude<T>, g: &Similitude<T>, tol: T) -> bool {
    f.approx_eq(g, tol)
}
