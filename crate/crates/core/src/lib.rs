//! Analysis of self-similar sets generated by finitely many contracting
//! similitudes of `R^d`.
//!
//! The attractor `K` carries the natural fractal structure `Γ_n = {f_w(K) :
//! |w| = n}`. On top of it the crate computes the similarity dimension, the
//! fractal dimensions `dim_3` and `dim_4`, bounds for `H_4^α`, box-counting
//! estimates, and three-valued verdicts on separation properties. Every
//! `Holds` carries a certificate and every `Fails` a witness.
//!
//! All numeric code is generic over [`Real`]; the aliases below fix `f64`
//! or `f32`.

#[cfg(test)]
mod fixtures;
mod linalg;

pub mod attractor;
pub mod config;
pub mod dimensions;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod scalar;
pub mod separation;
pub mod verdict;
pub mod words;

pub use attractor::{Attractor, DiameterBracket, Ifs, Level, Piece};
pub use config::Config;
pub use dimensions::{
    box_estimate_auto, dim4_bounds, dimension_report, h3_level_sum, h4_alpha_bounds, min_subcover_weight,
    similarity_dimension, verify_dim3, BoxEstimate, DimensionReport,
};
pub use error::{Error, Result};
pub use geometry::{approx_equal, compose, relative_map, Similitude};
pub use oracle::{DistanceBracket, Oracle};
pub use scalar::Real;
pub use separation::{separation_report, Claims, ConsistencyEntry, SeparationReport, Status};
pub use verdict::{Certificate, Claim, Outcome, Resolution, Verdict, Witness};
pub use words::{children, enumerate_level, incomparable, is_prefix, level_size, Word};

pub type Similitude64 = Similitude<f64>;
pub type Ifs64 = Ifs<f64>;
pub type Attractor64 = Attractor<f64>;
pub type Piece64 = Piece<f64>;
pub type Verdict64 = Verdict<f64>;
pub type Config64 = Config<f64>;
pub type SeparationReport64 = SeparationReport<f64>;

pub type Similitude32 = Similitude<f32>;
pub type Ifs32 = Ifs<f32>;
pub type Attractor32 = Attractor<f32>;
pub type Verdict32 = Verdict<f32>;
pub type Config32 = Config<f32>;

/// Euclidean distance.
pub fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    linalg::dist(a, b)
}
