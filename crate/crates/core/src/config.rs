use serde::{Deserialize, Serialize};

use crate::attractor::Attractor;
use crate::scalar::Real;

/// Default cap on the number of pieces materialised at once.
pub const DEFAULT_PIECE_BUDGET: usize = 200_000;

/// Resolution and budget knobs shared by every analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Config<T> {
    /// Levels `1..=levels` are examined by the level-wise checks.
    pub levels: usize,
    /// Maximum subdivision depth of oracle queries. `None` picks the depth at
    /// which pieces shrink below `eps`.
    pub depth: Option<usize>,
    /// Distance resolution. `None` means `1e-9 · diam(K)` (for `f64`).
    pub eps: Option<T>,
    /// Maximum number of pieces materialised in one level or cover instance.
    pub budget: usize,
    /// Node budget of a single oracle query.
    pub query_nodes: usize,
    /// Tolerance for map equality in the containment search.
    pub map_tol: T,
    /// Maximum isolated contact pairs allowed per pair of pieces when
    /// treating an overlap as finite.
    pub max_contacts: usize,
    /// Subdivision depth for contact and common sub-piece analysis.
    pub contact_depth: usize,
    /// Deepest level horizon used for subcover weights.
    pub cover_horizon: usize,
    /// Resolution of the tiling density check, relative to `diam(K)`.
    pub tiling_eps: T,
    pub tiling_depth: usize,
    /// Depth of the attractor sample used by the box-counting estimate and
    /// by the order bound.
    pub sample_depth: usize,
}

impl<T: Real> Default for Config<T> {
    fn default() -> Self {
        Config {
            levels: 5,
            depth: None,
            eps: None,
            budget: DEFAULT_PIECE_BUDGET,
            query_nodes: 20_000,
            map_tol: T::map_tol(),
            max_contacts: 8,
            contact_depth: 24,
            cover_horizon: 6,
            tiling_eps: T::lit(1e-3),
            tiling_depth: 12,
            sample_depth: 2,
        }
    }
}

impl<T: Real> Config<T> {
    pub fn eps_for(&self, att: &Attractor<T>) -> T {
        self.eps.unwrap_or_else(|| T::map_tol() * att.diam_upper())
    }

    /// Smallest depth with `(max c)^depth · diam(K) < eps`, unless set.
    pub fn depth_for(&self, att: &Attractor<T>) -> usize {
        self.depth.unwrap_or_else(|| {
            let ratio = (self.eps_for(att) / att.diam_upper()).ln() / att.ifs().max_ratio().ln();
            ratio.ceil().to_usize().unwrap_or(64).clamp(1, 64) + 1
        })
    }
}
