//! Three-valued answers. A `Holds` always carries a certificate and a
//! `Fails` always carries a witness; the constructors enforce this.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Fails,
    Inconclusive,
}

/// A descendant of the queried piece together with the family member that
/// contains it, `piece = member ∘ f_via`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discharge {
    pub piece: Word,
    pub member: Word,
    pub via: Word,
}

/// An exact attractor point of `piece` with a certified positive distance to
/// every other piece under consideration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ExposedPoint<T> {
    pub piece: Word,
    pub point: Vec<T>,
    pub distance_lower: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real")]
pub enum Certificate<T> {
    /// `f_B⁻¹ ∘ f_A = f_word`, hence `K_A = f_B(K_word) ⊆ K_B`.
    WordMatch { word: Word },
    /// Every descendant is inside some family member.
    Covering { assignment: Vec<Discharge> },
    /// Two exact attractor points at distance at most `eps`.
    PointPair { a: Vec<T>, b: Vec<T>, distance: T },
    /// Each piece of a level owns a point away from all others.
    ExposedPoints { level: usize, points: Vec<ExposedPoint<T>> },
    /// Every pair of pieces is disjoint or meets in a few isolated contacts.
    BoundedContacts { level: usize, max_leaf_pairs: usize, disjoint_pairs: usize, touching_pairs: usize },
    /// Interior certificates within `eps` of every sample at the given depth.
    DenseInterior { level: usize, eps: T, cells: usize },
    /// A convex open set whose images are nested and interior-disjoint.
    OpenSet { candidate: String, vertices: Vec<Vec<T>> },
    /// An attractor point strictly inside the open set.
    InteriorPoint { point: Vec<T>, margin: T },
    /// Conclusion obtained by a stated implication from other certificates.
    Implication { rule: String, premises: Vec<String> },
    /// Every level up to `levels` certified.
    Levels { levels: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real")]
pub enum Witness<T> {
    /// An exact point of the queried piece, at certified distance
    /// `distance_lower > 0` from the other set.
    Point { piece: Word, point: Vec<T>, distance_lower: T },
    /// The two sets are at distance at least `gap > 0`.
    Gap { gap: T },
    /// `piece` is covered by the rest of its level.
    Reducible { level: usize, piece: Word, assignment: Vec<Discharge> },
    /// Two pieces with equal maps.
    DuplicatePieces { piece: Word, duplicate_of: Word },
    /// `sub` lies in both `a` and `b`.
    CommonSubPiece { a: Word, b: Word, sub: Word, sub_in_b: Word },
    /// Maps `i` and `j` coincide, so `f_i(V) = f_j(V)` for every open `V`.
    IdenticalImages { i: usize, j: usize },
    /// Weights of minimal subcovers that shrink geometrically with depth.
    ShrinkingSubcovers { weights: Vec<T> },
    /// A proper subcover of a level.
    Subcover { level: usize, words: Vec<Word> },
    /// Conclusion obtained by a stated implication from other witnesses.
    Implication { rule: String, premises: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Resolution<T> {
    pub depth: usize,
    pub eps: T,
    pub nodes: usize,
    pub budget_exhausted: bool,
}

impl<T: Real> Resolution<T> {
    pub fn new(depth: usize, eps: T) -> Self {
        Resolution { depth, eps, nodes: 0, budget_exhausted: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Verdict<T> {
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness<T>>,
    pub resolution: Resolution<T>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl<T: Real> Verdict<T> {
    pub fn holds(certificate: Certificate<T>, resolution: Resolution<T>) -> Self {
        Verdict { outcome: Outcome::Holds, certificate: Some(certificate), witness: None, resolution, notes: vec![] }
    }

    pub fn fails(witness: Witness<T>, resolution: Resolution<T>) -> Self {
        Verdict { outcome: Outcome::Fails, certificate: None, witness: Some(witness), resolution, notes: vec![] }
    }

    pub fn inconclusive(resolution: Resolution<T>) -> Self {
        Verdict { outcome: Outcome::Inconclusive, certificate: None, witness: None, resolution, notes: vec![] }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.outcome == Outcome::Fails
    }

    pub fn is_inconclusive(&self) -> bool {
        self.outcome == Outcome::Inconclusive
    }

    /// Checks the carrier invariant: certificates back `Holds`, witnesses
    /// back `Fails`.
    pub fn is_well_formed(&self) -> bool {
        match self.outcome {
            Outcome::Holds => self.certificate.is_some(),
            Outcome::Fails => self.witness.is_some(),
            Outcome::Inconclusive => true,
        }
    }
}

/// A property of the whole structure `(Γ_n)`, as far as it was decided.
/// `through: None` means every level; a failure level is the level at which
/// the witness shows the property breaking, when there is one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Claim {
    Holds { through: Option<usize> },
    Fails { level: Option<usize> },
    Inconclusive,
}

impl Claim {
    pub const ALL: Claim = Claim::Holds { through: None };

    pub fn holds_everywhere(&self) -> bool {
        matches!(self, Claim::Holds { through: None })
    }

    pub fn is_holds(&self) -> bool {
        matches!(self, Claim::Holds { .. })
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Claim::Fails { .. })
    }

    /// Combines per-level verdicts for levels `1..=levels.len()`.
    pub fn from_levels<T: Real>(levels: &[Verdict<T>]) -> Claim {
        if let Some(i) = levels.iter().position(Verdict::is_fails) {
            return Claim::Fails { level: Some(i + 1) };
        }
        if !levels.is_empty() && levels.iter().all(Verdict::is_holds) {
            return Claim::Holds { through: Some(levels.len()) };
        }
        Claim::Inconclusive
    }
}
