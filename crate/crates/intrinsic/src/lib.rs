//! Exact-arithmetic laboratory for rational points on parametrized manifolds.
//!
//! Everything geometric in this crate is computed over `Q` with arbitrary
//! precision: reduced rational points with their heights, fraction-free linear
//! algebra, Sturm-sequence root isolation, Dirichlet exponent constants
//! `c(k,d)`, exact enumeration of intrinsic rational points on charts,
//! an empirical verifier for the intrinsic simplex property, approximation
//! records with certified distances, and simulation of the hyperplane /
//! algebraic-set / levelset games.
//!
//! Floating point appears only in summary statistics (log-log regression
//! slopes) and in fast prefilters whose outcomes are always confirmed
//! exactly.

pub mod algebraic;
pub mod approx;
pub mod chart;
pub mod dirichlet;
pub mod enumerate;
pub mod farey;
pub mod game;
pub mod matrix;
pub mod mpoly;
pub mod multiindex;
pub mod point;
pub mod rational;
pub mod simplex;
pub mod unipoly;

pub use point::RationalPoint;
pub use rational::{QInterval, Rational};

use std::fmt;

/// The error type for fallible operations in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A dimension pair outside `1 <= k <= d`.
    InvalidPair { k: i64, d: i64 },
    /// The zero polynomial was passed where a nonzero one is required.
    IdenticallyZero,
    /// A parameter lies outside the chart's domain box.
    OutsideDomain(String),
    /// A rational-function denominator vanished at the evaluation point.
    PoleHit(String),
    /// An enumeration would exceed its candidate budget.
    BudgetExceeded { needed: u128, budget: u128 },
    /// Not enough records to estimate anything.
    InsufficientData,
    /// Certified enclosures could not separate two candidates.
    PrecisionExhausted(String),
    /// Unknown chart specifier.
    UnknownChart(String),
    /// A collected low-height point set was not hyperplane-contained.
    SimplexViolation(String),
    /// A game strategy produced an illegal move.
    IllegalMove { player: Player, detail: String },
    /// Operation not supported for the given data (documented restrictions).
    Unsupported(String),
}

/// The two players of the deletion games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Alice => write!(f, "alice"),
            Player::Bob => write!(f, "bob"),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPair { k, d } => {
                write!(f, "invalid dimension pair (k, d) = ({k}, {d}): need 1 <= k <= d")
            }
            Error::IdenticallyZero => write!(f, "polynomial is identically zero"),
            Error::OutsideDomain(s) => write!(f, "parameter outside chart domain: {s}"),
            Error::PoleHit(s) => write!(f, "denominator vanished at parameter: {s}"),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "candidate sweep of {needed} exceeds budget {budget}")
            }
            Error::InsufficientData => write!(f, "not enough records"),
            Error::PrecisionExhausted(s) => write!(f, "enclosure refinement exhausted: {s}"),
            Error::UnknownChart(s) => write!(f, "unknown chart specifier: {s}"),
            Error::SimplexViolation(s) => write!(f, "simplex containment violated: {s}"),
            Error::IllegalMove { player, detail } => {
                write!(f, "illegal move by {player}: {detail}")
            }
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
