//! Exact symbolic engine for the spectral curves of the Halphen operator
//! (third order, trigonal curve w³ = H(z)w + F(z), equianharmonic g₂ = 0) and
//! of the Lamé operator (second order, hyperelliptic curve w² = F(z)).
//!
//! Everything is computed in exact rational arithmetic inside the Weierstrass
//! differential ring `ℚ[g₂,g₃][z,w][℘,℘′] / (℘′² − 4℘³ + g₂℘ + g₃)`.  The
//! Halphen pipeline solves a linear ansatz for the pair (S, Q) attached to the
//! operator, evaluates the curve coefficients two independent ways, verifies
//! the defining identities exactly, and normalizes the curve to be monic.
//!
//! The polynomial and ring layers are generic over the scalar type (anything
//! field-like via `num-traits`); the concrete engine runs on the
//! arbitrary-precision rational aliases below.

pub mod emit;
pub mod halphen;
pub mod lame;
pub mod poly;
pub mod solve;
pub mod verify;
pub mod weier;

/// Exact rational scalar used by the engine.
pub type Rat = num_rational::BigRational;

/// Sparse polynomial over [`Rat`] in the fixed alphabet z, w, g2, g3, P, Pp.
pub type Poly = poly::SparsePoly<Rat>;

/// Canonical element of the Weierstrass differential ring over [`Rat`].
pub type RingElem = weier::WeierstrassElement<Rat>;

/// Errors surfaced by the engine.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid genus {0}: need g >= 1 with g != 2 (mod 3)")]
    InvalidGenus(u32),
    #[error("inconsistent linear system while {0}")]
    InconsistentSystem(&'static str),
    #[error("{what} did not reduce to an x-constant")]
    NonConstant { what: &'static str },
    #[error("leading coefficient {0} is not the cube of a rational")]
    NotRationalCube(Rat),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator in curve fraction")]
    ZeroDenominator,
    #[error("no embedded reference curve for genus {0}")]
    NotInCorpus(u32),
    #[error("malformed curve document: {0}")]
    BadCurveDocument(String),
}
