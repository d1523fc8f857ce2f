//! Symbolic toolkit for the plane Cremona group over perfect fields.
//!
//! Galois orbits of points in P², Mori fiber space and Sarkisov link models, relation
//! rewriting in the groupoid of links, pushforward of linear systems, and evaluation of
//! the homomorphism onto free products of direct sums of Z/2Z.

pub mod constructions;
pub mod exactfield;
pub mod freeprod;
pub mod galois_orbits;
pub mod linsys;
pub mod mfs_catalog;
pub mod rewriting;

pub use exactfield::{
    ExtensionField, Field, FieldSpec, FiniteField, Fp, Fq, PolynomialOverField, PrimeField,
    Rationals,
};

/// Polynomials over Q.
pub type QPoly = exactfield::Poly<Rationals>;
/// Polynomials over a prime field.
pub type FpPoly = exactfield::Poly<PrimeField>;
/// Polynomials over F_p[a]/(m).
pub type FqPoly = exactfield::Poly<Fq>;
