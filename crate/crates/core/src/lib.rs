//! Upper bounds for the second non-zero eigenvalue of the scalar Laplacian on
//! toric and Koiso-Sakane Kähler-Einstein manifolds, together with
//! Rayleigh-Ritz spectral approximations for toric metrics.
//!
//! The exact layer (polytopes, polynomials, moments, one-dimensional weight
//! integrals) works over arbitrary-precision rationals. Floating point enters
//! only in the direction search for the toric bound and in the quadrature and
//! eigen-solves of the Rayleigh-Ritz method.

pub mod error;
pub mod exact;
pub mod koiso_sakane;
pub mod linalg;
pub mod moments;
pub mod poly;
pub mod polytope;
pub mod potential;
pub mod presets;
pub mod quadrature;
pub mod rational;
pub mod rayleigh_ritz;
pub mod serde_util;
pub mod sphere;
pub mod toric_bound;

pub use error::{Error, ErrorClass, Result};
pub use koiso_sakane::{futaki_integral, ks_bound, ks_family_wq, ks_integral, KSData, KSIntegrals};
pub use moments::{
    integrate_polynomial, moment_tensors, monomial_moment, simplex_monomial_integral, MomentTensor,
};
pub use poly::{MultiIndex, MultiPoly};
pub use polytope::{parse_polytope, Facet, FanoReport, Polytope, Simplex};
pub use potential::{LogTerm, SymplecticPotential};
pub use rational::Rational;
pub use rayleigh_ritz::{
    assemble_matrices, generalized_eigenvalues, rayleigh_ritz_spectrum, SpectrumOptions, SpectrumResult,
};
pub use toric_bound::{
    bound_at, bound_at_gradient_form, bound_from_raw_moments, minimize_bound, whiten, BoundResult,
    QuarticForms, WhitenedBasis,
};
