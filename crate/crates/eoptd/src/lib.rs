//! E-optimal approximate designs for the second-order response surface model
//! on the k-dimensional unit cube and unit ball.
//!
//! The crate constructs the optimal designs in exact rational arithmetic,
//! reproduces the known minimal-support tables, and certifies global
//! optimality through equivalence-theorem extremal polynomials, a duality
//! gap check, and an independent projected-subgradient oracle.
//!
//! Module map:
//!
//! - [`model`] — the regression vector `f(x)` and its monomial ordering
//! - [`design`] — designs, information matrices, symmetric moment algebra
//! - [`spectrum`] — closed-form eigenvalues, Φ_p criteria, Jacobi oracle
//! - [`cube`] — barycenter classes and E-optimal designs on `[-1,1]^k`
//! - [`ball`] — E-optimal and rotatable designs on the unit ball
//! - [`certify`] — extremal-polynomial certificates and verification
//! - [`exact`] — rationals and quadratic surds
//! - [`linalg`] — dense exact/float elimination helpers
//!
//! ```
//! use eoptd::exact::rat;
//! use eoptd::{certify, cube, ModelSpec};
//!
//! // the five-predictor optimum sits on E₀, E₃, E₅ with 73 support points
//! let solution = cube::minimal_support_design(5)?;
//! assert_eq!(solution.support_count(), 73);
//! assert_eq!(solution.moments().a, rat(2, 5));
//!
//! // expand to explicit points and certify global optimality
//! let spec = ModelSpec::new(5)?;
//! let design = cube::expand_design(&solution)?;
//! let certificate = certify::cube_certificate(5)?;
//! let report = certify::verify_design(&spec, &design, &certificate, 11, 1e-10)?;
//! assert!(report.pass);
//! assert_eq!(report.multiplicity, 15); // λ_min = 1/5 with multiplicity k(k+1)/2
//! # Ok::<(), eoptd::Error>(())
//! ```

#![allow(clippy::needless_range_loop)]

pub mod ball;
pub mod certify;
pub mod cube;
pub mod design;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod model;
pub mod spectrum;

pub use ball::{optimal_ball_design, rotatable_gap, rotatable_optimal};
pub use certify::{ball_certificate, cube_certificate, verify_design, ExtremalCertificate};
pub use cube::{minimal_support_design, TripleSolution};
pub use design::{Design, InfoMatrix, Space, SymmetricMoments};
pub use error::{Error, Result};
pub use exact::{Exact, Rat};
pub use model::ModelSpec;
pub use spectrum::Spectrum;
