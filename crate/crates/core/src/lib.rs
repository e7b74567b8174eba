//! Numerical calculus of dominating scalar products on symplectic spaces,
//! with a discretized Klein-Gordon field as the working example.
//!
//! The crate is organized around six pieces:
//!
//! - [`symplectic`]: forms, dominating products, polarizators, the μ_s
//!   interpolation family, purification and state classification;
//! - [`continuity`]: symplectically adjoint pairs and the relative-norm
//!   interpolation bounds, plus the underlying three-line estimate;
//! - [`gallery`]: two lattice counterexamples showing how the bounds fail
//!   outside their hypotheses;
//! - [`kg`]: a 1-D periodic-lattice Klein-Gordon field with Sobolev scale,
//!   energy product, exact spectral evolution and the ultrastatic vacuum;
//! - [`quasifree`]: the Gaussian-state dictionary (Weyl values, recovery of
//!   the covariance, one-particle structure, local subspace probes);
//! - [`report`]: configuration, suite orchestration and deterministic
//!   JSON/CSV report emission for all of the above.

pub mod continuity;
pub mod gallery;
pub mod kg;
pub mod linalg;
pub mod quasifree;
pub mod report;
pub mod symplectic;
