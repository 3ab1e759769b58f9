//! One-shot function approximation, density estimation and parameter
//! regression on unknown submanifolds of a hypersphere.
//!
//! Every estimator here is a direct weighted sum over the data through a
//! localized spherical-polynomial kernel
//!
//! ```text
//! Φ_{n,q}(t) = (ω_q / ω_{q-1}) Σ_{ℓ<n} h(ℓ/n) p_{q,ℓ}(1) p_{q,ℓ}(t)
//! ```
//!
//! where `p_{q,ℓ}` are the orthonormal ultraspherical polynomials for the
//! weight `(1-t²)^{q/2-1}` and `h` is a fixed smooth cutoff. The only
//! information about the manifold that is required is its dimension `q`.
//!
//! Module map:
//!
//! - [`numerics`]: log-gamma, sphere volumes, ultraspherical polynomials,
//!   the cutoff, quadrature rules.
//! - [`kernel`]: construction and Clenshaw evaluation of `Φ_{n,q}`.
//! - [`estimator`]: the raw, density and quotient estimators plus the
//!   quadrature form of the integral reconstruction operator.
//! - [`codec`]: spherical-harmonic encoding of a dataset and its decoder.
//! - [`experiments`]: ellipse and bi-exponential sweeps, noise, metrics.
//! - [`cli`]: configuration parsing and artifact writing for the binary.

pub mod cli;
pub mod codec;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod kernel;
pub mod numerics;

pub use error::{Error, Result};
pub use estimator::{EstimatorConfig, LabeledDataset};
pub use kernel::LocalizedKernel;
pub use numerics::{QuadratureRule, SphereRule, UltrasphericalFamily};
