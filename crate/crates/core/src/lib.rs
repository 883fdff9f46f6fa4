//! Computational toolkit for constant-curvature cone 3-manifolds.
//!
//! The crate is organised by subject:
//!
//! * [`model_spaces`]: metric coefficients, volumes and trigonometry of the
//!   model cone spaces `H³_K(α)`.
//! * [`dirichlet`]: isometry groups of `E³` and `H³`, bisectors, Dirichlet
//!   domains and Bishop–Gromov profiles.
//! * [`trace_deformation`]: Chebyshev-like trace polynomials, the deformation
//!   curve and Dehn-filling coefficients.
//! * [`euclidean_models`]: the catalogue of non-compact Euclidean cone
//!   manifolds and their souls.
//! * [`coverings`]: coverings à la Gromov on sampled metric spaces, nerves,
//!   partition maps and the constants ledger.
//! * [`analysis_tools`]: concave smoothing profiles and Gromov–Hausdorff
//!   estimates for finite samples.

// NaN-rejecting `!(x > 0.0)` guards and index loops over symmetric matrices
// are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis_tools;
pub mod coverings;
pub mod dirichlet;
pub mod euclidean_models;
pub mod model_spaces;
pub mod qmc;
pub mod trace_deformation;
