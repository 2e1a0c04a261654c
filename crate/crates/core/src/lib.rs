//! Spherically symmetric static electro-vacuum data: Reissner–Nordström
//! models, residuals of the electrostatic system, photon spheres, and the
//! variational characterisation of electrostatic metrics.
//!
//! All tensors are reduced by spherical symmetry to their radial and
//! tangential eigenvalues in the orthonormal frame, and slices `r = const`
//! carry the unit normal pointing toward increasing `r`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod error;
pub mod geometry;
pub mod models;
pub mod photon_sphere;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod variational;

pub use checks::{
    equivalence_property, residual_all, residual_master, residual_pem, residual_scalar, residual_system,
    residual_traced, EntryStatus, EquationId, Grid, GridSummary, Location, ResidualEntry, ResidualReport, Tolerances,
};
pub use error::{Error, Result};
pub use geometry::{
    contracted_gauss_residual, grad_norm, hessian_radial, laplacian_radial, level_set_geometry, ricci_radial,
    scalar_curvature, Dimension, FrameTensor2, HypersurfaceGeometry, SphericalStaticData,
};
pub use models::{
    charge_constant, euclidean_ball_residuals, flat_data, isotropic_inverse, isotropic_map, phi_identity_residual,
    rn_data, rn_horizon, rn_r0, BallStaticExample, IsotropicChart, IsotropicPoint, RNParameters, Regime,
};
pub use photon_sphere::{
    boundary_residual, classify_configuration, photon_sphere_radii, quasilocal_check, Classification, ExtremalityClass,
    PhotonSphereCase, PhotonSphereResult,
};
pub use profile::{DerivativeMode, Interval, Jet, RadialProfile};
pub use quadrature::{sphere_area, Quadrature, QuadratureConfig};
pub use variational::{
    criticality_test, euler_lagrange_density, evaluate_functional, pohozaev_residual, surface_gravity, Annulus,
    CriticalityEstimate, Perturbation, PerturbationMode,
};
