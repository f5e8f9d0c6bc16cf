//! Numerical kernels for Legendrian and transverse objects in the standard
//! contact spaces `(R^3, ker(dz - y dx))` and `(R^5, ker(dz - y dx - p dq))`.
//!
//! The crate is organised by role:
//!
//! - [`contact`]: points, contact forms, parametric maps, Legendrian defects
//!   and sup-norm distances. Everything else is measured with these.
//! - [`zoo`]: closed-form curve and surface families, their front cusps and
//!   the growth-constrained frequency sequence.
//! - [`zigzag`]: front-projection zig-zag approximation and Legendrian lifts.
//! - [`flow`]: contact Hamiltonian vector fields, flow integration, the
//!   stretching isotopy and its synthesized Hamiltonian, isotopy supports.
//! - [`schedule`]: interval splittings, the four-quarter `lambda` schedule,
//!   product regions and the isotopy-by-parts certificate.
//! - [`singular`]: `psi_delta`, wrinkles, embryos, the zig-zag birth model and
//!   loose-chart geometry.
//! - [`report`]: verification suites, JSON reports, curve export and SVG
//!   front figures.
//!
//! Grid scans go through [`scan`], which runs on rayon when the `parallel`
//! feature is enabled (the default) and sequentially otherwise. Results are
//! identical either way.

pub mod contact;
pub mod error;
pub mod flow;
pub mod report;
pub mod scan;
pub mod schedule;
pub mod singular;
pub mod zigzag;
pub mod zoo;

pub use contact::{
    alpha3, beta5, c0_distance, legendrian_defect, transverse_check, ContactPoint, Domain,
    GridSpec, ParamMap, Point3, Point5, Tangent3, Tangent5,
};
pub use error::{Error, Result};
