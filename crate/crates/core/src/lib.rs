//! Analysis of one-parameter affine iterated function system families
//! `F_t = { t·(L_i x + a_i) + q_i }`.
//!
//! The crate covers classification of a family, bounds on the existence
//! threshold t₀, outer covers of attractors on a grid, connectivity and
//! interior certificates, transition attractors at t₀, and parameter scans.

pub mod classify;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod interior;
pub mod jsr;
pub mod linalg;
pub mod report;
pub mod scan;
pub mod topology;
pub mod transition;
pub mod attractor;

pub use classify::{classify, detect_degenerate, scaling_data, Classification, TriState};
pub use error::{Error, Result};
pub use family::{fixed_point, instantiate, AffineMap, FamilyMember, OneParamFamily};
pub use jsr::{jsr_bounds, spectral_radius, t0_threshold, JsrBounds, Threshold, Word};
pub use linalg::{Matrix, Vector};
