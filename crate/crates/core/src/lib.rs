//! Exact computer algebra for low-dimensional complex Lie algebras.

pub mod catalog;
pub mod cochain;
pub mod cohomology;
pub mod deformation;
pub mod extension;
pub mod scalar;
pub mod tables;
