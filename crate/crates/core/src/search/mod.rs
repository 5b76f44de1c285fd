//! Reconstruction of the degree-one ansatz search: the quadratic system, its
//! F2 points and 2-adic lifts, sampling of the solution component, vanishing
//! relations, and the sum-of-squares parametrization.

pub mod f2;
pub mod lift;
pub mod relations;
pub mod sample;
pub mod sos;
pub mod system;
