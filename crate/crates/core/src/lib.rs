//! Explicit unimodular matrices with first row `(x, y, z)` over the
//! coordinate ring `K[X,Y,Z]/(X^2+Y^2+Z^2-1)` of the unit sphere, and tools
//! that replay the search which produced them.

pub mod comb;
pub mod error;
pub mod cli;
pub mod expr;
pub mod json;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod ring;
pub mod search;
pub mod tangent;

pub use error::{Error, Result};
pub use matrix::Mat3;
pub use poly::{Frac, Monomial, Poly, VarSet};
pub use ring::{make_ring, Ring, RingElem};
