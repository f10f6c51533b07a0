//! Exact tropical intersection theory.

pub mod cycle;
pub mod divisor;
pub mod fan;
pub mod fixtures;
pub mod hypersurface;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod minkowski;
pub mod polyhedron;
pub mod rational;
pub mod stable;
