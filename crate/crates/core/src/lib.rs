//! Exact computations around Schur powers of cotangent bundles of generic
//! complete intersections: partition combinatorics, the universal rank matrix
//! and its strata, Plücker coordinates with their transition laws, and the
//! effective degree bounds.

pub mod bounds;
pub mod decimal;
pub mod linalg;
pub mod partition;
pub mod plucker;
pub mod poly;
pub mod rng;
pub mod universal;
pub mod verify;
