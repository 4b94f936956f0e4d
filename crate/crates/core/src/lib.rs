//! Exact computation in the graded Poisson algebra of the degree-2
//! symplectic manifold `T*[2]E[1]` and in the Keller-Waldmann algebra of
//! multi-Courant brackets realized on it.

pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod expr;
pub mod graded_ring;
pub mod higher;
pub mod kw;
pub mod poisson;
pub mod verify;

pub use error::{Error, Result};
pub use graded_ring::{Bundle, Coord, GradedElement, Monomial, Rational};
pub use poisson::{pbracket, BundleSpec, CourantData};
