//! Convex-integration toolkit on the periodic unit torus.

pub mod calculus;
pub mod error;
pub mod euler;
pub mod fields;
pub mod linalg;
pub mod mikado;
pub mod params;
pub mod pipeline;
pub mod random;
pub mod scheme;
pub mod singular;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};
pub use fields::{Field, Grid, MatrixField, ScalarField, Spectrum, SymTensorField, TimeSlab, VectorField};
