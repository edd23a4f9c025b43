//! Exact verification of twisted Frobenius extensions of finite-dimensional
//! graded superalgebras.

pub mod adjunction;
pub mod candidates;
pub mod examples;
pub mod exactmath;
pub mod extension;
pub mod frobenius;
pub mod gsalg;
pub mod homspace;

pub use exactmath::{Field, Matrix, Scalar, Vector};
pub use extension::{ExtensionCertificate, ExtensionData, TraceMap};
pub use frobenius::FrobeniusAlgebraData;
pub use gsalg::{Degree, GradedLinearMap, GradedSuperAlgebra, SubalgebraEmbedding};
