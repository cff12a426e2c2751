//! Temperley-Lieb diagram calculus, Kauffman-bracket tangle reduction and
//! entanglement of the resulting multiparty diagram states.
//!
//! Diagram code is generic over the coefficient ring ([`ring::Coeff`]); the
//! two backends in use are exact rational functions of `A` and `Complex64`
//! values at an [`EvalPoint`].

pub mod connectome;
pub mod diagram;
pub mod entanglement;
pub mod error;
pub mod jones_wenzl;
pub mod ring;
pub mod scalar;
pub mod state_space;
pub mod su2;
pub mod tangle;
pub mod tensor;

pub use error::{Error, Result};
pub use ring::{Algebra, Coeff, Mode};
pub use scalar::{EvalPoint, LaurentPoly, NumericScalar, RationalFn};
pub use tensor::Tensor;

/// Diagram combination with exact coefficients.
pub type ExactElement = diagram::TLElement<RationalFn>;
/// Diagram combination with numeric coefficients.
pub type NumericElement = diagram::TLElement<num_complex::Complex64>;
