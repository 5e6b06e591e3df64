pub mod closure;
pub mod error;
pub mod field;
pub mod limits;
pub mod lincomb;
pub mod matrix;
pub mod partition;
pub mod suites;
pub mod transforms;

pub use closure::{closure, ClosureResult, Membership, Mode};
pub use error::{Error, Result};
pub use field::{FieldElem, FieldError, Rational, Scalar};
pub use limits::Limits;
pub use lincomb::{LinComb, SpanBasis};
pub use matrix::ExactMatrix;
pub use partition::{bell, enumerate, Partition};
pub use suites::{run_suite, Suite, SuiteReport};
pub use transforms::Sign;

pub type QLinComb = LinComb<Rational>;
pub type FLinComb = LinComb<FieldElem>;
pub type QSpan = SpanBasis<Rational>;
pub type FSpan = SpanBasis<FieldElem>;
pub type QMatrix = ExactMatrix<Rational>;
pub type FMatrix = ExactMatrix<FieldElem>;
pub type QClosure = ClosureResult<Rational>;
pub type FClosure = ClosureResult<FieldElem>;
