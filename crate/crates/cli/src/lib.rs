//! Expression language and output formats for the `partlin` command.

pub mod error;
pub mod eval;
pub mod expr;
pub mod report;

pub use error::ExprError;
pub use eval::{eval, eval_str};
pub use expr::{parse, Expr};
