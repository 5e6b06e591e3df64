use thiserror::Error;

/// A diagnostic tied to a byte offset in the expression source.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at column {}: {msg}", .pos + 1)]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

impl ExprError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        Self {
            pos,
            msg: msg.into(),
        }
    }

    /// The source line with a caret under the offending position.
    pub fn render(&self, src: &str) -> String {
        let pos = self.pos.min(src.len());
        let column = src[..pos].chars().count();
        format!("error: {}\n  {src}\n  {}^", self.msg, " ".repeat(column))
    }
}
