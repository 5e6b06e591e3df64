//! Size caps for enumeration and dense matrices.
//!
//! Defaults can be overridden with `PARTLIN_ENUM_CAP` (maximum number of
//! points k+l that may be enumerated) and `PARTLIN_MATRIX_CAP` (maximum
//! number of entries N^(k+l) of a dense T-matrix).

use std::sync::OnceLock;

pub const DEFAULT_ENUM_CAP: usize = 10;
pub const DEFAULT_MATRIX_CAP: usize = 4096;

pub const ENUM_CAP_VAR: &str = "PARTLIN_ENUM_CAP";
pub const MATRIX_CAP_VAR: &str = "PARTLIN_MATRIX_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub enum_cap: usize,
    pub matrix_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            enum_cap: DEFAULT_ENUM_CAP,
            matrix_cap: DEFAULT_MATRIX_CAP,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let read = |var: &str, default: usize| {
            std::env::var(var)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        };
        Self {
            enum_cap: read(ENUM_CAP_VAR, DEFAULT_ENUM_CAP),
            matrix_cap: read(MATRIX_CAP_VAR, DEFAULT_MATRIX_CAP),
        }
    }

    /// Process-wide limits, read from the environment on first use.
    pub fn global() -> Limits {
        static LIMITS: OnceLock<Limits> = OnceLock::new();
        *LIMITS.get_or_init(Limits::from_env)
    }
}
