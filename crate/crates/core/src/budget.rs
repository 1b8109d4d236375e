use crate::error::{Result, SetError};

/// Environment variable that overrides [`Budget::max_sets`].
pub const MAX_SETS_ENV: &str = "SETFORGE_MAX_SETS";

pub const DEFAULT_MAX_SETS: usize = 1_000_000;

/// Upper bound on how many sets an operation may materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_sets: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_sets: DEFAULT_MAX_SETS,
        }
    }
}

impl Budget {
    pub fn new(max_sets: usize) -> Self {
        Budget { max_sets }
    }

    /// Default budget, overridden by `SETFORGE_MAX_SETS` when it parses.
    pub fn from_env() -> Self {
        std::env::var(MAX_SETS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    /// Fails when `needed` sets would exceed the budget. `needed` of `None`
    /// means the count overflowed `u128`.
    pub fn check(&self, what: &'static str, needed: Option<u128>) -> Result<()> {
        match needed {
            Some(n) if n <= self.max_sets as u128 => Ok(()),
            _ => Err(SetError::BudgetExceeded {
                what,
                needed: needed.map_or_else(|| "overflow".to_string(), |n| n.to_string()),
                limit: self.max_sets.to_string(),
            }),
        }
    }
}
