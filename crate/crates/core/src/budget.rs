//! Resource caps for the exponential parts of the library.

use serde::{Deserialize, Serialize};

use crate::error::{CsaError, Result};

pub const BUDGET_ENV: &str = "CSA_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximum number of flats in one intersection lattice.
    pub flats: usize,
    /// Maximum number of chambers enumerated.
    pub chambers: usize,
    /// Maximum number of search nodes in one search.
    pub steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { flats: 2_000_000, chambers: 1_000_000, steps: 2_000_000 }
    }
}

impl Budget {
    /// Defaults overridden by `CSA_BUDGET="flats=..,chambers=..,steps=.."`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(s) => Budget::default().with_overrides(&s),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| CsaError::InvalidInput(format!("budget entry {part:?} is not key=value")))?;
            let v: u64 = v
                .trim()
                .replace('_', "")
                .parse()
                .map_err(|_| CsaError::InvalidInput(format!("budget value {v:?} is not an integer")))?;
            match k.trim() {
                "flats" => self.flats = v as usize,
                "chambers" => self.chambers = v as usize,
                "steps" => self.steps = v,
                other => return Err(CsaError::InvalidInput(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(self)
    }
}

/// Step counter shared by a search and its sub-searches.
#[derive(Debug)]
pub struct Meter {
    pub limit: u64,
    pub used: u64,
}

impl Meter {
    pub fn new(limit: u64) -> Self {
        Meter { limit, used: 0 }
    }

    /// Count one step; `false` once the limit is reached.
    pub fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }

    pub fn exhausted(&self) -> bool {
        self.used > self.limit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b = Budget::default().with_overrides("flats=10, steps=1_000").unwrap();
        assert_eq!(b.flats, 10);
        assert_eq!(b.steps, 1000);
        assert_eq!(b.chambers, 1_000_000);
        assert!(Budget::default().with_overrides("foo=1").is_err());
        assert!(Budget::default().with_overrides("flats").is_err());
    }
}
