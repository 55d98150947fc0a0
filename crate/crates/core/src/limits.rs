//! Size caps for exhaustive enumeration.
//!
//! The environment variable `FORESTLAB_MAX_N` raises (or lowers) every
//! enumeration cap at once. It is read once per process.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest `n` for which all forests on `{1..n}` are enumerated.
pub const FOREST_ENUMERATION_CAP: usize = 9;

/// Largest `n` for the flow, ratio and cascade verifications, which hold
/// every forest in memory grouped by component count.
pub const IDENTITY_CAP: usize = 7;

/// Largest `n` for subset-sum enumeration over vertex sets.
pub const SUBSET_CAP: usize = 20;

/// Largest `n` for explicit graph classes (2^15 labelled graphs at n = 6).
pub const CLASS_CAP: usize = 6;

pub const MAX_N_ENV: &str = "FORESTLAB_MAX_N";

fn env_override() -> Option<usize> {
    static CACHE: OnceLock<Option<usize>> = OnceLock::new();
    *CACHE.get_or_init(|| std::env::var(MAX_N_ENV).ok()?.trim().parse().ok())
}

pub fn forest_cap() -> usize {
    env_override().unwrap_or(FOREST_ENUMERATION_CAP)
}

pub fn identity_cap() -> usize {
    env_override().unwrap_or(IDENTITY_CAP)
}

pub(crate) fn check(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::SizeLimitExceeded { n, cap })
    } else {
        Ok(())
    }
}
