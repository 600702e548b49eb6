use std::path::Path;
use std::str::FromStr;

use oscillab_core::seqgen::{CacheStatus, SieveCache};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheAction {
    Build,
    Verify,
    Purge,
}

impl FromStr for CacheAction {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "build" => Ok(CacheAction::Build),
            "verify" => Ok(CacheAction::Verify),
            "purge" => Ok(CacheAction::Purge),
            other => Err(CliError::InvalidParam(format!(
                "unknown cache action {other:?} (expected build, verify or purge)"
            ))),
        }
    }
}

/// Builds, verifies or purges the sieve table of limit `n_max` in `dir`.
pub fn cache_admin(action: CacheAction, n_max: u64, dir: &Path) -> Result<CacheStatus> {
    let cache = SieveCache::new(dir);
    Ok(match action {
        CacheAction::Build => cache.load_or_build(n_max)?.1,
        CacheAction::Verify => cache.verify(n_max)?,
        CacheAction::Purge => cache.purge(n_max)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifecycle() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path();
        assert_eq!(cache_admin(CacheAction::Build, 1_000_000, d).unwrap(), CacheStatus::Built);
        assert_eq!(cache_admin(CacheAction::Verify, 1_000_000, d).unwrap(), CacheStatus::Valid);
        assert_eq!(cache_admin(CacheAction::Build, 1_000_000, d).unwrap(), CacheStatus::Hit);
        assert_eq!(cache_admin(CacheAction::Purge, 1_000_000, d).unwrap(), CacheStatus::Purged);
        assert_eq!(cache_admin(CacheAction::Verify, 1_000_000, d).unwrap(), CacheStatus::Missing);
        assert!("rebuild".parse::<CacheAction>().is_err());
    }
}
