use thiserror::Error;

use crate::Site;

/// Errors shared across the core modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// Invalid distribution parameters for an environment family.
    #[error("invalid environment spec: {0}")]
    InvalidSpec(&'static str),
    /// A window operation that would drop already-generated sites.
    #[error("window [{new_lo}, {new_hi}] does not contain the existing window [{lo}, {hi}]")]
    WindowShrink {
        lo: Site,
        hi: Site,
        new_lo: Site,
        new_hi: Site,
    },
    /// A window that does not contain the origin.
    #[error("window [{lo}, {hi}] must contain site 0")]
    WindowWithoutOrigin { lo: Site, hi: Site },
    /// Site lookup outside the generated window.
    #[error("site {site} outside window [{lo}, {hi}]")]
    OutOfWindow { site: Site, lo: Site, hi: Site },
    /// Time argument beyond the length of the run.
    #[error("time {t} outside the valid range [{lo}, {hi}]")]
    TimeOutOfRange { t: u64, lo: u64, hi: u64 },
    /// A valley triple that violates its defining max/min equalities.
    #[error("invalid valley triple: {0}")]
    InvalidValley(&'static str),
    /// Parameter outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
