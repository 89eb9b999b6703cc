//! Ground truth by enumeration: explicit codes, distances, covering radii,
//! brute-force volumes and exact minimum coverings of tiny spaces.

use std::time::Duration;

use thiserror::Error;

use crate::field::FieldError;
use crate::matrix::CapExceeded;
use crate::space::SpaceError;

mod code;
mod metric;
mod search;

pub use code::ExplicitCode;
pub use metric::{
    ball_offsets, brute_intersection_volume, brute_sphere_volume, brute_sphere_volumes,
    covering_radius, covers_within, is_msrd, maximal_code, min_distance,
};
pub use search::{
    exhaustive_min_covering, greedy_min_covering, linear_min_covering, CoveringOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("budget exhausted: {what}")]
    Budget {
        what: String,
        /// Best bracket known when the search stopped.
        lower: Option<u64>,
        upper: Option<u64>,
    },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("code is empty")]
    Empty,
    #[error("generator rows are linearly dependent")]
    Dependent,
    #[error("operation needs a linear code")]
    NotLinear,
    #[error("witness text: {0}")]
    Parse(String),
}

impl From<CapExceeded> for OracleError {
    fn from(e: CapExceeded) -> Self {
        OracleError::Budget {
            what: e.to_string(),
            lower: None,
            upper: None,
        }
    }
}

impl From<FieldError> for OracleError {
    fn from(e: FieldError) -> Self {
        OracleError::Space(SpaceError::Field(e))
    }
}

impl OracleError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            OracleError::Budget { .. } | OracleError::Space(SpaceError::Cap(_))
        )
    }
}

/// Limits for exhaustive work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest number of vectors the space may have.
    pub max_space_size: u64,
    pub time_cap: Option<Duration>,
}

impl SearchBudget {
    /// Defaults for exact covering search.
    pub fn covering() -> Self {
        SearchBudget {
            max_space_size: 1 << 16,
            time_cap: Some(Duration::from_secs(600)),
        }
    }

    /// Defaults for volume and radius enumeration.
    pub fn enumeration() -> Self {
        SearchBudget {
            max_space_size: 1 << 24,
            time_cap: None,
        }
    }

    pub fn with_space(mut self, max_space_size: u64) -> Self {
        self.max_space_size = max_space_size;
        self
    }

    pub fn with_time(mut self, cap: Duration) -> Self {
        self.time_cap = Some(cap);
        self
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::covering()
    }
}
