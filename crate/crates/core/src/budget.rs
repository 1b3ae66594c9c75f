//! Resource limits for the expensive table builds.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Limits on group size, h-table size and wall-clock time.
///
/// The defaults admit A1-A4, B2-B5, D4, F4, H3 and I2(m) for m <= 30.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_elements: usize,
    pub max_h_entries: usize,
    pub wall_clock_seconds: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_elements: 4000, max_h_entries: 50_000_000, wall_clock_seconds: 3600 }
    }
}

impl Budget {
    /// Default limits with a different element cap.
    pub fn with_max_elements(n: usize) -> Self {
        Budget { max_elements: n, ..Default::default() }
    }

    /// A budget that admits every supported computation.
    pub fn unlimited() -> Self {
        Budget { max_elements: usize::MAX, max_h_entries: usize::MAX, wall_clock_seconds: u64::MAX }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_elements == 0 || self.max_h_entries == 0 || self.wall_clock_seconds == 0 {
            return Err(Error::BudgetExceeded("budget limits must be positive".into()));
        }
        Ok(())
    }

    pub fn check_elements(&self, what: &str, n: u128) -> Result<()> {
        if n > self.max_elements as u128 {
            return Err(Error::BudgetExceeded(format!(
                "{what} has {n} elements, budget allows {}",
                self.max_elements
            )));
        }
        Ok(())
    }

    pub fn check_h_entries(&self, n: usize) -> Result<()> {
        if n > self.max_h_entries {
            return Err(Error::BudgetExceeded(format!(
                "{n} h-table entries requested, budget allows {}",
                self.max_h_entries
            )));
        }
        Ok(())
    }

    /// Starts a wall-clock timer against this budget.
    pub fn timer(&self) -> Deadline {
        Deadline {
            start: Instant::now(),
            limit: Duration::from_secs(self.wall_clock_seconds.min(u64::MAX / 2)),
        }
    }
}

/// Wall-clock deadline derived from a [`Budget`].
#[derive(Debug, Clone, Copy)]
pub struct Deadline {
    start: Instant,
    limit: Duration,
}

impl Deadline {
    pub fn check(&self, stage: &str) -> Result<()> {
        if self.start.elapsed() > self.limit {
            return Err(Error::BudgetExceeded(format!(
                "wall clock limit of {}s reached during {stage}",
                self.limit.as_secs()
            )));
        }
        Ok(())
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}
