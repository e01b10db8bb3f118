use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Wall-clock budget shared by the backtracking searches. Exceeding it is an
/// error; searches never return partial answers.
#[derive(Clone, Copy, Debug)]
pub struct Deadline {
    end: Option<Instant>,
}

impl Deadline {
    pub fn none() -> Self {
        Self { end: None }
    }

    pub fn after(d: Duration) -> Self {
        Self { end: Some(Instant::now() + d) }
    }

    pub fn from_secs(secs: Option<f64>) -> Self {
        match secs {
            Some(s) => Self::after(Duration::from_secs_f64(s)),
            None => Self::none(),
        }
    }

    #[inline]
    pub fn check(&self) -> Result<()> {
        match self.end {
            Some(end) if Instant::now() >= end => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}

impl Default for Deadline {
    fn default() -> Self {
        Self::none()
    }
}
