use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    #[serde(alias = "log")]
    Logarithmic,
}

/// Discretization of "for all t" used by every order check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    /// Logarithmic, 2000 points on [1e-3, 20].
    fn default() -> Self {
        Self {
            t_min: 1e-3,
            t_max: 20.0,
            count: 2000,
            spacing: Spacing::Logarithmic,
        }
    }
}

impl GridSpec {
    pub fn new(t_min: f64, t_max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        let g = Self {
            t_min,
            t_max,
            count,
            spacing,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn linear(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        Self::new(t_min, t_max, count, Spacing::Linear)
    }

    pub fn logarithmic(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        Self::new(t_min, t_max, count, Spacing::Logarithmic)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min.is_finite() && self.t_max.is_finite()) {
            return Err(Error::Config(format!(
                "grid bounds must be finite (got [{}, {}])",
                self.t_min, self.t_max
            )));
        }
        if self.t_min <= 0.0 {
            return Err(Error::Config(format!(
                "grid t_min must be positive (got {})",
                self.t_min
            )));
        }
        if self.t_min >= self.t_max {
            return Err(Error::Config(format!(
                "grid requires t_min < t_max (got {} >= {})",
                self.t_min, self.t_max
            )));
        }
        if self.count < 2 {
            return Err(Error::Config(format!(
                "grid needs at least 2 points (got {})",
                self.count
            )));
        }
        Ok(())
    }

    /// Grid points in ascending order; the endpoints are exact.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        let mut pts: Vec<f64> = match self.spacing {
            Spacing::Linear => {
                let h = (self.t_max - self.t_min) / last;
                (0..self.count).map(|i| self.t_min + i as f64 * h).collect()
            }
            Spacing::Logarithmic => {
                let (a, b) = (self.t_min.ln(), self.t_max.ln());
                let h = (b - a) / last;
                (0..self.count).map(|i| (a + i as f64 * h).exp()).collect()
            }
        };
        pts[0] = self.t_min;
        pts[self.count - 1] = self.t_max;
        pts
    }

    /// Same bounds and spacing with `factor − 1` extra points inserted into
    /// every interval, so the original points are (up to rounding) retained.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            count: (self.count - 1) * factor.max(1) + 1,
            ..*self
        }
    }
}
