use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VsaError};

/// Architecture hyperparameters shared by every tensor built from it.
///
/// A tensor holds `n_s * n_theta` modules of `n * n * n` neurons each,
/// laid out scale-major, then orientation, then the three module axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Neurons per module axis.
    pub n: usize,
    /// Orientations per scale.
    pub n_theta: usize,
    /// Number of scales.
    pub n_s: usize,
    /// Smallest grid scale in pixels.
    pub s_min: f64,
    /// Ratio between consecutive scales.
    pub growth: f64,
    /// Seed for the per-scale orientation offsets.
    pub seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: 3,
            n_theta: 23,
            n_s: 5,
            s_min: 4.0,
            growth: 1.42,
            seed: 0,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(VsaError::InvalidConfig(format!(
                "n must be >= 3, got {}",
                self.n
            )));
        }
        if self.n_theta < 1 || self.n_s < 1 {
            return Err(VsaError::InvalidConfig(
                "n_theta and n_s must be at least 1".into(),
            ));
        }
        if !(self.s_min.is_finite() && self.s_min > 0.0) {
            return Err(VsaError::InvalidConfig(format!(
                "s_min must be > 0, got {}",
                self.s_min
            )));
        }
        if !(self.growth.is_finite() && self.growth > 1.0) {
            return Err(VsaError::InvalidConfig(format!(
                "growth must be > 1, got {}",
                self.growth
            )));
        }
        Ok(())
    }

    /// Validates and wraps the config for sharing between tensors.
    pub fn shared(self) -> Result<Arc<GridConfig>> {
        self.validate()?;
        Ok(Arc::new(self))
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn module_count(&self) -> usize {
        self.n_s * self.n_theta
    }

    pub fn module_len(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Length of the flattened tensor.
    pub fn dim(&self) -> usize {
        self.module_count() * self.module_len()
    }

    pub fn module_index(&self, scale: usize, orientation: usize) -> usize {
        scale * self.n_theta + orientation
    }

    /// Activation normaliser: makes each fundamental DFT bin of a module
    /// built from three unit cosines have amplitude exactly 1 under the
    /// unnormalised forward transform.
    pub fn sigma(&self) -> f64 {
        2.0 / self.module_len() as f64
    }

    pub fn scale(&self, i: usize) -> f64 {
        self.s_min * self.growth.powi(i as i32)
    }
}

pub(crate) fn same_config(a: &Arc<GridConfig>, b: &Arc<GridConfig>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = GridConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.module_count(), 115);
        assert_eq!(cfg.dim(), 115 * 27);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            GridConfig {
                n: 2,
                ..Default::default()
            },
            GridConfig {
                n_theta: 0,
                ..Default::default()
            },
            GridConfig {
                n_s: 0,
                ..Default::default()
            },
            GridConfig {
                s_min: 0.0,
                ..Default::default()
            },
            GridConfig {
                growth: 1.0,
                ..Default::default()
            },
            GridConfig {
                growth: f64::NAN,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(
                matches!(cfg.validate(), Err(VsaError::InvalidConfig(_))),
                "{cfg:?}"
            );
        }
    }

    #[test]
    fn scales_grow_geometrically() {
        let cfg = GridConfig::default();
        assert_eq!(cfg.scale(0), 4.0);
        assert!((cfg.scale(4) - 4.0 * 1.42f64.powi(4)).abs() < 1e-12);
    }
}
