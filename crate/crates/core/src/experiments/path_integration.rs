//! Dead reckoning by repeated binding of displacement encodings.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::trajectory::{generate_trajectory, Trajectory, TrajectoryParams};
use crate::config::GridConfig;
use crate::error::Result;
use crate::raster::Grid2D;
use crate::spatial::{Lattice, ModuleGeometry, Point2D, PositionCodebook, Rect};
use crate::tensor::GcTensor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathIntegrationParams {
    /// Side of the square arena in pixels; positions live in `[0, size-1]`.
    pub arena: usize,
    pub steps: usize,
    pub trajectory: TrajectoryParams,
    /// Time steps whose similarity maps are kept.
    pub map_steps: Vec<usize>,
}

impl Default for PathIntegrationParams {
    fn default() -> Self {
        Self {
            arena: 64,
            steps: 100,
            trajectory: TrajectoryParams::default(),
            map_steps: vec![0, 50, 100],
        }
    }
}

#[derive(Debug, Clone)]
pub struct PathIntegrationResult {
    pub trajectory: Trajectory,
    /// Codebook decode of the state at every step, `decoded[0]` included.
    pub decoded: Vec<Point2D>,
    /// Mean squared Euclidean decode error over steps `1..=steps`, px^2.
    pub mse: f64,
    pub max_error: f64,
    /// Similarity map of the state at each requested step.
    pub maps: Vec<(usize, Grid2D)>,
    /// Displacement from the start read off `unbind(S(T), S(0))`.
    pub home_vector: Point2D,
    pub true_home_vector: Point2D,
}

/// Shared, reusable pieces for several runs under one geometry.
pub struct PathIntegrator {
    geometry: ModuleGeometry,
    codebook: PositionCodebook,
    arena: Rect,
}

impl PathIntegrator {
    pub fn new(config: &Arc<GridConfig>, arena: usize) -> Result<Self> {
        let geometry = ModuleGeometry::new(config);
        let rect = Rect::arena(arena);
        let codebook = PositionCodebook::build(&geometry, Lattice::new(rect, 1.0)?)?;
        Ok(Self {
            geometry,
            codebook,
            arena: rect,
        })
    }

    pub fn geometry(&self) -> &ModuleGeometry {
        &self.geometry
    }

    pub fn codebook(&self) -> &PositionCodebook {
        &self.codebook
    }

    /// Accumulated states `S(0) = encode(start)`, `S(t) = S(t-1) (*) encode(dv)`.
    pub fn integrate(&self, traj: &Trajectory) -> Result<Vec<GcTensor>> {
        let mut states = Vec::with_capacity(traj.positions.len());
        let mut s = self.geometry.encode(traj.positions[0]);
        states.push(s.clone());
        for v in &traj.velocities {
            s = s.bind(&self.geometry.encode(*v))?;
            states.push(s.clone());
        }
        Ok(states)
    }

    /// Displacement encoded by `unbind(s_t, s_0)`, decoded by shifting it to
    /// the arena centre first.
    pub fn home_vector(&self, s_t: &GcTensor, s_0: &GcTensor) -> Result<Point2D> {
        let centre = self.arena.center().x.round();
        let c = Point2D::new(centre, centre);
        let shifted = s_t.unbind(s_0)?.bind(&self.geometry.encode(c))?;
        let (p, _) = self.codebook.decode(&shifted)?;
        Ok(p - c)
    }

    pub fn run(&self, traj: Trajectory, map_steps: &[usize]) -> Result<PathIntegrationResult> {
        let states = self.integrate(&traj)?;
        let decoded = states
            .iter()
            .map(|s| self.codebook.decode(s).map(|(p, _)| p))
            .collect::<Result<Vec<_>>>()?;
        let errors: Vec<f64> = decoded
            .iter()
            .zip(&traj.positions)
            .skip(1)
            .map(|(d, p)| (*d - *p).norm())
            .collect();
        let mse = errors.iter().map(|e| e * e).sum::<f64>() / errors.len().max(1) as f64;
        let max_error = errors.iter().copied().fold(0.0, f64::max);
        let mut maps = Vec::new();
        for &t in map_steps {
            if let Some(s) = states.get(t) {
                maps.push((t, self.codebook.similarity_map(s)?));
            }
        }
        let last = states.len() - 1;
        let home_vector = self.home_vector(&states[last], &states[0])?;
        let true_home_vector = traj.positions[last] - traj.positions[0];
        Ok(PathIntegrationResult {
            trajectory: traj,
            decoded,
            mse,
            max_error,
            maps,
            home_vector,
            true_home_vector,
        })
    }
}

/// Generates a seeded trajectory and integrates it.
pub fn run_path_integration(
    config: &Arc<GridConfig>,
    params: &PathIntegrationParams,
    seed: u64,
) -> Result<PathIntegrationResult> {
    let pi = PathIntegrator::new(config, params.arena)?;
    run_with(&pi, params, seed)
}

/// As [`run_path_integration`], reusing a prepared integrator.
pub fn run_with(
    pi: &PathIntegrator,
    params: &PathIntegrationParams,
    seed: u64,
) -> Result<PathIntegrationResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let traj = generate_trajectory(pi.arena, params.steps, &mut rng, &params.trajectory)?;
    pi.run(traj, &params.map_steps)
}
