//! Smooth random walks inside a rectangular arena.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, VsaError};
use crate::spatial::{Point2D, Rect};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryParams {
    /// Velocity autocorrelation `gamma` in `[0, 1]`.
    pub smoothing: f64,
    /// Standard deviation of each component of the Gaussian drive.
    pub noise_std: f64,
    /// Speed cap in pixels per step.
    pub max_speed: f64,
    /// Start position; the arena centre when absent.
    pub start: Option<Point2D>,
    /// Velocity before the first step.
    pub initial_velocity: Point2D,
}

impl Default for TrajectoryParams {
    fn default() -> Self {
        Self {
            smoothing: 0.8,
            noise_std: 1.0,
            max_speed: 2.0,
            start: None,
            initial_velocity: Point2D::default(),
        }
    }
}

/// `positions` has one more entry than `velocities`; `velocities[t]` is the
/// displacement actually applied between `positions[t]` and
/// `positions[t + 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub positions: Vec<Point2D>,
    pub velocities: Vec<Point2D>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.velocities.len()
    }

    /// A walk that never moves.
    pub fn stationary(start: Point2D, steps: usize) -> Self {
        Self {
            positions: vec![start; steps + 1],
            velocities: vec![Point2D::default(); steps],
        }
    }
}

/// Moves one coordinate by `v`, bouncing off `[lo, hi]`. Returns the new
/// coordinate and the velocity to carry forward.
fn reflect(x: f64, v: f64, lo: f64, hi: f64) -> (f64, f64) {
    let next = x + v;
    if next < lo || next > hi {
        let bounced = (x - v).clamp(lo, hi);
        (bounced, -v)
    } else {
        (next, v)
    }
}

/// Generates `v(t) = gamma v(t-1) + (1 - gamma) eta(t)` with the speed
/// capped at `max_speed` and velocity components reversed at the walls.
pub fn generate_trajectory<R: Rng + ?Sized>(
    arena: Rect,
    steps: usize,
    rng: &mut R,
    params: &TrajectoryParams,
) -> Result<Trajectory> {
    if steps == 0 {
        return Err(VsaError::InvalidArgument(
            "trajectory needs at least one step".into(),
        ));
    }
    if !(0.0..=1.0).contains(&params.smoothing) {
        return Err(VsaError::InvalidArgument(format!(
            "smoothing must lie in [0, 1], got {}",
            params.smoothing
        )));
    }
    if !(params.max_speed > 0.0) || !(params.noise_std >= 0.0) {
        return Err(VsaError::InvalidArgument(
            "max_speed must be positive and noise_std non-negative".into(),
        ));
    }
    let start = params.start.unwrap_or_else(|| arena.center());
    if !arena.contains(start) {
        return Err(VsaError::InvalidArgument(format!(
            "start {start:?} is outside the arena"
        )));
    }
    let noise =
        Normal::new(0.0, params.noise_std).map_err(|e| VsaError::InvalidArgument(e.to_string()))?;
    let g = params.smoothing;
    let mut v = params.initial_velocity;
    let mut p = start;
    let mut positions = Vec::with_capacity(steps + 1);
    let mut velocities = Vec::with_capacity(steps);
    positions.push(p);
    for _ in 0..steps {
        let eta = Point2D::new(noise.sample(rng), noise.sample(rng));
        v = Point2D::new(g * v.x + (1.0 - g) * eta.x, g * v.y + (1.0 - g) * eta.y);
        let speed = v.norm();
        if speed > params.max_speed {
            v = Point2D::new(
                v.x * params.max_speed / speed,
                v.y * params.max_speed / speed,
            );
        }
        let (x, vx) = reflect(p.x, v.x, arena.x_min, arena.x_max);
        let (y, vy) = reflect(p.y, v.y, arena.y_min, arena.y_max);
        let next = Point2D::new(x, y);
        velocities.push(next - p);
        positions.push(next);
        p = next;
        v = Point2D::new(vx, vy);
    }
    Ok(Trajectory {
        positions,
        velocities,
    })
}

/// Lag-1 autocorrelation of velocity components, pooled over x and y.
pub fn velocity_autocorrelation(traj: &Trajectory) -> f64 {
    let comps: [Vec<f64>; 2] = [
        traj.velocities.iter().map(|v| v.x).collect(),
        traj.velocities.iter().map(|v| v.y).collect(),
    ];
    let (mut num, mut den) = (0.0, 0.0);
    for c in &comps {
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        for w in c.windows(2) {
            num += (w[0] - mean) * (w[1] - mean);
        }
        den += c.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stays_inside_and_is_consistent() {
        let arena = Rect::arena(64);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = generate_trajectory(arena, 5000, &mut rng, &TrajectoryParams::default()).unwrap();
        assert_eq!(t.positions.len(), 5001);
        for (i, v) in t.velocities.iter().enumerate() {
            assert!(arena.contains(t.positions[i + 1]));
            let step = t.positions[i] + *v;
            assert!(step.distance(t.positions[i + 1]) < 1e-12);
            assert!(v.norm() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn straight_line_limit() {
        let params = TrajectoryParams {
            smoothing: 1.0,
            noise_std: 0.0,
            initial_velocity: Point2D::new(1.0, 0.5),
            start: Some(Point2D::new(10.0, 10.0)),
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = generate_trajectory(Rect::arena(64), 20, &mut rng, &params).unwrap();
        for (i, p) in t.positions.iter().enumerate() {
            assert!(p.distance(Point2D::new(10.0 + i as f64, 10.0 + 0.5 * i as f64)) < 1e-12);
        }
    }

    #[test]
    fn wall_reverses_velocity() {
        let params = TrajectoryParams {
            smoothing: 1.0,
            noise_std: 0.0,
            initial_velocity: Point2D::new(2.0, 0.0),
            start: Some(Point2D::new(62.0, 5.0)),
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = generate_trajectory(Rect::arena(64), 3, &mut rng, &params).unwrap();
        let xs: Vec<f64> = t.positions.iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![62.0, 60.0, 58.0, 56.0]);
    }

    #[test]
    fn white_noise_when_unsmoothed() {
        let params = TrajectoryParams {
            smoothing: 0.0,
            max_speed: 100.0,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let arena = Rect::new(-1e6, 1e6, -1e6, 1e6);
        let t = generate_trajectory(arena, 10_000, &mut rng, &params).unwrap();
        assert!(velocity_autocorrelation(&t).abs() < 0.05);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let arena = Rect::arena(64);
        let p = TrajectoryParams::default();
        assert!(generate_trajectory(arena, 0, &mut rng, &p).is_err());
        let bad = TrajectoryParams {
            smoothing: 1.5,
            ..p.clone()
        };
        assert!(generate_trajectory(arena, 5, &mut rng, &bad).is_err());
        let outside = TrajectoryParams {
            start: Some(Point2D::new(-1.0, 0.0)),
            ..p
        };
        assert!(generate_trajectory(arena, 5, &mut rng, &outside).is_err());
    }
}
