//! Encoding of 2D positions through a hexagonal projection per module.
//!
//! Each module (scale `s`, orientation `theta`) maps a point `p` to three
//! hexagonal coordinates `(u, v, w) = T R(theta) p / s`. One unit of a
//! hexagonal coordinate is one full period of the module, so the module
//! phase is `n * u` in neuron-index units.

use std::f64::consts::TAU;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codebook::{Codebook, Key};
use crate::config::GridConfig;
use crate::error::{Result, VsaError};
use crate::raster::Grid2D;
use crate::tensor::{wrap_phase, GcTensor, PhaseTensor};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Projection onto three axes 120 degrees apart. Both columns sum to zero.
pub const HEX_PROJECTION: [[f64; 2]; 3] = [[SQRT3_2, -0.5], [-SQRT3_2, -0.5], [0.0, 1.0]];

/// Default cap on lattice codebook size.
pub const DEFAULT_MAX_ENTRIES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2D) -> f64 {
        (self - other).norm()
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotated(self, alpha: f64) -> Point2D {
        let (s, c) = alpha.sin_cos();
        Point2D::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Point2D {
    type Output = Point2D;
    fn add(self, o: Point2D) -> Point2D {
        Point2D::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point2D {
    type Output = Point2D;
    fn sub(self, o: Point2D) -> Point2D {
        Point2D::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for Point2D {
    type Output = Point2D;
    fn neg(self) -> Point2D {
        Point2D::new(-self.x, -self.y)
    }
}

/// Hexagonal coordinates of `p` for a module at orientation `theta`
/// (radians) and scale `s` (pixels).
pub fn hex_project(p: Point2D, theta: f64, s: f64) -> Result<[f64; 3]> {
    if !(s > 0.0) {
        return Err(VsaError::InvalidArgument(format!(
            "scale must be > 0, got {s}"
        )));
    }
    let (x, y) = (p.rotated(theta).x, p.rotated(theta).y);
    Ok(HEX_PROJECTION.map(|row| (row[0] * x + row[1] * y) / s))
}

/// Per-module scales and orientations.
///
/// Orientation `t` of scale `i` is `offset_i - 2 pi t / n_theta` (mod 2 pi):
/// stepping one index along the orientation axis is a counter-clockwise
/// turn of the encoded plane by `2 pi / n_theta`. The offsets are drawn
/// once from the config seed, uniform in `[0, 2 pi / n_theta)`.
#[derive(Debug, Clone)]
pub struct ModuleGeometry {
    config: Arc<GridConfig>,
    scales: Vec<f64>,
    offsets: Vec<f64>,
    orientations: Vec<f64>,
    // n/s * T * R(theta), one per module
    phase_maps: Vec<[[f64; 2]; 3]>,
}

impl ModuleGeometry {
    pub fn new(config: &Arc<GridConfig>) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let spacing = TAU / config.n_theta as f64;
        let offsets: Vec<f64> = (0..config.n_s)
            .map(|_| rng.random::<f64>() * spacing)
            .collect();
        let scales: Vec<f64> = (0..config.n_s).map(|i| config.scale(i)).collect();
        let mut orientations = Vec::with_capacity(config.module_count());
        let mut phase_maps = Vec::with_capacity(config.module_count());
        let nf = config.n as f64;
        for (i, &offset) in offsets.iter().enumerate() {
            for t in 0..config.n_theta {
                let theta = (offset - spacing * t as f64).rem_euclid(TAU);
                orientations.push(theta);
                let (sn, cs) = theta.sin_cos();
                let k = nf / scales[i];
                phase_maps.push(HEX_PROJECTION.map(|row| {
                    [
                        k * (row[0] * cs + row[1] * sn),
                        k * (-row[0] * sn + row[1] * cs),
                    ]
                }));
            }
        }
        Self {
            config: Arc::clone(config),
            scales,
            offsets,
            orientations,
            phase_maps,
        }
    }

    pub fn config(&self) -> &Arc<GridConfig> {
        &self.config
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Per-scale random orientation offsets (radians).
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn orientation(&self, scale: usize, orientation: usize) -> f64 {
        self.orientations[self.config.module_index(scale, orientation)]
    }

    /// Unwrapped module phases (neuron-index units) of `p`, laid out like a
    /// [`PhaseTensor`]. Linear in `p`.
    pub fn raw_phases(&self, p: Point2D) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.phase_maps.len() * 3);
        for m in &self.phase_maps {
            for row in m {
                out.push(row[0] * p.x + row[1] * p.y);
            }
        }
        out
    }

    pub fn phases(&self, p: Point2D) -> PhaseTensor {
        PhaseTensor::new(&self.config, self.raw_phases(p)).expect("layout matches config")
    }

    pub fn encode(&self, p: Point2D) -> GcTensor {
        self.phases(p).materialize()
    }

    /// Phase steps for a unit move along x and along y.
    pub fn generators(&self) -> GeneratorPair {
        GeneratorPair {
            gx: self.phases(Point2D::new(1.0, 0.0)),
            gy: self.phases(Point2D::new(0.0, 1.0)),
        }
    }

    /// Basis of the translation lattice under which the module at
    /// (`scale`, `orientation`) is invariant.
    pub fn lattice_vectors(&self, scale: usize, orientation: usize) -> [Point2D; 2] {
        // Solve T R d = s e_a on the first two rows; the third row follows
        // because the rows of T sum to zero.
        let theta = self.orientation(scale, orientation);
        let s = self.scales[scale];
        let [[a, b], [c, d], _] = HEX_PROJECTION;
        let det = a * d - b * c;
        let inv = [[d / det, -b / det], [-c / det, a / det]];
        let basis = |col: usize| Point2D::new(s * inv[0][col], s * inv[1][col]).rotated(-theta);
        [basis(0), basis(1)]
    }

    /// Activation of a single neuron when the encoded point is `p`.
    pub fn neuron_activation(&self, neuron: Neuron, p: Point2D) -> f64 {
        let n = self.config.n as f64;
        let m = self.phase_maps[self.config.module_index(neuron.scale, neuron.orientation)];
        let idx = [neuron.i, neuron.j, neuron.k];
        let mut acc = 0.0;
        for axis in 0..3 {
            let phase = m[axis][0] * p.x + m[axis][1] * p.y;
            acc += (TAU / n * (idx[axis] as f64 - phase)).cos();
        }
        self.config.sigma() * acc
    }
}

/// Generator phase tensors for unit steps in x and y.
#[derive(Debug, Clone)]
pub struct GeneratorPair {
    pub gx: PhaseTensor,
    pub gy: PhaseTensor,
}

impl GeneratorPair {
    /// `V_X^x (*) V_Y^y` computed in phase space.
    pub fn encode(&self, p: Point2D) -> GcTensor {
        self.gx
            .fractional_power(p.x)
            .compose(&self.gy.fractional_power(p.y))
            .expect("generators share a config")
            .materialize()
    }
}

/// Closed axis-aligned rectangle in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    /// `[0, size-1]^2`: the pixel centres of a `size x size` arena.
    pub fn arena(size: usize) -> Self {
        let m = size.saturating_sub(1) as f64;
        Self::new(0.0, m, 0.0, m)
    }

    /// Square `[-r, r]^2` centred on the origin.
    pub fn centered(r: f64) -> Self {
        Self::new(-r, r, -r, r)
    }

    pub fn contains(&self, p: Point2D) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn center(&self) -> Point2D {
        Point2D::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}

/// Regular grid of points covering a [`Rect`], starting at its lower-left
/// corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub rect: Rect,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Lattice {
    pub fn new(rect: Rect, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(VsaError::InvalidArgument(format!(
                "step must be > 0, got {step}"
            )));
        }
        let (w, h) = (rect.width(), rect.height());
        if !(w.is_finite() && h.is_finite()) || w < 0.0 || h < 0.0 {
            return Err(VsaError::InvalidArgument("degenerate extent".into()));
        }
        let count = |len: f64| (len / step + 1e-9).floor() as usize + 1;
        Ok(Self {
            rect,
            step,
            nx: count(w),
            ny: count(h),
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, ix: usize, iy: usize) -> Point2D {
        Point2D::new(
            self.rect.x_min + ix as f64 * self.step,
            self.rect.y_min + iy as f64 * self.step,
        )
    }

    /// Points in row-major order (x fastest).
    pub fn points(&self) -> impl Iterator<Item = Point2D> + '_ {
        (0..self.ny).flat_map(move |iy| (0..self.nx).map(move |ix| self.point(ix, iy)))
    }

    pub fn grid(&self, f: impl Fn(Point2D) -> f64) -> Grid2D {
        Grid2D::from_fn(self.nx, self.ny, |ix, iy| f(self.point(ix, iy)))
    }
}

/// Codebook of encoded lattice points, keyed by `Key::Point(x, y)`.
#[derive(Debug, Clone)]
pub struct PositionCodebook {
    lattice: Lattice,
    codebook: Codebook,
}

impl PositionCodebook {
    pub fn build(geom: &ModuleGeometry, lattice: Lattice) -> Result<Self> {
        Self::build_with_limit(geom, lattice, DEFAULT_MAX_ENTRIES)
    }

    pub fn build_with_limit(geom: &ModuleGeometry, lattice: Lattice, limit: usize) -> Result<Self> {
        if lattice.len() > limit {
            return Err(VsaError::CodebookTooLarge {
                requested: lattice.len(),
                limit,
            });
        }
        let keys: Vec<Key> = lattice.points().map(|p| Key::Point(p.x, p.y)).collect();
        let codebook = Codebook::build(geom.config(), keys, |k| {
            let (x, y) = k.as_point().expect("point key");
            geom.encode(Point2D::new(x, y))
        })?;
        Ok(Self { lattice, codebook })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    /// Lattice point with the highest cosine similarity to `v`.
    pub fn decode(&self, v: &GcTensor) -> Result<(Point2D, f64)> {
        let (i, s) = self.codebook.cleanup_index(v)?;
        Ok((
            self.lattice.point(i % self.lattice.nx, i / self.lattice.nx),
            s,
        ))
    }

    /// Similarity of `v` to every lattice entry, arranged as an image.
    pub fn similarity_map(&self, v: &GcTensor) -> Result<Grid2D> {
        Grid2D::new(
            self.lattice.nx,
            self.lattice.ny,
            self.codebook.similarities(v)?,
        )
    }
}

/// Address of one neuron: module (scale, orientation) and cube index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neuron {
    pub scale: usize,
    pub orientation: usize,
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Neuron {
    pub fn new(scale: usize, orientation: usize, i: usize, j: usize, k: usize) -> Self {
        Self {
            scale,
            orientation,
            i,
            j,
            k,
        }
    }
}

/// The neuron's activation evaluated at every lattice point.
pub fn receptive_field(neuron: Neuron, lattice: &Lattice, geom: &ModuleGeometry) -> Result<Grid2D> {
    let cfg = geom.config();
    if neuron.scale >= cfg.n_s
        || neuron.orientation >= cfg.n_theta
        || neuron.i >= cfg.n
        || neuron.j >= cfg.n
        || neuron.k >= cfg.n
    {
        return Err(VsaError::IndexOutOfRange(format!("{neuron:?}")));
    }
    Ok(lattice.grid(|p| geom.neuron_activation(neuron, p)))
}

/// Cosine-similarity kernel `sim(encode(center), encode(p))` over a lattice.
pub fn similarity_kernel(geom: &ModuleGeometry, center: Point2D, lattice: &Lattice) -> Grid2D {
    let c = geom.encode(center);
    let cn = c.norm();
    lattice.grid(|p| {
        let v = geom.encode(p);
        v.dot(&c).expect("same config") / (v.norm() * cn)
    })
}

/// Module phases of `p` wrapped to `[0, n)`: the quantity a single module
/// can represent.
pub fn wrapped_module_phases(
    geom: &ModuleGeometry,
    p: Point2D,
    scale: usize,
    orientation: usize,
) -> [f64; 3] {
    let n = geom.config().n as f64;
    let m = geom.config().module_index(scale, orientation);
    let raw = geom.raw_phases(p);
    [raw[3 * m], raw[3 * m + 1], raw[3 * m + 2]].map(|x| wrap_phase(x, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::circular_distance;

    fn geom() -> ModuleGeometry {
        ModuleGeometry::new(&GridConfig::default().shared().unwrap())
    }

    #[test]
    fn projection_examples() {
        let o = hex_project(Point2D::new(0.0, 0.0), 0.3, 2.0).unwrap();
        assert_eq!(o, [0.0, 0.0, 0.0]);
        let a = hex_project(Point2D::new(1.0, 0.0), 0.0, 1.0).unwrap();
        assert!((a[0] - 0.8660254037844386).abs() < 1e-12);
        assert!((a[1] + 0.8660254037844386).abs() < 1e-12);
        assert!(a[2].abs() < 1e-12);
        let b = hex_project(Point2D::new(0.0, 1.0), 0.0, 4.0).unwrap();
        for (got, want) in b.iter().zip([-0.125, -0.125, 0.25]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(hex_project(Point2D::new(1.0, 1.0), 0.0, 0.0).is_err());
        assert!(hex_project(Point2D::new(1.0, 1.0), 0.0, -2.0).is_err());
    }

    #[test]
    fn projection_columns_sum_to_zero() {
        for col in 0..2 {
            let s: f64 = HEX_PROJECTION.iter().map(|r| r[col]).sum();
            assert!(s.abs() < 1e-15);
        }
    }

    #[test]
    fn geometry_layout() {
        let g = geom();
        let cfg = g.config().clone();
        for i in 0..cfg.n_s {
            assert_eq!(g.scales()[i], cfg.s_min * cfg.growth.powi(i as i32));
            assert!(g.offsets()[i] >= 0.0 && g.offsets()[i] < TAU / cfg.n_theta as f64);
            for t in 0..cfg.n_theta {
                let expect = (g.offsets()[i] - TAU * t as f64 / cfg.n_theta as f64).rem_euclid(TAU);
                assert!((g.orientation(i, t) - expect).abs() < 1e-12);
            }
        }
        // the offsets come from the config seed
        let again = geom();
        assert_eq!(g.offsets(), again.offsets());
        let other = ModuleGeometry::new(&GridConfig::default().with_seed(9).shared().unwrap());
        assert_ne!(g.offsets(), other.offsets());
    }

    #[test]
    fn module_phases_match_projection() {
        let g = geom();
        let p = Point2D::new(3.7, -1.2);
        let raw = g.raw_phases(p);
        let cfg = g.config();
        for s in 0..cfg.n_s {
            for t in 0..cfg.n_theta {
                let uvw = hex_project(p, g.orientation(s, t), g.scales()[s]).unwrap();
                let m = cfg.module_index(s, t);
                for a in 0..3 {
                    assert!((raw[3 * m + a] - 3.0 * uvw[a]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn origin_encodes_identity() {
        let g = geom();
        let v = g.encode(Point2D::default());
        assert!(v.max_abs_diff(&GcTensor::identity(g.config())) < 1e-15);
    }

    #[test]
    fn generator_equivalence() {
        let g = geom();
        let gens = g.generators();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = Point2D::new(rng.random_range(-70.0..70.0), rng.random_range(-70.0..70.0));
            let direct = g.encode(p);
            assert!(direct.max_abs_diff(&gens.encode(p)) < 1e-9);
            // materialise(x gx + y gy) on the tensor side
            let bound = gens
                .gx
                .fractional_power(p.x)
                .materialize()
                .bind(&gens.gy.fractional_power(p.y).materialize())
                .unwrap();
            assert!(direct.max_abs_diff(&bound) < 1e-9);
        }
    }

    #[test]
    fn shift_equivariance() {
        let g = geom();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let p = Point2D::new(rng.random_range(-30.0..30.0), rng.random_range(-30.0..30.0));
            let d = Point2D::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let moved = g.encode(p).bind(&g.encode(d)).unwrap();
            assert!(moved.max_abs_diff(&g.encode(p + d)) < 1e-9);
        }
    }

    #[test]
    fn kernel_is_even_and_peaked() {
        let g = geom();
        let o = g.encode(Point2D::default());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = Point2D::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0));
            let a = o.cosine_similarity(&g.encode(p)).unwrap();
            let b = o.cosine_similarity(&g.encode(-p)).unwrap();
            assert!((a - b).abs() < 1e-9);
        }
        let lattice = Lattice::new(Rect::centered(16.0), 1.0).unwrap();
        let kernel = similarity_kernel(&g, Point2D::default(), &lattice);
        let peak = kernel.get(16, 16);
        assert!((peak - 1.0).abs() < 1e-12);
        for iy in 0..lattice.ny {
            for ix in 0..lattice.nx {
                if lattice.point(ix, iy).norm() > 4.0 {
                    assert!(kernel.get(ix, iy) < peak);
                }
            }
        }
    }

    #[test]
    fn module_periodicity() {
        let g = geom();
        let cfg = g.config().clone();
        let n = cfg.n as f64;
        let p = Point2D::new(2.3, -7.1);
        for (s, t) in [(0, 0), (2, 7), (4, 22)] {
            for lv in g.lattice_vectors(s, t) {
                let a = wrapped_module_phases(&g, p, s, t);
                let b = wrapped_module_phases(&g, p + lv, s, t);
                for axis in 0..3 {
                    assert!(circular_distance(a[axis], b[axis], n) < 1e-6);
                }
            }
        }
    }

    #[test]
    fn lattice_counting() {
        let l = Lattice::new(Rect::arena(64), 1.0).unwrap();
        assert_eq!(l.len(), 4096);
        assert_eq!(l.point(63, 0), Point2D::new(63.0, 0.0));
        let half = Lattice::new(Rect::centered(2.0), 0.5).unwrap();
        assert_eq!((half.nx, half.ny), (9, 9));
        assert!(Lattice::new(Rect::arena(4), 0.0).is_err());
        assert!(Lattice::new(Rect::new(1.0, 0.0, 0.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn codebook_guard() {
        let g = geom();
        let l = Lattice::new(Rect::arena(64), 1.0).unwrap();
        assert!(matches!(
            PositionCodebook::build_with_limit(&g, l, 1000),
            Err(VsaError::CodebookTooLarge {
                requested: 4096,
                limit: 1000
            })
        ));
    }

    #[test]
    fn receptive_field_checks() {
        let g = geom();
        let l = Lattice::new(Rect::centered(8.0), 1.0).unwrap();
        let f = receptive_field(Neuron::new(0, 3, 0, 0, 0), &l, &g).unwrap();
        // all three cosines peak at the origin
        assert!((f.get(8, 8) - 3.0 * g.config().sigma()).abs() < 1e-12);
        assert!((f.get(8, 8) - f.max()).abs() < 1e-12);
        for bad in [
            Neuron::new(5, 0, 0, 0, 0),
            Neuron::new(0, 23, 0, 0, 0),
            Neuron::new(0, 0, 3, 0, 0),
        ] {
            assert!(matches!(
                receptive_field(bad, &l, &g),
                Err(VsaError::IndexOutOfRange(_))
            ));
        }
    }

    #[test]
    fn degenerate_geometry_is_allowed() {
        let cfg = GridConfig {
            n_theta: 1,
            n_s: 1,
            ..Default::default()
        }
        .shared()
        .unwrap();
        let g = ModuleGeometry::new(&cfg);
        let v = g.encode(Point2D::new(1.0, 2.0));
        assert_eq!(v.data().len(), 27);
    }
}
