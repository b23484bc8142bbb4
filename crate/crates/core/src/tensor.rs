//! Block-structured hypervectors and their algebra.
//!
//! A [`GcTensor`] is a rank-5 array `(n_s, n_theta, n, n, n)` of real
//! activations, stored flat. Each `n^3` block is one module. Binding is a
//! circular convolution inside every module, computed as a product of 3D
//! DFTs; bundling is plain addition.
//!
//! A "pure" tensor has, in every module, unit amplitude at the six
//! fundamental DFT bins `(±1,0,0), (0,±1,0), (0,0,±1)` and nothing
//! elsewhere. Pure tensors are described exactly by a [`PhaseTensor`]: one
//! phase per module axis, measured in neuron-index units.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::config::{same_config, GridConfig};
use crate::error::{Result, VsaError};
use crate::fft;

/// Maximum deviation of a fundamental amplitude from 1 (and of any other
/// bin from 0) for a tensor to count as pure.
pub const PURITY_TOLERANCE: f64 = 0.01;

const RESIDUE_TOLERANCE: f64 = 1e-9;

/// Reduces a phase into `[0, n)`.
pub(crate) fn wrap_phase(x: f64, n: f64) -> f64 {
    let r = x.rem_euclid(n);
    if r >= n {
        0.0
    } else {
        r
    }
}

/// Representative of a phase in `[-n/2, n/2)`.
pub(crate) fn principal_phase(x: f64, n: f64) -> f64 {
    let r = wrap_phase(x, n);
    if r >= n / 2.0 {
        r - n
    } else {
        r
    }
}

/// Shortest circular distance between two phases.
pub fn circular_distance(a: f64, b: f64, n: f64) -> f64 {
    principal_phase(a - b, n).abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcTensor {
    config: Arc<GridConfig>,
    data: Vec<f64>,
}

impl GcTensor {
    pub fn zeros(config: &Arc<GridConfig>) -> Self {
        Self {
            config: Arc::clone(config),
            data: vec![0.0; config.dim()],
        }
    }

    pub fn from_vec(config: &Arc<GridConfig>, data: Vec<f64>) -> Result<Self> {
        if data.len() != config.dim() {
            return Err(VsaError::ShapeMismatch {
                expected: config.dim(),
                actual: data.len(),
            });
        }
        Ok(Self {
            config: Arc::clone(config),
            data,
        })
    }

    /// The binding identity: every module at phase zero.
    pub fn identity(config: &Arc<GridConfig>) -> Self {
        PhaseTensor::zeros(config).materialize()
    }

    /// Random symbol with independent uniform phases per module axis.
    pub fn random_symbol<R: Rng + ?Sized>(config: &Arc<GridConfig>, rng: &mut R) -> Self {
        PhaseTensor::random(config, rng).materialize()
    }

    pub fn config(&self) -> &Arc<GridConfig> {
        &self.config
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn module(&self, scale: usize, orientation: usize) -> &[f64] {
        let len = self.config.module_len();
        let m = self.config.module_index(scale, orientation);
        &self.data[m * len..(m + 1) * len]
    }

    pub fn get(&self, scale: usize, orientation: usize, i: usize, j: usize, k: usize) -> f64 {
        let n = self.config.n;
        self.module(scale, orientation)[(i * n + j) * n + k]
    }

    fn check(&self, other: &GcTensor) -> Result<()> {
        if same_config(&self.config, &other.config) {
            Ok(())
        } else {
            Err(VsaError::ConfigMismatch)
        }
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &GcTensor) -> Result<f64> {
        self.check(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn scaled(&self, c: f64) -> GcTensor {
        GcTensor {
            config: Arc::clone(&self.config),
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn negated(&self) -> GcTensor {
        self.scaled(-1.0)
    }

    pub fn add(&self, other: &GcTensor) -> Result<GcTensor> {
        bundle([self, other], None)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    /// Largest element-wise absolute difference.
    pub fn max_abs_diff(&self, other: &GcTensor) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Per-module forward 3D DFT (unnormalised), in tensor layout.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = fft::to_complex(&self.data);
        fft::modules_forward(&mut buf, self.config.n);
        buf
    }

    /// Inverse of [`GcTensor::spectrum`]. Fails if the result is not real.
    pub fn from_spectrum(config: &Arc<GridConfig>, mut spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != config.dim() {
            return Err(VsaError::ShapeMismatch {
                expected: config.dim(),
                actual: spectrum.len(),
            });
        }
        fft::modules_inverse(&mut spectrum, config.n);
        Self::from_complex(config, spectrum, config.module_len() as f64)
    }

    pub(crate) fn from_complex(
        config: &Arc<GridConfig>,
        buf: Vec<Complex64>,
        scale: f64,
    ) -> Result<Self> {
        let mut residue = 0.0f64;
        let mut peak = 0.0f64;
        let data: Vec<f64> = buf
            .into_iter()
            .map(|c| {
                residue = residue.max(c.im.abs() / scale);
                peak = peak.max(c.re.abs() / scale);
                c.re / scale
            })
            .collect();
        if residue > RESIDUE_TOLERANCE * peak.max(1.0) {
            return Err(VsaError::ImaginaryResidue(residue));
        }
        Ok(Self {
            config: Arc::clone(config),
            data,
        })
    }

    fn spectral_product(&self, other: &GcTensor, conjugate: bool) -> Result<GcTensor> {
        self.check(other)?;
        let mut a = self.spectrum();
        let b = other.spectrum();
        for (x, y) in a.iter_mut().zip(&b) {
            *x *= if conjugate { y.conj() } else { *y };
        }
        GcTensor::from_spectrum(&self.config, a)
    }

    /// Module-wise circular convolution.
    pub fn bind(&self, other: &GcTensor) -> Result<GcTensor> {
        self.spectral_product(other, false)
    }

    /// Module-wise circular correlation: multiplies by the conjugate
    /// spectrum of `other`. Exact inverse of [`GcTensor::bind`] when
    /// `other` is pure.
    pub fn unbind(&self, other: &GcTensor) -> Result<GcTensor> {
        self.spectral_product(other, true)
    }

    pub fn cosine_similarity(&self, other: &GcTensor) -> Result<f64> {
        self.check(other)?;
        let (na, nb) = (self.norm(), other.norm());
        if na == 0.0 || nb == 0.0 {
            return Err(VsaError::ZeroNorm);
        }
        Ok((self.dot(other)? / (na * nb)).clamp(-1.0, 1.0))
    }

    /// Recovers the phase triple of every module. Fails on tensors whose
    /// spectrum is not the unit-amplitude fundamental pattern, e.g. bundles.
    pub fn extract_phases(&self) -> Result<PhaseTensor> {
        let cfg = &self.config;
        let spectrum = self.spectrum();
        let len = cfg.module_len();
        let n = cfg.n;
        let bins = fundamental_bins(n);
        for (m, module) in spectrum.chunks_exact(len).enumerate() {
            for (idx, c) in module.iter().enumerate() {
                let amp = c.norm();
                let expected = if bins.contains(&idx) { 1.0 } else { 0.0 };
                if (amp - expected).abs() > PURITY_TOLERANCE {
                    let fundamental = module[bins[0]].norm();
                    return Err(VsaError::NotPure {
                        module: m,
                        amplitude: fundamental,
                    });
                }
            }
        }
        Ok(phases_from_spectrum(cfg, &spectrum))
    }
}

/// Indices of the `+1` bins along the i, j and k axes, then the `-1` bins.
pub(crate) fn fundamental_bins(n: usize) -> [usize; 6] {
    [n * n, n, 1, (n - 1) * n * n, (n - 1) * n, n - 1]
}

/// Phases read off the `+1` bins, ignoring amplitude. Bins with (near)
/// zero amplitude give phase 0.
pub(crate) fn phases_from_spectrum(
    config: &Arc<GridConfig>,
    spectrum: &[Complex64],
) -> PhaseTensor {
    let n = config.n;
    let nf = n as f64;
    let len = config.module_len();
    let bins = fundamental_bins(n);
    let mut phases = Vec::with_capacity(config.module_count() * 3);
    for module in spectrum.chunks_exact(len) {
        for &b in &bins[..3] {
            let c = module[b];
            let p = if c.norm() < 1e-12 {
                0.0
            } else {
                -nf / TAU * c.arg()
            };
            phases.push(wrap_phase(p, nf));
        }
    }
    PhaseTensor {
        config: Arc::clone(config),
        phases,
    }
}

/// Weighted element-wise sum. Weights default to 1; no normalisation.
pub fn bundle<'a, I>(vs: I, weights: Option<&[f64]>) -> Result<GcTensor>
where
    I: IntoIterator<Item = &'a GcTensor>,
{
    let vs: Vec<&GcTensor> = vs.into_iter().collect();
    let first = vs.first().ok_or(VsaError::Empty("bundle of no vectors"))?;
    if let Some(w) = weights {
        if w.len() != vs.len() {
            return Err(VsaError::LengthMismatch {
                expected: vs.len(),
                actual: w.len(),
            });
        }
    }
    let mut out = GcTensor::zeros(&first.config);
    for (idx, v) in vs.iter().enumerate() {
        first.check(v)?;
        let w = weights.map_or(1.0, |w| w[idx]);
        for (o, x) in out.data.iter_mut().zip(&v.data) {
            *o += w * x;
        }
    }
    Ok(out)
}

/// Compact form of a pure tensor: a phase triple per module, in `[0, n)`.
#[derive(Debug, Clone)]
pub struct PhaseTensor {
    config: Arc<GridConfig>,
    phases: Vec<f64>,
}

impl PhaseTensor {
    /// `phases` is laid out `(n_s, n_theta, 3)`; values are reduced mod n.
    pub fn new(config: &Arc<GridConfig>, phases: Vec<f64>) -> Result<Self> {
        let expected = config.module_count() * 3;
        if phases.len() != expected {
            return Err(VsaError::ShapeMismatch {
                expected,
                actual: phases.len(),
            });
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(VsaError::InvalidArgument("phases must be finite".into()));
        }
        let nf = config.n as f64;
        Ok(Self {
            config: Arc::clone(config),
            phases: phases.into_iter().map(|p| wrap_phase(p, nf)).collect(),
        })
    }

    pub fn zeros(config: &Arc<GridConfig>) -> Self {
        Self {
            config: Arc::clone(config),
            phases: vec![0.0; config.module_count() * 3],
        }
    }

    pub fn random<R: Rng + ?Sized>(config: &Arc<GridConfig>, rng: &mut R) -> Self {
        let nf = config.n as f64;
        let phases = (0..config.module_count() * 3)
            .map(|_| wrap_phase(rng.random::<f64>() * nf, nf))
            .collect();
        Self {
            config: Arc::clone(config),
            phases,
        }
    }

    pub fn config(&self) -> &Arc<GridConfig> {
        &self.config
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn module(&self, scale: usize, orientation: usize) -> [f64; 3] {
        let m = self.config.module_index(scale, orientation);
        [
            self.phases[3 * m],
            self.phases[3 * m + 1],
            self.phases[3 * m + 2],
        ]
    }

    /// Builds the activation tensor: each module is the scaled outer sum
    /// `sigma * (cos(2pi/n (i-u)) + cos(2pi/n (j-v)) + cos(2pi/n (k-w)))`.
    pub fn materialize(&self) -> GcTensor {
        let cfg = &self.config;
        let n = cfg.n;
        let sigma = cfg.sigma();
        let step = TAU / n as f64;
        let mut data = Vec::with_capacity(cfg.dim());
        let mut cos = vec![[0.0f64; 3]; n];
        for triple in self.phases.chunks_exact(3) {
            for (idx, row) in cos.iter_mut().enumerate() {
                for axis in 0..3 {
                    row[axis] = (step * (idx as f64 - triple[axis])).cos();
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let ij = cos[i][0] + cos[j][1];
                    for row in cos.iter() {
                        data.push(sigma * (ij + row[2]));
                    }
                }
            }
        }
        GcTensor {
            config: Arc::clone(cfg),
            data,
        }
    }

    /// Fractional self-binding. Phases are read on the principal branch
    /// `[-n/2, n/2)` before scaling, so generators with small phase steps
    /// encode continuous values consistently for any real exponent.
    pub fn fractional_power(&self, exponent: f64) -> PhaseTensor {
        let nf = self.config.n as f64;
        PhaseTensor {
            config: Arc::clone(&self.config),
            phases: self
                .phases
                .iter()
                .map(|&p| wrap_phase(exponent * principal_phase(p, nf), nf))
                .collect(),
        }
    }

    /// Phase addition, the pure-vector form of [`GcTensor::bind`].
    pub fn compose(&self, other: &PhaseTensor) -> Result<PhaseTensor> {
        if !same_config(&self.config, &other.config) {
            return Err(VsaError::ConfigMismatch);
        }
        let nf = self.config.n as f64;
        Ok(PhaseTensor {
            config: Arc::clone(&self.config),
            phases: self
                .phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| wrap_phase(a + b, nf))
                .collect(),
        })
    }

    /// Largest circular distance between corresponding phases.
    pub fn max_circular_diff(&self, other: &PhaseTensor) -> f64 {
        let nf = self.config.n as f64;
        self.phases
            .iter()
            .zip(&other.phases)
            .map(|(a, b)| circular_distance(*a, *b, nf))
            .fold(0.0, f64::max)
    }
}
