//! Rotation along the orientation axis.
//!
//! Every `(scale, i, j, k)` position owns a ring of `n_theta` values, one
//! per orientation. Circularly convolving those rings with a one-hot bump
//! at index 1 moves each value to the next orientation, which turns the
//! encoded plane counter-clockwise by `2 pi / n_theta`. Fractional powers
//! of the bump give arbitrary angles.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Result, VsaError};
use crate::fft::{rings_forward, rings_inverse, signed_frequency, to_complex};
use crate::tensor::GcTensor;

/// Smallest peak-to-mean ratio of an angle profile that still counts as a
/// decodable rotation.
pub const MIN_PROFILE_RATIO: f64 = 1.2;

/// One-hot ring with its bump at index 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationBase {
    ring: Vec<f64>,
}

impl RotationBase {
    pub fn new(n_theta: usize) -> Result<Self> {
        if n_theta < 2 {
            return Err(VsaError::InvalidArgument(format!(
                "rotation needs at least two orientations, got {n_theta}"
            )));
        }
        let mut ring = vec![0.0; n_theta];
        ring[1] = 1.0;
        Ok(Self { ring })
    }

    pub fn ring(&self) -> &[f64] {
        &self.ring
    }

    /// Spectrum of the base raised to `exponent`, using the symmetric
    /// frequency range so the result stays real. For even rings the
    /// Nyquist bin gets the real factor `cos(pi * exponent)`.
    pub fn spectrum_power(&self, exponent: f64) -> Vec<Complex64> {
        let len = self.ring.len();
        (0..len)
            .map(|k| {
                if 2 * k == len {
                    Complex64::new((std::f64::consts::PI * exponent).cos(), 0.0)
                } else {
                    let f = signed_frequency(k, len);
                    Complex64::from_polar(1.0, -TAU * f * exponent / len as f64)
                }
            })
            .collect()
    }
}

fn ring_spectrum(v: &GcTensor) -> Vec<Complex64> {
    let cfg = v.config();
    let mut buf = to_complex(v.data());
    rings_forward(&mut buf, cfg.n_s, cfg.n_theta, cfg.module_len());
    buf
}

/// Rotates the encoded plane counter-clockwise by `alpha` radians.
pub fn rotate(v: &GcTensor, alpha: f64) -> Result<GcTensor> {
    let cfg = v.config().clone();
    if cfg.n_theta < 2 {
        return Ok(v.clone());
    }
    let exponent = alpha * cfg.n_theta as f64 / TAU;
    let factors = RotationBase::new(cfg.n_theta)?.spectrum_power(exponent);
    let mut buf = ring_spectrum(v);
    let len = cfg.module_len();
    for (idx, c) in buf.iter_mut().enumerate() {
        let t = (idx / len) % cfg.n_theta;
        *c *= factors[t];
    }
    rings_inverse(&mut buf, cfg.n_s, cfg.n_theta, len);
    GcTensor::from_complex(&cfg, buf, cfg.n_theta as f64)
}

/// Integer circular shift of the orientation axis: orientation `l` of the
/// result holds orientation `l - steps` of the input.
pub fn permute_orientation(v: &GcTensor, steps: i64) -> GcTensor {
    let cfg = v.config().clone();
    let nt = cfg.n_theta;
    let len = cfg.module_len();
    let shift = steps.rem_euclid(nt as i64) as usize;
    let src = v.data();
    let mut out = vec![0.0; src.len()];
    for s in 0..cfg.n_s {
        for l in 0..nt {
            let from = (l + nt - shift) % nt;
            let dst = cfg.module_index(s, l) * len;
            let org = cfg.module_index(s, from) * len;
            out[dst..dst + len].copy_from_slice(&src[org..org + len]);
        }
    }
    GcTensor::from_vec(&cfg, out).expect("same layout")
}

/// Rotational unbinding flattened onto the orientation axis: entry `l` is
/// the summed correlation of `rotated` with `reference` shifted by `l`
/// orientations.
pub fn angle_profile(rotated: &GcTensor, reference: &GcTensor) -> Result<Vec<f64>> {
    if !crate::config::same_config(rotated.config(), reference.config()) {
        return Err(VsaError::ConfigMismatch);
    }
    let cfg = rotated.config();
    let nt = cfg.n_theta;
    let len = cfg.module_len();
    let a = ring_spectrum(rotated);
    let b = ring_spectrum(reference);
    let mut acc = vec![Complex64::default(); nt];
    for (idx, (x, y)) in a.iter().zip(&b).enumerate() {
        acc[(idx / len) % nt] += x * y.conj();
    }
    // A single ring: inverse DFT of the summed cross spectrum.
    rings_inverse(&mut acc, 1, nt, 1);
    Ok(acc.iter().map(|c| c.re / nt as f64).collect())
}

/// Peak-to-mean ratio of a profile. Infinite when the mean is not
/// positive but the peak is.
pub fn profile_ratio(profile: &[f64]) -> f64 {
    let max = profile.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = profile.iter().sum::<f64>() / profile.len() as f64;
    if mean > 0.0 {
        max / mean
    } else if max > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Angle (radians, in `[0, 2 pi)`) that takes `reference` to `rotated`,
/// quantised to the orientation spacing.
pub fn decode_angle(rotated: &GcTensor, reference: &GcTensor) -> Result<f64> {
    let profile = angle_profile(rotated, reference)?;
    let ratio = profile_ratio(&profile);
    // Tiny numerical ripples on a constant profile must not count as a peak.
    let max = profile.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = profile.iter().copied().fold(f64::INFINITY, f64::min);
    let flat = (max - min) <= 1e-9 * max.abs().max(1e-300);
    if ratio < MIN_PROFILE_RATIO || flat {
        return Err(VsaError::AngleUndecodable(if flat { 1.0 } else { ratio }));
    }
    let (idx, _) = crate::codebook::argmax(&profile);
    Ok(idx as f64 * TAU / profile.len() as f64)
}

/// Writes `index,angle,value` rows for an angle profile.
pub fn write_profile_csv<W: Write>(profile: &[f64], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["index", "angle", "value"])
        .map_err(|e| VsaError::Io(e.into()))?;
    let step = TAU / profile.len() as f64;
    for (i, v) in profile.iter().enumerate() {
        wr.write_record([i.to_string(), (i as f64 * step).to_string(), v.to_string()])
            .map_err(|e| VsaError::Io(e.into()))?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GridConfig;
    use crate::spatial::{ModuleGeometry, Point2D};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn symbol(seed: u64) -> GcTensor {
        let cfg = GridConfig::default().shared().unwrap();
        GcTensor::random_symbol(&cfg, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn base_is_one_hot() {
        let b = RotationBase::new(5).unwrap();
        assert_eq!(b.ring(), &[0.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(RotationBase::new(1).is_err());
    }

    #[test]
    fn zero_and_full_turns_are_identity() {
        let v = symbol(1);
        assert!(rotate(&v, 0.0).unwrap().max_abs_diff(&v) < 1e-9);
        assert!(rotate(&v, TAU).unwrap().max_abs_diff(&v) < 1e-9);
    }

    #[test]
    fn inverse_and_composition() {
        let v = symbol(2);
        for (a, b) in [(0.3, 1.1), (2.0, -0.7), (4.0, 5.0)] {
            let back = rotate(&rotate(&v, a).unwrap(), -a).unwrap();
            assert!(back.max_abs_diff(&v) < 1e-9);
            let two = rotate(&rotate(&v, a).unwrap(), b).unwrap();
            assert!(two.max_abs_diff(&rotate(&v, a + b).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn integer_rotation_is_permutation() {
        let v = symbol(3);
        let nt = v.config().n_theta as i64;
        for steps in [1i64, 2, 7, -3] {
            let alpha = steps as f64 * TAU / nt as f64;
            let r = rotate(&v, alpha).unwrap();
            assert!(r.max_abs_diff(&permute_orientation(&v, steps)) < 1e-9);
        }
        assert_eq!(permute_orientation(&v, 0), v);
        assert_eq!(permute_orientation(&v, nt), v);
        assert_eq!(
            permute_orientation(&permute_orientation(&v, 1), 1),
            permute_orientation(&v, 2)
        );
        // the value at orientation 1 came from orientation 0
        let p = permute_orientation(&v, 1);
        assert_eq!(p.module(2, 1), v.module(2, 0));
    }

    #[test]
    fn self_angle_is_zero() {
        let g = ModuleGeometry::new(&GridConfig::default().shared().unwrap());
        let v = g.encode(Point2D::new(6.0, 0.0));
        assert_eq!(decode_angle(&v, &v).unwrap(), 0.0);
    }

    #[test]
    fn rotation_center_is_undecodable() {
        let g = ModuleGeometry::new(&GridConfig::default().shared().unwrap());
        let v = g.encode(Point2D::default());
        let r = rotate(&v, 1.0).unwrap();
        assert!(matches!(
            decode_angle(&r, &v),
            Err(VsaError::AngleUndecodable(_))
        ));
    }

    #[test]
    fn profile_csv() {
        let mut buf = Vec::new();
        write_profile_csv(&[1.0, 2.0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,angle,value");
        assert!(lines[2].starts_with("1,3.14159"));
    }

    #[test]
    fn ratio_edge_cases() {
        assert_eq!(profile_ratio(&[1.0, 1.0]), 1.0);
        assert_eq!(profile_ratio(&[2.0, -2.0]), f64::INFINITY);
        assert_eq!(profile_ratio(&[-1.0, -2.0]), 0.0);
    }
}
