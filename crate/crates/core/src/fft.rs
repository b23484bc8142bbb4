//! Batched small DFTs over the tensor layout: 3D transforms of every
//! module and 1D transforms along the orientation rings.
//!
//! Forward transforms are unnormalised; inverse transforms are too, so
//! callers divide by the transform size.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

/// Runs `fft` over every line of `buf` described by `bases` (first element
/// of each line) and `stride` (distance between consecutive elements).
fn lines_pass(buf: &mut [Complex64], bases: &[usize], stride: usize, fft: &dyn Fft<f64>) {
    let len = fft.len();
    if stride == 1 && bases.iter().enumerate().all(|(i, &b)| b == i * len) {
        fft.process(&mut buf[..bases.len() * len]);
        return;
    }
    let mut lines = vec![Complex64::default(); bases.len() * len];
    for (line, &base) in lines.chunks_exact_mut(len).zip(bases) {
        for (q, slot) in line.iter_mut().enumerate() {
            *slot = buf[base + q * stride];
        }
    }
    fft.process(&mut lines);
    for (line, &base) in lines.chunks_exact(len).zip(bases) {
        for (q, v) in line.iter().enumerate() {
            buf[base + q * stride] = *v;
        }
    }
}

fn modules_pass(buf: &mut [Complex64], n: usize, direction: FftDirection) {
    let fft = plan(n, direction);
    let cube = n * n * n;
    debug_assert_eq!(buf.len() % cube, 0);
    let modules = buf.len() / cube;

    // k axis: contiguous
    let bases: Vec<usize> = (0..modules * n * n).map(|l| l * n).collect();
    lines_pass(buf, &bases, 1, fft.as_ref());

    // j axis
    let mut bases = Vec::with_capacity(modules * n * n);
    for m in 0..modules {
        for i in 0..n {
            for k in 0..n {
                bases.push(m * cube + i * n * n + k);
            }
        }
    }
    lines_pass(buf, &bases, n, fft.as_ref());

    // i axis
    bases.clear();
    for m in 0..modules {
        for j in 0..n {
            for k in 0..n {
                bases.push(m * cube + j * n + k);
            }
        }
    }
    lines_pass(buf, &bases, n * n, fft.as_ref());
}

/// Forward 3D DFT of each consecutive `n^3` block.
pub(crate) fn modules_forward(buf: &mut [Complex64], n: usize) {
    modules_pass(buf, n, FftDirection::Forward);
}

/// Unnormalised inverse 3D DFT of each consecutive `n^3` block.
pub(crate) fn modules_inverse(buf: &mut [Complex64], n: usize) {
    modules_pass(buf, n, FftDirection::Inverse);
}

fn ring_pass(
    buf: &mut [Complex64],
    n_s: usize,
    n_theta: usize,
    module_len: usize,
    direction: FftDirection,
) {
    let fft = plan(n_theta, direction);
    let mut bases = Vec::with_capacity(n_s * module_len);
    for s in 0..n_s {
        for e in 0..module_len {
            bases.push(s * n_theta * module_len + e);
        }
    }
    lines_pass(buf, &bases, module_len, fft.as_ref());
}

/// Forward DFT along the orientation axis for every (scale, neuron) ring.
pub(crate) fn rings_forward(buf: &mut [Complex64], n_s: usize, n_theta: usize, module_len: usize) {
    ring_pass(buf, n_s, n_theta, module_len, FftDirection::Forward);
}

pub(crate) fn rings_inverse(buf: &mut [Complex64], n_s: usize, n_theta: usize, module_len: usize) {
    ring_pass(buf, n_s, n_theta, module_len, FftDirection::Inverse);
}

pub(crate) fn to_complex(data: &[f64]) -> Vec<Complex64> {
    data.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Frequency index of DFT bin `k` in the symmetric range `(-len/2, len/2]`.
pub(crate) fn signed_frequency(k: usize, len: usize) -> f64 {
    if 2 * k > len {
        k as f64 - len as f64
    } else {
        k as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft3(x: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); n * n * n];
        let w = |a: usize, b: usize| {
            Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (a * b) as f64 / n as f64)
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut acc = Complex64::default();
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                acc += x[i * n * n + j * n + k] * w(a, i) * w(b, j) * w(c, k);
                            }
                        }
                    }
                    out[a * n * n + b * n + c] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn module_transform_matches_naive_dft() {
        for n in [3usize, 4, 5] {
            let cube = n * n * n;
            let data: Vec<f64> = (0..2 * cube)
                .map(|i| ((i * 37 % 11) as f64).sin())
                .collect();
            let mut buf = to_complex(&data);
            modules_forward(&mut buf, n);
            for m in 0..2 {
                let expect = naive_dft3(&to_complex(&data[m * cube..(m + 1) * cube]), n);
                for (a, b) in buf[m * cube..(m + 1) * cube].iter().zip(&expect) {
                    assert!((a - b).norm() < 1e-10);
                }
            }
            modules_inverse(&mut buf, n);
            for (a, b) in buf.iter().zip(&data) {
                assert!((a.re / cube as f64 - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ring_transform_round_trips() {
        let (n_s, n_theta, len) = (2, 5, 4);
        let data: Vec<f64> = (0..n_s * n_theta * len)
            .map(|i| i as f64 * 0.3 - 2.0)
            .collect();
        let mut buf = to_complex(&data);
        rings_forward(&mut buf, n_s, n_theta, len);
        // DC bin of the ring starting at (s=1, e=2) is the ring sum
        let sum: f64 = (0..n_theta).map(|t| data[(n_theta + t) * len + 2]).sum();
        assert!((buf[n_theta * len + 2].re - sum).abs() < 1e-10);
        rings_inverse(&mut buf, n_s, n_theta, len);
        for (a, b) in buf.iter().zip(&data) {
            assert!((a.re / n_theta as f64 - b).abs() < 1e-12);
        }
    }

    #[test]
    fn signed_frequencies() {
        let f: Vec<f64> = (0..5).map(|k| signed_frequency(k, 5)).collect();
        assert_eq!(f, vec![0.0, 1.0, 2.0, -2.0, -1.0]);
        assert_eq!(signed_frequency(2, 4), 2.0);
    }
}
