//! Small 2D real-valued rasters with CSV and 8-bit PGM export.

use std::io::Write;

use crate::error::{Result, VsaError};

/// Row-major grid; row `iy` holds samples at the `iy`-th lattice `y`
/// value (ascending). Exports put the highest `y` on the first line so the
/// files read like a map with `y` pointing up.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl Grid2D {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(VsaError::ShapeMismatch {
                expected: width * height,
                actual: values.len(),
            });
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for iy in 0..height {
            for ix in 0..width {
                values.push(f(ix, iy));
            }
        }
        Self {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.width + ix]
    }

    /// Position of the largest value; the first in row-major order wins ties.
    pub fn argmax(&self) -> (usize, usize) {
        let (i, _) = crate::codebook::argmax(&self.values);
        (i % self.width, i / self.width)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Interior samples strictly greater than all eight neighbours.
    pub fn local_maxima(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for iy in 1..self.height.saturating_sub(1) {
            for ix in 1..self.width.saturating_sub(1) {
                let v = self.get(ix, iy);
                let is_peak = (-1i64..=1).all(|dy| {
                    (-1i64..=1).all(|dx| {
                        (dx == 0 && dy == 0)
                            || v > self.get((ix as i64 + dx) as usize, (iy as i64 + dy) as usize)
                    })
                });
                if is_peak {
                    out.push((ix, iy));
                }
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for iy in (0..self.height).rev() {
            let row: Vec<String> = (0..self.width)
                .map(|ix| format!("{}", self.get(ix, iy)))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Binary (P5) PGM, values min-max scaled to 0..=255. A constant grid
    /// maps to all zeros.
    pub fn to_pgm(&self) -> Vec<u8> {
        let (lo, hi) = (self.min(), self.max());
        let span = hi - lo;
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        for iy in (0..self.height).rev() {
            for ix in 0..self.width {
                let v = self.get(ix, iy);
                let level = if span > 0.0 {
                    (255.0 * (v - lo) / span).round().clamp(0.0, 255.0) as u8
                } else {
                    0
                };
                out.push(level);
            }
        }
        out
    }

    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.to_pgm())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_layout() {
        let g = Grid2D::new(2, 2, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let pgm = g.to_pgm();
        let header = b"P5\n2 2\n255\n";
        assert_eq!(&pgm[..header.len()], header);
        // top line is the last row (highest y)
        assert_eq!(&pgm[header.len()..], &[170, 255, 0, 85]);
        let flat = Grid2D::new(1, 2, vec![4.0, 4.0]).unwrap();
        assert!(flat.to_pgm().ends_with(&[0, 0]));
    }

    #[test]
    fn csv_layout() {
        let g = Grid2D::new(2, 2, vec![0.0, 1.0, 2.0, 3.5]).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "2,3.5\n0,1\n");
    }

    #[test]
    fn maxima() {
        let g = Grid2D::from_fn(7, 7, |x, y| {
            let d = |cx: f64, cy: f64| -((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2));
            d(1.0, 1.0).max(d(5.0, 4.0) + 0.5)
        });
        assert_eq!(g.argmax(), (5, 4));
        assert_eq!(g.local_maxima(), vec![(1, 1), (5, 4)]);
        assert!(Grid2D::new(2, 2, vec![0.0; 3]).is_err());
    }
}
