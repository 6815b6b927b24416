//! Complex samples on a rectilinear (T, X, Y) grid.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{Read, Write};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Row-major in (T, X, Y).
    pub values: Vec<Complex64>,
}

fn check_axis(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::validation(format!("axis {name} is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::validation(format!("axis {name} must be finite and strictly increasing")));
    }
    Ok(())
}

impl ComplexField {
    pub fn new(t: Vec<f64>, x: Vec<f64>, y: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        check_axis("T", &t)?;
        check_axis("X", &x)?;
        check_axis("Y", &y)?;
        if values.len() != t.len() * x.len() * y.len() {
            return Err(Error::validation(format!(
                "{} values for a {}x{}x{} grid",
                values.len(),
                t.len(),
                x.len(),
                y.len()
            )));
        }
        if values.iter().any(|v| v.re.is_nan() || v.im.is_nan()) {
            return Err(Error::validation("field contains NaN"));
        }
        Ok(ComplexField { t, x, y, values })
    }

    pub fn zeros(t: Vec<f64>, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = t.len() * x.len() * y.len();
        Self::new(t, x, y, vec![Complex64::default(); n])
    }

    /// Builds a field from a function of (T, X, Y).
    pub fn from_fn<F: FnMut(f64, f64, f64) -> Complex64>(t: Vec<f64>, x: Vec<f64>, y: Vec<f64>, mut f: F) -> Result<Self> {
        let mut values = Vec::with_capacity(t.len() * x.len() * y.len());
        for &tt in &t {
            for &xx in &x {
                for &yy in &y {
                    values.push(f(tt, xx, yy));
                }
            }
        }
        Self::new(t, x, y, values)
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.t.len(), self.x.len(), self.y.len())
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.x.len() + j) * self.y.len() + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.values[self.index(i, j, k)]
    }

    /// Values of the i-th time slice, row-major in (X, Y).
    pub fn slice(&self, i: usize) -> &[Complex64] {
        let n = self.x.len() * self.y.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Little-endian: three u64 axis lengths, the axes, then (re, im) pairs.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        for n in [self.t.len(), self.x.len(), self.y.len()] {
            w.write_all(&(n as u64).to_le_bytes())?;
        }
        for v in self.t.iter().chain(&self.x).chain(&self.y) {
            w.write_all(&v.to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut b8 = [0u8; 8];
        let mut len = [0usize; 3];
        for l in &mut len {
            r.read_exact(&mut b8)?;
            *l = u64::from_le_bytes(b8) as usize;
        }
        let mut f = |n: usize| -> Result<Vec<f64>> {
            (0..n)
                .map(|_| {
                    r.read_exact(&mut b8)?;
                    Ok(f64::from_le_bytes(b8))
                })
                .collect()
        };
        let t = f(len[0])?;
        let x = f(len[1])?;
        let y = f(len[2])?;
        let flat = f(2 * len[0] * len[1] * len[2])?;
        let values = flat.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        Self::new(t, x, y, values)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "T,X,Y,re,im,abs")?;
        for (i, &t) in self.t.iter().enumerate() {
            for (j, &x) in self.x.iter().enumerate() {
                for (k, &y) in self.y.iter().enumerate() {
                    let v = self.get(i, j, k);
                    writeln!(w, "{t:.16e},{x:.16e},{y:.16e},{:.16e},{:.16e},{:.16e}", v.re, v.im, v.norm())?;
                }
            }
        }
        Ok(())
    }
}

/// `n` equally spaced points on [a, b].
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ComplexField {
        ComplexField::from_fn(linspace(0.0, 1.0, 2), linspace(0.0, 1.0, 3), linspace(-1.0, 1.0, 4), |t, x, y| {
            Complex64::new(t + x, y)
        })
        .unwrap()
    }

    #[test]
    fn binary_roundtrip() {
        let f = sample();
        let mut buf = Vec::new();
        f.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 24 + 8 * 9 + 16 * 24);
        assert_eq!(ComplexField::read_binary(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn layout_is_row_major() {
        let f = sample();
        assert_eq!(f.get(1, 2, 3), Complex64::new(2.0, 1.0));
        assert_eq!(f.slice(1).len(), 12);
        let mut csv = Vec::new();
        f.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 25);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(ComplexField::zeros(vec![0.0, 0.0], vec![0.0], vec![0.0]).is_err());
        assert!(ComplexField::new(vec![0.0], vec![0.0], vec![0.0], vec![]).is_err());
    }
}
