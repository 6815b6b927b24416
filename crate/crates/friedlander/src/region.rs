//! Space-time boxes around the J-th reflection
//!
//! I_J = 4J√(1+a) + [-2ε₀, 2ε₀) and R_J = I_J × {|X-1| ≤ ε₁} × {|Y-4J/3| ≤ ε₂}.

use crate::error::{Error, Result};
use crate::wavepacket::PacketParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionRegion {
    pub j: u32,
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl ReflectionRegion {
    pub fn new(j: u32, eps0: f64, eps1: f64, eps2: f64) -> Result<Self> {
        for (name, e) in [("eps0", eps0), ("eps1", eps1)] {
            if !(e > 0.0 && e < 0.25) {
                return Err(Error::validation(format!("{name} must lie in (0, 1/4), got {e}")));
            }
        }
        if !(eps2 > 0.0 && eps2 <= 0.25) {
            return Err(Error::validation(format!("eps2 must lie in (0, 1/4], got {eps2}")));
        }
        Ok(ReflectionRegion { j, eps0, eps1, eps2 })
    }

    /// ε₀ = ε₁ = 0.2, ε₂ = 0.25.
    pub fn standard(j: u32) -> Self {
        ReflectionRegion { j, eps0: 0.2, eps1: 0.2, eps2: 0.25 }
    }

    /// (T, X, Y) of the region center.
    pub fn center(&self, params: &PacketParams) -> (f64, f64, f64) {
        let j = self.j as f64;
        (4.0 * j * (1.0 + params.a).sqrt(), 1.0, 4.0 * j / 3.0)
    }

    /// The half-open time interval I_J.
    pub fn time_interval(&self, params: &PacketParams) -> (f64, f64) {
        let t0 = self.center(params).0;
        (t0 - 2.0 * self.eps0, t0 + 2.0 * self.eps0)
    }

    pub fn contains(&self, params: &PacketParams, t: f64, x: f64, y: f64) -> bool {
        let (lo, hi) = self.time_interval(params);
        let (_, xc, yc) = self.center(params);
        t >= lo && t < hi && (x - xc).abs() <= self.eps1 && (y - yc).abs() <= self.eps2
    }
}

/// The J ≤ M_a whose region contains (T, X, Y), if any.
pub fn dominant_reflection(params: &PacketParams, t: f64, x: f64, y: f64, eps: (f64, f64, f64)) -> Option<u32> {
    let step = 4.0 * (1.0 + params.a).sqrt();
    let j = (t / step).round();
    if j < 0.0 || j > params.m_a() {
        return None;
    }
    let region = ReflectionRegion { j: j as u32, eps0: eps.0, eps1: eps.1, eps2: eps.2 };
    region.contains(params, t, x, y).then_some(region.j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::{ARule, MRule};

    fn params() -> PacketParams {
        PacketParams::for_lambda(100.0, ARule::CubeRoot, MRule::LambdaCubeRoot { factor: 1.0 }).unwrap()
    }

    #[test]
    fn centers_and_gaps() {
        let p = params();
        let s = (1.0 + p.a).sqrt();
        let eps = (0.2, 0.2, 0.25);
        assert_eq!(dominant_reflection(&p, 4.0 * s, 1.0, 4.0 / 3.0, eps), Some(1));
        assert_eq!(dominant_reflection(&p, 2.0 * s, 1.0, 2.0 / 3.0, eps), None);
        assert_eq!(dominant_reflection(&p, 0.0, 1.0, 0.0, eps), Some(0));
    }

    #[test]
    fn half_open_in_time() {
        let p = params();
        let r = ReflectionRegion::standard(2);
        let (lo, hi) = r.time_interval(&p);
        assert!(r.contains(&p, lo, 1.0, 8.0 / 3.0));
        assert!(!r.contains(&p, hi, 1.0, 8.0 / 3.0));
    }

    #[test]
    fn rejects_wide_eps() {
        assert!(ReflectionRegion::new(0, 0.25, 0.1, 0.1).is_err());
        assert!(ReflectionRegion::new(0, 0.1, 0.1, 0.25).is_ok());
    }
}
