//! Smooth compactly supported test functions and the three cutoffs ψ, χ₀, χ₁.

use crate::error::{Error, Result};

fn f(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// C^∞ step: 0 for u ≤ 0, 1 for u ≥ 1.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = f(u);
        a / (a + f(1.0 - u))
    }
}

/// Rises on `[lo, plateau_lo]`, equals 1 on `[plateau_lo, plateau_hi]`, falls on
/// `[plateau_hi, hi]`. Either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothWindow {
    pub lo: f64,
    pub plateau_lo: f64,
    pub plateau_hi: f64,
    pub hi: f64,
}

impl SmoothWindow {
    pub fn new(lo: f64, plateau_lo: f64, plateau_hi: f64, hi: f64) -> Result<Self> {
        if !(lo < plateau_lo || lo == f64::NEG_INFINITY && plateau_lo == f64::NEG_INFINITY)
            || !(plateau_lo <= plateau_hi)
            || !(plateau_hi < hi || hi == f64::INFINITY && plateau_hi == f64::INFINITY)
        {
            return Err(Error::domain(format!(
                "window needs lo < plateau_lo <= plateau_hi < hi, got {lo}, {plateau_lo}, {plateau_hi}, {hi}"
            )));
        }
        Ok(SmoothWindow { lo, plateau_lo, plateau_hi, hi })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        let up = if x >= self.plateau_lo { 1.0 } else { smooth_step((x - self.lo) / (self.plateau_lo - self.lo)) };
        let down = if x <= self.plateau_hi { 1.0 } else { smooth_step((self.hi - x) / (self.hi - self.plateau_hi)) };
        up * down
    }

    /// Closure of the open support.
    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// Symmetric bump: 1 on `center ± plateau_fraction·half_width`, 0 outside
/// `center ± half_width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpFunction {
    pub center: f64,
    pub half_width: f64,
    pub plateau_fraction: f64,
}

impl BumpFunction {
    pub fn new(center: f64, half_width: f64, plateau_fraction: f64) -> Result<Self> {
        if !(half_width > 0.0) || !(plateau_fraction > 0.0 && plateau_fraction < 1.0) || !center.is_finite() {
            return Err(Error::domain(format!(
                "bump needs half_width > 0 and plateau_fraction in (0,1), got {half_width}, {plateau_fraction}"
            )));
        }
        Ok(BumpFunction { center, half_width, plateau_fraction })
    }

    pub fn window(&self) -> SmoothWindow {
        let p = self.plateau_fraction * self.half_width;
        SmoothWindow {
            lo: self.center - self.half_width,
            plateau_lo: self.center - p,
            plateau_hi: self.center + p,
            hi: self.center + self.half_width,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.window().eval(x)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }
}

/// The cutoffs of the wave packet construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    /// Frequency cutoff in η: support [1/2, 2], plateau [3/4, 3/2].
    pub psi: SmoothWindow,
    /// Low-mode cutoff in ω: 0 below 1, 1 above 2.
    pub chi0: SmoothWindow,
    /// Energy window in aE: 1 on [0, 1], 0 below -1 and above 2.
    pub chi1: SmoothWindow,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec {
            psi: SmoothWindow { lo: 0.5, plateau_lo: 0.75, plateau_hi: 1.5, hi: 2.0 },
            chi0: SmoothWindow { lo: 1.0, plateau_lo: 2.0, plateau_hi: f64::INFINITY, hi: f64::INFINITY },
            chi1: SmoothWindow { lo: -1.0, plateau_lo: 0.0, plateau_hi: 1.0, hi: 2.0 },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_symmetry() {
        for i in 0..=20 {
            let u = i as f64 / 20.0;
            assert!((smooth_step(u) + smooth_step(1.0 - u) - 1.0).abs() < 1e-15);
        }
        assert_eq!(smooth_step(0.5), 0.5);
    }

    #[test]
    fn cutoffs_match_their_plateaus() {
        let c = CutoffSpec::default();
        assert_eq!(c.psi.eval(0.75), 1.0);
        assert_eq!(c.psi.eval(1.5), 1.0);
        assert_eq!(c.psi.eval(0.5), 0.0);
        assert_eq!(c.psi.eval(2.0), 0.0);
        assert_eq!(c.chi0.eval(1.0), 0.0);
        assert_eq!(c.chi0.eval(1e9), 1.0);
        assert_eq!(c.chi1.eval(0.5), 1.0);
        assert_eq!(c.chi1.eval(-1.0), 0.0);
        assert!(c.chi1.eval(1.5) > 0.0 && c.chi1.eval(1.5) < 1.0);
    }

    #[test]
    fn bump_rejects_bad_shape() {
        assert!(BumpFunction::new(0.0, 0.0, 0.5).is_err());
        assert!(BumpFunction::new(0.0, 1.0, 1.0).is_err());
        assert!(SmoothWindow::new(1.0, 0.0, 2.0, 3.0).is_err());
    }
}
