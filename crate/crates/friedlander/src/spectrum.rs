//! Dirichlet eigenbasis of -∂²_x + (1+x)θ² on the half-line.
//!
//! e_k(x, θ) = √(2π) θ^{1/3} / √L′(ω_k) · Ai(θ^{2/3}x - ω_k), with eigenvalue
//! θ² + ω_k θ^{4/3}.

use crate::airy::{ai_real, ENVELOPE};
use crate::error::{Error, Result};
use crate::phase::PhaseTable;
use crate::quadrature::Adaptive;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::Write;

/// Margin past the turning point where modes are treated as zero.
pub const TAIL_MARGIN: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenMode {
    pub k: usize,
    pub theta: f64,
    pub omega_k: f64,
    pub lprime_k: f64,
}

impl EigenMode {
    pub fn new(k: usize, theta: f64, table: &PhaseTable) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(Error::domain(format!("theta must be positive, got {theta}")));
        }
        Ok(EigenMode { k, theta, omega_k: table.airy_zero(k)?, lprime_k: table.lprime_at(k)? })
    }

    pub fn eigenvalue(&self) -> f64 {
        self.theta * self.theta + self.omega_k * self.theta.powf(4.0 / 3.0)
    }

    fn scale(&self) -> f64 {
        self.theta.powf(2.0 / 3.0)
    }

    /// Normalization √(2π) θ^{1/3} / √L′.
    pub fn amplitude(&self) -> f64 {
        (2.0 * PI / self.lprime_k).sqrt() * self.theta.cbrt()
    }

    /// e_k(x, θ) together with a flag set when the Airy argument left the
    /// accuracy envelope and the (super-exponentially small) value was replaced by 0.
    pub fn eval_flagged(&self, x: f64) -> (f64, bool) {
        let z = self.scale() * x - self.omega_k;
        if z > ENVELOPE {
            return (0.0, true);
        }
        (self.amplitude() * ai_real(z), false)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_flagged(x).0
    }

    /// Point past which the mode is below 1e-10 of its peak.
    pub fn x_cut(&self) -> f64 {
        (self.omega_k + TAIL_MARGIN) / self.scale()
    }
}

/// e_k(x, θ); errors for x < 0.
pub fn eigenfunction(mode: &EigenMode, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("eigenfunctions live on x >= 0, got {x}")));
    }
    Ok(mode.eval(x))
}

pub fn eigenvalue(mode: &EigenMode) -> f64 {
    mode.eigenvalue()
}

/// A function on the half-line given by a callable, negligible past `x_max`.
pub struct HalfLineFn<F> {
    pub f: F,
    pub x_max: f64,
}

impl<F: Fn(f64) -> Complex64> HalfLineFn<F> {
    pub fn new(f: F, x_max: f64) -> Self {
        HalfLineFn { f, x_max }
    }
}

/// Panels of width ~1 in the Airy variable resolve every oscillation with
/// well over 10 nodes per wavelength up to ω ~ 300.
fn airy_panels(mode: &EigenMode, x_end: f64) -> usize {
    ((mode.scale() * x_end).ceil() as usize).max(2)
}

/// ⟨e_k, f⟩ on (0, min(x_max, x_cut)).
pub fn mode_coefficient<F: Fn(f64) -> Complex64>(mode: &EigenMode, f: &HalfLineFn<F>) -> Result<Complex64> {
    let end = f.x_max.min(mode.x_cut());
    if !(end > 0.0) {
        return Ok(Complex64::default());
    }
    let panels = airy_panels(mode, end);
    let probe = crate::quadrature::composite(0.0, end, panels, 8);
    let fscale = probe.iter().map(|&(x, _)| (f.f)(x).norm()).fold(0.0, f64::max);
    if fscale == 0.0 {
        return Ok(Complex64::default());
    }
    let tol = 1e-13 * fscale * mode.amplitude() * end / panels as f64;
    let r = Adaptive::with_tol(tol).panels(panels).integrate(|x| (f.f)(x) * mode.eval(x), 0.0, end)?;
    Ok(r.value)
}

/// G_jk = ∫₀^∞ e_j e_k dx for j, k ≤ k_max.
pub fn gram_matrix(theta: f64, k_max: usize, table: &PhaseTable) -> Result<Vec<Vec<f64>>> {
    if k_max == 0 || k_max > 20 {
        return Err(Error::domain(format!("gram_matrix supports 1 <= k_max <= 20, got {k_max}")));
    }
    let modes: Vec<EigenMode> = (1..=k_max).map(|k| EigenMode::new(k, theta, table)).collect::<Result<_>>()?;
    let mut g = vec![vec![0.0; k_max]; k_max];
    for i in 0..k_max {
        for j in i..k_max {
            let end = modes[i].x_cut().min(modes[j].x_cut());
            let panels = airy_panels(&modes[j], end);
            let tol = 1e-14 * modes[i].amplitude() * modes[j].amplitude() * end / panels as f64;
            let (v, _) = Adaptive::with_tol(tol)
                .panels(panels)
                .integrate_real(|x| modes[i].eval(x) * modes[j].eval(x), 0.0, end)?;
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    Ok(g)
}

pub fn write_matrix_csv<W: Write>(m: &[Vec<f64>], mut w: W) -> Result<()> {
    for row in m {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}
