//! The reflection-indexed representation
//!
//! U(T,X,Y) = √(λM)/((2π)^{3/2}h) Σ_N ∫ e^{iλη(Y+φ̃_N)} χ(E) ψ(η) η^{1/2} dΣ dE dη
//!
//! with φ̃_N = T(E-1)/(√(1+aE)+√(1+a)) - (N/λη)L((λη)^{2/3}E) + iM(E-1)²/2 + Σ³/3 + Σ(X-E).

use crate::airy::ai_real;
use crate::bump::CutoffSpec;
use crate::error::{Error, Result};
use crate::phase::{big_l, big_l_prime};
use crate::quadrature::{composite, gauss_legendre};
use crate::wavepacket::PacketParams;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::RangeInclusive;

/// Gaussian tail of e^{-λ̃M(E-1)²/2} past `E_WINDOW/√(λ̃M)` is below e^{-50}.
pub const E_WINDOW: f64 = 10.0;
pub const DEFAULT_N_PAD: i64 = 3;
pub const DEFAULT_N_CAP: f64 = 2.0;
pub const DEFAULT_ETA_NODES: usize = 128;

fn denom(a: f64, e: f64) -> f64 {
    (1.0 + a * e).sqrt() + (1.0 + a).sqrt()
}

/// Phases of the N-th reflected wave at fixed η.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPhase {
    pub n: i64,
    pub params: PacketParams,
    pub eta: f64,
}

impl ReflectionPhase {
    pub fn new(n: i64, params: PacketParams, eta: f64) -> Self {
        ReflectionPhase { n, params, eta }
    }

    fn lam_t(&self) -> f64 {
        self.params.lambda() * self.eta
    }

    fn common(&self, e: f64, t: f64) -> f64 {
        let lt = self.lam_t();
        t * (e - 1.0) / denom(self.params.a, e) - self.n as f64 / lt * big_l(lt.powf(2.0 / 3.0) * e)
    }

    /// Ψ_N(Σ, S, E, Z, T) at position X.
    pub fn psi(&self, sigma: f64, s: f64, e: f64, z: f64, t: f64, x: f64) -> f64 {
        sigma.powi(3) / 3.0 + sigma * (x - e) + s.powi(3) / 3.0 + s * (z - e) + self.common(e, t)
    }

    /// φ_N(Σ, s, E; T, X).
    pub fn phi(&self, sigma: f64, s: f64, e: f64, t: f64, x: f64) -> Complex64 {
        let re = self.common(e, t) + s * (e - 1.0) + sigma.powi(3) / 3.0 + sigma * (x - e);
        Complex64::new(re, s * s / (2.0 * self.params.m))
    }

    /// φ̃_N(Σ, E; T, X).
    pub fn phi_tilde(&self, sigma: f64, e: f64, t: f64, x: f64) -> Complex64 {
        let re = self.common(e, t) + sigma.powi(3) / 3.0 + sigma * (x - e);
        Complex64::new(re, self.params.m * (e - 1.0).powi(2) / 2.0)
    }

    /// ∂_Σ φ̃_N = Σ² + X - E.
    pub fn d_sigma_phi_tilde(&self, sigma: f64, e: f64, x: f64) -> f64 {
        sigma * sigma + x - e
    }

    /// Σ on the real stationary set: T/(2√(1+a)) - N (λη)^{-1/3} L′((λη)^{2/3}).
    pub fn stationary_sigma(&self, t: f64) -> f64 {
        let lt = self.lam_t();
        t / (2.0 * (1.0 + self.params.a).sqrt()) - self.n as f64 / lt.cbrt() * big_l_prime(lt.powf(2.0 / 3.0))
    }
}

/// ∫ e^{i(u³/3 + uz)} du along a contour that follows Im u = √max(z,0) on a
/// window and leaves along rays at π/6 and 5π/6, where the cubic decays.
pub fn airy_contour_integral(z: f64) -> Complex64 {
    let sigma = z.max(0.0).sqrt();
    let w = 4.0f64.max((-z).max(0.0).sqrt() + 3.0);
    let f = |u: Complex64| (Complex64::i() * (u * u * u / 3.0 + u * z)).exp();
    let radians = 2.0 * w * (w * w + z.abs());
    let panels = ((radians / 10.0).ceil() as usize).max(2);
    let mut total = Complex64::default();
    for (t, wt) in composite(-w, w, panels, 16) {
        total += f(Complex64::new(t, sigma)) * wt;
    }
    // Along the rays the modulus falls at least like e^{-w²r/2}.
    let right = Complex64::from_polar(1.0, PI / 6.0);
    let left = Complex64::from_polar(1.0, 5.0 * PI / 6.0);
    let reach = (90.0 / (w * w)).min(8.0);
    let tail_rad = reach * ((w + sigma + reach).powi(2) + z.abs());
    let tail_panels = ((tail_rad / 10.0).ceil() as usize).max(2);
    for (r, wt) in composite(0.0, reach, tail_panels, 16) {
        total += f(Complex64::new(w, sigma) + right * r) * right * wt;
        total -= f(Complex64::new(-w, sigma) + left * r) * left * wt;
    }
    total
}

/// How S(μ, w) = ∫ e^{iμ(Σ³/3 + Σw)} dΣ is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SigmaMethod {
    /// Contour quadrature.
    Contour,
    /// 2π μ^{-1/3} Ai(μ^{2/3} w), which the contour integral reproduces.
    #[default]
    Airy,
}

pub fn sigma_integral(mu: f64, w: f64, method: SigmaMethod) -> Complex64 {
    let z = mu.powf(2.0 / 3.0) * w;
    match method {
        SigmaMethod::Contour => airy_contour_integral(z) / mu.cbrt(),
        SigmaMethod::Airy => Complex64::new(2.0 * PI * ai_real(z) / mu.cbrt(), 0.0),
    }
}

/// Retained reflections at time T: |N - T/(4√(1+a))| ≤ pad, |N| ≤ cap·h^{-1/3}.
pub fn n_truncation(params: &PacketParams, t: f64, pad: i64, cap: f64) -> RangeInclusive<i64> {
    let center = t / (4.0 * (1.0 + params.a).sqrt());
    let limit = (cap * params.h.powf(-1.0 / 3.0)).floor() as i64;
    let lo = ((center.round() as i64) - pad).max(-limit);
    let hi = ((center.round() as i64) + pad).min(limit);
    lo..=hi
}

/// E-quadrature at one η node with everything that does not depend on (T, X, Y, N).
#[derive(Debug, Clone)]
struct EtaGrid {
    lam_t: f64,
    /// Quadrature weight · ψ(η) · η^{1/2}.
    weight: f64,
    e: Vec<f64>,
    /// E-weight · χ(E) · e^{-λ̃M(E-1)²/2}.
    damped: Vec<f64>,
    /// λ̃(E-1)/(√(1+aE)+√(1+a)).
    tcoef: Vec<f64>,
    /// e^{-iL(λ̃^{2/3}E)}.
    rot: Vec<Complex64>,
}

/// Mismatch between the time phase and the N-th reflection phase, in units
/// of λ̃ per unit E, that the default E grids resolve.
fn default_budget(pad: i64) -> f64 {
    2.0 * pad as f64 + 4.0
}

/// Evaluator for the N-sum with cached η and E nodes.
#[derive(Debug, Clone)]
pub struct Parametrix {
    pub params: PacketParams,
    pub cutoffs: CutoffSpec,
    pub method: SigmaMethod,
    grids: Vec<EtaGrid>,
    budget: f64,
}

impl Parametrix {
    pub fn new(params: &PacketParams, cutoffs: &CutoffSpec, eta_nodes: usize, method: SigmaMethod) -> Self {
        let budget = default_budget(DEFAULT_N_PAD);
        let (lo, hi) = cutoffs.psi.support();
        let grids = gauss_legendre(eta_nodes)
            .mapped(lo, hi)
            .filter_map(|(eta, w)| {
                let p = cutoffs.psi.eval(eta);
                (p > 0.0).then(|| eta_grid(params, cutoffs, eta, w * p * eta.sqrt(), budget))
            })
            .collect();
        Parametrix { params: *params, cutoffs: *cutoffs, method, grids, budget }
    }

    pub fn n_range(&self, t: f64) -> RangeInclusive<i64> {
        n_truncation(&self.params, t, DEFAULT_N_PAD, DEFAULT_N_CAP)
    }

    fn prefactor(&self) -> f64 {
        (self.params.lambda() * self.params.m).sqrt() / ((2.0 * PI).powf(1.5) * self.params.h)
    }

    /// Largest |T/(2√(1+a)) - N L′/λ̃^{1/3}| over the requested N, η and E window.
    fn mismatch(&self, t: f64, ns: &[i64]) -> f64 {
        let d0 = 2.0 * (1.0 + self.params.a).sqrt();
        let mut worst = 0.0f64;
        for g in [self.grids.first(), self.grids.last()].into_iter().flatten() {
            let scale = g.lam_t.powf(2.0 / 3.0);
            for e in [g.e[0], g.e[g.e.len() - 1]] {
                let lp = big_l_prime(scale * e) / g.lam_t.cbrt();
                for &n in ns {
                    worst = worst.max((t / d0 - n as f64 * lp).abs());
                }
            }
        }
        worst
    }

    /// Contribution of each N in `n_range` at (T, X, Y).
    pub fn terms(&self, t: f64, x: f64, y: f64, n_range: RangeInclusive<i64>) -> Result<Vec<(i64, Complex64)>> {
        if x < 0.0 {
            return Err(Error::domain(format!("parametrix needs X >= 0, got {x}")));
        }
        let ns: Vec<i64> = n_range.collect();
        let need = self.mismatch(t, &ns);
        let finer;
        let grids = if need > self.budget {
            finer = self.regrid(need * 1.25);
            &finer
        } else {
            &self.grids
        };
        let mut acc = vec![Complex64::default(); ns.len()];
        let mut pw = vec![Complex64::default(); ns.len()];
        for g in grids {
            let ey = Complex64::from_polar(g.weight, g.lam_t * y);
            for i in 0..g.e.len() {
                let s = sigma_integral(g.lam_t, x - g.e[i], self.method);
                let base = s * ey * Complex64::from_polar(g.damped[i], g.tcoef[i] * t);
                for (p, &n) in pw.iter_mut().zip(&ns) {
                    *p = if n >= 0 { g.rot[i].powi(n as i32) } else { g.rot[i].conj().powi((-n) as i32) };
                }
                for (slot, p) in acc.iter_mut().zip(&pw) {
                    *slot += base * p;
                }
            }
        }
        let pref = self.prefactor();
        Ok(ns.into_iter().zip(acc).map(|(n, v)| (n, v * pref)).collect())
    }

    fn regrid(&self, budget: f64) -> Vec<EtaGrid> {
        self.grids
            .iter()
            .map(|g| {
                let eta = g.lam_t / self.params.lambda();
                eta_grid(&self.params, &self.cutoffs, eta, g.weight, budget)
            })
            .collect()
    }

    pub fn value_with(&self, t: f64, x: f64, y: f64, n_range: RangeInclusive<i64>) -> Result<Complex64> {
        Ok(self.terms(t, x, y, n_range)?.into_iter().map(|p| p.1).sum())
    }

    pub fn value(&self, t: f64, x: f64, y: f64) -> Result<Complex64> {
        self.value_with(t, x, y, self.n_range(t))
    }
}

fn eta_grid(params: &PacketParams, cutoffs: &CutoffSpec, eta: f64, weight: f64, budget: f64) -> EtaGrid {
    let lt = params.lambda() * eta;
    let (a, m) = (params.a, params.m);
    let scale = lt.powf(2.0 / 3.0);
    let half = E_WINDOW / (lt * m).sqrt();
    // Phase rate per unit E: reflection mismatch plus the Airy factor's own
    // oscillation for X down to 0.
    let rate = lt * (budget + (1.0 + half).sqrt() + 1.0);
    let panels = ((2.0 * half * rate / 10.0).ceil() as usize).max(4);
    let mut g = EtaGrid { lam_t: lt, weight, e: vec![], damped: vec![], tcoef: vec![], rot: vec![] };
    for (e, we) in composite(1.0 - half, 1.0 + half, panels, 16) {
        let chi = cutoffs.chi0.eval(scale * e) * cutoffs.chi1.eval(a * e);
        if chi == 0.0 {
            continue;
        }
        g.e.push(e);
        g.damped.push(we * chi * (-lt * m * (e - 1.0).powi(2) / 2.0).exp());
        g.tcoef.push(lt * (e - 1.0) / denom(a, e));
        g.rot.push(Complex64::from_polar(1.0, -big_l(scale * e)));
    }
    g
}
