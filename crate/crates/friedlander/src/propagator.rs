//! Exact evolution by the Dirichlet mode sum.
//!
//! In packet coordinates the solution with datum V₀ reads
//!
//! U(T,X,Y) = (1/2πh) ∫ ψ(η) e^{iλ̃Y} Σ_k e^{iλ̃T(E_k-1)/(√(1+aE_k)+√(1+a))}
//!            χ₀(ω_k) χ₁(aE_k) (2πλ̃^{2/3}/L′_k) Ai(λ̃^{2/3}X - ω_k) c_k dη
//!
//! with λ̃ = λη, E_k = ω_k/λ̃^{2/3} and c_k = ∫₀^∞ Ai(λ̃^{2/3}Z - ω_k) V₀(Z) dZ.

use crate::airy::ai_real;
use crate::bump::CutoffSpec;
use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::phase::{table_covering, PhaseTable};
use crate::quadrature::{composite, gauss_legendre};
use crate::spectrum::{mode_coefficient, EigenMode, HalfLineFn};
use crate::wavepacket::{v0_closed, PacketParams};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Modes with |E_k - 1| beyond `MODE_WINDOW/√(λ̃M)` carry a Gaussian weight below e^{-72}.
pub const MODE_WINDOW: f64 = 12.0;
/// Depth of the Z < 0 correction, in units of M/λ̃.
const HALF_LINE_DEPTH: f64 = 36.0;
pub const DEFAULT_ETA_NODES: usize = 64;

/// ∫_ℝ Ai(λ̃^{2/3}Z - ω) V₀(Z) dZ = λ̃^{-2/3} √(2πM/λ̃) e^{-λ̃M(E-1)²/2}.
pub fn full_line_coefficient(lam_t: f64, m: f64, omega: f64) -> f64 {
    let e = omega / lam_t.powf(2.0 / 3.0);
    lam_t.powf(-2.0 / 3.0) * (2.0 * PI * m / lam_t).sqrt() * (-lam_t * m * (e - 1.0).powi(2) / 2.0).exp()
}

/// Nodes, weights and V₀ values on [-36M/λ̃, 0], resolving oscillations up to E = e_max.
fn negative_half_line(lam_t: f64, m: f64, e_max: f64) -> Vec<(f64, f64, f64)> {
    let depth = HALF_LINE_DEPTH * m / lam_t;
    let k = lam_t * ((e_max + depth).sqrt() + (1.0 + depth).sqrt());
    let panels = ((depth * k / (4.0 * PI)).ceil() as usize).max(4);
    composite(-depth, 0.0, panels, 16)
        .into_iter()
        .map(|(z, w)| (z, w, v0_closed(z, lam_t, m).re))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTerm {
    pub k: usize,
    pub omega: f64,
    pub energy: f64,
    /// χ₀χ₁ · 2πλ̃^{2/3}/L′ · c_k.
    pub weight: f64,
    /// λ̃(E-1)/(√(1+aE)+√(1+a)).
    pub frequency: f64,
}

#[derive(Debug, Clone)]
pub struct EtaSlice {
    pub eta: f64,
    pub lam_t: f64,
    /// Quadrature weight times ψ(η)/(2πh).
    pub prefactor: f64,
    pub terms: Vec<ModeTerm>,
}

/// Mode data for every η node; evaluation is then a phase rotation.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    pub params: PacketParams,
    pub cutoffs: CutoffSpec,
    pub slices: Vec<EtaSlice>,
}

impl SpectralPropagator {
    pub fn new(params: &PacketParams, cutoffs: &CutoffSpec, eta_nodes: usize) -> Result<Self> {
        let lambda = params.lambda();
        let m = params.m;
        let a = params.a;
        let (lo, hi) = cutoffs.psi.support();
        let e_hi = 1.0 + MODE_WINDOW / (lambda * lo * m).sqrt();
        let table = table_covering((lambda * hi).powf(2.0 / 3.0) * e_hi + 1.0);
        let rule = gauss_legendre(eta_nodes);
        let mut slices = Vec::new();
        for (eta, w) in rule.mapped(lo, hi) {
            let p = cutoffs.psi.eval(eta);
            if p == 0.0 {
                continue;
            }
            let lam_t = lambda * eta;
            let terms = mode_terms(&table, lam_t, m, a, cutoffs);
            slices.push(EtaSlice { eta, lam_t, prefactor: w * p / (2.0 * PI * params.h), terms });
        }
        Ok(SpectralPropagator { params: *params, cutoffs: *cutoffs, slices })
    }

    /// Starts at 64 η nodes and doubles until the values at `probes` move by
    /// less than `tol` relative to their largest modulus.
    pub fn certified(params: &PacketParams, cutoffs: &CutoffSpec, probes: &[(f64, f64, f64)], tol: f64) -> Result<Self> {
        let mut n = DEFAULT_ETA_NODES;
        let mut prop = Self::new(params, cutoffs, n)?;
        let mut prev: Vec<Complex64> = probes.iter().map(|&(t, x, y)| prop.value(t, x, y)).collect();
        let mut change = f64::INFINITY;
        while n <= 512 {
            n *= 2;
            let next = Self::new(params, cutoffs, n)?;
            let vals: Vec<Complex64> = probes.iter().map(|&(t, x, y)| next.value(t, x, y)).collect();
            let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            change = vals.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
            prop = next;
            prev = vals;
            if change < tol {
                return Ok(prop);
            }
        }
        Err(Error::non_convergence("eta quadrature", change))
    }

    pub fn eta_nodes(&self) -> usize {
        self.slices.len()
    }

    pub fn mode_count(&self) -> usize {
        self.slices.iter().map(|s| s.terms.len()).max().unwrap_or(0)
    }

    pub fn value(&self, t: f64, x: f64, y: f64) -> Complex64 {
        let mut total = Complex64::default();
        for s in &self.slices {
            let scale = s.lam_t.powf(2.0 / 3.0);
            let mut acc = Complex64::default();
            for term in &s.terms {
                let amp = term.weight * ai_real(scale * x - term.omega);
                acc += Complex64::from_polar(amp, term.frequency * t);
            }
            total += acc * Complex64::from_polar(s.prefactor, s.lam_t * y);
        }
        total
    }

    /// Caches Airy values on an X axis for repeated slice evaluation.
    pub fn on_axis(&self, x: &[f64]) -> AxisEvaluator<'_> {
        let airy = self
            .slices
            .iter()
            .map(|s| {
                let scale = s.lam_t.powf(2.0 / 3.0);
                s.terms
                    .iter()
                    .map(|term| x.iter().map(|&xx| term.weight * ai_real(scale * xx - term.omega)).collect())
                    .collect()
            })
            .collect();
        AxisEvaluator { prop: self, nx: x.len(), airy }
    }

    /// U on a (T, X, Y) grid.
    pub fn field(&self, t: &[f64], x: &[f64], y: &[f64]) -> Result<ComplexField> {
        check_y_resolution(y, self.params.lambda())?;
        if x.iter().any(|&v| v < 0.0) {
            return Err(Error::domain("X must be non-negative"));
        }
        let ev = self.on_axis(x);
        let mut values = Vec::with_capacity(t.len() * x.len() * y.len());
        for &tt in t {
            values.extend(ev.slice(tt, y));
        }
        ComplexField::new(t.to_vec(), x.to_vec(), y.to_vec(), values)
    }
}

fn mode_terms(table: &PhaseTable, lam_t: f64, m: f64, a: f64, cutoffs: &CutoffSpec) -> Vec<ModeTerm> {
    let scale = lam_t.powf(2.0 / 3.0);
    let half = MODE_WINDOW / (lam_t * m).sqrt();
    let picked: Vec<usize> = (0..table.len())
        .filter(|&i| {
            let e = table.zeros[i] / scale;
            (e - 1.0).abs() <= half && cutoffs.chi0.eval(table.zeros[i]) * cutoffs.chi1.eval(a * e) > 0.0
        })
        .collect();
    if picked.is_empty() {
        return vec![];
    }
    let e_max = table.zeros[*picked.last().unwrap()] / scale;
    let nodes = negative_half_line(lam_t, m, e_max);
    let d0 = (1.0 + a).sqrt();
    picked
        .into_iter()
        .map(|i| {
            let omega = table.zeros[i];
            let e = omega / scale;
            let dc: f64 = nodes.iter().map(|&(z, w, v)| w * v * ai_real(scale * z - omega)).sum();
            let c = full_line_coefficient(lam_t, m, omega) - dc;
            let chi = cutoffs.chi0.eval(omega) * cutoffs.chi1.eval(a * e);
            ModeTerm {
                k: i + 1,
                omega,
                energy: e,
                weight: chi * 2.0 * PI * scale / table.lprime[i] * c,
                frequency: lam_t * (e - 1.0) / ((1.0 + a * e).sqrt() + d0),
            }
        })
        .collect()
}

fn check_y_resolution(y: &[f64], lambda: f64) -> Result<()> {
    // Fastest Y oscillation is e^{2iλY}: at least 6 samples per period π/λ.
    let limit = PI / (6.0 * lambda);
    if let Some(w) = y.windows(2).find(|w| w[1] - w[0] > limit * (1.0 + 1e-12)) {
        return Err(Error::UnderResolved {
            axis: "Y".into(),
            detail: format!("spacing {} exceeds pi/(6 lambda) = {limit}", w[1] - w[0]),
        });
    }
    Ok(())
}

/// Spectral field restricted to a fixed X axis.
pub struct AxisEvaluator<'a> {
    prop: &'a SpectralPropagator,
    nx: usize,
    /// [slice][mode][x] of weight·Ai.
    airy: Vec<Vec<Vec<f64>>>,
}

impl AxisEvaluator<'_> {
    /// Per-η mode sums W_η(T, X), row-major in (η, X).
    fn mode_sums(&self, t: f64) -> Vec<Complex64> {
        let mut w = vec![Complex64::default(); self.prop.slices.len() * self.nx];
        for (si, s) in self.prop.slices.iter().enumerate() {
            let row = &mut w[si * self.nx..(si + 1) * self.nx];
            for (term, amps) in s.terms.iter().zip(&self.airy[si]) {
                let ph = Complex64::from_polar(1.0, term.frequency * t);
                for (acc, &a) in row.iter_mut().zip(amps) {
                    *acc += ph * a;
                }
            }
        }
        w
    }

    /// U(T, ·, ·) on the cached X axis and the given Y axis, row-major in (X, Y).
    pub fn slice(&self, t: f64, y: &[f64]) -> Vec<Complex64> {
        let w = self.mode_sums(t);
        let ny = y.len();
        let mut out = vec![Complex64::default(); self.nx * ny];
        let mut ey = vec![Complex64::default(); ny];
        for (si, s) in self.prop.slices.iter().enumerate() {
            for (e, &yy) in ey.iter_mut().zip(y) {
                *e = Complex64::from_polar(s.prefactor, s.lam_t * yy);
            }
            for j in 0..self.nx {
                let c = w[si * self.nx + j];
                let row = &mut out[j * ny..(j + 1) * ny];
                for (o, e) in row.iter_mut().zip(&ey) {
                    *o += c * e;
                }
            }
        }
        out
    }
}

/// Coefficients of a half-line datum on the modes e_k(·, 1/ħ).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoefficients {
    pub hbar: f64,
    pub modes: Vec<EigenMode>,
    pub coefficients: Vec<Complex64>,
    /// χ₀(ω_k)·χ₁(ω_k ħ^{2/3}).
    pub cutoff_weights: Vec<f64>,
}

impl ModeCoefficients {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Σ |χ c_k|², the squared norm of the projected datum.
    pub fn projected_norm_sqr(&self) -> f64 {
        self.coefficients.iter().zip(&self.cutoff_weights).map(|(c, w)| (c * w).norm_sqr()).sum()
    }
}

/// Projects a half-line datum onto the modes with ω_k ħ^{2/3} ≤ 2.
pub fn decompose<F: Fn(f64) -> Complex64>(v0: &HalfLineFn<F>, hbar: f64, cutoffs: &CutoffSpec) -> Result<ModeCoefficients> {
    if !(hbar > 0.0 && hbar < 1.0) {
        return Err(Error::domain(format!("hbar must lie in (0,1), got {hbar}")));
    }
    let theta = 1.0 / hbar;
    let s = hbar.powf(2.0 / 3.0);
    let (_, chi1_hi) = cutoffs.chi1.support();
    let table = table_covering(chi1_hi / s);
    let mut out = ModeCoefficients { hbar, modes: vec![], coefficients: vec![], cutoff_weights: vec![] };
    for k in 1..=table.len() {
        let mode = EigenMode::new(k, theta, &table)?;
        if mode.omega_k * s > chi1_hi {
            break;
        }
        let w = cutoffs.chi0.eval(mode.omega_k) * cutoffs.chi1.eval(mode.omega_k * s);
        if w == 0.0 {
            continue;
        }
        let c = mode_coefficient(&mode, v0)?;
        if c == Complex64::default() {
            continue;
        }
        out.modes.push(mode);
        out.coefficients.push(c);
        out.cutoff_weights.push(w);
    }
    Ok(out)
}

/// v_ħ(t, x) = Σ_k e^{i(t/ħ)(1+ω_kħ^{2/3})^{1/2}} χ c_k e_k(x) on the given points.
pub fn evolve_modes(coeffs: &ModeCoefficients, t: f64, x: &[f64]) -> Vec<Complex64> {
    let h = coeffs.hbar;
    let s = h.powf(2.0 / 3.0);
    // Largest contributions first, so the sum does not depend on table order.
    let mut order: Vec<usize> = (0..coeffs.len()).collect();
    order.sort_by(|&i, &j| {
        (coeffs.coefficients[j] * coeffs.cutoff_weights[j])
            .norm()
            .total_cmp(&(coeffs.coefficients[i] * coeffs.cutoff_weights[i]).norm())
    });
    x.iter()
        .map(|&xx| {
            let mut sum = Complex64::default();
            let mut comp = Complex64::default();
            for &i in &order {
                let m = &coeffs.modes[i];
                let ph = t / h * (1.0 + m.omega_k * s).sqrt();
                let term = Complex64::from_polar(coeffs.cutoff_weights[i] * m.eval(xx), ph) * coeffs.coefficients[i] - comp;
                let next = sum + term;
                comp = (next - sum) - term;
                sum = next;
            }
            sum
        })
        .collect()
}

/// Propagation direction of the half-wave Green function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Truncated G^±((x,y,t),(a,b,s)) = Σ_k ∫ e^{±i(t-s)√λ_k(θ)} e^{i(y-b)θ} ψ(hθ)
/// χ₀(ω_k)χ₁(ω_kθ^{-2/3}) e_k(x,θ) e_k(a,θ) dθ, with `theta_nodes` Gauss
/// nodes in θ over the support of ψ(h·).
pub fn green_function(
    h: f64,
    cutoffs: &CutoffSpec,
    (x, y, t): (f64, f64, f64),
    (a, b, s): (f64, f64, f64),
    dir: Direction,
    theta_nodes: usize,
    max_modes: usize,
) -> Result<Complex64> {
    if x < 0.0 || a < 0.0 {
        return Err(Error::domain("both points must satisfy x >= 0"));
    }
    let (lo, hi) = cutoffs.psi.support();
    let (_, chi1_hi) = cutoffs.chi1.support();
    let theta_max = hi / h;
    let table = table_covering(chi1_hi * theta_max.powf(2.0 / 3.0));
    let sign = if dir == Direction::Forward { 1.0 } else { -1.0 };
    let mut total = Complex64::default();
    for (theta, w) in gauss_legendre(theta_nodes).mapped(lo / h, theta_max) {
        let p = cutoffs.psi.eval(h * theta);
        if p == 0.0 {
            continue;
        }
        let s23 = theta.powf(-2.0 / 3.0);
        let mut acc_c = Complex64::default();
        for k in 1..=table.len() {
            let mode = EigenMode::new(k, theta, &table)?;
            if mode.omega_k * s23 > chi1_hi {
                break;
            }
            if k > max_modes {
                return Err(Error::domain(format!("Green function needs more than {max_modes} modes")));
            }
            let chi = cutoffs.chi0.eval(mode.omega_k) * cutoffs.chi1.eval(mode.omega_k * s23);
            let amp = chi * mode.eval(x) * mode.eval(a);
            acc_c += Complex64::from_polar(amp, sign * (t - s) * mode.eigenvalue().sqrt());
        }
        total += acc_c * Complex64::from_polar(w * p, (y - b) * theta);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::{ARule, MRule};

    #[test]
    fn full_line_coefficient_matches_quadrature() {
        let (lt, m) = (150.0f64, 6.0);
        let omega = table_covering(40.0).zeros[20];
        let scale: f64 = lt.powf(2.0 / 3.0);
        let pts = composite(-2.0, 3.0, 4000, 8);
        let direct: f64 = pts.iter().map(|&(z, w)| w * ai_real(scale * z - omega) * v0_closed(z, lt, m).re).sum();
        let closed = full_line_coefficient(lt, m, omega);
        assert!((direct - closed).abs() < 1e-9 * closed.abs().max(1e-3), "{direct} vs {closed}");
    }

    #[test]
    fn dirichlet_trace_and_resolution() {
        let p = PacketParams::for_lambda(50.0, ARule::CubeRoot, MRule::LambdaCubeRoot { factor: 1.0 }).unwrap();
        let prop = SpectralPropagator::new(&p, &CutoffSpec::default(), 48).unwrap();
        let y: Vec<f64> = (0..5).map(|i| i as f64 * 0.01).collect();
        let f = prop.field(&[0.0, 1.0], &[0.0, 1.0], &y).unwrap();
        for i in 0..2 {
            for k in 0..5 {
                assert!(f.get(i, 0, k).norm() < 1e-9 * f.max_abs());
            }
        }
        assert!((f.get(1, 1, 3) - prop.value(1.0, 1.0, 0.03)).norm() < 1e-10 * f.max_abs());
        let coarse = [0.0, 0.1];
        assert!(matches!(prop.field(&[0.0], &[1.0], &coarse), Err(Error::UnderResolved { .. })));
    }

    #[test]
    fn mode_evolution_is_unitary() {
        let t = PhaseTable::shared();
        let hbar = 0.02;
        let theta = 1.0 / hbar;
        let e3 = EigenMode::new(3, theta, t).unwrap();
        let e5 = EigenMode::new(5, theta, t).unwrap();
        let f = HalfLineFn::new(|x| Complex64::new(e3.eval(x) + 0.5 * e5.eval(x), 0.0), e5.x_cut());
        let c = decompose(&f, hbar, &CutoffSpec::default()).unwrap();
        assert!((c.projected_norm_sqr() - 1.25).abs() < 1e-6);
        let x: Vec<f64> = composite(0.0, e5.x_cut(), 60, 16).iter().map(|p| p.0).collect();
        let w: Vec<f64> = composite(0.0, e5.x_cut(), 60, 16).iter().map(|p| p.1).collect();
        for tt in [0.0, 0.3, 1.0] {
            let v = evolve_modes(&c, tt, &x);
            let n: f64 = v.iter().zip(&w).map(|(v, w)| v.norm_sqr() * w).sum();
            assert!((n - c.projected_norm_sqr()).abs() < 1e-8);
        }
        assert_eq!(evolve_modes(&c, 0.7, &[0.0])[0].norm() < 1e-9, true);
        let zero = HalfLineFn::new(|_| Complex64::default(), 1.0);
        assert!(decompose(&zero, hbar, &CutoffSpec::default()).unwrap().is_empty());
    }

    #[test]
    fn green_symmetries() {
        let c = CutoffSpec::default();
        let h = 0.1;
        let g1 = green_function(h, &c, (0.3, 0.2, 1.0), (0.5, 0.0, 0.0), Direction::Forward, 32, 400).unwrap();
        let g2 = green_function(h, &c, (0.5, 0.2, 1.0), (0.3, 0.0, 0.0), Direction::Forward, 32, 400).unwrap();
        assert!((g1 - g2).norm() < 1e-12 * g1.norm());
        let gm = green_function(h, &c, (0.3, 0.0, 1.0), (0.5, 0.0, 0.0), Direction::Backward, 32, 400).unwrap();
        let gp = green_function(h, &c, (0.3, 0.0, 1.0), (0.5, 0.0, 0.0), Direction::Forward, 32, 400).unwrap();
        assert!((gm - gp.conj()).norm() < 1e-12 * gp.norm());
        assert!(green_function(h, &c, (0.3, 0.0, 1.0), (0.5, 0.0, 0.0), Direction::Forward, 32, 3).is_err());
    }
}
