//! Closed Airy profile of the J-th reflected wave near the center of R_J
//!
//! Near T = (4J + 2T̃)√(1+a), X = 1 + X̃ the Σ-integral of the J-th term is,
//! after stationary phase in Ẽ = (E-1)/(1+a),
//!
//! I₀(T̃, X̃, η) = ψ(η) ∫ e^{iλ̃ G₀(Σ)} dΣ,  G₀ = γ(T̃-Σ)² + Σ³/3 + ΣX̃,
//!
//! which is 2π λ̃^{-1/3} times an exponential and Ai of a small complex argument.

use crate::airy::ai;
use crate::airy::ai_real;
use crate::bump::CutoffSpec;
use crate::error::{Error, Result};
use crate::phase::b_remainder;
use crate::quadrature::composite;
use crate::wavepacket::PacketParams;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticProfile {
    pub j: u32,
    pub params: PacketParams,
    pub cutoffs: CutoffSpec,
}

impl AsymptoticProfile {
    pub fn new(j: u32, params: PacketParams) -> Self {
        AsymptoticProfile { j, params, cutoffs: CutoffSpec::default() }
    }

    /// ν_a = 1 + a + i(J(1+2a)/M + aT̃/(2M)).
    pub fn nu_a(&self, tt: f64) -> Complex64 {
        let (a, m, j) = (self.params.a, self.params.m, self.j as f64);
        Complex64::new(1.0 + a, j * (1.0 + 2.0 * a) / m + a * tt / (2.0 * m))
    }

    /// γ = (i/2)(1+a)/(M ν_a).
    pub fn gamma(&self, tt: f64) -> Complex64 {
        Complex64::i() * (0.5 * (1.0 + self.params.a)) / (self.params.m * self.nu_a(tt))
    }

    /// Λ = λM(1+a).
    pub fn big_lambda(&self) -> f64 {
        self.params.lambda() * self.params.m * (1.0 + self.params.a)
    }

    /// F(Ẽ) = 4Ẽ(1+a)/(1+√(1+aẼ)) - (4/3)(1+(1+a)Ẽ)^{3/2}.
    pub fn f(&self, e: f64) -> f64 {
        let a = self.params.a;
        4.0 * e * (1.0 + a) / (1.0 + (1.0 + a * e).sqrt()) - 4.0 / 3.0 * (1.0 + (1.0 + a) * e).powf(1.5)
    }

    /// ψ̃_M(T̃, Ẽ, Σ) at offset X̃.
    pub fn psi_m(&self, tt: f64, xx: f64, e: f64, sigma: f64) -> Complex64 {
        let (a, m) = (self.params.a, self.params.m);
        let re = 2.0 * tt * e * (1.0 + a) / (1.0 + (1.0 + a * e).sqrt()) + sigma.powi(3) / 3.0 + sigma * (xx - (1.0 + a) * e);
        Complex64::new(re, 0.5 * m * (1.0 + a).powi(2) * e * e)
    }

    /// G₀(Σ, T̃, X̃).
    pub fn g0(&self, sigma: f64, tt: f64, xx: f64) -> Complex64 {
        self.gamma(tt) * (tt - sigma).powi(2) + sigma.powi(3) / 3.0 + sigma * xx
    }

    /// The Σ-free part of G₀ and the Airy shift w: G₀ = c + (Σ+γ)³/3 - (Σ+γ)w.
    pub fn airy_split(&self, tt: f64, xx: f64) -> (Complex64, Complex64) {
        let g = self.gamma(tt);
        let w = g * g + 2.0 * g * tt - xx;
        (g * w + g * tt * tt - g * g * g / 3.0, w)
    }

    /// I₀ in closed form.
    pub fn asymptotic_i0(&self, tt: f64, xx: f64, eta: f64) -> Result<Complex64> {
        let lt = self.params.lambda() * eta;
        let (c, w) = self.airy_split(tt, xx);
        let airy = ai(-w * lt.powf(2.0 / 3.0))?;
        Ok((Complex64::i() * lt * c).exp() * airy * (2.0 * PI * self.cutoffs.psi.eval(eta) / lt.cbrt()))
    }

    /// I₀ by quadrature of ψ(η)∫e^{iλ̃G₀}dΣ over the real Σ line.
    pub fn i0_quadrature(&self, tt: f64, xx: f64, eta: f64) -> Complex64 {
        let lt = self.params.lambda() * eta;
        let g = self.gamma(tt);
        // |e^{iλ̃G₀}| = e^{-λ̃ Im γ (Σ-T̃)²}; stop at e^{-40}.
        let reach = (40.0 / (lt * g.im)).sqrt();
        let (lo, hi) = (tt - reach, tt + reach);
        let turns = lt * (lo.abs().max(hi.abs()).powi(2) + xx.abs() + 2.0 * g.norm() * reach) * (hi - lo);
        let panels = ((turns / 6.0).ceil() as usize).max(8);
        let mut acc = Complex64::default();
        for (s, wt) in composite(lo, hi, panels, 16) {
            acc += (Complex64::i() * lt * self.g0(s, tt, xx)).exp() * wt;
        }
        acc * self.cutoffs.psi.eval(eta)
    }

    /// The J-th Σ-integral I(T̃, X̃, η) before the Ẽ stationary phase: Ẽ by
    /// quadrature, Σ exactly as an Airy function, scaled by √(ν_a Λη/2π) and
    /// stripped of the constant phase e^{-iλ̃ 4J/3}.
    pub fn i_direct(&self, tt: f64, xx: f64, eta: f64) -> Complex64 {
        let (a, m, j) = (self.params.a, self.params.m, self.j as f64);
        let lt = self.params.lambda() * eta;
        let half = 9.0 / ((lt * m).sqrt() * (1.0 + a));
        let turns = lt * (tt.abs() + j * half + 1.0) * 2.0 * half * (1.0 + a);
        let panels = ((turns / 6.0).ceil() as usize).max(8);
        let mut acc = Complex64::default();
        for (e, wt) in composite(-half, half, panels, 16) {
            let phase = self.psi_m(tt, 0.0, e, 0.0) + j * self.f(e) + 4.0 * j / 3.0;
            let big_e = 1.0 + (1.0 + a) * e;
            let symbol = Complex64::from_polar(1.0, j * b_remainder(lt * big_e.powf(1.5)));
            let sigma = 2.0 * PI / lt.cbrt() * ai_real(lt.powf(2.0 / 3.0) * (xx - (1.0 + a) * e));
            acc += (Complex64::i() * lt * phase).exp() * symbol * (sigma * wt);
        }
        let norm = (self.nu_a(tt) * (self.big_lambda() * eta / (2.0 * PI))).sqrt();
        acc * norm * self.cutoffs.psi.eval(eta)
    }
}

/// |I - e^{iJB(λη)} I₀| at (T̃, X̃, η).
pub fn profile_vs_quadrature(tt: f64, xx: f64, eta: f64, params: &PacketParams, j: u32) -> Result<f64> {
    let p = AsymptoticProfile::new(j, *params);
    let lt = params.lambda() * eta;
    let i0 = p.asymptotic_i0(tt, xx, eta)?;
    let rot = Complex64::from_polar(1.0, j as f64 * b_remainder(lt));
    let direct = p.i_direct(tt, xx, eta);
    if !direct.is_finite() {
        return Err(Error::non_convergence("profile quadrature", f64::INFINITY));
    }
    Ok((direct - rot * i0).norm())
}

fn min_abs_ai_on_circle(r: f64, angles: usize) -> f64 {
    (0..angles)
        .map(|k| {
            let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / angles as f64);
            ai(z).expect("radius below 1").norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Largest c ≤ 1 on a 10⁻³ grid with |Ai| > 1/10 on every circle |z| = r ≤ c.
pub fn airy_lower_bound_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let mut c = 0.0;
        for i in 1..=1000 {
            let r = i as f64 * 1e-3;
            if min_abs_ai_on_circle(r, 720) <= 0.1 {
                break;
            }
            c = r;
        }
        c
    })
}

/// M = max(M_a, 4λ^{1/3}/c), the smallest M for which the profile stays of size λ^{-1/3}.
pub fn lower_bound_m(lambda: f64, m_a: f64) -> f64 {
    m_a.max(4.0 * lambda.cbrt() / airy_lower_bound_constant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::{ARule, MRule};

    fn params(lambda: f64) -> PacketParams {
        let c = airy_lower_bound_constant();
        PacketParams::for_lambda(lambda, ARule::CubeRoot, MRule::LambdaCubeRoot { factor: 4.0 / c }).unwrap()
    }

    #[test]
    fn f_taylor_coefficients() {
        let p = AsymptoticProfile::new(1, params(100.0));
        let a = p.params.a;
        let d = 1e-3;
        assert!((p.f(0.0) + 4.0 / 3.0).abs() < 1e-14);
        assert!(((p.f(d) - p.f(-d)) / (2.0 * d)).abs() < 1e-6);
        let second = (p.f(d) - 2.0 * p.f(0.0) + p.f(-d)) / (d * d);
        assert!((second + (1.0 + a) * (1.0 + 2.0 * a)).abs() < 1e-5);
    }

    #[test]
    fn gamma_size() {
        let p = params(200.0);
        for j in 0..=(p.m_a() as u32) {
            let g = AsymptoticProfile::new(j, p).gamma(0.1).norm();
            assert!(g >= 0.25 / p.m && g <= 1.0 / p.m, "J={j}: {g}");
        }
    }

    #[test]
    fn airy_split_identity() {
        let p = AsymptoticProfile::new(2, params(100.0));
        for &(s, tt, xx) in &[(0.3, 0.05, -0.01), (-1.2, -0.1, 0.02), (2.0, 0.0, 0.0)] {
            let (c, w) = p.airy_split(tt, xx);
            let g = p.gamma(tt);
            let u = s + g;
            let rhs = c + u * u * u / 3.0 - u * w;
            assert!((p.g0(s, tt, xx) - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let p = AsymptoticProfile::new(1, params(200.0));
        for &(tt, xx) in &[(0.0, 0.0), (0.05, 0.004), (-0.08, -0.003)] {
            let a = p.asymptotic_i0(tt, xx, 1.0).unwrap();
            let b = p.i0_quadrature(tt, xx, 1.0);
            assert!((a - b).norm() <= 1e-6 * a.norm(), "{a} vs {b}");
        }
    }

    #[test]
    fn lower_bound_constant() {
        let c = airy_lower_bound_constant();
        assert!(c > 0.0 && c <= 1.0);
        let fine = (1..=200).map(|i| min_abs_ai_on_circle(c * i as f64 / 200.0, 2000)).fold(f64::INFINITY, f64::min);
        assert!(fine > 0.1);
        assert!(min_abs_ai_on_circle(c / 2.0, 720) >= min_abs_ai_on_circle(c, 720));
    }

    #[test]
    fn profile_is_close_for_j0() {
        let p = params(200.0);
        let i0 = AsymptoticProfile::new(0, p).asymptotic_i0(0.0, 0.0, 1.0).unwrap();
        let gap = profile_vs_quadrature(0.0, 0.0, 1.0, &p, 0).unwrap();
        assert!(gap <= 1e-3 * i0.norm(), "{gap}");
    }

    #[test]
    fn discrepancy_shrinks_with_lambda() {
        let gap = |lam: f64| {
            let p = params(lam);
            profile_vs_quadrature(0.5 * (p.m / lam).sqrt(), 0.5 * lam.powf(-2.0 / 3.0), 1.0, &p, 1).unwrap()
        };
        assert!(gap(400.0) <= gap(100.0));
    }
}
