//! The cusp datum V₀, the packet parameters (h, a, M) and the lab/packet frames.

use crate::airy::{ai_real, asymptotic_sums};
use crate::bump::CutoffSpec;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, Adaptive};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

/// How the source distance a is derived from h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ARule {
    Fixed(f64),
    /// a = h^{1/3}.
    CubeRoot,
    /// a = h^{1/2-ε}.
    HalfMinusEps(f64),
}

/// How the width parameter M is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MRule {
    Fixed(f64),
    /// M = factor·λ^{1/3}.
    LambdaCubeRoot { factor: f64 },
    /// M = factor·M_a.
    Ma { factor: f64 },
}

impl fmt::Display for ARule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ARule::Fixed(a) => write!(f, "{a}"),
            ARule::CubeRoot => write!(f, "h^(1/3)"),
            ARule::HalfMinusEps(e) => write!(f, "h^(1/2-eps) eps={e}"),
        }
    }
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MRule::Fixed(m) => write!(f, "{m}"),
            MRule::LambdaCubeRoot { factor } => write!(f, "{factor}*lambda^(1/3)"),
            MRule::Ma { factor } => write!(f, "{factor}*M_a"),
        }
    }
}

impl ARule {
    pub fn apply(&self, h: f64) -> f64 {
        match *self {
            ARule::Fixed(a) => a,
            ARule::CubeRoot => h.cbrt(),
            ARule::HalfMinusEps(eps) => h.powf(0.5 - eps),
        }
    }

    /// h giving a prescribed λ = a^{3/2}/h.
    pub fn h_for_lambda(&self, lambda: f64) -> Result<f64> {
        match *self {
            ARule::CubeRoot => Ok(lambda.powi(-2)),
            ARule::HalfMinusEps(eps) => Ok(lambda.powf(-1.0 / (0.25 + 1.5 * eps))),
            ARule::Fixed(a) => Ok(a.powf(1.5) / lambda),
        }
    }
}

impl MRule {
    pub fn apply(&self, lambda: f64, m_a: f64) -> f64 {
        match *self {
            MRule::Fixed(m) => m,
            MRule::LambdaCubeRoot { factor } => factor * lambda.cbrt(),
            MRule::Ma { factor } => factor * m_a,
        }
    }
}

/// The parameter bundle (h, a, M) with λ = a^{3/2}/h and M_a = a^{-1/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketParams {
    pub h: f64,
    pub a: f64,
    pub m: f64,
}

impl PacketParams {
    pub fn new(h: f64, a: f64, m: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::validation(format!("h must lie in (0,1), got {h}")));
        }
        if !(a > h.powf(2.0 / 3.0)) {
            return Err(Error::validation(format!("need a > h^(2/3) = {}, got a = {a}", h.powf(2.0 / 3.0))));
        }
        let p = PacketParams { h, a, m };
        let lambda = p.lambda();
        if !(lambda > 1.0) {
            return Err(Error::validation(format!("lambda = a^(3/2)/h must exceed 1, got {lambda}")));
        }
        if !(m > 1.0 && m < lambda) {
            return Err(Error::validation(format!("need 1 < M < lambda = {lambda}, got M = {m}")));
        }
        Ok(p)
    }

    pub fn from_rules(h: f64, a_rule: ARule, m_rule: MRule) -> Result<Self> {
        let a = a_rule.apply(h);
        let lambda = a.powf(1.5) / h;
        let m = m_rule.apply(lambda, a.powf(-0.5));
        Self::new(h, a, m)
    }

    /// Parameters with a prescribed λ.
    pub fn for_lambda(lambda: f64, a_rule: ARule, m_rule: MRule) -> Result<Self> {
        Self::from_rules(a_rule.h_for_lambda(lambda)?, a_rule, m_rule)
    }

    pub fn lambda(&self) -> f64 {
        self.a.powf(1.5) / self.h
    }

    pub fn m_a(&self) -> f64 {
        self.a.powf(-0.5)
    }

    /// Desk-scale readings of the "≪" conditions. Empty when all hold.
    pub fn desk_gates(&self, c: f64) -> Vec<String> {
        let mut out = Vec::new();
        let lambda = self.lambda();
        if self.a < 2.0 * self.h.powf(2.0 / 3.0) {
            out.push(format!("a = {} < 2 h^(2/3)", self.a));
        }
        if self.m < 4.0 * lambda.cbrt() / c {
            out.push(format!("M = {} < 4 lambda^(1/3)/c = {}", self.m, 4.0 * lambda.cbrt() / c));
        }
        if self.m > lambda / 4.0 {
            out.push(format!("M = {} > lambda/4 = {}", self.m, lambda / 4.0));
        }
        out
    }

    /// Reads `h`, `a`, `M`, `a_rule`, `M_rule`, `eps`, `M_factor`.
    pub fn from_config(kv: &BTreeMap<String, String>) -> Result<Self> {
        let num = |k: &str| -> Result<Option<f64>> {
            kv.get(k)
                .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{k} = {s:?}: {e}"))))
                .transpose()
        };
        let h = num("h")?.ok_or_else(|| Error::validation("missing key h"))?;
        let eps = num("eps")?.unwrap_or(0.0);
        let factor = num("M_factor")?.unwrap_or(1.0);
        let a_rule = match (kv.get("a_rule").map(|s| s.trim()), num("a")?) {
            (Some("h^(1/3)"), _) => ARule::CubeRoot,
            (Some("h^(1/2-eps)"), _) => ARule::HalfMinusEps(eps),
            (Some(other), _) => return Err(Error::Parse(format!("unknown a_rule {other:?}"))),
            (None, Some(a)) => ARule::Fixed(a),
            (None, None) => return Err(Error::validation("need a or a_rule")),
        };
        let m_rule = match (kv.get("M_rule").map(|s| s.trim()), num("M")?) {
            (Some("lambda^(1/3)"), _) => MRule::LambdaCubeRoot { factor },
            (Some("M_a"), _) => MRule::Ma { factor },
            (Some(other), _) => return Err(Error::Parse(format!("unknown M_rule {other:?}"))),
            (None, Some(m)) => MRule::Fixed(m),
            (None, None) => return Err(Error::validation("need M or M_rule")),
        };
        Self::from_rules(h, a_rule, m_rule)
    }

    /// Packet-frame coordinates of a lab point: t = a^{1/2}T, x = aX, y = -t√(1+a) + a^{3/2}Y.
    pub fn lab_to_packet(&self, t: f64, x: f64, y: f64) -> (f64, f64, f64) {
        let s = self.a.sqrt();
        (t / s, x / self.a, (y + t * (1.0 + self.a).sqrt()) / (self.a * s))
    }

    pub fn packet_to_lab(&self, tt: f64, xx: f64, yy: f64) -> (f64, f64, f64) {
        let s = self.a.sqrt();
        let t = s * tt;
        (t, self.a * xx, -t * (1.0 + self.a).sqrt() + self.a * s * yy)
    }
}

/// V₀(Z, λ̃) = ∫ e^{iλ̃((Z-1)s + s³/3 + (i/2)s²/M)} ds by adaptive quadrature.
pub fn v0_oscillatory(z: f64, lam_eta: f64, m: f64) -> Result<Complex64> {
    if !(lam_eta > 1.0) {
        return Err(Error::domain(format!("lam_eta must exceed 1, got {lam_eta}")));
    }
    // e^{-λ̃s²/2M} < e^{-45} beyond S.
    let s_max = (90.0 * m / lam_eta).sqrt();
    let phase = |s: f64| lam_eta * ((z - 1.0) * s + s * s * s / 3.0);
    let osc = (phase(s_max) - phase(-s_max)).abs() + 2.0 * lam_eta * (z - 1.0).abs() * s_max;
    let panels = ((osc / 8.0).ceil() as usize).max(4);
    let scale = (2.0 * PI * m / lam_eta).sqrt();
    let r = Adaptive::with_tol(1e-15 * scale).panels(panels).integrate(
        |s| Complex64::from_polar((-lam_eta * s * s / (2.0 * m)).exp(), phase(s)),
        -s_max,
        s_max,
    )?;
    Ok(r.value)
}

fn v0_exponent(z: f64, lam_eta: f64, m: f64) -> f64 {
    lam_eta / (2.0 * m) * (z - 1.0 + 1.0 / (6.0 * m * m))
}

fn v0_airy_arg(z: f64, lam_eta: f64, m: f64) -> f64 {
    lam_eta.powf(2.0 / 3.0) * (z - 1.0 + 1.0 / (4.0 * m * m))
}

/// ln Ai(x) for x > 8 via the asymptotic series.
fn ln_ai_positive(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (su, _) = asymptotic_sums(Complex64::new(zeta, 0.0));
    -zeta - (2.0 * PI.sqrt() * x.powf(0.25)).ln() + su.re.ln()
}

/// Closed form of V₀ split as `sign·exp(log_abs)`, usable when the
/// exponential factor alone would overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct V0Closed {
    pub sign: f64,
    pub log_abs: f64,
    /// The log path was taken because a factor would leave f64 range.
    pub rescaled: bool,
}

impl V0Closed {
    pub fn value(&self) -> f64 {
        self.sign * self.log_abs.exp()
    }
}

/// (2π/λ̃^{1/3}) e^{(λ̃/2M)(Z-1+1/(6M²))} Ai(λ̃^{2/3}(Z-1+1/(4M²))).
pub fn v0_closed_parts(z: f64, lam_eta: f64, m: f64) -> V0Closed {
    let e = v0_exponent(z, lam_eta, m);
    let x = v0_airy_arg(z, lam_eta, m);
    let pref = (2.0 * PI).ln() - lam_eta.ln() / 3.0;
    // Either factor alone may overflow or underflow.
    if x > 8.0 && (e > 700.0 || x.powf(1.5) > 1000.0) {
        return V0Closed { sign: 1.0, log_abs: pref + e + ln_ai_positive(x), rescaled: true };
    }
    let a = ai_real(x);
    V0Closed { sign: a.signum(), log_abs: pref + e + a.abs().ln(), rescaled: false }
}

pub fn v0_closed(z: f64, lam_eta: f64, m: f64) -> Complex64 {
    Complex64::new(v0_closed_parts(z, lam_eta, m).value(), 0.0)
}

/// (1/2π)∫ e^{-iλ̃ξZ} V₀(Z) dZ = (1/λ̃) e^{iλ̃(ξ³/3 - ξ + iξ²/2M)}.
pub fn v0_hat(xi: f64, lam_eta: f64, m: f64) -> Complex64 {
    Complex64::from_polar(
        (-lam_eta * xi * xi / (2.0 * m)).exp() / lam_eta,
        lam_eta * (xi * xi * xi / 3.0 - xi),
    )
}

/// ‖U₀‖ and its ratio to h^{-1}λ^{-5/4}M^{1/4}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataNorm {
    pub value: f64,
    pub ratio: f64,
}

/// ‖U₀‖_{L²} for U₀ = (1/2πh)∫ψ(η) e^{iληY} V₀(X, λη) dη, from
/// ‖U₀‖² = (1/h²λ²) ∫∫ η^{-1} ψ²(η) e^{-ληξ²/M} dξ dη.
pub fn data_l2_norm(params: &PacketParams, cutoffs: &CutoffSpec) -> DataNorm {
    let lambda = params.lambda();
    let m = params.m;
    let rule = gauss_legendre(64);
    let (lo, hi) = cutoffs.psi.support();
    let mut acc = 0.0;
    for panel in 0..8 {
        let a = lo + (hi - lo) * panel as f64 / 8.0;
        let b = a + (hi - lo) / 8.0;
        acc += rule.integrate(a, b, |eta| {
            let p = cutoffs.psi.eval(eta);
            p * p / eta * (PI * m / (lambda * eta)).sqrt()
        });
    }
    let value = acc.sqrt() / (params.h * lambda);
    let bound = lambda.powf(-1.25) * m.powf(0.25) / params.h;
    DataNorm { value, ratio: value / bound }
}

/// `(a^{-5/(2r)}, a^{-1/(2q)-5/(2r)})`, with 1/∞ = 0.
pub fn norm_scaling(r: f64, q: f64, params: &PacketParams) -> (f64, f64) {
    let (ir, iq) = (1.0 / r, 1.0 / q);
    (params.a.powf(-2.5 * ir), params.a.powf(-0.5 * iq - 2.5 * ir))
}

/// λ^{1-1/q-2/r} M_a^{1/2-1/r-2/q}.
pub fn reduced_strichartz_rhs(q: f64, r: f64, params: &PacketParams) -> f64 {
    reduced_rhs(q, r, params.lambda(), params.m_a())
}

pub fn reduced_rhs(q: f64, r: f64, lambda: f64, m_a: f64) -> f64 {
    let (ir, iq) = (1.0 / r, 1.0 / q);
    lambda.powf(1.0 - iq - 2.0 * ir) * m_a.powf(0.5 - ir - 2.0 * iq)
}
