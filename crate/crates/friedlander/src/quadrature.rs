//! Gauss–Legendre panels and adaptive bisection.

use crate::error::{Error, Result};
use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1], nodes ascending.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        self.mapped(a, b).map(|(x, w)| f(x) * w).sum()
    }
}

/// Cached n-point Gauss–Legendre rule.
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n)
        .or_insert_with(|| {
            let n = NonZeroUsize::new(n.max(1)).unwrap();
            let gl = GaussLegendre::new(n);
            let mut pairs: Vec<(f64, f64)> = gl.as_node_weight_pairs().to_vec();
            pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
            Arc::new(Rule {
                nodes: pairs.iter().map(|p| p.0).collect(),
                weights: pairs.iter().map(|p| p.1).collect(),
            })
        })
        .clone()
}

/// Composite rule: `panels` equal panels of an `order`-point rule on [a, b].
pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(order);
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + h * p as f64;
        let hi = if p + 1 == panels { b } else { lo + h };
        out.extend(rule.mapped(lo, hi));
    }
    out
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive bisection over Gauss–Legendre panels.
///
/// A panel is accepted when the rule on the whole panel and the sum of the
/// rule on its two halves differ by at most `abs_tol` (or a rounding floor
/// proportional to the panel's L¹ mass).
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub order: usize,
    pub abs_tol: f64,
    pub max_depth: u32,
    pub initial_panels: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive { order: 16, abs_tol: 1e-12, max_depth: 40, initial_panels: 1 }
    }
}

impl Adaptive {
    pub fn with_tol(abs_tol: f64) -> Self {
        Adaptive { abs_tol, ..Default::default() }
    }

    pub fn panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }

    pub fn order(mut self, n: usize) -> Self {
        self.order = n.max(2);
        self
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F, a: f64, b: f64) -> Result<Integral> {
        let rule = gauss_legendre(self.order);
        let mut evals = 0usize;
        let mut panel = |lo: f64, hi: f64, evals: &mut usize| -> (Complex64, f64) {
            let mut s = Complex64::default();
            let mut l1 = 0.0;
            for (x, w) in rule.mapped(lo, hi) {
                let v = f(x) * w;
                s += v;
                l1 += v.norm();
            }
            *evals += rule.len();
            (s, l1)
        };
        let mut stack: Vec<(f64, f64, Complex64, u32)> = Vec::new();
        let n0 = self.initial_panels.max(1);
        let h = (b - a) / n0 as f64;
        for p in (0..n0).rev() {
            let lo = a + h * p as f64;
            let hi = if p + 1 == n0 { b } else { lo + h };
            let (v, _) = panel(lo, hi, &mut evals);
            stack.push((lo, hi, v, 0));
        }
        let mut total = Complex64::default();
        let mut err = 0.0;
        let mut failed = false;
        while let Some((lo, hi, whole, depth)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let (l, l1a) = panel(lo, mid, &mut evals);
            let (r, l1b) = panel(mid, hi, &mut evals);
            let halves = l + r;
            let diff = (whole - halves).norm();
            let floor = 64.0 * f64::EPSILON * (l1a + l1b);
            if diff <= self.abs_tol.max(floor) || depth >= self.max_depth {
                if diff > self.abs_tol.max(floor) {
                    failed = true;
                }
                total += halves;
                err += diff;
            } else {
                stack.push((mid, hi, r, depth + 1));
                stack.push((lo, mid, l, depth + 1));
            }
        }
        if failed || !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::non_convergence("adaptive quadrature", err));
        }
        Ok(Integral { value: total, error: err, evaluations: evals })
    }

    pub fn integrate_real<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<(f64, f64)> {
        let r = self.integrate(|x| Complex64::new(f(x), 0.0), a, b)?;
        Ok((r.value.re, r.error))
    }
}
