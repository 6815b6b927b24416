//! Both sides of the Airy–Poisson formula
//! Σ_N ∫ e^{-iNL(ω)} φ(ω) dω = 2π Σ_k φ(ω_k) / L′(ω_k).

use crate::airy::ENVELOPE;
use crate::bump::BumpFunction;
use crate::error::{Error, Result};
use crate::phase::{big_l, big_l_prime, PhaseTable};
use crate::quadrature::composite;
use num_complex::Complex64;
use std::f64::consts::PI;

const ORDER: usize = 16;
const MAX_DOUBLINGS: u32 = 8;

/// Left side with its achieved error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonSum {
    pub value: Complex64,
    pub error: f64,
}

fn check_support(phi: &BumpFunction) -> Result<(f64, f64)> {
    let (lo, hi) = phi.support();
    if lo < -ENVELOPE || hi > ENVELOPE {
        return Err(Error::domain(format!("bump support [{lo}, {hi}] leaves |ω| <= {ENVELOPE}")));
    }
    Ok((lo, hi))
}

fn lhs_with_panels(phi: &BumpFunction, n_max: u32, lo: f64, hi: f64, panels: usize) -> Complex64 {
    let mut total = Complex64::default();
    for (w, wt) in composite(lo, hi, panels, ORDER) {
        let p = phi.eval(w);
        if p == 0.0 {
            continue;
        }
        let l = big_l(w);
        // Σ_{|N|<=n} e^{-iNL}; the ±N terms pair into cosines, the sines cancel.
        let mut s = Complex64::new(1.0, 0.0);
        for n in 1..=n_max {
            let (sn, cn) = (n as f64 * l).sin_cos();
            s += Complex64::new(cn, -sn) + Complex64::new(cn, sn);
        }
        total += s * (p * wt);
    }
    total
}

/// Σ_{|N| <= n_max} ∫ e^{-iNL(ω)} φ(ω) dω.
///
/// `quad_points` sets the starting node count; panels are doubled until two
/// successive sums agree to 1e-10 or the budget runs out.
pub fn poisson_lhs(phi: &BumpFunction, n_max: u32, quad_points: usize) -> Result<PoissonSum> {
    let (lo, hi) = check_support(phi)?;
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    // Oscillation wavenumber is n_max·L′; start near 2 nodes per radian.
    let lp = big_l_prime(hi).max(big_l_prime(lo));
    let osc = (n_max as f64 * lp * (hi - lo) / (PI * ORDER as f64)).ceil() as usize;
    let mut panels = osc.max(quad_points.div_ceil(ORDER)).max(4);
    let mut prev = lhs_with_panels(phi, n_max, lo, hi, panels);
    let mut err = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let next = lhs_with_panels(phi, n_max, lo, hi, panels);
        err = (next - prev).norm();
        prev = next;
        if err <= 1e-10 {
            return Ok(PoissonSum { value: prev, error: err });
        }
    }
    Err(Error::non_convergence("Airy-Poisson left side", err))
}

/// 2π Σ_k φ(ω_k) / L′(ω_k).
pub fn poisson_rhs(phi: &BumpFunction, table: &PhaseTable) -> Result<f64> {
    let (lo, hi) = check_support(phi)?;
    if hi >= table.last_zero() {
        return Err(Error::domain(format!(
            "bump support reaches {hi}, beyond the last tabulated zero {}",
            table.last_zero()
        )));
    }
    Ok(table
        .zeros
        .iter()
        .zip(&table.lprime)
        .filter(|(w, _)| **w > lo && **w < hi)
        .map(|(&w, &lp)| 2.0 * PI * phi.eval(w) / lp)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_first_zero_vanishes() {
        let phi = BumpFunction::new(1.0, 1.0, 0.3).unwrap();
        let s = poisson_lhs(&phi, 200, 0).unwrap();
        assert!(s.value.norm() < 1e-5, "{:?}", s);
        assert_eq!(poisson_rhs(&phi, PhaseTable::shared()).unwrap(), 0.0);
    }

    #[test]
    fn single_zero() {
        let t = PhaseTable::shared();
        let phi = BumpFunction::new(t.zeros[0], 0.5, 0.5).unwrap();
        let lhs = poisson_lhs(&phi, 200, 0).unwrap();
        let rhs = poisson_rhs(&phi, t).unwrap();
        assert!((rhs - 2.0 * PI / t.lprime[0]).abs() < 1e-14);
        assert!((lhs.value.re - rhs).abs() < 1e-6, "{} vs {rhs}", lhs.value.re);
        assert!(lhs.value.im.abs() < 1e-10);
    }

    #[test]
    fn support_past_table_is_rejected() {
        let t = PhaseTable::new(3);
        let phi = BumpFunction::new(t.zeros[2], 1.0, 0.5).unwrap();
        assert!(poisson_rhs(&phi, &t).is_err());
    }
}
