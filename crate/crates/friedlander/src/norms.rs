//! Mixed Lebesgue norms of sampled fields and Strichartz scans

use crate::bump::CutoffSpec;
use crate::error::{Error, Result};
use crate::field::{linspace, ComplexField};
use crate::profile::airy_lower_bound_constant;
use crate::propagator::SpectralPropagator;
use crate::wavepacket::{data_l2_norm, reduced_strichartz_rhs, PacketParams};
use num_complex::Complex64;
use std::io::Write;

fn trapezoid_weights(axis: &[f64]) -> Vec<f64> {
    let n = axis.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let d = 0.5 * (axis[i + 1] - axis[i]);
        w[i] += d;
        w[i + 1] += d;
    }
    w
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::domain(format!("{name} axis needs at least two points")));
    }
    Ok(())
}

/// L^r norm of an (X, Y) slice stored row-major in (X, Y); r = ∞ gives the max.
pub fn spatial_norm(values: &[Complex64], x: &[f64], y: &[f64], r: f64) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(Error::domain(format!("r must be >= 1, got {r}")));
    }
    if values.len() != x.len() * y.len() {
        return Err(Error::domain("slice does not match its axes"));
    }
    if r.is_infinite() {
        return Ok(values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    check_axis("X", x)?;
    check_axis("Y", y)?;
    let (wx, wy) = (trapezoid_weights(x), trapezoid_weights(y));
    let mut acc = 0.0;
    for (i, row) in values.chunks(y.len()).enumerate() {
        let s: f64 = row.iter().zip(&wy).map(|(v, w)| w * v.norm().powf(r)).sum();
        acc += wx[i] * s;
    }
    Ok(acc.powf(1.0 / r))
}

/// L^q over a time axis of per-slice norms; q = ∞ gives the max.
pub fn time_norm(t: &[f64], slice_norms: &[f64], q: f64) -> Result<f64> {
    if t.is_empty() || t.len() != slice_norms.len() {
        return Err(Error::domain("empty or mismatched time window"));
    }
    if q.is_infinite() {
        return Ok(slice_norms.iter().cloned().fold(0.0, f64::max));
    }
    check_axis("T", t)?;
    let w = trapezoid_weights(t);
    Ok(w.iter().zip(slice_norms).map(|(w, n)| w * n.powf(q)).sum::<f64>().powf(1.0 / q))
}

/// ‖U‖_{L^q(window; L^r)} over the slices whose T lies in `window`.
pub fn mixed_norm(field: &ComplexField, q: f64, r: f64, window: (f64, f64)) -> Result<f64> {
    let (t0, t1) = (field.t[0], field.t[field.t.len() - 1]);
    if window.0 < t0 - 1e-12 || window.1 > t1 + 1e-12 || window.0 > window.1 {
        return Err(Error::domain(format!("window {window:?} not inside [{t0}, {t1}]")));
    }
    let mut ts = Vec::new();
    let mut norms = Vec::new();
    for (i, &t) in field.t.iter().enumerate() {
        if t >= window.0 - 1e-12 && t <= window.1 + 1e-12 {
            ts.push(t);
            norms.push(spatial_norm(field.slice(i), &field.x, &field.y, r)?);
        }
    }
    if ts.is_empty() {
        return Err(Error::domain("no time slices inside the window"));
    }
    time_norm(&ts, &norms, q)
}

/// Time samples on [0, M_a]: 21 points clustered on each turning window
/// |T - 4J√(1+a)| ≤ 6√(1+a)√(M/λ) and 5 evenly spaced points in each gap.
pub fn scan_time_grid(params: &PacketParams) -> Vec<f64> {
    let s = (1.0 + params.a).sqrt();
    let end = params.m_a();
    let half = 6.0 * s * (params.m / params.lambda()).sqrt();
    let mut t = Vec::new();
    let mut j = 0;
    loop {
        let c = 4.0 * s * j as f64;
        if c - half > end {
            break;
        }
        for k in -10..=10 {
            let u = k as f64 / 10.0;
            t.push(c + half * u * u.abs().sqrt());
        }
        let next = 4.0 * s * (j + 1) as f64 - half;
        for k in 1..=5 {
            t.push(c + half + (next - c - half) * k as f64 / 6.0);
        }
        j += 1;
    }
    t.retain(|&v| (0.0..=end).contains(&v));
    t.push(end);
    t.sort_by(|a, b| a.partial_cmp(b).unwrap());
    t.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    t
}

/// Spatial norms of U along the scan times, over a box that follows the packet:
/// X ∈ [0, 1.3], Y ∈ T/3 ± 0.35.
#[derive(Debug, Clone)]
pub struct TimeProfile {
    pub t: Vec<f64>,
    pub norms: Vec<f64>,
}

impl TimeProfile {
    pub fn lq(&self, q: f64) -> Result<f64> {
        time_norm(&self.t, &self.norms, q)
    }
}

pub fn packet_axes(lambda: f64, t: f64) -> (Vec<f64>, Vec<f64>) {
    let nx = (1.3 * 6.0 * lambda.powf(2.0 / 3.0)).ceil() as usize + 1;
    let ny = (0.7 * 4.0 * lambda).ceil() as usize + 1;
    (linspace(0.0, 1.3, nx), linspace(t / 3.0 - 0.35, t / 3.0 + 0.35, ny))
}

pub fn time_profile(prop: &SpectralPropagator, t: &[f64], r: f64) -> Result<TimeProfile> {
    let lambda = prop.params.lambda();
    let (x, _) = packet_axes(lambda, 0.0);
    let ev = prop.on_axis(&x);
    let mut norms = Vec::with_capacity(t.len());
    for &tt in t {
        let (_, y) = packet_axes(lambda, tt);
        norms.push(spatial_norm(&ev.slice(tt, &y), &x, &y, r)?);
    }
    Ok(TimeProfile { t: t.to_vec(), norms })
}

/// lhs / (λ^{1-1/q-2/r} M_a^{1/2-1/r-2/q} ‖U₀‖).
pub fn strichartz_quotient(params: &PacketParams, q: f64, r: f64, lhs: f64, data_norm: f64) -> Result<f64> {
    if !(data_norm > 0.0) {
        return Err(Error::domain("data norm must be positive"));
    }
    Ok(lhs / (reduced_strichartz_rhs(q, r, params) * data_norm))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub h: f64,
    pub a: f64,
    pub m: f64,
    pub lambda: f64,
    pub q: f64,
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub quotient: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
}

impl ScanResult {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "h,a,M,lambda,q,r,lhs,rhs,quotient")?;
        for r in &self.rows {
            writeln!(
                w,
                "{:.10e},{:.10e},{:.10e},{:.10e},{},{},{:.10e},{:.10e},{:.10e}",
                r.h, r.a, r.m, r.lambda, r.q, r.r, r.lhs, r.rhs, r.quotient
            )?;
        }
        Ok(())
    }

    /// Rows with this q, in scan order.
    pub fn for_q(&self, q: f64) -> ScanResult {
        ScanResult { rows: self.rows.iter().filter(|r| r.q == q).cloned().collect() }
    }
}

/// Runs the scan for every q at once: one propagator and one time profile per λ.
pub fn strichartz_scan(params: &[PacketParams], qs: &[f64], r: f64, cutoffs: &CutoffSpec) -> Result<ScanResult> {
    let mut rows = Vec::new();
    for p in params {
        let prop = SpectralPropagator::new(p, cutoffs, crate::propagator::DEFAULT_ETA_NODES)?;
        let profile = time_profile(&prop, &scan_time_grid(p), r)?;
        let data = data_l2_norm(p, cutoffs).value;
        for &q in qs {
            let lhs = profile.lq(q)?;
            let rhs = reduced_strichartz_rhs(q, r, p) * data;
            rows.push(ScanRow { h: p.h, a: p.a, m: p.m, lambda: p.lambda(), q, r, lhs, rhs, quotient: lhs / rhs });
        }
    }
    Ok(ScanResult { rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub stderr: f64,
    pub n: usize,
}

impl Fit {
    pub fn summary(&self) -> String {
        format!("slope={} stderr={} n={}", self.slope, self.stderr, self.n)
    }
}

/// Least-squares slope of log(quotient) against log(λ). Needs four rows and a
/// λ range of at least a factor 8.
pub fn fit_scaling(scan: &ScanResult) -> Result<Fit> {
    let pts: Vec<(f64, f64)> = scan.rows.iter().map(|r| (r.lambda.ln(), r.quotient.ln())).collect();
    let n = pts.len();
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.0), h.max(p.0)));
    if n < 4 || hi - lo < 8f64.ln() - 1e-12 {
        return Err(Error::domain(format!("need >= 4 rows over a factor 8 in lambda, got {n}")));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let resid: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let stderr = (resid / (nf - 2.0) / sxx).sqrt();
    Ok(Fit { slope, stderr, n })
}

/// The window where h|U| is bounded below near the J-th turning point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundWindow {
    pub t: (f64, f64),
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub measured_min: f64,
}

/// |T̃| ≤ min(√(M/λ), λ^{-1/3} M c/(4λ^{1/3})), |X̃| ≤ λ^{-2/3}, |Ỹ| ≤ 1/λ around
/// (4J√(1+a), 1, 4J/3), with the min of h|U| over a 5³ lattice.
pub fn lower_bound_window<F: Fn(f64, f64, f64) -> Complex64>(params: &PacketParams, j: u32, u: F) -> LowerBoundWindow {
    let lambda = params.lambda();
    let s = (1.0 + params.a).sqrt();
    let c = airy_lower_bound_constant();
    let tt = (params.m / lambda).sqrt().min(params.m * c / (4.0 * lambda.powf(2.0 / 3.0)));
    let t0 = 4.0 * j as f64 * s;
    let t = (t0 - 2.0 * tt * s, t0 + 2.0 * tt * s);
    let x = (1.0 - lambda.powf(-2.0 / 3.0), 1.0 + lambda.powf(-2.0 / 3.0));
    let y0 = 4.0 * j as f64 / 3.0;
    let y = (y0 - 1.0 / lambda, y0 + 1.0 / lambda);
    let mut measured_min = f64::INFINITY;
    for &ti in &linspace(t.0, t.1, 5) {
        for &xi in &linspace(x.0, x.1, 5) {
            for &yi in &linspace(y.0, y.1, 5) {
                measured_min = measured_min.min(params.h * u(ti, xi, yi).norm());
            }
        }
    }
    LowerBoundWindow { t, x, y, measured_min }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_slice() {
        let x = linspace(0.0, 1.0, 11);
        let y = linspace(0.0, 1.0, 7);
        let v = vec![Complex64::new(1.0, 0.0); 77];
        for r in [1.0, 2.0, 5.0, f64::INFINITY] {
            assert!((spatial_norm(&v, &x, &y, r).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_norm() {
        let x = linspace(-6.0, 6.0, 50);
        let y = linspace(-6.0, 6.0, 50);
        let v: Vec<Complex64> = x
            .iter()
            .flat_map(|&a| y.iter().map(move |&b| Complex64::new((-(a * a + b * b) / 2.0).exp(), 0.0)))
            .collect();
        for r in [1.0, 2.0, 4.0] {
            let exact = (2.0 * std::f64::consts::PI / r).powf(1.0 / r);
            let got = spatial_norm(&v, &x, &y, r).unwrap();
            assert!((got / exact - 1.0).abs() < 0.01, "r={r}: {got} vs {exact}");
        }
    }

    #[test]
    fn window_additivity() {
        let t = linspace(0.0, 2.0, 21);
        let n: Vec<f64> = t.iter().map(|v| 1.0 + v * v).collect();
        let q = 3.0;
        let whole = time_norm(&t, &n, q).unwrap().powf(q);
        let a = time_norm(&t[..11], &n[..11], q).unwrap().powf(q);
        let b = time_norm(&t[10..], &n[10..], q).unwrap().powf(q);
        assert!((whole - a - b).abs() < 1e-12 * whole);
        assert_eq!(time_norm(&t, &n, f64::INFINITY).unwrap(), 5.0);
    }

    #[test]
    fn exact_power_law_fit() {
        let rows = [50.0, 100.0, 200.0, 400.0]
            .iter()
            .map(|&l: &f64| ScanRow { h: 0.0, a: 0.0, m: 0.0, lambda: l, q: 4.0, r: f64::INFINITY, lhs: 0.0, rhs: 0.0, quotient: l.powf(0.1) })
            .collect();
        let fit = fit_scaling(&ScanResult { rows }).unwrap();
        assert!((fit.slope - 0.1).abs() < 1e-12);
        assert!(fit.stderr < 1e-12);
        assert!(fit_scaling(&ScanResult::default()).is_err());
    }

    #[test]
    fn time_grid_shape() {
        let p = PacketParams::for_lambda(400.0, crate::wavepacket::ARule::CubeRoot, crate::wavepacket::MRule::LambdaCubeRoot { factor: 1.0 }).unwrap();
        let t = scan_time_grid(&p);
        assert_eq!(t[0], 0.0);
        assert!((t[t.len() - 1] - p.m_a()).abs() < 1e-12);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
    }
}
