use friedlander::bump::CutoffSpec;
use friedlander::experiment::{probe_points, rng};
use friedlander::field::linspace;
use friedlander::parametrix::{sigma_integral, Parametrix, ReflectionPhase, SigmaMethod, DEFAULT_ETA_NODES};
use friedlander::propagator::SpectralPropagator;
use friedlander::quadrature::composite;
use friedlander::wavepacket::{ARule, MRule, PacketParams};
use num_complex::Complex64;

fn params(lambda: f64) -> PacketParams {
    PacketParams::for_lambda(lambda, ARule::CubeRoot, MRule::LambdaCubeRoot { factor: 1.0 }).unwrap()
}

#[test]
fn wider_reflection_window_changes_nothing() {
    let p = params(50.0);
    let par = Parametrix::new(&p, &CutoffSpec::default(), DEFAULT_ETA_NODES, SigmaMethod::Airy);
    let mut r = rng(11);
    for j in 0..=2 {
        for (t, x, y) in probe_points(&p, j, 3, &mut r) {
            let base = par.n_range(t);
            let wide = (base.start() - 3)..=(base.end() + 3);
            let a = par.value_with(t, x, y, base).unwrap();
            let b = par.value_with(t, x, y, wide).unwrap();
            assert!((a - b).norm() < 1e-6 * b.norm(), "J={j}: {a} vs {b}");
        }
    }
}

#[test]
fn gaussian_s_integral() {
    let (lt, m, e) = (100.0f64, 10.0f64, 1.0f64);
    let mut acc = Complex64::default();
    for (s, w) in composite(-3.0, 3.0, 60, 16) {
        acc += (Complex64::i() * lt * Complex64::new(s * (e - 1.0), s * s / (2.0 * m))).exp() * w;
    }
    let closed = (2.0 * std::f64::consts::PI / lt).sqrt() * m.sqrt();
    assert!((acc.re - closed).abs() < 1e-12 && acc.im.abs() < 1e-12);
    assert!((closed - (std::f64::consts::PI / 5.0).sqrt()).abs() < 1e-15);
    assert!((closed - 0.79266).abs() < 1e-5);
}

#[test]
fn contour_and_airy_agree_in_the_sum() {
    let p = params(50.0);
    let cut = CutoffSpec::default();
    let a = Parametrix::new(&p, &cut, 48, SigmaMethod::Airy);
    let c = Parametrix::new(&p, &cut, 48, SigmaMethod::Contour);
    let s = (1.0 + p.a).sqrt();
    let (t, x, y) = (4.0 * s, 1.0, 4.0 / 3.0);
    let (va, vc) = (a.value(t, x, y).unwrap(), c.value(t, x, y).unwrap());
    assert!((va - vc).norm() < 1e-8 * va.norm(), "{va} vs {vc}");
    for w in [-2.0, -0.3, 0.0, 0.4] {
        let d = sigma_integral(60.0, w, SigmaMethod::Airy) - sigma_integral(60.0, w, SigmaMethod::Contour);
        assert!(d.norm() < 1e-9);
    }
}

#[test]
fn sigma_derivative_by_differences() {
    let ph = ReflectionPhase::new(2, params(100.0), 1.1);
    let d = 1e-5;
    for &(sigma, e, t, x) in &[(0.3, 1.02, 8.1, 0.97), (-0.7, 0.95, 7.9, 1.05)] {
        let fd = (ph.phi_tilde(sigma + d, e, t, x) - ph.phi_tilde(sigma - d, e, t, x)).re / (2.0 * d);
        assert!((fd - ph.d_sigma_phi_tilde(sigma, e, x)).abs() < 1e-8);
    }
}

#[test]
fn peak_sits_on_the_stationary_set() {
    // Near T = 4J√(1+a) the X-maximizer of |U| is 1 - Σ_c² up to O(λ^{-2/3}).
    let p = params(100.0);
    let par = Parametrix::new(&p, &CutoffSpec::default(), DEFAULT_ETA_NODES, SigmaMethod::Airy);
    let s = (1.0 + p.a).sqrt();
    let t = 4.0 * s + 0.05;
    let sigma_c = ReflectionPhase::new(1, p, 1.0).stationary_sigma(t);
    let xs = linspace(0.85, 1.05, 101);
    let best = xs
        .iter()
        .map(|&x| (x, par.value(t, x, 4.0 / 3.0 + t / 3.0 - 4.0 * s / 3.0).unwrap().norm()))
        .fold((0.0, 0.0), |acc, v| if v.1 > acc.1 { v } else { acc });
    let expect = 1.0 - sigma_c * sigma_c;
    assert!((best.0 - expect).abs() < 3.0 * p.lambda().powf(-2.0 / 3.0), "{} vs {expect}", best.0);
}

#[test]
fn agrees_with_spectral_sum_off_center() {
    let p = params(50.0);
    let cut = CutoffSpec::default();
    let spec = SpectralPropagator::new(&p, &cut, 64).unwrap();
    let par = Parametrix::new(&p, &cut, DEFAULT_ETA_NODES, SigmaMethod::Airy);
    let s = (1.0 + p.a).sqrt();
    // Between turning points U is ~1e-3 of its peak; compare on the peak scale.
    let peak = spec.value(4.0 * s, 1.0, 4.0 / 3.0).norm();
    for &(t, x, y) in &[(2.0 * s, 0.9, 0.62), (6.0 * s + 0.1, 1.0, 2.0)] {
        let (u, v) = (par.value(t, x, y).unwrap(), spec.value(t, x, y));
        assert!((u - v).norm() < 1e-4 * peak, "{u} vs {v}");
    }
}
