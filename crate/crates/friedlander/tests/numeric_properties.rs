use friedlander::airy::{a_pm, ai_real, airy_real_pair, Sign};
use friedlander::experiment::Config;
use friedlander::norms::{spatial_norm, time_norm};
use friedlander::parametrix::ReflectionPhase;
use friedlander::quadrature::composite;
use friedlander::region::{dominant_reflection, ReflectionRegion};
use friedlander::wavepacket::{ARule, MRule, PacketParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn packet() -> impl Strategy<Value = PacketParams> {
    (30.0..400.0f64, 1.0..3.0f64)
        .prop_map(|(lambda, f)| PacketParams::for_lambda(lambda, ARule::CubeRoot, MRule::LambdaCubeRoot { factor: f }).unwrap())
}

fn slice(nx: usize, ny: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| Complex64::new(a, b)), nx * ny)
}

fn axis(n: usize, len: f64) -> Vec<f64> {
    (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ai_splits_into_a_plus_a_minus(z in -10.0..10.0f64) {
        let (plus, minus) = (a_pm(Sign::Plus, z).unwrap(), a_pm(Sign::Minus, z).unwrap());
        // For z < 0 the two terms are exponentially large and cancel.
        let scale = plus.norm().max(ai_real(-z).abs()).max(1.0);
        prop_assert!((plus + minus - ai_real(-z)).norm() <= 1e-10 * scale);
        prop_assert!((minus - plus.conj()).norm() <= 1e-12 * scale);
    }

    #[test]
    fn airy_square_integral(w in 0.0..10.0f64) {
        let mut sq = 0.0;
        for (x, wt) in composite(0.0, w + 16.0, 200, 20) {
            let v = ai_real(x - w);
            sq += v * v * wt;
        }
        let (a, d) = airy_real_pair(-w);
        prop_assert!((sq - (w * a * a + d * d)).abs() <= 1e-8);
    }

    #[test]
    fn frames_roundtrip(p in packet(), t in 0.0..3.0f64, x in 0.0..2.0f64, y in -3.0..3.0f64) {
        let (lt, lx, ly) = p.packet_to_lab(t, x, y);
        let (t2, x2, y2) = p.lab_to_packet(lt, lx, ly);
        prop_assert!((t2 - t).abs() <= 1e-14 * (1.0 + t.abs()) * 10.0);
        prop_assert!((x2 - x).abs() <= 1e-14 * (1.0 + x.abs()));
        prop_assert!((y2 - y).abs() <= 1e-12 * (1.0 + y.abs() + t.abs()));
    }

    #[test]
    fn spatial_norm_grows_with_r_on_unit_box(v in slice(6, 5), r in 1.0..6.0f64, dr in 0.5..4.0f64) {
        // Unit area: ‖f‖_r ≤ ‖f‖_s for r ≤ s.
        let (x, y) = (axis(6, 1.0), axis(5, 1.0));
        let a = spatial_norm(&v, &x, &y, r).unwrap();
        let b = spatial_norm(&v, &x, &y, r + dr).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-12));
    }

    #[test]
    fn spatial_norm_holder(v in slice(6, 5), w in slice(6, 5), p in 1.1..5.0f64) {
        let (x, y) = (axis(6, 2.0), axis(5, 0.5));
        let q = p / (p - 1.0);
        let prod: Vec<Complex64> = v.iter().zip(&w).map(|(a, b)| Complex64::new(a.norm() * b.norm(), 0.0)).collect();
        let lhs = spatial_norm(&prod, &x, &y, 1.0).unwrap();
        let rhs = spatial_norm(&v, &x, &y, p).unwrap() * spatial_norm(&w, &x, &y, q).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn sup_norm_bounds_every_lq(n in prop::collection::vec(0.0..5.0f64, 8), q in 1.0..8.0f64) {
        let t = axis(8, 1.0);
        let sup = time_norm(&t, &n, f64::INFINITY).unwrap();
        prop_assert!(time_norm(&t, &n, q).unwrap() <= sup * (1.0 + 1e-12));
    }

    #[test]
    fn phi_tilde_has_nonnegative_imaginary_part(
        p in packet(),
        n in -3i64..=6,
        eta in 0.5..2.0f64,
        sigma in -3.0..3.0f64,
        e in 0.0..2.5f64,
        t in 0.0..10.0f64,
        x in 0.0..2.0f64,
    ) {
        let ph = ReflectionPhase::new(n, p, eta);
        prop_assert!(ph.phi_tilde(sigma, e, t, x).im >= 0.0);
        prop_assert!(ph.phi(sigma, 0.3, e, t, x).im >= 0.0);
    }

    #[test]
    fn regions_are_disjoint(p in packet(), t in 0.0..12.0f64, x in 0.7..1.3f64, y in -0.5..6.0f64) {
        let hits: Vec<u32> = (0..=8).filter(|&j| ReflectionRegion::standard(j).contains(&p, t, x, y)).collect();
        prop_assert!(hits.len() <= 1);
        let found = dominant_reflection(&p, t, x, y, (0.2, 0.2, 0.25));
        if let Some(j) = found {
            prop_assert_eq!(hits, vec![j]);
        } else {
            prop_assert!(hits.iter().all(|&j| j as f64 > p.m_a()));
        }
    }

    #[test]
    fn shrinking_eps_shrinks_the_region(p in packet(), j in 0u32..4, f in 0.1..1.0f64, t in -1.0..16.0f64, x in 0.7..1.3f64, y in -0.5..6.0f64) {
        let big = ReflectionRegion::new(j, 0.2, 0.2, 0.25).unwrap();
        let small = ReflectionRegion::new(j, 0.2 * f, 0.2 * f, 0.25 * f).unwrap();
        prop_assert!(!small.contains(&p, t, x, y) || big.contains(&p, t, x, y));
    }

    #[test]
    fn config_roundtrip(entries in prop::collection::btree_map("[a-z_]{1,8}", "[a-z0-9.^()/-]{1,10}", 0..6)) {
        let text: String = entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let c = Config::parse(&text).unwrap();
        prop_assert_eq!(c.values, entries);
    }
}
