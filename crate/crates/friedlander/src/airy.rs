//! Airy function Ai and its derivative for complex arguments.
//!
//! Three regimes:
//! - `|z| <= 2`: Maclaurin series in plain `f64`;
//! - `2 < |z| <= 8`: Maclaurin series in double-double, so the cancellation
//!   between the two power series on the positive axis stays harmless;
//! - real `2 < |x| <= 8`: Taylor expansion about anchors spaced 1/4 apart,
//!   whose values come from the double-double series;
//! - `|z| > 8`: Poincaré asymptotic expansion for `|arg z| <= 2π/3`, and the
//!   connection formula `Ai(-w) = A₊(w) + A₋(w)` on the remaining sector.

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Largest `|z|` accepted by [`ai`], [`ai_prime`] and [`a_pm`].
pub const ENVELOPE: f64 = 50.0;

const F64_SERIES_RADIUS: f64 = 2.0;
const SERIES_RADIUS: f64 = 8.0;

/// Ai(0) = 1/(3^{2/3} Γ(2/3)) as a double-double.
pub const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
/// -Ai'(0) = 1/(3^{1/3} Γ(1/3)) as a double-double.
pub const NEG_AI_PRIME0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);

/// Selects A₊ or A₋.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

fn check(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("non-finite Airy argument {z}")));
    }
    let r = z.norm();
    if r > ENVELOPE {
        return Err(Error::Envelope { modulus: r, limit: ENVELOPE });
    }
    Ok(())
}

/// Ai(z) for `|z| <= 50`.
///
/// ```
/// use friedlander::airy::ai;
/// use num_complex::Complex64;
/// let v = ai(Complex64::new(0.0, 0.0)).unwrap();
/// assert!((v.re - 0.355028053887817).abs() < 1e-15);
/// ```
pub fn ai(z: Complex64) -> Result<Complex64> {
    check(z)?;
    Ok(airy_pair(z).0)
}

/// Ai'(z) for `|z| <= 50`.
pub fn ai_prime(z: Complex64) -> Result<Complex64> {
    check(z)?;
    Ok(airy_pair(z).1)
}

/// `(Ai(z), Ai'(z))` for `|z| <= 50`.
pub fn ai_pair(z: Complex64) -> Result<(Complex64, Complex64)> {
    check(z)?;
    Ok(airy_pair(z))
}

/// A±(ω) = e^{∓iπ/3} Ai(e^{∓iπ/3} ω) for real `|ω| <= 50`.
pub fn a_pm(sign: Sign, omega: f64) -> Result<Complex64> {
    check(Complex64::new(omega, 0.0))?;
    Ok(a_pm_unchecked(sign, omega))
}

pub(crate) fn a_pm_unchecked(sign: Sign, omega: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, -sign.as_f64() * PI / 3.0);
    rot * airy_pair(rot * omega).0
}

/// `(Ai(z), Ai'(z))` without the envelope check.
///
/// Accuracy is governed by the asymptotic expansion beyond `|z| = 8` and
/// improves with `|z|`; the only limit is overflow of `exp(-ζ)` off the real
/// axis. Real input yields an exactly real result.
pub fn airy_pair(z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    if z.im == 0.0 && r > F64_SERIES_RADIUS && r <= SERIES_RADIUS {
        let (a, d) = taylor_real(z.re);
        return (Complex64::new(a, 0.0), Complex64::new(d, 0.0));
    }
    let (a, d) = if r <= F64_SERIES_RADIUS {
        series_f64(z)
    } else if r <= SERIES_RADIUS {
        series_dd(z)
    } else {
        asymptotic(z)
    };
    if z.im == 0.0 {
        (Complex64::new(a.re, 0.0), Complex64::new(d.re, 0.0))
    } else {
        (a, d)
    }
}

const ANCHOR_STEP: f64 = 0.25;

fn anchors() -> &'static [(f64, f64)] {
    static ANCHORS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    ANCHORS.get_or_init(|| {
        let n = (2.0 * SERIES_RADIUS / ANCHOR_STEP).round() as usize;
        (0..=n)
            .map(|i| {
                let x = -SERIES_RADIUS + ANCHOR_STEP * i as f64;
                let (a, d) = series_dd(Complex64::new(x, 0.0));
                (a.re, d.re)
            })
            .collect()
    })
}

// y'' = x y about x0: c_{n+2} = (x0 c_n + c_{n-1}) / ((n+1)(n+2)).
fn taylor_real(x: f64) -> (f64, f64) {
    let i = ((x + SERIES_RADIUS) / ANCHOR_STEP).round() as usize;
    let x0 = -SERIES_RADIUS + ANCHOR_STEP * i as f64;
    let (c0, c1) = anchors()[i];
    let d = x - x0;
    let (mut cm1, mut cn, mut cn1) = (0.0, c0, c1);
    let mut val = c0 + c1 * d;
    let mut der = c1;
    let mut pw = d;
    for n in 0..40 {
        let nf = n as f64;
        let c2 = (x0 * cn + cm1) / ((nf + 1.0) * (nf + 2.0));
        der += (nf + 2.0) * c2 * pw;
        pw *= d;
        let term = c2 * pw;
        val += term;
        if term.abs() <= 1e-18 * val.abs() && (nf + 2.0) * c2 * pw / d.abs().max(1e-300) <= 1e-18 * der.abs() {
            break;
        }
        cm1 = cn;
        cn = cn1;
        cn1 = c2;
    }
    (val, der)
}

/// Ai(x) for real x, no envelope check.
pub fn ai_real(x: f64) -> f64 {
    airy_pair(Complex64::new(x, 0.0)).0.re
}

/// `(Ai(x), Ai'(x))` for real x, no envelope check.
pub fn airy_real_pair(x: f64) -> (f64, f64) {
    let (a, d) = airy_pair(Complex64::new(x, 0.0));
    (a.re, d.re)
}

// Ai = c1 f - c2 g with f = Σ t_k, g = z Σ s_k,
// f' = z² Σ t_k/(3k+2), g' = Σ (3k+1) s_k,
// t_{k+1} = t_k z³/((3k+2)(3k+3)), s_{k+1} = s_k z³/((3k+3)(3k+4)).
fn series_f64(z: Complex64) -> (Complex64, Complex64) {
    let z3 = z * z * z;
    let mut t = Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(1.0, 0.0);
    let (mut f, mut fp, mut g, mut gp) = (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
    let mut biggest: f64 = 1.0;
    for k in 0..200 {
        let kf = k as f64;
        f += t;
        fp += t / (3.0 * kf + 2.0);
        g += s;
        gp += s * (3.0 * kf + 1.0);
        let size = t.norm() + s.norm() * (3.0 * kf + 1.0);
        biggest = biggest.max(size);
        if k > 1 && size < 1e-18 * biggest {
            break;
        }
        t = t * z3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        s = s * z3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
    }
    let c1 = AI0.to_f64();
    let c2 = NEG_AI_PRIME0.to_f64();
    let ai = f * c1 - z * g * c2;
    let aip = z * z * fp * c1 - gp * c2;
    (ai, aip)
}

fn series_dd(z: Complex64) -> (Complex64, Complex64) {
    let zd = CDd::from_c64(z);
    let z2 = zd * zd;
    let z3 = z2 * zd;
    let one = CDd::new(Dd::from_f64(1.0), Dd::ZERO);
    let mut t = one;
    let mut s = one;
    let (mut f, mut fp, mut g, mut gp) = (CDd::ZERO, CDd::ZERO, CDd::ZERO, CDd::ZERO);
    let mut biggest: f64 = 1.0;
    for k in 0..300 {
        let kf = k as f64;
        f = f + t;
        fp = fp + t.div_f64(3.0 * kf + 2.0);
        g = g + s;
        gp = gp + s.scale(3.0 * kf + 1.0);
        let size = t.norm_f64() + s.norm_f64() * (3.0 * kf + 1.0);
        biggest = biggest.max(size);
        if k > 1 && size < 1e-34 * biggest {
            break;
        }
        t = (t * z3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        s = (s * z3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
    }
    let ai = f.mul_dd(AI0) - (zd * g).mul_dd(NEG_AI_PRIME0);
    let aip = (z2 * fp).mul_dd(AI0) - gp.mul_dd(NEG_AI_PRIME0);
    (ai.to_c64(), aip.to_c64())
}

fn asymptotic(z: Complex64) -> (Complex64, Complex64) {
    if z.arg().abs() <= 2.0 * PI / 3.0 {
        return asymptotic_sector(z);
    }
    let w = -z;
    let rp = Complex64::from_polar(1.0, PI / 3.0);
    let rm = rp.conj();
    let (ap, dp) = asymptotic_sector(w * rp);
    let (am, dm) = asymptotic_sector(w * rm);
    let ai = rp * ap + rm * am;
    let aip = -(rp * rp * dp + rm * rm * dm);
    (ai, aip)
}

/// Sums Σ (-1)^k u_k ζ^{-k} and Σ (-1)^k v_k ζ^{-k}, stopping at the smallest term.
pub(crate) fn asymptotic_sums(zeta: Complex64) -> (Complex64, Complex64) {
    let inv = 1.0 / zeta;
    let mut su = Complex64::new(1.0, 0.0);
    let mut sv = Complex64::new(1.0, 0.0);
    let mut u = 1.0f64;
    let mut pw = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        pw = -pw * inv;
        let tu = pw * u;
        let tv = pw * v;
        let size = tu.norm().max(tv.norm());
        if size > last {
            break;
        }
        su += tu;
        sv += tv;
        last = size;
        if size < 1e-18 {
            break;
        }
    }
    (su, sv)
}

fn asymptotic_sector(z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    let th = z.arg();
    let zeta = Complex64::from_polar(2.0 / 3.0 * r * r.sqrt(), 1.5 * th);
    let quarter = Complex64::from_polar(r.powf(0.25), 0.25 * th);
    let (su, sv) = asymptotic_sums(zeta);
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    (pref / quarter * su, -pref * quarter * sv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // Reference values from a 50-digit evaluation.
    const TABLE: [((f64, f64), (f64, f64), (f64, f64)); 8] = [
        ((1.5, 0.7), (0.0451059383295320034, -0.0636252203677260743), (-0.0770857559675753936, 0.0767438557163888486)),
        ((-6.0, 2.0), (-18.015579029207557, 16.5583365577272679), (47.4846461922968769, 38.4818187353903958)),
        ((12.0, -5.0), (2.10018978476420273e-13, -7.87272547116012544e-13), (-1.95202742895889697e-13, 2.94428859338803722e-12)),
        ((-30.0, 0.5), (-0.670384935309849786, 1.73319925110122713), (9.59799166923707995, 3.57666192649204169)),
        ((5.0, 0.0), (0.000108344428136074417, 0.0), (-0.000247413890868462476, 0.0)),
        ((-20.0, 0.0), (-0.17640612707798469, 0.0), (0.892862856736471238, 0.0)),
        ((0.3, -0.2), (0.277102569275876657, 0.0493021172534681797), (-0.249230583350504497, -0.0173504677791689193)),
        ((-3.0, -7.0), (-164029.731227571571, 27636.0079875373316), (184224.245774585376, -414407.985157704907)),
    ];

    #[test]
    fn reference_table() {
        for &((x, y), (ar, ai_), (dr, di)) in TABLE.iter() {
            let (a, d) = ai_pair(c(x, y)).unwrap();
            assert!(rel(a, c(ar, ai_)) < 1e-12, "Ai({x},{y}) = {a}");
            assert!(rel(d, c(dr, di)) < 1e-12, "Ai'({x},{y}) = {d}");
        }
    }

    #[test]
    fn value_at_origin() {
        let a = ai(c(0.0, 0.0)).unwrap();
        assert!((a.re - 0.355028053887817239).abs() < 1e-16);
        let d = ai_prime(c(0.0, 0.0)).unwrap();
        assert!((d.re + 0.258819403792806798).abs() < 1e-16);
    }

    #[test]
    fn first_zero() {
        let a = ai(c(-2.3381074104597670385, 0.0)).unwrap();
        assert!(a.norm() < 1e-15);
    }

    #[test]
    fn real_axis_is_real() {
        for i in 0..200 {
            let x = -49.0 + 0.49 * i as f64;
            let (a, d) = ai_pair(c(x, 0.0)).unwrap();
            assert_eq!(a.im, 0.0);
            assert_eq!(d.im, 0.0);
        }
    }

    #[test]
    fn positive_five_is_small() {
        let a = ai(c(5.0, 0.0)).unwrap().re;
        assert!(a > 0.0 && a < 1e-3);
    }

    #[test]
    fn finite_difference() {
        let (x, dlt) = (1.0, 1e-5);
        let fd = (ai(c(x + dlt, 0.0)).unwrap() - ai(c(x - dlt, 0.0)).unwrap()) / (2.0 * dlt);
        assert!((fd - ai_prime(c(x, 0.0)).unwrap()).norm() < 1e-6);
    }

    #[test]
    fn taylor_matches_series() {
        for i in 0..=640 {
            let x = -8.0 + 16.0 * i as f64 / 640.0;
            if x.abs() <= 2.0 {
                continue;
            }
            let (a, d) = taylor_real(x);
            let (sa, sd) = series_dd(Complex64::new(x, 0.0));
            assert!((a - sa.re).abs() <= 1e-14 * sa.re.abs().max(1e-3), "{x}: {a} vs {}", sa.re);
            assert!((d - sd.re).abs() <= 1e-14 * sd.re.abs().max(1e-3), "{x}: {d} vs {}", sd.re);
        }
    }

    #[test]
    fn seam_agreement() {
        for ir in 0..=10 {
            let r = 7.5 + 0.1 * ir as f64;
            for it in 0..72 {
                let th = -PI + 2.0 * PI * (it as f64 + 0.5) / 72.0;
                let z = Complex64::from_polar(r, th);
                let (sa, sd) = series_dd(z);
                let (aa, ad) = asymptotic(z);
                assert!(rel(sa, aa) < 1e-10, "Ai seam at {z}: {sa} vs {aa}");
                assert!(rel(sd, ad) < 1e-10, "Ai' seam at {z}: {sd} vs {ad}");
            }
        }
    }

    #[test]
    fn inner_seam_agreement() {
        for it in 0..36 {
            let th = -PI + 2.0 * PI * (it as f64 + 0.5) / 36.0;
            let z = Complex64::from_polar(2.0, th);
            let (fa, fd) = series_f64(z);
            let (da, dd) = series_dd(z);
            assert!(rel(fa, da) < 1e-13);
            assert!(rel(fd, dd) < 1e-13);
        }
    }

    #[test]
    fn envelope_is_enforced() {
        assert!(matches!(ai(c(51.0, 0.0)), Err(Error::Envelope { .. })));
        assert!(matches!(ai_prime(c(0.0, -50.5)), Err(Error::Envelope { .. })));
        assert!(ai(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn wronskian_with_rotations() {
        // Ai(z) + ω Ai(ωz) + ω² Ai(ω²z) = 0, ω = e^{2πi/3}
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        for &z in &[c(1.0, 0.5), c(-4.0, 3.0), c(9.0, -2.0), c(-20.0, 1.0)] {
            let s = ai(z).unwrap() + w * ai(w * z).unwrap() + w * w * ai(w * w * z).unwrap();
            let scale = ai(z).unwrap().norm().max(ai(w * z).unwrap().norm());
            assert!(s.norm() < 1e-10 * scale, "{z}: {s}");
        }
    }
}
