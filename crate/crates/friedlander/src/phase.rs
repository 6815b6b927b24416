//! The phase function L(ω) = π + i log(A₋(ω)/A₊(ω)), its derivative, and the
//! table of Airy zeros ω_k with L(ω_k) = 2πk.

use crate::airy::{airy_pair, airy_real_pair, asymptotic_sums, a_pm_unchecked, Sign};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::sync::{Arc, Mutex, OnceLock};

/// b₁ in B(u) = Σ b_k u^{-k}.
pub const B1: f64 = 5.0 / 24.0;

/// Default number of zeros in the shared table.
pub const DEFAULT_K_MAX: usize = 200;

const ASYMPTOTIC_FROM: f64 = 8.0;
const DIRECT_UP_TO: f64 = 1.0;

// A₊ on the real line with Re A₊ replaced by Ai(-ω)/2, which is exact and
// carries full relative accuracy near the zeros.
fn a_plus(omega: f64) -> Complex64 {
    let im = a_pm_unchecked(Sign::Plus, omega).im;
    let re = 0.5 * airy_pair(Complex64::new(-omega, 0.0)).0.re;
    Complex64::new(re, im)
}

fn s_sum(omega: f64) -> Complex64 {
    let zeta = Complex64::new(0.0, -2.0 / 3.0 * omega * omega.sqrt());
    asymptotic_sums(zeta).0
}

fn leading(omega: f64) -> f64 {
    4.0 / 3.0 * omega * omega.sqrt() + PI / 2.0
}

/// L(ω) on the continuous branch with L(0) = π/3 and L(-∞) = 0.
pub fn big_l(omega: f64) -> f64 {
    if omega >= ASYMPTOTIC_FROM {
        return leading(omega) + 2.0 * s_sum(omega).arg();
    }
    let base = 2.0 * (Complex64::i() * a_plus(omega)).arg();
    if omega <= DIRECT_UP_TO {
        // On (-∞, 1] L stays inside (0, 2.8), so the principal value is the branch.
        return if base < 0.0 { base + 2.0 * PI } else { base };
    }
    let guess = leading(omega) - B1 / (omega * omega.sqrt());
    base + 2.0 * PI * ((guess - base) / (2.0 * PI)).round()
}

/// L′(ω) = 1 / (2π |A₊(ω)|²).
pub fn big_l_prime(omega: f64) -> f64 {
    if omega >= ASYMPTOTIC_FROM {
        return 2.0 * omega.sqrt() / s_sum(omega).norm_sqr();
    }
    1.0 / (2.0 * PI * a_plus(omega).norm_sqr())
}

/// `4/3 ω^{3/2} + π/2 - b₁ ω^{-3/2}` truncated after `n_terms` correction terms.
pub fn big_l_asymptotic(omega: f64, n_terms: u32) -> Result<f64> {
    if !(omega >= 1.0) {
        return Err(Error::domain(format!("asymptotic form of L needs ω >= 1, got {omega}")));
    }
    match n_terms {
        0 => Ok(leading(omega)),
        1 => Ok(leading(omega) - B1 / (omega * omega.sqrt())),
        n => Err(Error::domain(format!("only b1 is available, n_terms = {n}"))),
    }
}

/// B(u) = 4/3 u + π/2 - L(u^{2/3}) for u > 0.
pub fn b_remainder(u: f64) -> f64 {
    4.0 / 3.0 * u + PI / 2.0 - big_l(u.powf(2.0 / 3.0))
}

fn find_zero(k: usize) -> f64 {
    let target = 2.0 * PI * k as f64;
    let t = 3.0 * PI * (4.0 * k as f64 - 1.0) / 8.0;
    let mut w = t.powf(2.0 / 3.0) * (1.0 + 5.0 / 48.0 / (t * t));
    let (mut lo, mut hi) = (w - 0.5, w + 0.5);
    while big_l(lo) > target {
        lo -= 0.5;
    }
    while big_l(hi) < target {
        hi += 0.5;
    }
    for _ in 0..60 {
        let f = big_l(w) - target;
        if f > 0.0 {
            hi = w;
        } else {
            lo = w;
        }
        let mut next = w - f / big_l_prime(w);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - w).abs();
        w = next;
        if step < 1e-15 * w {
            break;
        }
    }
    for _ in 0..2 {
        let (a, d) = airy_real_pair(-w);
        if d != 0.0 {
            w += a / d;
        }
    }
    w
}

/// Airy zeros ω_k (Ai(-ω_k) = 0) with L′ computed two ways.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTable {
    pub zeros: Vec<f64>,
    /// L′(ω_k) from the phase derivative.
    pub lprime: Vec<f64>,
    /// Ai′(-ω_k)², which equals L′(ω_k)/(2π).
    pub aiprime_sq: Vec<f64>,
}

impl PhaseTable {
    pub fn new(k_max: usize) -> Self {
        let zeros: Vec<f64> = (1..=k_max).map(find_zero).collect();
        let lprime = zeros.iter().map(|&w| big_l_prime(w)).collect();
        let aiprime_sq = zeros
            .iter()
            .map(|&w| {
                let d = airy_real_pair(-w).1;
                d * d
            })
            .collect();
        PhaseTable { zeros, lprime, aiprime_sq }
    }

    /// Shared table with [`DEFAULT_K_MAX`] zeros.
    pub fn shared() -> &'static PhaseTable {
        static TABLE: OnceLock<PhaseTable> = OnceLock::new();
        TABLE.get_or_init(|| PhaseTable::new(DEFAULT_K_MAX))
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn k_max(&self) -> usize {
        self.zeros.len()
    }

    /// ω_k, 1-based.
    pub fn airy_zero(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.len() {
            return Err(Error::domain(format!("zero index {k} outside 1..={}", self.len())));
        }
        Ok(self.zeros[k - 1])
    }

    pub fn lprime_at(&self, k: usize) -> Result<f64> {
        self.airy_zero(k).map(|_| self.lprime[k - 1])
    }

    /// Largest stored zero.
    pub fn last_zero(&self) -> f64 {
        self.zeros.last().copied().unwrap_or(0.0)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,omega_k,L_prime,ai_prime_sq")?;
        for (i, ((z, l), a)) in self.zeros.iter().zip(&self.lprime).zip(&self.aiprime_sq).enumerate() {
            writeln!(w, "{},{:.16e},{:.16e},{:.16e}", i + 1, z, l, a)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut table = PhaseTable { zeros: vec![], lprime: vec![], aiprime_sq: vec![] };
        let mut header = false;
        for (n, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header {
                let cols: Vec<&str> = line.split(',').map(str::trim).collect();
                if cols != ["k", "omega_k", "L_prime", "ai_prime_sq"] {
                    return Err(Error::Parse(format!("line {}: unexpected header {line:?}", n + 1)));
                }
                header = true;
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 4 {
                return Err(Error::Parse(format!("line {}: expected 4 fields", n + 1)));
            }
            let k: usize = f[0].parse().map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
            if k != table.zeros.len() + 1 {
                return Err(Error::Parse(format!("line {}: k = {k} out of sequence", n + 1)));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse().map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))
            };
            table.zeros.push(num(f[1])?);
            table.lprime.push(num(f[2])?);
            table.aiprime_sq.push(num(f[3])?);
        }
        if !header {
            return Err(Error::Parse("missing header row".into()));
        }
        Ok(table)
    }
}

/// A table holding every zero up to `omega_max`; grown on demand and shared.
pub fn table_covering(omega_max: f64) -> Arc<PhaseTable> {
    static GROWN: OnceLock<Mutex<Arc<PhaseTable>>> = OnceLock::new();
    let cell = GROWN.get_or_init(|| Mutex::new(Arc::new(PhaseTable::shared().clone())));
    let mut cur = cell.lock().expect("phase table cache poisoned");
    if cur.last_zero() <= omega_max {
        let k = (big_l(omega_max) / (2.0 * PI)).ceil() as usize + 2;
        *cur = Arc::new(PhaseTable::new(k.max(cur.len())));
    }
    cur.clone()
}

/// ω_k from the shared table, `1 <= k <= 200`.
pub fn airy_zero(k: usize) -> Result<f64> {
    PhaseTable::shared().airy_zero(k)
}
