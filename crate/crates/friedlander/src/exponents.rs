//! Exact arithmetic on Strichartz exponents
//!
//! Pairs are stored through their reciprocals so that q = ∞ or r = ∞ is just 0.

use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// An exponent in [1, ∞].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Finite(Rational64),
    Infinite,
}

impl Exponent {
    pub fn recip(&self) -> Rational64 {
        match self {
            Exponent::Finite(v) => v.recip(),
            Exponent::Infinite => Rational64::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(v) => *v.numer() as f64 / *v.denom() as f64,
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl From<i64> for Exponent {
    fn from(v: i64) -> Self {
        Exponent::Finite(Rational64::from_integer(v))
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// `inf`, an integer, or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent '{s}'")));
        let v = match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d == 0 {
                    return Err(Error::Parse(format!("zero denominator in '{s}'")));
                }
                rat(parse(n)?, d)
            }
            None => Rational64::from_integer(parse(s)?),
        };
        Ok(Exponent::Finite(v))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrichartzPair {
    pub q: Exponent,
    pub r: Exponent,
    pub d: u32,
}

impl StrichartzPair {
    pub fn new(q: Exponent, r: Exponent, d: u32) -> Result<Self> {
        let half = rat(1, 2);
        if q.recip() > half || r.recip() > half || q.recip() < Rational64::zero() || r.recip() < Rational64::zero() {
            return Err(Error::validation(format!("need q, r >= 2, got ({q}, {r})")));
        }
        if d < 2 {
            return Err(Error::validation(format!("need d >= 2, got {d}")));
        }
        Ok(StrichartzPair { q, r, d })
    }

    pub fn inv_q(&self) -> Rational64 {
        self.q.recip()
    }

    pub fn inv_r(&self) -> Rational64 {
        self.r.recip()
    }

    /// 1/2 - 1/r.
    fn gap(&self) -> Rational64 {
        rat(1, 2) - self.inv_r()
    }

    /// β = d(1/2 - 1/r) - 1/q.
    pub fn beta(&self) -> Rational64 {
        Rational64::from_integer(self.d as i64) * self.gap() - self.inv_q()
    }

    /// α with 1/q = α(1/2 - 1/r); undefined at r = 2.
    pub fn alpha(&self) -> Option<Rational64> {
        let g = self.gap();
        (!g.is_zero()).then(|| self.inv_q() / g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    Free,
    QuarterLoss,
    DoiLine,
    Thm1,
    Ilp3,
    Doi2d,
    Thm2,
}

impl Region {
    pub const ALL: [Region; 7] = [Region::Free, Region::QuarterLoss, Region::DoiLine, Region::Thm1, Region::Ilp3, Region::Doi2d, Region::Thm2];

    pub fn name(&self) -> &'static str {
        match self {
            Region::Free => "free",
            Region::QuarterLoss => "quarter_loss",
            Region::DoiLine => "doi_line",
            Region::Thm1 => "thm1",
            Region::Ilp3 => "ilp3",
            Region::Doi2d => "doi2d",
            Region::Thm2 => "thm2",
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Region::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| Error::Parse(format!("unknown region '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionCheck {
    pub satisfied: bool,
    /// Bound on 1/q minus 1/q.
    pub slack: Rational64,
}

fn needs_r_at_least_4(region: Region, p: &StrichartzPair) -> Result<()> {
    if p.inv_r() > rat(1, 4) {
        return Err(Error::domain(format!("{} needs r >= 4, got r = {}", region.name(), p.r)));
    }
    Ok(())
}

/// The largest 1/q allowed by the region at this r and d.
pub fn bound(region: Region, p: &StrichartzPair) -> Result<Rational64> {
    let half = rat(1, 2);
    let dm = rat(p.d as i64 - 1, 2);
    let g = p.gap();
    // (1 - 4/r)/(12 - 24/r) (1/2 - 1/r) collapses to (1 - 4/r)/24.
    let doi_loss = (Rational64::one() - p.inv_r() * 4) / 24;
    Ok(match region {
        Region::Free => dm * g,
        Region::QuarterLoss => (dm - rat(1, 4)) * g,
        Region::DoiLine => {
            needs_r_at_least_4(region, p)?;
            let q4 = dm * rat(1, 4);
            let qinf = (dm - rat(1, 12)) * half;
            qinf + (q4 - qinf) * p.inv_r() * 4
        }
        Region::Thm1 => (half - rat(1, 10)) * g,
        Region::Ilp3 => (half - rat(1, 9)) * g,
        Region::Doi2d => {
            needs_r_at_least_4(region, p)?;
            half * g - doi_loss
        }
        Region::Thm2 => {
            needs_r_at_least_4(region, p)?;
            dm * g - doi_loss
        }
    })
}

pub fn region(region: Region, p: &StrichartzPair) -> Result<RegionCheck> {
    let slack = bound(region, p)? - p.inv_q();
    Ok(RegionCheck { satisfied: slack >= Rational64::zero(), slack })
}

/// 5/q + 2/r ≤ 1, for d = 2.
pub fn thm1_condition(p: &StrichartzPair) -> Result<bool> {
    if p.d != 2 {
        return Err(Error::domain(format!("the 5/q + 2/r condition is two-dimensional, got d = {}", p.d)));
    }
    Ok(p.inv_q() * 5 + p.inv_r() * 2 <= Rational64::one())
}

/// 4/q + 4/(3r) - 2(d-2)(1/2 - 1/r) - 5/6 ≤ 0, for r ≥ 4.
pub fn thm2_condition(p: &StrichartzPair) -> Result<bool> {
    needs_r_at_least_4(Region::Thm2, p)?;
    let d2 = Rational64::from_integer(p.d as i64 - 2);
    let lhs = p.inv_q() * 4 + rat(4, 3) * p.inv_r() - d2 * 2 * p.gap() - rat(5, 6);
    Ok(lhs <= Rational64::zero())
}

/// ‖φ_h‖_{L^r} ∼ h^{(d-2)/2 (1/r - 1/2)}.
pub fn knapp_exponent(d: u32, r: Exponent) -> Result<Rational64> {
    if d < 3 {
        return Err(Error::domain(format!("the Knapp factor needs d >= 3, got {d}")));
    }
    Ok(rat(d as i64 - 2, 2) * (r.recip() - rat(1, 2)))
}

/// a as a power of h.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ABudget {
    /// a = h^{1/3}.
    CubeRoot,
    /// a = h^{1/2 - ε}.
    HalfMinusEps(Rational64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MBudget {
    /// M = λ^{1/3}.
    LambdaCubeRoot,
    /// M = M_a.
    Ma,
}

/// Net power of λ in rhs/lhs of
/// (M_a √(M/λ))^{1/q} λ^{-5/(3r) - 1/3} ≲ λ^{1-1/q-2/r} M_a^{1/2-1/r-2/q} λ^{-5/4} M^{1/4}.
/// A counterexample exists for the pair iff the result is negative.
pub fn budget_exponent(p: &StrichartzPair, a: ABudget, m: MBudget) -> Result<Rational64> {
    // Every scale as a power of 1/h.
    let alpha = match a {
        ABudget::CubeRoot => rat(1, 3),
        ABudget::HalfMinusEps(eps) => {
            if eps < Rational64::zero() || eps >= rat(1, 6) {
                return Err(Error::domain(format!("need 0 <= eps < 1/6, got {eps}")));
            }
            rat(1, 2) - eps
        }
    };
    let lam = Rational64::one() - rat(3, 2) * alpha;
    let ma = alpha / 2;
    let mm = match (a, m) {
        (ABudget::CubeRoot, _) => lam / 3,
        (ABudget::HalfMinusEps(_), MBudget::Ma) => ma,
        (ABudget::HalfMinusEps(_), MBudget::LambdaCubeRoot) => {
            return Err(Error::domain("a = h^(1/2-eps) is only paired with M = M_a"));
        }
    };
    let (iq, ir) = (p.inv_q(), p.inv_r());
    let lhs = iq * (ma + (mm - lam) / 2) + lam * (-rat(5, 3) * ir - rat(1, 3));
    let rhs = lam * (Rational64::one() - iq - ir * 2) + ma * (rat(1, 2) - ir - iq * 2) - rat(5, 4) * lam + mm / 4;
    Ok((rhs - lhs) / lam)
}

fn cell(r: Result<Rational64>) -> String {
    r.map(|v| v.to_string()).unwrap_or_else(|_| "n/a".into())
}

/// One CSV row per pair with the exact slack of every region.
pub fn slack_table(pairs: &[StrichartzPair]) -> String {
    let mut out = String::from("q,r,d");
    for reg in Region::ALL {
        out += ",";
        out += reg.name();
    }
    out += "\n";
    for p in pairs {
        out += &format!("{},{},{}", p.q, p.r, p.d);
        for reg in Region::ALL {
            out += ",";
            out += &cell(region(reg, p).map(|c| c.slack));
        }
        out += "\n";
    }
    out
}

/// Reads `q r [d]` per line (commas or spaces), `#` comments; d defaults to 2.
pub fn parse_pairs(text: &str) -> Result<Vec<StrichartzPair>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        if !(2..=3).contains(&f.len()) {
            return Err(Error::Parse(format!("line {}: expected 'q r [d]'", n + 1)));
        }
        let d = match f.get(2) {
            Some(s) => s.parse::<u32>().map_err(|_| Error::Parse(format!("line {}: bad d '{s}'", n + 1)))?,
            None => 2,
        };
        out.push(StrichartzPair::new(f[0].parse()?, f[1].parse()?, d)?);
    }
    Ok(out)
}
