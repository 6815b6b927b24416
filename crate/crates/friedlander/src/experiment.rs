//! Shared pieces of the experiment runs: flat configs, output headers,
//! seeded probe points and the two-route comparisons.

use crate::bump::CutoffSpec;
use crate::error::{Error, Result};
use crate::parametrix::{Parametrix, SigmaMethod, DEFAULT_ETA_NODES};
use crate::propagator::SpectralPropagator;
use crate::region::ReflectionRegion;
use crate::wavepacket::PacketParams;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::io::Write;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Flat `key = value` configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub values: BTreeMap<String, String>,
}

impl Config {
    /// One `key = value` per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key = value", n + 1)))?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s.parse().map_err(|_| Error::Parse(format!("{key} = {s:?} is not a number"))),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s.parse().map_err(|_| Error::Parse(format!("{key} = {s:?} is not an unsigned integer"))),
        }
    }

    pub fn seed(&self) -> Result<u64> {
        self.u64_or("seed", 0)
    }
}

/// `# tool`, `# config k=v ...` and `# seed` lines.
pub fn header(tool: &str, config: &Config) -> Result<String> {
    let echo: Vec<String> = config.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
    Ok(format!("# {tool} {VERSION}\n# config {}\n# seed {}\n", echo.join(" "), config.seed()?))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random points where the J-th reflected wave is of full size: T̃ within
/// half the turning window, X̃ ∈ [-1.5, 0.5]λ^{-2/3} around X = 1 and
/// |Y - 4J/3| ≤ 1/(2λ).
pub fn probe_points(params: &PacketParams, j: u32, count: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64, f64)> {
    let lambda = params.lambda();
    let s = (1.0 + params.a).sqrt();
    let tt = 0.5 * (params.m / lambda).sqrt();
    let xs = lambda.powf(-2.0 / 3.0);
    let (t0, _, y0) = ReflectionRegion::standard(j).center(params);
    (0..count)
        .map(|_| {
            let t = t0 + 2.0 * s * rng.gen_range(-tt..=tt);
            let x = 1.0 + xs * rng.gen_range(-1.5..=0.5);
            let y = y0 + rng.gen_range(-0.5..=0.5) / lambda;
            (t.max(0.0), x, y)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub n_lo: i64,
    pub n_hi: i64,
    pub value: Complex64,
    pub abs_spectral: f64,
    pub rel_err: f64,
}

pub fn write_probe_csv<W: Write>(rows: &[ProbeRow], mut w: W) -> Result<()> {
    writeln!(w, "T,X,Y,N_lo,N_hi,re,im,abs,abs_spectral,rel_err")?;
    for r in rows {
        writeln!(
            w,
            "{:.12e},{:.12e},{:.12e},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.6e}",
            r.t,
            r.x,
            r.y,
            r.n_lo,
            r.n_hi,
            r.value.re,
            r.value.im,
            r.value.norm(),
            r.abs_spectral,
            r.rel_err
        )?;
    }
    Ok(())
}

/// Parametrix against the spectral sum at `per_j` seeded probes near each turning point.
pub fn crosscheck(params: &PacketParams, js: &[u32], per_j: usize, seed: u64) -> Result<Vec<ProbeRow>> {
    let cutoffs = CutoffSpec::default();
    let spectral = SpectralPropagator::new(params, &cutoffs, DEFAULT_ETA_NODES)?;
    let par = Parametrix::new(params, &cutoffs, DEFAULT_ETA_NODES, SigmaMethod::Airy);
    let mut rng = rng(seed);
    let mut rows = Vec::new();
    for &j in js {
        for (t, x, y) in probe_points(params, j, per_j, &mut rng) {
            let range = par.n_range(t);
            let value = par.value_with(t, x, y, range.clone())?;
            let reference = spectral.value(t, x, y);
            rows.push(ProbeRow {
                t,
                x,
                y,
                n_lo: *range.start(),
                n_hi: *range.end(),
                value,
                abs_spectral: reference.norm(),
                rel_err: (value - reference).norm() / reference.norm(),
            });
        }
    }
    Ok(rows)
}

/// Largest |U - U_J|/|U| over the probes, where U_J keeps only N = J.
pub fn dominance(par: &Parametrix, j: u32, probes: &[(f64, f64, f64)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(t, x, y) in probes {
        let terms = par.terms(t, x, y, par.n_range(t))?;
        let total: Complex64 = terms.iter().map(|p| p.1).sum();
        let others: Complex64 = terms.iter().filter(|p| p.0 != j as i64).map(|p| p.1).sum();
        worst = worst.max(others.norm() / total.norm());
    }
    Ok(worst)
}

/// h|U|λ^{1/3} at the center of R_J.
pub fn center_kappa(par: &Parametrix, j: u32) -> Result<f64> {
    let p = par.params;
    let (t, x, y) = ReflectionRegion::standard(j).center(&p);
    Ok(p.h * par.value(t, x, y)?.norm() * p.lambda().cbrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::{ARule, MRule};

    #[test]
    fn config_parsing() {
        let c = Config::parse("# run\nh = 1e-4\nseed=7 # trailing\n\n").unwrap();
        assert_eq!(c.get("h"), Some("1e-4"));
        assert_eq!(c.seed().unwrap(), 7);
        assert!(Config::parse("novalue").is_err());
        let h = header("airy-table", &c).unwrap();
        assert!(h.starts_with("# airy-table "));
        assert!(h.contains("# config h=1e-4 seed=7\n"));
    }

    #[test]
    fn probes_are_reproducible() {
        let p = PacketParams::for_lambda(50.0, ARule::CubeRoot, MRule::LambdaCubeRoot { factor: 1.0 }).unwrap();
        let a = probe_points(&p, 1, 5, &mut rng(3));
        let b = probe_points(&p, 1, 5, &mut rng(3));
        assert_eq!(a, b);
        let r = ReflectionRegion::standard(1);
        assert!(a.iter().all(|&(t, x, y)| r.contains(&p, t, x, y)));
    }
}
