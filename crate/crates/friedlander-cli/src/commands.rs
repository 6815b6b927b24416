use friedlander::bump::{BumpFunction, CutoffSpec};
use friedlander::experiment::{self, header, write_probe_csv, Config};
use friedlander::field::{linspace, ComplexField};
use friedlander::norms::{fit_scaling, strichartz_scan as scan};
use friedlander::parametrix::{Parametrix, SigmaMethod, DEFAULT_ETA_NODES};
use friedlander::phase::PhaseTable;
use friedlander::poisson::{poisson_lhs, poisson_rhs};
use friedlander::propagator::{SpectralPropagator, DEFAULT_ETA_NODES as SPECTRAL_ETA_NODES};
use friedlander::wavepacket::{ARule, MRule, PacketParams};
use friedlander::{exponents as ex, Error, Result};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Collects output and writes it to a file or stdout at the end.
pub struct Sink {
    path: Option<PathBuf>,
    pub buf: Vec<u8>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self> {
        if let Some(dir) = path.and_then(|p| p.parent()).filter(|d| !d.as_os_str().is_empty()) {
            if !dir.is_dir() {
                return Err(Error::Validation(format!("output directory {} does not exist", dir.display())));
            }
        }
        Ok(Sink { path: path.map(Path::to_path_buf), buf: Vec::new() })
    }

    pub fn finish(self) -> Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, &self.buf).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
            None => Ok(std::io::stdout().write_all(&self.buf)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Spectral,
    Reflections,
}

fn list(config: &Config, key: &str, default: &str) -> Result<Vec<f64>> {
    config
        .get(key)
        .unwrap_or(default)
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("{key}: {s:?} is not a number"))))
        .collect()
}

fn range(config: &Config, key: &str, default: (f64, f64)) -> Result<(f64, f64)> {
    let Some(text) = config.get(key) else { return Ok(default) };
    match list(config, key, text)?[..] {
        [a, b] if a < b => Ok((a, b)),
        _ => Err(Error::Validation(format!("{key} must be `lo,hi` with lo < hi, got {text:?}"))),
    }
}

fn positive_count(config: &Config, key: &str, default: u64) -> Result<usize> {
    match config.u64_or(key, default)? {
        0 => Err(Error::Validation(format!("{key} must be positive"))),
        n => Ok(n as usize),
    }
}

pub fn airy_table(config: &Config, out: &mut Sink) -> Result<()> {
    let k = positive_count(config, "k_max", 50)?;
    out.buf.extend(header("airy-table", config)?.bytes());
    PhaseTable::new(k).write_csv(&mut out.buf)
}

pub fn verify_poisson(config: &Config, out: &mut Sink) -> Result<()> {
    let table = PhaseTable::shared();
    let center = config.f64_or("center", table.zeros[0])?;
    let width = config.f64_or("width", 0.5)?;
    let plateau = config.f64_or("plateau", 0.5)?;
    let n_max = positive_count(config, "n_max", 400)? as u32;
    let tol = config.f64_or("tol", 1e-6)?;
    let phi = BumpFunction::new(center, width, plateau)?;
    let lhs = poisson_lhs(&phi, n_max, 0)?;
    let rhs = poisson_rhs(&phi, table)?;
    let diff = (lhs.value - rhs).norm();
    out.buf.extend(header("verify-poisson", config)?.bytes());
    writeln!(out.buf, "center,width,n_max,lhs_re,lhs_im,lhs_err,rhs,abs_diff")?;
    writeln!(
        out.buf,
        "{center},{width},{n_max},{:.15e},{:.15e},{:.3e},{rhs:.15e},{diff:.3e}",
        lhs.value.re, lhs.value.im, lhs.error
    )?;
    if diff > tol {
        return Err(Error::NonConvergence { what: format!("Airy-Poisson sums (tol {tol:e})"), estimate: diff });
    }
    Ok(())
}

/// Packet parameters with the scan rules as defaults.
fn packet(config: &mut Config) -> Result<PacketParams> {
    if config.get("a").is_none() && config.get("a_rule").is_none() {
        config.set("a_rule", "h^(1/3)");
    }
    if config.get("M").is_none() && config.get("M_rule").is_none() {
        config.set("M_rule", "lambda^(1/3)");
    }
    PacketParams::from_config(&config.values)
}

/// Point counts from `grid`; `None` when the key is absent.
fn grid_counts(config: &Config) -> Result<Option<(usize, usize, usize)>> {
    let Some(text) = config.get("grid") else { return Ok(None) };
    let n: Vec<usize> = text
        .split('x')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("grid {text:?} is not TxXxY"))))
        .collect::<Result<_>>()?;
    match n[..] {
        [t, x, y] if t >= 1 && x >= 2 && y >= 2 => Ok(Some((t, x, y))),
        _ => Err(Error::Validation(format!("grid {text:?} needs T >= 1 and X, Y >= 2 points"))),
    }
}

pub fn grid_field(config: &Config, route: Route, out: &mut Sink) -> Result<()> {
    let mut config = config.clone();
    let p = packet(&mut config)?;
    let (t0, t1) = range(&config, "t_range", (0.0, p.m_a()))?;
    let (x0, x1) = range(&config, "x_range", (0.0, 1.3))?;
    let (y0, y1) = range(&config, "y_range", (-0.35, t1 / 3.0 + 0.35))?;
    // Default: X spacing λ^{-2/3}/6 and Y spacing 1/(4λ).
    let lambda = p.lambda();
    let (nt, nx, ny) = grid_counts(&config)?.unwrap_or((
        5,
        ((x1 - x0) * 6.0 * lambda.powf(2.0 / 3.0)).ceil() as usize + 1,
        ((y1 - y0) * 4.0 * lambda).ceil() as usize + 1,
    ));
    let (t, x, y) = (linspace(t0, t1, nt), linspace(x0, x1, nx), linspace(y0, y1, ny));
    let cutoffs = CutoffSpec::default();
    let (tool, field) = match route {
        Route::Spectral => ("propagate", SpectralPropagator::new(&p, &cutoffs, SPECTRAL_ETA_NODES)?.field(&t, &x, &y)?),
        Route::Reflections => {
            let par = Parametrix::new(&p, &cutoffs, DEFAULT_ETA_NODES, SigmaMethod::Airy);
            let mut err = None;
            let f = ComplexField::from_fn(t, x, y, |t, x, y| {
                par.value(t, x, y).unwrap_or_else(|e| {
                    err.get_or_insert(e);
                    Default::default()
                })
            })?;
            if let Some(e) = err {
                return Err(e);
            }
            ("parametrix", f)
        }
    };
    out.buf.extend(header(tool, &config)?.bytes());
    for gate in p.desk_gates(1.0) {
        writeln!(out.buf, "# note {gate}")?;
    }
    field.write_csv(&mut out.buf)
}

pub fn crosscheck(config: &Config, out: &mut Sink) -> Result<()> {
    let lambda = config.f64_or("lambda", 50.0)?;
    let per_j = positive_count(config, "points", 10)?;
    let factor = config.f64_or("M_factor", 1.0)?;
    let tol = config.f64_or("tol", 1e-2)?;
    let js: Vec<u32> = list(config, "reflections", "0,1,2")?.iter().map(|&j| j as u32).collect();
    let p = PacketParams::for_lambda(lambda, ARule::CubeRoot, MRule::LambdaCubeRoot { factor })?;
    let rows = experiment::crosscheck(&p, &js, per_j, config.seed()?)?;
    let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    out.buf.extend(header("crosscheck", config)?.bytes());
    write_probe_csv(&rows, &mut out.buf)?;
    writeln!(out.buf, "# max_rel_err={worst:.6e}")?;
    if worst > tol {
        return Err(Error::NonConvergence { what: format!("parametrix vs spectral sum (tol {tol:e})"), estimate: worst });
    }
    Ok(())
}

pub fn strichartz_scan(config: &Config, out: &mut Sink) -> Result<()> {
    let qs = list(config, "q", "4,5,6")?;
    let r = config.f64_or("r", f64::INFINITY)?;
    let lambdas = list(config, "lambdas", "50,71,100,141,200,283,400")?;
    let factor = config.f64_or("M_factor", 1.0)?;
    let params: Vec<PacketParams> = lambdas
        .iter()
        .map(|&l| PacketParams::for_lambda(l, ARule::CubeRoot, MRule::LambdaCubeRoot { factor }))
        .collect::<Result<_>>()?;
    let result = scan(&params, &qs, r, &CutoffSpec::default())?;
    out.buf.extend(header("strichartz-scan", config)?.bytes());
    result.write_csv(&mut out.buf)?;
    for &q in &qs {
        match fit_scaling(&result.for_q(q)) {
            Ok(fit) => writeln!(out.buf, "# q={q} {}", fit.summary())?,
            Err(e) => writeln!(out.buf, "# q={q} no fit: {e}")?,
        }
    }
    Ok(())
}

pub fn exponents(config: &Config, out: &mut Sink) -> Result<()> {
    let path = config.get("pairs").ok_or_else(|| Error::Validation("exponents needs --pairs FILE".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let pairs = ex::parse_pairs(&text)?;
    out.buf.extend(header("exponents", config)?.bytes());
    out.buf.extend(ex::slack_table(&pairs).bytes());
    Ok(())
}
