use clap::{Args, Parser, Subcommand};
use friedlander::experiment::Config;
use friedlander::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;

/// Experiments on the Friedlander half-plane model.
#[derive(Parser, Debug)]
#[command(name = "friedlander", version)]
struct Cli {
    /// Flat `key = value` file; command-line flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for probe selection (recorded in every output header).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Airy zeros and L′ at the zeros.
    AiryTable {
        #[arg(long)]
        k_max: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Both sides of the Airy–Poisson formula for one bump.
    VerifyPoisson {
        #[arg(long)]
        center: Option<String>,
        #[arg(long)]
        width: Option<String>,
        #[arg(long)]
        n_max: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The solution on a grid from the eigenmode sum.
    Propagate(GridArgs),
    /// The solution on a grid from the reflection sum.
    Parametrix(GridArgs),
    /// Reflection sum against eigenmode sum at seeded probe points.
    Crosscheck {
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strichartz quotients over a list of λ, with log-log fits.
    StrichartzScan {
        /// One q or a comma list.
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Slack of every admissibility region for a list of pairs.
    Exponents {
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    h: Option<String>,
    /// `h^(1/3)` or `h^(1/2-eps)`.
    #[arg(long)]
    a_rule: Option<String>,
    /// `lambda^(1/3)` or `M_a`.
    #[arg(long)]
    m_rule: Option<String>,
    /// Point counts `TxXxY`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn set_opt(config: &mut Config, key: &str, value: &Option<String>) {
    if let Some(v) = value {
        config.set(key, v);
    }
}

/// Config file, then flags, then `--set`.
fn build_config(cli: &Cli) -> Result<(Config, Option<PathBuf>)> {
    let mut config = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    let out = match &cli.command {
        Command::AiryTable { k_max, out } => {
            set_opt(&mut config, "k_max", k_max);
            out
        }
        Command::VerifyPoisson { center, width, n_max, out } => {
            set_opt(&mut config, "center", center);
            set_opt(&mut config, "width", width);
            set_opt(&mut config, "n_max", n_max);
            out
        }
        Command::Propagate(g) | Command::Parametrix(g) => {
            set_opt(&mut config, "h", &g.h);
            set_opt(&mut config, "a_rule", &g.a_rule);
            set_opt(&mut config, "M_rule", &g.m_rule);
            set_opt(&mut config, "grid", &g.grid);
            &g.out
        }
        Command::Crosscheck { lambda, points, out } => {
            set_opt(&mut config, "lambda", lambda);
            set_opt(&mut config, "points", points);
            out
        }
        Command::StrichartzScan { q, r, lambdas, out } => {
            set_opt(&mut config, "q", q);
            set_opt(&mut config, "r", r);
            set_opt(&mut config, "lambdas", lambdas);
            out
        }
        Command::Exponents { pairs, out } => {
            if let Some(p) = pairs {
                config.set("pairs", p.display());
            }
            out
        }
    };
    if let Some(seed) = cli.seed {
        config.set("seed", seed);
    }
    for kv in &cli.overrides {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        config.set(k.trim(), v.trim());
    }
    config.seed()?;
    let out = out.clone().or_else(|| config.get("out").map(PathBuf::from));
    config.values.remove("out");
    Ok((config, out))
}

fn run(cli: &Cli) -> Result<()> {
    let (config, out) = build_config(cli)?;
    let mut sink = commands::Sink::open(out.as_deref())?;
    let result = match &cli.command {
        Command::AiryTable { .. } => commands::airy_table(&config, &mut sink),
        Command::VerifyPoisson { .. } => commands::verify_poisson(&config, &mut sink),
        Command::Propagate(_) => commands::grid_field(&config, commands::Route::Spectral, &mut sink),
        Command::Parametrix(_) => commands::grid_field(&config, commands::Route::Reflections, &mut sink),
        Command::Crosscheck { .. } => commands::crosscheck(&config, &mut sink),
        Command::StrichartzScan { .. } => commands::strichartz_scan(&config, &mut sink),
        Command::Exponents { .. } => commands::exponents(&config, &mut sink),
    };
    // A failed check still leaves its report behind.
    let written = sink.finish();
    result.and(written)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
