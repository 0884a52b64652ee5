//! `nodalcone`: predict and certify stationary sets of the wave equation.
//!
//! Exit codes: 0 success, 1 verification failed, 2 bad input, 3 numeric
//! failure (quadrature did not converge).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use nodalcone::config::SourceConfigFile;
use nodalcone::coxeter::{closure, FiniteDistribution, Hyperplane, DEFAULT_MAX_PLANES};
use nodalcone::harmonic::{gauss_decompose, laplacian_divisibility_chain};
use nodalcone::oracle::{
    format_float, scan, scan_csv, verify_prediction, wave_series, OracleConfig, OracleError, VerificationStatus,
};
use nodalcone::polyalg::Polynomial;
use nodalcone::stationary::{predict, GridBox, StationaryPrediction};

#[derive(Parser)]
#[command(name = "nodalcone", version, about = "Stationary sets of the wave equation with finitely supported data")]
struct Cli {
    /// Seed for every random choice; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic prediction of the stationary set.
    Predict { config: PathBuf },
    /// Check a prediction against the numeric oracle; exit 0 iff it passes.
    Verify {
        config: PathBuf,
        /// Prediction JSON to check instead of the computed one.
        #[arg(long)]
        prediction: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        on: usize,
        #[arg(long, default_value_t = 100)]
        off: usize,
    },
    /// Indicator sup_r |f̂(x, r)| over a grid, as CSV.
    Scan {
        config: PathBuf,
        /// Per-axis ranges, e.g. `-1:1,-2:2`.
        #[arg(long = "box", allow_hyphen_values = true)]
        bounds: String,
        #[arg(long)]
        resolution: usize,
    },
    /// Harmonic decomposition of a homogeneous polynomial.
    Decompose { polynomial: PathBuf },
    /// Whether Ψ divides G, ΔG, Δ²G, … with the quotient at each step.
    Divisor { psi: PathBuf, g: PathBuf },
    /// Closure of a hyperplane list under mutual reflection.
    Coxeter {
        hyperplanes: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_PLANES)]
        max_planes: usize,
    },
    /// u(x, t) over a time range, as CSV.
    Wave {
        config: PathBuf,
        /// Comma-separated point.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// `t1..t2:k`, k equally spaced times from t1 to t2.
        #[arg(long)]
        times: String,
    },
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Input(anyhow::Error),
    Numeric(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::NonConvergence { .. } => Failure::Numeric(e.into()),
            e => Failure::Input(e.into()),
        }
    }
}

/// One step of the divisibility chain.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainStep {
    laplacian_power: usize,
    polynomial: Polynomial,
    quotient: Option<Polynomial>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorReport {
    divides_all: bool,
    chain: Vec<ChainStep>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    serde_json::from_str(&read(path)?).with_context(|| format!("cannot parse {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<(SourceConfigFile, FiniteDistribution)> {
    let cfg = SourceConfigFile::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let f = cfg.distribution()?;
    Ok((cfg, f))
}

fn oracle(cfg: &SourceConfigFile, f: &FiniteDistribution, seed: Option<u64>) -> Result<OracleConfig, Failure> {
    let mut opts = cfg.oracle_options();
    opts.seed = seed.or(opts.seed);
    Ok(OracleConfig::with_options(f, &opts)?)
}

fn parse_floats(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("`{v}` is not a number")))
        .collect()
}

fn parse_box(s: &str) -> anyhow::Result<GridBox> {
    let (lo, hi): (Vec<f64>, Vec<f64>) = s
        .split(',')
        .map(|r| {
            let (a, b) = r.split_once(':').ok_or_else(|| anyhow!("box range `{r}` is not `lo:hi`"))?;
            let (a, b) = (a.trim().parse::<f64>()?, b.trim().parse::<f64>()?);
            if !(a < b) {
                bail!("box range `{r}` is empty");
            }
            Ok((a, b))
        })
        .collect::<anyhow::Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    Ok(GridBox { lo, hi })
}

fn parse_times(s: &str) -> anyhow::Result<Vec<f64>> {
    let err = || anyhow!("times `{s}` is not `t1..t2:k`");
    let (range, k) = s.split_once(':').ok_or_else(err)?;
    let (a, b) = range.split_once("..").ok_or_else(err)?;
    let (a, b, k): (f64, f64, usize) = (a.parse()?, b.parse()?, k.parse()?);
    if k == 0 || !(a > 0.0) || b < a || (k > 1 && b == a) {
        bail!("times `{s}` need 0 < t1 < t2 and k >= 1");
    }
    Ok((0..k)
        .map(|i| if k == 1 { a } else { a + (b - a) * i as f64 / (k - 1) as f64 })
        .collect())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(String, ExitCode), Failure> {
    let ok = ExitCode::SUCCESS;
    Ok(match cli.command {
        Command::Predict { config } => {
            let (_, f) = load(&config)?;
            let pred = predict(&f, &[]).map_err(anyhow::Error::from)?;
            (to_json(&pred), ok)
        }
        Command::Verify { config, prediction, on, off } => {
            let (cfg, f) = load(&config)?;
            let oc = oracle(&cfg, &f, cli.seed)?;
            let pred: StationaryPrediction = match prediction {
                Some(p) => read_json(&p)?,
                None => predict(&f, &[]).map_err(anyhow::Error::from)?,
            };
            let report = verify_prediction(&f, &pred, &oc, on, off, oc.seed)?;
            let code = match report.status {
                VerificationStatus::Pass => ok,
                _ => ExitCode::from(1),
            };
            (to_json(&report), code)
        }
        Command::Scan { config, bounds, resolution } => {
            let (cfg, f) = load(&config)?;
            let oc = oracle(&cfg, &f, cli.seed)?;
            let bx = parse_box(&bounds)?;
            (scan_csv(&scan(&f, &oc, &bx, resolution)?), ok)
        }
        Command::Decompose { polynomial } => {
            let g: Polynomial = read_json(&polynomial)?;
            (to_json(&gauss_decompose(&g).map_err(anyhow::Error::from)?), ok)
        }
        Command::Divisor { psi, g } => {
            let psi: Polynomial = read_json(&psi)?;
            let g: Polynomial = read_json(&g)?;
            let chain = laplacian_divisibility_chain(&psi, &g).map_err(anyhow::Error::from)?;
            let report = DivisorReport {
                divides_all: chain.iter().all(|d| d.is_divisible()),
                chain: chain
                    .into_iter()
                    .zip(g.iterated_laplacians())
                    .enumerate()
                    .map(|(s, (d, p))| ChainStep {
                        laplacian_power: s,
                        polynomial: p,
                        quotient: d.quotient().cloned(),
                    })
                    .collect(),
            };
            (to_json(&report), ok)
        }
        Command::Coxeter { hyperplanes, max_planes } => {
            let planes: Vec<Hyperplane> = read_json(&hyperplanes)?;
            (to_json(&closure(&planes, max_planes).map_err(anyhow::Error::from)?), ok)
        }
        Command::Wave { config, at, times } => {
            let (cfg, f) = load(&config)?;
            let oc = oracle(&cfg, &f, cli.seed)?;
            let x = parse_floats(&at)?;
            if x.len() != f.dimension() {
                return Err(anyhow!("--at has {} coordinates, expected {}", x.len(), f.dimension()).into());
            }
            let ts = parse_times(&times)?;
            let us = wave_series(&f, &oc.mollifier, &x, &ts, oc.quad_order)?;
            let mut csv = String::from("t,u\n");
            for (t, u) in ts.iter().zip(us) {
                csv.push_str(&format!("{},{}\n", format_float(*t), format_float(u)));
            }
            (csv, ok)
        }
    })
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("NODALCONE_THREADS") {
        let n: usize = v.parse().with_context(|| format!("NODALCONE_THREADS=`{v}` is not a thread count"))?;
        if n == 0 {
            bail!("NODALCONE_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let result = configure_threads().map_err(Failure::Input).and_then(|()| run(cli));
    match result {
        Ok((text, code)) => {
            let written = match &output {
                Some(path) => fs::write(path, &text).with_context(|| format!("cannot write {}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(2)
                }
            }
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("numeric failure: {e:#}");
            ExitCode::from(3)
        }
    }
}
