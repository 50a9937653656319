mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use floquet_core::charpoly::{
    block_power_sums, extract_component_charpoly, invariant_report, recover_p_with, recover_ptilde_with, TildeRoute,
};
use floquet_core::floquet::{fermi_isospectral_at, floquet_at, floquet_isospectral, torus_point};
use floquet_core::io::{potential_to_json, read_potential};
use floquet_core::potential::{dft, is_separable, mean, random_potential, split, Potential, PotentialMode};
use floquet_core::rigidity::{
    verify_all, verify_key1_key4, verify_key_suite, verify_thm_main2, verify_thm_main3, verify_triangular,
};
use floquet_core::Error;
use num_complex::Complex64;

use config::{Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "floquet", version, about = "Floquet isospectrality tools for periodic discrete Schrödinger operators")]
struct Cli {
    /// JSON file supplying defaults for the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenMode {
    Real,
    Complex,
    Separable,
    Nonseparable,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Main2,
    Main3,
    Key,
    Tri,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Route {
    Dual,
    Substitute,
    CrossCheck,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a random potential.
    Gen {
        #[arg(long, value_enum, default_value = "real")]
        mode: GenMode,
        /// Complex values for separable and nonseparable draws.
        #[arg(long)]
        complex: bool,
    },
    /// Discrete Fourier coefficients.
    Dft { input: PathBuf },
    /// Decide separability for --pattern; exit 1 with a witness if not.
    Separable { input: PathBuf },
    /// Constant plus zero-mean components for --pattern.
    Split { input: PathBuf },
    /// Eigenvalues (Hermitian cases) or λ-coefficients at quasimomenta.
    Spectrum {
        input: PathBuf,
        /// Quasimomentum, comma separated; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        k: Vec<String>,
        /// Sample k on an N^d grid of [0, 2π)^d.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Floquet isospectrality of two potentials.
    Isospectral { a: PathBuf, b: PathBuf },
    /// Fermi isospectrality at one energy.
    Fermi {
        a: PathBuf,
        b: PathBuf,
        /// Energy as `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Means and Fourier power sums; with two inputs, their agreement.
    Invariants { a: PathBuf, b: Option<PathBuf> },
    /// Laurent coefficients of the Floquet characteristic polynomial.
    Charpoly {
        input: PathBuf,
        /// Recover the polynomial in the dual variables instead.
        #[arg(long)]
        tilde: bool,
        #[arg(long, value_enum, default_value = "dual")]
        route: Route,
    },
    /// Characteristic polynomial of one separable component.
    Extract {
        input: PathBuf,
        /// Block number, starting at 1.
        #[arg(long)]
        component: usize,
    },
    /// Run a rigidity suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Fixed component constants for main3, summing to zero.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        constants: Option<Vec<f64>>,
        /// Check one given pair instead of generated ones (key suite).
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        pair: Option<Vec<PathBuf>>,
    },
}

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn negative(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotSeparable { .. } | Error::Extraction(_) | Error::GeneratorFailed(_) => Failure::negative(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

/// Rendered output plus the decision it encodes.
struct Outcome {
    body: String,
    passed: bool,
    note: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, passed: true, note: None }
    }

    fn decision(body: String, passed: bool) -> Self {
        Outcome { body, passed, note: None }
    }
}

fn load(path: &Path) -> Result<Potential, Failure> {
    Ok(read_potential(path)?)
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| Failure::usage(format!("not a number: {t:?}")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Failure::usage(format!("expected `re` or `re,im`, got {s:?}"))),
    }
}

fn parse_point(s: &str, dim: usize) -> Result<Vec<f64>, Failure> {
    let k: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Failure::usage(format!("not a number: {t:?}"))))
        .collect::<Result<_, _>>()?;
    if k.len() != dim {
        return Err(Failure::usage(format!("quasimomentum {s:?} has {} entries, expected {dim}", k.len())));
    }
    Ok(k)
}

fn grid_points(n: usize, dim: usize) -> Vec<Vec<f64>> {
    let step = std::f64::consts::TAU / n as f64;
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |m| {
                    let mut q = p.clone();
                    q.push(m as f64 * step);
                    q
                })
            })
            .collect();
    }
    out
}

fn run(cli: Cli) -> Result<(Outcome, RunConfig), Failure> {
    let cfg = match &cli.config {
        Some(path) => cli.run.over(RunConfig::load(path)?),
        None => cli.run,
    };
    let outcome = dispatch(cli.command, &cfg)?;
    Ok((outcome, cfg))
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let tol = cfg.tolerances()?;
    match command {
        Command::Gen { mode, complex } => {
            let spec = cfg.spec()?;
            let blocks = || cfg.pattern_for(&spec).map(|p| p.blocks().to_vec());
            let mode = match mode {
                GenMode::Real => PotentialMode::Real,
                GenMode::Complex => PotentialMode::Complex,
                GenMode::Separable => PotentialMode::Separable { pattern: blocks()?, complex },
                GenMode::Nonseparable => PotentialMode::Nonseparable { pattern: blocks()?, complex },
            };
            let v = random_potential(&spec, cfg.seed()?, &mode)?;
            Ok(Outcome::ok(potential_to_json(&v)?))
        }
        Command::Dft { input } => {
            let f = dft(&load(&input)?);
            Ok(Outcome::ok(output::fourier(&f, cfg.format_or(Format::Json))?))
        }
        Command::Separable { input } => {
            let v = load(&input)?;
            let p = cfg.pattern_for(v.spec())?;
            let verdict = is_separable(&dft(&v), &p, tol.separability)?;
            let mut out = Outcome::decision(output::report(&verdict, cfg.format_or(Format::Json), || output::verdict_text(&verdict))?, verdict.separable);
            if let Some(w) = &verdict.witness {
                out.note = Some(format!("not separable: witness {w}, magnitude {:.3e}", verdict.max_cross));
            }
            Ok(out)
        }
        Command::Split { input } => {
            let v = load(&input)?;
            let p = cfg.pattern_for(v.spec())?;
            let parts = split(&v, &p, tol.separability)?;
            Ok(Outcome::ok(output::parts(&parts)?))
        }
        Command::Spectrum { input, k, grid } => {
            let v = load(&input)?;
            let dim = v.spec().dim();
            let mut points: Vec<Vec<f64>> = k.iter().map(|s| parse_point(s, dim)).collect::<Result<_, _>>()?;
            if let Some(n) = grid {
                if n == 0 {
                    return Err(Failure::usage("--grid must be positive"));
                }
                points.extend(grid_points(n, dim));
            }
            if points.is_empty() {
                points.push(vec![0.0; dim]);
            }
            let mut rows = Vec::with_capacity(points.len());
            for kp in points {
                let kc: Vec<Complex64> = kp.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                let m = floquet_at(&v, &torus_point(&kc))?;
                let values = if v.is_real() { m.hermitian_eigenvalues() } else { None };
                rows.push(output::SpectrumRow { k: kp, eigenvalues: values, coefficients: m.charpoly() });
            }
            Ok(Outcome::ok(output::spectrum(&rows, v.spec().volume(), cfg.format_or(Format::Csv))?))
        }
        Command::Isospectral { a, b } => {
            let report = floquet_isospectral(&load(&a)?, &load(&b)?, tol.isospectral)?;
            let text = || format!("isospectral: {} (relative residual {:.3e}, tol {:.1e})\n", report.accepted, report.relative_residual, report.tol);
            Ok(Outcome::decision(output::report(&report, cfg.format_or(Format::Json), text)?, report.accepted))
        }
        Command::Fermi { a, b, lambda } => {
            let report = fermi_isospectral_at(&load(&a)?, &load(&b)?, parse_complex(&lambda)?, tol.isospectral)?;
            let text = || format!("fermi isospectral at {}: {} (relative residual {:.3e})\n", report.lambda, report.accepted, report.relative_residual);
            Ok(Outcome::decision(output::report(&report, cfg.format_or(Format::Json), text)?, report.accepted))
        }
        Command::Invariants { a, b } => {
            let v = load(&a)?;
            let p = cfg.optional_pattern(v.spec())?;
            match b {
                None => {
                    let sums = match &p {
                        Some(p) => block_power_sums(&dft(&v), p)?,
                        None => floquet_core::charpoly::PowerSums { total: dft(&v).power_sum(), blocks: vec![] },
                    };
                    let doc = output::Invariants { mean: mean(&v), power: sums };
                    Ok(Outcome::ok(output::report(&doc, cfg.format_or(Format::Json), || doc.text())?))
                }
                Some(b) => {
                    let y = load(&b)?;
                    let samples = if v.is_real() && y.is_real() { tol.resolvent_samples } else { 0 };
                    let report = invariant_report(&v, &y, p.as_ref(), samples, cfg.seed()?)?;
                    let agrees = report.agrees(tol.mean, tol.power) && report.resolvent_residual.is_none_or(|r| r <= tol.resolvent);
                    let text = || format!(
                        "invariants agree: {agrees} (mean {:.3e}, power {:.3e}, blocks {:.3e}, resolvent {})\n",
                        report.mean_residual,
                        report.total_residual,
                        report.block_residual,
                        report.resolvent_residual.map_or("n/a".into(), |r| format!("{r:.3e}"))
                    );
                    Ok(Outcome::decision(output::report(&report, cfg.format_or(Format::Json), text)?, agrees))
                }
            }
        }
        Command::Charpoly { input, tilde, route } => {
            let v = load(&input)?;
            let poly = if tilde {
                let route = match route {
                    Route::Dual => TildeRoute::Dual,
                    Route::Substitute => TildeRoute::Substitute,
                    Route::CrossCheck => TildeRoute::CrossCheck,
                };
                recover_ptilde_with(&v, route, cfg.recovery())?
            } else {
                recover_p_with(&v, cfg.recovery())?
            };
            Ok(Outcome::ok(output::poly(&poly, cfg.format_or(Format::Text))?))
        }
        Command::Extract { input, component } => {
            let v = load(&input)?;
            let p = cfg.pattern_for(v.spec())?;
            if component == 0 || component > p.block_count() {
                return Err(Failure::usage(format!("--component must be in 1..={}", p.block_count())));
            }
            let poly = extract_component_charpoly(&v, &p, component - 1, tol.separability, cfg.recovery())?;
            Ok(Outcome::ok(output::poly(&poly, cfg.format_or(Format::Text))?))
        }
        Command::Verify { suite, constants, pair } => verify(suite, constants, pair, cfg, &tol),
    }
}

fn verify(
    suite: Suite,
    constants: Option<Vec<f64>>,
    pair: Option<Vec<PathBuf>>,
    cfg: &RunConfig,
    tol: &floquet_core::rigidity::Tolerances,
) -> Result<Outcome, Failure> {
    let format = cfg.format_or(Format::Json);
    let seed = cfg.seed()?;
    let trials = cfg.trials();
    if let Some(files) = &pair {
        if !matches!(suite, Suite::Key) {
            return Err(Failure::usage("--pair only applies to the key suite"));
        }
        let (v, y) = (load(&files[0])?, load(&files[1])?);
        let p = cfg.optional_pattern(v.spec())?;
        let report = verify_key1_key4(&v, &y, p.as_ref(), seed, tol)?;
        return Ok(Outcome::decision(output::report(&report, format, || report.summary())?, report.passed));
    }
    let report = match suite {
        Suite::All => {
            let spec = cfg.spec()?;
            let p = cfg.pattern_for(&spec)?;
            let suite = verify_all(spec.periods(), p.blocks(), trials, seed, tol)?;
            return Ok(Outcome::decision(output::report(&suite, format, || suite.summary())?, suite.passed));
        }
        Suite::Main2 => {
            let spec = cfg.spec()?;
            verify_thm_main2(&spec, &cfg.pattern_for(&spec)?, trials, seed, tol)?
        }
        Suite::Main3 => {
            let spec = cfg.spec()?;
            let c: Option<Vec<Complex64>> = constants.map(|c| c.into_iter().map(|x| Complex64::new(x, 0.0)).collect());
            verify_thm_main3(&spec, &cfg.pattern_for(&spec)?, trials, seed, tol, c.as_deref())?
        }
        Suite::Key => {
            let spec = cfg.spec()?;
            let p = cfg.optional_pattern(&spec)?;
            verify_key_suite(&spec, p.as_ref(), trials, seed, tol)?
        }
        Suite::Tri => {
            let periods = cfg.periods.clone().ok_or_else(|| Failure::usage("--periods is required"))?;
            let [q1, q2] = periods[..] else {
                return Err(Failure::usage("the triangular suite needs two periods"));
            };
            let spec = floquet_core::lattice::LatticeSpec::triangular(q1, q2)?;
            verify_triangular(&spec, trials, seed, tol)?
        }
    };
    Ok(Outcome::decision(output::report(&report, format, || report.summary())?, report.passed))
}

/// Writes through a sibling temporary file so a failed run leaves no output.
fn write_output(path: &Path, body: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((outcome, cfg)) => {
            match &cfg.output {
                Some(path) => {
                    if let Err(e) = write_output(path, &outcome.body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", outcome.body),
            }
            if let Some(note) = outcome.note {
                eprintln!("{note}");
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message.lines().next().unwrap_or_default());
            ExitCode::from(f.code)
        }
    }
}
