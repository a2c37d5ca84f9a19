//! `boson`: generate unitaries, evaluate permanents, draw samples, and emit
//! the occupied-port and cost-bound tables.
//!
//! Exit codes: 0 success, 1 runtime failure (including a failed `verify`),
//! 2 usage or validation error.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boson_core::bench::{scaling_csv, scaling_report, ModeRule};
use boson_core::gof::chi_square_configurations;
use boson_core::matrix::{MatrixFile, UNITARITY_TOL};
use boson_core::permanent::{
    permanent_glynn, permanent_naive, permanent_ryser, repeated_expansion, Expansion,
};
use boson_core::ports::{port_count_pmf, sample_cost_bounds};
use boson_core::sampler::{brute_force_distribution, sample_batch, total_variation};
use boson_core::{haar_unitary, unitarity_defect, Error, OutputConfiguration, UnitaryMatrix};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

/// Largest TVD `verify` accepts.
const VERIFY_TVD: f64 = 0.02;
/// Smallest chi-square p-value `verify` accepts.
const VERIFY_P: f64 = 0.001;

#[derive(Parser)]
#[command(
    name = "boson",
    version,
    about = "Boson sampling with output collisions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Jsonl,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Naive,
    Ryser,
    Glynn,
    Repeated,
}

#[derive(Subcommand)]
enum Command {
    /// Write a Haar-random unitary to a JSON file and print its unitarity defect.
    Haar {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the permanent of a matrix file.
    Permanent {
        #[arg(long, alias = "unitary")]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Repeated)]
        method: Method,
        /// Column multiplicities (comma separated) for `--method repeated`;
        /// the file then holds one column per distinct port.
        #[arg(long, value_delimiter = ',')]
        multiplicities: Option<Vec<usize>>,
    },
    /// Draw samples; single bosons enter ports 1..N.
    Sample {
        #[arg(long, alias = "matrix")]
        unitary: PathBuf,
        #[arg(short = 'n', long)]
        bosons: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distribution of the number of occupied output ports.
    Dist {
        #[arg(short = 'n', long)]
        bosons: usize,
        #[arg(short = 'm', long)]
        modes: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the exact law against its binomial envelope over 0..=M.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Operation-count bounds as a JSON report.
    Bounds {
        #[arg(short = 'n', long)]
        bosons: usize,
        #[arg(short = 'm', long)]
        modes: usize,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare sampled frequencies against the enumerated distribution.
    Verify {
        #[arg(long, alias = "matrix")]
        unitary: PathBuf,
        #[arg(short = 'n', long)]
        bosons: usize,
        #[arg(long, alias = "samples", default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Mean and max sample cost over Haar unitaries against the bounds.
    Scaling {
        /// Boson numbers to sweep (comma separated).
        #[arg(short = 'n', long, value_delimiter = ',')]
        bosons: Vec<usize>,
        /// Fixed number of ports; overrides `--mode-factor`.
        #[arg(short = 'm', long)]
        modes: Option<usize>,
        /// `M = factor · N`.
        #[arg(long, default_value_t = 1)]
        mode_factor: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_epsilon(eps: f64) -> CliResult<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(usage(format!("--epsilon must lie in (0, 1), got {eps}")))
    }
}

fn check_regime(bosons: usize, modes: usize) -> CliResult<()> {
    if bosons == 0 {
        return Err(usage("--bosons must be at least 1"));
    }
    if bosons > modes {
        return Err(Error::UnsupportedRegime { bosons, modes }.into());
    }
    Ok(())
}

fn read_unitary(path: &Path) -> CliResult<UnitaryMatrix> {
    UnitaryMatrix::read_json(path, UNITARITY_TOL).map_err(|e| match e {
        Error::Io(io) => CliError::Usage(format!("{}: {io}", path.display())),
        Error::Json(j) => CliError::Usage(format!("{}: {j}", path.display())),
        other => other.into(),
    })
}

/// Output sink: a file when `--out` is given, stdout otherwise.
fn sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::Runtime(format!("{}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `a+bi` with the shortest round-tripping decimals and no negative zeros.
fn format_complex(z: Complex64) -> String {
    let clean = |x: f64| if x == 0.0 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn cmd_haar(dim: usize, seed: u64, out: &Path) -> CliResult<()> {
    if dim == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    let u = haar_unitary(dim, seed)?;
    u.write_json(out)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", out.display())))?;
    println!("defect {:e}", unitarity_defect(u.matrix())?);
    Ok(())
}

fn cmd_permanent(path: &Path, method: Method, mult: Option<Vec<usize>>) -> CliResult<()> {
    let a = MatrixFile::read_json(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if mult.is_some() && method != Method::Repeated {
        return Err(usage("--multiplicities applies to --method repeated only"));
    }
    let value = match method {
        Method::Naive => permanent_naive(&a)?,
        Method::Ryser => permanent_ryser(&a)?,
        Method::Glynn => permanent_glynn(&a)?,
        Method::Repeated => {
            let mult = match mult {
                Some(m) => m,
                None if a.is_square() => vec![1; a.cols()],
                None => {
                    return Err(usage(format!(
                        "{}x{} matrix needs --multiplicities",
                        a.rows(),
                        a.cols()
                    )))
                }
            };
            let r = repeated_expansion(&a, &mult, Expansion::Reduced)?;
            println!("{}", format_complex(r.value));
            println!("gray_steps {}", r.gray_steps);
            return Ok(());
        }
    };
    println!("{}", format_complex(value));
    Ok(())
}

fn cmd_sample(
    path: &Path,
    bosons: usize,
    count: usize,
    seed: u64,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    if format == Format::Csv {
        return Err(usage("sample writes jsonl or json"));
    }
    let u = read_unitary(path)?;
    check_regime(bosons, u.dim())?;
    let batch = sample_batch(&u, bosons, count, seed)?;
    let mut w = sink(out)?;
    match format {
        Format::Json => serde_json::to_writer(&mut w, &batch).map_err(Error::from)?,
        _ => batch.write_jsonl(&mut w)?,
    }
    w.flush()?;
    eprintln!("{count} samples");
    Ok(())
}

fn cmd_dist(
    bosons: usize,
    modes: usize,
    format: Format,
    out: Option<&Path>,
    plot: Option<&Path>,
) -> CliResult<()> {
    check_regime(bosons, modes)?;
    let d = port_count_pmf(bosons, modes)?;
    let mut w = sink(out)?;
    match format {
        Format::Csv => w.write_all(d.to_csv().as_bytes())?,
        Format::Json => {
            let rows: Vec<_> = d
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "n": r.n,
                        "P_exact": r.p_exact.as_ref().map(|q| q.to_string()),
                        "P": r.p,
                        "B": r.b,
                    })
                })
                .collect();
            let doc = serde_json::json!({"N": bosons, "M": modes, "x": d.x, "rows": rows});
            writeln!(w, "{doc}")?;
        }
        Format::Jsonl => return Err(usage("dist writes csv or json")),
    }
    w.flush()?;
    if let Some(p) = plot {
        std::fs::write(p, d.plot_csv())
            .map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_bounds(bosons: usize, modes: usize, epsilon: f64, out: Option<&Path>) -> CliResult<()> {
    check_epsilon(epsilon)?;
    check_regime(bosons, modes)?;
    let report = sample_cost_bounds(bosons, modes, epsilon)?;
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, &report).map_err(Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn cmd_verify(path: &Path, bosons: usize, count: usize, seed: u64) -> CliResult<bool> {
    let u = read_unitary(path)?;
    check_regime(bosons, u.dim())?;
    if count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let exact = brute_force_distribution(&u, bosons)?;
    let batch = sample_batch(&u, bosons, count, seed)?;
    let mut observed: BTreeMap<OutputConfiguration, u64> = BTreeMap::new();
    for s in &batch.samples {
        *observed.entry(s.configuration(u.dim())).or_default() += 1;
    }
    let tvd = total_variation(&exact, &observed);
    let chi = chi_square_configurations(&exact, &observed);
    let pass = tvd < VERIFY_TVD && chi.p_value > VERIFY_P;
    println!("configurations {}", exact.len());
    println!("samples {count}");
    println!("tvd {tvd:.6}");
    println!(
        "chi2 {:.4} dof {} p {:.6}",
        chi.statistic, chi.dof, chi.p_value
    );
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(pass)
}

#[allow(clippy::too_many_arguments)]
fn cmd_scaling(
    bosons: &[usize],
    modes: Option<usize>,
    factor: usize,
    count: usize,
    seed: u64,
    epsilon: f64,
    out: Option<&Path>,
) -> CliResult<()> {
    check_epsilon(epsilon)?;
    if factor == 0 {
        return Err(usage("--mode-factor must be at least 1"));
    }
    let rule = modes.map_or(ModeRule::Multiple(factor), ModeRule::Fixed);
    let rows = scaling_report(bosons, rule, count, seed, epsilon)?;
    let mut w = sink(out)?;
    w.write_all(scaling_csv(&rows).as_bytes())?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Haar { dim, seed, out } => cmd_haar(dim, seed, &out)?,
        Command::Permanent {
            matrix,
            method,
            multiplicities,
        } => cmd_permanent(&matrix, method, multiplicities)?,
        Command::Sample {
            unitary,
            bosons,
            count,
            seed,
            format,
            out,
        } => cmd_sample(&unitary, bosons, count, seed, format, out.as_deref())?,
        Command::Dist {
            bosons,
            modes,
            format,
            out,
            plot_data,
        } => cmd_dist(bosons, modes, format, out.as_deref(), plot_data.as_deref())?,
        Command::Bounds {
            bosons,
            modes,
            epsilon,
            out,
        } => cmd_bounds(bosons, modes, epsilon, out.as_deref())?,
        Command::Verify {
            unitary,
            bosons,
            count,
            seed,
        } => return cmd_verify(&unitary, bosons, count, seed),
        Command::Scaling {
            bosons,
            modes,
            mode_factor,
            count,
            seed,
            epsilon,
            out,
        } => cmd_scaling(
            &bosons,
            modes,
            mode_factor,
            count,
            seed,
            epsilon,
            out.as_deref(),
        )?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
