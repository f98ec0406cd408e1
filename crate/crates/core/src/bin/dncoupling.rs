use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dncoupling::error::{Error, Result};
use dncoupling::experiments::spec::{parse_number, SpecEntries, SweepSpec};
use dncoupling::experiments::sweep::{run_sweep, SweepTable};
use dncoupling::experiments::tables::{
    asymptotics_csv, asymptotics_table, default_fsi_time_steps, fsi_estimate, materials_table, FsiCase, DEFAULT_PAIRS,
};
use dncoupling::experiments::plots::emit_plots;
use dncoupling::materials::{load_material_table, NamedMaterial};

#[derive(Parser, Debug)]
#[command(name = "dncoupling", version, about = "Convergence rates of Dirichlet-Neumann coupled heat equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the material presets, optional user materials and steel at given temperatures.
    Materials {
        /// Material table file (`name lambda rho cp` per line).
        #[arg(long)]
        materials: Option<PathBuf>,
        /// Temperatures in Kelvin at which to list 51CrV4 steel.
        #[arg(long = "steel-at", value_delimiter = ',')]
        steel_at: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rates at a single parameter point.
    Rate(SweepArgs),
    /// Rates over a range of time steps or mesh widths.
    Sweep(SweepArgs),
    /// Temporal and spatial limits of the rate for material pairs.
    Asymptotics {
        /// Pairs as `mat1:mat2`, comma separated.
        #[arg(long, value_delimiter = ',')]
        pairs: Vec<String>,
        #[arg(long)]
        materials: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rate estimates for the flat plate and flanged shaft cooling problems.
    FsiEstimate {
        /// `flat_plate` or `flanged_shaft`; both when omitted.
        #[arg(long)]
        case: Option<String>,
        /// Time steps, comma separated (default: 1e-3 .. 1e1, four per decade).
        #[arg(long, value_delimiter = ',')]
        dt: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a gnuplot script for a CSV produced by `sweep` or `rate`.
    Plots {
        csv: PathBuf,
        /// Script path (default: the CSV path with extension `.gp`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Sweep parameters; each flag overrides the same key of `--spec`.
#[derive(Args, Debug, Default)]
struct SweepArgs {
    /// Spec file with `key = value` lines.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Swept variable: `dt` or `dx1`.
    #[arg(long)]
    var: Option<String>,
    /// Explicit values, e.g. `1/3, 1/10, 1/50`.
    #[arg(long)]
    values: Option<String>,
    /// `start stop count [linear|log|inverse]`.
    #[arg(long)]
    range: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    dx1: Option<String>,
    /// Aspect ratio dx2/dx1.
    #[arg(long)]
    r: Option<String>,
    /// Interior finite element nodes (general spacing, domain length not fixed).
    #[arg(long)]
    n2: Option<String>,
    /// Tangential nodes of the 2D model.
    #[arg(long)]
    ny: Option<String>,
    #[arg(long)]
    mat1: Option<String>,
    #[arg(long)]
    mat2: Option<String>,
    #[arg(long)]
    materials: Option<String>,
    /// Comma separated subset of formula, schur_oracle, observed_1d, observed_2d, beta, delta_r.
    #[arg(long)]
    modes: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long = "max-iters")]
    max_iters: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

const RATE_MODES: &str = "formula, schur_oracle, observed_1d, beta, delta_r";

/// Errors reported with exit status 1 (bad input) or 2 (numerical failure).
enum Failure {
    Usage(Error),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Singular { .. } | Error::Degenerate(_) | Error::Estimation(_) => Failure::Numerical(e.to_string()),
            other => Failure::Usage(other),
        }
    }
}

fn entries(args: &SweepArgs, single_point: bool) -> Result<SpecEntries> {
    let mut e = match &args.spec {
        Some(p) => SpecEntries::load(p)?,
        None => SpecEntries::default(),
    };
    if single_point {
        e.entries.retain(|(k, _)| k != "values" && k != "range");
        e.set("var", "dt");
        e.set("modes", RATE_MODES);
    }
    if args.values.is_some() || args.range.is_some() {
        e.entries.retain(|(k, _)| k != "values" && k != "range");
    }
    let flags = [
        ("var", &args.var),
        ("values", &args.values),
        ("range", &args.range),
        ("dt", &args.dt),
        ("dx1", &args.dx1),
        ("r", &args.r),
        ("n2", &args.n2),
        ("ny", &args.ny),
        ("mat1", &args.mat1),
        ("mat2", &args.mat2),
        ("materials", &args.materials),
        ("modes", &args.modes),
        ("tol", &args.tol),
        ("max_iters", &args.max_iters),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            e.set(k, v.clone());
        }
    }
    if let Some(out) = &args.out {
        e.set("out", out.display().to_string());
    }
    Ok(e)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_table(path: Option<&Path>) -> Result<Vec<NamedMaterial>> {
    path.map_or_else(|| Ok(Vec::new()), load_material_table)
}

fn report_sweep(table: &SweepTable) -> std::result::Result<(), Failure> {
    write_output(table.spec.out.as_deref(), &table.to_csv())?;
    if table.has_errors() {
        let n = table.rows.iter().filter(|r| !r.errors.is_empty()).count();
        return Err(Failure::Numerical(format!("{n} row(s) failed; see the `# error` lines in the output")));
    }
    Ok(())
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Materials { materials, steel_at, out } => {
            let table = load_table(materials.as_deref())?;
            write_output(out.as_deref(), &materials_table(&table, &steel_at)?)?;
        }
        Command::Rate(args) => {
            if args.values.is_some() || args.range.is_some() {
                return Err(Failure::Usage(Error::Parse("`rate` takes a single --dt; use `sweep` for ranges".into())));
            }
            let spec = SweepSpec::from_entries(&entries(&args, true)?)?;
            report_sweep(&run_sweep(&spec))?;
        }
        Command::Sweep(args) => {
            let spec = SweepSpec::from_entries(&entries(&args, false)?)?;
            report_sweep(&run_sweep(&spec))?;
        }
        Command::Asymptotics { pairs, materials, out } => {
            let table = load_table(materials.as_deref())?;
            let pairs: Vec<(String, String)> = if pairs.is_empty() {
                DEFAULT_PAIRS.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
            } else {
                pairs
                    .iter()
                    .map(|p| {
                        p.split_once(':')
                            .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                            .ok_or_else(|| Error::Parse(format!("pair `{p}` is not of the form mat1:mat2")))
                    })
                    .collect::<Result<_>>()?
            };
            write_output(out.as_deref(), &asymptotics_csv(&asymptotics_table(&pairs, &table)?))?;
        }
        Command::FsiEstimate { case, dt, out } => {
            let cases = match case {
                Some(c) => vec![c.parse::<FsiCase>()?],
                None => FsiCase::ALL.to_vec(),
            };
            let dts = if dt.is_empty() {
                default_fsi_time_steps()
            } else {
                dt.iter().map(|s| parse_number(s)).collect::<Result<_>>()?
            };
            let mut text = String::new();
            for (i, c) in cases.into_iter().enumerate() {
                if i > 0 {
                    text.push('\n');
                }
                text.push_str(&fsi_estimate(c, &dts)?.to_csv());
            }
            write_output(out.as_deref(), &text)?;
        }
        Command::Plots { csv, out } => {
            let text = std::fs::read_to_string(&csv).map_err(|e| Error::Io(format!("{}: {e}", csv.display())))?;
            let script = emit_plots(&text, &csv.display().to_string())?;
            let out = out.unwrap_or_else(|| csv.with_extension("gp"));
            write_output(Some(&out), &script)?;
            eprintln!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
