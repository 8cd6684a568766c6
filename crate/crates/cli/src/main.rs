//! `moyal` command-line tool: Wigner grids, spectra, negativity tables and
//! the invariant suite.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::{Format, GridArgs, Model, ModelArgs, ModelConfig, OutputArgs};
use moyal::grid::{sample, GridField};
use moyal::io::{grid_header, write_grid_csv, write_json, FORMAT_VERSION};
use moyal::models::{
    damped_energy, damped_wigner, helium_energy, helium_energy_first_order, helium_excite_sectors,
    helium_ground, helium_wigner, DampedParams,
};
use moyal::negativity::{lambda_scan, negativity_table, Method, NegativityRecord, REFERENCE_ETA};
use moyal::verify::{run_verify, Fault, VerifyOptions};

#[derive(Parser, Debug)]
#[command(
    name = "moyal",
    version,
    about = "Phase-space quantum mechanics with the Moyal star product"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a Wigner function on a grid.
    Wigner {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Energy levels.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// Highest level listed (per sector for helium).
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Negative volume of Wigner functions.
    Negativity {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "radial")]
        method: MethodArg,
        #[arg(long, default_value_t = 9)]
        n_max: u32,
        /// Absolute tolerance of the grid quadrature.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Compare n <= 9 with the reference table.
        #[arg(long)]
        check_table1: bool,
        #[arg(long, default_value_t = 1e-8)]
        table_tol: f64,
        /// Comma-separated λ values; compares grid η at each with the radial η for --n.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambda_scan: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-3)]
        scan_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the cross-engine invariant suite.
    Verify {
        /// Grid nodes per axis for the grid-engine checks.
        #[arg(long, default_value_t = 128)]
        nq: usize,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Radial,
    Grid,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    DampedSign,
}

enum Failure {
    Internal(String),
    Usage(String),
    Io(String),
    Mismatch(String),
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Mismatch(_) => 4,
            Failure::Verify(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Internal(m)
            | Failure::Usage(m)
            | Failure::Io(m)
            | Failure::Mismatch(m)
            | Failure::Verify(m) => m,
        }
    }
}

impl From<moyal::Error> for Failure {
    fn from(e: moyal::Error) -> Self {
        use moyal::Error as E;
        match e {
            E::Io(_) => Failure::Io(e.to_string()),
            E::RootBracket(_) | E::NonConvergence(_) | E::NonintegrableStar { .. } => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    if let Ok(t) = std::env::var("MOYAL_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                moyal::exec::configure_threads(n);
            }
            _ => {
                eprintln!("error: MOYAL_THREADS must be a positive integer, got '{t}'");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Wigner {
            model,
            grid,
            output,
        } => cmd_wigner(&model, &grid, &output),
        Command::Spectrum {
            model,
            n_max,
            output,
        } => cmd_spectrum(&model, n_max, &output),
        Command::Negativity {
            model,
            method,
            n_max,
            tol,
            check_table1,
            table_tol,
            lambda_scan,
            scan_tol,
            output,
        } => cmd_negativity(
            &model,
            method,
            n_max,
            tol,
            check_table1,
            table_tol,
            lambda_scan.as_deref(),
            scan_tol,
            &output,
        ),
        Command::Verify {
            nq,
            inject_fault,
            format,
        } => cmd_verify(nq, inject_fault, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit<F>(out: Option<&Path>, write: F) -> Outcome
where
    F: FnOnce(&mut dyn Write) -> moyal::Result<()>,
{
    match out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

#[derive(Serialize)]
struct GridJson<'a> {
    header: serde_json::Map<String, serde_json::Value>,
    q: Vec<f64>,
    p: Vec<f64>,
    w: Vec<Vec<f64>>,
    warnings: &'a [String],
}

fn write_grid(
    out: Option<&Path>,
    format: Format,
    header: &[(String, String)],
    field: &GridField,
) -> Outcome {
    for w in field.warnings() {
        eprintln!("warning: {w}");
    }
    match format {
        Format::Csv => emit(out, |w| write_grid_csv(w, header, field)),
        Format::Json => {
            let s = field.spec();
            let mut map = serde_json::Map::new();
            for (k, v) in header.iter().cloned().chain(grid_header(s, field.hbar())) {
                map.insert(k, serde_json::Value::String(v));
            }
            map.insert("version".into(), FORMAT_VERSION.into());
            let doc = GridJson {
                header: map,
                q: (0..s.nq).map(|i| s.q(i)).collect(),
                p: (0..s.np).map(|j| s.p(j)).collect(),
                w: (0..s.nq)
                    .map(|i| (0..s.np).map(|j| field.get(i, j).re).collect())
                    .collect(),
                warnings: field.warnings(),
            };
            emit(out, |w| write_json(w, &doc))
        }
    }
}

fn cmd_wigner(model: &ModelArgs, grid: &GridArgs, output: &OutputArgs) -> Outcome {
    let cfg = model.resolve().map_err(Failure::Usage)?;
    let spec = grid.spec().map_err(Failure::Usage)?;
    let format = output.format_or(Format::Csv);
    let mut header = cfg.header();
    match &cfg {
        ModelConfig::Harmonic { osc, n } => {
            let field = sample(&osc.wigner(*n), &spec)?;
            write_grid(output.out.as_deref(), format, &header, &field)
        }
        ModelConfig::Damped { lam, n } => {
            let field = sample(&damped_wigner(&DampedParams::new(*lam, *n)?), &spec)?;
            write_grid(output.out.as_deref(), format, &header, &field)
        }
        ModelConfig::Helium { params, nu, nv } => {
            let out = output.out.as_deref().ok_or_else(|| {
                Failure::Usage("helium writes one file per sector and needs --out".into())
            })?;
            let state = helium_excite_sectors(&helium_ground(params), *nu, *nv)?;
            let (wu, wv) = helium_wigner(&state)?;
            header.push(("sector".into(), String::new()));
            let last = header.len() - 1;
            for (sector, w, omega) in [("u", wu, params.omega), ("v", wv, params.omega_v())] {
                header[last].1 = sector.into();
                let mut h = header.clone();
                h.push(("omega_sector".into(), format!("{omega:.16e}")));
                let field = sample(&w, &spec)?;
                write_grid(Some(&with_suffix(out, sector)), format, &h, &field)?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Level {
    n: u32,
    #[serde(rename = "E")]
    e: f64,
}

#[derive(Serialize)]
struct HeliumLevel {
    nu: u32,
    nv: u32,
    #[serde(rename = "E")]
    e: f64,
    #[serde(rename = "E_first_order", skip_serializing_if = "Option::is_none")]
    e_first_order: Option<f64>,
}

fn write_table<T: Serialize>(
    out: Option<&Path>,
    format: Format,
    columns: &[&str],
    rows: &[T],
) -> Outcome {
    match format {
        Format::Json => emit(out, |w| write_json(w, rows)),
        Format::Csv => emit(out, |w| {
            writeln!(w, "# version: {FORMAT_VERSION}")?;
            writeln!(w, "{}", columns.join(","))?;
            for r in rows {
                let v = serde_json::to_value(r).map_err(|e| moyal::Error::Parse(e.to_string()))?;
                let cells: Vec<String> = columns
                    .iter()
                    .map(|c| match &v[*c] {
                        serde_json::Value::Number(x) if x.is_f64() => {
                            format!("{:.16e}", x.as_f64().unwrap())
                        }
                        serde_json::Value::String(s) => s.clone(),
                        serde_json::Value::Null => String::new(),
                        other => other.to_string(),
                    })
                    .collect();
                writeln!(w, "{}", cells.join(","))?;
            }
            Ok(())
        }),
    }
}

fn cmd_spectrum(model: &ModelArgs, n_max: u32, output: &OutputArgs) -> Outcome {
    let cfg = model.resolve().map_err(Failure::Usage)?;
    let format = output.format_or(Format::Json);
    let levels = |single: Option<u32>| -> Vec<u32> {
        match single {
            Some(n) => vec![n],
            None => (0..=n_max).collect(),
        }
    };
    match cfg {
        ModelConfig::Harmonic { osc, .. } => {
            let rows: Vec<Level> = levels(model.n)
                .into_iter()
                .map(|n| Level {
                    n,
                    e: osc.energy(n),
                })
                .collect();
            write_table(output.out.as_deref(), format, &["n", "E"], &rows)
        }
        ModelConfig::Damped { lam, .. } => {
            let mut rows = Vec::new();
            for n in levels(model.n) {
                rows.push(Level {
                    n,
                    e: damped_energy(&DampedParams::new(lam, n)?),
                });
            }
            write_table(output.out.as_deref(), format, &["n", "E"], &rows)
        }
        ModelConfig::Helium { params, .. } => {
            let us = levels(model.nu);
            let vs = levels(model.nv);
            let mut rows = Vec::new();
            for &nu in &us {
                for &nv in &vs {
                    rows.push(HeliumLevel {
                        nu,
                        nv,
                        e: helium_energy(nu, nv, &params),
                        e_first_order: (nu == 0 && nv == 0)
                            .then(|| helium_energy_first_order(&params)),
                    });
                }
            }
            write_table(
                output.out.as_deref(),
                format,
                &["nu", "nv", "E", "E_first_order"],
                &rows,
            )
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_negativity(
    model: &ModelArgs,
    method: MethodArg,
    n_max: u32,
    tol: f64,
    check_table1: bool,
    table_tol: f64,
    scan: Option<&[f64]>,
    scan_tol: f64,
    output: &OutputArgs,
) -> Outcome {
    if model.model == Model::Helium {
        return Err(Failure::Usage(
            "negativity is available for the harmonic and damped models".into(),
        ));
    }
    let cfg = model.resolve().map_err(Failure::Usage)?;
    let format = output.format_or(Format::Json);
    if let Some(lams) = scan {
        if model.model != Model::Damped {
            return Err(Failure::Usage("--lambda-scan needs --model damped".into()));
        }
        let n = model.n.unwrap_or(1);
        let report = lambda_scan(n, lams, scan_tol)?;
        emit(output.out.as_deref(), |w| write_json(w, &report))?;
        for g in &report.grid {
            eprintln!(
                "lambda={:+.3} grid eta={:.10} radial eta={:.10} diff={:.3e}",
                g.lam,
                g.eta,
                report.radial.eta,
                (g.eta - report.radial.eta).abs()
            );
        }
        return if report.pass {
            Ok(())
        } else {
            Err(Failure::Mismatch(format!(
                "lambda scan deviation {:.3e} exceeds {:.1e}",
                report.max_deviation, scan_tol
            )))
        };
    }
    let lam = match cfg {
        ModelConfig::Damped { lam, .. } => lam,
        _ => 0.0,
    };
    let method = match method {
        MethodArg::Radial => Method::Radial,
        MethodArg::Grid => Method::Grid,
    };
    let mut rows: Vec<NegativityRecord> = negativity_table(n_max, lam, method, tol)?;
    for r in &mut rows {
        r.model = model.model.name().into();
    }
    write_table(
        output.out.as_deref(),
        format,
        &["model", "n", "lam", "method", "eta", "err_estimate"],
        &rows,
    )?;
    if check_table1 {
        let mut worst = 0.0f64;
        for r in rows.iter().filter(|r| (r.n as usize) < REFERENCE_ETA.len()) {
            let reference = REFERENCE_ETA[r.n as usize];
            let diff = (r.eta - reference).abs();
            worst = worst.max(diff);
            eprintln!(
                "n={} eta={:.16} reference={:.16} diff={:.3e} {}",
                r.n,
                r.eta,
                reference,
                diff,
                if diff <= table_tol { "ok" } else { "MISMATCH" }
            );
        }
        if worst > table_tol {
            return Err(Failure::Mismatch(format!(
                "reference table differs by up to {worst:.3e} (tolerance {table_tol:.1e})"
            )));
        }
    }
    Ok(())
}

fn cmd_verify(nq: usize, fault: Option<FaultArg>, format: Option<Format>) -> Outcome {
    let opts = VerifyOptions {
        grid_n: nq,
        fault: fault.map(|FaultArg::DampedSign| Fault::DampedSign),
        ..VerifyOptions::default()
    };
    let checks = run_verify(&opts)?;
    match format {
        Some(Format::Json) => emit(None, |w| write_json(w, &checks))?,
        _ => {
            let mut out = io::stdout().lock();
            for c in &checks {
                writeln!(
                    out,
                    "{} {}: {:.3e} (tol {:.1e})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.tol
                )?;
            }
        }
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(Failure::Verify(format!(
            "{failed} of {} checks failed",
            checks.len()
        )));
    }
    Ok(())
}
