use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use indist::doublewell::{self, SweepConfig};
use indist::entropy::{entanglement_lt, entanglement_sq};
use indist::format::g12;
use indist::lfc::{localized_partial_trace, to_fock, SpatialRegion};
use indist::parser::{canonical_print, parse_document, Document};
use indist::reduce::trace_one_particle;
use indist::verify::verify_equivalence;
use indist::{DensityMatrix, Reduced, Statistics};

#[derive(Parser)]
#[command(
    name = "indist",
    version,
    about = "Two-particle entanglement of indistinguishable particles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceMethod {
    /// Localized partial trace on unlabeled kets.
    Lfc,
    /// Annihilation-operator trace in Fock space.
    Sq,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntropyMethod {
    /// Entropy of the localized reduced state.
    Lt,
    /// Second-quantized entropy with the ln N offset removed.
    Sq,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a state file.
    Parse { file: PathBuf },
    /// Print the single-particle reduced matrix as JSON.
    Reduce {
        #[arg(long, value_enum)]
        method: ReduceMethod,
        /// Comma-separated spatial tags, or `all`.
        #[arg(long)]
        region: String,
        file: PathBuf,
    },
    /// Print an entanglement entropy.
    Entropy {
        #[arg(long, value_enum)]
        method: EntropyMethod,
        /// Comma-separated spatial tags, or `all`; required for `lt`.
        #[arg(long)]
        region: Option<String>,
        file: PathBuf,
    },
    /// Write the double-well sweep as CSV.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        chi: Vec<f64>,
        /// Angles in radians; `pi`, `pi/4`, `3*pi/4` are accepted.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: Vec<f64>,
        /// `boson`, `fermion`, `+1` or `-1`.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        stat: Vec<Statistics>,
        /// Number of equally spaced a² samples on [0, 1].
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        grid: u32,
        /// Cross-check every row against the generic pipelines.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare both reductions on random states and print a JSON report.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        spatial: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        internal: u32,
        #[arg(long)]
        seed: u64,
    },
}

fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let err = || format!("invalid angle `{text}`");
    let (t, sign) = match t.strip_prefix('-') {
        Some(rest) => (rest, -1.0),
        None => (t, 1.0),
    };
    let (numerator, denominator) = match t.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| err())?),
        None => (t, 1.0),
    };
    let factor = match numerator.strip_suffix("pi") {
        Some("") => 1.0,
        Some(k) => k.trim_end_matches('*').parse::<f64>().map_err(|_| err())?,
        None => return Err(err()),
    };
    Ok(sign * factor * std::f64::consts::PI / denominator)
}

#[derive(Serialize)]
struct Label<'a> {
    spatial: &'a str,
    internal: &'a str,
}

#[derive(Serialize)]
struct ReduceOutput<'a> {
    basis: Vec<Label<'a>>,
    region: Vec<String>,
    trace: f64,
    unnormalized: Vec<Vec<[f64; 2]>>,
    normalized: Vec<Vec<[f64; 2]>>,
}

fn rows(m: &DensityMatrix) -> Vec<Vec<[f64; 2]>> {
    let e = m.entries();
    (0..e.nrows())
        .map(|r| {
            (0..e.ncols())
                .map(|c| [e[(r, c)].re, e[(r, c)].im])
                .collect()
        })
        .collect()
}

fn load(path: &Path) -> Result<Document, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = parse_document(&text).map_err(|e| format!("{}:{e}", path.display()))?;
    for w in &doc.warnings {
        eprintln!("warning: {}:{w}", path.display());
    }
    Ok(doc)
}

fn region_of(doc: &Document, tags: &str) -> Result<SpatialRegion, String> {
    if tags == "all" {
        return Ok(SpatialRegion::all(&doc.basis));
    }
    SpatialRegion::new(&doc.basis, tags.split(',').map(str::trim)).map_err(|e| e.to_string())
}

fn run(command: Command) -> Result<(), String> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let fail = |e: indist::Error| e.to_string();
    match command {
        Command::Parse { file } => {
            let doc = load(&file)?;
            write!(out, "{}", canonical_print(&doc.state)).map_err(|e| e.to_string())?;
        }
        Command::Reduce {
            method,
            region,
            file,
        } => {
            let doc = load(&file)?;
            let region = region_of(&doc, &region)?;
            let reduced: Reduced = match method {
                ReduceMethod::Lfc => localized_partial_trace(&doc.state, &region).map_err(fail)?,
                ReduceMethod::Sq => {
                    let fock = to_fock(&doc.state).map_err(fail)?;
                    trace_one_particle(&fock, &region.mode_indices(&doc.basis)).map_err(fail)?
                }
            };
            let output = ReduceOutput {
                basis: doc
                    .basis
                    .modes()
                    .iter()
                    .map(|m| Label {
                        spatial: &m.spatial,
                        internal: &m.internal,
                    })
                    .collect(),
                region: region.tags().map(str::to_string).collect(),
                trace: reduced.raw.trace_value(),
                unnormalized: rows(&reduced.raw),
                normalized: rows(&reduced.normalized),
            };
            let json = serde_json::to_string_pretty(&output).map_err(|e| e.to_string())?;
            writeln!(out, "{json}").map_err(|e| e.to_string())?;
        }
        Command::Entropy {
            method,
            region,
            file,
        } => {
            let doc = load(&file)?;
            let value = match method {
                EntropyMethod::Lt => {
                    let region = region.ok_or("`--method lt` needs `--region`")?;
                    entanglement_lt(&doc.state, &region_of(&doc, &region)?).map_err(fail)?
                }
                EntropyMethod::Sq => {
                    entanglement_sq(&to_fock(&doc.state).map_err(fail)?).map_err(fail)?
                }
            };
            writeln!(out, "{}", g12(value)).map_err(|e| e.to_string())?;
        }
        Command::Sweep {
            chi,
            theta,
            stat,
            grid,
            verify,
            out: path,
        } => {
            let config = SweepConfig {
                a2: doublewell::a2_grid(grid as usize),
                theta,
                chi,
                statistics: stat,
                verify,
            };
            let rows = doublewell::sweep(&config).map_err(fail)?;
            let file = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let mut writer = BufWriter::new(file);
            doublewell::write_csv(&rows, &mut writer)
                .and_then(|()| writer.flush())
                .map_err(|e| format!("{}: {e}", path.display()))?;
        }
        Command::Verify {
            trials,
            spatial,
            internal,
            seed,
        } => {
            let report =
                verify_equivalence(trials as usize, spatial as usize, internal as usize, seed)
                    .map_err(fail)?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            writeln!(out, "{json}").map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
