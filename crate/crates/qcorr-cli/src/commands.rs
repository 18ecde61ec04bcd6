//! Command dispatch: demos, file-driven reconstruction, Schmidt and witness
//! utilities.
//!
//! Exit codes: 0 success, 2 input error (usage text on stderr), 3
//! inconsistent-data warning path (output still written).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qcorr_core::hardy;
use qcorr_core::linalg::Partition;
use qcorr_core::measurement::build_setup;
use qcorr_core::operators::{singlet_ket, singlet_projector};
use qcorr_core::sampling::PRNG_ALGORITHM;
use qcorr_core::ssc::{
    correlation_table, purity_witness, reconstruct, singlet_from_anticorrelations, PurityVerdict,
};
use qcorr_core::states::{schmidt, DensityMatrix};
use qcorr_core::Complex64;

use crate::distio::distribution_to_csv;
use crate::jsonfmt::{fmt_f64, to_json};
use crate::statefile::{density_to_json, load_state, LoadedState};
use crate::tablefile::{load_table, table_to_json};

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Quantum correlation toolkit: correlation tables, state reconstruction, purity witnesses, measurement and Hardy demos"
)]
pub struct Cli {
    /// Structural tolerance for validation, in (0, 1e-2]
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Seed recorded in output metadata for reproducible random streams
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Report format; defaults to json (demo measurement defaults to csv)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output path; a directory for `demo hardy`, a file otherwise
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run a built-in demonstration
    #[command(subcommand)]
    Demo(DemoCommand),
    /// Rebuild a density matrix from a correlation-table file
    Reconstruct {
        /// Correlation table (JSON)
        table: PathBuf,
    },
    /// Schmidt coefficients and reduced purities of a bipartite ket file
    Schmidt {
        /// State file of kind "ket"
        state: PathBuf,
        /// Override the two-factor split, e.g. --dims 2,2
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// External-correlation witness for a density file, or the pure verdict
    Witness {
        /// State file of kind "density"
        state: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum DemoCommand {
    /// Certify the singlet from three anticorrelations and round-trip its
    /// full correlation table
    Singlet,
    /// Hardy zero pattern, conditional chain and inconsistency verdict
    Hardy {
        /// Rotation angle of the second observable, unprimed side (radians)
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        theta: f64,
        /// Rotation angle on the primed side; defaults to --theta
        #[arg(long)]
        theta_prime: Option<f64>,
        /// Also run the grid maximization of the witness probability
        #[arg(long)]
        maximize: bool,
        /// Grid size per axis for --maximize
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Decoherence trace of the measurement interaction: t, specimen
    /// purity, phase-sensitive cross correlation
    Measurement {
        /// Number of grid steps for t in [0, 1]
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Relative phase of the second amplitude (radians)
        #[arg(long, default_value_t = 0.0)]
        phase: f64,
    },
}

#[derive(Serialize, Clone, Copy)]
struct Meta {
    tol: f64,
    seed: u64,
    prng: &'static str,
}

struct Config {
    tol: f64,
    meta: Meta,
    format: Option<Format>,
    output: Option<PathBuf>,
}

pub fn dispatch(cli: Cli) -> i32 {
    if !(cli.tol > 0.0 && cli.tol <= 1e-2) {
        eprintln!("error: --tol must lie in (0, 1e-2], got {}", cli.tol);
        return 2;
    }
    let config = Config {
        tol: cli.tol,
        meta: Meta { tol: cli.tol, seed: cli.seed, prng: PRNG_ALGORITHM },
        format: cli.format,
        output: cli.output,
    };
    let result = match cli.command {
        Command::Demo(DemoCommand::Singlet) => demo_singlet(&config),
        Command::Demo(DemoCommand::Hardy { theta, theta_prime, maximize, grid }) => {
            demo_hardy(&config, theta, theta_prime.unwrap_or(theta), maximize, grid)
        }
        Command::Demo(DemoCommand::Measurement { steps, phase }) => {
            demo_measurement(&config, steps, phase)
        }
        Command::Reconstruct { table } => cmd_reconstruct(&config, &table),
        Command::Schmidt { state, dims } => cmd_schmidt(&config, &state, dims),
        Command::Witness { state } => cmd_witness(&config, &state),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn write_or_print(output: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn kv_csv(rows: &[(&str, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(k);
        out.push(',');
        out.push_str(v);
        out.push('\n');
    }
    out
}

// --- demo singlet ---------------------------------------------------------

#[derive(Serialize)]
struct SingletDoc {
    meta: Meta,
    anticorrelations: [f64; 3],
    singlet_mean: f64,
    certified: bool,
    reconstruction: SingletReconstruction,
}

#[derive(Serialize)]
struct SingletReconstruction {
    frobenius_error: f64,
    trace: f64,
    min_eigenvalue: f64,
}

fn demo_singlet(config: &Config) -> Result<i32, String> {
    let cert = singlet_from_anticorrelations(-1.0, -1.0, -1.0).map_err(|e| e.to_string())?;
    let w = DensityMatrix::from_ket(&singlet_ket()).map_err(|e| e.to_string())?;
    let p = Partition::bipartite(2, 2).map_err(|e| e.to_string())?;
    let table = correlation_table(&w, &p).map_err(|e| e.to_string())?;
    let rec = reconstruct(&table);
    let error = rec.matrix.sub(singlet_projector().matrix()).frobenius_norm();
    let doc = SingletDoc {
        meta: config.meta,
        anticorrelations: [-1.0, -1.0, -1.0],
        singlet_mean: cert.mean,
        certified: cert.certified,
        reconstruction: SingletReconstruction {
            frobenius_error: error,
            trace: rec.trace,
            min_eigenvalue: rec.min_eigenvalue,
        },
    };
    let content = match config.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", to_json(&doc)),
        Format::Csv => kv_csv(&[
            ("singlet_mean", fmt_f64(doc.singlet_mean)),
            ("certified", doc.certified.to_string()),
            ("reconstruction_frobenius_error", fmt_f64(error)),
            ("reconstruction_trace", fmt_f64(rec.trace)),
            ("reconstruction_min_eigenvalue", fmt_f64(rec.min_eigenvalue)),
        ]),
    };
    write_or_print(&config.output, &content)?;
    Ok(0)
}

// --- demo hardy -----------------------------------------------------------

#[derive(Serialize)]
struct HardyDoc {
    meta: Meta,
    theta: f64,
    theta_prime: f64,
    overlap: f64,
    p_1r_1pr: f64,
    p_1g_2pg: f64,
    p_2g_1pg: f64,
    witness_p_2g_2pg: f64,
    p_1r_given_2pg: f64,
    p_1pg_given_1r: f64,
    p_2r_given_1pg: f64,
    implied_p_2r_given_2pg: f64,
    measured_p_2g_given_2pg: f64,
    inconsistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    maximum: Option<MaximumDoc>,
}

#[derive(Serialize)]
struct MaximumDoc {
    grid: usize,
    theta: f64,
    theta_prime: f64,
    p_max: f64,
}

fn demo_hardy(
    config: &Config,
    theta: f64,
    theta_prime: f64,
    maximize: bool,
    grid: usize,
) -> Result<i32, String> {
    let instance = hardy::hardy_state(theta, theta_prime).map_err(|e| e.to_string())?;
    let report = hardy::paradox_report(&instance, config.tol).map_err(|e| e.to_string())?;
    let tables = hardy::hardy_joint_tables(&instance).map_err(|e| e.to_string())?;
    let maximum = if maximize {
        let m = hardy::maximize_paradox(grid).map_err(|e| e.to_string())?;
        Some(MaximumDoc {
            grid,
            theta: m.theta_unprimed,
            theta_prime: m.theta_primed,
            p_max: m.p_max,
        })
    } else {
        None
    };
    let doc = HardyDoc {
        meta: config.meta,
        theta,
        theta_prime,
        overlap: instance.overlap(),
        p_1r_1pr: report.p_1r_1pr,
        p_1g_2pg: report.p_1g_2pg,
        p_2g_1pg: report.p_2g_1pg,
        witness_p_2g_2pg: report.witness,
        p_1r_given_2pg: report.chain.p_1r_given_2pg,
        p_1pg_given_1r: report.chain.p_1pg_given_1r,
        p_2r_given_1pg: report.chain.p_2r_given_1pg,
        implied_p_2r_given_2pg: report.implied_p_2r_given_2pg,
        measured_p_2g_given_2pg: report.measured_p_2g_given_2pg,
        inconsistent: report.inconsistent,
        maximum,
    };
    let report_content = match config.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", to_json(&doc)),
        Format::Csv => {
            let mut rows = vec![
                ("theta", fmt_f64(doc.theta)),
                ("theta_prime", fmt_f64(doc.theta_prime)),
                ("overlap", fmt_f64(doc.overlap)),
                ("p_1r_1pr", fmt_f64(doc.p_1r_1pr)),
                ("p_1g_2pg", fmt_f64(doc.p_1g_2pg)),
                ("p_2g_1pg", fmt_f64(doc.p_2g_1pg)),
                ("witness_p_2g_2pg", fmt_f64(doc.witness_p_2g_2pg)),
                ("p_1r_given_2pg", fmt_f64(doc.p_1r_given_2pg)),
                ("p_1pg_given_1r", fmt_f64(doc.p_1pg_given_1r)),
                ("p_2r_given_1pg", fmt_f64(doc.p_2r_given_1pg)),
                ("implied_p_2r_given_2pg", fmt_f64(doc.implied_p_2r_given_2pg)),
                ("measured_p_2g_given_2pg", fmt_f64(doc.measured_p_2g_given_2pg)),
                ("inconsistent", doc.inconsistent.to_string()),
            ];
            if let Some(m) = &doc.maximum {
                rows.push(("maximum_theta", fmt_f64(m.theta)));
                rows.push(("maximum_theta_prime", fmt_f64(m.theta_prime)));
                rows.push(("maximum_p_max", fmt_f64(m.p_max)));
            }
            kv_csv(&rows)
        }
    };
    let named_tables = [
        ("table_11", &tables.t11),
        ("table_12", &tables.t12),
        ("table_21", &tables.t21),
        ("table_22", &tables.t22),
    ];
    match &config.output {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
            let ext = match config.format.unwrap_or(Format::Json) {
                Format::Json => "json",
                Format::Csv => "csv",
            };
            let report_path = dir.join(format!("hardy_report.{ext}"));
            std::fs::write(&report_path, &report_content)
                .map_err(|e| format!("cannot write {}: {e}", report_path.display()))?;
            for (name, table) in named_tables {
                let path = dir.join(format!("hardy_{name}.csv"));
                std::fs::write(&path, distribution_to_csv(table))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
        }
        None => {
            print!("{report_content}");
            for (name, table) in named_tables {
                print!("# {name}\n{}", distribution_to_csv(table));
            }
        }
    }
    Ok(0)
}

// --- demo measurement -----------------------------------------------------

#[derive(Serialize)]
struct MeasurementDoc {
    meta: Meta,
    steps: usize,
    phase: f64,
    columns: [&'static str; 3],
    rows: Vec<[f64; 3]>,
}

fn demo_measurement(config: &Config, steps: usize, phase: f64) -> Result<i32, String> {
    let setup = build_setup(2, 2, 0).map_err(|e| e.to_string())?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let alphas = [
        Complex64::new(s, 0.0),
        Complex64::new(s * phase.cos(), s * phase.sin()),
    ];
    let trace = setup.decoherence_trace(&alphas, steps).map_err(|e| e.to_string())?;
    let rows: Vec<[f64; 3]> = trace.iter().map(|&(t, p, c)| [t, p, c]).collect();
    let content = match config.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("t,purity,cross_phase\n");
            for [t, p, c] in &rows {
                out.push_str(&format!("{},{},{}\n", fmt_f64(*t), fmt_f64(*p), fmt_f64(*c)));
            }
            out
        }
        Format::Json => format!(
            "{}\n",
            to_json(&MeasurementDoc {
                meta: config.meta,
                steps,
                phase,
                columns: ["t", "purity", "cross_phase"],
                rows,
            })
        ),
    };
    write_or_print(&config.output, &content)?;
    Ok(0)
}

// --- reconstruct ----------------------------------------------------------

fn cmd_reconstruct(config: &Config, table_path: &Path) -> Result<i32, String> {
    let table = load_table(table_path)?;
    let rec = reconstruct(&table);
    let state_json = format!(
        "{}\n",
        density_to_json(&rec.matrix, table.partition().dims())
    );
    let validation =
        qcorr_core::linalg::validate_density(&rec.matrix, config.tol).map_err(|e| e.to_string())?;
    let ok = validation.ok && rec.trace_consistent;
    let report = format!(
        "trace {}\ntrace_deviation {}\nmin_eigenvalue {}\nhermiticity_deviation {}\nvalidation {}\n",
        fmt_f64(rec.trace),
        fmt_f64(rec.trace_deviation),
        fmt_f64(rec.min_eigenvalue),
        fmt_f64(validation.hermiticity_deviation),
        if ok { "pass" } else { "fail" }
    );
    match &config.output {
        Some(path) => {
            std::fs::write(path, &state_json)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            print!("{report}");
        }
        None => {
            print!("{state_json}");
            eprint!("{report}");
        }
    }
    if ok {
        Ok(0)
    } else {
        eprintln!(
            "warning: reconstructed matrix fails validation (trace {}); output written anyway",
            fmt_f64(rec.trace)
        );
        Ok(3)
    }
}

// --- schmidt ---------------------------------------------------------------

#[derive(Serialize)]
struct SchmidtDoc {
    meta: Meta,
    dims: Vec<usize>,
    coefficients: Vec<f64>,
    reduced_purity: [f64; 2],
}

fn cmd_schmidt(config: &Config, state_path: &Path, dims: Option<Vec<usize>>) -> Result<i32, String> {
    let loaded = load_state(state_path, config.tol)?;
    let (ket, file_partition) = match loaded {
        LoadedState::Ket { ket, partition } => (ket, partition),
        LoadedState::Density { .. } => {
            return Err("schmidt requires a ket state file, got a density".into());
        }
    };
    let partition = match dims {
        Some(dims) => {
            let p = Partition::new(dims).map_err(|e| format!("bad --dims: {e}"))?;
            if p.total_dim() != ket.dim() {
                return Err(format!(
                    "dims mismatch: --dims product {} does not match {} amplitudes",
                    p.total_dim(),
                    ket.dim()
                ));
            }
            p
        }
        None => file_partition,
    };
    if partition.factors() != 2 {
        return Err(format!(
            "schmidt needs exactly two factors, state has {} (override with --dims)",
            partition.factors()
        ));
    }
    let ket = ket.normalize().map_err(|e| e.to_string())?;
    let form = schmidt(&ket, &partition).map_err(|e| e.to_string())?;
    let w = DensityMatrix::from_ket(&ket).map_err(|e| e.to_string())?;
    let pa = w.reduce(&partition, &[0]).map_err(|e| e.to_string())?.purity();
    let pb = w.reduce(&partition, &[1]).map_err(|e| e.to_string())?.purity();
    let doc = SchmidtDoc {
        meta: config.meta,
        dims: partition.dims().to_vec(),
        coefficients: form.coefficients.clone(),
        reduced_purity: [pa, pb],
    };
    let content = match config.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", to_json(&doc)),
        Format::Csv => {
            let mut rows: Vec<(&str, String)> = vec![
                ("reduced_purity_left", fmt_f64(pa)),
                ("reduced_purity_right", fmt_f64(pb)),
            ];
            let coeff_strs: Vec<String> =
                form.coefficients.iter().map(|c| fmt_f64(*c)).collect();
            let joined = coeff_strs.join(";");
            rows.insert(0, ("coefficients", joined));
            kv_csv(&rows)
        }
    };
    write_or_print(&config.output, &content)?;
    Ok(0)
}

// --- witness ----------------------------------------------------------------

#[derive(Serialize)]
struct WitnessDoc {
    meta: Meta,
    pure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessBody>,
}

#[derive(Serialize)]
struct WitnessBody {
    extension_dims: Vec<usize>,
    extension_state: Vec<[f64; 2]>,
    observable_a: Vec<Vec<[f64; 2]>>,
    observable_b: Vec<Vec<[f64; 2]>>,
    predicted_mean: f64,
    predicted_singles: [f64; 2],
}

fn matrix_rows(m: &qcorr_core::linalg::ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

fn cmd_witness(config: &Config, state_path: &Path) -> Result<i32, String> {
    let loaded = load_state(state_path, config.tol)?;
    let density = match loaded {
        LoadedState::Density { density, .. } => density,
        LoadedState::Ket { .. } => {
            return Err("witness requires a density state file, got a ket".into());
        }
    };
    let doc = match purity_witness(&density).map_err(|e| e.to_string())? {
        PurityVerdict::Pure => WitnessDoc {
            meta: config.meta,
            pure: true,
            message: Some("pure - no witness exists"),
            witness: None,
        },
        PurityVerdict::Witness(w) => WitnessDoc {
            meta: config.meta,
            pure: false,
            message: None,
            witness: Some(WitnessBody {
                extension_dims: w.extension_partition.dims().to_vec(),
                extension_state: w
                    .extension_state
                    .amplitudes()
                    .iter()
                    .map(|z| [z.re, z.im])
                    .collect(),
                observable_a: matrix_rows(w.obs_a.matrix()),
                observable_b: matrix_rows(w.obs_b.matrix()),
                predicted_mean: w.predicted_mean,
                predicted_singles: [w.predicted_singles.0, w.predicted_singles.1],
            }),
        },
    };
    let content = match config.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", to_json(&doc)),
        Format::Csv => match &doc.witness {
            None => kv_csv(&[("pure", "true".into())]),
            Some(body) => kv_csv(&[
                ("pure", "false".into()),
                ("predicted_mean", fmt_f64(body.predicted_mean)),
                ("predicted_single_a", fmt_f64(body.predicted_singles[0])),
                ("predicted_single_b", fmt_f64(body.predicted_singles[1])),
                (
                    "extension_dims",
                    body.extension_dims
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(";"),
                ),
            ]),
        },
    };
    write_or_print(&config.output, &content)?;
    Ok(0)
}

/// Emits the singlet correlation table (used to regenerate the shipped
/// data file).
pub fn singlet_table_json() -> String {
    let w = DensityMatrix::from_ket(&singlet_ket()).expect("singlet is a valid state");
    let p = Partition::bipartite(2, 2).expect("two qubits");
    let table = correlation_table(&w, &p).expect("dimensions match");
    format!("{}\n", table_to_json(&table))
}
