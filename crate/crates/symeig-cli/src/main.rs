//! `symeig` command line: structure checks, single surgeries, distance
//! certificates, Segre characteristics, pencil updates and batch experiment
//! runs.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use symeig::bounds::{bounds_report, BoundsReport};
use symeig::error::Error;
use symeig::io;
use symeig::pencil::{pencil_apply_update, pencil_eigs, pencil_select_update_pair, SympPencil};
use symeig::spectral::{
    eig_pairs, normalize_x, segre_characteristic, select_update_pair, DEFAULT_TOL_PAIR,
    DEFAULT_TOL_RANK,
};
use symeig::surgery::{apply_update, canonical_r, Branch};
use symeig::{C64, SympMatrix};
use symeig_cli::{parse_complex, run_fig1, run_fig2, run_fig3, ExperimentConfig};

#[derive(Parser)]
#[command(name = "symeig", version, about = "Structure-preserving eigenvalue surgery for complex symplectic matrices and pencils")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn complex_arg(s: &str) -> Result<C64, String> {
    parse_complex(s)
}

fn branch_arg(s: &str) -> Result<Branch, String> {
    match s {
        "1" => Ok(Branch::One),
        "2" => Ok(Branch::Two),
        other => Err(format!("branch must be 1 or 2, got {other}")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the symplecticity residual and the reciprocal pairing report.
    Check {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL_PAIR)]
        tol_pair: f64,
    },
    /// Replace one eigenvalue pair and write the updated matrix.
    Modify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_parser = complex_arg)]
        lambda1: C64,
        #[arg(long, value_parser = complex_arg)]
        mu: C64,
        #[arg(long, value_parser = branch_arg, default_value = "1")]
        branch: Branch,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print the distance certificate row for a prospective surgery.
    Bounds {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_parser = complex_arg)]
        lambda1: C64,
        #[arg(long, value_parser = complex_arg)]
        mu: C64,
        #[arg(long, value_parser = branch_arg, default_value = "1")]
        branch: Branch,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print the Segre characteristic of an eigenvalue as JSON.
    Segre {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_parser = complex_arg)]
        lambda: C64,
        #[arg(long, default_value_t = DEFAULT_TOL_RANK)]
        tol_rank: f64,
    },
    /// Structure-preserving pencil update from a JSON manifest.
    Pencil {
        #[arg(long)]
        pencil_manifest: PathBuf,
        #[arg(long, value_parser = complex_arg)]
        lambda1: C64,
        #[arg(long, value_parser = complex_arg)]
        mu: C64,
        #[arg(long, value_parser = branch_arg, default_value = "1")]
        branch: Branch,
        /// Where to write the updated A factor (B is unchanged).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Batch run: single-branch surgeries with distance certificates.
    Fig1(FigArgs),
    /// Batch run: both canonical branches per trial.
    Fig2(FigArgs),
    /// Coefficient sweep over a complex grid.
    Fig3 {
        #[arg(long, default_value_t = 20)]
        n_half: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        gamma_scale: f64,
        #[arg(long, default_value_t = 50)]
        grid_points: usize,
        #[arg(long, default_value_t = 1.0)]
        grid_halfwidth: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct FigArgs {
    #[arg(long, default_value_t = 20)]
    n_half: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    gamma_scale: f64,
    /// Re-verify condition-number preservation on every trial.
    #[arg(long)]
    audit: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl FigArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            n_half: self.n_half,
            trials: self.trials,
            seed: self.seed,
            gamma_scale: self.gamma_scale,
            audit: self.audit,
            ..Default::default()
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NotApplicable(_) => 3,
        Error::NumericalFailure { .. }
        | Error::PairingFailure { .. }
        | Error::InconsistentRoot { .. }
        | Error::InvalidEigenpair { .. }
        | Error::IllPosed(_)
        | Error::Lapack { .. } => 2,
        _ => 1,
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> symeig::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_symplectic(path: &std::path::Path) -> symeig::Result<SympMatrix> {
    let m = io::read_matrix_market(path)?;
    SympMatrix::new_default(m)
}

fn run(command: Command) -> symeig::Result<()> {
    match command {
        Command::Check { matrix, tol_pair } => {
            let m = io::read_matrix_market(&matrix)?;
            let residual = symeig::symplecticity_residual(&m)?;
            let norm = m.norm();
            println!("dimension: {}x{}", m.nrows(), m.ncols());
            println!("frobenius_norm: {norm}");
            println!("symplecticity_residual: {residual}");
            let s = SympMatrix::new_default(m)?;
            println!("structure: ok");
            let pairs = eig_pairs(&s, tol_pair)?;
            println!("reciprocal_pairs: {}", pairs.len());
            for (k, p) in pairs.iter().enumerate() {
                println!(
                    "pair {k}: lambda = {} partner = {} |lambda*partner - 1| = {:.3e}{}",
                    p.lambda,
                    p.partner,
                    p.product_error,
                    if p.self_paired { " (self-paired)" } else { "" }
                );
            }
            Ok(())
        }
        Command::Modify { matrix, lambda1, mu, branch, out, tol } => {
            let s = load_symplectic(&matrix)?;
            let pair = match select_update_pair(&s, lambda1, tol) {
                Ok(pair) => pair,
                Err(Error::NotApplicable(msg)) => {
                    // attach the Segre characteristic to the explanation
                    let segre =
                        segre_characteristic(s.entries(), lambda1, DEFAULT_TOL_RANK)
                            .map(|sc| format!("{:?}", sc.sizes))
                            .unwrap_or_else(|_| "unavailable".into());
                    return Err(Error::NotApplicable(format!(
                        "{msg}; Segre characteristic of the eigenvalue: {segre}"
                    )));
                }
                Err(e) => return Err(e),
            };
            let x = normalize_x(&pair)?;
            let coeffs = canonical_r(pair.lambda, mu, branch)?;
            let result = apply_update(&s, &x, &coeffs)?;
            println!("lambda1: {}", pair.lambda);
            println!("mu: {mu}");
            println!("branch: {}", branch.index());
            println!("pairing |x1^T J x2|: {}", pair.pairing.norm());
            println!("input_residual: {}", s.residual());
            println!("output_residual: {}", result.s_hat.residual());
            println!("delta_frobenius: {}", result.delta_frobenius);
            println!("rel_change: {}", result.delta_frobenius / s.norm_frobenius());
            if let Some(path) = out {
                io::write_matrix_market(&path, result.s_hat.entries())?;
                println!("written: {}", path.display());
            }
            Ok(())
        }
        Command::Bounds { matrix, lambda1, mu, branch, tol } => {
            let s = load_symplectic(&matrix)?;
            let pair = select_update_pair(&s, lambda1, tol)?;
            let report = bounds_report(&s, &pair, mu, branch)?;
            println!("{}", BoundsReport::CSV_HEADER);
            println!("{}", report.csv_row());
            Ok(())
        }
        Command::Segre { matrix, lambda, tol_rank } => {
            let m = io::read_matrix_market(&matrix)?;
            let segre = segre_characteristic(&m, lambda, tol_rank)?;
            let json = serde_json::to_string_pretty(&segre)
                .map_err(|e| Error::Parse(format!("segre json: {e}")))?;
            println!("{json}");
            Ok(())
        }
        Command::Pencil { pencil_manifest, lambda1, mu, branch, out, tol } => {
            let manifest = io::PencilManifest::load(&pencil_manifest)?;
            let (a, b) = manifest.read_matrices(&pencil_manifest)?;
            let p = SympPencil::new(a, b)?;
            println!("pencil_residual: {}", p.residual());
            let pair = pencil_select_update_pair(&p, lambda1, tol)?;
            let x = normalize_x(&pair)?;
            let coeffs = canonical_r(pair.lambda, mu, branch)?;
            let updated = pencil_apply_update(&p, &x, &coeffs)?;
            println!("lambda1: {}", pair.lambda);
            println!("mu: {mu}");
            println!("updated_pencil_residual: {}", updated.residual());
            println!(
                "a_rel_change: {}",
                (updated.a() - p.a()).norm() / p.a().norm()
            );
            let pairs = pencil_eigs(&updated, DEFAULT_TOL_PAIR)?;
            println!("updated_pairs: {}", pairs.len());
            if let Some(path) = out {
                io::write_matrix_market(&path, updated.a())?;
                println!("written: {}", path.display());
            }
            Ok(())
        }
        Command::Fig1(args) => {
            let out = run_fig1(&args.config())?;
            write_or_print(&args.out, &out.csv)
        }
        Command::Fig2(args) => {
            let out = run_fig2(&args.config())?;
            write_or_print(&args.out, &out.csv)
        }
        Command::Fig3 { n_half, seed, gamma_scale, grid_points, grid_halfwidth, out } => {
            let config = ExperimentConfig {
                n_half,
                seed,
                gamma_scale,
                grid_points,
                grid_halfwidth,
                ..Default::default()
            };
            let result = run_fig3(&config)?;
            eprintln!(
                "argmin cell: ({}, {}); zero cell: ({}, {}); lambda1 = {}; mu = {}",
                result.argmin.0,
                result.argmin.1,
                result.zero_cell.0,
                result.zero_cell.1,
                result.lambda1,
                result.mu
            );
            write_or_print(&out, &result.csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's default exit code for usage errors is 2; this tool
            // reserves 2 for numerical failures.
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
