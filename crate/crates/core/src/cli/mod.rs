//! Command-line frontend.
//!
//! Spectra and signatures are written as CSV, everything else as JSON, to
//! `--out` when given and to standard output otherwise. Exit status is 0 on
//! success, 1 for numerical or domain failures and 2 for usage or
//! configuration errors.

pub mod config;
pub mod expr;
pub mod io;
pub mod selfcheck;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::asymptotics::{self, DEFAULT_ORDER};
use crate::dn_map;
use crate::error::{Error, Result};
use crate::inverse;
use crate::sturm_liouville;
use crate::transversal;
use crate::warping;

pub use config::{load_config, ProfileSpec, RunConfig};
pub use expr::parse_expression;

#[derive(Debug, Parser)]
#[command(name = "steklov", version, about = "Steklov spectra of warped-product cylinders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steklov spectrum for modes 0..=m_max as CSV.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "m-max")]
        m_max: Option<usize>,
    },
    /// DN block and its eigenvalues at one transversal eigenvalue.
    Block {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Characteristic and Weyl-Titchmarsh functions at a spectral point.
    Wt {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leading Dirichlet roots of the reduced potential.
    Alphas {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expansion coefficients and eigenvalue predictions per mode.
    Asym {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long = "m-max")]
        m_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boundary data recovered from a spectrum.
    Recover {
        #[arg(long)]
        config: PathBuf,
        /// Spectrum CSV to read instead of computing one.
        #[arg(long)]
        spectrum: Option<PathBuf>,
        #[arg(long = "fit-from")]
        fit_from: Option<usize>,
        #[arg(long = "fit-to")]
        fit_to: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compares the spectra of two configurations.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long = "m-max")]
        m_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identical / reflected / distinct verdict for two profiles.
    Probe {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long = "m-max")]
        m_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the trace/determinant signature of `a` as CSV.
        #[arg(long)]
        signature: Option<PathBuf>,
    },
    /// Closed-form oracle suite.
    Selfcheck,
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn profile_and_potential(cfg: &RunConfig) -> Result<(warping::WarpingProfile, warping::Potential)> {
    let profile = cfg.warping_profile()?;
    let potential = warping::build_potential(&profile, cfg.node_count)?;
    Ok((profile, potential))
}

fn spectrum_for(cfg: &RunConfig, m_max: usize) -> Result<dn_map::SteklovSpectrum> {
    let (profile, potential) = profile_and_potential(cfg)?;
    dn_map::spectrum_from_potential(&profile, &potential, m_max)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Spectrum { config, out, m_max } => {
            let cfg = load_config(&config)?;
            let spectrum = spectrum_for(&cfg, m_max.unwrap_or(cfg.m_max))?;
            let target = out.or(cfg.output_path);
            io::write_spectrum_csv(sink(target.as_deref())?, &spectrum)
        }
        Command::Block { config, mu, out } => {
            let cfg = load_config(&config)?;
            let (_, potential) = profile_and_potential(&cfg)?;
            let block = dn_map::dn_block(&potential, mu, 0)?;
            let (minus, plus) = dn_map::block_eigenvalues(&block);
            emit_json(
                &json!({
                    "mu": mu,
                    "a11": block.a11,
                    "a12": block.a12,
                    "a21": block.a21,
                    "a22": block.a22,
                    "trace": block.trace(),
                    "det": block.det(),
                    "lambda_minus": minus,
                    "lambda_plus": plus,
                }),
                out.as_deref(),
            )
        }
        Command::Wt { config, z, order, out } => {
            let cfg = load_config(&config)?;
            let (_, potential) = profile_and_potential(&cfg)?;
            let values = sturm_liouville::fundamental_at(&potential, z)?;
            let (m, n) = sturm_liouville::weyl_from(&values)?;
            let expansion = if z > 0.0 {
                let coeffs = asymptotics::riccati_coefficients(&potential, order)?;
                let (pm, pn) = asymptotics::wt_expansion(&coeffs, z.sqrt());
                json!({ "order": order, "minus_m": pm, "minus_n": pn })
            } else {
                serde_json::Value::Null
            };
            emit_json(
                &json!({
                    "z": z,
                    "delta_sign": values.delta.mantissa.signum(),
                    "delta_ln_abs": values.delta.ln_abs(),
                    "m": m,
                    "n": n,
                    "expansion": expansion,
                }),
                out.as_deref(),
            )
        }
        Command::Alphas { config, count, out } => {
            let cfg = load_config(&config)?;
            let (_, potential) = profile_and_potential(&cfg)?;
            let alphas = sturm_liouville::dirichlet_alphas(&potential, count)?;
            emit_json(&json!({ "alphas": alphas }), out.as_deref())
        }
        Command::Asym { config, order, m_max, out } => {
            let cfg = load_config(&config)?;
            let (profile, potential) = profile_and_potential(&cfg)?;
            let coeffs = asymptotics::riccati_coefficients(&potential, order)?;
            let m_max = m_max.unwrap_or(cfg.m_max);
            let spectrum = dn_map::spectrum_from_potential(&profile, &potential, m_max)?;
            let mut rows = Vec::new();
            for m in 1..=m_max {
                let mu = transversal::kappa(cfg.dimension, m);
                let p = asymptotics::vp_prediction(&potential, &coeffs, mu)?;
                let values: Vec<f64> = spectrum
                    .entries
                    .iter()
                    .filter(|e| e.m == m)
                    .map(|e| e.value)
                    .collect();
                rows.push(json!({
                    "m": m,
                    "mu": mu,
                    "lambda_minus": values[0],
                    "lambda_plus": values[1],
                    "leading": [p.leading.0, p.leading.1],
                    "expansion": [p.expansion.0, p.expansion.1],
                    "refined": [p.refined.0, p.refined.1],
                }));
            }
            emit_json(
                &json!({
                    "order": coeffs.order,
                    "beta": coeffs.beta,
                    "gamma": coeffs.gamma,
                    "predictions": rows,
                }),
                out.as_deref(),
            )
        }
        Command::Recover {
            config,
            spectrum,
            fit_from,
            fit_to,
            out,
        } => {
            let cfg = load_config(&config)?;
            let spec = match spectrum {
                Some(path) => io::read_spectrum_csv(File::open(path)?, cfg.dimension, cfg.frequency)?,
                None => spectrum_for(&cfg, fit_to.unwrap_or(cfg.m_max).max(cfg.m_max))?,
            };
            let to = fit_to.unwrap_or(spec.m_max);
            let from = fit_from.unwrap_or((to / 2).max(1));
            let data = inverse::recover_boundary(&spec, from..=to)?;
            emit_json(&data, out.as_deref())
        }
        Command::Compare { a, b, tol, m_max, out } => {
            let (ca, cb) = (load_config(&a)?, load_config(&b)?);
            let m_max = m_max.unwrap_or(ca.m_max);
            let report = inverse::isospectral_compare(&spectrum_for(&ca, m_max)?, &spectrum_for(&cb, m_max)?, tol)?;
            let verdict = if report.matched { "isospectral" } else { "distinct" };
            emit_json(
                &json!({
                    "matched": report.matched,
                    "max_deviation": report.max_deviation,
                    "verdict": verdict,
                    "compared": report.compared,
                    "exceeding": report.exceeding,
                }),
                out.as_deref(),
            )
        }
        Command::Probe {
            a,
            b,
            m_max,
            out,
            signature,
        } => {
            let (ca, cb) = (load_config(&a)?, load_config(&b)?);
            let (pa, pb) = (ca.warping_profile()?, cb.warping_profile()?);
            let m_max = m_max.unwrap_or(ca.m_max);
            let nodes = ca.node_count.max(cb.node_count);
            let report = inverse::uniqueness_probe(&pa, &pb, m_max, nodes)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(path) = signature {
                let sig = inverse::trace_det_signature(&pa, 0..=m_max, nodes)?;
                io::write_signature_csv(File::create(path)?, &sig)?;
            }
            emit_json(&report, out.as_deref())
        }
        Command::Selfcheck => {
            let outcomes = selfcheck::run_all();
            let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
            for o in &outcomes {
                let mark = if o.passed { "PASS" } else { "FAIL" };
                println!("{mark}  {:width$}  {}", o.name, o.detail);
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                return Err(Error::Evaluation(format!("{failed} self-check(s) failed")));
            }
            Ok(())
        }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit status.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}
