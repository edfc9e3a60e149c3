use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use spinstab_core::torus::{tt_spectrum, TorusDescriptor};
use spinstab_core::warped::{oracle_csv, oracle_rows, WarpedDescriptor};
use spinstab_core::{run_suite, Config, SuiteName};

const THREADS_VAR: &str = "SPINSTAB_THREADS";

#[derive(Parser)]
#[command(name = "spinstab", version, about = "Verification suites for parallel-spinor stability")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Base seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Fourier cutoff for n <= 4.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Multiplier applied to every floating-point tolerance.
    #[arg(long, global = true)]
    tolerance_scale: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its JSON report.
    Verify {
        /// clifford, curvalg, torus, g2, warped or all.
        suite: String,
    },
    /// Warped-product constructions.
    Warped {
        #[command(subcommand)]
        action: WarpedAction,
    },
    /// Lowest TT Lichnerowicz levels and λ(g) of a torus metric as CSV.
    Spectrum { descriptor: PathBuf, count: usize },
}

#[derive(Subcommand)]
enum WarpedAction {
    /// Build the metric and write its JSON summary with the mass.
    Build { descriptor: PathBuf },
    /// Scan S̃ and write the samples as CSV.
    Scan { descriptor: PathBuf },
    /// Compare the scalar-curvature formula with finite differences as CSV.
    Oracle { descriptor: PathBuf },
}

enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Check(e)
    }
}

fn usage<T, E: Into<anyhow::Error>>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.into()))
}

fn config(common: &Common) -> Result<Config, Failure> {
    let mut cfg = match &common.config {
        Some(p) => usage(Config::load(p))?,
        None => Config::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(c) = common.cutoff {
        cfg.cutoff = c;
    }
    if let Some(t) = common.tolerance_scale {
        cfg.tolerance_scale = t;
    }
    usage(cfg.validate())?;
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => usage(fs::write(p, text).with_context(|| format!("writing {}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    usage(fs::read_to_string(path).with_context(|| format!("reading {}", path.display())))
}

fn to_json(v: &impl Serialize) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(v).map_err(anyhow::Error::from)? + "\n")
}

fn verify(common: &Common, suite: &str) -> Result<(), Failure> {
    let name: SuiteName = usage(suite.parse())?;
    let cfg = config(common)?;
    let report = run_suite(name, &cfg);
    emit(common.out.as_deref(), &(report.to_json_string().map_err(anyhow::Error::from)? + "\n"))?;
    let failed: Vec<_> = report.failures().collect();
    for r in &failed {
        eprintln!(
            "FAIL {} value {:.6e} tolerance {:.6e} {}",
            r.id,
            r.value,
            r.tolerance,
            r.detail.as_deref().unwrap_or("")
        );
    }
    eprintln!("{}: {} records, {} failed, {:.1} s", report.suite, report.records.len(), failed.len(), report.wall_time);
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Check(anyhow!("{} checks failed", failed.len())))
    }
}

fn warped(common: &Common, action: &WarpedAction) -> Result<(), Failure> {
    let cfg = config(common)?;
    let path = match action {
        WarpedAction::Build { descriptor }
        | WarpedAction::Scan { descriptor }
        | WarpedAction::Oracle { descriptor } => descriptor,
    };
    let d = usage(WarpedDescriptor::from_json_str(&read(path)?))?;
    let built = d.build().map_err(anyhow::Error::from)?;
    match action {
        WarpedAction::Build { .. } => {
            let s = built.summary().map_err(anyhow::Error::from)?;
            emit(common.out.as_deref(), &to_json(&s)?)?;
            match (s.r1, s.a0) {
                (Some(r1), Some(a0)) => eprintln!("mass {:.16e} (r1 = {r1}, a0 = {a0:.16e})", s.mass),
                _ => eprintln!("mass {:.16e}", s.mass),
            }
            Ok(())
        }
        WarpedAction::Scan { .. } => {
            let scan = built.scan().map_err(anyhow::Error::from)?;
            emit(common.out.as_deref(), &scan.to_csv())?;
            eprintln!(
                "{} samples, min S̃ {:.16e} at r = {:.16e}, max 2m - r {:.16e}, bound violations {}",
                scan.samples.len(),
                scan.min_s_tilde,
                scan.min_at.0,
                scan.max_horizon_gap,
                scan.bound_violations
            );
            if scan.passed && scan.bound_violations == 0 {
                Ok(())
            } else {
                Err(Failure::Check(anyhow!("positivity scan failed")))
            }
        }
        WarpedAction::Oracle { .. } => {
            let rows = oracle_rows(&built, cfg.samples.warped_oracle).map_err(anyhow::Error::from)?;
            emit(common.out.as_deref(), &oracle_csv(&rows))?;
            let scale = cfg.tolerance_scale;
            let bad = rows.iter().filter(|r| r.abs_diff > scale * 1e-6f64.max(3.0 * r.error_bar)).count();
            let worst = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
            eprintln!("{} comparisons, max |formula - FD| {worst:.6e}, {bad} outside tolerance", rows.len());
            if bad == 0 {
                Ok(())
            } else {
                Err(Failure::Check(anyhow!("{bad} oracle comparisons outside tolerance")))
            }
        }
    }
}

fn spectrum(common: &Common, path: &Path, count: usize) -> Result<(), Failure> {
    let cfg = config(common)?;
    let mut d: TorusDescriptor = usage(serde_json::from_str(&read(path)?))?;
    if let Some(c) = common.cutoff {
        d.cutoff = c;
    }
    let levels = usage(tt_spectrum(d.n, d.cutoff, count))?;
    let mut csv = String::from("kind,index,value,multiplicity,residual\n");
    for (i, l) in levels.iter().enumerate() {
        csv.push_str(&format!("lichnerowicz,{i},{:.16e},{},{:.16e}\n", l.value, l.multiplicity, l.residual));
    }
    let mut ok = true;
    if count > 0 {
        let sol = d.lambda().map_err(anyhow::Error::from)?;
        csv.push_str(&format!("lambda,0,{:.16e},1,{:.16e}\n", sol.lambda, sol.residual));
        ok = sol.residual <= cfg.tol(1e-8);
    }
    emit(common.out.as_deref(), &csv)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(anyhow!("eigen-residual above 1e-8")))
    }
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = usage(v.parse().with_context(|| format!("{THREADS_VAR} must be a positive integer")))?;
        if n == 0 {
            return Err(Failure::Usage(anyhow!("{THREADS_VAR} must be a positive integer")));
        }
        usage(rayon::ThreadPoolBuilder::new().num_threads(n).build_global())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| match &cli.command {
        Command::Verify { suite } => verify(&cli.common, suite),
        Command::Warped { action } => warped(&cli.common, action),
        Command::Spectrum { descriptor, count } => spectrum(&cli.common, descriptor, *count),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
