mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use qkwc_core::ifun::{mu_geq_epsilon, HypergeomSpec};
use qkwc_core::novikov::NovikovSeries;
use qkwc_core::qfun::QLaurent;
use qkwc_core::verify::{run_suite, Context, Fault, Suite};
use qkwc_core::wallcross::{potential_transform, telescope, CorrelatorSeries};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "qkwc", version, about = "Exact wall-crossing computations for quasimap K-theory")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML or JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in I-function: P1, P2, ..., toy-P1.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Novikov truncation degree (integer or P/Q).
    #[arg(long, global = true)]
    max_degree: Option<String>,
    /// Stability parameter as P/Q.
    #[arg(long, global = true)]
    epsilon: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the I-function to the truncation degree.
    Ifun,
    /// Mirror-map terms μ_β for 0 < deg β ≤ 1/ε.
    Mu,
    /// Move a potential from the ∞ side to the ε side.
    Transform {
        /// Potential file (JSON).
        #[arg(long)]
        potential: Option<PathBuf>,
        /// Name of the input insertion being shifted.
        #[arg(long)]
        var: Option<String>,
        /// Treat the potential as ε-side symbols and compare the
        /// wall-by-wall and one-step routes.
        #[arg(long)]
        telescope: bool,
    },
    /// Run verification suites; exit 1 if any identity fails.
    Verify {
        /// Suites to run (default: all).
        suites: Vec<String>,
        #[arg(long, value_name = "FAULT")]
        inject_fault: Option<String>,
    },
}

/// Failures that map to exit code 2.
#[derive(Debug)]
struct ConfigError(anyhow::Error);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!(ConfigError(e)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = setup_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn setup_threads() -> Result<()> {
    if let Ok(v) = std::env::var("QKWC_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("QKWC_THREADS={v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = config_err(RunConfig::load(cli.common.config.as_deref()))?;
    let cfg = config_err(cfg.merge(&cli.common))?;
    let (value, ok) = match cli.cmd {
        Cmd::Ifun => (cmd_ifun(&cfg)?, true),
        Cmd::Mu => (cmd_mu(&cfg)?, true),
        Cmd::Transform {
            potential,
            var,
            telescope,
        } => cmd_transform(&cfg, potential, var, telescope)?,
        Cmd::Verify { suites, inject_fault } => cmd_verify(&cfg, &suites, inject_fault.as_deref())?,
    };
    output::emit(&value, cfg.out.as_deref())?;
    Ok(ok)
}

fn hypergeom(cfg: &RunConfig) -> Result<HypergeomSpec> {
    config_err(cfg.hypergeom())
}

fn cmd_ifun(cfg: &RunConfig) -> Result<Value> {
    let spec = hypergeom(cfg)?;
    let d = config_err(cfg.max_degree())?;
    let i = spec.evaluate(&d)?;
    Ok(output::rational_series(&i))
}

fn mu_series(spec: &HypergeomSpec, d: &BigRational, eps: &BigRational) -> Result<NovikovSeries<QLaurent>> {
    let i = spec.evaluate(d)?;
    Ok(mu_geq_epsilon(&i, eps)?)
}

fn cmd_mu(cfg: &RunConfig) -> Result<Value> {
    let spec = hypergeom(cfg)?;
    let eps = config_err(cfg.epsilon())?;
    let d = match cfg.max_degree {
        Some(_) => config_err(cfg.max_degree())?,
        None => eps.recip(),
    };
    Ok(output::laurent_series(&mu_series(&spec, &d, &eps)?))
}

fn cmd_transform(
    cfg: &RunConfig,
    potential: Option<PathBuf>,
    var: Option<String>,
    check_telescope: bool,
) -> Result<(Value, bool)> {
    let spec = hypergeom(cfg)?;
    let eps = config_err(cfg.epsilon())?;
    let path = potential
        .or_else(|| cfg.potential.clone())
        .ok_or_else(|| anyhow!(ConfigError(anyhow!("transform needs --potential or `potential` in the config"))))?;
    let f: CorrelatorSeries = config_err(config::read_json(&path))?;
    if f.cone().weights != spec.cone.weights {
        return Err(anyhow!(ConfigError(anyhow!(
            "potential cone weights differ from the I-function's"
        ))));
    }
    let mu = mu_series(&spec, &f.cone().bound, &eps)?;
    let var = var.or_else(|| cfg.var.clone()).unwrap_or_else(|| "t".to_string());
    if check_telescope {
        let rep = telescope(&f, &mu, &eps, &var)?;
        let v = json!({
            "epsilon": output::rational(&eps),
            "iterated": serde_json::to_value(&rep.iterated)?,
            "substituted": serde_json::to_value(&rep.substituted)?,
            "equal": rep.equal,
        });
        Ok((v, rep.equal))
    } else {
        let g = potential_transform(&f, &mu, &var)?;
        Ok((serde_json::to_value(&g)?, true))
    }
}

fn cmd_verify(cfg: &RunConfig, names: &[String], fault: Option<&str>) -> Result<(Value, bool)> {
    let suites: Vec<Suite> = if names.is_empty() || names.iter().any(|n| n == "all") {
        Suite::ALL.to_vec()
    } else {
        config_err(
            names
                .iter()
                .map(|n| n.parse::<Suite>().map_err(anyhow::Error::from))
                .collect::<Result<_>>(),
        )?
    };
    let fault = match fault {
        Some(f) => Some(config_err(f.parse::<Fault>().map_err(anyhow::Error::from))?),
        None => None,
    };
    let ctx = Context { fault };
    let seed = cfg.seed.unwrap_or(config::DEFAULT_SEED);
    let trials = cfg.trials.unwrap_or(config::DEFAULT_TRIALS);
    if trials == 0 {
        bail!(ConfigError(anyhow!("--trials must be positive")));
    }
    let reports: Vec<_> = suites.iter().map(|s| run_suite(*s, seed, trials, &ctx)).collect();
    for r in &reports {
        for c in &r.checks {
            eprintln!(
                "{} {}/{} {}/{}",
                if c.ok() { "PASS" } else { "FAIL" },
                r.suite,
                c.name,
                c.passed,
                c.trials
            );
            if let Some(x) = &c.counterexample {
                eprintln!("  counterexample {x}");
            }
        }
    }
    let ok = reports.iter().all(|r| r.passed);
    Ok((json!({"seed": seed, "trials": trials, "passed": ok, "suites": reports}), ok))
}
