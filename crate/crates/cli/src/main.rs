use anyhow::{bail, Context, Result};
use ciforge::params::dimension_bounds;
use ciforge::singular::regularity_target;
use ciforge::pipeline::{self, RunConfig, RunSummary};
use ciforge::suites::{self, Check, SUITES};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ciforge", version, about = "Convex-integration laboratory for the Euler equations")]
struct Cli {
    /// JSON config; CIFORGE_* environment variables override its keys
    #[arg(long, global = true, env = "CIFORGE_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the parameter inequalities and print the report
    ValidateParams,
    /// Initial pair, then glue and perturb `steps` times, then the singular-set analysis
    Run,
    /// Run a property suite and print one line per invariant
    Verify {
        /// params, operators, euler, mikado, singular, scheme, cli or all
        suite: String,
        /// Existing run directory for the scheme suite
        #[arg(long)]
        run_dir: Option<PathBuf>,
    },
    /// Singular-set analysis of a run directory
    Analyze { run_dir: PathBuf },
    /// CSV plot data for a run directory
    PlotData { run_dir: PathBuf },
    /// Dimension bounds implied by the parameters, and the measured box dimension of a run if given
    Dims { run_dir: Option<PathBuf> },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let text = match &cli.config {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => "{}".to_string(),
    };
    let env = std::env::vars().filter(|(k, _)| k != "CIFORGE_CONFIG");
    let mut cfg = RunConfig::from_json(&text, env)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    Ok(cfg)
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from("ciforge-run"))
}

fn print_checks(checks: &[Check]) -> bool {
    for c in checks {
        println!("{}", c.line());
    }
    let red = checks.iter().filter(|c| !c.pass).count();
    println!("{} invariants, {red} red", checks.len());
    red == 0
}

fn print_summary(s: &RunSummary) {
    println!("preset {} n={} steps {}/{}", s.preset.name(), s.n, s.steps_completed, s.steps_requested);
    for l in &s.levels {
        println!(
            "  q={} structural {} enforced {} |B| = {:.4e} ({} intervals){}",
            l.q,
            if l.structural_pass { "pass" } else { "FAIL" },
            if l.enforced_pass { "pass" } else { "FAIL" },
            l.bad_measure,
            l.bad_intervals,
            if l.degenerate_perturbation { ", w = 0" } else { "" }
        );
        for f in &l.failures {
            println!("    {f}");
        }
    }
    if let Some(f) = &s.fault {
        println!("fault: {f}");
    }
}

fn run_once(cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
    std::fs::create_dir_all(dir)?;
    match pipeline::run(cfg, dir) {
        Ok(s) => Ok(s),
        Err(e) => {
            // the summary is written before the error surfaces
            if let Ok(s) = pipeline::read_json::<RunSummary>(&dir.join("summary.json")) {
                print_summary(&s);
            }
            Err(e.into())
        }
    }
}

fn verify_cli(cfg: &RunConfig, root: &Path) -> Result<Vec<Check>> {
    const S: &str = "cli";
    let (a, b) = (root.join("a"), root.join("b"));
    for d in [&a, &b] {
        if d.exists() {
            std::fs::remove_dir_all(d)?;
        }
        run_once(cfg, d)?;
    }
    let (files, diffs) = suites::compare_runs(&a, &b)?;
    let mut out = vec![Check::new(
        S,
        "reruns bit-identical in every JSON report",
        diffs.is_empty() && files > 0,
        diffs.len() as f64,
        format!("{files} files, differing: {diffs:?}"),
    )];
    let msgs = suites::sample_guard_messages();
    let bad: Vec<_> = msgs.iter().filter(|m| !suites::descriptive(m)).collect();
    out.push(Check::new(
        S,
        "guard messages descriptive",
        bad.is_empty() && !msgs.is_empty(),
        bad.len() as f64,
        format!("{} messages sampled, offending: {bad:?}", msgs.len()),
    ));
    Ok(out)
}

fn verify(cli: &Cli, suite: &str, run_dir: Option<&Path>) -> Result<Vec<Check>> {
    let cfg = load_config(cli)?;
    let seed = cfg.seed;
    let root = cli.out.clone().unwrap_or_else(|| PathBuf::from("ciforge-verify"));
    Ok(match suite {
        "params" => suites::params(seed)?,
        "operators" => suites::operators(seed),
        "scaling" => suites::scaling(seed)?,
        "euler" => suites::euler(seed)?,
        "mikado" => suites::mikado(seed)?,
        "singular" => suites::singular(seed)?,
        "scheme" => match run_dir {
            Some(d) => suites::scheme(d)?,
            None => {
                let d = root.join("scheme");
                run_once(&cfg, &d)?;
                suites::scheme(&d)?
            }
        },
        "cli" => verify_cli(&cfg, &root)?,
        "all" => {
            let mut all = Vec::new();
            for s in SUITES {
                all.extend(verify(cli, s, run_dir)?);
            }
            all
        }
        other => bail!("unknown suite {other:?}; expected one of {SUITES:?} or all"),
    })
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::ValidateParams => {
            let cfg = load_config(&cli)?;
            let report = ciforge::params::validate(&cfg.params, cfg.steps);
            println!("{}", serde_json::to_string_pretty(&report)?);
            match cfg.validate() {
                Ok(_) => Ok(true),
                Err(e) => {
                    eprintln!("{e}");
                    Ok(false)
                }
            }
        }
        Cmd::Run => {
            let cfg = load_config(&cli)?;
            if let Err(e) = cfg.validate() {
                let report = ciforge::params::validate(&cfg.params, cfg.steps);
                println!("{}", serde_json::to_string_pretty(&report)?);
                return Err(e.into());
            }
            let dir = out_dir(&cfg);
            let s = run_once(&cfg, &dir)?;
            print_summary(&s);
            println!("run directory {}", dir.display());
            Ok(s.ok())
        }
        Cmd::Verify { suite, run_dir } => Ok(print_checks(&verify(&cli, suite, run_dir.as_deref())?)),
        Cmd::Analyze { run_dir } => {
            let r = pipeline::analyze(run_dir)?;
            println!("{}", serde_json::to_string_pretty(&r)?);
            Ok(true)
        }
        Cmd::PlotData { run_dir } => {
            for f in pipeline::plot_data(run_dir)? {
                println!("{}", f.display());
            }
            Ok(true)
        }
        Cmd::Dims { run_dir } => {
            let cfg = load_config(&cli)?;
            let p = &cfg.params;
            let bounds = dimension_bounds(p.beta, p.b, p.gamma, p.alpha)?;
            println!("{}", serde_json::to_string_pretty(&bounds)?);
            println!("energy regularity target {:.6}", regularity_target(p.beta));
            if let Some(d) = run_dir {
                let r = pipeline::analyze(d)?;
                println!("{}", serde_json::to_string_pretty(&r.box_dimension)?);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
