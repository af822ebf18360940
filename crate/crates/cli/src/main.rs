use clap::Parser;
use nacalg::suite::{run_suite, SuiteConfig, SUITES};
use std::path::PathBuf;
use std::process::ExitCode;

/// Run a verification suite and report PASS/FAIL with a JSON report.
#[derive(Parser, Debug)]
#[command(name = "verify", version, after_help = suites_help())]
struct Args {
    /// Suite name, or `all`.
    suite: String,
    /// Group, e.g. `Z2^3` or `Z3xZ3xZ3`.
    #[arg(long)]
    group: Option<String>,
    /// `trivial`, `octonion`, `volume`, `cyclic`, or a JSON/CSV cochain file.
    #[arg(long)]
    cocycle: Option<String>,
    /// Volume parameter `p/q`.
    #[arg(long)]
    theta: Option<String>,
    /// `scalar` or `m<d>`.
    #[arg(long)]
    coeff: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write sample kernels from the kernels suite to this JSON file.
    #[arg(long, value_name = "PATH")]
    dump_kernels: Option<String>,
    /// TOML or JSON file with the same keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coefficient of `H = k·vol` for the zigzag suite.
    #[arg(long)]
    k: Option<String>,
    /// Lattice box radius for the zigzag suite.
    #[arg(long)]
    radius: Option<i64>,
    /// Descent signs: `literal` or `total`.
    #[arg(long)]
    signs: Option<String>,
    /// Shift one cocycle entry by half a turn (negative control).
    #[arg(long)]
    mutate: bool,
    /// Run the suites of `all` concurrently.
    #[arg(long)]
    parallel: bool,
}

fn suites_help() -> String {
    format!("Suites: all, {}", SUITES.join(", "))
}

fn load_config(path: &PathBuf) -> Result<SuiteConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    } else {
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn build_config(a: &Args) -> Result<SuiteConfig, String> {
    let mut c = match &a.config {
        Some(p) => load_config(p)?,
        None => SuiteConfig::default(),
    };
    c.suite = a.suite.clone();
    if let Some(v) = &a.group {
        c.group = v.clone();
    }
    if let Some(v) = &a.cocycle {
        c.cocycle = v.clone();
    }
    if a.theta.is_some() {
        c.theta = a.theta.clone();
    }
    if let Some(v) = &a.coeff {
        c.coeff = v.clone();
    }
    if let Some(v) = a.trials {
        c.trials = v;
    }
    if let Some(v) = a.seed {
        c.seed = v;
    }
    if a.dump_kernels.is_some() {
        c.dump_kernels = a.dump_kernels.clone();
    }
    if let Some(v) = &a.k {
        c.k = v.clone();
    }
    if let Some(v) = a.radius {
        c.radius = v;
    }
    if let Some(v) = &a.signs {
        c.signs = v.clone();
    }
    c.mutate |= a.mutate;
    c.parallel |= a.parallel;
    Ok(c)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!(
                "error: {e}\n\nusage: verify <suite> [options]\n{}",
                suites_help()
            );
            return ExitCode::from(2);
        }
    };
    for c in &report.checks {
        eprintln!(
            "{} {} (defect {:.3e}, tolerance {:.0e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.defect,
            c.tolerance
        );
    }
    for s in &report.skipped {
        eprintln!("SKIP {s}");
    }
    eprintln!(
        "{}: {} in {} ms",
        report.suite,
        if report.pass { "PASS" } else { "FAIL" },
        report.timing_ms
    );
    let json = report.to_json();
    match &args.json {
        Some(p) => {
            if let Err(e) = std::fs::write(p, json) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{json}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
