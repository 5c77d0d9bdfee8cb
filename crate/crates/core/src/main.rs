use aig::{parse_aiger, Aig, WitnessTrace};
use clap::{ArgGroup, Parser, ValueEnum};
use log::{error, info};
use mcheck::certificate::CertificateFile;
use mcheck::ic3::{Generalization, MicKind};
use mcheck::portfolio::{run_portfolio, verify_verdict, EngineConfig, PortfolioOptions, GRACE_PERIOD};
use mcheck::{TranSys, Verdict};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Ic3,
    Bmc,
    Kind,
    Portfolio,
}

/// Bit-level safety model checker for AIGER circuits.
///
/// Prints the verdict in HWMCC style and exits with 20 (safe), 10 (unsafe),
/// 0 (unknown or time-out) or 2 (usage or input error). With --verify, the
/// files given by --witness and --certificate are checked against FILE
/// instead; an invalid file exits with 1.
#[derive(Debug, Parser)]
#[command(name = "mcheck", version)]
#[command(group(ArgGroup::new("generalization").args(["standard", "ctg", "exctg", "dynamic"])))]
struct Args {
    /// AIGER model, ASCII (.aag) or binary (.aig).
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Engine::Portfolio)]
    engine: Engine,
    /// IC3 generalization by literal dropping only.
    #[arg(long)]
    standard: bool,
    /// IC3 generalization handling counterexamples to generalization.
    #[arg(long)]
    ctg: bool,
    /// CTG handling that also blocks the CTGs' predecessors.
    #[arg(long)]
    exctg: bool,
    /// Escalate the generalization per cube with its difficulty (default).
    #[arg(long)]
    dynamic: bool,
    /// Promote high-fanout internal signals to state variables.
    #[arg(long)]
    inn: bool,
    /// Abstract constraints and add them back on spurious counterexamples.
    #[arg(long)]
    abs_cst: bool,
    #[arg(long, default_value_t = 1000)]
    bmc_max: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    bmc_step: u64,
    #[arg(long, default_value_t = 1000)]
    kind_max: usize,
    /// Concurrent engines in portfolio mode.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=1024))]
    workers: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Which bad-state property to check.
    #[arg(long, default_value_t = 0)]
    bad_index: usize,
    /// Write the counterexample here (or, with --verify, check it).
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Write the safety certificate here (or, with --verify, check it).
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Check the given witness and/or certificate instead of model checking.
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write run statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Invalid(String),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("mcheck: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("mcheck: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn generalization(args: &Args) -> Generalization {
    if args.standard {
        Generalization::Static(MicKind::Standard)
    } else if args.ctg {
        Generalization::Static(MicKind::Ctg)
    } else if args.exctg {
        Generalization::Static(MicKind::ExCtg)
    } else {
        Generalization::Dynamic
    }
}

fn configs(args: &Args) -> Result<Vec<EngineConfig>, Failure> {
    let ic3_flags = args.standard || args.ctg || args.exctg || args.dynamic || args.inn || args.abs_cst;
    if ic3_flags && args.engine != Engine::Ic3 {
        return Err(Failure::Usage("generalization, --inn and --abs-cst apply to --engine ic3 only".into()));
    }
    Ok(match args.engine {
        Engine::Ic3 => vec![EngineConfig::Ic3 {
            generalization: generalization(args),
            inn: args.inn,
            abs_cst: args.abs_cst,
            seed: args.seed,
        }],
        Engine::Bmc => vec![EngineConfig::Bmc { step: args.bmc_step as usize, max_depth: args.bmc_max }],
        Engine::Kind => vec![EngineConfig::Kind { max_k: args.kind_max, simple_path: true }],
        Engine::Portfolio => {
            let mut c = EngineConfig::default_portfolio(args.workers as usize, args.bmc_max, args.kind_max);
            for e in &mut c {
                if let EngineConfig::Ic3 { seed, .. } = e {
                    *seed = seed.wrapping_add(args.seed);
                }
            }
            c
        }
    })
}

fn load(args: &Args) -> Result<(Arc<Aig>, Arc<TranSys>), Failure> {
    let bytes = read(&args.file)?;
    let aig = parse_aiger(&bytes).map_err(|e| Failure::Usage(format!("{}: {e}", args.file.display())))?;
    let aig = Arc::new(aig);
    let ts = TranSys::encode_shared(aig.clone(), args.bad_index).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((aig, Arc::new(ts)))
}

fn run(args: &Args) -> Result<u8, Failure> {
    if args.verify {
        return verify_files(args);
    }
    let configs = configs(args)?;
    let time_limit = match args.time_limit {
        Some(t) if !(t.is_finite() && t > 0.0) => return Err(Failure::Usage("--time-limit must be positive".into())),
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    let (_, ts) = load(args)?;
    let opts = PortfolioOptions { workers: args.workers as usize, time_limit, grace: GRACE_PERIOD };
    let outcome = run_portfolio(ts.clone(), &configs, &opts);
    if let Some(i) = outcome.winner {
        info!("verdict by {}", configs[i]);
    }
    let bad = args.bad_index;
    match &outcome.verdict {
        Verdict::Safe(cert) => {
            print!("0\nb{bad}\n.\n");
            if let Some(p) = &args.certificate {
                write(p, &CertificateFile::from_certificate(&ts, cert).to_text())?;
            }
        }
        Verdict::Unsafe(w) => {
            print!("{}", w.to_text());
            if let Some(p) = &args.witness {
                write(p, &w.to_text())?;
            }
        }
        Verdict::Unknown(reason) => {
            info!("unknown: {reason}");
            print!("2\nb{bad}\n.\n");
        }
    }
    if let Some(p) = &args.stats {
        let record = serde_json::json!({
            "status": outcome.verdict.status(),
            "winner": outcome.winner.map(|i| configs[i].to_string()),
            "engines": outcome.reports,
            "abandoned_workers": outcome.abandoned,
            "shutdown_seconds": outcome.shutdown.as_secs_f64(),
        });
        write(p, &serde_json::to_string_pretty(&record).expect("serializable stats"))?;
    }
    Ok(outcome.verdict.exit_code() as u8)
}

fn verify_files(args: &Args) -> Result<u8, Failure> {
    if args.witness.is_none() && args.certificate.is_none() {
        return Err(Failure::Usage("--verify needs --witness and/or --certificate".into()));
    }
    let (_, ts) = load(args)?;
    let mut code = 0;
    if let Some(p) = &args.witness {
        let text = String::from_utf8(read(p)?).map_err(|_| Failure::Invalid(format!("{}: not UTF-8", p.display())))?;
        let w = WitnessTrace::parse(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
        if w.bad_index != args.bad_index {
            return Err(Failure::Invalid(format!("{}: witness is for b{}", p.display(), w.bad_index)));
        }
        verify_verdict(&ts, &Verdict::Unsafe(w)).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
        println!("witness ok");
        code = 10;
    }
    if let Some(p) = &args.certificate {
        let text = String::from_utf8(read(p)?).map_err(|_| Failure::Invalid(format!("{}: not UTF-8", p.display())))?;
        let cert = CertificateFile::parse(&text)
            .and_then(|f| f.resolve(&ts))
            .map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
        verify_verdict(&ts, &Verdict::Safe(cert)).map_err(|e| {
            error!("certificate rejected");
            Failure::Invalid(format!("{}: {e}", p.display()))
        })?;
        println!("certificate ok");
        if code == 10 {
            return Err(Failure::Invalid("both a valid witness and a valid certificate".into()));
        }
        code = 20;
    }
    Ok(code)
}
