//! Concurrent engine portfolio: the first verified definitive verdict wins.

use crate::bmc::bmc;
use crate::certificate::{verify_certificate, verify_witness};
use crate::ic3::{constraint_abstraction, Generalization, Ic3, Ic3Options, Ic3Stats, MicKind};
use crate::kind::kind;
use crate::transys::{SignalPolicy, TranSys};
use crate::verdict::{Cancel, Verdict};
use log::{error, info, warn};
use serde::Serialize;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

/// Time cancelled engines get to stop before they are abandoned.
pub const GRACE_PERIOD: Duration = Duration::from_secs(2);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum EngineConfig {
    Ic3 {
        generalization: Generalization,
        /// Promote internal signals to state variables.
        inn: bool,
        /// Constraint abstraction with counterexample-guided refinement.
        abs_cst: bool,
        seed: u64,
    },
    Bmc { step: usize, max_depth: usize },
    Kind { max_k: usize, simple_path: bool },
}

impl EngineConfig {
    pub fn ic3(generalization: Generalization) -> Self {
        EngineConfig::Ic3 { generalization, inn: false, abs_cst: false, seed: 0 }
    }

    /// The ordered configuration list, cycled to `n` entries. Repeated IC3
    /// entries get distinct seeds.
    pub fn default_portfolio(n: usize, bmc_max: usize, kind_max: usize) -> Vec<EngineConfig> {
        let base = [
            EngineConfig::ic3(Generalization::Dynamic),
            EngineConfig::ic3(Generalization::Static(MicKind::Ctg)),
            EngineConfig::Ic3 { generalization: Generalization::Dynamic, inn: true, abs_cst: false, seed: 0 },
            EngineConfig::Ic3 { generalization: Generalization::Dynamic, inn: false, abs_cst: true, seed: 0 },
            EngineConfig::Bmc { step: 1, max_depth: bmc_max },
            EngineConfig::Bmc { step: 10, max_depth: bmc_max },
            EngineConfig::Kind { max_k: kind_max, simple_path: true },
        ];
        (0..n.max(1))
            .map(|i| {
                let mut c = base[i % base.len()].clone();
                if let EngineConfig::Ic3 { seed, .. } = &mut c {
                    *seed = (i / base.len()) as u64;
                }
                c
            })
            .collect()
    }
}

impl fmt::Display for EngineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineConfig::Ic3 { generalization, inn, abs_cst, seed } => {
                let g = match generalization {
                    Generalization::Dynamic => "dynamic",
                    Generalization::Static(MicKind::Standard) => "standard",
                    Generalization::Static(MicKind::Ctg) => "ctg",
                    Generalization::Static(MicKind::ExCtg) => "exctg",
                };
                write!(f, "ic3+{g}")?;
                if *inn {
                    write!(f, "+inn")?;
                }
                if *abs_cst {
                    write!(f, "+abs-cst")?;
                }
                if *seed != 0 {
                    write!(f, "#{seed}")?;
                }
                Ok(())
            }
            EngineConfig::Bmc { step, .. } => write!(f, "bmc-step{step}"),
            EngineConfig::Kind { .. } => write!(f, "kind"),
        }
    }
}

/// Outcome of one engine run.
#[derive(Clone, Debug, Serialize)]
pub struct EngineReport {
    pub config: String,
    pub status: &'static str,
    pub reason: Option<String>,
    pub seconds: f64,
    pub ic3: Option<Ic3Stats>,
    pub abstraction_rounds: Option<usize>,
}

/// Run one configuration on (a preprocessed copy of) `ts`.
pub fn run_engine(ts: &TranSys, config: &EngineConfig, cancel: &Cancel) -> (Verdict, EngineReport) {
    let start = Instant::now();
    let mut report = EngineReport {
        config: config.to_string(),
        status: "2",
        reason: None,
        seconds: 0.0,
        ic3: None,
        abstraction_rounds: None,
    };
    let verdict = match config {
        EngineConfig::Ic3 { generalization, inn, abs_cst, seed } => {
            let prepared = if *inn {
                ts.extend_with_internal_signals(&SignalPolicy::default()).simplify_cnf()
            } else {
                ts.simplify_cnf()
            };
            let opts = Ic3Options { generalization: *generalization, seed: *seed, ..Default::default() };
            let prepared = Arc::new(prepared);
            if *abs_cst {
                let (v, rounds) = constraint_abstraction(prepared, opts, cancel.clone());
                report.abstraction_rounds = Some(rounds);
                v
            } else {
                let mut ic3 = Ic3::new(prepared, opts, cancel.clone());
                let v = ic3.check();
                report.ic3 = Some(ic3.stats.clone());
                v
            }
        }
        EngineConfig::Bmc { step, max_depth } => bmc(&ts.simplify_cnf(), *max_depth, *step, cancel),
        EngineConfig::Kind { max_k, simple_path } => kind(&ts.simplify_cnf(), *max_k, *simple_path, cancel),
    };
    report.status = verdict.status();
    if let Verdict::Unknown(r) = &verdict {
        report.reason = Some(r.clone());
    }
    report.seconds = start.elapsed().as_secs_f64();
    (verdict, report)
}

/// Check a definitive verdict against `ts` with fresh solvers.
pub fn verify_verdict(ts: &TranSys, verdict: &Verdict) -> Result<(), String> {
    match verdict {
        Verdict::Safe(c) => verify_certificate(ts, c).map_err(|e| e.to_string()),
        Verdict::Unsafe(w) => verify_witness(&ts.source, w).map_err(|e| e.to_string()),
        Verdict::Unknown(_) => Ok(()),
    }
}

#[derive(Clone, Debug)]
pub struct PortfolioOptions {
    pub workers: usize,
    pub time_limit: Option<Duration>,
    pub grace: Duration,
}

impl Default for PortfolioOptions {
    fn default() -> Self {
        PortfolioOptions { workers: 1, time_limit: None, grace: GRACE_PERIOD }
    }
}

#[derive(Clone, Debug)]
pub struct PortfolioOutcome {
    pub verdict: Verdict,
    /// Index into the configuration list of the engine whose verdict won.
    pub winner: Option<usize>,
    pub reports: Vec<EngineReport>,
    /// Workers still running when the grace period ran out.
    pub abandoned: usize,
    /// Time from the decision (or time-out) until every worker stopped.
    pub shutdown: Duration,
    /// Some engines reported safe and others unsafe.
    pub contradictory: bool,
}

enum Message {
    Done(usize, Box<(Verdict, EngineReport)>),
    Exit,
}

/// Run `configs` on up to `workers` threads. Workers take the next pending
/// configuration when they finish; the first definitive verdict that
/// passes independent verification is reported and the rest cancelled.
pub fn run_portfolio(ts: Arc<TranSys>, configs: &[EngineConfig], opts: &PortfolioOptions) -> PortfolioOutcome {
    assert!(!configs.is_empty(), "portfolio needs at least one configuration");
    let start = Instant::now();
    let workers = opts.workers.clamp(1, configs.len());
    let cancel = Cancel::new();
    let next = Arc::new(AtomicUsize::new(0));
    let configs: Arc<Vec<EngineConfig>> = Arc::new(configs.to_vec());
    let (tx, rx) = mpsc::channel();
    for w in 0..workers {
        let (ts, cancel, next, configs, tx) = (ts.clone(), cancel.clone(), next.clone(), configs.clone(), tx.clone());
        thread::Builder::new()
            .name(format!("mcheck-worker-{w}"))
            .spawn(move || {
                loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= configs.len() || cancel.is_cancelled() {
                        break;
                    }
                    let run = catch_unwind(AssertUnwindSafe(|| run_engine(&ts, &configs[i], &cancel)));
                    let (verdict, report) = run.unwrap_or_else(|_| {
                        let reason = format!("{} panicked", configs[i]);
                        error!("{reason}");
                        let report = EngineReport {
                            config: configs[i].to_string(),
                            status: "2",
                            reason: Some(reason.clone()),
                            seconds: 0.0,
                            ic3: None,
                            abstraction_rounds: None,
                        };
                        (Verdict::Unknown(reason), report)
                    });
                    if tx.send(Message::Done(i, Box::new((verdict, report)))).is_err() {
                        break;
                    }
                }
                let _ = tx.send(Message::Exit);
            })
            .expect("spawn worker thread");
    }
    drop(tx);

    let deadline = opts.time_limit.map(|t| start + t);
    let mut live = workers;
    let mut reports = Vec::new();
    let mut winner: Option<(usize, Verdict)> = None;
    let mut reasons = Vec::new();
    while live > 0 {
        let msg = match deadline {
            Some(d) => match rx.recv_timeout(d.saturating_duration_since(Instant::now())) {
                Ok(m) => m,
                Err(mpsc::RecvTimeoutError::Timeout) => {
                    reasons.push("time limit reached".to_string());
                    break;
                }
                Err(mpsc::RecvTimeoutError::Disconnected) => break,
            },
            None => match rx.recv() {
                Ok(m) => m,
                Err(_) => break,
            },
        };
        match msg {
            Message::Exit => live -= 1,
            Message::Done(i, done) => {
                let (verdict, report) = *done;
                info!("portfolio: {} finished with status {} in {:.3}s", report.config, report.status, report.seconds);
                reports.push(report);
                match &verdict {
                    Verdict::Unknown(r) => reasons.push(format!("{}: {r}", configs[i])),
                    _ => match verify_verdict(&ts, &verdict) {
                        Ok(()) => {
                            winner = Some((i, verdict));
                            break;
                        }
                        Err(e) => {
                            error!("portfolio: {} produced an unverifiable verdict: {e}", configs[i]);
                            reasons.push(format!("{}: rejected verdict ({e})", configs[i]));
                        }
                    },
                }
            }
        }
    }
    cancel.cancel();
    let decided = Instant::now();
    let grace_end = decided + opts.grace;
    while live > 0 {
        match rx.recv_timeout(grace_end.saturating_duration_since(Instant::now())) {
            Ok(Message::Exit) => live -= 1,
            Ok(Message::Done(_, done)) => reports.push(done.1),
            Err(_) => break,
        }
    }
    if live > 0 {
        warn!("portfolio: abandoning {live} worker(s) after the grace period; their result is unknown");
    }
    let shutdown = decided.elapsed();
    let contradictory = ["0", "1"].iter().all(|st| reports.iter().any(|r| r.status == *st));
    if contradictory {
        error!("portfolio: engines reported both safe and unsafe");
    }
    let (winner, verdict) = match winner {
        Some((i, v)) => (Some(i), v),
        None => (None, Verdict::Unknown(reasons.join("; "))),
    };
    PortfolioOutcome { verdict, winner, reports, abandoned: live, shutdown, contradictory }
}
