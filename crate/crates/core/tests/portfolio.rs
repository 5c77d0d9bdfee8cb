//! Portfolio races: verdicts, cancellation and shutdown.

mod common;

use common::*;
use mcheck::bmc::bmc;
use mcheck::ic3::{constraint_abstraction, Generalization, Ic3Options, MicKind};
use mcheck::portfolio::{run_engine, run_portfolio, EngineConfig, PortfolioOptions};
use mcheck::{Cancel, Certificate, TranSys, Verdict};
use std::sync::Arc;
use std::time::Duration;

fn four() -> Vec<EngineConfig> {
    vec![
        EngineConfig::ic3(Generalization::Dynamic),
        EngineConfig::ic3(Generalization::Static(MicKind::Ctg)),
        EngineConfig::Bmc { step: 1, max_depth: 64 },
        EngineConfig::Kind { max_k: 64, simple_path: true },
    ]
}

#[test]
fn random_races_agree_with_oracle() {
    let mut rng = rng(21);
    for case in 0..50 {
        let aig = if case % 2 == 0 { deep_aig(&mut rng) } else { medium_aig(&mut rng) };
        let expected = shortest_cex(&aig, 0);
        let ts = Arc::new(TranSys::encode(&aig, 0).unwrap());
        let out = run_portfolio(ts, &four(), &PortfolioOptions { workers: 4, ..Default::default() });
        assert!(!out.contradictory, "case {case}");
        assert_eq!(out.abandoned, 0, "case {case}");
        assert!(out.shutdown < Duration::from_secs(2));
        match (&out.verdict, expected) {
            (Verdict::Safe(_), None) | (Verdict::Unsafe(_), Some(_)) => {}
            (v, e) => panic!("case {case}: {v:?} vs {e:?}"),
        }
    }
}

#[test]
fn single_config_matches_direct_run() {
    let aig = aig::families::reset_counter_pair(5);
    let ts = Arc::new(TranSys::encode(&aig, 0).unwrap());
    let cfg = EngineConfig::ic3(Generalization::Dynamic);
    let (direct, _) = run_engine(&ts, &cfg, &Cancel::new());
    let out = run_portfolio(ts.clone(), std::slice::from_ref(&cfg), &PortfolioOptions::default());
    assert_eq!(out.verdict, direct);
    assert_eq!(out.winner, Some(0));
    // and repeated runs with a fixed seed are identical
    let again = run_portfolio(ts, &[cfg], &PortfolioOptions::default());
    assert_eq!(again.verdict, direct);
}

#[test]
fn unsafe1_either_engine_wins() {
    let aig = aig::parse_aiger(aig::families::UNSAFE1.as_bytes()).unwrap();
    let ts = Arc::new(TranSys::encode(&aig, 0).unwrap());
    let cfgs = [EngineConfig::ic3(Generalization::Dynamic), EngineConfig::Bmc { step: 1, max_depth: 10 }];
    for _ in 0..20 {
        let out = run_portfolio(ts.clone(), &cfgs, &PortfolioOptions { workers: 2, ..Default::default() });
        let Verdict::Unsafe(w) = out.verdict else { panic!() };
        w.verify(&aig).unwrap();
    }
}

#[test]
fn all_unknown_aggregates_reasons() {
    let aig = aig::parse_aiger(aig::families::SAFE1.as_bytes()).unwrap();
    let ts = Arc::new(TranSys::encode(&aig, 0).unwrap());
    let cfgs = [EngineConfig::Bmc { step: 1, max_depth: 3 }, EngineConfig::Bmc { step: 2, max_depth: 4 }];
    let out = run_portfolio(ts, &cfgs, &PortfolioOptions { workers: 1, ..Default::default() });
    let Verdict::Unknown(r) = out.verdict else { panic!() };
    assert!(r.contains("bmc-step1") && r.contains("bmc-step2"), "{r}");
    assert_eq!(out.reports.len(), 2);
}

#[test]
fn losers_are_cancelled_within_grace() {
    // BMC to a huge bound never finishes on its own; IC3 proves safety fast
    let aig = aig::families::reset_counter_pair(6);
    let ts = Arc::new(TranSys::encode(&aig, 0).unwrap());
    let cfgs = [EngineConfig::Bmc { step: 1, max_depth: usize::MAX / 2 }, EngineConfig::ic3(Generalization::Dynamic)];
    let out = run_portfolio(ts, &cfgs, &PortfolioOptions { workers: 2, ..Default::default() });
    assert!(matches!(out.verdict, Verdict::Safe(Certificate::Invariant(_))));
    assert_eq!(out.winner, Some(1));
    assert_eq!(out.abandoned, 0);
    assert!(out.shutdown < Duration::from_secs(2), "{:?}", out.shutdown);
}

#[test]
fn time_limit_cancels_everything() {
    let aig = aig::parse_aiger(aig::families::SAFE1.as_bytes()).unwrap();
    let ts = Arc::new(TranSys::encode(&aig, 0).unwrap());
    let cfgs = [EngineConfig::Bmc { step: 1, max_depth: usize::MAX / 2 }];
    let opts = PortfolioOptions { workers: 1, time_limit: Some(Duration::from_millis(300)), ..Default::default() };
    let out = run_portfolio(ts, &cfgs, &opts);
    assert!(matches!(&out.verdict, Verdict::Unknown(r) if r.contains("time limit")));
    assert_eq!(out.abandoned, 0);
}

#[test]
fn constraint_abstraction_refines() {
    let aig = aig::families::constrained_shift();
    let ts = Arc::new(TranSys::encode(&aig, 0).unwrap());
    let (v, rounds) = constraint_abstraction(ts.clone(), Ic3Options::default(), Cancel::new());
    assert!(matches!(v, Verdict::Safe(_)));
    assert_eq!(rounds, 2);
    mcheck::verify_certificate(&ts, match &v {
        Verdict::Safe(c) => c,
        _ => unreachable!(),
    })
    .unwrap();
    // without constraints the abstraction is the identity
    let plain = Arc::new(TranSys::encode(&aig::families::counter(3, 5, true), 0).unwrap());
    let (v, rounds) = constraint_abstraction(plain, Ic3Options::default(), Cancel::new());
    assert!(matches!(v, Verdict::Unsafe(_)));
    assert_eq!(rounds, 1);
}

#[test]
fn constraint_abstraction_matches_oracle() {
    let mut rng = rng(22);
    let mut constrained = 0;
    for case in 0..150 {
        let aig = deep_aig(&mut rng);
        if aig.constraints.is_empty() {
            continue;
        }
        constrained += 1;
        let expected = shortest_cex(&aig, 0);
        let ts = Arc::new(TranSys::encode(&aig, 0).unwrap());
        let (v, _) = constraint_abstraction(ts.clone(), Ic3Options::default(), Cancel::new());
        match (&v, expected) {
            (Verdict::Safe(c), None) => mcheck::verify_certificate(&ts, c).unwrap(),
            (Verdict::Unsafe(w), Some(_)) => w.verify(&aig).unwrap(),
            _ => panic!("case {case}: {v:?} vs {expected:?}"),
        }
        // sanity: bmc on the full system agrees on unsafe ones
        if let Some(d) = expected {
            assert!(matches!(bmc(&ts, d, 1, &Cancel::new()), Verdict::Unsafe(_)));
        }
    }
    assert!(constrained > 15);
}
