//! Timed runs of the acceptance-style suites from the command line.

use std::time::Instant;

use p5color::testkit::{
    brute_force_solve, generate, generate_connected, generate_lists, Family, GenSpec,
};
use p5color::{Error, Graph, ListInstance, Result, SolveConfig, Solver, Verdict};

use crate::report::{BenchRow, Status};

pub const SUITES: [&str; 4] = ["oracle", "dominating", "smoke", "all"];

pub fn run(suite: &str, parallel: bool) -> Result<Vec<BenchRow>> {
    let cfg = SolveConfig {
        enable_parallel: parallel,
        ..SolveConfig::default()
    };
    match suite {
        "oracle" => oracle(&cfg),
        "dominating" => dominating(),
        "smoke" => smoke(&cfg),
        "all" => {
            let mut rows = oracle(&cfg)?;
            rows.extend(dominating()?);
            rows.extend(smoke(&cfg)?);
            Ok(rows)
        }
        other => Err(Error::Input(format!(
            "unknown suite '{other}', expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

fn status(v: &Verdict) -> Status {
    if v.is_sat() {
        Status::Sat
    } else {
        Status::Unsat
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

const FAMILIES: [Family; 3] = [
    Family::SplitGraph,
    Family::CompleteMultipartite,
    Family::RejectionSampled,
];

/// Solver against the brute-force oracle, one row per family and k.
fn oracle(cfg: &SolveConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for family in FAMILIES {
        for k in [2u32, 3, 4] {
            let t = Instant::now();
            let mut agree = true;
            let mut sat = 0;
            for seed in 0..60u64 {
                let n = 3 + (seed % 8) as usize;
                let mut spec = GenSpec::new(family, n, seed);
                spec.parts = vec![n / 3, n / 3, n - 2 * (n / 3)];
                spec.edge_probability = [0.3, 0.6, 0.85][(seed % 3) as usize];
                let g = generate(&spec)?;
                let density = [0.5, 0.75, 1.0][(seed / 3 % 3) as usize];
                let lists = generate_lists(&g, k, density, seed)?;
                let inst = ListInstance::new(g, k, lists)?;
                let got = Solver::new(cfg.clone()).solve(&inst)?;
                agree &= got.is_sat() == brute_force_solve(&inst)?.is_sat();
                sat += got.is_sat() as usize;
            }
            rows.push(BenchRow {
                suite: "oracle".into(),
                case: format!("{family:?} x60 ({sat} sat)"),
                n: 10,
                k,
                status: None,
                elapsed_ms: ms(t),
                ok: agree,
            });
        }
    }
    Ok(rows)
}

fn dominating() -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for family in FAMILIES {
        let t = Instant::now();
        let mut ok = true;
        for seed in 0..100u64 {
            let n = 5 + (seed % 10) as usize;
            let mut spec = GenSpec::new(family, n, seed);
            spec.parts = vec![2, n - 2];
            spec.edge_probability = if family == Family::RejectionSampled {
                0.8
            } else {
                0.4
            };
            let g = generate_connected(&spec)?;
            let ds = g.find_dominating_structure(n)?;
            ok &= g.is_dominating_structure(&ds);
        }
        rows.push(BenchRow {
            suite: "dominating".into(),
            case: format!("{family:?} x100"),
            n: 14,
            k: 0,
            status: None,
            elapsed_ms: ms(t),
            ok,
        });
    }
    Ok(rows)
}

fn smoke(cfg: &SolveConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for n in [20, 40, 80] {
        let mut split = GenSpec::new(Family::SplitGraph, n, n as u64);
        split.parts = vec![4];
        split.edge_probability = 0.3;
        let mut multi = GenSpec::new(Family::CompleteMultipartite, n, n as u64);
        let q = n / 4;
        multi.parts = vec![q, q, q, n - 3 * q];
        let graphs: Vec<(&str, Graph)> = vec![
            ("split", generate(&split)?),
            ("multipartite", generate(&multi)?),
        ];
        for (name, g) in graphs {
            let solver = Solver::new(cfg.clone());
            let t = Instant::now();
            let v = solver.solve(&ListInstance::full(g, 4)?)?;
            let elapsed_ms = ms(t);
            rows.push(BenchRow {
                suite: "smoke".into(),
                case: name.into(),
                n,
                k: 4,
                status: Some(status(&v)),
                elapsed_ms,
                ok: elapsed_ms < 120_000.0,
            });
        }
    }
    Ok(rows)
}

pub fn table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:<11} {:<36} {:>3} {:>2} {:>6} {:>11} {}\n",
        "suite", "case", "n", "k", "status", "ms", "ok"
    );
    for r in rows {
        out += &format!(
            "{:<11} {:<36} {:>3} {:>2} {:>6} {:>11.2} {}\n",
            r.suite,
            r.case,
            r.n,
            r.k,
            r.status
                .map_or("-".to_string(), |s| format!("{s:?}").to_uppercase()),
            r.elapsed_ms,
            if r.ok { "yes" } else { "NO" }
        );
    }
    out
}
