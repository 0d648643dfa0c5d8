//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use p5color::branching::{
    algorithm_lambda, pi_prime, procedure_pi, procedure_theta, theta_prime, StatsRecorder,
};
use p5color::sat2::solve_two_list;
use p5color::testkit::{brute_force_solve, generate, Family, GenSpec};
use p5color::{
    verify, Error, Graph, InstanceSet, ListInstance, Palette, SolveConfig, Solver, StructureKind,
    Verdict,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_sat(inst: &ListInstance) -> bool {
    brute_force_solve(inst).expect("oracle guard").is_sat()
}

fn oracle_equivalence() -> Outcome {
    let solver = Solver::new(SolveConfig::default());
    let (mut total, mut sat) = (0, 0);
    for family in FAMILIES {
        for k in [2u32, 3, 4] {
            for density in [0.5, 0.75, 1.0] {
                for seed in 0..20u64 {
                    let n = 3 + (seed % 8) as usize;
                    let inst = instance(graph(family, n, seed), k, density, seed * 7 + k as u64);
                    let expected = oracle_sat(&inst);
                    let got = solver
                        .solve(&inst)
                        .map_err(|e| format!("{family:?} seed {seed}: {e}"))?;
                    ensure(got.is_sat() == expected, || {
                        format!("{family:?} n={n} k={k} density={density} seed={seed}: solver {} oracle {expected}", got.is_sat())
                    })?;
                    if let Verdict::Sat(c) = &got {
                        ensure(verify(c, &inst).unwrap(), || {
                            format!("seed {seed}: certificate rejected")
                        })?;
                        sat += 1;
                    }
                    total += 1;
                }
            }
        }
    }
    ensure(total >= 500, || format!("only {total} instances"))?;
    Ok(format!(
        "{total} instances, {sat} SAT / {} UNSAT, all agree",
        total - sat
    ))
}

fn chromatic_fixtures() -> Outcome {
    let solver = Solver::new(SolveConfig::default());
    let octahedron = generate(&GenSpec {
        parts: vec![2, 2, 2],
        ..GenSpec::new(Family::CompleteMultipartite, 6, 0)
    })
    .unwrap();
    let mut cases = vec![
        ("C5", cycle(5), 3),
        ("W5", wheel5(), 4),
        ("K_{2,2,2}", octahedron, 3),
    ];
    for t in 1..=5 {
        cases.push(("K_t", Graph::complete(t), t as u32));
    }
    for (name, g, chi) in &cases {
        let got = solver
            .chromatic_coloring(g, 6)
            .unwrap()
            .map(|c| c.chromatic_number);
        ensure(got == Some(*chi), || {
            format!("{name}: expected {chi}, got {got:?}")
        })?;
    }
    Ok(format!("{} fixtures exact", cases.len()))
}

fn dominating_structures() -> Outcome {
    let (mut cliques, mut paths) = (0, 0);
    for seed in 0..200u64 {
        let n = 5 + (seed % 10) as usize;
        let g = if seed % 4 == 3 {
            c5_substitution(seed, n)
        } else {
            connected_graph(FAMILIES[(seed % 3) as usize], n, seed)
        };
        ensure(g.is_connected() && g.find_induced_p5().is_none(), || {
            format!("seed {seed}: bad fixture")
        })?;
        let ds = g
            .find_dominating_structure(n)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let d = ds.vertices.to_vec();
        let dominated = (0..n).all(|v| d.contains(&v) || d.iter().any(|&u| g.has_edge(u, v)));
        let pairs: Vec<bool> = d
            .iter()
            .flat_map(|&a| d.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .map(|(a, b)| g.has_edge(a, b))
            .collect();
        let shape_ok = match ds.kind {
            StructureKind::Clique => pairs.iter().all(|&e| e),
            StructureKind::PathP3 => d.len() == 3 && pairs.iter().filter(|&&e| e).count() == 2,
        };
        ensure(dominated && shape_ok, || {
            format!("seed {seed}: invalid {:?} {d:?}", ds.kind)
        })?;
        match ds.kind {
            StructureKind::Clique => cliques += 1,
            StructureKind::PathP3 => paths += 1,
        }
    }
    Ok(format!("200 graphs, {cliques} cliques, {paths} P3s"))
}

/// Runs `check` on the first `want` seeds whose fixture exists.
fn over_inputs<T>(
    want: usize,
    make: impl Fn(u64) -> Option<T>,
    mut check: impl FnMut(u64, T) -> Result<bool, String>,
) -> Result<(usize, usize), String> {
    let (mut done, mut nontrivial) = (0, 0);
    let mut seed = 0;
    while done < want {
        if let Some(x) = make(seed) {
            if check(seed, x)? {
                nontrivial += 1;
            }
            done += 1;
        }
        seed += 1;
        ensure(seed < 100 * want as u64, || {
            "fixture generator starved".into()
        })?;
    }
    Ok((done, nontrivial))
}

fn monotone(parent: &ListInstance, out: &InstanceSet) -> bool {
    out.iter().all(|c| c.palettes_within(parent))
}

fn postconditions() -> Outcome {
    let stats = StatsRecorder::default();
    let env = env(&stats);
    let (pi, pi_nt) = over_inputs(
        200,
        |s| busy_pi_input(s, 12),
        |seed, (inst, ctx)| {
            let out =
                pi_prime(&inst, &ctx, &env).map_err(|e| format!("pi_prime seed {seed}: {e}"))?;
            ensure(out.iter().all(|c| ctx.s_prime(c).is_empty()), || {
                format!("pi_prime seed {seed}: S' not cleared")
            })?;
            ensure(monotone(&inst, &out), || {
                format!("pi_prime seed {seed}: palette grew")
            })?;
            Ok(!ctx.s_prime(&inst).is_empty())
        },
    )?;
    let (th, th_nt) = over_inputs(
        200,
        |s| busy_bag_pair_input(s, 12),
        |seed, (inst, i, j)| {
            let out = theta_prime(&inst, &i, &j, &env)
                .map_err(|e| format!("theta_prime seed {seed}: {e}"))?;
            for c in out.iter() {
                ensure(c.cross_essential_set(&i, &j).unwrap().is_empty(), || {
                    format!("theta_prime seed {seed}: U_I^J not cleared")
                })?;
            }
            ensure(monotone(&inst, &out), || {
                format!("theta_prime seed {seed}: palette grew")
            })?;
            Ok(!inst.cross_essential_set(&i, &j).unwrap().is_empty())
        },
    )?;
    let (la, la_nt) = over_inputs(
        200,
        |s| lambda_input(s, 12),
        |seed, inst| {
            let out =
                algorithm_lambda(&inst, &env).map_err(|e| format!("lambda seed {seed}: {e}"))?;
            for c in out.iter() {
                for key in c.bags().unwrap().keys() {
                    ensure(c.is_separated(key), || {
                        format!("lambda seed {seed}: bag {key:?} not separated")
                    })?;
                }
            }
            ensure(monotone(&inst, &out), || {
                format!("lambda seed {seed}: palette grew")
            })?;
            Ok(!out.is_empty())
        },
    )?;
    Ok(format!(
        "pi_prime {pi} ({pi_nt} with S' nonempty), theta_prime {th} ({th_nt} with U_I^J nonempty), lambda {la} ({la_nt} nonempty outputs)"
    ))
}

fn compatibility() -> Outcome {
    let stats = StatsRecorder::default();
    let env = env(&stats);
    let compatible =
        |parent: &ListInstance, out: &InstanceSet| oracle_sat(parent) == out.iter().any(oracle_sat);
    let mut lines = vec![];
    let (n, sat) = over_inputs(
        300,
        |s| busy_pi_input(s, 10),
        |seed, (inst, ctx)| {
            let out = procedure_pi(&inst, &ctx, &env).map_err(|e| e.to_string())?;
            ensure(compatible(&inst, &out), || {
                format!("procedure_pi seed {seed}")
            })?;
            Ok(oracle_sat(&inst))
        },
    )?;
    lines.push(format!("pi {n} ({sat} SAT)"));
    let (n, sat) = over_inputs(
        300,
        |s| busy_pi_input(s, 10),
        |seed, (inst, ctx)| {
            let out = pi_prime(&inst, &ctx, &env).map_err(|e| e.to_string())?;
            ensure(compatible(&inst, &out), || format!("pi_prime seed {seed}"))?;
            Ok(oracle_sat(&inst))
        },
    )?;
    lines.push(format!("pi_prime {n} ({sat} SAT)"));
    let (n, sat) = over_inputs(
        300,
        |s| busy_bag_pair_input(s, 10),
        |seed, (inst, i, j)| {
            let out = procedure_theta(&inst, &i, &j, &env).map_err(|e| e.to_string())?;
            ensure(compatible(&inst, &out), || {
                format!("procedure_theta seed {seed}")
            })?;
            Ok(oracle_sat(&inst))
        },
    )?;
    lines.push(format!("theta {n} ({sat} SAT)"));
    let (n, sat) = over_inputs(
        300,
        |s| busy_bag_pair_input(s, 10),
        |seed, (inst, i, j)| {
            let out = theta_prime(&inst, &i, &j, &env).map_err(|e| e.to_string())?;
            ensure(compatible(&inst, &out), || {
                format!("theta_prime seed {seed}")
            })?;
            Ok(oracle_sat(&inst))
        },
    )?;
    lines.push(format!("theta_prime {n} ({sat} SAT)"));
    let (n, sat) = over_inputs(
        300,
        |s| lambda_input(s, 10),
        |seed, inst| {
            let out = algorithm_lambda(&inst, &env).map_err(|e| e.to_string())?;
            ensure(compatible(&inst, &out), || format!("lambda seed {seed}"))?;
            Ok(oracle_sat(&inst))
        },
    )?;
    lines.push(format!("lambda {n} ({sat} SAT)"));
    Ok(lines.join(", "))
}

fn two_sat_base_case() -> Outcome {
    let mut sat = 0;
    for seed in 0..300u64 {
        let n = 2 + (seed % 11) as usize;
        let k = 2 + (seed % 5) as u32;
        let g = graph(FAMILIES[(seed % 3) as usize], n, seed);
        let lists: Vec<Palette> = instance(g.clone(), k, 0.5, seed)
            .palettes()
            .iter()
            .map(|p| p.iter().take(2).collect())
            .collect();
        let inst = ListInstance::new(g, k, lists).unwrap();
        let got = solve_two_list(&inst).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(got.is_some() == oracle_sat(&inst), || {
            format!("seed {seed}: 2-SAT disagrees")
        })?;
        if let Some(c) = got {
            ensure(verify(&c, &inst).unwrap(), || {
                format!("seed {seed}: 2-SAT certificate rejected")
            })?;
            sat += 1;
        }
    }
    Ok(format!("300 instances ({sat} SAT), all agree"))
}

fn universe_three() -> Outcome {
    let solver = Solver::new(SolveConfig::default());
    let mut sat = 0;
    for seed in 0..200u64 {
        let n = 4 + (seed % 7) as usize;
        let density = [0.75, 1.0][(seed % 2) as usize];
        let inst = instance(
            graph(FAMILIES[(seed % 3) as usize], n, seed + 1000),
            3,
            density,
            seed,
        );
        let got = solver
            .solve(&inst)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(got.is_sat() == oracle_sat(&inst), || {
            format!("seed {seed}: universe-3 disagrees")
        })?;
        sat += got.is_sat() as usize;
    }
    Ok(format!("200 instances ({sat} SAT), all agree"))
}

/// C5 with every vertex replaced by an independent set, plus `hubs`
/// pairwise adjacent vertices joined to everything. One edge inside the
/// first part makes the blow-up need three colors.
fn c5_blowup(n: usize, hubs: usize) -> Graph {
    let rim = n - hubs;
    let part = |v: usize| v % 5;
    let mut edges = vec![(0, 5)];
    for u in 0..n {
        for v in u + 1..n {
            if v >= rim || (part(u) + 1) % 5 == part(v) || (part(v) + 1) % 5 == part(u) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

fn smoke_graphs(n: usize) -> Vec<(&'static str, Graph)> {
    let split = generate(&GenSpec {
        parts: vec![4],
        edge_probability: 0.3,
        ..GenSpec::new(Family::SplitGraph, n, n as u64)
    })
    .unwrap();
    let q = n / 4;
    let multi = generate(&GenSpec {
        parts: vec![q, q, q, n - 3 * q],
        ..GenSpec::new(Family::CompleteMultipartite, n, n as u64)
    })
    .unwrap();
    vec![
        ("split", split),
        ("multipartite", multi),
        ("c5-blowup", c5_blowup(n, 0)),
        ("c5-blowup+hub", c5_blowup(n, 1)),
        ("c5-blowup+2hubs", c5_blowup(n, 2)),
    ]
}

fn smoke() -> Outcome {
    let budget = Duration::from_secs(120);
    let mut parts = vec![];
    for n in [20, 40, 80] {
        for (name, g) in smoke_graphs(n) {
            ensure(g.find_induced_p5().is_none(), || {
                format!("{name} n={n} is not P5-free")
            })?;
            let solver = Solver::new(SolveConfig::default());
            let inst = ListInstance::full(g, 4).unwrap();
            let t = Instant::now();
            let verdict = match solver.solve(&inst) {
                Err(Error::Internal(e)) => {
                    return Err(format!("{name} n={n}: universe assertion: {e}"))
                }
                Err(e) => return Err(format!("{name} n={n}: {e}")),
                Ok(v) => v,
            };
            let took = t.elapsed();
            ensure(took < budget, || format!("{name} n={n} took {took:?}"))?;
            let depth = solver.stats().recursion_depth;
            ensure(depth < 4, || {
                format!("{name} n={n}: recursion depth {depth} with 4 colors")
            })?;
            parts.push(format!(
                "{name}/{n} {} {:.1}ms",
                if verdict.is_sat() { "SAT" } else { "UNSAT" },
                took.as_secs_f64() * 1e3
            ));
        }
    }
    Ok(parts.join(", "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 dominating clique or P3", dominating_structures),
        ("3 procedure postconditions", postconditions),
        ("4 compatibility", compatibility),
        ("5a 2-SAT base case", two_sat_base_case),
        ("5b universe-3 base case", universe_three),
        ("6 k=4 smoke test", smoke),
        ("7 known chromatic numbers", chromatic_fixtures),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({secs:.2}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] {why} ({secs:.2}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
