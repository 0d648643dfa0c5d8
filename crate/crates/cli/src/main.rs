mod bench;
mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{ArgAction, Parser, Subcommand};
use log::LevelFilter;
use p5color::formats::{parse_dimacs, parse_lists, write_dimacs, write_lists};
use p5color::testkit::{brute_force_solve, generate, generate_lists, Family, GenSpec};
use p5color::{verify, Color, Error, Graph, ListInstance, Result, SolveConfig, Solver, Verdict};

use report::{ids, ComponentStructure, Generated, RunReport, Status};

#[derive(Parser)]
#[command(
    name = "p5color",
    version,
    about = "Exact k-list-coloring for P5-free graphs"
)]
struct Cli {
    /// More logging on stderr (repeat for more detail).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide k-list-colorability of a DIMACS graph.
    Solve {
        #[arg(short)]
        k: u32,
        /// Per-vertex lists, one `id: c1 c2 ..` line per vertex; missing vertices get all k colors.
        #[arg(long)]
        lists: Option<PathBuf>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        parallel: bool,
        /// Re-check the coloring in a previous JSON report instead of solving.
        #[arg(long, value_name = "REPORT")]
        verify: Option<PathBuf>,
        graph: PathBuf,
    },
    /// Chromatic number and a minimum coloring.
    Chromatic {
        /// Give up above this many colors (default: number of vertices).
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        parallel: bool,
        graph: PathBuf,
    },
    /// Look for an induced P5.
    CheckP5 { graph: PathBuf },
    /// Dominating clique or P3 for every connected component.
    Dom { graph: PathBuf },
    /// Generate a random P5-free graph, optionally with random lists.
    Gen {
        /// split, multipartite or rejection
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, env = "P5COLOR_SEED", default_value_t = 0)]
        seed: u64,
        /// Edge probability (split cross edges, rejection sampling).
        #[arg(long, conflicts_with = "parts")]
        p: Option<f64>,
        /// Part sizes for multipartite graphs; a single value fixes the clique size of a split graph.
        #[arg(long, value_delimiter = ',')]
        parts: Vec<usize>,
        #[arg(short, requires = "lists_out")]
        k: Option<u32>,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        /// Write the graph here; without it the DIMACS text goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        lists_out: Option<PathBuf>,
    },
    /// Brute-force verdict, for cross-checking small inputs.
    Oracle {
        #[arg(short)]
        k: u32,
        #[arg(long)]
        lists: Option<PathBuf>,
        graph: PathBuf,
    },
    /// Timed acceptance-style suites: oracle, dominating, smoke or all.
    Bench {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        parallel: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_dimacs(&read(path)?)
}

fn load_instance(graph: &Path, k: u32, lists: Option<&Path>) -> Result<ListInstance> {
    let g = load_graph(graph)?;
    let palettes = match lists {
        Some(path) => parse_lists(&read(path)?, g.n(), k)?,
        None => return ListInstance::full(g, k),
    };
    ListInstance::new(g, k, palettes)
}

fn config(timeout: Option<f64>, parallel: bool, trace: u8) -> Result<SolveConfig> {
    let deadline = match timeout {
        Some(s) if !(s.is_finite() && s >= 0.0) => {
            return Err(Error::Input(format!("bad timeout {s}")))
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    Ok(SolveConfig {
        enable_parallel: parallel,
        trace,
        deadline,
        ..SolveConfig::default()
    })
}

fn record_verdict(report: &mut RunReport, verdict: &Verdict) {
    match verdict {
        Verdict::Sat(c) => {
            report.status = Some(Status::Sat);
            report.set_coloring(c);
        }
        Verdict::Unsat { clique } => {
            report.status = Some(Status::Unsat);
            report.clique = clique.as_deref().map(ids);
        }
    }
}

/// Coloring from an earlier report, in vertex order.
fn replayed_coloring(path: &Path, n: usize) -> Result<(Option<Status>, Vec<Color>)> {
    let old: RunReport = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let map = old
        .coloring
        .ok_or_else(|| Error::Input(format!("{} carries no coloring", path.display())))?;
    let colors = (1..=n)
        .map(|id| {
            map.get(&id)
                .copied()
                .ok_or_else(|| Error::Input(format!("report has no color for vertex {id}")))
        })
        .collect::<Result<_>>()?;
    if map.len() != n {
        return Err(Error::Input(format!(
            "report colors {} vertices, graph has {n}",
            map.len()
        )));
    }
    Ok((old.status, colors))
}

/// Runs one subcommand and returns its exit code, or `None` when it wrote
/// its own output instead of a report.
fn run(cmd: Command, trace: u8, report: &mut RunReport) -> Result<Option<i32>> {
    match cmd {
        Command::Solve {
            k,
            lists,
            timeout,
            parallel,
            verify: replay,
            graph,
        } => {
            report.k = Some(k);
            let inst = load_instance(&graph, k, lists.as_deref())?;
            if let Some(path) = replay {
                let (status, colors) = replayed_coloring(&path, inst.n())?;
                let ok = verify(&colors, &inst)?;
                report.status = status;
                report.set_coloring(&colors);
                report.verified = Some(ok);
                eprintln!(
                    "replayed coloring from {}: {}",
                    path.display(),
                    if ok { "valid" } else { "INVALID" }
                );
                return Ok(Some(if ok { 0 } else { 1 }));
            }
            let solver = Solver::new(config(timeout, parallel, trace)?);
            let result = solver.solve(&inst);
            report.stats = Some(solver.stats());
            let verdict = result?;
            record_verdict(report, &verdict);
            match &verdict {
                Verdict::Sat(_) => eprintln!("SAT: {} vertices, {k} colors", inst.n()),
                Verdict::Unsat { clique: Some(c) } => {
                    eprintln!("UNSAT: clique {:?} needs {} colors", ids(c), c.len())
                }
                Verdict::Unsat { clique: None } => eprintln!("UNSAT"),
            }
            Ok(Some(0))
        }
        Command::Chromatic {
            cap,
            timeout,
            parallel,
            graph,
        } => {
            let g = load_graph(&graph)?;
            let cap = cap.unwrap_or(g.n() as u32).min(p5color::MAX_UNIVERSE);
            let solver = Solver::new(config(timeout, parallel, trace)?);
            let result = solver.chromatic_coloring(&g, cap);
            report.stats = Some(solver.stats());
            match result? {
                Some(col) => {
                    report.status = Some(Status::Sat);
                    report.chromatic_number = Some(col.chromatic_number);
                    report.set_coloring(&col.colors);
                    eprintln!("chromatic number {}", col.chromatic_number);
                }
                None => {
                    report.status = Some(Status::Unsat);
                    eprintln!("chromatic number exceeds {cap}");
                }
            }
            Ok(Some(0))
        }
        Command::CheckP5 { graph } => {
            let g = load_graph(&graph)?;
            let witness = g.find_induced_p5();
            report.p5_free = Some(witness.is_none());
            report.witness = witness.map(|w| ids(&w));
            match &report.witness {
                Some(w) => eprintln!("induced P5: {w:?}"),
                None => eprintln!("P5-free"),
            }
            Ok(Some(0))
        }
        Command::Dom { graph } => {
            let g = load_graph(&graph)?;
            if let Some(witness) = g.find_induced_p5() {
                return Err(Error::NotP5Free { witness });
            }
            report.p5_free = Some(true);
            let mut found = Vec::new();
            for comp in g.connected_components() {
                let (sub, map) = g.induced_subgraph(&comp);
                let ds = sub.find_dominating_structure(sub.n())?;
                let vertices: Vec<usize> = ds.vertices.iter().map(|v| map[v]).collect();
                eprintln!(
                    "component of {} vertices: {:?} {:?}",
                    map.len(),
                    ds.kind,
                    ids(&vertices)
                );
                found.push(ComponentStructure {
                    component: ids(&map),
                    kind: ds.kind,
                    vertices: ids(&vertices),
                });
            }
            report.dominating = Some(found);
            Ok(Some(0))
        }
        Command::Gen {
            family,
            n,
            seed,
            p,
            parts,
            k,
            density,
            out,
            lists_out,
        } => {
            let n = match (family, n) {
                (Family::CompleteMultipartite, n) => {
                    let total = parts.iter().sum();
                    if n.is_some_and(|n| n != total) {
                        return Err(Error::Input(format!(
                            "--n disagrees with --parts (sum {total})"
                        )));
                    }
                    total
                }
                (_, Some(n)) => n,
                (_, None) => return Err(Error::Input("--n is required for this family".into())),
            };
            let mut spec = GenSpec::new(family, n, seed);
            spec.parts = parts;
            if let Some(p) = p {
                spec.edge_probability = p;
            }
            spec.list_density = density;
            let g = generate(&spec)?;
            let family_name = format!("{family:?}");
            let comments = vec![format!("seed {seed}"), format!("family {family_name}")];
            let text = write_dimacs(&g, &comments);
            if let (Some(k), Some(path)) = (k, &lists_out) {
                let lists = generate_lists(&g, k, density, seed)?;
                let mut c = comments.clone();
                c.push(format!("k {k} density {density}"));
                fs::write(path, write_lists(&lists, &c))?;
            }
            eprintln!(
                "{family_name}: n={} m={} seed={seed}",
                g.n(),
                g.edge_count()
            );
            let Some(path) = &out else {
                let _ = std::io::stdout().lock().write_all(text.as_bytes());
                return Ok(None);
            };
            fs::write(path, text)?;
            report.generated = Some(Generated {
                family: family_name,
                n: g.n(),
                m: g.edge_count(),
                seed,
                graph_file: Some(path.display().to_string()),
                lists_file: lists_out.map(|p| p.display().to_string()),
            });
            Ok(Some(0))
        }
        Command::Oracle { k, lists, graph } => {
            report.k = Some(k);
            let inst = load_instance(&graph, k, lists.as_deref())?;
            let verdict = brute_force_solve(&inst)?;
            record_verdict(report, &verdict);
            eprintln!("oracle: {}", if verdict.is_sat() { "SAT" } else { "UNSAT" });
            Ok(Some(0))
        }
        Command::Bench { suite, parallel } => {
            let rows = bench::run(&suite, parallel)?;
            eprint!("{}", bench::table(&rows));
            let ok = rows.iter().all(|r| r.ok);
            report.bench = Some(rows);
            Ok(Some(if ok { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        2 => LevelFilter::Debug,
        _ => LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();

    let name = match &cli.command {
        Command::Solve { .. } => "solve",
        Command::Chromatic { .. } => "chromatic",
        Command::CheckP5 { .. } => "check-p5",
        Command::Dom { .. } => "dom",
        Command::Gen { .. } => "gen",
        Command::Oracle { .. } => "oracle",
        Command::Bench { .. } => "bench",
    };
    let mut report = RunReport::new(name);
    let start = Instant::now();
    let code = match run(cli.command, cli.verbose, &mut report) {
        Ok(None) => return ExitCode::SUCCESS,
        Ok(Some(code)) => code,
        Err(e) => {
            let code = report.fail(&e);
            eprintln!("error: {}", report.error.as_deref().unwrap_or_default());
            code
        }
    };
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match serde_json::to_string_pretty(&report) {
        Ok(json) => {
            // a closed pipe is not worth a panic
            let _ = writeln!(std::io::stdout().lock(), "{json}");
        }
        Err(e) => {
            eprintln!("error: cannot serialize report: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code as u8)
}
