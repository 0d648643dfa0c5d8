//! Brute-force oracle and generators of P5-free graphs and random lists.
//!
//! The oracle is deliberately independent of the solver: plain backtracking
//! with forward checking, nothing specific to P5-free graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::branching::{ChromaticColoring, ChromaticOracle};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Color, ListInstance, Palette, Verdict};

/// Largest search space (product of palette sizes) the oracle accepts once
/// the vertex count exceeds [`ORACLE_MAX_VERTICES`].
pub const ORACLE_MAX_PRODUCT: f64 = 1e8;
pub const ORACLE_MAX_VERTICES: usize = 14;

/// Retry cap for rejection sampling.
pub const REJECTION_RETRIES: usize = 10_000;

/// Decides a list-coloring instance by exhaustive backtracking.
///
/// Refuses instances with more than [`ORACLE_MAX_VERTICES`] vertices whose
/// palette product exceeds [`ORACLE_MAX_PRODUCT`].
pub fn brute_force_solve(inst: &ListInstance) -> Result<Verdict> {
    let n = inst.n();
    let product: f64 = inst.palettes().iter().map(|p| p.len() as f64).product();
    if n > ORACLE_MAX_VERTICES && product > ORACLE_MAX_PRODUCT {
        return Err(Error::OracleRefused(format!(
            "{n} vertices with search space {product:.3e}"
        )));
    }
    let g = inst.graph();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut domains: Vec<Palette> = inst.palettes().to_vec();
    let mut coloring = vec![0 as Color; n];
    Ok(if backtrack(g, &order, 0, &mut domains, &mut coloring) {
        Verdict::Sat(coloring)
    } else {
        Verdict::unsat()
    })
}

fn backtrack(
    g: &Graph,
    order: &[usize],
    idx: usize,
    domains: &mut [Palette],
    coloring: &mut [Color],
) -> bool {
    let Some(&v) = order.get(idx) else {
        return true;
    };
    for c in domains[v].iter() {
        let mut touched = Vec::new();
        let mut dead = false;
        for w in g.neighbors(v) {
            if coloring[w] == 0 && domains[w].contains(c) {
                domains[w] = domains[w].without(c);
                touched.push(w);
                if domains[w].is_empty() {
                    dead = true;
                }
            }
        }
        coloring[v] = c;
        if !dead && backtrack(g, order, idx + 1, domains, coloring) {
            return true;
        }
        coloring[v] = 0;
        for w in touched {
            domains[w] = domains[w].with(c);
        }
    }
    false
}

/// Minimum coloring by trying `k = 0, 1, ..` with the oracle.
pub fn brute_force_chromatic(g: &Graph) -> Result<(u32, Vec<Color>)> {
    for k in 0..=g.n() as u32 {
        if k == 0 {
            if g.n() == 0 {
                return Ok((0, Vec::new()));
            }
            continue;
        }
        if let Verdict::Sat(c) = brute_force_solve(&ListInstance::full(g.clone(), k)?)? {
            return Ok((k, c));
        }
    }
    unreachable!("n colors always suffice")
}

/// Chromatic oracle backed by [`brute_force_chromatic`], for driving the
/// branching procedures without the solver.
#[derive(Clone, Copy, Debug, Default)]
pub struct BruteForceChromatic;

impl ChromaticOracle for BruteForceChromatic {
    fn chromatic_coloring(&self, g: &Graph, cap: u32) -> Result<Option<ChromaticColoring>> {
        let (chi, colors) = brute_force_chromatic(g)?;
        Ok((chi <= cap).then_some(ChromaticColoring {
            colors,
            chromatic_number: chi,
        }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Clique plus independent set with random edges between them.
    SplitGraph,
    /// Complete multipartite graph with the given part sizes.
    CompleteMultipartite,
    /// Erdős–Rényi graphs resampled until no induced P5 remains.
    RejectionSampled,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" | "split-graph" => Ok(Family::SplitGraph),
            "multipartite" | "complete-multipartite" => Ok(Family::CompleteMultipartite),
            "rejection" | "rejection-sampled" => Ok(Family::RejectionSampled),
            other => Err(Error::Input(format!("unknown graph family '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub edge_probability: f64,
    /// Part sizes for multipartite graphs. For split graphs a single entry
    /// fixes the clique size; otherwise the clique size is drawn at random.
    pub parts: Vec<usize>,
    pub seed: u64,
    pub list_density: f64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            edge_probability: 0.5,
            parts: Vec::new(),
            seed,
            list_density: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.edge_probability) {
            return Err(Error::Input("edge probability must be in [0, 1]".into()));
        }
        match self.family {
            Family::CompleteMultipartite => {
                if self.parts.is_empty() {
                    return Err(Error::Input("multipartite graphs need part sizes".into()));
                }
            }
            _ => {
                if self.n == 0 {
                    return Err(Error::Input("n must be at least 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// Generates a P5-free graph. Every output is checked with the P5 detector.
pub fn generate(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let g = match spec.family {
        Family::SplitGraph => split_graph(spec, &mut rng)?,
        Family::CompleteMultipartite => complete_multipartite(&spec.parts)?,
        Family::RejectionSampled => {
            let mut attempt = 0;
            loop {
                let g = gnp(spec.n, spec.edge_probability, &mut rng)?;
                if g.find_induced_p5().is_none() {
                    break g;
                }
                attempt += 1;
                if attempt >= REJECTION_RETRIES {
                    return Err(Error::Generator {
                        seed: spec.seed,
                        reason: format!("no P5-free sample in {REJECTION_RETRIES} tries"),
                    });
                }
            }
        }
    };
    if let Some(w) = g.find_induced_p5() {
        return Err(Error::Generator {
            seed: spec.seed,
            reason: format!("generated graph contains induced P5 {w:?}"),
        });
    }
    Ok(g)
}

/// Like [`generate`], but reseeds (deterministically) until the graph is
/// connected.
pub fn generate_connected(spec: &GenSpec) -> Result<Graph> {
    let mut s = spec.clone();
    for attempt in 0..REJECTION_RETRIES as u64 {
        s.seed = spec
            .seed
            .wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let g = generate(&s)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Generator {
        seed: spec.seed,
        reason: "no connected sample".into(),
    })
}

fn split_graph(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let n = spec.n;
    let clique = match spec.parts.as_slice() {
        [c] => (*c).min(n),
        _ => rng.gen_range(1..=n),
    };
    let mut edges = Vec::new();
    for u in 0..clique {
        for v in u + 1..clique {
            edges.push((u, v));
        }
    }
    for u in clique..n {
        for v in 0..clique {
            if rng.gen_bool(spec.edge_probability) {
                edges.push((u, v));
            }
        }
    }
    // shuffle ids so the clique is not always a prefix
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Graph::new(n, edges.into_iter().map(|(u, v)| (perm[u], perm[v])))
}

fn complete_multipartite(parts: &[usize]) -> Result<Graph> {
    let n: usize = parts.iter().sum();
    let mut part_of = Vec::with_capacity(n);
    for (i, &size) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(i, size));
    }
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::new(n, edges.filter(|&(u, v)| part_of[u] != part_of[v]))
}

fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random nonempty palettes: each color joins independently with
/// probability `density`; an empty draw falls back to one uniform color.
pub fn generate_lists(g: &Graph, k: u32, density: f64, seed: u64) -> Result<Vec<Palette>> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Input("list density must be in (0, 1]".into()));
    }
    if k == 0 || k > crate::instance::MAX_UNIVERSE {
        return Err(Error::Input(format!("universe {k} out of range")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..g.n())
        .map(|_| {
            let p: Palette = (1..=k).filter(|_| rng.gen_bool(density)).collect();
            if p.is_empty() {
                Palette::singleton(rng.gen_range(1..=k))
            } else {
                p
            }
        })
        .collect())
}
