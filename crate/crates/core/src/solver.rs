//! Recursive k-list-coloring solver for P5-free graphs.
//!
//! A solve simplifies the instance, splits it along essential edges, and
//! handles each piece by palette size and universe:
//!
//! * all palettes of size ≤ 2 (or `k ≤ 2`): 2-SAT;
//! * `k = 3`: color a dominating structure every possible way, then 2-SAT;
//! * `k ≥ 4`: Λ yields instances with a colored dominating set and separated
//!   bags; each bag is a list-coloring instance over fewer colors and is
//!   solved recursively.

use std::time::{Duration, Instant};

use log::debug;
use rayon::prelude::*;

use crate::branching::{
    bag_pairs, dominating_colorings, visit_separation, BranchEnv, BranchStats, ChromaticColoring,
    ChromaticOracle, Flow, StatsRecorder,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Color, ListInstance, Palette, MAX_UNIVERSE};
use crate::sat2;

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// Largest color universe accepted (at most 64).
    pub max_universe: u32,
    /// Explore dominating-set colorings and bags on the rayon pool.
    pub enable_parallel: bool,
    /// 0 = quiet; higher values log more through the `log` facade.
    pub trace: u8,
    /// Wall-clock budget for one solver instance.
    pub deadline: Option<Duration>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            max_universe: MAX_UNIVERSE,
            enable_parallel: false,
            trace: 0,
            deadline: None,
        }
    }
}

/// Solver state for one run: configuration, deadline and counters.
pub struct Solver {
    cfg: SolveConfig,
    stats: StatsRecorder,
    deadline: Option<Instant>,
}

/// Chromatic oracle handed to the branching code, carrying the recursion
/// depth and the universe it must stay below.
struct Nested<'a> {
    solver: &'a Solver,
    depth: usize,
    universe: u32,
}

impl ChromaticOracle for Nested<'_> {
    fn chromatic_coloring(&self, g: &Graph, cap: u32) -> Result<Option<ChromaticColoring>> {
        if cap >= self.universe {
            return Err(Error::Internal(format!(
                "chromatic query with cap {cap} inside a {}-color solve",
                self.universe
            )));
        }
        self.solver.chromatic_at(g, cap, self.depth)
    }
}

impl ChromaticOracle for Solver {
    fn chromatic_coloring(&self, g: &Graph, cap: u32) -> Result<Option<ChromaticColoring>> {
        Solver::chromatic_coloring(self, g, cap)
    }
}

impl Solver {
    pub fn new(cfg: SolveConfig) -> Self {
        let deadline = cfg.deadline.map(|d| Instant::now() + d);
        Self {
            cfg: SolveConfig {
                max_universe: cfg.max_universe.clamp(1, MAX_UNIVERSE),
                ..cfg
            },
            stats: StatsRecorder::default(),
            deadline,
        }
    }

    pub fn config(&self) -> &SolveConfig {
        &self.cfg
    }

    pub fn stats(&self) -> BranchStats {
        self.stats.snapshot()
    }

    /// Decides the list-coloring instance. The graph must be P5-free.
    pub fn solve(&self, inst: &ListInstance) -> Result<Verdict> {
        self.check_universe(inst.universe())?;
        ensure_p5_free(inst.graph())?;
        let verdict = match self.solve_at(inst, 0)? {
            Some(c) => Verdict::Sat(c),
            None => Verdict::Unsat {
                clique: inst
                    .graph()
                    .find_clique_exceeding(inst.universe() as usize)
                    .map(|c| c.to_vec()),
            },
        };
        self.checked(verdict, inst)
    }

    /// Solves an instance whose dominating set is colored and whose bags are
    /// all separated, one bag at a time.
    pub fn solve_separated(&self, inst: &ListInstance) -> Result<Verdict> {
        let verdict = match self.separated_at(inst, 0)? {
            Some(c) => Verdict::Sat(c),
            None => Verdict::unsat(),
        };
        self.checked(verdict, inst)
    }

    /// Is `g` k-colorable? Cliques on `k + 1` vertices are reported as witnesses.
    pub fn k_colorability(&self, g: &Graph, k: u32) -> Result<Verdict> {
        ensure_p5_free(g)?;
        let verdict = self.k_colorability_at(g, k, 0)?;
        if let Verdict::Sat(c) = &verdict {
            if !is_proper(g, c, k) {
                return Err(Error::Internal("k-coloring failed verification".into()));
            }
        }
        Ok(verdict)
    }

    /// A minimum coloring of `g`, or `None` when more than `cap` colors are needed.
    pub fn chromatic_coloring(&self, g: &Graph, cap: u32) -> Result<Option<ChromaticColoring>> {
        ensure_p5_free(g)?;
        self.chromatic_at(g, cap, 0)
    }

    fn check_universe(&self, k: u32) -> Result<()> {
        if k > self.cfg.max_universe {
            return Err(Error::Input(format!(
                "universe {k} exceeds configured maximum {}",
                self.cfg.max_universe
            )));
        }
        Ok(())
    }

    fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }

    fn checked(&self, verdict: Verdict, inst: &ListInstance) -> Result<Verdict> {
        if let Verdict::Sat(c) = &verdict {
            if !verify(c, inst)? {
                return Err(Error::Internal("certificate failed verification".into()));
            }
        }
        Ok(verdict)
    }

    fn k_colorability_at(&self, g: &Graph, k: u32, depth: usize) -> Result<Verdict> {
        if k == 0 {
            return Ok(if g.n() == 0 {
                Verdict::Sat(Vec::new())
            } else {
                Verdict::unsat()
            });
        }
        self.check_universe(k)?;
        if let Some(clique) = g.find_clique_exceeding(k as usize) {
            return Ok(Verdict::Unsat {
                clique: Some(clique.to_vec()),
            });
        }
        let inst = ListInstance::full(g.clone(), k)?;
        Ok(match self.solve_at(&inst, depth)? {
            Some(c) => Verdict::Sat(c),
            None => Verdict::unsat(),
        })
    }

    fn chromatic_at(&self, g: &Graph, cap: u32, depth: usize) -> Result<Option<ChromaticColoring>> {
        if g.n() == 0 {
            return Ok(Some(ChromaticColoring {
                colors: Vec::new(),
                chromatic_number: 0,
            }));
        }
        for c in 1..=cap.min(self.cfg.max_universe) {
            if let Verdict::Sat(colors) = self.k_colorability_at(g, c, depth)? {
                return Ok(Some(ChromaticColoring {
                    colors,
                    chromatic_number: c,
                }));
            }
        }
        Ok(None)
    }

    /// Core recursion. `None` means no coloring exists.
    fn solve_at(&self, inst: &ListInstance, depth: usize) -> Result<Option<Vec<Color>>> {
        self.check_deadline()?;
        self.stats.reached_depth(depth);
        let Some(inst) = inst.clone().simplify() else {
            return Ok(None);
        };
        let mut coloring = vec![0; inst.n()];
        let components = inst.essential_components();
        if components.len() == 1 && inst.n() > 1 {
            return self.solve_component(&inst, depth);
        }
        for comp in components {
            if comp.len() == 1 {
                let v = comp.first().unwrap();
                coloring[v] = inst
                    .palette(v)
                    .min()
                    .expect("simplified palettes are nonempty");
                continue;
            }
            let sub = inst.induced(&comp);
            match self.solve_component(&sub.instance, depth)? {
                Some(c) => {
                    for (i, color) in c.into_iter().enumerate() {
                        coloring[sub.vertices[i]] = color;
                    }
                }
                None => return Ok(None),
            }
        }
        Ok(Some(coloring))
    }

    /// Solves a simplified instance that is connected through essential edges.
    fn solve_component(&self, inst: &ListInstance, depth: usize) -> Result<Option<Vec<Color>>> {
        let (inst, colors) = compact_universe(inst);
        let rename = |c: Vec<Color>| c.into_iter().map(|x| colors[x as usize - 1]).collect();
        let k = inst.universe();
        if k <= 2 || inst.palettes().iter().all(|p| p.len() <= 2) {
            return Ok(sat2::solve_two_list(&inst)?.map(rename));
        }
        if inst.graph().find_clique_exceeding(k as usize).is_some() {
            return Ok(None);
        }
        let ds = inst.graph().find_dominating_structure(k as usize)?;
        let inst = inst.with_dominating(ds.vertices)?;
        debug!(
            "depth {depth}: n={} k={k} |D|={}",
            inst.n(),
            inst.dominating().len()
        );
        let found = if k == 3 {
            self.solve_three(&inst)?
        } else {
            self.solve_lambda(&inst, depth)?
        };
        Ok(found.map(rename))
    }

    /// Three colors: fixing the dominating structure leaves palettes of size
    /// at most two everywhere.
    fn solve_three(&self, inst: &ListInstance) -> Result<Option<Vec<Color>>> {
        let owned = self.env(0, inst.universe());
        let env = owned.as_env();
        for fixed in dominating_colorings(inst, &env)? {
            if let Some(c) = sat2::solve_two_list(&fixed)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    fn solve_lambda(&self, inst: &ListInstance, depth: usize) -> Result<Option<Vec<Color>>> {
        let owned = self.env(depth + 1, inst.universe());
        let env = owned.as_env();
        let pairs = bag_pairs(inst)?;
        let colorings = dominating_colorings(inst, &env)?;
        let search = |fixed: ListInstance| -> Result<Option<Vec<Color>>> {
            let mut found = None;
            let _ = visit_separation(fixed, &pairs, &env, &mut |leaf| {
                Ok(match self.separated_at(&leaf, depth)? {
                    Some(c) => {
                        found = Some(c);
                        Flow::Break(())
                    }
                    None => Flow::Continue(()),
                })
            })?;
            Ok(found)
        };
        if self.cfg.enable_parallel {
            colorings
                .into_par_iter()
                .map(search)
                .find_map_any(Result::transpose)
                .transpose()
        } else {
            for fixed in colorings {
                if let Some(c) = search(fixed)? {
                    return Ok(Some(c));
                }
            }
            Ok(None)
        }
    }

    fn separated_at(&self, inst: &ListInstance, depth: usize) -> Result<Option<Vec<Color>>> {
        let mut coloring = vec![0; inst.n()];
        for d in inst.dominating() {
            coloring[d] = inst
                .palette(d)
                .single()
                .ok_or_else(|| Error::Contract(format!("dominating vertex {d} is not colored")))?;
        }
        let keys: Vec<_> = inst.bags()?.into_keys().collect();
        let solve_bag = |key| -> Result<Option<(crate::instance::BagRestriction, Vec<Color>)>> {
            let bag = inst.restrict_bag(key)?;
            if bag.instance.universe() >= inst.universe() {
                return Err(Error::Internal(format!(
                    "bag universe {} does not drop below {}",
                    bag.instance.universe(),
                    inst.universe()
                )));
            }
            Ok(self.solve_at(&bag.instance, depth + 1)?.map(|c| (bag, c)))
        };
        let solved: Vec<_> = if self.cfg.enable_parallel {
            keys.par_iter().map(solve_bag).collect::<Result<_>>()?
        } else {
            let mut out = Vec::with_capacity(keys.len());
            for key in &keys {
                let r = solve_bag(key)?;
                let unsat = r.is_none();
                out.push(r);
                if unsat {
                    break;
                }
            }
            out
        };
        for r in solved {
            let Some((bag, c)) = r else {
                return Ok(None);
            };
            bag.lift(&c, &mut coloring);
        }
        Ok(Some(coloring))
    }

    fn env(&self, depth: usize, universe: u32) -> BranchEnvOwned<'_> {
        BranchEnvOwned {
            oracle: Nested {
                solver: self,
                depth,
                universe,
            },
            deadline: self.deadline,
            stats: &self.stats,
        }
    }
}

/// Owns the nested oracle so a [`BranchEnv`] can borrow it.
struct BranchEnvOwned<'a> {
    oracle: Nested<'a>,
    deadline: Option<Instant>,
    stats: &'a StatsRecorder,
}

impl BranchEnvOwned<'_> {
    fn as_env(&self) -> BranchEnv<'_> {
        BranchEnv {
            chromatic: &self.oracle,
            stats: self.stats,
            deadline: self.deadline,
        }
    }
}

/// Renames colors onto `1..=m` where `m` is the number of colors actually
/// used by some palette. Returns the renamed instance and the old colors.
fn compact_universe(inst: &ListInstance) -> (ListInstance, Vec<Color>) {
    let used = inst
        .palettes()
        .iter()
        .fold(Palette::EMPTY, |a, &p| a.union(p));
    let colors: Vec<Color> = used.iter().collect();
    if colors.len() as u32 == inst.universe() {
        return (inst.clone(), colors);
    }
    let mut rename = [0 as Color; MAX_UNIVERSE as usize + 1];
    for (i, &c) in colors.iter().enumerate() {
        rename[c as usize] = i as Color + 1;
    }
    let palettes = inst
        .palettes()
        .iter()
        .map(|p| p.iter().map(|c| rename[c as usize]).collect())
        .collect();
    let compact = ListInstance::new(
        inst.graph_arc().clone(),
        (colors.len() as u32).max(1),
        palettes,
    )
    .expect("renamed palettes fit the compact universe");
    (compact, colors)
}

fn ensure_p5_free(g: &Graph) -> Result<()> {
    match g.find_induced_p5() {
        Some(witness) => Err(Error::NotP5Free { witness }),
        None => Ok(()),
    }
}

fn is_proper(g: &Graph, coloring: &[Color], k: u32) -> bool {
    coloring.len() == g.n()
        && coloring.iter().all(|&c| (1..=k).contains(&c))
        && g.edges().all(|(u, v)| coloring[u] != coloring[v])
}

/// True iff every vertex takes a color from its palette and no edge is
/// monochromatic.
pub fn verify(coloring: &[Color], inst: &ListInstance) -> Result<bool> {
    if coloring.len() != inst.n() {
        return Err(Error::Contract(format!(
            "certificate covers {} of {} vertices",
            coloring.len(),
            inst.n()
        )));
    }
    Ok(coloring
        .iter()
        .enumerate()
        .all(|(v, &c)| inst.palette(v).contains(c))
        && inst
            .graph()
            .edges()
            .all(|(u, v)| coloring[u] != coloring[v]))
}

pub use crate::instance::Verdict;
