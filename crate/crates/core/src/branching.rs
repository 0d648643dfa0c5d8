//! Branching constructions that turn one instance into a compatible family
//! of simpler instances: a family is compatible with `G` when `G` is
//! colorable iff at least one member is.
//!
//! * [`procedure_pi`] / [`pi_prime`] remove the essential edges between two
//!   independent sets `S ⊆ U_I` and `T ⊆ U_J`.
//! * [`procedure_theta`] / [`theta_prime`] remove every essential edge
//!   between two bags.
//! * [`algorithm_lambda`] colors the dominating set and separates all bags.
//!
//! Each construction comes in two shapes. The `visit_*` functions stream
//! members depth-first into a sink that may stop the search early; the
//! solver uses those. The plain functions collect the full, deduplicated
//! [`InstanceSet`].

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use log::trace;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Color, InstanceSet, ListInstance, Palette};
use crate::vertex_set::VertexSet;

pub type Flow = ControlFlow<()>;

/// Receives the members of a family one at a time.
pub type Sink<'s> = dyn FnMut(ListInstance) -> Result<Flow> + 's;

/// A proper coloring using the fewest possible colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticColoring {
    pub colors: Vec<Color>,
    pub chromatic_number: u32,
}

/// Supplies minimum colorings of (P5-free) graphs.
pub trait ChromaticOracle: Sync {
    /// A minimum coloring of `g`, or `None` when `g` needs more than `cap` colors.
    fn chromatic_coloring(&self, g: &Graph, cap: u32) -> Result<Option<ChromaticColoring>>;
}

/// Counters shared by every branch of one run.
#[derive(Debug)]
pub struct StatsRecorder {
    created: AtomicU64,
    pruned: AtomicU64,
    depth: AtomicU64,
    started: Instant,
}

impl Default for StatsRecorder {
    fn default() -> Self {
        Self {
            created: AtomicU64::new(0),
            pruned: AtomicU64::new(0),
            depth: AtomicU64::new(0),
            started: Instant::now(),
        }
    }
}

impl StatsRecorder {
    pub fn created(&self) {
        self.created.fetch_add(1, Ordering::Relaxed);
    }

    pub fn pruned(&self) {
        self.pruned.fetch_add(1, Ordering::Relaxed);
    }

    pub fn reached_depth(&self, depth: usize) {
        self.depth.fetch_max(depth as u64, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> BranchStats {
        BranchStats {
            instances_created: self.created.load(Ordering::Relaxed),
            instances_pruned: self.pruned.load(Ordering::Relaxed),
            recursion_depth: self.depth.load(Ordering::Relaxed),
            wall_time_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStats {
    pub instances_created: u64,
    pub instances_pruned: u64,
    pub recursion_depth: u64,
    pub wall_time_ms: u64,
}

/// Everything the constructions need besides the instance itself.
pub struct BranchEnv<'a> {
    pub chromatic: &'a dyn ChromaticOracle,
    pub stats: &'a StatsRecorder,
    pub deadline: Option<Instant>,
}

impl<'a> BranchEnv<'a> {
    pub fn new(chromatic: &'a dyn ChromaticOracle, stats: &'a StatsRecorder) -> Self {
        Self {
            chromatic,
            stats,
            deadline: None,
        }
    }

    pub fn with_timeout(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }

    fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }

    /// Simplifies a freshly branched instance and records the outcome.
    fn child(&self, inst: ListInstance) -> Option<ListInstance> {
        let out = inst.simplify();
        match out {
            Some(_) => self.stats.created(),
            None => self.stats.pruned(),
        }
        out
    }
}

/// Two independent sets `S ⊆ U_I` and `T ⊆ U_J` with `I ≠ J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchContext {
    pub s: VertexSet,
    pub t: VertexSet,
}

impl BranchContext {
    pub fn new(s: VertexSet, t: VertexSet) -> Self {
        Self { s, t }
    }

    /// `S'`: members of `S` with an essential neighbor in `T`.
    pub fn s_prime(&self, inst: &ListInstance) -> VertexSet {
        inst.essential_between(&self.t, &self.s)
    }

    /// `T'`: members of `T` with an essential neighbor in `S`.
    pub fn t_prime(&self, inst: &ListInstance) -> VertexSet {
        inst.essential_between(&self.s, &self.t)
    }

    /// Checks independence and that `S`, `T` sit in two different bags.
    pub fn validate(&self, inst: &ListInstance) -> Result<()> {
        let g = inst.graph();
        if !g.is_independent(&self.s) || !g.is_independent(&self.t) {
            return Err(Error::Contract("S and T must be independent sets".into()));
        }
        let key = |set: &VertexSet| -> Result<VertexSet> {
            let mut keys = set.iter().map(|v| g.neighbors(v) & inst.dominating());
            let first = keys.next().unwrap_or_else(|| inst.graph().empty_set());
            if set.iter().any(|v| inst.dominating().contains(v)) || keys.any(|k| k != first) {
                return Err(Error::Contract(format!(
                    "{set:?} is not contained in a single bag"
                )));
            }
            Ok(first)
        };
        let (i, j) = (key(&self.s)?, key(&self.t)?);
        if !self.s.is_empty() && !self.t.is_empty() && (i == j || i.is_empty() || j.is_empty()) {
            return Err(Error::Contract(
                "S and T must lie in two different bags".into(),
            ));
        }
        Ok(())
    }
}

/// A vertex of `S'` adjacent to every vertex of `T'`.
///
/// Picks the member of `S'` with the most neighbors in `T'` (smallest id on
/// ties). In a P5-free graph that vertex dominates `T'`; anything else is
/// reported as a precondition violation.
pub fn dominating_vertex(inst: &ListInstance, ctx: &BranchContext) -> Result<usize> {
    let s_prime = ctx.s_prime(inst);
    let t_prime = ctx.t_prime(inst);
    let g = inst.graph();
    let best = s_prime
        .iter()
        .max_by_key(|&v| {
            (
                g.neighbors(v).intersection_len(&t_prime),
                std::cmp::Reverse(v),
            )
        })
        .ok_or_else(|| Error::Contract("S' is empty".into()))?;
    if !t_prime.is_subset(g.neighbors(best)) {
        return Err(Error::Precondition(format!(
            "no vertex of S' dominates T' = {t_prime:?}; graph is not P5-free or bags are invalid"
        )));
    }
    Ok(best)
}

/// One round of branching on a vertex that dominates `T'`.
///
/// Either the vertex takes a color from `L(T')`, shrinking the palette of
/// `T'`, or its palette loses all of `L(T')` and the round repeats on the
/// smaller `S'`.
pub fn visit_pi(
    inst: ListInstance,
    ctx: &BranchContext,
    env: &BranchEnv,
    sink: &mut Sink,
) -> Result<Flow> {
    let mut current = inst;
    loop {
        env.check_deadline()?;
        let t_prime = ctx.t_prime(&current);
        if t_prime.is_empty() {
            return sink(current);
        }
        let v = dominating_vertex(&current, ctx)?;
        let target = current.palette_of(&t_prime);
        let own = current.palette(v);
        trace!("pi: v={v} |T'|={} |L(T')|={}", t_prime.len(), target.len());
        for d in own.intersection(target).iter() {
            if let Some(child) = env.child(current.with_palette(v, Palette::singleton(d))) {
                if sink(child)?.is_break() {
                    return Ok(Flow::Break(()));
                }
            }
        }
        let rest = own.difference(target);
        if rest.is_empty() {
            return Ok(Flow::Continue(()));
        }
        match env.child(current.with_palette(v, rest)) {
            Some(next) => current = next,
            None => return Ok(Flow::Continue(())),
        }
    }
}

/// Repeats [`visit_pi`] until `S'` is empty in every member.
pub fn visit_pi_prime(
    inst: ListInstance,
    ctx: &BranchContext,
    env: &BranchEnv,
    sink: &mut Sink,
) -> Result<Flow> {
    visit_pi(inst, ctx, env, &mut |child| {
        if ctx.s_prime(&child).is_empty() {
            sink(child)
        } else {
            visit_pi_prime(child, ctx, env, sink)
        }
    })
}

/// Color classes of a minimum coloring of `G[set]`, as parent-id sets,
/// ordered by color. `None` when more than `cap` colors are needed.
fn color_classes(
    env: &BranchEnv,
    inst: &ListInstance,
    set: &VertexSet,
    cap: u32,
) -> Result<Option<Vec<VertexSet>>> {
    let (sub, map) = inst.graph().induced_subgraph(set);
    let Some(col) = env.chromatic.chromatic_coloring(&sub, cap)? else {
        return Ok(None);
    };
    let mut classes = vec![inst.graph().empty_set(); col.chromatic_number as usize];
    for (i, &c) in col.colors.iter().enumerate() {
        classes[c as usize - 1].insert(map[i]);
    }
    classes.retain(|c| !c.is_empty());
    Ok(Some(classes))
}

/// One round of bag-pair branching: picks a color class `A` of `U_I^J` and
/// clears all essential edges between `A` and `U_J^I`, one color class of
/// `U_J^I` at a time.
pub fn visit_theta(
    inst: ListInstance,
    i: &VertexSet,
    j: &VertexSet,
    env: &BranchEnv,
    sink: &mut Sink,
) -> Result<Flow> {
    env.check_deadline()?;
    let u_ij = inst.cross_essential_set(i, j)?;
    if u_ij.is_empty() {
        return sink(inst);
    }
    let u_ji = inst.cross_essential_set(j, i)?;
    // Every bag vertex sees a vertex of D, so at most k-1 colors are usable.
    let cap = inst.universe() - 1;
    let Some(a_classes) = color_classes(env, &inst, &u_ij, cap)? else {
        env.stats.pruned();
        return Ok(Flow::Continue(()));
    };
    let Some(b_classes) = color_classes(env, &inst, &u_ji, cap)? else {
        env.stats.pruned();
        return Ok(Flow::Continue(()));
    };
    let a = a_classes
        .into_iter()
        .max_by(|x, y| {
            x.len()
                .cmp(&y.len())
                .then_with(|| y.first().cmp(&x.first()))
        })
        .expect("nonempty U_I^J has a color class");
    trace!(
        "theta: |U_I^J|={} |A|={} classes(U_J^I)={}",
        u_ij.len(),
        a.len(),
        b_classes.len()
    );
    fold_classes(inst, &a, &b_classes, env, sink)
}

fn fold_classes(
    inst: ListInstance,
    a: &VertexSet,
    classes: &[VertexSet],
    env: &BranchEnv,
    sink: &mut Sink,
) -> Result<Flow> {
    let Some((b, rest)) = classes.split_first() else {
        return sink(inst);
    };
    let ctx = BranchContext::new(a.clone(), b.clone());
    visit_pi_prime(inst, &ctx, env, &mut |child| {
        fold_classes(child, a, rest, env, sink)
    })
}

/// Repeats [`visit_theta`] until `U_I^J` is empty in every member.
pub fn visit_theta_prime(
    inst: ListInstance,
    i: &VertexSet,
    j: &VertexSet,
    env: &BranchEnv,
    sink: &mut Sink,
) -> Result<Flow> {
    visit_theta(inst, i, j, env, &mut |child| {
        if child.cross_essential_set(i, j)?.is_empty() {
            sink(child)
        } else {
            visit_theta_prime(child, i, j, env, sink)
        }
    })
}

/// Every proper coloring of the dominating set drawn from its palettes,
/// applied and simplified. Colorings whose simplification fails are dropped.
///
/// Order: dominating vertices by id, colors ascending.
pub fn dominating_colorings(inst: &ListInstance, env: &BranchEnv) -> Result<Vec<ListInstance>> {
    let d: Vec<usize> = inst.dominating().to_vec();
    let bound = inst.universe().max(3) as usize;
    if d.len() > bound {
        return Err(Error::Precondition(format!(
            "dominating set has {} vertices, more than {bound}",
            d.len()
        )));
    }
    let mut out = Vec::new();
    let mut chosen: Vec<Color> = Vec::with_capacity(d.len());
    enumerate_colorings(inst, &d, &mut chosen, env, &mut out);
    Ok(out)
}

fn enumerate_colorings(
    inst: &ListInstance,
    d: &[usize],
    chosen: &mut Vec<Color>,
    env: &BranchEnv,
    out: &mut Vec<ListInstance>,
) {
    let idx = chosen.len();
    if idx == d.len() {
        let mut fixed = inst.clone();
        for (&v, &c) in d.iter().zip(chosen.iter()) {
            fixed = fixed.with_palette(v, Palette::singleton(c));
        }
        if let Some(f) = env.child(fixed) {
            out.push(f);
        }
        return;
    }
    let v = d[idx];
    for c in inst.palette(v).iter() {
        let clash = d[..idx]
            .iter()
            .zip(chosen.iter())
            .any(|(&u, &cu)| cu == c && inst.graph().has_edge(u, v));
        if !clash {
            chosen.push(c);
            enumerate_colorings(inst, d, chosen, env, out);
            chosen.pop();
        }
    }
}

/// Unordered pairs of distinct nonempty bags, in canonical order.
pub fn bag_pairs(inst: &ListInstance) -> Result<Vec<(VertexSet, VertexSet)>> {
    let keys: Vec<VertexSet> = inst.bags()?.into_keys().collect();
    let mut pairs = Vec::new();
    for (x, i) in keys.iter().enumerate() {
        for j in &keys[x + 1..] {
            pairs.push((i.clone(), j.clone()));
        }
    }
    Ok(pairs)
}

/// Separates every bag of an instance whose dominating set is already
/// colored, folding [`visit_theta_prime`] over `pairs`.
pub fn visit_separation(
    inst: ListInstance,
    pairs: &[(VertexSet, VertexSet)],
    env: &BranchEnv,
    sink: &mut Sink,
) -> Result<Flow> {
    let Some(((i, j), rest)) = pairs.split_first() else {
        return sink(inst);
    };
    visit_theta_prime(inst, i, j, env, &mut |child| {
        visit_separation(child, rest, env, sink)
    })
}

/// Colors the dominating set in every possible way and separates all bags.
///
/// Requires `|D| <= max(3, k)` and `D` dominating the graph; connectivity and
/// P5-freeness are the caller's responsibility.
pub fn visit_lambda(inst: &ListInstance, env: &BranchEnv, sink: &mut Sink) -> Result<Flow> {
    let pairs = bag_pairs(inst)?;
    for fixed in dominating_colorings(inst, env)? {
        trace!(
            "lambda: D colored {:?}",
            inst.dominating()
                .iter()
                .map(|v| fixed.palette(v))
                .collect::<Vec<_>>()
        );
        if visit_separation(fixed, &pairs, env, sink)?.is_break() {
            return Ok(Flow::Break(()));
        }
    }
    Ok(Flow::Continue(()))
}

fn collect(run: impl FnOnce(&mut Sink) -> Result<Flow>) -> Result<InstanceSet> {
    let mut set = InstanceSet::new();
    // the sink never breaks, so the flow is always Continue
    let _ = run(&mut |inst| {
        set.push(inst);
        Ok(Flow::Continue(()))
    })?;
    set.canonicalize();
    Ok(set)
}

/// Procedure Π: one branching round on `S, T`.
pub fn procedure_pi(
    inst: &ListInstance,
    ctx: &BranchContext,
    env: &BranchEnv,
) -> Result<InstanceSet> {
    ctx.validate(inst)?;
    collect(|sink| visit_pi(inst.clone(), ctx, env, sink))
}

/// Π′: a compatible family in which `S` has no essential neighbor in `T`.
pub fn pi_prime(inst: &ListInstance, ctx: &BranchContext, env: &BranchEnv) -> Result<InstanceSet> {
    ctx.validate(inst)?;
    collect(|sink| visit_pi_prime(inst.clone(), ctx, env, sink))
}

/// Procedure Θ: one round for the bag pair `(I, J)`.
pub fn procedure_theta(
    inst: &ListInstance,
    i: &VertexSet,
    j: &VertexSet,
    env: &BranchEnv,
) -> Result<InstanceSet> {
    collect(|sink| visit_theta(inst.clone(), i, j, env, sink))
}

/// Θ′: a compatible family in which `U_I^J` is empty.
pub fn theta_prime(
    inst: &ListInstance,
    i: &VertexSet,
    j: &VertexSet,
    env: &BranchEnv,
) -> Result<InstanceSet> {
    collect(|sink| visit_theta_prime(inst.clone(), i, j, env, sink))
}

/// Λ: a compatible family in which `D` is colored and every bag is separated.
pub fn algorithm_lambda(inst: &ListInstance, env: &BranchEnv) -> Result<InstanceSet> {
    collect(|sink| visit_lambda(inst, env, sink))
}
