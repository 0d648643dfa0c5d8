//! List-coloring instances: a graph, a palette per vertex, a dominating set,
//! and the color universe `1..=k`.
//!
//! Instances are immutable values; every palette change produces a new
//! instance sharing the same graph.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// A color in `1..=64`.
pub type Color = u32;

/// Hard cap on the color universe; palettes are single machine words.
pub const MAX_UNIVERSE: u32 = 64;

/// A set of colors drawn from `1..=64`, stored as a bit mask (bit `c-1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Palette(u64);

impl Palette {
    pub const EMPTY: Palette = Palette(0);

    /// `{1, .., k}`.
    pub fn full(k: u32) -> Self {
        debug_assert!(k <= MAX_UNIVERSE);
        if k >= 64 {
            Palette(!0)
        } else {
            Palette((1u64 << k) - 1)
        }
    }

    pub fn singleton(c: Color) -> Self {
        debug_assert!((1..=MAX_UNIVERSE).contains(&c));
        Palette(1 << (c - 1))
    }

    pub fn from_colors(colors: impl IntoIterator<Item = Color>) -> Self {
        colors.into_iter().fold(Palette::EMPTY, |p, c| p.with(c))
    }

    pub fn from_bits(bits: u64) -> Self {
        Palette(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn with(self, c: Color) -> Self {
        Palette(self.0 | Palette::singleton(c).0)
    }

    pub fn without(self, c: Color) -> Self {
        Palette(self.0 & !Palette::singleton(c).0)
    }

    #[inline]
    pub fn contains(self, c: Color) -> bool {
        (1..=MAX_UNIVERSE).contains(&c) && self.0 >> (c - 1) & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The only color, when the palette is a singleton.
    pub fn single(self) -> Option<Color> {
        (self.len() == 1).then(|| self.0.trailing_zeros() + 1)
    }

    /// Smallest color.
    pub fn min(self) -> Option<Color> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() + 1)
    }

    /// Largest color.
    pub fn max(self) -> Option<Color> {
        (!self.is_empty()).then(|| 64 - self.0.leading_zeros())
    }

    #[inline]
    pub fn intersects(self, other: Palette) -> bool {
        self.0 & other.0 != 0
    }

    pub fn intersection(self, other: Palette) -> Palette {
        Palette(self.0 & other.0)
    }

    pub fn union(self, other: Palette) -> Palette {
        Palette(self.0 | other.0)
    }

    pub fn difference(self, other: Palette) -> Palette {
        Palette(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Palette) -> bool {
        self.0 & !other.0 == 0
    }

    /// Colors in ascending order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let c = bits.trailing_zeros();
            bits &= bits - 1;
            Some(c + 1)
        })
    }
}

impl fmt::Debug for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<Color> for Palette {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        Palette::from_colors(iter)
    }
}

/// Outcome of a solve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// A palette-respecting proper coloring, indexed by vertex.
    Sat(Vec<Color>),
    /// No coloring exists. `clique` holds a witness when one was found by the
    /// clique pre-check.
    Unsat { clique: Option<Vec<usize>> },
}

impl Verdict {
    pub fn unsat() -> Self {
        Verdict::Unsat { clique: None }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn coloring(&self) -> Option<&[Color]> {
        match self {
            Verdict::Sat(c) => Some(c),
            Verdict::Unsat { .. } => None,
        }
    }
}

/// Bags keyed by their neighborhood `I` inside the dominating set.
pub type Bags = BTreeMap<VertexSet, VertexSet>;

/// A k-list-coloring instance `(V, E, L, D)` over the universe `1..=k`.
#[derive(Clone, Debug)]
pub struct ListInstance {
    graph: Arc<Graph>,
    palettes: Vec<Palette>,
    dominating: VertexSet,
    universe: u32,
}

impl PartialEq for ListInstance {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.graph, &other.graph) || self.graph == other.graph)
            && self.universe == other.universe
            && self.dominating == other.dominating
            && self.palettes == other.palettes
    }
}

/// The sub-instance on one separated bag, with its color renaming.
#[derive(Clone, Debug)]
pub struct BagRestriction {
    pub instance: ListInstance,
    /// `vertices[i]` is the parent id of sub-instance vertex `i`.
    pub vertices: Vec<usize>,
    /// `colors[c - 1]` is the parent color of sub-instance color `c`.
    pub colors: Vec<Color>,
}

impl BagRestriction {
    /// Maps a sub-instance coloring back into parent ids and colors.
    pub fn lift(&self, coloring: &[Color], into: &mut [Color]) {
        for (i, &c) in coloring.iter().enumerate() {
            into[self.vertices[i]] = self.colors[c as usize - 1];
        }
    }
}

/// An induced sub-instance and the map back to parent vertex ids.
#[derive(Clone, Debug)]
pub struct SubInstance {
    pub instance: ListInstance,
    pub vertices: Vec<usize>,
}

impl ListInstance {
    pub fn new(
        graph: impl Into<Arc<Graph>>,
        universe: u32,
        palettes: Vec<Palette>,
    ) -> Result<Self> {
        let graph = graph.into();
        if universe == 0 || universe > MAX_UNIVERSE {
            return Err(Error::Input(format!(
                "color universe {universe} outside supported range 1..={MAX_UNIVERSE}"
            )));
        }
        if palettes.len() != graph.n() {
            return Err(Error::Input(format!(
                "{} palettes for {} vertices",
                palettes.len(),
                graph.n()
            )));
        }
        let full = Palette::full(universe);
        if let Some(v) = palettes.iter().position(|p| !p.is_subset(full)) {
            return Err(Error::Input(format!(
                "palette of vertex {v} uses colors outside 1..={universe}"
            )));
        }
        let dominating = graph.empty_set();
        Ok(Self {
            graph,
            palettes,
            dominating,
            universe,
        })
    }

    /// Every vertex gets the palette `{1, .., k}`.
    pub fn full(graph: impl Into<Arc<Graph>>, universe: u32) -> Result<Self> {
        let graph = graph.into();
        let n = graph.n();
        Self::new(
            graph,
            universe,
            vec![Palette::full(universe.min(MAX_UNIVERSE)); n],
        )
    }

    /// Attaches a dominating set. It must dominate every connected component
    /// it intersects.
    pub fn with_dominating(mut self, dominating: VertexSet) -> Result<Self> {
        if dominating.iter().any(|v| v >= self.n()) {
            return Err(Error::Input(
                "dominating set refers to missing vertices".into(),
            ));
        }
        let all = self.graph.vertex_set();
        let mut left = dominating.clone();
        while let Some(v) = left.first() {
            let comp = self.graph.component_of(v, &all);
            if !self.graph.dominates(&(&dominating & &comp), &comp) {
                return Err(Error::Precondition(format!(
                    "set {dominating:?} does not dominate the component of vertex {v}"
                )));
            }
            left.difference_with(&comp);
        }
        self.dominating = dominating;
        Ok(self)
    }

    #[inline]
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    #[inline]
    pub fn palette(&self, v: usize) -> Palette {
        self.palettes[v]
    }

    pub fn palettes(&self) -> &[Palette] {
        &self.palettes
    }

    pub fn dominating(&self) -> &VertexSet {
        &self.dominating
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    /// Copy with `L(v)` replaced.
    pub fn with_palette(&self, v: usize, palette: Palette) -> Self {
        let mut next = self.clone();
        next.palettes[v] = palette;
        next
    }

    /// Union of the palettes of `set`.
    pub fn palette_of(&self, set: &VertexSet) -> Palette {
        set.iter()
            .fold(Palette::EMPTY, |acc, v| acc.union(self.palettes[v]))
    }

    /// Palettes of `self` are vertexwise subsets of `other`'s.
    pub fn palettes_within(&self, other: &ListInstance) -> bool {
        self.palettes.len() == other.palettes.len()
            && self
                .palettes
                .iter()
                .zip(&other.palettes)
                .all(|(a, b)| a.is_subset(*b))
    }

    /// Brings the instance into simplified form: no vertex with a singleton
    /// palette `{c}` has a neighbor whose palette still contains `c`.
    ///
    /// Returns `None` when some palette becomes empty.
    pub fn simplify(mut self) -> Option<Self> {
        if self.palettes.iter().any(|p| p.is_empty()) {
            return None;
        }
        let mut queue: Vec<usize> = (0..self.n())
            .filter(|&v| self.palettes[v].len() == 1)
            .collect();
        while let Some(v) = queue.pop() {
            let color = self.palettes[v];
            for w in self.graph.neighbors(v) {
                let p = self.palettes[w];
                if p.intersects(color) {
                    let shrunk = p.difference(color);
                    self.palettes[w] = shrunk;
                    match shrunk.len() {
                        0 => return None,
                        1 => queue.push(w),
                        _ => {}
                    }
                }
            }
        }
        Some(self)
    }

    pub fn is_simplified(&self) -> bool {
        self.graph.edges().all(|(u, v)| {
            let (pu, pv) = (self.palettes[u], self.palettes[v]);
            !(pu.len() == 1 && pu.is_subset(pv) || pv.len() == 1 && pv.is_subset(pu))
        })
    }

    #[inline]
    pub fn is_essential_edge(&self, u: usize, v: usize) -> bool {
        self.graph.has_edge(u, v) && self.palettes[u].intersects(self.palettes[v])
    }

    /// Neighbors of `v` whose palette meets `L(v)`.
    pub fn essential_neighbors(&self, v: usize) -> VertexSet {
        let pv = self.palettes[v];
        VertexSet::from_iter_in(
            self.n(),
            self.graph
                .neighbors(v)
                .iter()
                .filter(|&w| self.palettes[w].intersects(pv)),
        )
    }

    /// Members of `into` with at least one essential neighbor in `from`.
    pub fn essential_between(&self, from: &VertexSet, into: &VertexSet) -> VertexSet {
        VertexSet::from_iter_in(
            self.n(),
            into.iter().filter(|&v| {
                let pv = self.palettes[v];
                (self.graph.neighbors(v) & from)
                    .iter()
                    .any(|w| self.palettes[w].intersects(pv))
            }),
        )
    }

    /// Connected components of the graph restricted to essential edges.
    pub fn essential_components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = VertexSet::empty(n);
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::singleton(n, start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for w in self.essential_neighbors(v).iter() {
                    if comp.insert(w) {
                        stack.push(w);
                    }
                }
            }
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }

    /// The bag `U_I`: vertices outside `D` whose neighborhood in `D` is `I`.
    pub fn bag(&self, i: &VertexSet) -> VertexSet {
        VertexSet::from_iter_in(
            self.n(),
            (0..self.n()).filter(|&v| {
                !self.dominating.contains(v) && &(self.graph.neighbors(v) & &self.dominating) == i
            }),
        )
    }

    /// All nonempty bags, keyed by `I`.
    ///
    /// Fails when some vertex outside `D` has no neighbor in `D`.
    pub fn bags(&self) -> Result<Bags> {
        let mut bags = Bags::new();
        for v in 0..self.n() {
            if self.dominating.contains(v) {
                continue;
            }
            let key = self.graph.neighbors(v) & &self.dominating;
            if key.is_empty() {
                return Err(Error::Precondition(format!(
                    "vertex {v} is not dominated by {:?}",
                    self.dominating
                )));
            }
            bags.entry(key)
                .or_insert_with(|| VertexSet::empty(self.n()))
                .insert(v);
        }
        Ok(bags)
    }

    fn check_bag_key(&self, i: &VertexSet) -> Result<()> {
        if i.is_empty() || !i.is_subset(&self.dominating) {
            return Err(Error::Contract(format!(
                "{i:?} is not a nonempty subset of the dominating set"
            )));
        }
        Ok(())
    }

    /// `U_I^J`: vertices of `U_I` with an essential neighbor in `U_J`.
    pub fn cross_essential_set(&self, i: &VertexSet, j: &VertexSet) -> Result<VertexSet> {
        self.check_bag_key(i)?;
        self.check_bag_key(j)?;
        if i == j {
            return Err(Error::Input("cross-essential set needs I != J".into()));
        }
        Ok(self.essential_between(&self.bag(j), &self.bag(i)))
    }

    /// Whether every essential neighbor of `U_I` outside `D` lies in `U_I`.
    pub fn is_separated(&self, i: &VertexSet) -> bool {
        let bag = self.bag(i);
        let inside = &bag | &self.dominating;
        bag.iter()
            .all(|v| self.essential_neighbors(v).is_subset(&inside))
    }

    /// Induced sub-instance on `keep` with the same universe and an empty
    /// dominating set.
    pub fn induced(&self, keep: &VertexSet) -> SubInstance {
        let (g, vertices) = self.graph.induced_subgraph(keep);
        let palettes = vertices.iter().map(|&v| self.palettes[v]).collect();
        let n = g.n();
        SubInstance {
            instance: ListInstance {
                graph: Arc::new(g),
                palettes,
                dominating: VertexSet::empty(n),
                universe: self.universe,
            },
            vertices,
        }
    }

    /// Restricts to the separated bag `U_I` and renames the colors left over
    /// after removing the colors of `I` onto a compact universe.
    pub fn restrict_bag(&self, i: &VertexSet) -> Result<BagRestriction> {
        self.check_bag_key(i)?;
        if let Some(d) = self
            .dominating
            .iter()
            .find(|&d| self.palettes[d].len() != 1)
        {
            return Err(Error::Contract(format!(
                "dominating vertex {d} is not colored"
            )));
        }
        if !self.is_separated(i) {
            return Err(Error::Contract(format!("bag {i:?} is not separated")));
        }
        let taken = self.palette_of(i);
        let bag = self.bag(i);
        if self.palette_of(&bag).intersects(taken) {
            return Err(Error::Contract(format!(
                "bag {i:?} palettes still use colors of I; simplify first"
            )));
        }
        let colors: Vec<Color> = Palette::full(self.universe)
            .difference(taken)
            .iter()
            .collect();
        let mut rename = [0 as Color; MAX_UNIVERSE as usize + 1];
        for (new, &old) in colors.iter().enumerate() {
            rename[old as usize] = new as Color + 1;
        }
        let sub = self.induced(&bag);
        let palettes = sub
            .instance
            .palettes
            .iter()
            .map(|p| p.iter().map(|c| rename[c as usize]).collect())
            .collect();
        let universe = colors.len() as u32;
        if universe == 0 {
            return Err(Error::Contract(format!("bag {i:?} has no colors left")));
        }
        let instance = ListInstance {
            palettes,
            universe,
            ..sub.instance
        };
        Ok(BagRestriction {
            instance,
            vertices: sub.vertices,
            colors,
        })
    }

    /// Key identifying the instance inside an [`InstanceSet`].
    fn fingerprint(&self) -> (usize, u32, VertexSet, Vec<Palette>) {
        (
            Arc::as_ptr(&self.graph) as usize,
            self.universe,
            self.dominating.clone(),
            self.palettes.clone(),
        )
    }
}

/// A deduplicated collection of instances.
///
/// The originating instance is colorable iff some member is.
#[derive(Clone, Debug, Default)]
pub struct InstanceSet {
    members: Vec<ListInstance>,
    seen: HashSet<(usize, u32, VertexSet, Vec<Palette>)>,
}

impl InstanceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(inst: ListInstance) -> Self {
        let mut s = Self::new();
        s.push(inst);
        s
    }

    /// Adds `inst` unless an identical member exists. Returns whether it was added.
    pub fn push(&mut self, inst: ListInstance) -> bool {
        if self.seen.insert(inst.fingerprint()) {
            self.members.push(inst);
            true
        } else {
            false
        }
    }

    pub fn extend(&mut self, other: InstanceSet) {
        for inst in other.members {
            self.push(inst);
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ListInstance> {
        self.members.iter()
    }

    /// Sorts members by palettes so output order does not depend on the
    /// order in which branches were explored.
    pub fn canonicalize(&mut self) {
        self.members.sort_by(|a, b| a.palettes.cmp(&b.palettes));
    }

    pub fn into_vec(self) -> Vec<ListInstance> {
        self.members
    }
}

impl IntoIterator for InstanceSet {
    type Item = ListInstance;
    type IntoIter = std::vec::IntoIter<ListInstance>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.into_iter()
    }
}

impl<'a> IntoIterator for &'a InstanceSet {
    type Item = &'a ListInstance;
    type IntoIter = std::slice::Iter<'a, ListInstance>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}
