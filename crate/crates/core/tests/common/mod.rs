#![allow(dead_code)]

use p5color::testkit::{generate, generate_connected, generate_lists, Family, GenSpec};
use p5color::{Graph, ListInstance, Palette};

pub const FAMILIES: [Family; 3] = [
    Family::SplitGraph,
    Family::CompleteMultipartite,
    Family::RejectionSampled,
];

/// Deterministic graph spec for trial `seed` of `family` on `n` vertices.
pub fn spec(family: Family, n: usize, seed: u64) -> GenSpec {
    let mut s = GenSpec::new(family, n, seed);
    s.edge_probability = match family {
        // sparse-ish draws only stay P5-free on few vertices
        Family::RejectionSampled if n <= 8 => [0.25, 0.5, 0.7, 0.85][(seed % 4) as usize],
        Family::RejectionSampled => [0.75, 0.85, 0.9, 0.95][(seed % 4) as usize],
        _ => [0.3, 0.5, 0.7][(seed % 3) as usize],
    };
    if family == Family::CompleteMultipartite {
        // split n into 2..=4 parts, sizes varying with the seed
        let parts = (2 + (seed % 3) as usize).min(n.max(1));
        let mut sizes = vec![1; parts];
        let mut left = n.saturating_sub(parts);
        let mut i = seed as usize;
        while left > 0 {
            sizes[i % parts] += 1;
            left -= 1;
            i = i.wrapping_mul(31).wrapping_add(7);
        }
        s.parts = sizes;
    }
    s
}

pub fn graph(family: Family, n: usize, seed: u64) -> Graph {
    generate(&spec(family, n, seed)).expect("generator")
}

pub fn connected_graph(family: Family, n: usize, seed: u64) -> Graph {
    generate_connected(&spec(family, n, seed)).expect("generator")
}

pub fn instance(g: Graph, k: u32, density: f64, seed: u64) -> ListInstance {
    let lists = generate_lists(&g, k, density, seed ^ 0xA5A5).expect("lists");
    ListInstance::new(g, k, lists).expect("instance")
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// C5 plus a hub adjacent to all five rim vertices.
pub fn wheel5() -> Graph {
    Graph::new(
        6,
        (0..5)
            .map(|i| (i, (i + 1) % 5))
            .chain((0..5).map(|i| (i, 5))),
    )
    .unwrap()
}

pub fn full_palettes(n: usize, k: u32) -> Vec<Palette> {
    vec![Palette::full(k); n]
}

use p5color::branching::{dominating_colorings, BranchContext, BranchEnv, StatsRecorder};
use p5color::testkit::BruteForceChromatic;
use p5color::VertexSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub static BRUTE: BruteForceChromatic = BruteForceChromatic;

pub fn env(stats: &StatsRecorder) -> BranchEnv<'_> {
    BranchEnv::new(&BRUTE, stats)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_F491_4F6C_DD1D))
}

/// Connected P5-free instance with its dominating structure installed,
/// simplified. `None` when simplification empties a palette.
pub fn lambda_input(seed: u64, max_n: usize) -> Option<ListInstance> {
    let mut r = rng(seed);
    let family = FAMILIES[(seed % 3) as usize];
    let n = r.gen_range(3..=max_n);
    let k = r.gen_range(2..=4u32);
    let density = [0.5, 0.75, 1.0][r.gen_range(0..3)];
    let g = connected_graph(family, n, seed);
    let ds = g
        .find_dominating_structure(n)
        .expect("connected P5-free graph");
    if ds.vertices.len() > k.max(3) as usize {
        return None;
    }
    instance(g, k, density, seed)
        .with_dominating(ds.vertices)
        .ok()?
        .simplify()
}

/// A D-colored instance and two distinct bag keys, preferring a pair with
/// cross-essential vertices.
pub fn bag_pair_input(seed: u64, max_n: usize) -> Option<(ListInstance, VertexSet, VertexSet)> {
    let base = lambda_input(seed, max_n)?;
    let stats = StatsRecorder::default();
    let colorings = dominating_colorings(&base, &env(&stats)).ok()?;
    let mut r = rng(seed ^ 1);
    let inst = colorings.choose(&mut r)?.clone();
    let keys: Vec<VertexSet> = inst.bags().ok()?.into_keys().collect();
    let mut pairs = vec![];
    for (a, i) in keys.iter().enumerate() {
        for j in &keys[a + 1..] {
            pairs.push((i.clone(), j.clone()));
        }
    }
    pairs.shuffle(&mut r);
    let pick = pairs
        .iter()
        .position(|(i, j)| !inst.cross_essential_set(i, j).unwrap().is_empty())
        .unwrap_or(0);
    let (i, j) = pairs.get(pick)?.clone();
    if r.gen_bool(0.5) {
        Some((inst, j, i))
    } else {
        Some((inst, i, j))
    }
}

fn greedy_independent(g: &Graph, set: &VertexSet, r: &mut ChaCha8Rng) -> VertexSet {
    let mut order = set.to_vec();
    order.shuffle(r);
    let mut out = VertexSet::empty(g.n());
    for v in order {
        if !g.neighbors(v).intersects(&out) {
            out.insert(v);
        }
    }
    out
}

/// Independent `S` in one bag and `T` in another, grown from an essential
/// edge between the bags when there is one.
pub fn pi_input(seed: u64, max_n: usize) -> Option<(ListInstance, BranchContext)> {
    let (inst, i, j) = bag_pair_input(seed, max_n)?;
    let mut r = rng(seed ^ 2);
    let g = inst.graph();
    let (bag_i, bag_j) = (inst.bag(&i), inst.bag(&j));
    let mut s = VertexSet::empty(g.n());
    let mut t = VertexSet::empty(g.n());
    let cross = inst.cross_essential_set(&i, &j).unwrap().to_vec();
    if let Some(&a) = cross.choose(&mut r) {
        s.insert(a);
        t.insert((&inst.essential_neighbors(a) & &bag_j).first().unwrap());
    }
    let grow = |seedset: &mut VertexSet, bag: &VertexSet, r: &mut ChaCha8Rng| {
        let rest = bag - &*seedset;
        for v in greedy_independent(g, &rest, r).iter() {
            if !g.neighbors(v).intersects(seedset) {
                seedset.insert(v);
            }
        }
    };
    grow(&mut s, &bag_i, &mut r);
    grow(&mut t, &bag_j, &mut r);
    Some((inst.clone(), BranchContext::new(s, t)))
}

/// [`pi_input`] restricted to contexts with `S'` nonempty.
pub fn busy_pi_input(seed: u64, max_n: usize) -> Option<(ListInstance, BranchContext)> {
    pi_input(seed, max_n).filter(|(inst, ctx)| !ctx.s_prime(inst).is_empty())
}

/// [`bag_pair_input`] restricted to pairs with `U_I^J` nonempty.
pub fn busy_bag_pair_input(
    seed: u64,
    max_n: usize,
) -> Option<(ListInstance, VertexSet, VertexSet)> {
    bag_pair_input(seed, max_n)
        .filter(|(inst, i, j)| !inst.cross_essential_set(i, j).unwrap().is_empty())
}

/// Connected P5-free graph built by substituting small generated graphs
/// into the vertices of a C5. Substitution keeps P5-freeness, and no
/// clique dominates the result, so these exercise the P3 case.
pub fn c5_substitution(seed: u64, n: usize) -> Graph {
    assert!(n >= 5);
    let mut r = rng(seed ^ 3);
    let mut sizes = [1usize; 5];
    for _ in 5..n {
        sizes[r.gen_range(0..5)] += 1;
    }
    let mut offset = 0;
    let mut module = vec![0; n];
    let mut edges = vec![];
    for (m, &size) in sizes.iter().enumerate() {
        let inner = graph(
            FAMILIES[r.gen_range(0..3)],
            size,
            seed.wrapping_add(m as u64),
        );
        edges.extend(inner.edges().map(|(u, v)| (u + offset, v + offset)));
        module[offset..offset + size].fill(m);
        offset += size;
    }
    for u in 0..n {
        for v in u + 1..n {
            if (module[u] + 1) % 5 == module[v] || (module[v] + 1) % 5 == module[u] {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}
