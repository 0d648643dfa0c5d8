//! 2-SAT: implication-graph solver and the encoding of list-coloring
//! instances whose palettes all have at most two colors.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::{Color, ListInstance};

/// A literal: variable index plus polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit((var as u32) << 1)
    }

    pub fn neg(var: usize) -> Self {
        Lit((var as u32) << 1 | 1)
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    /// Node index in the implication graph.
    fn node(self) -> usize {
        self.0 as usize
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var()] != self.is_neg()
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

/// A CNF formula with exactly two literals per clause. Unit clauses are
/// written as `(l ∨ l)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf2 {
    pub variable_count: usize,
    pub clauses: Vec<(Lit, Lit)>,
}

impl Cnf2 {
    pub fn new(variable_count: usize) -> Self {
        Self {
            variable_count,
            clauses: Vec::new(),
        }
    }

    pub fn new_var(&mut self) -> usize {
        self.variable_count += 1;
        self.variable_count - 1
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        self.clauses.push((a, b));
    }

    pub fn add_unit(&mut self, a: Lit) {
        self.clauses.push((a, a));
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|&(a, b)| a.eval(assignment) || b.eval(assignment))
    }

    /// DIMACS CNF text, for debugging.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        let lit = |l: Lit| {
            let v = l.var() as i64 + 1;
            if l.is_neg() {
                -v
            } else {
                v
            }
        };
        for &(a, b) in &self.clauses {
            let _ = writeln!(out, "{} {} 0", lit(a), lit(b));
        }
        out
    }
}

/// Solves a 2-CNF formula. Returns a satisfying assignment or `None`.
///
/// Builds the implication graph (`¬a → b`, `¬b → a` per clause), labels its
/// strongly connected components with Tarjan's algorithm, and sets each
/// variable to the literal whose component comes later in topological order.
pub fn solve_2sat(f: &Cnf2) -> Option<Vec<bool>> {
    let nodes = 2 * f.variable_count;
    let mut degree = vec![0u32; nodes + 1];
    for &(a, b) in &f.clauses {
        degree[(!a).node()] += 1;
        degree[(!b).node()] += 1;
    }
    // compressed adjacency
    let mut start = vec![0usize; nodes + 1];
    for v in 0..nodes {
        start[v + 1] = start[v] + degree[v] as usize;
    }
    let mut fill = start.clone();
    let mut targets = vec![0u32; start[nodes]];
    for &(a, b) in &f.clauses {
        targets[fill[(!a).node()]] = b.node() as u32;
        fill[(!a).node()] += 1;
        targets[fill[(!b).node()]] = a.node() as u32;
        fill[(!b).node()] += 1;
    }

    let comp = tarjan(nodes, &start, &targets);
    let mut assignment = Vec::with_capacity(f.variable_count);
    for v in 0..f.variable_count {
        let (p, n) = (comp[Lit::pos(v).node()], comp[Lit::neg(v).node()]);
        if p == n {
            return None;
        }
        // Tarjan numbers components in reverse topological order.
        assignment.push(p < n);
    }
    Some(assignment)
}

/// Iterative Tarjan; component ids are assigned in reverse topological order.
fn tarjan(nodes: usize, start: &[usize], targets: &[u32]) -> Vec<u32> {
    const UNSET: u32 = u32::MAX;
    let mut index = vec![UNSET; nodes];
    let mut low = vec![0u32; nodes];
    let mut comp = vec![UNSET; nodes];
    let mut on_stack = vec![false; nodes];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0u32;
    let mut comps = 0u32;

    // negative literals first, so unconstrained variables come out false
    for root in (0..nodes).map(|v| v ^ 1) {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, start[root]));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < start[v + 1] {
                let w = targets[*edge] as usize;
                *edge += 1;
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, start[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = comps;
                    if w == v {
                        break;
                    }
                }
                comps += 1;
            }
        }
    }
    comp
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Fixed(Color),
    /// false picks the first color, true the second
    Choice {
        var: usize,
        first: Color,
        second: Color,
    },
}

/// Maps satisfying assignments of an encoded formula back to colorings.
#[derive(Clone, Debug)]
pub struct TwoListDecoder {
    slots: Vec<Slot>,
}

impl TwoListDecoder {
    pub fn decode(&self, assignment: &[bool]) -> Vec<Color> {
        self.slots
            .iter()
            .map(|s| match *s {
                Slot::Fixed(c) => c,
                Slot::Choice { var, first, second } => {
                    if assignment[var] {
                        second
                    } else {
                        first
                    }
                }
            })
            .collect()
    }
}

/// Encodes an instance whose palettes have size 1 or 2.
///
/// One variable per two-color vertex; for each edge and each shared color a
/// clause forbids both endpoints taking it.
pub fn encode_two_list(inst: &ListInstance) -> Result<(Cnf2, TwoListDecoder)> {
    let mut cnf = Cnf2::new(0);
    let mut slots = Vec::with_capacity(inst.n());
    for v in 0..inst.n() {
        let p = inst.palette(v);
        let slot = match p.len() {
            1 => Slot::Fixed(p.min().unwrap()),
            2 => {
                let mut it = p.iter();
                let (first, second) = (it.next().unwrap(), it.next().unwrap());
                Slot::Choice {
                    var: cnf.new_var(),
                    first,
                    second,
                }
            }
            len => {
                return Err(Error::Contract(format!(
                    "vertex {v} has a palette of size {len}; 2-SAT needs 1 or 2"
                )))
            }
        };
        slots.push(slot);
    }

    // Literal meaning "vertex takes color c"; Err(true) is the constant true.
    let takes = |slot: Slot, c: Color| -> std::result::Result<Lit, bool> {
        match slot {
            Slot::Fixed(f) => Err(f == c),
            Slot::Choice { var, first, .. } => Ok(if c == first {
                Lit::neg(var)
            } else {
                Lit::pos(var)
            }),
        }
    };

    let mut contradiction = false;
    for (u, v) in inst.graph().edges() {
        let shared = inst.palette(u).intersection(inst.palette(v));
        for c in shared.iter() {
            match (takes(slots[u], c), takes(slots[v], c)) {
                (Ok(a), Ok(b)) => cnf.add_clause(!a, !b),
                (Ok(a), Err(true)) | (Err(true), Ok(a)) => cnf.add_unit(!a),
                (Err(true), Err(true)) => contradiction = true,
                _ => {}
            }
        }
    }
    if contradiction {
        let z = cnf.new_var();
        cnf.add_unit(Lit::pos(z));
        cnf.add_unit(Lit::neg(z));
    }
    Ok((cnf, TwoListDecoder { slots }))
}

/// Encode, solve and decode in one step.
pub fn solve_two_list(inst: &ListInstance) -> Result<Option<Vec<Color>>> {
    let (cnf, decoder) = encode_two_list(inst)?;
    Ok(solve_2sat(&cnf).map(|a| decoder.decode(&a)))
}
