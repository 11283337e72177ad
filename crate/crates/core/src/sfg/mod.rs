//! Signal-flow graphs and Mason's gain rule.
//!
//! A graph carries node amplitudes `x` with `x = A x + e_source`, where
//! `A[to, from]` is the edge gain. The transfer to a sink is
//!
//! ```text
//! T = Σₖ Pₖ Δₖ / Δ,   Δ = 1 − ΣLᵢ + ΣLᵢLⱼ − … (mutually non-touching loops)
//! ```
//!
//! where `Δₖ` keeps only the loops that do not touch forward path `k`.
//! [`linear_solve_transfer`] solves `(I − A) x = e_source` directly and is
//! used as an independent check.

mod cycles;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{CMatrix, Lu};

pub use cycles::simple_cycles;

pub type NodeId = usize;

/// Largest number of mutually non-touching loops combined in one term.
pub const MAX_NONTOUCHING_ORDER: usize = 8;
/// Node capacity of the loop bitmasks.
pub const MAX_MASON_NODES: usize = 128;
/// `|Δ| < POLE_RTOL · (1 + Σ|Lᵢ|)` is treated as a pole.
pub const POLE_RTOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SfgError {
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("graph is singular at this point (pole): |delta| = {delta_abs:e}")]
    Pole { delta_abs: f64 },
    #[error("more than {MAX_NONTOUCHING_ORDER} mutually non-touching loops")]
    TooManyNontouching,
    #[error("Mason enumeration supports at most {MAX_MASON_NODES} nodes, graph has {0}")]
    GraphTooLarge(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignalFlowGraph {
    names: Vec<String>,
    edges: BTreeMap<(NodeId, NodeId), Complex64>,
    source: NodeId,
    sinks: Vec<NodeId>,
}

impl Default for SignalFlowGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl SignalFlowGraph {
    pub fn new() -> Self {
        Self {
            names: Vec::new(),
            edges: BTreeMap::new(),
            source: 0,
            sinks: Vec::new(),
        }
    }

    /// Graph with `n` nodes named `n0 .. n{n-1}`, source `0`.
    pub fn with_nodes(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.add_node(format!("n{i}"));
        }
        g
    }

    pub fn add_node(&mut self, name: impl Into<String>) -> NodeId {
        self.names.push(name.into());
        self.names.len() - 1
    }

    /// Adds `gain` on `from → to`; parallel edges are summed.
    pub fn add_edge(&mut self, from: NodeId, to: NodeId, gain: Complex64) -> Result<(), SfgError> {
        for id in [from, to] {
            if id >= self.names.len() {
                return Err(SfgError::UnknownNode(id));
            }
        }
        *self.edges.entry((from, to)).or_insert_with(Complex64::zero) += gain;
        Ok(())
    }

    pub fn set_source(&mut self, id: NodeId) -> Result<(), SfgError> {
        self.check(id)?;
        self.source = id;
        Ok(())
    }

    pub fn add_sink(&mut self, id: NodeId) -> Result<(), SfgError> {
        self.check(id)?;
        if !self.sinks.contains(&id) {
            self.sinks.push(id);
        }
        Ok(())
    }

    fn check(&self, id: NodeId) -> Result<(), SfgError> {
        if id >= self.names.len() {
            return Err(SfgError::UnknownNode(id));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.names[id]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sinks(&self) -> &[NodeId] {
        &self.sinks
    }

    pub fn gain(&self, from: NodeId, to: NodeId) -> Option<Complex64> {
        self.edges.get(&(from, to)).copied()
    }

    /// Edges as `(from, to, gain)`, ordered by `(from, to)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Complex64)> + '_ {
        self.edges.iter().map(|(&(f, t), &g)| (f, t, g))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Multiplies every edge leaving the source by `s`.
    pub fn scale_source_edges(&mut self, s: Complex64) {
        let src = self.source;
        for (&(f, _), g) in self.edges.iter_mut() {
            if f == src {
                *g *= s;
            }
        }
    }

    /// Sorted successor lists.
    pub fn successors(&self) -> Vec<Vec<NodeId>> {
        let mut succ = vec![Vec::new(); self.names.len()];
        for &(f, t) in self.edges.keys() {
            succ[f].push(t);
        }
        succ
    }

    /// `A` with `A[to, from] = gain`.
    pub fn adjacency_matrix(&self) -> CMatrix {
        let n = self.names.len();
        let mut a = CMatrix::zeros(n, n);
        for (&(f, t), &g) in &self.edges {
            a[(t, f)] = g;
        }
        a
    }

    fn path_gain(&self, nodes: &[NodeId], closed: bool) -> Complex64 {
        let mut g = Complex64::one();
        for w in nodes.windows(2) {
            g *= self.edges[&(w[0], w[1])];
        }
        if closed {
            let last = *nodes.last().expect("non-empty loop");
            g *= self.edges[&(last, nodes[0])];
        }
        g
    }
}

/// Node sequence with its gain product. For loops the closing edge back to
/// the first node is implied.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub gain: Complex64,
}

pub type Loop = Path;

/// All simple cycles, each rooted at its smallest node, sorted
/// lexicographically.
pub fn enumerate_loops(g: &SignalFlowGraph) -> Vec<Loop> {
    simple_cycles(&g.successors())
        .into_iter()
        .map(|nodes| {
            let gain = g.path_gain(&nodes, true);
            Loop { nodes, gain }
        })
        .collect()
}

/// Simple paths from the source to `sink`, in lexicographic order.
pub fn forward_paths(g: &SignalFlowGraph, sink: NodeId) -> Result<Vec<Path>, SfgError> {
    g.check(g.source)?;
    g.check(sink)?;
    let succ = g.successors();
    let mut out = Vec::new();
    let mut on_path = vec![false; g.node_count()];
    let mut stack = vec![g.source];
    on_path[g.source] = true;
    paths_from(g.source, sink, &succ, &mut on_path, &mut stack, &mut out);
    Ok(out
        .into_iter()
        .map(|nodes| {
            let gain = g.path_gain(&nodes, false);
            Path { nodes, gain }
        })
        .collect())
}

fn paths_from(
    v: NodeId,
    sink: NodeId,
    succ: &[Vec<NodeId>],
    on_path: &mut [bool],
    stack: &mut Vec<NodeId>,
    out: &mut Vec<Vec<NodeId>>,
) {
    if v == sink {
        out.push(stack.clone());
        return;
    }
    for &w in &succ[v] {
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        stack.push(w);
        paths_from(w, sink, succ, on_path, stack, out);
        stack.pop();
        on_path[w] = false;
    }
}

fn mask_of(nodes: &[NodeId]) -> u128 {
    nodes.iter().fold(0u128, |m, &v| m | (1u128 << v))
}

/// Loops of one graph, prepared for repeated cofactor evaluation.
#[derive(Clone, Debug)]
pub struct MasonSolver<'g> {
    graph: &'g SignalFlowGraph,
    loops: Vec<Loop>,
    masks: Vec<u128>,
    /// `(bit of the smallest node, loop index range)`; loops are sorted so
    /// each smallest node owns a contiguous run.
    groups: Vec<(u128, core::ops::Range<usize>)>,
    delta: Complex64,
    loop_gain_sum: f64,
}

impl<'g> MasonSolver<'g> {
    pub fn new(graph: &'g SignalFlowGraph) -> Result<Self, SfgError> {
        if graph.node_count() > MAX_MASON_NODES {
            return Err(SfgError::GraphTooLarge(graph.node_count()));
        }
        let loops = enumerate_loops(graph);
        let masks: Vec<u128> = loops.iter().map(|l| mask_of(&l.nodes)).collect();
        let mut groups: Vec<(u128, core::ops::Range<usize>)> = Vec::new();
        for (i, l) in loops.iter().enumerate() {
            let bit = 1u128 << l.nodes[0];
            match groups.last_mut() {
                Some((b, range)) if *b == bit => range.end = i + 1,
                _ => groups.push((bit, i..i + 1)),
            }
        }
        let loop_gain_sum = loops.iter().map(|l| l.gain.norm()).sum();
        let mut solver = Self {
            graph,
            loops,
            masks,
            groups,
            delta: Complex64::zero(),
            loop_gain_sum,
        };
        solver.delta = solver.cofactor(0, None)?;
        Ok(solver)
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    /// Graph determinant `Δ`.
    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    pub fn loop_gain_sum(&self) -> f64 {
        self.loop_gain_sum
    }

    pub fn is_pole(&self) -> bool {
        self.delta.norm() < POLE_RTOL * (1.0 + self.loop_gain_sum)
    }

    fn pole_check(&self) -> Result<(), SfgError> {
        if self.is_pole() {
            return Err(SfgError::Pole {
                delta_abs: self.delta.norm(),
            });
        }
        Ok(())
    }

    /// `1 + Σ (−1)^k Π L` over sets of mutually non-touching loops that
    /// avoid `blocked`. Optionally records the sets of order ≥ 2.
    fn cofactor(&self, blocked: u128, mut record: Option<&mut Vec<Vec<usize>>>) -> Result<Complex64, SfgError> {
        let mut acc = Complex64::one();
        let mut stack = Vec::new();
        self.walk(0, blocked, &mut stack, Complex64::one(), &mut acc, &mut record)?;
        Ok(acc)
    }

    fn walk(
        &self,
        first_group: usize,
        used: u128,
        stack: &mut Vec<usize>,
        prod: Complex64,
        acc: &mut Complex64,
        record: &mut Option<&mut Vec<Vec<usize>>>,
    ) -> Result<(), SfgError> {
        for gi in first_group..self.groups.len() {
            let (bit, ref range) = self.groups[gi];
            if used & bit != 0 {
                continue;
            }
            for li in range.clone() {
                if self.masks[li] & used != 0 {
                    continue;
                }
                if stack.len() == MAX_NONTOUCHING_ORDER {
                    return Err(SfgError::TooManyNontouching);
                }
                let p = -prod * self.loops[li].gain;
                *acc += p;
                stack.push(li);
                if stack.len() >= 2 {
                    if let Some(rec) = record.as_deref_mut() {
                        rec.push(stack.clone());
                    }
                }
                self.walk(gi + 1, used | self.masks[li], stack, p, acc, record)?;
                stack.pop();
            }
        }
        Ok(())
    }

    /// `Σₖ Pₖ Δₖ / Δ` to `sink`. Zero when no forward path exists.
    pub fn transfer(&self, sink: NodeId) -> Result<Complex64, SfgError> {
        let paths = forward_paths(self.graph, sink)?;
        self.pole_check()?;
        let mut num = Complex64::zero();
        for p in &paths {
            num += p.gain * self.cofactor(mask_of(&p.nodes), None)?;
        }
        Ok(num / self.delta)
    }

    /// Full breakdown for `sink`.
    pub fn decompose(&self, sink: NodeId) -> Result<MasonDecomposition, SfgError> {
        let forward_paths = forward_paths(self.graph, sink)?;
        let mut nontouching_sets = Vec::new();
        self.cofactor(0, Some(&mut nontouching_sets))?;
        let path_cofactors = forward_paths
            .iter()
            .map(|p| self.cofactor(mask_of(&p.nodes), None))
            .collect::<Result<Vec<_>, _>>()?;
        let transfer = if self.is_pole() {
            None
        } else {
            let num: Complex64 = forward_paths
                .iter()
                .zip(&path_cofactors)
                .map(|(p, d)| p.gain * d)
                .sum();
            Some(num / self.delta)
        };
        Ok(MasonDecomposition {
            forward_paths,
            loops: self.loops.clone(),
            nontouching_sets,
            path_cofactors,
            delta: self.delta,
            transfer,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MasonDecomposition {
    pub forward_paths: Vec<Path>,
    pub loops: Vec<Loop>,
    /// Index sets into `loops` of two or more pairwise node-disjoint loops.
    pub nontouching_sets: Vec<Vec<usize>>,
    /// `Δₖ` for each forward path.
    pub path_cofactors: Vec<Complex64>,
    pub delta: Complex64,
    /// `None` at a pole.
    pub transfer: Option<Complex64>,
}

pub fn mason_transfer(g: &SignalFlowGraph, sink: NodeId) -> Result<Complex64, SfgError> {
    MasonSolver::new(g)?.transfer(sink)
}

pub fn decompose(g: &SignalFlowGraph, sink: NodeId) -> Result<MasonDecomposition, SfgError> {
    MasonSolver::new(g)?.decompose(sink)
}

/// Node amplitudes `x` solving `(I − A) x = e_source`.
pub fn linear_solve_amplitudes(g: &SignalFlowGraph) -> Result<Vec<Complex64>, SfgError> {
    g.check(g.source)?;
    let n = g.node_count();
    let a = g.adjacency_matrix();
    let m = CMatrix::identity(n).sub(&a);
    let lu = Lu::new(&m);
    let det = lu.determinant();
    let scale: f64 = g.edges().map(|(_, _, w)| w.norm()).sum();
    if det.norm() < POLE_RTOL * (1.0 + scale) {
        return Err(SfgError::Pole { delta_abs: det.norm() });
    }
    let mut rhs = vec![Complex64::zero(); n];
    rhs[g.source] = Complex64::one();
    lu.solve(&rhs).ok_or(SfgError::Pole { delta_abs: 0.0 })
}

pub fn linear_solve_transfer(g: &SignalFlowGraph, sink: NodeId) -> Result<Complex64, SfgError> {
    g.check(sink)?;
    Ok(linear_solve_amplitudes(g)?[sink])
}

/// `det(I − A)` by LU.
pub fn determinant_i_minus_a(g: &SignalFlowGraph) -> Complex64 {
    let n = g.node_count();
    Lu::new(&CMatrix::identity(n).sub(&g.adjacency_matrix())).determinant()
}
