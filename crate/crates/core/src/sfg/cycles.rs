//! Elementary circuit enumeration (Johnson 1975).
//!
//! For each start vertex `s` in increasing order the search is restricted to
//! the strongly connected component of `s` inside the subgraph induced by
//! `{v ≥ s}`, so every circuit is reported exactly once, rooted at its
//! smallest vertex. Self-loops are circuits of length one.

use alloc::vec;
use alloc::vec::Vec;

/// All simple cycles of the digraph given by sorted successor lists.
///
/// Each cycle starts at its smallest vertex; the closing edge back to the
/// first vertex is implied. Output is sorted lexicographically.
pub fn simple_cycles(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let pred = predecessors(succ);
    let mut out = Vec::new();
    let mut search = Search {
        succ,
        in_comp: vec![false; n],
        blocked: vec![false; n],
        block_map: vec![Vec::new(); n],
        stack: Vec::new(),
    };
    for s in 0..n {
        let comp = component_of(s, succ, &pred);
        if !comp.iter().any(|&c| c) {
            continue;
        }
        search.in_comp = comp;
        for v in 0..n {
            search.blocked[v] = false;
            search.block_map[v].clear();
        }
        search.circuit(s, s, &mut out);
    }
    out.sort();
    out
}

fn predecessors(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); succ.len()];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    pred
}

/// Strongly connected component of `s` within `{v ≥ s}`, as a membership
/// mask. Empty when `s` lies on no cycle there.
fn component_of(s: usize, succ: &[Vec<usize>], pred: &[Vec<usize>]) -> Vec<bool> {
    let n = succ.len();
    let reach = |adj: &[Vec<usize>]| {
        let mut seen = vec![false; n];
        let mut todo = vec![s];
        seen[s] = true;
        while let Some(v) = todo.pop() {
            for &w in &adj[v] {
                if w >= s && !seen[w] {
                    seen[w] = true;
                    todo.push(w);
                }
            }
        }
        seen
    };
    let fwd = reach(succ);
    let bwd = reach(pred);
    let mut comp: Vec<bool> = fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect();
    let alone = comp.iter().filter(|&&c| c).count() == 1;
    if alone && !succ[s].contains(&s) {
        comp[s] = false;
    }
    comp
}

struct Search<'a> {
    succ: &'a [Vec<usize>],
    in_comp: Vec<bool>,
    blocked: Vec<bool>,
    block_map: Vec<Vec<usize>>,
    stack: Vec<usize>,
}

impl Search<'_> {
    fn circuit(&mut self, v: usize, s: usize, out: &mut Vec<Vec<usize>>) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in self.succ[v].iter() {
            if !self.in_comp[w] {
                continue;
            }
            if w == s {
                out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w, s, out) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in self.succ[v].iter() {
                if self.in_comp[w] && !self.block_map[w].contains(&v) {
                    self.block_map[w].push(v);
                }
            }
        }
        self.stack.pop();
        found
    }

    fn unblock(&mut self, u: usize) {
        self.blocked[u] = false;
        let waiting = core::mem::take(&mut self.block_map[u]);
        for w in waiting {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_and_two_cycle() {
        let succ = vec![vec![0, 1], vec![0]];
        assert_eq!(simple_cycles(&succ), vec![vec![0], vec![0, 1]]);
    }

    #[test]
    fn acyclic_graph_has_none() {
        let succ = vec![vec![1, 2], vec![2], vec![]];
        assert!(simple_cycles(&succ).is_empty());
    }

    #[test]
    fn complete_digraph_counts() {
        // Σ_k C(n,k)(k−1)! cycles without self-loops
        for (n, want) in [(2usize, 1usize), (3, 5), (4, 20), (5, 84)] {
            let succ: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect();
            assert_eq!(simple_cycles(&succ).len(), want, "n = {n}");
        }
    }
}
