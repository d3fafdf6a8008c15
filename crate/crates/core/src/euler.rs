use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// An Euler circuit as the sequence of arc ids traversed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EulerCircuit {
    pub arcs: Vec<usize>,
}

/// A Hamiltonian cycle of a line digraph, as the sequence of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HamiltonianCycle {
    pub vertices: Vec<usize>,
}

fn hierholzer(d: &Digraph, arc_ids: &[usize], start: usize) -> Vec<usize> {
    let mut out_arcs = vec![Vec::new(); d.vertex_count()];
    for &id in arc_ids {
        out_arcs[d.arcs()[id].tail].push(id);
    }
    for list in &mut out_arcs {
        list.sort_unstable();
    }
    let mut next = vec![0usize; d.vertex_count()];
    let mut circuit = Vec::with_capacity(arc_ids.len());
    // Stack of (vertex, arc used to reach it); arcs are emitted on
    // backtracking and reversed, which splices detours in place.
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    while let Some(&(v, via)) = stack.last() {
        if next[v] < out_arcs[v].len() {
            let id = out_arcs[v][next[v]];
            next[v] += 1;
            stack.push((d.arcs()[id].head, Some(id)));
        } else {
            stack.pop();
            if let Some(id) = via {
                circuit.push(id);
            }
        }
    }
    circuit.reverse();
    circuit
}

/// Finds the Euler circuit of a degree-balanced, strongly connected digraph
/// with at least one arc, always taking the smallest unused arc id and
/// starting at the smallest vertex with an outgoing arc, so the result is
/// deterministic.
pub fn euler_circuit(d: &Digraph) -> Result<EulerCircuit> {
    if d.arc_count() == 0 {
        return Err(Error::EmptyArcSet);
    }
    if let Some((vertex, deg)) = d.unbalanced_vertex() {
        return Err(Error::NotDegreeBalanced {
            vertex,
            invalency: deg.invalency,
            outvalency: deg.outvalency,
        });
    }
    if !d.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let all: Vec<usize> = (0..d.arc_count()).collect();
    let start = d.arcs().iter().map(|a| a.tail).min().expect("arcs exist");
    let circuit = hierholzer(d, &all, start);
    debug_assert_eq!(circuit.len(), d.arc_count());
    Ok(EulerCircuit { arcs: circuit })
}

/// Euler circuits of a degree-balanced digraph, one per component with arcs.
///
/// In a degree-balanced digraph no arc joins two distinct strongly connected
/// components (an arc leaving a component would have to be repaid by one
/// coming back, making the two components one), so weak components with at
/// least one arc are strongly connected and each carries its own circuit.
/// Components are reported in order of their smallest vertex.
pub fn euler_circuits_per_component(d: &Digraph) -> Result<Vec<EulerCircuit>> {
    if let Some((vertex, deg)) = d.unbalanced_vertex() {
        return Err(Error::NotDegreeBalanced {
            vertex,
            invalency: deg.invalency,
            outvalency: deg.outvalency,
        });
    }
    let n = d.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        let p = parent[v];
        if p == v {
            return v;
        }
        let root = find(parent, p);
        parent[v] = root;
        root
    }
    for a in d.arcs() {
        let (rt, rh) = (find(&mut parent, a.tail), find(&mut parent, a.head));
        if rt != rh {
            let (lo, hi) = (rt.min(rh), rt.max(rh));
            parent[hi] = lo;
        }
    }
    let mut roots_seen = BTreeSet::new();
    let mut circuits = Vec::new();
    for v in 0..n {
        let root = find(&mut parent, v);
        if !roots_seen.insert(root) {
            continue;
        }
        let arc_ids: Vec<usize> = (0..d.arc_count())
            .filter(|&id| find(&mut parent, d.arcs()[id].tail) == root)
            .collect();
        if arc_ids.is_empty() {
            continue;
        }
        let start = arc_ids.iter().map(|&id| d.arcs()[id].tail).min().unwrap();
        let circuit = hierholzer(d, &arc_ids, start);
        debug_assert_eq!(circuit.len(), arc_ids.len());
        circuits.push(EulerCircuit { arcs: circuit });
    }
    Ok(circuits)
}

/// Lifts the Euler circuit of `d` to a Hamiltonian cycle of its line
/// digraph: consecutive circuit arcs share head and tail, which is exactly
/// adjacency between the corresponding line-digraph vertices, and every arc
/// appears once, so every line-digraph vertex is visited once.
pub fn hamiltonian_cycle_in_line_digraph(d: &Digraph) -> Result<HamiltonianCycle> {
    let circuit = euler_circuit(d)?;
    Ok(HamiltonianCycle {
        vertices: circuit.arcs,
    })
}

/// Checks a claimed Hamiltonian cycle against a digraph from scratch: every
/// vertex exactly once, and every consecutive pair (cyclically) an arc.
pub fn verify_hamiltonian_cycle(d: &Digraph, cycle: &HamiltonianCycle) -> bool {
    let n = d.vertex_count();
    if cycle.vertices.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in &cycle.vertices {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    let arcs: BTreeSet<(usize, usize)> =
        d.arcs().iter().map(|a| (a.tail, a.head)).collect();
    (0..n).all(|i| {
        let from = cycle.vertices[i];
        let to = cycle.vertices[(i + 1) % n];
        arcs.contains(&(from, to))
    })
}
