use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Named digraph families used as fixtures throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Bidirected path: arcs both ways along `0 - 1 - ... - (n-1)`.
    Path,
    /// Bidirected path plus a loop at every vertex; loops come first.
    PathWithLoops,
    /// Bidirected cycle.
    Cycle,
    /// Directed cycle `0 -> 1 -> ... -> 0`.
    DirectedCycle,
    /// Complete digraph with loops: every ordered pair, row-major.
    Complete,
    /// The Petersen graph, bidirected; requires exactly 10 vertices.
    Petersen,
    /// Disjoint bidirected edges `0-1, 2-3, ...`; requires even `n`.
    Ladder,
}

pub fn generate(family: Family, n: usize) -> Result<Digraph> {
    match family {
        Family::Path => {
            if n < 2 {
                return Err(Error::UnsupportedFamilySize {
                    family: "path",
                    requirement: "at least 2 vertices",
                    n,
                });
            }
            let mut arcs = Vec::new();
            for i in 0..n - 1 {
                arcs.push((i, i + 1));
                arcs.push((i + 1, i));
            }
            Digraph::new(n, arcs)
        }
        Family::PathWithLoops => {
            if n < 2 {
                return Err(Error::UnsupportedFamilySize {
                    family: "path with loops",
                    requirement: "at least 2 vertices",
                    n,
                });
            }
            let mut arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
            for i in 0..n - 1 {
                arcs.push((i, i + 1));
                arcs.push((i + 1, i));
            }
            Digraph::new(n, arcs)
        }
        Family::Cycle => {
            if n < 3 {
                return Err(Error::UnsupportedFamilySize {
                    family: "cycle",
                    requirement: "at least 3 vertices",
                    n,
                });
            }
            let mut arcs = Vec::new();
            for i in 0..n {
                arcs.push((i, (i + 1) % n));
                arcs.push(((i + 1) % n, i));
            }
            Digraph::new(n, arcs)
        }
        Family::DirectedCycle => {
            if n == 0 {
                return Err(Error::UnsupportedFamilySize {
                    family: "directed cycle",
                    requirement: "at least 1 vertex",
                    n,
                });
            }
            Digraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        Family::Complete => {
            if n == 0 {
                return Err(Error::UnsupportedFamilySize {
                    family: "complete digraph",
                    requirement: "at least 1 vertex",
                    n,
                });
            }
            let mut arcs = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    arcs.push((i, j));
                }
            }
            Digraph::new(n, arcs)
        }
        Family::Petersen => {
            if n != 10 {
                return Err(Error::UnsupportedFamilySize {
                    family: "petersen",
                    requirement: "exactly 10 vertices",
                    n,
                });
            }
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            let mut arcs = Vec::new();
            for (a, b) in edges {
                arcs.push((a, b));
                arcs.push((b, a));
            }
            Digraph::new(10, arcs)
        }
        Family::Ladder => {
            if n < 4 || !n.is_multiple_of(2) {
                return Err(Error::UnsupportedFamilySize {
                    family: "ladder",
                    requirement: "an even number of vertices, at least 4",
                    n,
                });
            }
            let mut arcs = Vec::new();
            for b in 0..n / 2 {
                arcs.push((2 * b, 2 * b + 1));
                arcs.push((2 * b + 1, 2 * b));
            }
            Digraph::new(n, arcs)
        }
    }
}

/// A seeded random degree-balanced, strongly connected digraph: a random
/// Hamiltonian cycle guarantees both properties, then random directed cycles
/// on distinct vertices are layered on while the arc budget lasts. Requires
/// `max_arcs >= n`.
pub fn random_degree_balanced(n: usize, max_arcs: usize, seed: u64) -> Result<Digraph> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    if max_arcs < n {
        return Err(Error::InvalidParams {
            reason: format!("max_arcs ({max_arcs}) must be at least n ({n})"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut arcs: Vec<(usize, usize)> = (0..n)
        .map(|i| (order[i], order[(i + 1) % n]))
        .collect();
    for _ in 0..8 {
        if arcs.len() >= max_arcs {
            break;
        }
        let k = rng.random_range(1..=n);
        if arcs.len() + k > max_arcs {
            continue;
        }
        let mut vertices: Vec<usize> = (0..n).collect();
        vertices.shuffle(&mut rng);
        vertices.truncate(k);
        for i in 0..k {
            arcs.push((vertices[i], vertices[(i + 1) % k]));
        }
    }
    Digraph::new(n, arcs)
}

/// A seeded uniform random attachment tree, bidirected: vertex `k` attaches
/// to a uniform parent among `0..k`. Requires at least 2 vertices.
pub fn random_tree(n: usize, seed: u64) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::UnsupportedFamilySize {
            family: "random tree",
            requirement: "at least 2 vertices",
            n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for k in 1..n {
        let parent = rng.random_range(0..k);
        arcs.push((parent, k));
        arcs.push((k, parent));
    }
    Digraph::new(n, arcs)
}

/// A seeded random out-tree with arcs from parent to child, resampled until
/// some vertex has at least two children, so the result always has two
/// sibling arcs. Requires at least 3 vertices.
pub fn random_directed_tree(n: usize, seed: u64) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::UnsupportedFamilySize {
            family: "random directed tree",
            requirement: "at least 3 vertices",
            n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let parents: Vec<usize> = (1..n).map(|k| rng.random_range(0..k)).collect();
        let mut children = vec![0usize; n];
        for &p in &parents {
            children[p] += 1;
        }
        if children.iter().any(|&c| c >= 2) {
            let arcs = parents
                .iter()
                .enumerate()
                .map(|(i, &p)| (p, i + 1))
                .collect();
            return Digraph::new(n, arcs);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_matches_expected_arcs() {
        let d = generate(Family::Path, 3).unwrap();
        let got: Vec<(usize, usize)> = d.arcs().iter().map(|a| (a.tail, a.head)).collect();
        assert_eq!(got, vec![(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert!(generate(Family::Path, 1).is_err());
    }

    #[test]
    fn path_with_loops_puts_loops_first() {
        let d = generate(Family::PathWithLoops, 2).unwrap();
        let got: Vec<(usize, usize)> = d.arcs().iter().map(|a| (a.tail, a.head)).collect();
        assert_eq!(got, vec![(0, 0), (1, 1), (0, 1), (1, 0)]);
    }

    #[test]
    fn cycles_and_complete() {
        let c = generate(Family::Cycle, 4).unwrap();
        assert_eq!(c.arc_count(), 8);
        assert!(c.is_degree_balanced());
        assert!(generate(Family::Cycle, 2).is_err());

        let dc = generate(Family::DirectedCycle, 1).unwrap();
        assert_eq!(dc.arc_count(), 1);

        let k = generate(Family::Complete, 3).unwrap();
        assert_eq!(k.arc_count(), 9);
        assert_eq!(k.pattern().to_row_strings(), vec!["111", "111", "111"]);
    }

    #[test]
    fn petersen_is_cubic_and_triangle_free() {
        let p = generate(Family::Petersen, 10).unwrap();
        assert_eq!(p.arc_count(), 30);
        for v in 0..10 {
            let deg = p.degrees(v).unwrap();
            assert_eq!((deg.invalency, deg.outvalency), (3, 3));
        }
        // No two adjacent vertices share a neighbor.
        for a in p.arcs() {
            let na = p.out_neighborhood(a.tail).unwrap();
            let nb = p.out_neighborhood(a.head).unwrap();
            assert!(na.intersection(&nb).next().is_none());
        }
        assert!(generate(Family::Petersen, 9).is_err());
    }

    #[test]
    fn ladder_is_disjoint_edges() {
        let l = generate(Family::Ladder, 6).unwrap();
        assert_eq!(l.arc_count(), 6);
        assert!(!l.is_strongly_connected());
        assert!(l.is_degree_balanced());
        assert!(generate(Family::Ladder, 5).is_err());
    }

    #[test]
    fn random_degree_balanced_meets_its_contract() {
        for seed in 0..20 {
            let d = random_degree_balanced(5, 12, seed).unwrap();
            assert!(d.is_degree_balanced(), "seed {seed}");
            assert!(d.is_strongly_connected(), "seed {seed}");
            assert!(d.arc_count() <= 12, "seed {seed}");
            assert_eq!(d, random_degree_balanced(5, 12, seed).unwrap());
        }
        assert!(random_degree_balanced(5, 4, 0).is_err());
    }

    #[test]
    fn random_trees_are_trees() {
        for seed in 0..10 {
            let t = random_tree(6, seed).unwrap();
            assert_eq!(t.arc_count(), 10);
            assert!(t.is_strongly_connected(), "seed {seed}");
            assert_eq!(t, random_tree(6, seed).unwrap());
        }
    }

    #[test]
    fn random_directed_trees_branch() {
        for seed in 0..10 {
            let t = random_directed_tree(5, seed).unwrap();
            assert_eq!(t.arc_count(), 4);
            let branching = (0..5).any(|v| t.out_neighborhood(v).unwrap().len() >= 2);
            assert!(branching, "seed {seed}");
            assert_eq!(t, random_directed_tree(5, seed).unwrap());
        }
    }
}
