use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::perm::Permutation;

/// A directed arc. Loops (`tail == head`) are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

/// Invalency and outvalency of a vertex, counting arc multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Degrees {
    pub invalency: usize,
    pub outvalency: usize,
}

/// Result of the zero-row/zero-column check on a digraph or pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellFormedness {
    pub well_formed: bool,
    /// Vertices with invalency 0 or outvalency 0, ascending.
    pub offenders: Vec<usize>,
}

/// Records how the vertices of a line digraph correspond to the arcs of the
/// base digraph: line-digraph vertex `i` is base arc `arcs[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcLabeling {
    arcs: Vec<Arc>,
}

impl ArcLabeling {
    pub fn arc(&self, vertex: usize) -> Result<Arc> {
        self.arcs.get(vertex).copied().ok_or(Error::InvalidArcId {
            arc: vertex,
            m: self.arcs.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }
}

/// A finite digraph on vertices `0..n` with an ordered arc list.
///
/// Arc ids are positions in the list; parallel arcs are distinct ids with
/// equal endpoints. Every operation that orders arcs does so by id, which is
/// what keeps synthesis, Euler circuits, and walk output deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        for &(tail, head) in &arcs {
            if tail >= n || head >= n {
                return Err(Error::ArcOutOfRange { tail, head, n });
            }
        }
        Ok(Self {
            n,
            arcs: arcs
                .into_iter()
                .map(|(tail, head)| Arc { tail, head })
                .collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> Result<Arc> {
        self.arcs.get(id).copied().ok_or(Error::InvalidArcId {
            arc: id,
            m: self.arcs.len(),
        })
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Distinct heads of arcs leaving `v`; parallel arcs collapse.
    pub fn out_neighborhood(&self, v: usize) -> Result<BTreeSet<usize>> {
        self.check_vertex(v)?;
        Ok(self
            .arcs
            .iter()
            .filter(|a| a.tail == v)
            .map(|a| a.head)
            .collect())
    }

    /// Distinct tails of arcs entering `v`; parallel arcs collapse.
    pub fn in_neighborhood(&self, v: usize) -> Result<BTreeSet<usize>> {
        self.check_vertex(v)?;
        Ok(self
            .arcs
            .iter()
            .filter(|a| a.head == v)
            .map(|a| a.tail)
            .collect())
    }

    /// Invalency and outvalency of `v`, counting multiplicities.
    pub fn degrees(&self, v: usize) -> Result<Degrees> {
        self.check_vertex(v)?;
        let mut d = Degrees {
            invalency: 0,
            outvalency: 0,
        };
        for a in &self.arcs {
            if a.tail == v {
                d.outvalency += 1;
            }
            if a.head == v {
                d.invalency += 1;
            }
        }
        Ok(d)
    }

    /// True when every vertex has equal invalency and outvalency.
    pub fn is_degree_balanced(&self) -> bool {
        self.unbalanced_vertex().is_none()
    }

    /// Smallest vertex whose invalency and outvalency differ, if any.
    pub fn unbalanced_vertex(&self) -> Option<(usize, Degrees)> {
        let mut ins = vec![0usize; self.n];
        let mut outs = vec![0usize; self.n];
        for a in &self.arcs {
            outs[a.tail] += 1;
            ins[a.head] += 1;
        }
        (0..self.n).find_map(|v| {
            (ins[v] != outs[v]).then_some((
                v,
                Degrees {
                    invalency: ins[v],
                    outvalency: outs[v],
                },
            ))
        })
    }

    /// Arc ids leaving each vertex, ascending.
    pub(crate) fn out_arc_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.n];
        for (id, a) in self.arcs.iter().enumerate() {
            lists[a.tail].push(id);
        }
        lists
    }

    /// Arc ids entering each vertex, ascending.
    pub(crate) fn in_arc_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.n];
        for (id, a) in self.arcs.iter().enumerate() {
            lists[a.head].push(id);
        }
        lists
    }

    fn reachable(&self, start: usize, reversed: bool) -> usize {
        let lists = if reversed {
            self.in_arc_lists()
        } else {
            self.out_arc_lists()
        };
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &id in &lists[v] {
                let w = if reversed {
                    self.arcs[id].tail
                } else {
                    self.arcs[id].head
                };
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count
    }

    /// True when every vertex reaches every other by directed paths.
    /// A single vertex is strongly connected regardless of loops.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n == 1 {
            return true;
        }
        self.reachable(0, false) == self.n && self.reachable(0, true) == self.n
    }

    /// Checks that every vertex has at least one incoming and one outgoing
    /// arc, the combinatorial shadow of "no zero row or column".
    pub fn well_formedness(&self) -> WellFormedness {
        let mut ins = vec![false; self.n];
        let mut outs = vec![false; self.n];
        for a in &self.arcs {
            outs[a.tail] = true;
            ins[a.head] = true;
        }
        let offenders: Vec<usize> = (0..self.n).filter(|&v| !ins[v] || !outs[v]).collect();
        WellFormedness {
            well_formed: offenders.is_empty(),
            offenders,
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.well_formedness().well_formed
    }

    pub fn has_parallel_arcs(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.arcs.iter().any(|a| !seen.insert((a.tail, a.head)))
    }

    /// Builds the line digraph: one vertex per arc, and an arc from `a` to
    /// `b` exactly when the head of `a` is the tail of `b`.
    ///
    /// Line-digraph vertex ids follow base arc ids, and the output arcs are
    /// listed with source ascending, then target ascending. The result never
    /// has parallel arcs, even when the base digraph does.
    pub fn line_digraph(&self) -> Result<(Digraph, ArcLabeling)> {
        if self.arcs.is_empty() {
            return Err(Error::EmptyArcSet);
        }
        let out_lists = self.out_arc_lists();
        let mut arcs = Vec::new();
        for (a, arc) in self.arcs.iter().enumerate() {
            for &b in &out_lists[arc.head] {
                arcs.push((a, b));
            }
        }
        let line = Digraph::new(self.arcs.len(), arcs)?;
        Ok((
            line,
            ArcLabeling {
                arcs: self.arcs.clone(),
            },
        ))
    }

    /// The 0/1 pattern with a one at `(i, j)` when some arc runs `i -> j`;
    /// parallel arcs collapse.
    pub fn pattern(&self) -> Pattern {
        let mut p = Pattern::zeros(self.n);
        for a in &self.arcs {
            p.set(a.tail, a.head, true);
        }
        p
    }

    /// The digraph of a pattern: one arc per nonzero entry, in row-major
    /// order, so arc ids are deterministic.
    pub fn from_pattern(p: &Pattern) -> Digraph {
        let n = p.size();
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if p.get(i, j) {
                    arcs.push(Arc { tail: i, head: j });
                }
            }
        }
        Digraph { n, arcs }
    }

    /// Relabels tails by `p` and heads by `q`: arc `(t, h)` becomes
    /// `(p(t), q(h))`, preserving arc order and multiplicity.
    pub fn permuted(&self, p: &Permutation, q: &Permutation) -> Result<Digraph> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch {
                left: p.len(),
                right: self.n,
            });
        }
        if q.len() != self.n {
            return Err(Error::SizeMismatch {
                left: q.len(),
                right: self.n,
            });
        }
        Ok(Digraph {
            n: self.n,
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc {
                    tail: p.apply(a.tail),
                    head: q.apply(a.head),
                })
                .collect(),
        })
    }

    /// The digraph whose arcs are exactly the missing ones, loops included:
    /// `(i, j)` is an arc of the complement when it is not an arc here.
    /// Rejects digraphs with parallel arcs.
    pub fn complement(&self) -> Result<Digraph> {
        if self.has_parallel_arcs() {
            return Err(Error::ParallelArcs);
        }
        let p = self.pattern();
        let mut arcs = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if !p.get(i, j) {
                    arcs.push(Arc { tail: i, head: j });
                }
            }
        }
        Ok(Digraph { n: self.n, arcs })
    }
}
