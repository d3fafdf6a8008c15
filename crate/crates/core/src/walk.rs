use std::fmt::Write as _;

use num_complex::Complex64;

use crate::digraph::{ArcLabeling, Digraph};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Tolerances};
use crate::synthesis::{synthesize_coined, CoinSet};

/// Initial condition of a coined walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartMode {
    /// Equal amplitude `1/sqrt(m)` on every arc.
    Uniform,
    /// All amplitude on one arc id.
    Delta(usize),
}

/// How arc amplitudes are attributed to vertices when measuring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Grouping {
    /// Probability of a vertex is the mass on its incoming-position arcs,
    /// the arcs whose head it is: where the walker is arriving.
    #[default]
    Head,
    /// Mass on the arcs whose tail it is: where the walker is leaving from.
    Tail,
}

/// Amplitudes indexed by arc id.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub amplitudes: Vec<Complex64>,
}

impl WalkState {
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// A probability distribution over vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexDistribution {
    pub probabilities: Vec<f64>,
}

/// Prepares the start state on the arcs of `d`. The digraph must be
/// degree-balanced with at least one arc, the precondition for a coined
/// evolution to exist at all.
pub fn init_state(d: &Digraph, mode: StartMode) -> Result<WalkState> {
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
    let m = d.arc_count();
    let amplitudes = match mode {
        StartMode::Uniform => {
            let a = Complex64::new(1.0 / (m as f64).sqrt(), 0.0);
            vec![a; m]
        }
        StartMode::Delta(arc) => {
            if arc >= m {
                return Err(Error::InvalidArcId { arc, m });
            }
            let mut v = vec![Complex64::ZERO; m];
            v[arc] = Complex64::ONE;
            v
        }
    };
    Ok(WalkState { amplitudes })
}

/// One evolution step: `amplitudes <- op * amplitudes`.
pub fn step(op: &ComplexMatrix, state: &WalkState) -> Result<WalkState> {
    Ok(WalkState {
        amplitudes: op.matvec(&state.amplitudes)?,
    })
}

/// Sums arc probabilities by head (default) or tail vertex.
pub fn vertex_distribution(
    state: &WalkState,
    d: &Digraph,
    grouping: Grouping,
) -> Result<VertexDistribution> {
    if state.amplitudes.len() != d.arc_count() {
        return Err(Error::SizeMismatch {
            left: state.amplitudes.len(),
            right: d.arc_count(),
        });
    }
    let mut probabilities = vec![0.0; d.vertex_count()];
    for (id, arc) in d.arcs().iter().enumerate() {
        let v = match grouping {
            Grouping::Head => arc.head,
            Grouping::Tail => arc.tail,
        };
        probabilities[v] += state.amplitudes[id].norm_sqr();
    }
    Ok(VertexDistribution { probabilities })
}

/// The one-step evolution operator of the coined walk on `d`: the transpose
/// of the coined certificate, so that amplitude on an arc flows forward to
/// the arcs its head feeds, following the arcs of the line digraph.
pub fn walk_operator(
    d: &Digraph,
    coins: &CoinSet,
    tols: &Tolerances,
) -> Result<(ComplexMatrix, ArcLabeling)> {
    let (cert, labeling) = synthesize_coined(d, coins, tols)?;
    Ok((cert.matrix.transpose(), labeling))
}

/// Runs a coined walk for `steps` steps and reports the vertex distribution
/// after each of `0..=steps`, so the slice has `steps + 1` entries.
pub fn run(
    d: &Digraph,
    steps: usize,
    mode: StartMode,
    coins: &CoinSet,
    grouping: Grouping,
    tols: &Tolerances,
) -> Result<Vec<VertexDistribution>> {
    let (op, _) = walk_operator(d, coins, tols)?;
    let mut state = init_state(d, mode)?;
    let mut distributions = Vec::with_capacity(steps + 1);
    distributions.push(vertex_distribution(&state, d, grouping)?);
    for _ in 0..steps {
        state = step(&op, &state)?;
        distributions.push(vertex_distribution(&state, d, grouping)?);
    }
    Ok(distributions)
}

/// Renders distributions as CSV: header `step,v0,...`, one row per step,
/// probabilities with 12 significant digits.
pub fn distributions_csv(distributions: &[VertexDistribution]) -> String {
    let mut out = String::from("step");
    if let Some(first) = distributions.first() {
        for v in 0..first.probabilities.len() {
            let _ = write!(out, ",v{v}");
        }
    }
    out.push('\n');
    for (step, dist) in distributions.iter().enumerate() {
        let _ = write!(out, "{step}");
        for p in &dist.probabilities {
            let _ = write!(out, ",{p:.11e}");
        }
        out.push('\n');
    }
    out
}
