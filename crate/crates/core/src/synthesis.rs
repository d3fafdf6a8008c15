use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::analysis::{specularity, Specularity};
use crate::digraph::{ArcLabeling, Digraph};
use crate::error::{Error, Result};
use crate::matrix::{verify, ComplexMatrix, Tolerances, UnitaryCertificate};
use crate::pattern::Pattern;
use crate::perm::Permutation;

/// The unitary Fourier matrix of order `n`: entry `(j, k)` is
/// `exp(2*pi*i*j*k/n) / sqrt(n)`. Every entry has modulus `1/sqrt(n)`, so
/// its pattern is all ones.
pub fn fourier_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut m = ComplexMatrix::zeros(n);
    for j in 0..n {
        for k in 0..n {
            let theta = 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
            m.set(j, k, Complex64::from_polar(scale, theta));
        }
    }
    Ok(m)
}

/// Coins indexed by degree for the coined-walk construction. Degrees without
/// a custom coin fall back to the Fourier matrix of that order.
#[derive(Debug, Clone, Default)]
pub struct CoinSet {
    coins: BTreeMap<usize, ComplexMatrix>,
}

impl CoinSet {
    pub fn fourier() -> Self {
        Self::default()
    }

    /// Registers a custom coin for `degree`. The coin must be unitary and
    /// have no zero entries, otherwise the synthesized support would shrink
    /// below the full line-digraph pattern.
    pub fn with_coin(mut self, degree: usize, coin: ComplexMatrix, tols: &Tolerances) -> Result<Self> {
        if coin.n() != degree {
            return Err(Error::InvalidCoin {
                degree,
                reason: format!("coin has order {}, expected {degree}", coin.n()),
            });
        }
        let residual = coin.unitarity_residual();
        if residual > tols.unitary_tol {
            return Err(Error::InvalidCoin {
                degree,
                reason: format!("unitarity residual {residual:.3e} exceeds tolerance"),
            });
        }
        if coin.entries().iter().any(|e| e.norm() <= tols.zero_tol) {
            return Err(Error::InvalidCoin {
                degree,
                reason: "coin has a zero entry".into(),
            });
        }
        self.coins.insert(degree, coin);
        Ok(self)
    }

    fn coin(&self, degree: usize) -> Result<ComplexMatrix> {
        match self.coins.get(&degree) {
            Some(c) => Ok(c.clone()),
            None => fourier_matrix(degree),
        }
    }
}

/// Builds a unitary with the exact support of a specular pattern by placing
/// a Fourier matrix of matching order on each all-ones block. Fails with
/// [`Error::NonSquareBlock`] naming the first offending block when the
/// decomposition contains a rectangular one.
pub fn synthesize_specular(p: &Pattern, tols: &Tolerances) -> Result<UnitaryCertificate> {
    let blocks = match specularity(p)? {
        Specularity::Specular(blocks) => blocks,
        Specularity::Violation { side, first, second } => {
            return Err(Error::NotSpecular { side, first, second })
        }
    };
    if let Some(bad) = blocks
        .blocks
        .iter()
        .find(|b| b.rows.len() != b.cols.len())
    {
        return Err(Error::NonSquareBlock {
            rows: bad.rows.clone(),
            cols: bad.cols.clone(),
        });
    }
    let mut m = ComplexMatrix::zeros(p.size());
    for block in &blocks.blocks {
        let f = fourier_matrix(block.rows.len())?;
        for (bi, &r) in block.rows.iter().enumerate() {
            for (bj, &c) in block.cols.iter().enumerate() {
                m.set(r, c, f.get(bi, bj));
            }
        }
    }
    verify(&m, p, tols)
}

/// Builds a unitary whose digraph is the line digraph of `d` by placing, for
/// each vertex `v` of degree `k`, the degree-`k` coin on the block indexed
/// by the in-arcs (rows) and out-arcs (columns) of `v`, both sorted by arc
/// id. Requires `d` to be degree-balanced and to have at least one arc; the
/// error for an unbalanced digraph names its smallest unbalanced vertex.
pub fn synthesize_coined(
    d: &Digraph,
    coins: &CoinSet,
    tols: &Tolerances,
) -> Result<(UnitaryCertificate, ArcLabeling)> {
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
    let (line, labeling) = d.line_digraph()?;
    let in_lists = d.in_arc_lists();
    let out_lists = d.out_arc_lists();
    let mut m = ComplexMatrix::zeros(d.arc_count());
    for v in 0..d.vertex_count() {
        let rows = &in_lists[v];
        let cols = &out_lists[v];
        debug_assert_eq!(rows.len(), cols.len());
        if rows.is_empty() {
            continue;
        }
        let coin = coins.coin(rows.len())?;
        for (bi, &a) in rows.iter().enumerate() {
            for (bj, &b) in cols.iter().enumerate() {
                m.set(a, b, coin.get(bi, bj));
            }
        }
    }
    let cert = verify(&m, &line.pattern(), tols)?;
    Ok((cert, labeling))
}

/// Applies row and column permutations: entry `(i, j)` moves to
/// `(p(i), q(j))`. Unitarity is preserved, and the support moves exactly as
/// [`Pattern::permuted`] does, so certificates transport along permutation
/// equivalences.
pub fn transport(m: &ComplexMatrix, p: &Permutation, q: &Permutation) -> Result<ComplexMatrix> {
    if p.len() != m.n() || q.len() != m.n() {
        return Err(Error::SizeMismatch {
            left: p.len().max(q.len()),
            right: m.n(),
        });
    }
    let mut out = ComplexMatrix::zeros(m.n());
    for i in 0..m.n() {
        for j in 0..m.n() {
            out.set(p.apply(i), q.apply(j), m.get(i, j));
        }
    }
    Ok(out)
}
