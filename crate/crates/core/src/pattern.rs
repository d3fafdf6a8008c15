use crate::digraph::WellFormedness;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A square 0/1 matrix, the zero/nonzero skeleton of a candidate unitary.
///
/// Row `i` is the out-support of vertex `i` of the associated digraph and
/// column `j` its in-support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    n: usize,
    bits: Vec<bool>,
}

impl Pattern {
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        if bits.len() != n * n {
            return Err(Error::BadEntryCount { n, len: bits.len() });
        }
        Ok(Self { n, bits })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            bits: vec![false; n * n],
        }
    }

    /// Parses rows of `'0'`/`'1'` characters; rows must be square.
    pub fn from_row_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        let mut bits = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.chars().count() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected {} characters, got {}", n, row.chars().count()),
                });
            }
            for c in row.chars() {
                match c {
                    '0' => bits.push(false),
                    '1' => bits.push(true),
                    other => {
                        return Err(Error::Parse {
                            line: i + 1,
                            message: format!("expected '0' or '1', got {other:?}"),
                        })
                    }
                }
            }
        }
        Ok(Self { n, bits })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.bits[i * self.n + j] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_row_strings(&self) -> Vec<String> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if self.get(i, j) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Row supports as bitmasks over columns; only sizes up to 64 fit.
    pub(crate) fn row_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "mask representation supports n <= 64");
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| self.get(i, j))
                    .fold(0u64, |m, j| m | (1 << j))
            })
            .collect()
    }

    pub(crate) fn col_masks(&self) -> Vec<u64> {
        self.transpose().row_masks()
    }

    pub fn transpose(&self) -> Pattern {
        let mut t = Pattern::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn well_formedness(&self) -> WellFormedness {
        let mut rows = vec![false; self.n];
        let mut cols = vec![false; self.n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, col) in cols.iter_mut().enumerate() {
                if self.get(i, j) {
                    *row = true;
                    *col = true;
                }
            }
        }
        let offenders: Vec<usize> = (0..self.n).filter(|&v| !rows[v] || !cols[v]).collect();
        WellFormedness {
            well_formed: offenders.is_empty(),
            offenders,
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.well_formedness().well_formed
    }

    /// Moves entry `(i, j)` to `(p(i), q(j))`.
    pub fn permuted(&self, p: &Permutation, q: &Permutation) -> Result<Pattern> {
        if p.len() != self.n || q.len() != self.n {
            return Err(Error::SizeMismatch {
                left: p.len().max(q.len()),
                right: self.n,
            });
        }
        let mut out = Pattern::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) {
                    out.set(p.apply(i), q.apply(j), true);
                }
            }
        }
        Ok(out)
    }

    /// Entrywise complement, diagonal included.
    pub fn complemented(&self) -> Pattern {
        Pattern {
            n: self.n,
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// Row-major big-endian encoding of the entries; the all-ones pattern on
    /// `n` vertices maps to `2^(n*n) - 1`. Requires `n <= 8`.
    pub fn encoding(&self) -> Option<u64> {
        if self.n > 8 {
            return None;
        }
        Some(
            self.bits
                .iter()
                .fold(0u64, |acc, &b| (acc << 1) | u64::from(b)),
        )
    }

    pub fn from_encoding(n: usize, code: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        if n > 8 {
            return Err(Error::InvalidParams {
                reason: format!("encoding supports n <= 8, got {n}"),
            });
        }
        let cells = n * n;
        let bits = (0..cells)
            .map(|k| (code >> (cells - 1 - k)) & 1 == 1)
            .collect();
        Ok(Self { n, bits })
    }
}

pub const DEFAULT_EQUIVALENCE_LIMIT: usize = 8;

/// Searches for permutations `(p, q)` with `a.permuted(p, q) == b`.
///
/// Returns `Ok(None)` when none exists (in particular for patterns of
/// different sizes). The backtracking search assigns row images in
/// lexicographic order and matches columns greedily at the leaves, so the
/// returned pair is deterministic. Sizes above `limit` are rejected.
pub fn permutation_equivalent(
    a: &Pattern,
    b: &Pattern,
    limit: usize,
) -> Result<Option<(Permutation, Permutation)>> {
    if a.size() != b.size() {
        return Ok(None);
    }
    let n = a.size();
    if n > limit {
        return Err(Error::EquivalenceLimitExceeded { n, limit });
    }
    if a.count_ones() != b.count_ones() {
        return Ok(None);
    }
    let row_sum = |p: &Pattern, i: usize| (0..n).filter(|&j| p.get(i, j)).count();
    let col_sum = |p: &Pattern, j: usize| (0..n).filter(|&i| p.get(i, j)).count();
    let mut a_rows: Vec<usize> = (0..n).map(|i| row_sum(a, i)).collect();
    let mut b_rows: Vec<usize> = (0..n).map(|i| row_sum(b, i)).collect();
    let mut a_cols: Vec<usize> = (0..n).map(|j| col_sum(a, j)).collect();
    let mut b_cols: Vec<usize> = (0..n).map(|j| col_sum(b, j)).collect();
    let row_sums_a = a_rows.clone();
    let row_sums_b = b_rows.clone();
    a_rows.sort_unstable();
    b_rows.sort_unstable();
    a_cols.sort_unstable();
    b_cols.sort_unstable();
    if a_rows != b_rows || a_cols != b_cols {
        return Ok(None);
    }

    fn assign(
        a: &Pattern,
        b: &Pattern,
        row_sums_a: &[usize],
        row_sums_b: &[usize],
        rho: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> Option<Permutation> {
        let n = a.size();
        let i = rho.len();
        if i == n {
            return match_columns(a, b, rho);
        }
        for r in 0..n {
            if used[r] || row_sums_a[i] != row_sums_b[r] {
                continue;
            }
            used[r] = true;
            rho.push(r);
            if let Some(q) = assign(a, b, row_sums_a, row_sums_b, rho, used) {
                return Some(q);
            }
            rho.pop();
            used[r] = false;
        }
        None
    }

    // Given a full row assignment, matches the relabeled columns of `a`
    // against the columns of `b` as multisets of row masks.
    fn match_columns(a: &Pattern, b: &Pattern, rho: &[usize]) -> Option<Permutation> {
        let n = a.size();
        let mask_a = |j: usize| -> u64 {
            (0..n)
                .filter(|&i| a.get(i, j))
                .fold(0u64, |m, i| m | (1 << rho[i]))
        };
        let mask_b = |c: usize| -> u64 {
            (0..n)
                .filter(|&i| b.get(i, c))
                .fold(0u64, |m, i| m | (1 << i))
        };
        let b_masks: Vec<u64> = (0..n).map(mask_b).collect();
        let mut taken = vec![false; n];
        let mut kappa = vec![0usize; n];
        for (j, image) in kappa.iter_mut().enumerate() {
            let want = mask_a(j);
            let c = (0..n).find(|&c| !taken[c] && b_masks[c] == want)?;
            taken[c] = true;
            *image = c;
        }
        Some(Permutation::new(kappa).expect("greedy matching yields a bijection"))
    }

    let mut rho = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if let Some(q) = assign(a, b, &row_sums_a, &row_sums_b, &mut rho, &mut used) {
        let p = Permutation::new(rho).expect("backtracking yields a bijection");
        debug_assert_eq!(&a.permuted(&p, &q).unwrap(), b);
        return Ok(Some((p, q)));
    }
    Ok(None)
}
