use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Numerical thresholds used across synthesis, verification, and the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum entrywise deviation of `U* U` from the identity.
    pub unitary_tol: f64,
    /// Moduli at or below this count as zero when reading off a support.
    pub zero_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitary_tol: 1e-10,
            zero_tol: 1e-12,
        }
    }
}

/// A dense square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Complex64::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::BadEntryCount {
                n,
                len: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.n + j] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: x.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j) * x[j])
                    .sum::<Complex64>()
            })
            .collect())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scaled(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&e| e * factor).collect(),
        }
    }

    /// Largest modulus of `U* U - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self
            .adjoint()
            .mul(self)
            .expect("square matrices always multiply");
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((gram.get(i, j) - target).norm());
            }
        }
        worst
    }

    /// The 0/1 pattern of entries with modulus above `zero_tol`.
    pub fn support(&self, zero_tol: f64) -> Pattern {
        let mut p = Pattern::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j).norm() > zero_tol {
                    p.set(i, j, true);
                }
            }
        }
        p
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).norm()).sum())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).norm()).sum())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Inverse by Gaussian elimination with partial pivoting. A pivot whose
    /// modulus falls at or below `1e-14 * max(1, max entry)` makes the matrix
    /// numerically rank-deficient.
    pub fn inverse(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        let threshold = 1e-14 * self.max_modulus().max(1.0);
        let mut a = self.entries.clone();
        let mut inv = ComplexMatrix::identity(n).entries;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r, &s| {
                    a[r * n + col]
                        .norm()
                        .total_cmp(&a[s * n + col].norm())
                })
                .expect("column range is nonempty");
            if a[pivot_row * n + col].norm() <= threshold {
                return Err(Error::RankDeficient);
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                    inv.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pivot = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= pivot;
                inv[col * n + j] /= pivot;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let ac = a[col * n + j];
                    let ic = inv[col * n + j];
                    a[r * n + j] -= factor * ac;
                    inv[r * n + j] -= factor * ic;
                }
            }
        }
        Ok(ComplexMatrix { n, entries: inv })
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, other.n);
        ComplexMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for e in &self.entries {
            seq.serialize_element(&[e.re, e.im])?;
        }
        seq.end()
    }
}

/// A synthesized or numerically discovered unitary together with the
/// measurements that justify it against a target pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryCertificate {
    pub matrix: ComplexMatrix,
    pub target_pattern: Pattern,
    pub unitarity_residual: f64,
    /// True when the support of `matrix` at the verifying `zero_tol` equals
    /// `target_pattern` exactly.
    pub support_exact: bool,
    /// Smallest modulus over the target's nonzero positions; 0 when the
    /// target has none.
    pub min_on_support: f64,
}

impl UnitaryCertificate {
    pub fn is_valid(&self, tols: &Tolerances) -> bool {
        self.unitarity_residual <= tols.unitary_tol && self.support_exact
    }
}

impl Serialize for UnitaryCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("UnitaryCertificate", 6)?;
        s.serialize_field("n", &self.matrix.n())?;
        s.serialize_field("entries", &self.matrix)?;
        s.serialize_field("target_pattern", &self.target_pattern.to_row_strings())?;
        s.serialize_field("unitarity_residual", &self.unitarity_residual)?;
        s.serialize_field("support_exact", &self.support_exact)?;
        s.serialize_field("min_on_support", &self.min_on_support)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for UnitaryCertificate {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            entries: Vec<[f64; 2]>,
            target_pattern: Vec<String>,
            unitarity_residual: f64,
            support_exact: bool,
            min_on_support: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        let entries: Vec<Complex64> = raw
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let matrix = ComplexMatrix::from_entries(raw.n, entries)
            .map_err(|e| de::Error::custom(e.to_string()))?;
        let target_pattern = Pattern::from_row_strings(&raw.target_pattern)
            .map_err(|e| de::Error::custom(e.to_string()))?;
        if target_pattern.size() != raw.n {
            return Err(de::Error::custom("pattern size does not match n"));
        }
        Ok(Self {
            matrix,
            target_pattern,
            unitarity_residual: raw.unitarity_residual,
            support_exact: raw.support_exact,
            min_on_support: raw.min_on_support,
        })
    }
}

/// Pure measurement of a candidate against a target pattern: records the
/// unitarity residual, whether the support at `zero_tol` matches exactly,
/// and the smallest modulus over the target's nonzero positions. It never
/// rejects a bad candidate; validity is a question for
/// [`UnitaryCertificate::is_valid`].
pub fn verify(m: &ComplexMatrix, target: &Pattern, tols: &Tolerances) -> Result<UnitaryCertificate> {
    if m.n() != target.size() {
        return Err(Error::SizeMismatch {
            left: m.n(),
            right: target.size(),
        });
    }
    let (residual, support_exact, min_on_support) = measure(m, target, tols);
    Ok(UnitaryCertificate {
        matrix: m.clone(),
        target_pattern: target.clone(),
        unitarity_residual: residual,
        support_exact,
        min_on_support,
    })
}

/// The measurements behind [`verify`], without building a certificate.
pub(crate) fn measure(m: &ComplexMatrix, target: &Pattern, tols: &Tolerances) -> (f64, bool, f64) {
    let n = m.n();
    let mut support_exact = true;
    let mut min_on_support = f64::INFINITY;
    let mut any_on = false;
    for i in 0..n {
        for j in 0..n {
            let modulus = m.get(i, j).norm();
            if target.get(i, j) {
                any_on = true;
                min_on_support = min_on_support.min(modulus);
                if modulus <= tols.zero_tol {
                    support_exact = false;
                }
            } else if modulus > tols.zero_tol {
                support_exact = false;
            }
        }
    }
    if !any_on {
        min_on_support = 0.0;
    }
    (m.unitarity_residual(), support_exact, min_on_support)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_unitary() {
        let id = ComplexMatrix::identity(3);
        assert_eq!(id.unitarity_residual(), 0.0);
        assert_eq!(id.support(1e-12).to_row_strings(), vec!["100", "010", "001"]);
    }

    #[test]
    fn multiplication_and_adjoint() {
        let mut a = ComplexMatrix::zeros(2);
        a.set(0, 0, c(0.0, 1.0));
        a.set(0, 1, c(1.0, 0.0));
        a.set(1, 0, c(2.0, 0.0));
        let adj = a.adjoint();
        assert_eq!(adj.get(0, 0), c(0.0, -1.0));
        assert_eq!(adj.get(1, 0), c(1.0, 0.0));
        let prod = a.mul(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(prod, a);
    }

    #[test]
    fn inverse_of_scaled_identity() {
        let m = ComplexMatrix::identity(3).scaled(c(2.0, 0.0));
        let inv = m.inverse().unwrap();
        assert!((inv.get(0, 0) - c(0.5, 0.0)).norm() < 1e-14);
        assert!(m
            .mul(&inv)
            .unwrap()
            .max_abs_diff(&ComplexMatrix::identity(3))
            < 1e-14);
    }

    #[test]
    fn inverse_round_trips_on_a_generic_matrix() {
        let m = ComplexMatrix::from_entries(
            2,
            vec![c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.0), c(0.0, 1.5)],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        let prod = m.mul(&inv).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn singular_matrices_are_rejected() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(0, 1, c(1.0, 0.0));
        m.set(1, 0, c(1.0, 0.0));
        m.set(1, 1, c(1.0, 0.0));
        assert_eq!(m.inverse().unwrap_err(), Error::RankDeficient);
    }

    #[test]
    fn verify_measures_without_judging() {
        let tols = Tolerances::default();
        let id = ComplexMatrix::identity(2);
        let ones = Pattern::from_row_strings(&["11", "11"]).unwrap();
        let cert = verify(&id, &ones, &tols).unwrap();
        assert_eq!(cert.unitarity_residual, 0.0);
        assert!(!cert.support_exact);
        assert_eq!(cert.min_on_support, 0.0);
        assert!(!cert.is_valid(&tols));

        let diag = Pattern::from_row_strings(&["10", "01"]).unwrap();
        let cert = verify(&id, &diag, &tols).unwrap();
        assert!(cert.support_exact);
        assert_eq!(cert.min_on_support, 1.0);
        assert!(cert.is_valid(&tols));
    }

    #[test]
    fn verify_reports_scaling_residual() {
        let m = ComplexMatrix::identity(2).scaled(c(1.01, 0.0));
        let diag = Pattern::from_row_strings(&["10", "01"]).unwrap();
        let cert = verify(&m, &diag, &Tolerances::default()).unwrap();
        assert!((cert.unitarity_residual - 0.0201).abs() < 1e-10);
        assert!(!cert.is_valid(&Tolerances::default()));
    }

    #[test]
    fn certificate_json_round_trips() {
        let m = ComplexMatrix::identity(2);
        let diag = Pattern::from_row_strings(&["10", "01"]).unwrap();
        let cert = verify(&m, &diag, &Tolerances::default()).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"target_pattern\":[\"10\",\"01\"]"));
        let back: UnitaryCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }
}
