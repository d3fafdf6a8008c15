use std::cmp::Ordering;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{sq_witness_unchecked, SqWitness, DEFAULT_SQ_CAP};
use crate::error::{Error, Result};
use crate::matrix::{measure, verify, ComplexMatrix, Tolerances, UnitaryCertificate};
use crate::pattern::Pattern;

/// Parameters of the numerical feasibility search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    /// Independent seeded starts; the verdict comes from the first success
    /// in restart order.
    pub restarts: usize,
    /// Alternating-projection iterations per restart.
    pub max_iters: usize,
    /// Residual at which a candidate counts as unitary.
    pub unitary_tol: f64,
    /// Moduli the pattern projection enforces on nonzero positions; must
    /// stay above `zero_tol` so a successful candidate has exact support.
    pub support_floor: f64,
    /// Support reading threshold for certificates.
    pub zero_tol: f64,
    /// Base seed; restart `r` uses stream `seed + r`.
    pub seed: u64,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 2000,
            unitary_tol: 1e-10,
            support_floor: 1e-3,
            zero_tol: 1e-8,
            seed: 0,
        }
    }
}

impl OracleParams {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParams {
                reason: "restarts and max_iters must be positive".into(),
            });
        }
        // partial_cmp so that NaN parameters fail validation too.
        if self.support_floor.partial_cmp(&self.zero_tol) != Some(Ordering::Greater) {
            return Err(Error::InvalidParams {
                reason: format!(
                    "support_floor ({}) must exceed zero_tol ({})",
                    self.support_floor, self.zero_tol
                ),
            });
        }
        if self.unitary_tol.partial_cmp(&0.0) != Some(Ordering::Greater) {
            return Err(Error::InvalidParams {
                reason: "unitary_tol must be positive".into(),
            });
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            unitary_tol: self.unitary_tol,
            zero_tol: self.zero_tol,
        }
    }
}

/// Outcome of the feasibility oracle.
///
/// `Infeasible` is only ever produced from a combinatorial witness, so it is
/// a proof; `Feasible` carries a checkable certificate; `Unknown` is an
/// honest failure to decide, with the best numbers seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Verdict {
    Infeasible {
        witness: SqWitness,
    },
    Feasible {
        certificate: UnitaryCertificate,
    },
    Unknown {
        best_residual: f64,
        best_min_on_support: f64,
    },
}

/// The unitary factor of the polar decomposition, the unitary closest to `m`
/// in the Frobenius distance, computed by a scaled Newton iteration.
/// Numerically rank-deficient inputs are rejected.
pub fn nearest_unitary(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut x = m.clone();
    let mut prev_diff = f64::INFINITY;
    for _ in 0..100 {
        let inv_adjoint = x.inverse()?.adjoint();
        let mu = ((inv_adjoint.norm_one() * inv_adjoint.norm_inf())
            / (x.norm_one() * x.norm_inf()))
        .powf(0.25);
        let next = &x.scaled(Complex64::new(0.5 * mu, 0.0))
            + &inv_adjoint.scaled(Complex64::new(0.5 / mu, 0.0));
        let diff = next.max_abs_diff(&x);
        x = next;
        if diff <= 1e-13 && prev_diff <= 1e-6 {
            break;
        }
        prev_diff = diff;
    }
    Ok(x)
}

// Deterministic per-entry phase in [0, 2*pi), derived from the seed and the
// entry position by splitmix64.
fn entry_phase(seed: u64, i: usize, j: usize) -> f64 {
    let mut z = seed ^ (((i as u64) << 32) | j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    2.0 * std::f64::consts::PI * (z >> 11) as f64 / (1u64 << 53) as f64
}

/// Projects a matrix onto the set of matrices carrying the pattern: entries
/// off the pattern become zero; entries on the pattern keep their value
/// unless their modulus falls below `floor`, in which case they are pushed
/// out to `floor`, preserving phase. An on-pattern zero gets the
/// deterministic seeded phase for its position, so the projection as a whole
/// is reproducible.
pub fn pattern_projection(
    m: &ComplexMatrix,
    p: &Pattern,
    floor: f64,
    phase_seed: u64,
) -> Result<ComplexMatrix> {
    if m.n() != p.size() {
        return Err(Error::SizeMismatch {
            left: m.n(),
            right: p.size(),
        });
    }
    let n = m.n();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if !p.get(i, j) {
                continue;
            }
            let v = m.get(i, j);
            let modulus = v.norm();
            let projected = if modulus >= floor {
                v
            } else if modulus == 0.0 {
                Complex64::from_polar(floor, entry_phase(phase_seed, i, j))
            } else {
                v * (floor / modulus)
            };
            out.set(i, j, projected);
        }
    }
    Ok(out)
}

fn ginibre(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let entries = (0..n * n)
        .map(|_| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
        .collect();
    ComplexMatrix::from_entries(n, entries).expect("entry count matches by construction")
}

fn perturbed(m: &ComplexMatrix, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let n = m.n();
    let noise = ginibre(n, rng).scaled(Complex64::new(1e-6, 0.0));
    m + &noise
}

enum RestartOutcome {
    Success(Box<UnitaryCertificate>),
    Failure { residual: f64, min_on_support: f64 },
}

// Deterministic reduction of failed restarts: smallest residual wins, ties
// by restart index, so the result does not depend on collection order.
fn best_failure(failures: &[(usize, f64, f64)]) -> Verdict {
    let best = failures
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    match best {
        Some(&(_, residual, min_on_support)) => Verdict::Unknown {
            best_residual: residual,
            best_min_on_support: min_on_support,
        },
        None => Verdict::Unknown {
            best_residual: f64::INFINITY,
            best_min_on_support: 0.0,
        },
    }
}

// One seeded restart of the alternating projection between the unitary
// group and the pattern set. Success means the pattern-side iterate itself
// passed the unitarity test, so its support is exact by construction.
fn restart(p: &Pattern, params: &OracleParams, r: usize) -> RestartOutcome {
    let n = p.size();
    let tols = params.tolerances();
    let stream = params.seed.wrapping_add(r as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    // A singular Gaussian draw has measure zero; the identity fallback is
    // never hit in practice but keeps the loop bounded.
    let mut u = (0..64)
        .find_map(|_| nearest_unitary(&ginibre(n, &mut rng)).ok())
        .unwrap_or_else(|| ComplexMatrix::identity(n));
    let mut best_residual = f64::INFINITY;
    let mut best_min = 0.0;
    for _ in 0..params.max_iters {
        let candidate = pattern_projection(&u, p, params.support_floor, stream)
            .expect("sizes match by construction");
        let (residual, support_exact, min_on) = measure(&candidate, p, &tols);
        if residual < best_residual {
            best_residual = residual;
            best_min = min_on;
        }
        if residual <= params.unitary_tol {
            debug_assert!(support_exact);
            let cert = verify(&candidate, p, &tols).expect("sizes match by construction");
            return RestartOutcome::Success(Box::new(cert));
        }
        u = match nearest_unitary(&candidate) {
            Ok(u) => u,
            Err(_) => match nearest_unitary(&perturbed(&candidate, &mut rng)) {
                Ok(u) => u,
                Err(_) => break,
            },
        };
    }
    RestartOutcome::Failure {
        residual: best_residual,
        min_on_support: best_min,
    }
}

fn combinatorial_refutation(p: &Pattern) -> Result<Option<Verdict>> {
    // The witness argument is sound without the well-formedness gate, so
    // refute first and only then insist on nonzero rows and columns.
    match sq_witness_unchecked(p, DEFAULT_SQ_CAP) {
        Ok(Some(witness)) => return Ok(Some(Verdict::Infeasible { witness })),
        Ok(None) => {}
        Err(Error::SearchCapExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    let wf = p.well_formedness();
    if !wf.well_formed {
        return Err(Error::NotWellFormed {
            offenders: wf.offenders,
        });
    }
    Ok(None)
}

/// Decides whether some unitary matrix has exactly the pattern `p`.
///
/// The pipeline refutes combinatorially when it can (a strong
/// quadrangularity witness, reported even for patterns with zero lines),
/// then runs seeded alternating-projection restarts. `Infeasible` only ever
/// comes from a witness; numerics alone can at most say `Unknown`.
///
/// With the `parallel` feature restarts run on the rayon pool; the verdict
/// is the same as the sequential one because the first success in restart
/// order wins and the `Unknown` reduction is order-independent.
pub fn decide(p: &Pattern, params: &OracleParams) -> Result<Verdict> {
    params.validate()?;
    if let Some(verdict) = combinatorial_refutation(p)? {
        return Ok(verdict);
    }
    #[cfg(feature = "parallel")]
    {
        let failures = std::sync::Mutex::new(Vec::new());
        let hit = (0..params.restarts)
            .into_par_iter()
            .find_map_first(|r| match restart(p, params, r) {
                RestartOutcome::Success(cert) => Some(*cert),
                RestartOutcome::Failure {
                    residual,
                    min_on_support,
                } => {
                    failures.lock().unwrap().push((r, residual, min_on_support));
                    None
                }
            });
        match hit {
            // find_map_first keeps the success of smallest restart index,
            // exactly what the sequential loop would return.
            Some(certificate) => Ok(Verdict::Feasible { certificate }),
            // With no success every restart deposited its failure, so the
            // reduction sees the complete, order-independent set.
            None => Ok(best_failure(&failures.into_inner().unwrap())),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        decide_after_refutation(p, params)
    }
}

/// The oracle with restarts run strictly in order on the calling thread.
/// Produces the same verdict as [`decide`].
pub fn decide_sequential(p: &Pattern, params: &OracleParams) -> Result<Verdict> {
    params.validate()?;
    if let Some(verdict) = combinatorial_refutation(p)? {
        return Ok(verdict);
    }
    decide_after_refutation(p, params)
}

fn decide_after_refutation(p: &Pattern, params: &OracleParams) -> Result<Verdict> {
    let mut failures = Vec::with_capacity(params.restarts);
    for r in 0..params.restarts {
        match restart(p, params, r) {
            RestartOutcome::Success(cert) => return Ok(Verdict::Feasible { certificate: *cert }),
            RestartOutcome::Failure {
                residual,
                min_on_support,
            } => failures.push((r, residual, min_on_support)),
        }
    }
    Ok(best_failure(&failures))
}
