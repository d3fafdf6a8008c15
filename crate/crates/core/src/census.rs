use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    is_quadrangular, specularity, sq_witness, Specularity, DEFAULT_SQ_CAP,
};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::oracle::{decide_sequential, OracleParams, Verdict};
use crate::pattern::Pattern;

/// Seeded sub-sampling of the candidate space, for sizes where exhausting
/// `2^(n*n)` patterns is off the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusSample {
    pub count: usize,
    pub seed: u64,
}

/// Configuration of a census run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusConfig {
    pub n: usize,
    /// Required for `n = 4`; forbidden above. `n <= 3` may run exhaustively.
    pub sample: Option<CensusSample>,
    pub oracle: OracleParams,
    pub sq_cap: usize,
}

impl CensusConfig {
    pub fn exhaustive(n: usize, oracle: OracleParams) -> Self {
        Self {
            n,
            sample: None,
            oracle,
            sq_cap: DEFAULT_SQ_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Feasible,
    Infeasible,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictKind::Feasible => write!(f, "feasible"),
            VerdictKind::Infeasible => write!(f, "infeasible"),
            VerdictKind::Unknown => write!(f, "unknown"),
        }
    }
}

/// One well-formed pattern with its classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    pub code: u64,
    /// Row strings joined by `/`.
    pub pattern: String,
    pub quadrangular: bool,
    pub strongly_quadrangular: bool,
    pub specular: bool,
    pub line_digraph: bool,
    pub square_blocks: bool,
    pub degree_balanced: bool,
    pub strongly_connected: bool,
    pub verdict: VerdictKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusSummary {
    pub n: usize,
    pub exhaustive: bool,
    pub total_candidates: usize,
    pub well_formed: usize,
    pub feasible: usize,
    pub infeasible: usize,
    pub unknown: usize,
    /// Counts keyed by
    /// `quad,sq,specular,line,square,balanced,connected,verdict`.
    pub combinations: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusOutcome {
    pub rows: Vec<CensusRow>,
    pub summary: CensusSummary,
}

fn candidates(config: &CensusConfig) -> Result<Vec<u64>> {
    let n = config.n;
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let cells = n * n;
    match config.sample {
        None => {
            if n > 3 {
                return Err(Error::InvalidParams {
                    reason: format!(
                        "exhaustive census supports n <= 3 (2^{cells} patterns); \
                         n = {n} needs sampling"
                    ),
                });
            }
            Ok((0..(1u64 << cells)).collect())
        }
        Some(sample) => {
            if n > 4 {
                return Err(Error::InvalidParams {
                    reason: format!("census supports n <= 4, got {n}"),
                });
            }
            if sample.count == 0 {
                return Err(Error::InvalidParams {
                    reason: "sample count must be positive".into(),
                });
            }
            let space = 1u64 << cells;
            if sample.count as u64 >= space {
                return Ok((0..space).collect());
            }
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(sample.seed);
            let mut picked = BTreeSet::new();
            while picked.len() < sample.count {
                picked.insert(rng.random_range(0..space));
            }
            Ok(picked.into_iter().collect())
        }
    }
}

fn build_row(config: &CensusConfig, code: u64) -> Result<Option<CensusRow>> {
    let p = Pattern::from_encoding(config.n, code)?;
    if !p.is_well_formed() {
        return Ok(None);
    }
    let quadrangular = is_quadrangular(&p)?;
    let strongly_quadrangular = sq_witness(&p, config.sq_cap)?.is_none();
    let (specular, square_blocks) = match specularity(&p)? {
        Specularity::Specular(blocks) => (true, blocks.all_square()),
        Specularity::Violation { .. } => (false, false),
    };
    let d = Digraph::from_pattern(&p);
    let verdict = match decide_sequential(&p, &config.oracle)? {
        Verdict::Feasible { certificate } => {
            if !certificate.is_valid(&config.oracle.tolerances()) {
                return Err(Error::InvariantBreach {
                    details: format!("pattern {code}: feasible certificate fails validation"),
                });
            }
            VerdictKind::Feasible
        }
        Verdict::Infeasible { witness } => {
            if !witness.validate(&p) {
                return Err(Error::InvariantBreach {
                    details: format!("pattern {code}: infeasibility witness fails validation"),
                });
            }
            VerdictKind::Infeasible
        }
        Verdict::Unknown { .. } => VerdictKind::Unknown,
    };
    let row = CensusRow {
        code,
        pattern: p.to_row_strings().join("/"),
        quadrangular,
        strongly_quadrangular,
        specular,
        line_digraph: specular,
        square_blocks,
        degree_balanced: d.is_degree_balanced(),
        strongly_connected: d.is_strongly_connected(),
        verdict,
    };
    check_row(&row)?;
    Ok(Some(row))
}

// The cross-checks that make the census an experiment rather than a print
// loop: a verdict contradicting the combinatorics is a hard failure.
fn check_row(row: &CensusRow) -> Result<()> {
    let breach = |what: &str| {
        Err(Error::InvariantBreach {
            details: format!("pattern {} ({}): {what}", row.code, row.pattern),
        })
    };
    if row.verdict == VerdictKind::Feasible && !row.strongly_quadrangular {
        return breach("feasible verdict on a non strongly quadrangular pattern");
    }
    if row.strongly_quadrangular && !row.quadrangular {
        return breach("strongly quadrangular but not quadrangular");
    }
    if row.specular && row.square_blocks && row.verdict == VerdictKind::Infeasible {
        return breach("specular pattern with square blocks declared infeasible");
    }
    if row.square_blocks && !row.specular {
        return breach("square blocks without specularity");
    }
    Ok(())
}

fn summarize(config: &CensusConfig, total: usize, rows: Vec<CensusRow>) -> CensusOutcome {
    let mut combinations: BTreeMap<String, usize> = BTreeMap::new();
    let (mut feasible, mut infeasible, mut unknown) = (0, 0, 0);
    for row in &rows {
        match row.verdict {
            VerdictKind::Feasible => feasible += 1,
            VerdictKind::Infeasible => infeasible += 1,
            VerdictKind::Unknown => unknown += 1,
        }
        let key = format!(
            "{},{},{},{},{},{},{},{}",
            u8::from(row.quadrangular),
            u8::from(row.strongly_quadrangular),
            u8::from(row.specular),
            u8::from(row.line_digraph),
            u8::from(row.square_blocks),
            u8::from(row.degree_balanced),
            u8::from(row.strongly_connected),
            row.verdict,
        );
        *combinations.entry(key).or_insert(0) += 1;
    }
    let summary = CensusSummary {
        n: config.n,
        exhaustive: config.sample.is_none(),
        total_candidates: total,
        well_formed: rows.len(),
        feasible,
        infeasible,
        unknown,
        combinations,
    };
    CensusOutcome { rows, summary }
}

/// Classifies every candidate pattern and tallies the outcomes, failing
/// hard on any internal inconsistency. With the `parallel` feature the
/// candidates are classified on the rayon pool; the output is identical to
/// [`run_sequential`] because rows keep candidate order and every verdict
/// is itself deterministic.
pub fn run(config: &CensusConfig) -> Result<CensusOutcome> {
    config.oracle.validate()?;
    let codes = candidates(config)?;
    let total = codes.len();
    #[cfg(feature = "parallel")]
    let rows: Vec<Option<CensusRow>> = codes
        .par_iter()
        .map(|&code| build_row(config, code))
        .collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Option<CensusRow>> = codes
        .iter()
        .map(|&code| build_row(config, code))
        .collect::<Result<_>>()?;
    Ok(summarize(config, total, rows.into_iter().flatten().collect()))
}

/// The census on the calling thread only.
pub fn run_sequential(config: &CensusConfig) -> Result<CensusOutcome> {
    config.oracle.validate()?;
    let codes = candidates(config)?;
    let total = codes.len();
    let rows: Vec<Option<CensusRow>> = codes
        .iter()
        .map(|&code| build_row(config, code))
        .collect::<Result<_>>()?;
    Ok(summarize(config, total, rows.into_iter().flatten().collect()))
}

/// Renders rows as CSV with a fixed header; booleans as `0`/`1`.
pub fn rows_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from(
        "code,pattern,quadrangular,strongly_quadrangular,specular,line_digraph,\
         square_blocks,degree_balanced,strongly_connected,verdict\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.code,
            r.pattern,
            u8::from(r.quadrangular),
            u8::from(r.strongly_quadrangular),
            u8::from(r.specular),
            u8::from(r.line_digraph),
            u8::from(r.square_blocks),
            u8::from(r.degree_balanced),
            u8::from(r.strongly_connected),
            r.verdict,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_oracle() -> OracleParams {
        OracleParams {
            restarts: 6,
            max_iters: 300,
            ..OracleParams::default()
        }
    }

    #[test]
    fn two_vertex_census_is_exhaustive() {
        let outcome = run(&CensusConfig::exhaustive(2, quick_oracle())).unwrap();
        assert_eq!(outcome.summary.total_candidates, 16);
        // Independent count: a 2x2 pattern is well formed when no row and
        // no column is zero.
        let mut expected = 0;
        for code in 0..16u64 {
            let p = Pattern::from_encoding(2, code).unwrap();
            let rows_ok = (0..2).all(|i| (0..2).any(|j| p.get(i, j)));
            let cols_ok = (0..2).all(|j| (0..2).any(|i| p.get(i, j)));
            if rows_ok && cols_ok {
                expected += 1;
            }
        }
        assert_eq!(expected, 7);
        assert_eq!(outcome.summary.well_formed, 7);
        assert_eq!(outcome.rows.len(), 7);
        // The two permutation patterns and the all-ones pattern are
        // feasible; the four patterns with exactly three ones are not.
        assert_eq!(outcome.summary.feasible, 3);
        assert_eq!(outcome.summary.infeasible, 4);
        assert_eq!(outcome.summary.unknown, 0);
        // Codes ascend.
        let codes: Vec<u64> = outcome.rows.iter().map(|r| r.code).collect();
        let mut sorted = codes.clone();
        sorted.sort_unstable();
        assert_eq!(codes, sorted);
    }

    #[test]
    fn census_rejects_unsupported_sizes() {
        assert!(matches!(
            run(&CensusConfig::exhaustive(4, quick_oracle())),
            Err(Error::InvalidParams { .. })
        ));
        let config = CensusConfig {
            n: 5,
            sample: Some(CensusSample { count: 10, seed: 0 }),
            oracle: quick_oracle(),
            sq_cap: DEFAULT_SQ_CAP,
        };
        assert!(matches!(run(&config), Err(Error::InvalidParams { .. })));
    }

    #[test]
    fn sampled_census_is_deterministic() {
        let config = CensusConfig {
            n: 4,
            sample: Some(CensusSample { count: 40, seed: 9 }),
            oracle: quick_oracle(),
            sq_cap: DEFAULT_SQ_CAP,
        };
        let a = run(&config).unwrap();
        let b = run(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.summary.total_candidates, 40);
        assert!(a.summary.well_formed <= 40);
    }

    #[test]
    fn parallel_and_sequential_censuses_agree() {
        let config = CensusConfig::exhaustive(2, quick_oracle());
        let par = run(&config).unwrap();
        let seq = run_sequential(&config).unwrap();
        assert_eq!(par, seq);
        assert_eq!(rows_csv(&par.rows), rows_csv(&seq.rows));
    }

    #[test]
    fn csv_is_stable() {
        let outcome = run(&CensusConfig::exhaustive(1, quick_oracle())).unwrap();
        let csv = rows_csv(&outcome.rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1], "1,1,1,1,1,1,1,1,1,feasible");
    }
}
