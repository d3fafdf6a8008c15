use serde::Serialize;

use crate::analysis::{
    quadrangular_violation, specularity, sq_witness, QuadrangularViolation, Specularity,
    SpecularBlocks, SqWitness, DEFAULT_SQ_CAP,
};
use crate::error::{Error, Result};
use crate::io::Input;
use crate::oracle::{decide, OracleParams, Verdict};

/// Options for [`analyze`].
#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub sq_cap: usize,
    /// When set, the feasibility oracle runs and its verdict is attached.
    pub oracle: Option<OracleParams>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            sq_cap: DEFAULT_SQ_CAP,
            oracle: None,
        }
    }
}

/// Everything the classifier can say about one input.
///
/// The combinatorial fields are `None` when they do not apply: the pattern
/// tests require well-formedness, and `strongly_quadrangular` is also `None`
/// when the subset search hit its cap (`sq_undecided` distinguishes the
/// two cases).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternReport {
    pub pattern: Vec<String>,
    pub well_formed: bool,
    pub offenders: Vec<usize>,
    pub quadrangular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrangular_violation: Option<QuadrangularViolation>,
    pub strongly_quadrangular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sq_witness: Option<SqWitness>,
    pub sq_undecided: bool,
    pub specular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub specular_blocks: Option<SpecularBlocks>,
    pub line_digraph: Option<bool>,
    pub square_blocks: Option<bool>,
    pub degree_balanced: bool,
    pub strongly_connected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

/// Runs every applicable test on the input and collects the results.
///
/// The digraph facts (balance, connectivity) come from the digraph view,
/// arc multiplicities included; the pattern facts from the pattern view.
/// When the oracle is requested it runs whenever the pattern has a chance:
/// a non-well-formed pattern still gets a verdict if a witness refutes it,
/// and is otherwise left without one.
pub fn analyze(input: &Input, options: &AnalyzeOptions) -> Result<PatternReport> {
    let p = input.pattern();
    let d = input.digraph();
    let wf = p.well_formedness();

    let mut report = PatternReport {
        pattern: p.to_row_strings(),
        well_formed: wf.well_formed,
        offenders: wf.offenders,
        quadrangular: None,
        quadrangular_violation: None,
        strongly_quadrangular: None,
        sq_witness: None,
        sq_undecided: false,
        specular: None,
        specular_blocks: None,
        line_digraph: None,
        square_blocks: None,
        degree_balanced: d.is_degree_balanced(),
        strongly_connected: d.is_strongly_connected(),
        verdict: None,
    };

    if report.well_formed {
        let violation = quadrangular_violation(&p)?;
        report.quadrangular = Some(violation.is_none());
        report.quadrangular_violation = violation;

        match sq_witness(&p, options.sq_cap) {
            Ok(witness) => {
                report.strongly_quadrangular = Some(witness.is_none());
                report.sq_witness = witness;
            }
            Err(Error::SearchCapExceeded { .. }) => report.sq_undecided = true,
            Err(e) => return Err(e),
        }

        match specularity(&p)? {
            Specularity::Specular(blocks) => {
                report.specular = Some(true);
                report.line_digraph = Some(true);
                report.square_blocks = Some(blocks.all_square());
                report.specular_blocks = Some(blocks);
            }
            Specularity::Violation { .. } => {
                report.specular = Some(false);
                report.line_digraph = Some(false);
                report.square_blocks = Some(false);
            }
        }
    }

    if let Some(params) = options.oracle {
        match decide(&p, &params) {
            Ok(verdict) => report.verdict = Some(verdict),
            Err(Error::NotWellFormed { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;

    fn input(rows: &[&str]) -> Input {
        Input::Pattern(Pattern::from_row_strings(rows).unwrap())
    }

    #[test]
    fn report_on_the_triangle() {
        let r = analyze(&input(&["011", "101", "110"]), &AnalyzeOptions::default()).unwrap();
        assert!(r.well_formed);
        assert_eq!(r.quadrangular, Some(false));
        assert!(r.quadrangular_violation.is_some());
        assert_eq!(r.strongly_quadrangular, Some(false));
        assert_eq!(r.specular, Some(false));
        assert_eq!(r.line_digraph, Some(false));
        assert!(r.degree_balanced);
        assert!(r.strongly_connected);
        assert!(r.verdict.is_none());
    }

    #[test]
    fn report_on_non_well_formed_input() {
        let r = analyze(&input(&["10", "10"]), &AnalyzeOptions::default()).unwrap();
        assert!(!r.well_formed);
        assert_eq!(r.offenders, vec![1]);
        assert_eq!(r.quadrangular, None);
        assert_eq!(r.strongly_quadrangular, None);
        assert_eq!(r.specular, None);
    }

    #[test]
    fn report_attaches_verdicts() {
        let options = AnalyzeOptions {
            oracle: Some(OracleParams {
                restarts: 4,
                max_iters: 200,
                ..OracleParams::default()
            }),
            ..AnalyzeOptions::default()
        };
        let r = analyze(&input(&["011", "101", "110"]), &options).unwrap();
        assert!(matches!(r.verdict, Some(Verdict::Infeasible { .. })));

        // Branching-tree input: not well formed, still refuted.
        let r = analyze(&input(&["011", "000", "000"]), &options).unwrap();
        assert!(!r.well_formed);
        assert!(matches!(r.verdict, Some(Verdict::Infeasible { .. })));

        // Non-well-formed with no witness: no verdict, no error.
        let r = analyze(&input(&["010", "001", "000"]), &options).unwrap();
        assert!(r.verdict.is_none());
    }

    #[test]
    fn report_flags_are_consistent() {
        // On every well-formed 3x3 pattern: strong quadrangularity implies
        // quadrangularity, and specular is line digraph.
        for code in 0..512u64 {
            let p = Pattern::from_encoding(3, code).unwrap();
            if !p.is_well_formed() {
                continue;
            }
            let r = analyze(&Input::Pattern(p), &AnalyzeOptions::default()).unwrap();
            if r.strongly_quadrangular == Some(true) {
                assert_eq!(r.quadrangular, Some(true), "code {code}");
            }
            assert_eq!(r.specular, r.line_digraph, "code {code}");
            if r.square_blocks == Some(true) {
                assert_eq!(r.specular, Some(true), "code {code}");
            }
        }
    }
}
