use std::fmt::Write as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// The two textual input formats: an arc list with an `n m` header, or rows
/// of `0`/`1` characters. Lines starting with `#` are comments in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    EdgeList,
    PatternRows,
}

/// A parsed input, preserving which format it came in.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Digraph(Digraph),
    Pattern(Pattern),
}

impl Input {
    /// The pattern view of the input: a digraph collapses parallel arcs.
    pub fn pattern(&self) -> Pattern {
        match self {
            Input::Digraph(d) => d.pattern(),
            Input::Pattern(p) => p.clone(),
        }
    }

    /// The digraph view of the input: a pattern expands row-major.
    pub fn digraph(&self) -> Digraph {
        match self {
            Input::Digraph(d) => d.clone(),
            Input::Pattern(p) => Digraph::from_pattern(p),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

/// Guesses the format from the first content line: two whitespace-separated
/// tokens mean an edge-list header, anything else is read as pattern rows.
pub fn detect_format(text: &str) -> InputFormat {
    match content_lines(text).next() {
        Some((_, line)) if line.split_whitespace().count() == 2 => InputFormat::EdgeList,
        _ => InputFormat::PatternRows,
    }
}

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected {what}, got {token:?}"),
    })
}

/// Parses `n m` followed by `m` lines `tail head` (0-based). Duplicate
/// lines denote parallel arcs.
pub fn parse_edge_list(text: &str) -> Result<Digraph> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(Error::Parse {
            line: header_line,
            message: format!("expected header \"n m\", got {header:?}"),
        });
    }
    let n = parse_usize(tokens[0], header_line, "vertex count")?;
    let m = parse_usize(tokens[1], header_line, "arc count")?;
    let mut arcs = Vec::with_capacity(m);
    let mut last_line = header_line;
    for (line, content) in lines {
        if arcs.len() == m {
            return Err(Error::Parse {
                line,
                message: format!("expected {m} arc lines, found more"),
            });
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected \"tail head\", got {content:?}"),
            });
        }
        let tail = parse_usize(tokens[0], line, "tail vertex")?;
        let head = parse_usize(tokens[1], line, "head vertex")?;
        if tail >= n || head >= n {
            return Err(Error::Parse {
                line,
                message: format!("arc ({tail}, {head}) out of range for n = {n}"),
            });
        }
        arcs.push((tail, head));
        last_line = line;
    }
    if arcs.len() != m {
        return Err(Error::Parse {
            line: last_line + 1,
            message: format!("expected {m} arc lines, found {}", arcs.len()),
        });
    }
    if n == 0 {
        return Err(Error::Parse {
            line: header_line,
            message: "vertex count must be positive".into(),
        });
    }
    Digraph::new(n, arcs)
}

/// Parses `n` lines of `n` characters, each `0` or `1`.
pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let rows: Vec<(usize, &str)> = content_lines(text).collect();
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "empty input".into(),
        });
    }
    let n = rows.len();
    let mut bits = Vec::with_capacity(n * n);
    for &(line, row) in &rows {
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != n {
            return Err(Error::Parse {
                line,
                message: format!(
                    "pattern must be square: {n} rows but this row has {} characters",
                    chars.len()
                ),
            });
        }
        for c in chars {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected '0' or '1', got {other:?}"),
                    })
                }
            }
        }
    }
    Pattern::new(n, bits)
}

/// Parses with an explicit format, or by detection when `format` is `None`.
pub fn parse_input(text: &str, format: Option<InputFormat>) -> Result<Input> {
    match format.unwrap_or_else(|| detect_format(text)) {
        InputFormat::EdgeList => Ok(Input::Digraph(parse_edge_list(text)?)),
        InputFormat::PatternRows => Ok(Input::Pattern(parse_pattern(text)?)),
    }
}

/// Renders a digraph in the edge-list format `parse_edge_list` reads.
pub fn edge_list_string(d: &Digraph) -> String {
    let mut out = format!("{} {}\n", d.vertex_count(), d.arc_count());
    for a in d.arcs() {
        let _ = writeln!(out, "{} {}", a.tail, a.head);
    }
    out
}

/// Renders a pattern as rows of `0`/`1` characters.
pub fn pattern_string(p: &Pattern) -> String {
    let mut out = String::new();
    for row in p.to_row_strings() {
        let _ = writeln!(out, "{row}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_formats() {
        assert_eq!(detect_format("3 2\n0 1\n1 2\n"), InputFormat::EdgeList);
        assert_eq!(detect_format("# comment\n11\n10\n"), InputFormat::PatternRows);
        assert_eq!(detect_format("1\n"), InputFormat::PatternRows);
    }

    #[test]
    fn parses_edge_lists_with_comments_and_parallels() {
        let text = "# a digraph\n2 3\n0 1\n# twice\n0 1\n1 0\n";
        let d = parse_edge_list(text).unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.arc_count(), 3);
        assert!(d.has_parallel_arcs());
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let err = parse_edge_list("2 2\n0 1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "expected 2 arc lines, found 1".into()
            }
        );
        let err = parse_edge_list("2 1\n0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_edge_list("2 1\n0 1\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_edge_list("2 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn parses_patterns() {
        let p = parse_pattern("# matrix\n11\n10\n").unwrap();
        assert_eq!(p.to_row_strings(), vec!["11", "10"]);
        assert!(matches!(
            parse_pattern("11\n1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_pattern("1x\n11\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn round_trips() {
        let d = parse_edge_list("2 3\n0 0\n0 1\n1 0\n").unwrap();
        let text = edge_list_string(&d);
        assert_eq!(parse_edge_list(&text).unwrap(), d);

        let p = parse_pattern("110\n011\n101\n").unwrap();
        assert_eq!(parse_pattern(&pattern_string(&p)).unwrap(), p);
    }

    #[test]
    fn auto_parse_picks_the_right_type() {
        match parse_input("2 1\n0 1\n", None).unwrap() {
            Input::Digraph(d) => assert_eq!(d.arc_count(), 1),
            other => panic!("expected digraph, got {other:?}"),
        }
        match parse_input("11\n11\n", None).unwrap() {
            Input::Pattern(p) => assert_eq!(p.count_ones(), 4),
            other => panic!("expected pattern, got {other:?}"),
        }
        // Forcing the format overrides detection.
        assert!(parse_input("11\n11\n", Some(InputFormat::EdgeList)).is_err());
    }
}
