//! DIMACS CNF reading and writing.
//!
//! The parser never panics: every problem is reported as a [`Diagnostic`]
//! with its line number, and a formula is produced only when no error was
//! found.

use std::fmt;

use crate::model::{Clause, Formula, Lit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    DuplicateLiteral,
    ClauseCountMismatch,
    EndMarker,
    UnterminatedClause,
    TautologicalClause,
    VariableOutOfRange,
    MalformedToken,
    MissingHeader,
    MalformedHeader,
    DuplicateHeader,
}

impl DiagnosticKind {
    pub fn severity(self) -> Severity {
        use DiagnosticKind::*;
        match self {
            DuplicateLiteral | ClauseCountMismatch | EndMarker | UnterminatedClause => {
                Severity::Warning
            }
            _ => Severity::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based line number; 0 for whole-file findings.
    pub line: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.kind.severity() {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        if self.line > 0 {
            write!(f, "line {}: {level}: {}", self.line, self.message)
        } else {
            write!(f, "{level}: {}", self.message)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseDiagnostics {
    pub warnings: Vec<Diagnostic>,
    pub errors: Vec<Diagnostic>,
}

impl ParseDiagnostics {
    fn push(&mut self, line: usize, kind: DiagnosticKind, message: impl Into<String>) {
        let d = Diagnostic {
            line,
            kind,
            message: message.into(),
        };
        match kind.severity() {
            Severity::Warning => self.warnings.push(d),
            Severity::Error => self.errors.push(d),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ParseDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.errors.iter().chain(&self.warnings) {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseDiagnostics {}

/// A successfully parsed formula with any warnings raised on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub formula: Formula,
    pub diagnostics: ParseDiagnostics,
}

struct Header {
    num_vars: u32,
    num_clauses: usize,
}

fn parse_header(tokens: &[&str]) -> Option<Header> {
    match tokens {
        ["p", "cnf", n, m] => Some(Header {
            num_vars: n.parse::<u32>().ok().filter(|&n| n <= i32::MAX as u32)?,
            num_clauses: m.parse().ok()?,
        }),
        _ => None,
    }
}

/// Parses DIMACS CNF text.
///
/// Accepted: `c` comment lines, one `p cnf <n> <m>` header, clauses of
/// nonzero integers terminated by `0` (possibly spanning lines). Duplicate
/// literals in a clause are merged with a warning; a header clause count
/// that disagrees with the body is a warning and the body wins. A `%` line
/// ends the input with a warning, as does a bare `0` line once the
/// declared number of clauses has been read (otherwise it is an empty
/// clause). Complementary literals within a clause,
/// out-of-range variables and malformed tokens are errors.
pub fn parse_dimacs(input: &[u8]) -> Result<Parsed, ParseDiagnostics> {
    let mut diag = ParseDiagnostics::default();
    let mut header: Option<Header> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Lit> = Vec::new();
    let mut pending_start = 0usize;
    let mut pending_bad = false;
    let mut last_line = 0usize;

    'lines: for (idx, raw) in input.split(|&b| b == b'\n').enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let text = String::from_utf8_lossy(raw);
        let line = text.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            diag.push(
                line_no,
                DiagnosticKind::EndMarker,
                "'%' end marker, ignoring the rest of the input",
            );
            break;
        }
        if line.starts_with('p') {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() {
                diag.push(
                    line_no,
                    DiagnosticKind::DuplicateHeader,
                    "second problem line",
                );
            } else if let Some(h) = parse_header(&tokens) {
                header = Some(h);
            } else {
                diag.push(
                    line_no,
                    DiagnosticKind::MalformedHeader,
                    format!("malformed problem line {line:?}"),
                );
                // without a usable header nothing else can be checked
                return Err(diag);
            }
            continue;
        }
        let Some(h) = header.as_ref() else {
            diag.push(
                line_no,
                DiagnosticKind::MissingHeader,
                "clause data before the problem line",
            );
            return Err(diag);
        };
        for token in line.split_whitespace() {
            let value = match token.parse::<i32>() {
                Ok(v) if v != i32::MIN => v,
                _ => {
                    diag.push(
                        line_no,
                        DiagnosticKind::MalformedToken,
                        format!("malformed token {token:?}"),
                    );
                    pending_bad = true;
                    continue;
                }
            };
            if pending.is_empty() && !pending_bad {
                pending_start = line_no;
            }
            if value == 0 {
                if line == "0"
                    && pending.is_empty()
                    && !pending_bad
                    && clauses.len() >= h.num_clauses
                {
                    diag.push(
                        line_no,
                        DiagnosticKind::EndMarker,
                        "bare '0' line after the declared clauses, treated as end of input",
                    );
                    break 'lines;
                }
                finish_clause(
                    &mut pending,
                    &mut pending_bad,
                    pending_start,
                    &mut clauses,
                    &mut diag,
                );
                continue;
            }
            if value.unsigned_abs() > h.num_vars {
                diag.push(
                    line_no,
                    DiagnosticKind::VariableOutOfRange,
                    format!(
                        "literal {value} exceeds the {} declared variables",
                        h.num_vars
                    ),
                );
                pending_bad = true;
                continue;
            }
            pending.push(Lit::new(value).expect("nonzero, not i32::MIN"));
        }
    }

    let Some(h) = header else {
        diag.push(0, DiagnosticKind::MissingHeader, "no problem line");
        return Err(diag);
    };
    if !pending.is_empty() || pending_bad {
        diag.push(
            last_line,
            DiagnosticKind::UnterminatedClause,
            "last clause is not terminated by 0",
        );
        finish_clause(
            &mut pending,
            &mut pending_bad,
            pending_start,
            &mut clauses,
            &mut diag,
        );
    }
    if clauses.len() != h.num_clauses && diag.is_ok() {
        diag.push(
            0,
            DiagnosticKind::ClauseCountMismatch,
            format!(
                "header declares {} clauses, found {}",
                h.num_clauses,
                clauses.len()
            ),
        );
    }
    if !diag.is_ok() {
        return Err(diag);
    }
    let formula = Formula::new(h.num_vars, clauses).expect("literals were range-checked");
    Ok(Parsed {
        formula,
        diagnostics: diag,
    })
}

fn finish_clause(
    pending: &mut Vec<Lit>,
    pending_bad: &mut bool,
    line: usize,
    clauses: &mut Vec<Clause>,
    diag: &mut ParseDiagnostics,
) {
    let lits = std::mem::take(pending);
    if std::mem::take(pending_bad) {
        return;
    }
    match Clause::normalize(lits) {
        Ok((clause, 0)) => clauses.push(clause),
        Ok((clause, dropped)) => {
            diag.push(
                line,
                DiagnosticKind::DuplicateLiteral,
                format!("{dropped} duplicate literal(s) removed"),
            );
            clauses.push(clause);
        }
        Err(_) => diag.push(
            line,
            DiagnosticKind::TautologicalClause,
            "clause contains a literal and its negation",
        ),
    }
}

/// Canonical DIMACS text: header, one clause per line in sorted order.
pub fn write_dimacs(formula: &Formula) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", formula.num_vars(), formula.len());
    for clause in formula.clauses() {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}
