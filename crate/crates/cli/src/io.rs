//! Polynomial text files and the sparse problem dump.
//!
//! One term per line, `<complex-coeff> <letters>`, e.g. `0.5+0i XZI`. Blank lines
//! and lines starting with `#` are skipped. Repeated words are summed.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use pauli_sos::pauli::PauliWord;
use pauli_sos::polynomial::PauliPolynomial;
use pauli_sos::sdp::{HermitianSparse, SdpProblem};

use crate::format::fmt_num;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 when the error is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn parse_polynomial(text: &str) -> Result<PauliPolynomial, ParseError> {
    let mut poly: Option<PauliPolynomial> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(line, format!("expected `<coeff> <letters>`, found {} fields", fields.len())));
        }
        let coeff = Complex64::from_str(fields[0])
            .map_err(|_| err(line, format!("bad coefficient `{}`", fields[0])))?;
        if !coeff.re.is_finite() || !coeff.im.is_finite() {
            return Err(err(line, "coefficient is not finite"));
        }
        let word = PauliWord::from_str(fields[1]).map_err(|e| err(line, format!("bad word `{}`: {e}", fields[1])))?;
        let p = poly.get_or_insert_with(|| PauliPolynomial::zero(word.n()));
        if p.n() != word.n() {
            return Err(err(line, format!("word has {} letters, earlier terms have {}", word.n(), p.n())));
        }
        p.add_term(word, coeff);
    }
    poly.ok_or_else(|| err(0, "no terms found"))
}

pub fn read_polynomial(path: &Path) -> Result<PauliPolynomial, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| err(0, format!("{}: {e}", path.display())))?;
    parse_polynomial(&text).map_err(|e| ParseError { message: format!("{}: {}", path.display(), e.message), ..e })
}

fn fmt_complex(z: Complex64) -> String {
    let im = fmt_num(z.im.abs());
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{}{}{}i", fmt_num(z.re), sign, im)
}

/// Inverse of [`parse_polynomial`], graded-lexicographic order. The zero polynomial
/// is written as a single `0+0i` identity line so that the qubit count survives.
pub fn write_polynomial(p: &PauliPolynomial) -> String {
    let mut out = String::new();
    if p.is_empty() {
        let _ = writeln!(out, "0+0i {}", PauliWord::identity(p.n()));
        return out;
    }
    for (w, &c) in p.terms() {
        let _ = writeln!(out, "{} {}", fmt_complex(c), w);
    }
    out
}

fn dump_matrix(out: &mut String, label: usize, block: usize, m: &HermitianSparse) {
    for (r, c, v) in m.entries() {
        if r <= c {
            let _ = writeln!(out, "{label} {block} {r} {c} {} {}", fmt_num(v.re), fmt_num(v.im));
        }
    }
}

/// Sparse text dump: header lines, then `matrix block row col re im` for the upper
/// triangle of every matrix (matrix 0 is the objective, matrix j is constraint j),
/// then `rhs j value` lines.
pub fn dump_problem(problem: &SdpProblem) -> String {
    let mut out = String::new();
    let blocks: Vec<String> = problem.blocks.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(out, "# blocks {}", blocks.join(" "));
    let _ = writeln!(out, "# constraints {}", problem.constraints.len());
    for (b, m) in problem.objective.iter().enumerate() {
        dump_matrix(&mut out, 0, b, m);
    }
    for (j, con) in problem.constraints.iter().enumerate() {
        for (b, m) in &con.matrices {
            dump_matrix(&mut out, j + 1, *b, m);
        }
    }
    for (j, con) in problem.constraints.iter().enumerate() {
        let _ = writeln!(out, "rhs {} {}", j + 1, fmt_num(con.rhs));
    }
    out
}
