//! DIMACS CNF reading and writing.

use std::fmt::Write;

use crate::cnf::{Clause, ClauseSet, Literal};
use crate::error::{Error, Result};

/// Parses `p cnf n m` text. Duplicate literals collapse; a clause holding
/// both polarities of a variable is an error.
pub fn parse_dimacs(text: &[u8]) -> Result<ClauseSet> {
    let text = std::str::from_utf8(text).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<Literal> = Vec::new();
    let mut cur_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse { line, msg: "duplicate header".into() });
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(Error::Parse { line, msg: format!("malformed header `{t}`") });
            }
            let n = parts[2].parse().map_err(|_| Error::Parse { line, msg: format!("bad variable count `{}`", parts[2]) })?;
            let m = parts[3].parse().map_err(|_| Error::Parse { line, msg: format!("bad clause count `{}`", parts[3]) })?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(Error::Parse { line, msg: "clause before header".into() });
        };
        for tok in t.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| Error::Parse { line, msg: format!("non-integer token `{tok}`") })?;
            if cur.is_empty() {
                cur_line = line;
            }
            if x == 0 {
                let c = Clause::new(cur.drain(..)).map_err(|_| Error::Tautology { line: cur_line })?;
                clauses.push(c);
                continue;
            }
            if x.unsigned_abs() as usize > n {
                return Err(Error::Parse { line, msg: format!("variable {} exceeds header count {n}", x.abs()) });
            }
            cur.push(Literal::from_dimacs(x)?);
        }
    }
    if header.is_none() {
        return Err(Error::Parse { line: 0, msg: "missing header".into() });
    }
    if !cur.is_empty() {
        return Err(Error::Parse { line: cur_line, msg: "unterminated clause".into() });
    }
    Ok(ClauseSet::from_clauses(clauses))
}

/// Writes `F` with the header `p cnf <max var> <clauses>`.
pub fn write_dimacs(f: &ClauseSet) -> Vec<u8> {
    let n = f.vars().last().copied().unwrap_or(0);
    let mut s = format!("p cnf {} {}\n", n, f.c());
    for c in f.iter() {
        for l in c.literals() {
            write!(s, "{} ", l.to_dimacs()).unwrap();
        }
        s.push_str("0\n");
    }
    s.into_bytes()
}
