//! DIMACS CNF with an optional XOR section.
//!
//! Clauses follow `p cnf <vars> <clauses>` as signed indices terminated by
//! `0`, possibly spanning lines. Equations follow `p xnf <vars> <eqs>`, one
//! per line as `<idx>+ = <0|1>`. A comment `c var <idx> <name>` names a
//! variable.

use std::fmt::Write as _;

use super::ParseError;
use crate::boolean::{AffineEquation, BooleanFormula, Lit};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsFormula {
    pub formula: BooleanFormula,
    /// Clauses dropped because they contained a complementary pair.
    pub tautologies: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Cnf,
    Xnf,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse_dimacs(text: &str) -> Result<DimacsFormula, ParseError> {
    let mut num_vars: Option<usize> = None;
    let mut section = Section::None;
    let mut names: Vec<(usize, usize, String)> = Vec::new();
    let mut clauses: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut equations: Vec<(usize, Vec<i64>, bool)> = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    let mut pending_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if line == "c" || line.starts_with("c ") || line.starts_with("c\t") {
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() == 4 && words[1] == "var" {
                let idx: usize = words[2]
                    .parse()
                    .map_err(|_| err(no, format!("bad variable index `{}`", words[2])))?;
                names.push((no, idx, words[3].to_string()));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let (kind, n) = match words.as_slice() {
                [kind, n, _count] => (*kind, *n),
                _ => return Err(err(no, "expected `p cnf <vars> <clauses>`")),
            };
            let n: usize = n.parse().map_err(|_| err(no, format!("bad variable count `{n}`")))?;
            if !pending.is_empty() {
                return Err(err(pending_line, "clause is missing its terminating 0"));
            }
            section = match kind {
                "cnf" => Section::Cnf,
                "xnf" => Section::Xnf,
                other => return Err(err(no, format!("unknown problem type `{other}`"))),
            };
            num_vars = Some(num_vars.map_or(n, |m: usize| m.max(n)));
            continue;
        }
        match section {
            Section::None => return Err(err(no, "data before the `p` header")),
            Section::Cnf => {
                for tok in line.split_whitespace() {
                    let v: i64 = tok.parse().map_err(|_| err(no, format!("bad literal `{tok}`")))?;
                    if pending.is_empty() {
                        pending_line = no;
                    }
                    if v == 0 {
                        clauses.push((pending_line, std::mem::take(&mut pending)));
                    } else {
                        pending.push(v);
                    }
                }
            }
            Section::Xnf => {
                let (lhs, rhs) = line
                    .split_once('=')
                    .ok_or_else(|| err(no, "expected `<idx>+ = <0|1>`"))?;
                let parity = match rhs.trim() {
                    "0" => false,
                    "1" => true,
                    other => return Err(err(no, format!("parity must be 0 or 1, found `{other}`"))),
                };
                let vars = lhs
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<i64>()
                            .ok()
                            .filter(|&v| v > 0)
                            .ok_or_else(|| err(no, format!("bad variable index `{t}`")))
                    })
                    .collect::<Result<Vec<i64>, _>>()?;
                equations.push((no, vars, parity));
            }
        }
    }
    if !pending.is_empty() {
        return Err(err(pending_line, "clause is missing its terminating 0"));
    }
    let n = num_vars.ok_or_else(|| err(0, "missing `p cnf` header"))?;
    let check = |no: usize, v: i64| {
        if v.unsigned_abs() as usize > n {
            Err(err(no, format!("literal {v} is out of range 1..={n}")))
        } else {
            Ok(())
        }
    };

    let mut formula = BooleanFormula::new(n);
    let mut tautologies = 0;
    for (no, lits) in clauses {
        for &v in &lits {
            check(no, v)?;
        }
        if !formula.add_clause(lits.into_iter().map(Lit::from_dimacs).collect()) {
            tautologies += 1;
        }
    }
    for (no, vars, parity) in equations {
        for &v in &vars {
            check(no, v)?;
        }
        formula.add_equation(AffineEquation::new(
            vars.into_iter().map(|v| v as usize - 1).collect(),
            parity,
        ));
    }
    for (no, idx, name) in names {
        if idx == 0 || idx > n {
            return Err(err(no, format!("variable index {idx} is out of range")));
        }
        formula.rename(idx - 1, name);
    }
    Ok(DimacsFormula {
        formula,
        tautologies,
    })
}

/// DIMACS text for `f`; names other than the defaults become `c var` lines.
pub fn emit_dimacs(f: &BooleanFormula) -> String {
    let mut out = String::new();
    for (i, name) in f.names().iter().enumerate() {
        if *name != format!("v{}", i + 1) {
            let _ = writeln!(out, "c var {} {name}", i + 1);
        }
    }
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.clauses().len());
    for c in f.clauses() {
        for l in c.lits() {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    if !f.equations().is_empty() {
        let _ = writeln!(out, "p xnf {} {}", f.num_vars(), f.equations().len());
        for e in f.equations() {
            for v in e.vars() {
                let _ = write!(out, "{} ", v + 1);
            }
            let _ = writeln!(out, "= {}", u8::from(e.parity()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::Clause;

    #[test]
    fn three_clauses() {
        let d = parse_dimacs("c example\np cnf 3 3\n1 2 3 0\n1 -2 -3 0\n2 -3\n0\n").unwrap();
        assert_eq!(d.formula.num_vars(), 3);
        assert_eq!(d.formula.clauses().len(), 3);
        assert_eq!(d.tautologies, 0);
    }

    #[test]
    fn degenerate_clauses() {
        let d = parse_dimacs("p cnf 1 2\n0\n1 -1 0\n").unwrap();
        assert_eq!(d.formula.clauses(), &[Clause::falsum()]);
        assert_eq!(d.tautologies, 1);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_dimacs("p cnf 2 1\n1 3 0\n").unwrap_err().line, 2);
        assert_eq!(parse_dimacs("p cnf 2 1\n1 2\n").unwrap_err().line, 2);
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 x 0\n").is_err());
    }

    #[test]
    fn names_and_equations() {
        let d = parse_dimacs("c var 1 x\np cnf 2 1\n-1 2 0\np xnf 2 1\n1 2 = 1\n").unwrap();
        assert_eq!(d.formula.name(0), "x");
        assert_eq!(d.formula.name(1), "v2");
        assert_eq!(d.formula.equations().len(), 1);
        let again = parse_dimacs(&emit_dimacs(&d.formula)).unwrap();
        assert_eq!(again.formula, d.formula);
    }
}
