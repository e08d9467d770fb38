//! Line-oriented extensional format.
//!
//! ```text
//! csp 1
//! vars: x y
//! domain: 0 1 2
//! active: x = 1 2
//! con le(x,y): (0,0) (0,1) (1,1)
//! ```

use std::fmt::Write as _;

use super::ParseError;
use crate::model::{Constraint, CspInstance, Relation, SearchSpace, Val, Var};

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | ':' | '=' | '#'))
}

/// Line, label, scope and rows of a `con` line before name resolution.
type RawConstraint = (usize, String, Vec<String>, Vec<Vec<String>>);

pub fn parse_csp(text: &str) -> Result<(CspInstance, SearchSpace), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (no, header) = lines.next().ok_or_else(|| err(1, "empty input; expected `csp 1`"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["csp", "1"] {
        return Err(err(no, format!("expected `csp 1`, found `{header}`")));
    }

    let mut vars: Option<Vec<String>> = None;
    let mut domain: Option<Vec<String>> = None;
    let mut active: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut cons: Vec<RawConstraint> = Vec::new();

    for (no, line) in lines {
        let (keyword, rest) = line
            .split_once(|c: char| c == ':' || c.is_whitespace())
            .ok_or_else(|| err(no, format!("unrecognized statement `{line}`")))?;
        match keyword {
            "vars" | "domain" => {
                let rest = rest.trim_start().strip_prefix(':').unwrap_or(rest);
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                if let Some(bad) = names.iter().find(|n| !is_name(n)) {
                    return Err(err(no, format!("invalid name `{bad}`")));
                }
                let slot = if keyword == "vars" { &mut vars } else { &mut domain };
                if slot.replace(names).is_some() {
                    return Err(err(no, format!("`{keyword}` declared twice")));
                }
            }
            "active" => {
                let rest = rest.trim_start().strip_prefix(':').unwrap_or(rest);
                let (var, vals) = rest
                    .split_once('=')
                    .ok_or_else(|| err(no, "expected `active: <var> = <value>+`"))?;
                active.push((
                    no,
                    var.trim().to_string(),
                    vals.split_whitespace().map(String::from).collect(),
                ));
            }
            "con" => {
                let (label, scope, rows) = parse_con(no, rest)?;
                cons.push((no, label, scope, rows));
            }
            _ => return Err(err(no, format!("unrecognized statement `{line}`"))),
        }
    }

    let vars = vars.ok_or_else(|| err(0, "missing `vars:` line"))?;
    let domain = domain.ok_or_else(|| err(0, "missing `domain:` line"))?;
    let probe = CspInstance::new(vars.clone(), domain.clone(), vec![]).map_err(|e| err(0, e.to_string()))?;

    let lookup_var = |no: usize, name: &str| {
        probe
            .var(name)
            .map_err(|_| err(no, format!("unknown variable `{name}`")))
    };
    let lookup_val = |no: usize, name: &str| {
        probe
            .val(name)
            .map_err(|_| err(no, format!("value `{name}` is not in the domain")))
    };

    let mut constraints = Vec::with_capacity(cons.len());
    for (no, label, scope, rows) in cons {
        let scope: Vec<Var> = scope
            .iter()
            .map(|n| lookup_var(no, n))
            .collect::<Result<_, _>>()?;
        let mut tuples = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != scope.len() {
                return Err(err(
                    no,
                    format!(
                        "constraint `{label}`: tuple ({}) has {} values but the scope has {}",
                        row.join(","),
                        row.len(),
                        scope.len()
                    ),
                ));
            }
            tuples.push(
                row.iter()
                    .map(|v| lookup_val(no, v))
                    .collect::<Result<Vec<Val>, _>>()?,
            );
        }
        let rel = Relation::new(scope.len(), tuples).map_err(|e| err(no, e.to_string()))?;
        constraints
            .push(Constraint::new(label.clone(), scope, rel).map_err(|e| err(no, format!("constraint `{label}`: {e}")))?);
    }
    let inst = probe.with_constraints(constraints).map_err(|e| err(0, e.to_string()))?;

    let mut sets: Vec<Option<Vec<Val>>> = vec![None; inst.num_vars()];
    for (no, var, vals) in active {
        let x = lookup_var(no, &var)?;
        if vals.is_empty() {
            return Err(err(no, format!("empty active set for `{var}`")));
        }
        if sets[x.index()].is_some() {
            return Err(err(no, format!("active set for `{var}` given twice")));
        }
        sets[x.index()] = Some(vals.iter().map(|v| lookup_val(no, v)).collect::<Result<_, _>>()?);
    }
    let all: Vec<Val> = inst.values().collect();
    let space = SearchSpace::new(sets.into_iter().map(|s| s.unwrap_or_else(|| all.clone())).collect())
        .map_err(|e| err(0, e.to_string()))?;
    Ok((inst, space))
}

type ConParts = (String, Vec<String>, Vec<Vec<String>>);

fn parse_con(no: usize, rest: &str) -> Result<ConParts, ParseError> {
    let rest = rest.trim();
    let open = rest
        .find('(')
        .ok_or_else(|| err(no, "expected `con <label>(<vars>): <tuples>`"))?;
    let label = rest[..open].trim();
    if !is_name(label) {
        return Err(err(no, format!("invalid constraint label `{label}`")));
    }
    let close = rest[open..]
        .find(')')
        .map(|i| i + open)
        .ok_or_else(|| err(no, format!("constraint `{label}`: unterminated scope")))?;
    let scope = split_list(&rest[open + 1..close]);
    let body = rest[close + 1..]
        .trim_start()
        .strip_prefix(':')
        .ok_or_else(|| err(no, format!("constraint `{label}`: expected `:` after the scope")))?;

    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rows = Vec::new();
    let mut s = compact.as_str();
    while !s.is_empty() {
        let inner = s
            .strip_prefix('(')
            .ok_or_else(|| err(no, format!("constraint `{label}`: expected `(` in tuple list")))?;
        let end = inner
            .find(')')
            .ok_or_else(|| err(no, format!("constraint `{label}`: unterminated tuple")))?;
        rows.push(split_list(&inner[..end]));
        s = &inner[end + 1..];
    }
    Ok((label.to_string(), scope, rows))
}

fn split_list(s: &str) -> Vec<String> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    s.split(',').map(|p| p.trim().to_string()).collect()
}

pub fn emit_csp(inst: &CspInstance, space: &SearchSpace) -> String {
    emit_csp_annotated(inst, space, &[])
}

/// Like `emit_csp`, with `#` comment lines after the header.
pub fn emit_csp_annotated(inst: &CspInstance, space: &SearchSpace, comments: &[String]) -> String {
    let mut out = String::from("csp 1\n");
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "vars: {}", inst.var_names().join(" "));
    let _ = writeln!(out, "domain: {}", inst.domain_names().join(" "));
    for x in inst.variables() {
        let act = space.active(x);
        if act.len() != inst.domain_size() {
            let names: Vec<&str> = act.iter().map(|&a| inst.val_name(a)).collect();
            let _ = writeln!(out, "active: {} = {}", inst.var_name(x), names.join(" "));
        }
    }
    for c in inst.constraints() {
        let scope: Vec<&str> = c.scope().iter().map(|&x| inst.var_name(x)).collect();
        let _ = write!(out, "con {}({}):", c.label(), scope.join(","));
        for row in c.relation().iter() {
            let vals: Vec<&str> = row.iter().map(|&a| inst.val_name(a)).collect();
            let _ = write!(out, " ({})", vals.join(","));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "csp 1\n# two variables\nvars: x y\ndomain: 0 1 2\nactive: x = 1 2\ncon le(x, y): (0,0) (0,1) ( 1 , 1 )\ncon never(y):\n";

    #[test]
    fn parses_small_file() {
        let (inst, space) = parse_csp(SMALL).unwrap();
        assert_eq!(inst.num_vars(), 2);
        assert_eq!(inst.constraints().len(), 2);
        assert_eq!(inst.constraints()[0].relation().len(), 3);
        assert!(inst.constraints()[1].relation().is_empty());
        assert_eq!(space.active(Var(0)), &[Val(1), Val(2)]);
        assert_eq!(space.active(Var(1)).len(), 3);
    }

    #[test]
    fn round_trip() {
        let (inst, space) = parse_csp(SMALL).unwrap();
        let text = emit_csp(&inst, &space);
        assert_eq!(parse_csp(&text).unwrap(), (inst, space));
    }

    #[test]
    fn nullary_constraints() {
        let (inst, _) = parse_csp("csp 1\nvars: x\ndomain: a\ncon t(): ()\ncon f():\n").unwrap();
        assert_eq!(inst.constraints()[0].relation().len(), 1);
        assert!(inst.constraints()[1].relation().is_empty());
        let again = parse_csp(&emit_csp(&inst, &inst.full_space())).unwrap().0;
        assert_eq!(again, inst);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_csp("csp 1\nvars: x y\ndomain: 0 1\ncon c(x,y): (0,1) (1)\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("`c`"), "{e}");
        let e = parse_csp("csp 1\nvars: x\ndomain: 0 1\n\ncon c(z): (0)\n").unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.message.contains("unknown variable"));
        let e = parse_csp("csp 1\nvars: x\ndomain: 0 1\ncon c(x): (7)\n").unwrap_err();
        assert!(e.message.contains("not in the domain"));
        let e = parse_csp("csp 1\nvars: x\ndomain: 0 1\nactive: x =\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(parse_csp("csp 2\n").is_err());
        assert!(parse_csp("csp 1\nvars: x x\ndomain: 0\n").is_err());
    }
}
