//! Sound, incomplete detection by reasoning on subsets of the constraints.
//!
//! A covering splits the constraint set into subsets whose union is the
//! whole set. Each property is decided exactly on every subproblem (the
//! full variable set with only that subset's constraints) and the results
//! are combined: conjunctively for fixability, substitutability,
//! interchangeability and irrelevance, disjunctively for inconsistency,
//! implication, determinacy and dependence. Removability has no sound
//! combinator and is rejected.

use std::collections::HashMap;

use thiserror::Error;

use crate::boolean::BooleanFormula;
use crate::model::{Constraint, CspInstance, SearchSpace, Val, Var};
use crate::oracle::{Oracle, OracleError};
use crate::query::{PropertyKind, PropertyQuery};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("local reasoning is not sound for removability: a value removable from every constraint separately need not be removable from their conjunction")]
    UnsoundLocalCheck,
    #[error("invalid covering: {0}")]
    InvalidCovering(String),
    #[error("group size must be at least 1")]
    ZeroGroupSize,
    #[error("the pure value rule needs a clausal formula")]
    NotClausal,
    #[error("variable index {0} is out of range")]
    UnknownVariable(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Subsets `C_1..C_k` of constraint indices with `∪ C_i = C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covering {
    subsets: Vec<Vec<usize>>,
}

impl Covering {
    /// Overlapping subsets are allowed; every subset must be nonempty and
    /// every constraint covered.
    pub fn new(inst: &CspInstance, subsets: Vec<Vec<usize>>) -> Result<Self, LocalError> {
        let m = inst.constraints().len();
        let mut covered = vec![false; m];
        for s in &subsets {
            if s.is_empty() {
                return Err(LocalError::InvalidCovering("empty subset".into()));
            }
            for &ci in s {
                if ci >= m {
                    return Err(LocalError::InvalidCovering(format!(
                        "constraint index {ci} out of range"
                    )));
                }
                covered[ci] = true;
            }
        }
        if let Some(ci) = covered.iter().position(|c| !c) {
            return Err(LocalError::InvalidCovering(format!(
                "constraint `{}` is not covered",
                inst.constraints()[ci].label()
            )));
        }
        Ok(Covering { subsets })
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }
}

/// Consecutive groups of at most `group_size` constraints.
pub fn default_covering(inst: &CspInstance, group_size: usize) -> Result<Covering, LocalError> {
    if group_size == 0 {
        return Err(LocalError::ZeroGroupSize);
    }
    let m = inst.constraints().len();
    let subsets = (0..m)
        .step_by(group_size)
        .map(|start| (start..(start + group_size).min(m)).collect())
        .collect();
    Ok(Covering { subsets })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combinator {
    /// Established when every subset has the property.
    All,
    /// Established when some subset has the property.
    Any,
}

pub fn combinator(kind: PropertyKind) -> Option<Combinator> {
    match kind {
        PropertyKind::Fixable
        | PropertyKind::Substitutable
        | PropertyKind::Interchangeable
        | PropertyKind::Irrelevant => Some(Combinator::All),
        PropertyKind::Inconsistent
        | PropertyKind::Implied
        | PropertyKind::Determined
        | PropertyKind::Dependent => Some(Combinator::Any),
        PropertyKind::Removable => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalVerdict {
    pub query: PropertyQuery,
    /// Never a refutation: `false` means unknown.
    pub established: bool,
    pub per_subset: Vec<bool>,
}

pub fn local_check(
    inst: &CspInstance,
    space: &SearchSpace,
    covering: &Covering,
    query: &PropertyQuery,
) -> Result<LocalVerdict, LocalError> {
    let comb = combinator(query.kind()).ok_or(LocalError::UnsoundLocalCheck)?;
    validate_query(inst, space, query)?;
    let per_subset = covering
        .subsets()
        .iter()
        .map(|subset| match subset.as_slice() {
            [ci] => Ok(singleton_holds(&inst.constraints()[*ci], space, query)),
            _ => subproblem_check(inst, space, subset, query),
        })
        .collect::<Result<Vec<bool>, LocalError>>()?;
    let established = match comb {
        Combinator::All => per_subset.iter().all(|&b| b),
        Combinator::Any => per_subset.iter().any(|&b| b),
    };
    Ok(LocalVerdict {
        query: query.clone(),
        established,
        per_subset,
    })
}

fn validate_query(
    inst: &CspInstance,
    space: &SearchSpace,
    query: &PropertyQuery,
) -> Result<(), LocalError> {
    space.validate(inst).map_err(OracleError::from)?;
    for x in query.vars() {
        inst.check_var(x).map_err(OracleError::from)?;
    }
    let x = query.var();
    for a in query.values() {
        if !space.contains(x, a) {
            return Err(OracleError::ValueNotActive { var: x, value: a }.into());
        }
    }
    if let PropertyQuery::Dependent { on, target } = query {
        if on.contains(target) {
            return Err(OracleError::TargetInVarSet(*target).into());
        }
    }
    Ok(())
}

/// Exact verdict on the subproblem made of the constraints in `subset`.
/// Accepts every kind, removability included; variables outside the
/// subset's scopes and the query are unconstrained and are projected away.
pub fn subproblem_check(
    inst: &CspInstance,
    space: &SearchSpace,
    subset: &[usize],
    query: &PropertyQuery,
) -> Result<bool, LocalError> {
    let mut keep: Vec<Var> = subset
        .iter()
        .flat_map(|&ci| inst.constraints()[ci].scope().iter().copied())
        .chain(query.vars())
        .collect();
    keep.sort_unstable();
    keep.dedup();
    let rename: HashMap<Var, Var> = keep
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, Var::from(i)))
        .collect();
    let constraints = subset
        .iter()
        .map(|&ci| {
            let c = &inst.constraints()[ci];
            Constraint::new(
                c.label(),
                c.scope().iter().map(|x| rename[x]).collect(),
                c.relation().clone(),
            )
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(OracleError::from)?;
    let sub = CspInstance::new(
        keep.iter().map(|&x| inst.var_name(x).to_string()).collect(),
        inst.domain_names().to_vec(),
        constraints,
    )
    .map_err(OracleError::from)?;
    let sub_space = SearchSpace::new(keep.iter().map(|&x| space.active(x).to_vec()).collect())
        .map_err(OracleError::from)?;
    let q = rename_query(query, &rename);
    Ok(Oracle::new(&sub, &sub_space)?.check(&q)?.holds)
}

fn rename_query(q: &PropertyQuery, rename: &HashMap<Var, Var>) -> PropertyQuery {
    let r = |x: &Var| rename[x];
    match q {
        PropertyQuery::Fixable { var, value } => PropertyQuery::Fixable {
            var: r(var),
            value: *value,
        },
        PropertyQuery::Substitutable { var, from, to } => PropertyQuery::Substitutable {
            var: r(var),
            from: *from,
            to: *to,
        },
        PropertyQuery::Interchangeable { var, a, b } => PropertyQuery::Interchangeable {
            var: r(var),
            a: *a,
            b: *b,
        },
        PropertyQuery::Removable { var, value } => PropertyQuery::Removable {
            var: r(var),
            value: *value,
        },
        PropertyQuery::Inconsistent { var, value } => PropertyQuery::Inconsistent {
            var: r(var),
            value: *value,
        },
        PropertyQuery::Implied { var, value } => PropertyQuery::Implied {
            var: r(var),
            value: *value,
        },
        PropertyQuery::Determined { var } => PropertyQuery::Determined { var: r(var) },
        PropertyQuery::Dependent { on, target } => PropertyQuery::Dependent {
            on: on.iter().map(r).collect(),
            target: r(target),
        },
        PropertyQuery::Irrelevant { var } => PropertyQuery::Irrelevant { var: r(var) },
    }
}

/// Rows of `c` whose every entry is active in `space`.
fn active_rows<'c>(c: &'c Constraint, space: &SearchSpace) -> Vec<&'c [Val]> {
    c.relation()
        .iter()
        .filter(|row| {
            c.scope()
                .iter()
                .zip(row.iter())
                .all(|(&x, &a)| space.contains(x, a))
        })
        .map(|row| row.as_slice())
        .collect()
}

fn rewritten(row: &[Val], col: usize, b: Val) -> Vec<Val> {
    let mut out = row.to_vec();
    out[col] = b;
    out
}

/// Exact verdict on the single-constraint subproblem `⟨X, D, {c}⟩`, read
/// directly off the relation. Removability is answered exactly as well.
pub fn singleton_holds(c: &Constraint, space: &SearchSpace, query: &PropertyQuery) -> bool {
    let rows = active_rows(c, space);
    let rel = c.relation();
    let col = c.position(query.var());
    match *query {
        PropertyQuery::Fixable { value: b, .. } => match col {
            None => true,
            Some(i) => rows.iter().all(|r| rel.contains(&rewritten(r, i, b))),
        },
        PropertyQuery::Substitutable { from, to, .. } => substitutable_in(c, &rows, col, from, to),
        PropertyQuery::Interchangeable { a, b, .. } => {
            substitutable_in(c, &rows, col, a, b) && substitutable_in(c, &rows, col, b, a)
        }
        PropertyQuery::Removable { var, value } => match col {
            None => rows.is_empty() || space.active(var).len() > 1,
            Some(i) => rows.iter().filter(|r| r[i] == value).all(|r| {
                space
                    .active(var)
                    .iter()
                    .any(|&b| b != value && rel.contains(&rewritten(r, i, b)))
            }),
        },
        PropertyQuery::Inconsistent { value, .. } => match col {
            None => rows.is_empty(),
            Some(i) => rows.iter().all(|r| r[i] != value),
        },
        PropertyQuery::Implied { var, value } => match col {
            None => rows.is_empty() || space.active(var).len() == 1,
            Some(i) => rows.iter().all(|r| r[i] == value),
        },
        PropertyQuery::Determined { var } => match col {
            None => rows.is_empty() || space.active(var).len() == 1,
            Some(i) => rows.iter().all(|r| {
                space
                    .active(var)
                    .iter()
                    .all(|&b| b == r[i] || !rel.contains(&rewritten(r, i, b)))
            }),
        },
        PropertyQuery::Irrelevant { var } => match col {
            None => true,
            Some(i) => rows.iter().all(|r| {
                space
                    .active(var)
                    .iter()
                    .all(|&a| rel.contains(&rewritten(r, i, a)))
            }),
        },
        PropertyQuery::Dependent { ref on, target } => match col {
            None => rows.is_empty() || space.active(target).len() == 1,
            Some(yi) => {
                let key_cols: Vec<usize> = on.iter().filter_map(|&x| c.position(x)).collect();
                let mut seen: HashMap<Vec<Val>, Val> = HashMap::new();
                rows.iter().all(|r| {
                    let key = key_cols.iter().map(|&k| r[k]).collect();
                    *seen.entry(key).or_insert(r[yi]) == r[yi]
                })
            }
        },
    }
}

fn substitutable_in(c: &Constraint, rows: &[&[Val]], col: Option<usize>, a: Val, b: Val) -> bool {
    match col {
        None => true,
        Some(i) => rows
            .iter()
            .filter(|r| r[i] == a)
            .all(|r| c.relation().contains(&rewritten(r, i, b))),
    }
}

/// The pure literal rule: `Some(true)` when `¬x` occurs in no clause,
/// `Some(false)` when `x` occurs in no clause, `None` otherwise. An
/// unconstrained variable reports `Some(true)`.
pub fn pure_value_fixable(cnf: &BooleanFormula, var: usize) -> Result<Option<bool>, LocalError> {
    if !cnf.is_clausal() {
        return Err(LocalError::NotClausal);
    }
    if var >= cnf.num_vars() {
        return Err(LocalError::UnknownVariable(var));
    }
    let occurs = |positive: bool| {
        cnf.clauses()
            .iter()
            .any(|c| c.lit_of(var).is_some_and(|l| l.positive == positive))
    };
    Ok(if !occurs(false) {
        Some(true)
    } else if !occurs(true) {
        Some(false)
    } else {
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::Lit;
    use crate::model::Relation;

    fn vals(v: &[u32]) -> Vec<Val> {
        v.iter().map(|&i| Val(i)).collect()
    }

    fn five_constraints() -> CspInstance {
        let cs = (0..5)
            .map(|i| {
                Constraint::new(format!("c{i}"), vec![Var(0)], Relation::new(1, vec![vals(&[0])]).unwrap())
                    .unwrap()
            })
            .collect();
        CspInstance::from_names(&["x"], &["0", "1"], cs).unwrap()
    }

    #[test]
    fn default_covering_groups() {
        let inst = five_constraints();
        let sizes: Vec<usize> = default_covering(&inst, 2)
            .unwrap()
            .subsets()
            .iter()
            .map(Vec::len)
            .collect();
        assert_eq!(sizes, vec![2, 2, 1]);
        assert_eq!(default_covering(&inst, 5).unwrap().subsets(), &[vec![0, 1, 2, 3, 4]]);
        assert_eq!(default_covering(&inst, 0), Err(LocalError::ZeroGroupSize));
        let empty = CspInstance::from_names(&["x"], &["0"], vec![]).unwrap();
        assert!(default_covering(&empty, 1).unwrap().is_empty());
    }

    #[test]
    fn covering_must_cover() {
        let inst = five_constraints();
        assert!(Covering::new(&inst, vec![vec![0, 1], vec![2, 3]]).is_err());
        assert!(Covering::new(&inst, vec![vec![0, 1, 2], vec![2, 3, 4]]).is_ok());
        assert!(Covering::new(&inst, vec![vec![0, 1, 2, 3, 4], vec![]]).is_err());
    }

    #[test]
    fn removability_is_rejected() {
        let inst = five_constraints();
        let cov = default_covering(&inst, 1).unwrap();
        let q = PropertyQuery::Removable {
            var: Var(0),
            value: Val(1),
        };
        assert_eq!(
            local_check(&inst, &inst.full_space(), &cov, &q),
            Err(LocalError::UnsoundLocalCheck)
        );
    }

    #[test]
    fn pure_values() {
        // (x ∨ y ∨ z)(x ∨ ¬y ∨ ¬z)(y ∨ ¬z), plus a fourth, unconstrained variable
        let mut f = BooleanFormula::new(4);
        f.add_clause(vec![Lit::pos(0), Lit::pos(1), Lit::pos(2)]);
        f.add_clause(vec![Lit::pos(0), Lit::neg(1), Lit::neg(2)]);
        f.add_clause(vec![Lit::pos(1), Lit::neg(2)]);
        assert_eq!(pure_value_fixable(&f, 0), Ok(Some(true)));
        assert_eq!(pure_value_fixable(&f, 1), Ok(None));
        assert_eq!(pure_value_fixable(&f, 2), Ok(None));
        assert_eq!(pure_value_fixable(&f, 3), Ok(Some(true)));
        let mut g = BooleanFormula::new(1);
        g.add_clause(vec![Lit::pos(0)]);
        g.add_clause(vec![Lit::neg(0)]);
        assert_eq!(pure_value_fixable(&g, 0), Ok(None));
        let mut h = BooleanFormula::new(1);
        h.add_clause(vec![Lit::neg(0)]);
        assert_eq!(pure_value_fixable(&h, 0), Ok(Some(false)));
    }
}
