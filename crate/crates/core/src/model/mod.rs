//! The extensional CSP data model: variables, a shared ordered domain,
//! constraints given as explicit tuple sets, tuples over variable sets and
//! search spaces of active values.

mod relation;
mod space;
mod tuple;

pub use relation::{Constraint, Relation, Selection};
pub use space::{SearchSpace, SpaceIter};
pub use tuple::{Assignment, Tuple};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a variable in its instance, in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

/// Index of a value in the shared domain, in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Val(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Val {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Var {
    fn from(i: usize) -> Self {
        Var(i as u32)
    }
}

impl From<usize> for Val {
    fn from(i: usize) -> Self {
        Val(i as u32)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate value `{0}`")]
    DuplicateValue(String),
    #[error("the domain must contain at least one value")]
    EmptyDomain,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown value `{0}`")]
    UnknownValue(String),
    #[error("variable index {0} is out of range")]
    VariableOutOfRange(u32),
    #[error("value index {0} is out of range")]
    ValueOutOfRange(u32),
    #[error("variable {0:?} is not bound by the tuple")]
    Unbound(Var),
    #[error("variable {0:?} is not in the scope")]
    NotInScope(Var),
    #[error("variable {0:?} appears twice in a scope")]
    RepeatedScopeVariable(Var),
    #[error("tuple of length {found} in a relation of arity {arity}")]
    ArityMismatch { arity: usize, found: usize },
    #[error("constraint `{label}` has scope of length {scope} but relation arity {arity}")]
    ScopeArity {
        label: String,
        scope: usize,
        arity: usize,
    },
    #[error("active set of variable {0:?} is empty")]
    EmptyActiveSet(Var),
    #[error("search space covers {found} variables, the instance has {expected}")]
    SpaceShape { expected: usize, found: usize },
}

/// Largest relation for which a dense membership bitmap is kept.
const DENSE_LIMIT: usize = 1 << 22;

/// Membership bitmap over the mixed-radix encoding of `D^arity`.
#[derive(Clone, Debug)]
struct DenseTable {
    bits: Vec<u64>,
}

impl DenseTable {
    fn build(relation: &Relation, domain_size: usize) -> Option<Self> {
        let cells = domain_size.checked_pow(relation.arity() as u32)?;
        if cells > DENSE_LIMIT {
            return None;
        }
        let mut bits = vec![0u64; cells.div_ceil(64).max(1)];
        for row in relation.iter() {
            let code = row
                .iter()
                .fold(0usize, |acc, v| acc * domain_size + v.index());
            bits[code / 64] |= 1 << (code % 64);
        }
        Some(DenseTable { bits })
    }

    #[inline]
    fn contains(&self, code: usize) -> bool {
        self.bits[code / 64] >> (code % 64) & 1 == 1
    }
}

/// A CSP `<X, D, C>` with a single shared domain and extensional constraints.
#[derive(Clone, Debug)]
pub struct CspInstance {
    variables: Vec<String>,
    domain: Vec<String>,
    constraints: Vec<Constraint>,
    var_index: HashMap<String, Var>,
    val_index: HashMap<String, Val>,
    tables: Vec<Option<DenseTable>>,
}

impl PartialEq for CspInstance {
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables
            && self.domain == other.domain
            && self.constraints == other.constraints
    }
}

impl Eq for CspInstance {}

impl CspInstance {
    pub fn new(
        variables: Vec<String>,
        domain: Vec<String>,
        constraints: Vec<Constraint>,
    ) -> Result<Self, ModelError> {
        if domain.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        let mut var_index = HashMap::with_capacity(variables.len());
        for (i, name) in variables.iter().enumerate() {
            if var_index.insert(name.clone(), Var::from(i)).is_some() {
                return Err(ModelError::DuplicateVariable(name.clone()));
            }
        }
        let mut val_index = HashMap::with_capacity(domain.len());
        for (i, name) in domain.iter().enumerate() {
            if val_index.insert(name.clone(), Val::from(i)).is_some() {
                return Err(ModelError::DuplicateValue(name.clone()));
            }
        }
        for c in &constraints {
            for &x in c.scope() {
                if x.index() >= variables.len() {
                    return Err(ModelError::VariableOutOfRange(x.0));
                }
            }
            for row in c.relation().iter() {
                if let Some(v) = row.iter().find(|v| v.index() >= domain.len()) {
                    return Err(ModelError::ValueOutOfRange(v.0));
                }
            }
        }
        let tables = constraints
            .iter()
            .map(|c| DenseTable::build(c.relation(), domain.len()))
            .collect();
        Ok(CspInstance {
            variables,
            domain,
            constraints,
            var_index,
            val_index,
            tables,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_names<S: AsRef<str>>(
        variables: &[S],
        domain: &[S],
        constraints: Vec<Constraint>,
    ) -> Result<Self, ModelError> {
        Self::new(
            variables.iter().map(|s| s.as_ref().to_string()).collect(),
            domain.iter().map(|s| s.as_ref().to_string()).collect(),
            constraints,
        )
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn variables(&self) -> impl ExactSizeIterator<Item = Var> + '_ {
        (0..self.variables.len()).map(Var::from)
    }

    pub fn values(&self) -> impl ExactSizeIterator<Item = Val> + '_ {
        (0..self.domain.len()).map(Val::from)
    }

    pub fn var_names(&self) -> &[String] {
        &self.variables
    }

    pub fn domain_names(&self) -> &[String] {
        &self.domain
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn var_name(&self, x: Var) -> &str {
        &self.variables[x.index()]
    }

    pub fn val_name(&self, a: Val) -> &str {
        &self.domain[a.index()]
    }

    pub fn var(&self, name: &str) -> Result<Var, ModelError> {
        self.var_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownVariable(name.to_string()))
    }

    pub fn val(&self, name: &str) -> Result<Val, ModelError> {
        self.val_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownValue(name.to_string()))
    }

    pub fn check_var(&self, x: Var) -> Result<(), ModelError> {
        if x.index() < self.variables.len() {
            Ok(())
        } else {
            Err(ModelError::VariableOutOfRange(x.0))
        }
    }

    pub fn check_val(&self, a: Val) -> Result<(), ModelError> {
        if a.index() < self.domain.len() {
            Ok(())
        } else {
            Err(ModelError::ValueOutOfRange(a.0))
        }
    }

    /// The full search space `S_D`.
    pub fn full_space(&self) -> SearchSpace {
        SearchSpace::full(self.num_vars(), self.domain_size())
    }

    /// Whether the dense assignment satisfies constraint `ci`.
    #[inline]
    pub fn satisfies_constraint(&self, ci: usize, t: &[Val]) -> bool {
        let c = &self.constraints[ci];
        match &self.tables[ci] {
            Some(table) => {
                let d = self.domain.len();
                let code = c
                    .scope()
                    .iter()
                    .fold(0usize, |acc, x| acc * d + t[x.index()].index());
                table.contains(code)
            }
            None => c.holds_on(t),
        }
    }

    /// Membership of a dense X-tuple in `Sol(C)`.
    pub fn is_solution(&self, t: &[Val]) -> bool {
        (0..self.constraints.len()).all(|ci| self.satisfies_constraint(ci, t))
    }

    /// Same instance with a different constraint list.
    pub fn with_constraints(&self, constraints: Vec<Constraint>) -> Result<Self, ModelError> {
        Self::new(self.variables.clone(), self.domain.clone(), constraints)
    }

    pub fn display_assignment(&self, t: &[Val]) -> String {
        let parts: Vec<String> = t
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}={}", self.variables[i], self.domain[v.index()]))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// `t[x := a]` on a general tuple.
pub fn tuple_assign(t: &Tuple, x: Var, a: Val) -> Result<Tuple, ModelError> {
    t.assign(x, a)
}

/// `t|_U`.
pub fn tuple_restrict(t: &Tuple, vars: &[Var]) -> Result<Tuple, ModelError> {
    t.restrict(vars)
}

/// Whether `t|_{scope(c)}` belongs to the relation of `c`.
pub fn satisfies(t: &Tuple, c: &Constraint) -> Result<bool, ModelError> {
    let row = c
        .scope()
        .iter()
        .map(|&x| t.get(x).ok_or(ModelError::Unbound(x)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(c.relation().contains(&row))
}

/// Lexicographic enumeration of `S`.
pub fn enumerate_space(space: &SearchSpace) -> SpaceIter<'_> {
    space.iter()
}

impl fmt::Display for CspInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CSP with {} variables, {} values, {} constraints",
            self.num_vars(),
            self.domain_size(),
            self.constraints.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(v: &[u32]) -> Vec<Val> {
        v.iter().map(|&i| Val(i)).collect()
    }

    #[test]
    fn rejects_duplicates_and_empty_domain() {
        assert_eq!(
            CspInstance::from_names(&["x", "x"], &["0"], vec![]),
            Err(ModelError::DuplicateVariable("x".into()))
        );
        assert_eq!(
            CspInstance::from_names::<&str>(&["x"], &[], vec![]),
            Err(ModelError::EmptyDomain)
        );
    }

    #[test]
    fn rejects_out_of_range_scope() {
        let c = Constraint::new("c", vec![Var(3)], Relation::new(1, vec![vals(&[0])]).unwrap())
            .unwrap();
        assert!(matches!(
            CspInstance::from_names(&["x"], &["0"], vec![c]),
            Err(ModelError::VariableOutOfRange(3))
        ));
    }

    #[test]
    fn dense_and_sparse_membership_agree() {
        let rel = Relation::new(2, vec![vals(&[0, 1]), vals(&[2, 2])]).unwrap();
        let c = Constraint::new("c", vec![Var(1), Var(0)], rel).unwrap();
        let inst = CspInstance::from_names(&["a", "b"], &["0", "1", "2"], vec![c]).unwrap();
        for t in inst.full_space().iter() {
            assert_eq!(
                inst.satisfies_constraint(0, &t),
                inst.constraints()[0].holds_on(&t)
            );
        }
        assert!(inst.is_solution(&vals(&[1, 0])));
        assert!(!inst.is_solution(&vals(&[0, 1])));
    }
}
