//! Boolean formulas in the four Schaefer classes and exact polynomial
//! property detection for them.

mod classify;
mod closure;
mod solve;
mod tract;

pub use classify::{classify_schaefer, Classification, SchaeferClass};
pub use closure::{complement_conjunction, instantiate_project, ClosedLanguage, Conjunction};
pub use solve::{sat_restricted, solve_affine, solve_dual_horn, solve_horn, solve_two_cnf};
pub use tract::{tract_check, TractableError};

use std::fmt;

use crate::model::{Constraint, CspInstance, ModelError, Relation, Val, Var};

pub const FALSE: Val = Val(0);
pub const TRUE: Val = Val(1);

pub fn bool_val(b: bool) -> Val {
    if b {
        TRUE
    } else {
        FALSE
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    /// From a DIMACS-style signed, 1-based integer.
    pub fn from_dimacs(code: i64) -> Self {
        Lit {
            var: code.unsigned_abs() as usize - 1,
            positive: code > 0,
        }
    }

    pub fn negated(self) -> Self {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

/// A disjunction of literals. Literals are sorted and distinct; the empty
/// clause is the false marker.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Normalizes the literal list; `None` for a tautology.
    pub fn new(mut lits: Vec<Lit>) -> Option<Clause> {
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var == w[1].var) {
            return None;
        }
        Some(Clause { lits })
    }

    pub fn falsum() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn unit(lit: Lit) -> Clause {
        Clause { lits: vec![lit] }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.lits.iter().filter(|l| l.positive).count()
    }

    pub fn negatives(&self) -> usize {
        self.lits.len() - self.positives()
    }

    pub fn lit_of(&self, var: usize) -> Option<Lit> {
        self.lits.iter().copied().find(|l| l.var == var)
    }

    pub fn eval(&self, model: &[bool]) -> bool {
        self.lits.iter().any(|l| l.satisfied_by(model[l.var]))
    }
}

/// `x_1 ⊕ … ⊕ x_k = parity`. An empty variable set is a constant: `0 = 1`
/// is the false marker.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineEquation {
    vars: Vec<usize>,
    parity: bool,
}

impl AffineEquation {
    /// Repeated variables cancel in pairs.
    pub fn new(mut vars: Vec<usize>, parity: bool) -> AffineEquation {
        vars.sort_unstable();
        let mut reduced: Vec<usize> = Vec::with_capacity(vars.len());
        for v in vars {
            if reduced.last() == Some(&v) {
                reduced.pop();
            } else {
                reduced.push(v);
            }
        }
        AffineEquation {
            vars: reduced,
            parity,
        }
    }

    pub fn falsum() -> AffineEquation {
        AffineEquation {
            vars: Vec::new(),
            parity: true,
        }
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn parity(&self) -> bool {
        self.parity
    }

    pub fn is_false(&self) -> bool {
        self.vars.is_empty() && self.parity
    }

    pub fn is_trivial(&self) -> bool {
        self.vars.is_empty() && !self.parity
    }

    pub fn eval(&self, model: &[bool]) -> bool {
        self.vars.iter().fold(false, |acc, &v| acc ^ model[v]) == self.parity
    }
}

/// One constraint of a boolean formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoolConstraint {
    Clause(Clause),
    Equation(AffineEquation),
}

impl BoolConstraint {
    pub fn eval(&self, model: &[bool]) -> bool {
        match self {
            BoolConstraint::Clause(c) => c.eval(model),
            BoolConstraint::Equation(e) => e.eval(model),
        }
    }

    pub fn vars(&self) -> Vec<usize> {
        match self {
            BoolConstraint::Clause(c) => c.lits().iter().map(|l| l.var).collect(),
            BoolConstraint::Equation(e) => e.vars().to_vec(),
        }
    }

    pub fn is_false(&self) -> bool {
        match self {
            BoolConstraint::Clause(c) => c.is_empty(),
            BoolConstraint::Equation(e) => e.is_false(),
        }
    }
}

/// A conjunction of clauses and affine equations over named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BooleanFormula {
    names: Vec<String>,
    clauses: Vec<Clause>,
    equations: Vec<AffineEquation>,
}

impl BooleanFormula {
    /// Variables named `v1..vn`.
    pub fn new(num_vars: usize) -> Self {
        Self::with_names((1..=num_vars).map(|i| format!("v{i}")).collect())
    }

    pub fn with_names(names: Vec<String>) -> Self {
        BooleanFormula {
            names,
            clauses: Vec::new(),
            equations: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn rename(&mut self, var: usize, name: impl Into<String>) {
        self.names[var] = name.into();
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn equations(&self) -> &[AffineEquation] {
        &self.equations
    }

    pub fn is_clausal(&self) -> bool {
        self.equations.is_empty()
    }

    /// Adds a clause; tautologies are dropped and reported as `false`.
    pub fn add_clause(&mut self, lits: Vec<Lit>) -> bool {
        match Clause::new(lits) {
            Some(c) => {
                self.clauses.push(c);
                true
            }
            None => false,
        }
    }

    /// Adds an equation; `0 = 0` is dropped.
    pub fn add_equation(&mut self, eq: AffineEquation) {
        if !eq.is_trivial() {
            self.equations.push(eq);
        }
    }

    pub fn push(&mut self, c: BoolConstraint) {
        match c {
            BoolConstraint::Clause(c) => self.clauses.push(c),
            BoolConstraint::Equation(e) => self.add_equation(e),
        }
    }

    /// All constraints, clauses first.
    pub fn constraints(&self) -> Vec<BoolConstraint> {
        self.clauses
            .iter()
            .cloned()
            .map(BoolConstraint::Clause)
            .chain(self.equations.iter().cloned().map(BoolConstraint::Equation))
            .collect()
    }

    pub fn eval(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.eval(model)) && self.equations.iter().all(|e| e.eval(model))
    }

    /// The extensional encoding over the domain `false true`: one
    /// constraint per clause or equation, scoped on its variables in
    /// ascending order. The false marker becomes a nullary empty relation.
    pub fn to_csp(&self) -> Result<CspInstance, ModelError> {
        let mut constraints = Vec::new();
        for (i, c) in self.clauses.iter().enumerate() {
            let vars: Vec<usize> = c.lits().iter().map(|l| l.var).collect();
            let rel = Relation::from_predicate(vars.len(), 2, |row| {
                c.lits()
                    .iter()
                    .zip(row)
                    .any(|(l, v)| l.satisfied_by(*v == TRUE))
            });
            constraints.push(Constraint::new(
                format!("c{}", i + 1),
                vars.into_iter().map(Var::from).collect(),
                rel,
            )?);
        }
        for (i, e) in self.equations.iter().enumerate() {
            let rel = Relation::from_predicate(e.vars().len(), 2, |row| {
                row.iter().filter(|v| **v == TRUE).count() % 2 == usize::from(e.parity())
            });
            constraints.push(Constraint::new(
                format!("e{}", i + 1),
                e.vars().iter().copied().map(Var::from).collect(),
                rel,
            )?);
        }
        CspInstance::new(
            self.names.clone(),
            vec!["false".to_string(), "true".to_string()],
            constraints,
        )
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var as i64 + 1)
        } else {
            write!(f, "-{}", self.var + 1)
        }
    }
}
