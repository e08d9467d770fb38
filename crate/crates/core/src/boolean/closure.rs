//! Closure under instantiation and complementation, and the reductions of
//! property checking to satisfiability that closure enables.

use super::solve::solve_in_class;
use super::{AffineEquation, BoolConstraint, Clause, SchaeferClass};

/// A conjunction of constraints; empty means true.
pub type Conjunction = Vec<BoolConstraint>;

/// A constraint language whose satisfiability is decidable and which is
/// closed under instantiate-and-project and under complementation (as a
/// conjunction).
pub trait ClosedLanguage {
    type Constraint: Clone;
    type Value: Copy + PartialEq;

    fn values(&self) -> Vec<Self::Value>;

    fn is_satisfiable(&self, num_vars: usize, constraints: &[Self::Constraint]) -> bool;

    /// `π_{X∖{x}}(σ_{x=a}(c))` as a conjunction of the language.
    fn instantiate_project(
        &self,
        c: &Self::Constraint,
        var: usize,
        value: Self::Value,
    ) -> Vec<Self::Constraint>;

    /// The complement of `c` as a conjunction of the language.
    fn complement(&self, c: &Self::Constraint) -> Vec<Self::Constraint>;

    fn instantiate_all(
        &self,
        cs: &[Self::Constraint],
        var: usize,
        value: Self::Value,
    ) -> Vec<Self::Constraint> {
        cs.iter()
            .flat_map(|c| self.instantiate_project(c, var, value))
            .collect()
    }

    fn inconsistent(
        &self,
        num_vars: usize,
        cs: &[Self::Constraint],
        var: usize,
        a: Self::Value,
    ) -> bool {
        !self.is_satisfiable(num_vars, &self.instantiate_all(cs, var, a))
    }

    /// `a` is substitutable by `b` iff, for every constraint `c` and every
    /// conjunct `d` of its instantiation at `b`, the instantiation of the
    /// whole set at `a` together with the complement of `d` is unsatisfiable.
    fn substitutable(
        &self,
        num_vars: usize,
        cs: &[Self::Constraint],
        var: usize,
        a: Self::Value,
        b: Self::Value,
    ) -> bool {
        if a == b {
            return true;
        }
        let at_a = self.instantiate_all(cs, var, a);
        for c in cs {
            for d in self.instantiate_project(c, var, b) {
                let mut probe = at_a.clone();
                probe.extend(self.complement(&d));
                if self.is_satisfiable(num_vars, &probe) {
                    return false;
                }
            }
        }
        true
    }

    fn fixable(&self, num_vars: usize, cs: &[Self::Constraint], var: usize, b: Self::Value) -> bool {
        self.values()
            .into_iter()
            .all(|a| self.substitutable(num_vars, cs, var, a, b))
    }

    fn irrelevant(&self, num_vars: usize, cs: &[Self::Constraint], var: usize) -> bool {
        self.values()
            .into_iter()
            .all(|b| self.fixable(num_vars, cs, var, b))
    }

    /// Not determined iff some pair of distinct values admits a common
    /// completion of the other variables.
    fn determined(&self, num_vars: usize, cs: &[Self::Constraint], var: usize) -> bool {
        let values = self.values();
        for (i, &a) in values.iter().enumerate() {
            for &b in &values[i + 1..] {
                let mut joint = self.instantiate_all(cs, var, a);
                joint.extend(self.instantiate_all(cs, var, b));
                if self.is_satisfiable(num_vars, &joint) {
                    return false;
                }
            }
        }
        true
    }
}

impl ClosedLanguage for SchaeferClass {
    type Constraint = BoolConstraint;
    type Value = bool;

    fn values(&self) -> Vec<bool> {
        vec![false, true]
    }

    fn is_satisfiable(&self, num_vars: usize, constraints: &[BoolConstraint]) -> bool {
        solve_in_class(*self, num_vars, constraints).is_some()
    }

    fn instantiate_project(&self, c: &BoolConstraint, var: usize, value: bool) -> Conjunction {
        instantiate_project(c, var, value)
    }

    fn complement(&self, c: &BoolConstraint) -> Conjunction {
        complement_conjunction(c)
    }
}

/// Substitutes `var := value` and drops `var`.
pub fn instantiate_project(c: &BoolConstraint, var: usize, value: bool) -> Conjunction {
    match c {
        BoolConstraint::Clause(cl) => match cl.lit_of(var) {
            None => vec![c.clone()],
            Some(l) if l.satisfied_by(value) => vec![],
            Some(_) => {
                let rest = cl.lits().iter().copied().filter(|l| l.var != var).collect();
                vec![BoolConstraint::Clause(
                    Clause::new(rest).expect("sub-clause of a non-tautology"),
                )]
            }
        },
        BoolConstraint::Equation(e) => {
            if !e.vars().contains(&var) {
                return vec![c.clone()];
            }
            let rest: Vec<usize> = e.vars().iter().copied().filter(|&v| v != var).collect();
            let folded = AffineEquation::new(rest, e.parity() ^ value);
            if folded.is_trivial() {
                vec![]
            } else {
                vec![BoolConstraint::Equation(folded)]
            }
        }
    }
}

/// `¬(l1 ∨ … ∨ lk)` as unit clauses; an equation with its parity flipped.
pub fn complement_conjunction(c: &BoolConstraint) -> Conjunction {
    match c {
        BoolConstraint::Clause(cl) => cl
            .lits()
            .iter()
            .map(|l| BoolConstraint::Clause(Clause::unit(l.negated())))
            .collect(),
        BoolConstraint::Equation(e) => {
            let flipped = AffineEquation::new(e.vars().to_vec(), !e.parity());
            if flipped.is_trivial() {
                vec![]
            } else {
                vec![BoolConstraint::Equation(flipped)]
            }
        }
    }
}
