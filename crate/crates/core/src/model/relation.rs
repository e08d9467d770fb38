use std::collections::BTreeSet;

use super::{ModelError, Val, Var};

/// A finite set of value sequences of a fixed arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Vec<Val>>,
}

impl Relation {
    pub fn new<I>(arity: usize, tuples: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = Vec<Val>>,
    {
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(ModelError::ArityMismatch {
                    arity,
                    found: t.len(),
                });
            }
            set.insert(t);
        }
        Ok(Relation { arity, tuples: set })
    }

    pub fn empty(arity: usize) -> Self {
        Relation {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    /// `D^arity` for a domain of `domain_size` values.
    pub fn full(arity: usize, domain_size: usize) -> Self {
        let mut tuples = BTreeSet::new();
        let mut row = vec![Val(0); arity];
        if domain_size == 0 && arity > 0 {
            return Relation::empty(arity);
        }
        loop {
            tuples.insert(row.clone());
            // odometer, last column fastest
            let mut i = arity;
            loop {
                if i == 0 {
                    return Relation { arity, tuples };
                }
                i -= 1;
                if row[i].index() + 1 < domain_size {
                    row[i].0 += 1;
                    break;
                }
                row[i] = Val(0);
            }
        }
    }

    /// Relation of all sequences over `domain_size` values accepted by `keep`.
    pub fn from_predicate<F>(arity: usize, domain_size: usize, mut keep: F) -> Self
    where
        F: FnMut(&[Val]) -> bool,
    {
        let full = Relation::full(arity, domain_size);
        Relation {
            arity,
            tuples: full.tuples.into_iter().filter(|t| keep(t)).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, row: &[Val]) -> bool {
        self.tuples.contains(row)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Val>> + '_ {
        self.tuples.iter()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Eq,
    Neq,
}

/// A relation attached to an ordered scope of distinct variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    label: String,
    scope: Vec<Var>,
    relation: Relation,
}

impl Constraint {
    pub fn new(
        label: impl Into<String>,
        scope: Vec<Var>,
        relation: Relation,
    ) -> Result<Self, ModelError> {
        let label = label.into();
        if scope.len() != relation.arity() {
            return Err(ModelError::ScopeArity {
                label,
                scope: scope.len(),
                arity: relation.arity(),
            });
        }
        for (i, x) in scope.iter().enumerate() {
            if scope[..i].contains(x) {
                return Err(ModelError::RepeatedScopeVariable(*x));
            }
        }
        Ok(Constraint {
            label,
            scope,
            relation,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn scope(&self) -> &[Var] {
        &self.scope
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn position(&self, x: Var) -> Option<usize> {
        self.scope.iter().position(|&y| y == x)
    }

    pub fn mentions(&self, x: Var) -> bool {
        self.scope.contains(&x)
    }

    /// Membership of the scope projection of a dense X-tuple.
    pub fn holds_on(&self, t: &[Val]) -> bool {
        let row: Vec<Val> = self.scope.iter().map(|x| t[x.index()]).collect();
        self.relation.contains(&row)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `σ_{x=a}` or `σ_{x≠a}`.
    pub fn select(&self, x: Var, a: Val, mode: Selection) -> Result<Constraint, ModelError> {
        let col = self.position(x).ok_or(ModelError::NotInScope(x))?;
        let tuples = self
            .relation
            .iter()
            .filter(|row| (row[col] == a) == (mode == Selection::Eq))
            .cloned();
        Ok(Constraint {
            label: self.label.clone(),
            scope: self.scope.clone(),
            relation: Relation::new(self.arity(), tuples)?,
        })
    }

    /// `π_U`; the resulting scope keeps this constraint's column order.
    pub fn project(&self, vars: &[Var]) -> Result<Constraint, ModelError> {
        if let Some(&x) = vars.iter().find(|x| !self.mentions(**x)) {
            return Err(ModelError::NotInScope(x));
        }
        let cols: Vec<usize> = (0..self.arity())
            .filter(|&i| vars.contains(&self.scope[i]))
            .collect();
        let scope = cols.iter().map(|&i| self.scope[i]).collect();
        let tuples = self
            .relation
            .iter()
            .map(|row| cols.iter().map(|&i| row[i]).collect::<Vec<_>>());
        Ok(Constraint {
            label: self.label.clone(),
            scope,
            relation: Relation::new(cols.len(), tuples)?,
        })
    }

    /// `D^arity` minus the relation, over the same scope.
    pub fn complement(&self, domain_size: usize) -> Constraint {
        let relation =
            Relation::from_predicate(self.arity(), domain_size, |row| !self.relation.contains(row));
        Constraint {
            label: self.label.clone(),
            scope: self.scope.clone(),
            relation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(v: &[u32]) -> Vec<Val> {
        v.iter().map(|&i| Val(i)).collect()
    }

    fn not_equal(d: usize) -> Relation {
        Relation::from_predicate(2, d, |r| r[0] != r[1])
    }

    // c2(x, z) of the value-substitutability example: x is Var(0), z is Var(2).
    fn c2() -> Constraint {
        let rel = Relation::new(2, [[1, 0], [1, 2], [2, 0], [2, 2]].iter().map(|r| row(r))).unwrap();
        Constraint::new("c2", vec![Var(0), Var(2)], rel).unwrap()
    }

    #[test]
    fn select_on_x() {
        let s = c2().select(Var(0), Val(1), Selection::Eq).unwrap();
        let rows: Vec<_> = s.relation().iter().cloned().collect();
        assert_eq!(rows, vec![row(&[1, 0]), row(&[1, 2])]);
        assert!(c2().select(Var(0), Val(0), Selection::Eq).unwrap().relation().is_empty());
        assert_eq!(
            c2().select(Var(1), Val(0), Selection::Eq),
            Err(ModelError::NotInScope(Var(1)))
        );
    }

    #[test]
    fn project_cases() {
        let p = c2().project(&[Var(2)]).unwrap();
        assert_eq!(p.scope(), &[Var(2)]);
        let rows: Vec<_> = p.relation().iter().cloned().collect();
        assert_eq!(rows, vec![row(&[0]), row(&[2])]);
        assert_eq!(c2().project(&[Var(2), Var(0)]).unwrap(), c2());
        let empty = c2().project(&[]).unwrap();
        assert_eq!(empty.relation().len(), 1);
        assert!(empty.relation().contains(&[]));
        assert!(c2().project(&[Var(1)]).is_err());
    }

    #[test]
    fn complement_of_not_equal_is_diagonal() {
        let ne = Constraint::new("ne", vec![Var(0), Var(1)], not_equal(3)).unwrap();
        let eq = ne.complement(3);
        let rows: Vec<_> = eq.relation().iter().cloned().collect();
        assert_eq!(rows, vec![row(&[0, 0]), row(&[1, 1]), row(&[2, 2])]);
        let none = Constraint::new("e", vec![Var(0)], Relation::empty(1)).unwrap();
        assert_eq!(none.complement(3).relation(), &Relation::full(1, 3));
    }

    #[test]
    fn rejects_repeated_scope_and_arity() {
        assert!(matches!(
            Constraint::new("c", vec![Var(0), Var(0)], not_equal(2)),
            Err(ModelError::RepeatedScopeVariable(Var(0)))
        ));
        assert!(Constraint::new("c", vec![Var(0)], not_equal(2)).is_err());
        assert!(Relation::new(2, vec![row(&[0])]).is_err());
    }

    fn arb_constraint() -> impl Strategy<Value = (Constraint, usize)> {
        (1usize..=4, 1usize..=3).prop_flat_map(|(d, k)| {
            let cells = d.pow(k as u32);
            (proptest::collection::vec(any::<bool>(), cells), Just(d), Just(k))
                .prop_map(|(mask, d, k)| {
                    let full: Vec<_> = Relation::full(k, d).iter().cloned().collect();
                    let rel = Relation::new(
                        k,
                        full.into_iter().zip(mask).filter(|(_, m)| *m).map(|(r, _)| r),
                    )
                    .unwrap();
                    let scope = (0..k).map(Var::from).collect();
                    (Constraint::new("r", scope, rel).unwrap(), d)
                })
        })
    }

    proptest! {
        #[test]
        fn selection_partitions((c, d) in arb_constraint(), col in 0usize..3, a in 0u32..4) {
            let x = Var::from(col % c.arity());
            let a = Val(a % d as u32);
            let eq = c.select(x, a, Selection::Eq).unwrap();
            let ne = c.select(x, a, Selection::Neq).unwrap();
            prop_assert_eq!(eq.relation().len() + ne.relation().len(), c.relation().len());
            for r in c.relation().iter() {
                prop_assert!(eq.relation().contains(r) != ne.relation().contains(r));
            }
        }

        #[test]
        fn complement_is_an_involution((c, d) in arb_constraint()) {
            prop_assert_eq!(c.complement(d).complement(d), c);
        }
    }
}
