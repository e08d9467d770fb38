use thiserror::Error;

use super::{BooleanFormula, ClosedLanguage, SchaeferClass, TRUE};
use crate::model::Val;
use crate::query::{PropertyKind, PropertyQuery};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TractableError {
    #[error("formula is not in the {0} class")]
    ClassMismatch(SchaeferClass),
    #[error("no polynomial procedure for {0}")]
    Unsupported(PropertyKind),
    #[error("value index {0} is not boolean")]
    NotBoolean(u32),
    #[error("variable index {0} is out of range")]
    UnknownVariable(u32),
}

fn as_bool(v: Val) -> Result<bool, TractableError> {
    match v.0 {
        0 | 1 => Ok(v == TRUE),
        other => Err(TractableError::NotBoolean(other)),
    }
}

/// Exact verdict for `query` on a formula in `cls`, by reduction to
/// polynomially many satisfiability checks within the class.
pub fn tract_check(
    f: &BooleanFormula,
    cls: SchaeferClass,
    query: &PropertyQuery,
) -> Result<bool, TractableError> {
    let cs = f.constraints();
    if cls == SchaeferClass::Unrestricted || !cls.admits_all(&cs) {
        return Err(TractableError::ClassMismatch(cls));
    }
    if query.kind() == PropertyKind::Dependent {
        return Err(TractableError::Unsupported(PropertyKind::Dependent));
    }
    let x = query.var();
    if x.index() >= f.num_vars() {
        return Err(TractableError::UnknownVariable(x.0));
    }
    let n = f.num_vars();
    let x = x.index();
    Ok(match *query {
        PropertyQuery::Inconsistent { value, .. } => cls.inconsistent(n, &cs, x, as_bool(value)?),
        PropertyQuery::Implied { value, .. } => cls.inconsistent(n, &cs, x, !as_bool(value)?),
        PropertyQuery::Substitutable { from, to, .. } => {
            cls.substitutable(n, &cs, x, as_bool(from)?, as_bool(to)?)
        }
        PropertyQuery::Interchangeable { a, b, .. } => {
            let (a, b) = (as_bool(a)?, as_bool(b)?);
            cls.substitutable(n, &cs, x, a, b) && cls.substitutable(n, &cs, x, b, a)
        }
        PropertyQuery::Fixable { value, .. } => cls.fixable(n, &cs, x, as_bool(value)?),
        PropertyQuery::Irrelevant { .. } => cls.irrelevant(n, &cs, x),
        PropertyQuery::Determined { .. } => cls.determined(n, &cs, x),
        PropertyQuery::Removable { value, .. } => {
            let v = as_bool(value)?;
            cls.substitutable(n, &cs, x, v, !v)
        }
        PropertyQuery::Dependent { .. } => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{Lit, FALSE};
    use crate::model::Var;

    // (x) ∧ (¬x ∨ y)
    fn horn_pair() -> BooleanFormula {
        let mut f = BooleanFormula::with_names(vec!["x".into(), "y".into()]);
        f.add_clause(vec![Lit::pos(0)]);
        f.add_clause(vec![Lit::neg(0), Lit::pos(1)]);
        f
    }

    #[test]
    fn implied_values_of_the_horn_pair() {
        let f = horn_pair();
        for v in [0, 1] {
            let q = PropertyQuery::Implied {
                var: Var(v),
                value: TRUE,
            };
            assert!(tract_check(&f, SchaeferClass::Horn, &q).unwrap());
            let q = PropertyQuery::Implied {
                var: Var(v),
                value: FALSE,
            };
            assert!(!tract_check(&f, SchaeferClass::Horn, &q).unwrap());
        }
        let q = PropertyQuery::Determined { var: Var(1) };
        assert!(tract_check(&f, SchaeferClass::Horn, &q).unwrap());
    }

    #[test]
    fn identity_substitution_always_holds() {
        let f = horn_pair();
        for v in [FALSE, TRUE] {
            let q = PropertyQuery::Substitutable {
                var: Var(0),
                from: v,
                to: v,
            };
            assert!(tract_check(&f, SchaeferClass::Horn, &q).unwrap());
        }
    }

    #[test]
    fn dependence_is_unsupported() {
        let q = PropertyQuery::Dependent {
            on: vec![Var(0)],
            target: Var(1),
        };
        assert_eq!(
            tract_check(&horn_pair(), SchaeferClass::Horn, &q),
            Err(TractableError::Unsupported(PropertyKind::Dependent))
        );
    }

    #[test]
    fn wrong_class_is_rejected() {
        let q = PropertyQuery::Determined { var: Var(0) };
        assert_eq!(
            tract_check(&horn_pair(), SchaeferClass::Affine, &q),
            Err(TractableError::ClassMismatch(SchaeferClass::Affine))
        );
    }
}
