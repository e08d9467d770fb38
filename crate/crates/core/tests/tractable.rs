use csprops::boolean::{
    classify_schaefer, sat_restricted, tract_check, AffineEquation, BooleanFormula, Lit, SchaeferClass, TractableError,
    TRUE,
};
use csprops::crosscheck::tractable_exactness;
use csprops::instances::{gen_boolean, BoolSpec};
use csprops::{Oracle, PropertyQuery, Var};
use proptest::prelude::*;

fn class_strategy() -> impl Strategy<Value = SchaeferClass> {
    prop::sample::select(SchaeferClass::TRACTABLE.to_vec())
}

#[test]
fn corpus_mixes_satisfiable_and_unsatisfiable() {
    for cls in SchaeferClass::TRACTABLE {
        let sat = (1..=500)
            .filter(|&s| {
                let f = gen_boolean(&BoolSpec::corpus(cls, s)).unwrap();
                sat_restricted(&f, cls).unwrap().is_some()
            })
            .count();
        assert!(sat > 50 && sat < 500, "{cls}: {sat} of 500 satisfiable");
    }
}

#[test]
fn horn_pair_properties() {
    let mut f = BooleanFormula::new(2);
    f.add_clause(vec![Lit::pos(0)]);
    f.add_clause(vec![Lit::neg(0), Lit::pos(1)]);
    assert_eq!(classify_schaefer(&f).primary, SchaeferClass::Horn);
    for v in 0..2 {
        let q = PropertyQuery::Implied { var: Var(v), value: TRUE };
        assert!(tract_check(&f, SchaeferClass::Horn, &q).unwrap());
    }
    assert!(tractable_exactness(&f, SchaeferClass::Horn).unwrap().is_clean());
}

#[test]
fn affine_chain() {
    // x1 ⊕ x2 = 1, x2 ⊕ x3 = 0: x1 determines the rest
    let mut f = BooleanFormula::new(3);
    f.add_equation(AffineEquation::new(vec![0, 1], true));
    f.add_equation(AffineEquation::new(vec![1, 2], false));
    let inst = f.to_csp().unwrap();
    let space = inst.full_space();
    assert_eq!(Oracle::new(&inst, &space).unwrap().solution_count(), 2);
    assert!(tract_check(&f, SchaeferClass::Affine, &PropertyQuery::Determined { var: Var(2) }).unwrap());
    assert!(tractable_exactness(&f, SchaeferClass::Affine).unwrap().is_clean());
}

#[test]
fn class_mismatch() {
    let mut f = BooleanFormula::new(3);
    f.add_clause(vec![Lit::pos(0), Lit::pos(1), Lit::neg(2)]);
    f.add_clause(vec![Lit::neg(0), Lit::neg(1), Lit::pos(2)]);
    for cls in SchaeferClass::TRACTABLE {
        assert_eq!(
            tract_check(&f, cls, &PropertyQuery::Determined { var: Var(0) }),
            Err(TractableError::ClassMismatch(cls))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn tractable_checks_are_exact(cls in class_strategy(), seed in any::<u64>(), vars in 1usize..=8, cons in 0usize..=14, width in 1usize..=4) {
        let f = gen_boolean(&BoolSpec { class: cls, vars, constraints: cons, max_width: width, seed }).unwrap();
        let t = tractable_exactness(&f, cls).unwrap();
        prop_assert!(t.is_clean(), "{:?}", t.violations);
    }

    #[test]
    fn restricted_satisfiability_matches_enumeration(cls in class_strategy(), seed in any::<u64>(), vars in 1usize..=10, cons in 0usize..=20) {
        let f = gen_boolean(&BoolSpec { class: cls, vars, constraints: cons, max_width: 3, seed }).unwrap();
        let model = sat_restricted(&f, cls).unwrap();
        let inst = f.to_csp().unwrap();
        let sat = Oracle::new(&inst, &inst.full_space()).unwrap().is_satisfiable();
        prop_assert_eq!(model.is_some(), sat);
        if let Some(m) = model {
            prop_assert!(f.eval(&m));
        }
    }

    #[test]
    fn generated_formulas_classify_into_their_class(cls in class_strategy(), seed in any::<u64>()) {
        let f = gen_boolean(&BoolSpec::corpus(cls, seed)).unwrap();
        prop_assert!(classify_schaefer(&f).contains(cls));
    }
}
