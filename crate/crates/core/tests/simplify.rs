use csprops::boolean::{BooleanFormula, Lit};
use csprops::crosscheck::{check_formula, simplify_soundness};
use csprops::instances::{fixtures, gen_boolean, gen_random, BoolSpec, RandomSpec};
use csprops::simplify::{
    apply_fix, apply_remove, replay, simplify_fixpoint, Detector, Justification, Mode, RemoveOutcome, SimplifyConfig,
    SimplifyError,
};
use csprops::{Oracle, SearchSpace};
use proptest::prelude::*;

fn sat(inst: &csprops::CspInstance, space: &SearchSpace) -> bool {
    Oracle::new(inst, space).unwrap().is_satisfiable()
}

#[test]
fn boolean_example_fixes_x_and_y() {
    let (inst, space) = fixtures::boolean_equivalences();
    let res = simplify_fixpoint(&inst, &space, &SimplifyConfig::new(Mode::Production, None)).unwrap();
    let log = res.log(&inst);
    let fixed: Vec<&str> = log.iter().filter(|l| l.starts_with("FIX")).map(String::as_str).collect();
    assert!(fixed.iter().any(|l| l.starts_with("FIX x=true")), "{log:?}");
    assert!(fixed.iter().any(|l| l.starts_with("FIX y=true")), "{log:?}");
    assert!(res.fixpoint && !res.proved_unsatisfiable);
    assert!(sat(&inst, &res.final_space));
}

#[test]
fn unconstrained_instance_is_already_a_fixpoint() {
    let (inst, space) = gen_random(&RandomSpec { constraints: 0, ..RandomSpec::corpus(3) }).unwrap();
    let res = simplify_fixpoint(&inst, &space, &SimplifyConfig::new(Mode::Production, None)).unwrap();
    // every value is fixable, so the first variable gets fixed; restrict to detectors that never fire
    assert!(res.fixpoint);
    let quiet = SimplifyConfig::new(Mode::Production, None)
        .with_detectors(vec![Detector::LocalInconsistent, Detector::LocalImplied]);
    let res = simplify_fixpoint(&inst, &space, &quiet).unwrap();
    assert!(res.steps.is_empty() && res.fixpoint);
    assert_eq!(res.final_space, space);
}

#[test]
fn horn_pair_reduces_to_one_tuple() {
    let mut f = BooleanFormula::new(2);
    f.add_clause(vec![Lit::pos(0)]);
    f.add_clause(vec![Lit::neg(0), Lit::pos(1)]);
    let inst = f.to_csp().unwrap();
    let cfg = SimplifyConfig::new(Mode::Production, Some(f.clone())).with_detectors(vec![
        Detector::TractableImplied,
        Detector::TractableFixable,
        Detector::TractableInconsistent,
        Detector::TractableSubstitutable,
    ]);
    let res = simplify_fixpoint(&inst, &inst.full_space(), &cfg).unwrap();
    assert_eq!(res.log(&inst), vec!["FIX v1=true BY tractable-implied", "FIX v2=true BY tractable-implied"]);
    assert_eq!(res.final_space.size(), 1);
    assert!(sat(&inst, &res.final_space));
}

#[test]
fn pure_value_on_the_example_formula() {
    let f = fixtures::pure_literal_cnf();
    let inst = f.to_csp().unwrap();
    let res = simplify_fixpoint(&inst, &inst.full_space(), &SimplifyConfig::new(Mode::Production, Some(f))).unwrap();
    assert_eq!(res.log(&inst)[0], "FIX x=true BY pure-value");
    assert!(sat(&inst, &res.final_space));
}

#[test]
fn coloring_fix_and_removal() {
    let (inst, space) = fixtures::coloring();
    let x1 = inst.var("x1").unwrap();
    let fixed = apply_fix(&space, x1, inst.val("R").unwrap(), &Justification::by(Detector::OracleFixable)).unwrap();
    assert_eq!(fixed.active(x1).len(), 1);
    assert!(sat(&inst, &fixed));
    let x5 = inst.var("x5").unwrap();
    let g = inst.val("G").unwrap();
    assert!(Oracle::new(&inst, &space).unwrap().removable(x5, g).unwrap().holds);
    let RemoveOutcome::Removed(s) = apply_remove(&space, x5, g, &Justification::by(Detector::OracleRemovable)).unwrap()
    else {
        panic!("removal refused")
    };
    assert!(sat(&inst, &s));
    assert_eq!(apply_remove(&s, x5, g, &Justification::by(Detector::OracleRemovable)), Ok(RemoveOutcome::Removed(s.clone())));
}

#[test]
fn local_removability_is_refused() {
    let (inst, space) = fixtures::local_removal_trap();
    let x = inst.var("x").unwrap();
    let two = inst.val("2").unwrap();
    assert_eq!(
        apply_remove(&space, x, two, &Justification::by(Detector::LocalRemovable)),
        Err(SimplifyError::UnsoundDetector(Detector::LocalRemovable))
    );
    let bad = SimplifyConfig::new(Mode::Production, None).with_detectors(vec![Detector::LocalRemovable]);
    assert!(matches!(simplify_fixpoint(&inst, &space, &bad), Err(SimplifyError::UnsoundDetector(_))));
    let exact = SimplifyConfig::new(Mode::Production, None).with_detectors(vec![Detector::OracleRemovable]);
    assert!(matches!(simplify_fixpoint(&inst, &space, &exact), Err(SimplifyError::ExactSearchInProduction(_))));
    for mode in [Mode::Production, Mode::Test] {
        let res = simplify_fixpoint(&inst, &space, &SimplifyConfig::new(mode, None)).unwrap();
        assert!(res.final_space.contains(x, two), "{:?}", res.log(&inst));
        assert!(sat(&inst, &res.final_space));
    }
}

#[test]
fn unsatisfiable_instances_are_proved_so() {
    let (inst, space) = csprops::instances::parse_csp("csp 1\nvars: x\ndomain: 0 1\ncon never(x):\n").unwrap();
    let res = simplify_fixpoint(&inst, &space, &SimplifyConfig::new(Mode::Production, None)).unwrap();
    assert!(res.proved_unsatisfiable && !res.fixpoint);
    assert_eq!(res.steps.last().unwrap().size_after, 0);
    assert_eq!(res.final_space.active(csprops::Var(0)).len(), 1);
    assert_eq!(replay(&space, &res.steps).unwrap(), None);
}

#[test]
fn formula_must_match_the_instance() {
    let (inst, space) = fixtures::coloring();
    let cfg = SimplifyConfig::new(Mode::Production, Some(BooleanFormula::new(2)));
    assert!(matches!(simplify_fixpoint(&inst, &space, &cfg), Err(SimplifyError::FormulaMismatch { .. })));
    let missing = SimplifyConfig::new(Mode::Production, None).with_detectors(vec![Detector::PureValue]);
    assert!(matches!(simplify_fixpoint(&inst, &space, &missing), Err(SimplifyError::MissingFormula(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplification_preserves_satisfiability(seed in any::<u64>(), vars in 1usize..=5, domain in 1usize..=3, cons in 0usize..=7, arity in 1usize..=3, density in 0.2f64..=0.9, group in 1usize..=3) {
        let (inst, space) = gen_random(&RandomSpec { vars, domain, constraints: cons, max_arity: arity, density, seed }).unwrap();
        for mode in [Mode::Production, Mode::Test] {
            let mut cfg = SimplifyConfig::new(mode, None);
            cfg.group_size = group;
            let t = simplify_soundness(&inst, &space, &cfg).unwrap();
            prop_assert!(t.is_clean(), "{:?}", t.violations);
        }
    }

    #[test]
    fn boolean_simplification_preserves_satisfiability(cls in prop::sample::select(csprops::boolean::SchaeferClass::TRACTABLE.to_vec()), seed in any::<u64>()) {
        let f = gen_boolean(&BoolSpec::corpus(cls, seed)).unwrap();
        let t = check_formula(&f).unwrap();
        prop_assert!(t.is_clean(), "{:?}", t.violations);
    }

    #[test]
    fn arbitrary_cnf_simplification(seed in any::<u64>(), vars in 1usize..=8, cons in 0usize..=12) {
        let f = gen_boolean(&BoolSpec { class: csprops::boolean::SchaeferClass::Unrestricted, vars, constraints: cons, max_width: 3, seed }).unwrap();
        let t = check_formula(&f).unwrap();
        prop_assert!(t.is_clean(), "{:?}", t.violations);
    }
}
