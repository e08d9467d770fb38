use csprops::boolean::{BooleanFormula, Lit, TRUE, FALSE};
use csprops::crosscheck::{local_global_agreement, local_soundness};
use csprops::instances::{fixtures, gen_random, RandomSpec};
use csprops::local::{
    default_covering, local_check, pure_value_fixable, singleton_holds, subproblem_check, Covering, LocalError,
};
use csprops::query::enumerate_queries;
use csprops::{Oracle, PropertyKind, PropertyQuery, SearchSpace, Val, Var};
use proptest::prelude::*;

#[test]
fn singleton_covering_of_three_tables() {
    let (inst, space) = fixtures::three_tables();
    let cov = default_covering(&inst, 1).unwrap();
    assert_eq!(cov.subsets(), &[vec![0], vec![1], vec![2]]);
    let x = inst.var("x").unwrap();
    let q = PropertyQuery::Substitutable { var: x, from: inst.val("1").unwrap(), to: inst.val("2").unwrap() };
    let v = local_check(&inst, &space, &cov, &q).unwrap();
    assert!(v.established);
    assert_eq!(v.per_subset, vec![true, true, true]);
    let z = inst.var("z").unwrap();
    let q = PropertyQuery::Fixable { var: z, value: inst.val("2").unwrap() };
    assert!(local_check(&inst, &space, &cov, &q).unwrap().established);
}

#[test]
fn global_covering_matches_the_oracle_on_fixtures() {
    for (inst, space) in [fixtures::coloring(), fixtures::boolean_equivalences(), fixtures::three_tables()] {
        assert!(local_global_agreement(&inst, &space, 2).unwrap().is_clean());
    }
}

#[test]
fn fast_paths_agree_with_subproblems() {
    for seed in 1..=200 {
        let (inst, space) = gen_random(&RandomSpec::corpus(seed)).unwrap();
        let restricted = space.without(Var(0), Val(0)).unwrap();
        for s in [&space, &restricted] {
            for q in enumerate_queries(s, &PropertyKind::ALL, 2) {
                for ci in 0..inst.constraints().len() {
                    let fast = singleton_holds(&inst.constraints()[ci], s, &q);
                    let slow = subproblem_check(&inst, s, &[ci], &q).unwrap();
                    assert_eq!(fast, slow, "seed {seed} {} on {}", q.render(&inst), inst.constraints()[ci].label());
                }
            }
        }
    }
}

#[test]
fn removability_trap() {
    let (inst, space) = fixtures::local_removal_trap();
    let x = inst.var("x").unwrap();
    let two = inst.val("2").unwrap();
    let q = PropertyQuery::Removable { var: x, value: two };
    for g in [1, 2, 4] {
        let cov = default_covering(&inst, g).unwrap();
        assert_eq!(local_check(&inst, &space, &cov, &q), Err(LocalError::UnsoundLocalCheck));
    }
    for ci in 0..4 {
        assert!(subproblem_check(&inst, &space, &[ci], &q).unwrap());
    }
    assert!(!Oracle::new(&inst, &space).unwrap().removable(x, two).unwrap().holds);
    assert!(Oracle::new(&inst, &space).unwrap().is_satisfiable());
    assert!(!Oracle::new(&inst, &space.without(x, two).unwrap()).unwrap().is_satisfiable());
}

#[test]
fn empty_constraint_set() {
    let (inst, space) = gen_random(&RandomSpec { constraints: 0, ..RandomSpec::corpus(1) }).unwrap();
    let cov = default_covering(&inst, 1).unwrap();
    assert!(cov.is_empty());
    let fix = PropertyQuery::Fixable { var: Var(0), value: Val(0) };
    assert!(local_check(&inst, &space, &cov, &fix).unwrap().established);
    let incons = PropertyQuery::Inconsistent { var: Var(0), value: Val(0) };
    assert!(!local_check(&inst, &space, &cov, &incons).unwrap().established);
}

#[test]
fn overlapping_coverings_are_accepted() {
    let (inst, space) = fixtures::three_tables();
    let cov = Covering::new(&inst, vec![vec![0, 1], vec![1, 2]]).unwrap();
    let q = PropertyQuery::Fixable { var: inst.var("z").unwrap(), value: inst.val("2").unwrap() };
    assert!(local_check(&inst, &space, &cov, &q).unwrap().established);
}

#[test]
fn pure_value_on_the_example_formula() {
    let f = fixtures::pure_literal_cnf();
    assert_eq!(f.num_vars(), 3);
    assert_eq!(f.clauses().len(), 3);
    assert_eq!(pure_value_fixable(&f, 0), Ok(Some(true)));
    let mut g = f.clone();
    g.add_equation(csprops::boolean::AffineEquation::new(vec![0, 1], true));
    assert_eq!(pure_value_fixable(&g, 0), Err(LocalError::NotClausal));
}

fn cnf_strategy() -> impl Strategy<Value = BooleanFormula> {
    (1usize..=10).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec((0..n, any::<bool>()), 1..=3), 0..=15).prop_map(move |clauses| {
            let mut f = BooleanFormula::new(n);
            for c in clauses {
                f.add_clause(c.into_iter().map(|(var, positive)| Lit { var, positive }).collect());
            }
            f
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn local_reasoning_is_sound(seed in any::<u64>(), vars in 1usize..=5, domain in 1usize..=3, cons in 0usize..=6, arity in 1usize..=3, density in 0.2f64..=0.9) {
        let spec = RandomSpec { vars, domain, constraints: cons, max_arity: arity, density, seed };
        let (inst, space) = gen_random(&spec).unwrap();
        let t = local_soundness(&inst, &space, &[1, 2, 3], 2).unwrap();
        prop_assert!(t.is_clean(), "{:?}", t.violations);
        let t = local_global_agreement(&inst, &space, 2).unwrap();
        prop_assert!(t.is_clean(), "{:?}", t.violations);
    }

    #[test]
    fn pure_value_is_sound(f in cnf_strategy()) {
        let inst = f.to_csp().unwrap();
        let space = inst.full_space();
        let oracle = Oracle::new(&inst, &space).unwrap();
        let cov = default_covering(&inst, 1).unwrap();
        for x in 0..f.num_vars() {
            if let Some(v) = pure_value_fixable(&f, x).unwrap() {
                let value = if v { TRUE } else { FALSE };
                let q = PropertyQuery::Fixable { var: Var::from(x), value };
                prop_assert!(oracle.check(&q).unwrap().holds);
                prop_assert!(local_check(&inst, &space, &cov, &q).unwrap().established);
            }
        }
    }

    #[test]
    fn restricted_spaces_stay_sound(seed in 1u64..=1000, drop in 0usize..5, val in 0u32..3) {
        let (inst, space) = gen_random(&RandomSpec::corpus(seed)).unwrap();
        let space: SearchSpace = space.without(Var::from(drop), Val(val)).unwrap();
        let t = local_soundness(&inst, &space, &[1, 2], 2).unwrap();
        prop_assert!(t.is_clean(), "{:?}", t.violations);
    }
}
