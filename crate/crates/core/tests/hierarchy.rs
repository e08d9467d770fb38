use csprops::hierarchy::{
    derived_check, edge_catalog, evaluate_edge, validate_hierarchy, validate_with_catalog, Binding, DEFAULT_DEP_MAX,
};
use csprops::instances::{fixtures, gen_factoring, gen_random, FactoringSpec, RandomSpec};
use csprops::query::enumerate_queries;
use csprops::{Oracle, PropertyKind, SearchSpace, Val, Var};
use proptest::prelude::*;

fn edge(name: &str) -> csprops::hierarchy::RelationshipEdge {
    edge_catalog().into_iter().find(|e| e.name == name).unwrap()
}

#[test]
fn fixtures_satisfy_every_edge() {
    for (inst, space) in [
        fixtures::coloring(),
        fixtures::boolean_equivalences(),
        fixtures::three_tables(),
        fixtures::local_removal_trap(),
    ] {
        let v = validate_hierarchy(&inst, &space, DEFAULT_DEP_MAX).unwrap();
        assert!(v.is_empty(), "{:?}", v.iter().map(|v| v.render(&inst)).collect::<Vec<_>>());
    }
}

#[test]
fn implication_inconsistency_on_the_boolean_example() {
    let (inst, space) = fixtures::boolean_equivalences();
    let oracle = Oracle::new(&inst, &space).unwrap();
    let b = Binding {
        x: Some(inst.var("x").unwrap()),
        a: Some(inst.val("true").unwrap()),
        ..Binding::default()
    };
    assert_eq!(evaluate_edge(&oracle, &edge("implication-inconsistency"), &b).unwrap(), (true, true));
}

#[test]
fn irrelevance_fixability_on_the_isolated_node() {
    let (inst, space) = fixtures::coloring();
    let oracle = Oracle::new(&inst, &space).unwrap();
    let b = Binding {
        x: Some(inst.var("x1").unwrap()),
        ..Binding::default()
    };
    assert_eq!(evaluate_edge(&oracle, &edge("irrelevance-fixability"), &b).unwrap(), (true, true));
}

#[test]
fn unique_solution_on_factoring() {
    let f = gen_factoring(&FactoringSpec::new(15, 2, true)).unwrap();
    let space = f.instance.full_space();
    let oracle = Oracle::new(&f.instance, &space).unwrap();
    let (lhs, rhs) = evaluate_edge(&oracle, &edge("unique-solution"), &Binding::default()).unwrap();
    assert!(lhs && rhs);
}

#[test]
fn reversed_determinacy_edge_is_caught() {
    let (inst, space) = fixtures::coloring();
    let mut catalog = edge_catalog();
    let i = catalog.iter().position(|e| e.name == "determinacy-implication").unwrap();
    catalog[i] = catalog[i].reversed();
    let v = validate_with_catalog(&inst, &space, &catalog, DEFAULT_DEP_MAX).unwrap();
    assert!(!v.is_empty());
    assert!(v.iter().all(|v| v.edge == "determinacy-implication" && v.lhs && !v.rhs));
    // the triangle nodes are determined without an implied value; x1 and x5 are not determined
    let hit: Vec<&str> = v.iter().map(|v| inst.var_name(v.binding.x.unwrap())).collect();
    assert!(hit.contains(&"x2") && !hit.contains(&"x1") && !hit.contains(&"x5"));
}

#[test]
fn reversing_one_way_edges_is_caught_somewhere() {
    // each one-way edge is strict on at least one corpus instance
    for name in [
        "determinacy-implication",
        "implication-fixability",
        "inconsistency-removability",
        "substitutability-removability",
    ] {
        let reversed = vec![edge(name).reversed()];
        let found = (1..=200).any(|s| {
            let (inst, space) = gen_random(&RandomSpec::corpus(s)).unwrap();
            !validate_with_catalog(&inst, &space, &reversed, 2).unwrap().is_empty()
        });
        assert!(found, "{name}");
    }
}

#[test]
fn dependence_on_nothing_means_a_constant() {
    // y is determined by x but takes two values, so it is not dependent on ∅
    let (inst, _) = csprops::instances::parse_csp("csp 1\nvars: x y\ndomain: 0 1\ncon eq(x,y): (0,0) (1,1)\n").unwrap();
    let space = inst.full_space();
    let oracle = Oracle::new(&inst, &space).unwrap();
    assert!(oracle.determined(Var(1)).unwrap().holds);
    assert!(!oracle.dependent(&[], Var(1)).unwrap().holds);
    let b = Binding {
        on: vec![],
        y: Some(Var(1)),
        ..Binding::default()
    };
    assert_eq!(evaluate_edge(&oracle, &edge("dependence-determinacy"), &b).unwrap(), (false, false));
    let restricted = SearchSpace::new(vec![vec![Val(1)], vec![Val(0), Val(1)]]).unwrap();
    let oracle = Oracle::new(&inst, &restricted).unwrap();
    assert_eq!(evaluate_edge(&oracle, &edge("dependence-determinacy"), &b).unwrap(), (true, true));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_instances_satisfy_the_hierarchy(seed in any::<u64>(), vars in 1usize..=4, domain in 1usize..=3, cons in 0usize..=6, arity in 1usize..=3) {
        let spec = RandomSpec { vars, domain, constraints: cons, max_arity: arity, density: 0.5, seed };
        let (inst, space) = gen_random(&spec).unwrap();
        let v = validate_hierarchy(&inst, &space, 2).unwrap();
        prop_assert!(v.is_empty(), "{:?}", v.iter().map(|v| v.render(&inst)).collect::<Vec<_>>());
    }

    #[test]
    fn derived_verdicts_match_the_oracle(seed in 1u64..=1000) {
        let (inst, space) = gen_random(&RandomSpec::corpus(seed)).unwrap();
        let oracle = Oracle::new(&inst, &space).unwrap();
        for q in enumerate_queries(&space, &[PropertyKind::Fixable, PropertyKind::Irrelevant, PropertyKind::Implied, PropertyKind::Interchangeable, PropertyKind::Dependent], 2) {
            let derived = derived_check(&oracle, &q).unwrap();
            prop_assert_eq!(derived, Some(oracle.check(&q).unwrap().holds), "{}", q.render(&inst));
        }
    }
}
