use csprops::instances::{
    emit_csp, emit_csp_annotated, fixtures, gen_coloring, gen_factoring, gen_random, parse_csp, parse_dimacs,
    FactoringSpec, Graph, RandomSpec,
};
use csprops::{Oracle, PropertyQuery, SearchSpace, Val, Var};

#[test]
fn fixtures_round_trip() {
    for text in [fixtures::COLORING_CSP, fixtures::EQUIVALENCES_CSP, fixtures::TABLES_CSP, fixtures::REMOVAL_TRAP_CSP] {
        let parsed = parse_csp(text).unwrap();
        assert_eq!(parse_csp(&emit_csp(&parsed.0, &parsed.1)).unwrap(), parsed);
    }
}

#[test]
fn random_instances_round_trip() {
    for seed in 1..=100 {
        let (inst, space) = gen_random(&RandomSpec::corpus(seed)).unwrap();
        let space = if seed % 2 == 0 { space.without(Var(1), Val(2)).unwrap() } else { space };
        let text = emit_csp(&inst, &space);
        assert_eq!(parse_csp(&text).unwrap(), (inst, space), "seed {seed}");
    }
}

#[test]
fn coloring_fixture_shape() {
    let (inst, space) = fixtures::coloring();
    assert_eq!(inst.num_vars(), 5);
    assert_eq!(inst.constraints().len(), 4);
    assert!(inst.constraints().iter().all(|c| c.relation().len() == 6));
    assert!(space.is_full(3));
}

#[test]
fn active_lines_restrict_the_space() {
    let text = fixtures::COLORING_CSP.replace("domain: R G B", "domain: R G B\nactive: x1 = R G");
    let (inst, space) = parse_csp(&text).unwrap();
    assert_eq!(space.active(inst.var("x1").unwrap()), &[Val(0), Val(1)]);
    assert_eq!(space.size(), 162);
}

#[test]
fn coloring_generator_reproduces_the_fixture() {
    let generated = gen_coloring(&Graph::five_node(), 3).unwrap();
    assert_eq!(generated, fixtures::coloring().0);
}

#[test]
fn edgeless_graph_makes_every_variable_irrelevant() {
    let inst = gen_coloring(&Graph::new(3, vec![]).unwrap(), 3).unwrap();
    let space = inst.full_space();
    let oracle = Oracle::new(&inst, &space).unwrap();
    assert!(inst.variables().all(|x| oracle.irrelevant(x).unwrap().holds));
}

#[test]
fn triangle_is_not_two_colorable() {
    let inst = gen_coloring(&Graph::triangle(), 2).unwrap();
    let space = inst.full_space();
    assert_eq!(space.size(), 8);
    assert!(!Oracle::new(&inst, &space).unwrap().is_satisfiable());
    assert!(Oracle::new(&gen_coloring(&Graph::triangle(), 3).unwrap(), &SearchSpace::full(3, 3)).unwrap().is_satisfiable());
}

#[test]
fn density_one_gives_full_relations() {
    let spec = RandomSpec { density: 1.0, ..RandomSpec::corpus(5) };
    let (inst, space) = gen_random(&spec).unwrap();
    let oracle = Oracle::new(&inst, &space).unwrap();
    assert!(inst.variables().all(|x| oracle.irrelevant(x).unwrap().holds));
}

#[test]
fn dimacs_fixture() {
    let d = parse_dimacs(fixtures::PURE_CNF).unwrap();
    assert_eq!(d.formula.num_vars(), 3);
    assert_eq!(d.formula.clauses().len(), 3);
    assert_eq!(d.formula.names(), &["x", "y", "z"]);
}

#[test]
fn annotations_are_comments() {
    let (inst, space) = fixtures::three_tables();
    let text = emit_csp_annotated(&inst, &space, &["two\nlines".to_string()]);
    assert!(text.contains("# two\n# lines\n"));
    assert_eq!(parse_csp(&text).unwrap(), (inst, space));
}

fn factor_pairs(z: u64, ordering: bool) -> Vec<(u64, u64)> {
    let f = gen_factoring(&FactoringSpec::new(z, 2, ordering)).unwrap();
    let space = f.instance.full_space().node_consistent(&f.instance).unwrap();
    let oracle = Oracle::new(&f.instance, &space).unwrap();
    let mut pairs: Vec<(u64, u64)> = oracle.solutions().map(|t| f.layout.decode(&t)).collect();
    pairs.sort_unstable();
    pairs
}

#[test]
fn factoring_solutions_multiply_out() {
    for (z, expected) in [(6, vec![(2, 3), (3, 2)]), (15, vec![(3, 5), (5, 3)]), (21, vec![(3, 7), (7, 3)]), (35, vec![(5, 7), (7, 5)])] {
        let pairs = factor_pairs(z, false);
        assert_eq!(pairs, expected, "Z={z}");
        assert!(pairs.iter().all(|&(x, y)| x * y == z && x != 1 && y != 1));
    }
    assert_eq!(factor_pairs(21, true), vec![(3, 7)]);
    // a prime has no factorization into non-unit factors
    assert!(factor_pairs(13, false).is_empty());
}

#[test]
fn factoring_carries_depend_on_digits() {
    let f = gen_factoring(&FactoringSpec::new(15, 2, false)).unwrap();
    let space = f.instance.full_space();
    let oracle = Oracle::new(&f.instance, &space).unwrap();
    let digits = f.layout.digit_vars();
    for &c in &f.layout.carries {
        let q = PropertyQuery::Dependent { on: digits.clone(), target: c };
        assert!(oracle.check(&q).unwrap().holds);
    }
    // with two solutions, the digits are not implied
    let x1 = f.layout.x[1];
    assert!(!space.active(x1).iter().any(|&a| oracle.implied(x1, a).unwrap().holds));
}

#[test]
fn wide_columns_are_split() {
    let f = gen_factoring(&FactoringSpec::new(143, 2, true)).unwrap();
    assert!(!f.layout.aux.is_empty());
    assert!(f.notes.iter().any(|n| n.contains("partial sum")));
    for c in f.instance.constraints() {
        assert!(c.relation().len() <= 1 << 17, "{}", c.label());
    }
    // verify the split encoding on the one solution by direct evaluation
    let inst = &f.instance;
    let (x, y) = (11u64, 13u64);
    let mut vals = vec![Val(0); inst.num_vars()];
    let n = f.layout.x.len();
    for i in 0..n {
        vals[f.layout.x[i].index()] = Val(((x >> i) & 1) as u32);
        vals[f.layout.y[i].index()] = Val(((y >> i) & 1) as u32);
    }
    // carries and partial sums follow from the digits; search the few free variables
    let derived: Vec<Var> = f.layout.carries.iter().chain(&f.layout.aux).copied().collect();
    let mut space_sets: Vec<Vec<Val>> = vals.iter().map(|&v| vec![v]).collect();
    for &v in &derived {
        space_sets[v.index()] = inst.values().collect();
    }
    let space = SearchSpace::new(space_sets).unwrap().node_consistent(inst).unwrap();
    let oracle = Oracle::new(inst, &space).unwrap();
    assert_eq!(oracle.solution_count(), 1);
}

#[test]
fn oversized_factoring_is_refused() {
    assert!(gen_factoring(&FactoringSpec::new(1 << 12, 2, false)).is_err());
    assert!(gen_factoring(&FactoringSpec::new(99_999_999, 10, false)).is_err());
}
