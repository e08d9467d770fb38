//! Polynomial satisfiability for the Schaefer classes: unit propagation for
//! (dual) Horn, implication-graph components for 2CNF, Gaussian elimination
//! over GF(2) for affine systems.

use std::collections::VecDeque;

use super::{AffineEquation, BoolConstraint, BooleanFormula, Clause, SchaeferClass, TractableError};

/// Minimal model of a Horn clause set, or `None` if unsatisfiable.
pub fn solve_horn(num_vars: usize, clauses: &[Clause]) -> Option<Vec<bool>> {
    let mut model = vec![false; num_vars];
    // negative literals of each clause whose variable is not yet true
    let mut pending: Vec<usize> = clauses.iter().map(|c| c.negatives()).collect();
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); num_vars];
    for (ci, c) in clauses.iter().enumerate() {
        for l in c.lits().iter().filter(|l| !l.positive) {
            watchers[l.var].push(ci);
        }
    }
    let mut queue = VecDeque::new();
    for (ci, c) in clauses.iter().enumerate() {
        if pending[ci] == 0 {
            match c.lits().iter().find(|l| l.positive) {
                Some(h) if !model[h.var] => {
                    model[h.var] = true;
                    queue.push_back(h.var);
                }
                Some(_) => {}
                None => return None,
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for &ci in &watchers[v] {
            pending[ci] -= 1;
            if pending[ci] == 0 {
                match clauses[ci].lits().iter().find(|l| l.positive) {
                    Some(h) if !model[h.var] => {
                        model[h.var] = true;
                        queue.push_back(h.var);
                    }
                    Some(_) => {}
                    None => return None,
                }
            }
        }
    }
    Some(model)
}

/// Dual Horn through polarity flipping.
pub fn solve_dual_horn(num_vars: usize, clauses: &[Clause]) -> Option<Vec<bool>> {
    let flipped: Vec<Clause> = clauses
        .iter()
        .map(|c| {
            Clause::new(c.lits().iter().map(|l| l.negated()).collect())
                .expect("flipping preserves non-tautology")
        })
        .collect();
    solve_horn(num_vars, &flipped).map(|m| m.into_iter().map(|b| !b).collect())
}

/// 2CNF through strongly connected components of the implication graph.
pub fn solve_two_cnf(num_vars: usize, clauses: &[Clause]) -> Option<Vec<bool>> {
    // node 2v is "v true", 2v + 1 is "v false"
    let node = |l: super::Lit| 2 * l.var + usize::from(!l.positive);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * num_vars];
    for c in clauses {
        match *c.lits() {
            [] => return None,
            [a] => adj[node(a.negated())].push(node(a)),
            [a, b] => {
                adj[node(a.negated())].push(node(b));
                adj[node(b.negated())].push(node(a));
            }
            _ => panic!("clause longer than two literals in 2CNF solver"),
        }
    }
    let comp = tarjan(&adj);
    let mut model = Vec::with_capacity(num_vars);
    for v in 0..num_vars {
        if comp[2 * v] == comp[2 * v + 1] {
            return None;
        }
        // components are numbered sinks first
        model.push(comp[2 * v] < comp[2 * v + 1]);
    }
    Some(model)
}

/// Iterative Tarjan; component ids follow completion order.
fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < adj[v].len() {
                let w = adj[v][*edge];
                *edge += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    comp
}

/// Gaussian elimination over GF(2); free variables are set to false.
pub fn solve_affine(num_vars: usize, equations: &[AffineEquation]) -> Option<Vec<bool>> {
    let words = (num_vars + 1).div_ceil(64);
    let parity_bit = num_vars;
    let get = |row: &[u64], i: usize| row[i / 64] >> (i % 64) & 1 == 1;
    let mut rows: Vec<Vec<u64>> = equations
        .iter()
        .map(|e| {
            let mut row = vec![0u64; words];
            for &v in e.vars() {
                row[v / 64] ^= 1 << (v % 64);
            }
            if e.parity() {
                row[parity_bit / 64] |= 1 << (parity_bit % 64);
            }
            row
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..num_vars {
        let Some(found) = (rank..rows.len()).find(|&r| get(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && get(row, col) {
                for (w, p) in row.iter_mut().zip(&pivot_row) {
                    *w ^= p;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    if rows[rank..].iter().any(|row| get(row, parity_bit)) {
        return None;
    }
    let mut model = vec![false; num_vars];
    for (r, col) in pivots {
        model[col] = get(&rows[r], parity_bit);
    }
    Some(model)
}

/// Decides a constraint list known to lie in `cls`.
pub(crate) fn solve_in_class(
    cls: SchaeferClass,
    num_vars: usize,
    constraints: &[BoolConstraint],
) -> Option<Vec<bool>> {
    if constraints.iter().any(BoolConstraint::is_false) {
        return None;
    }
    let clauses = || -> Vec<Clause> {
        constraints
            .iter()
            .filter_map(|c| match c {
                BoolConstraint::Clause(cl) => Some(cl.clone()),
                BoolConstraint::Equation(_) => None,
            })
            .collect()
    };
    match cls {
        SchaeferClass::Horn => solve_horn(num_vars, &clauses()),
        SchaeferClass::DualHorn => solve_dual_horn(num_vars, &clauses()),
        SchaeferClass::TwoCnf => solve_two_cnf(num_vars, &clauses()),
        SchaeferClass::Affine => {
            let eqs: Vec<AffineEquation> = constraints
                .iter()
                .filter_map(|c| match c {
                    BoolConstraint::Equation(e) => Some(e.clone()),
                    BoolConstraint::Clause(_) => None,
                })
                .collect();
            solve_affine(num_vars, &eqs)
        }
        SchaeferClass::Unrestricted => panic!("no polynomial procedure for unrestricted formulas"),
    }
}

/// Satisfiability of a formula in a tractable class, with a model when
/// satisfiable.
pub fn sat_restricted(
    f: &BooleanFormula,
    cls: SchaeferClass,
) -> Result<Option<Vec<bool>>, TractableError> {
    let constraints = f.constraints();
    if cls == SchaeferClass::Unrestricted || !cls.admits_all(&constraints) {
        return Err(TractableError::ClassMismatch(cls));
    }
    Ok(solve_in_class(cls, f.num_vars(), &constraints))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::Lit;
    use proptest::prelude::*;

    fn brute_force(n: usize, cs: &[BoolConstraint]) -> bool {
        (0u32..1 << n).any(|m| {
            let model: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
            cs.iter().all(|c| c.eval(&model))
        })
    }

    fn clause(lits: &[i64]) -> Clause {
        Clause::new(lits.iter().map(|&l| Lit::from_dimacs(l)).collect()).unwrap()
    }

    #[test]
    fn horn_chain_is_unsat() {
        // {¬a ∨ b, a, ¬b}
        assert!(solve_horn(2, &[clause(&[-1, 2]), clause(&[1]), clause(&[-2])]).is_none());
        assert_eq!(solve_horn(2, &[clause(&[-1, 2]), clause(&[1])]), Some(vec![true, true]));
    }

    #[test]
    fn two_cnf_forced_model() {
        // {a ∨ b, ¬a ∨ b, a ∨ ¬b}: of the four assignments only a=b=true satisfies all three
        let cs = [clause(&[1, 2]), clause(&[-1, 2]), clause(&[1, -2])];
        let satisfying: Vec<(bool, bool)> = [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .filter(|&(a, b)| cs.iter().all(|c| c.eval(&[a, b])))
            .collect();
        assert_eq!(satisfying, vec![(true, true)]);
        assert_eq!(solve_two_cnf(2, &cs), Some(vec![true, true]));
    }

    #[test]
    fn contradictory_xor_rows() {
        let eqs = [
            AffineEquation::new(vec![0, 1], true),
            AffineEquation::new(vec![0, 1], false),
        ];
        assert!(solve_affine(2, &eqs).is_none());
    }

    #[test]
    fn class_mismatch_is_reported() {
        let mut f = BooleanFormula::new(3);
        f.add_clause(vec![Lit::pos(0), Lit::pos(1), Lit::pos(2)]);
        assert_eq!(
            sat_restricted(&f, SchaeferClass::Horn),
            Err(TractableError::ClassMismatch(SchaeferClass::Horn))
        );
    }

    fn arb_clause(n: usize, max_len: usize) -> impl Strategy<Value = Vec<Lit>> {
        proptest::collection::vec((0..n, any::<bool>()), 0..=max_len)
            .prop_map(|v| v.into_iter().map(|(var, positive)| Lit { var, positive }).collect())
    }

    proptest! {
        #[test]
        fn two_cnf_agrees_with_brute_force(cls in proptest::collection::vec(arb_clause(6, 2), 0..12)) {
            let clauses: Vec<Clause> = cls.into_iter().filter_map(Clause::new).collect();
            let cs: Vec<BoolConstraint> = clauses.iter().cloned().map(BoolConstraint::Clause).collect();
            let got = solve_two_cnf(6, &clauses);
            prop_assert_eq!(got.is_some(), brute_force(6, &cs));
            if let Some(m) = got {
                prop_assert!(cs.iter().all(|c| c.eval(&m)));
            }
        }

        #[test]
        fn affine_agrees_with_brute_force(
            eqs in proptest::collection::vec((proptest::collection::vec(0usize..7, 0..4), any::<bool>()), 0..10)
        ) {
            let eqs: Vec<AffineEquation> = eqs.into_iter().map(|(v, p)| AffineEquation::new(v, p)).collect();
            let cs: Vec<BoolConstraint> = eqs.iter().cloned().map(BoolConstraint::Equation).collect();
            let got = solve_affine(7, &eqs);
            prop_assert_eq!(got.is_some(), brute_force(7, &cs));
            if let Some(m) = got {
                prop_assert!(eqs.iter().all(|e| e.eval(&m)));
            }
        }

        #[test]
        fn horn_agrees_with_brute_force(cls in proptest::collection::vec(arb_clause(6, 3), 0..12)) {
            let clauses: Vec<Clause> = cls
                .into_iter()
                .filter_map(Clause::new)
                .filter(|c| c.positives() <= 1)
                .collect();
            let cs: Vec<BoolConstraint> = clauses.iter().cloned().map(BoolConstraint::Clause).collect();
            let got = solve_horn(6, &clauses);
            prop_assert_eq!(got.is_some(), brute_force(6, &cs));
            if let Some(m) = got {
                prop_assert!(cs.iter().all(|c| c.eval(&m)));
            }
        }
    }
}
