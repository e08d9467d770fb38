use super::{Assignment, CspInstance, ModelError, Val, Var};

/// Active value sets, one per variable; each is sorted, duplicate-free and nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SearchSpace {
    active: Vec<Vec<Val>>,
}

impl SearchSpace {
    pub fn full(num_vars: usize, domain_size: usize) -> Self {
        let all: Vec<Val> = (0..domain_size).map(Val::from).collect();
        SearchSpace {
            active: vec![all; num_vars],
        }
    }

    pub fn new(mut active: Vec<Vec<Val>>) -> Result<Self, ModelError> {
        for (i, set) in active.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(ModelError::EmptyActiveSet(Var::from(i)));
            }
        }
        Ok(SearchSpace { active })
    }

    /// Checks that the space matches the shape of `inst`.
    pub fn validate(&self, inst: &CspInstance) -> Result<(), ModelError> {
        if self.active.len() != inst.num_vars() {
            return Err(ModelError::SpaceShape {
                expected: inst.num_vars(),
                found: self.active.len(),
            });
        }
        for set in &self.active {
            for &a in set {
                inst.check_val(a)?;
            }
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.active.len()
    }

    pub fn active(&self, x: Var) -> &[Val] {
        &self.active[x.index()]
    }

    pub fn contains(&self, x: Var, a: Val) -> bool {
        self.active[x.index()].binary_search(&a).is_ok()
    }

    pub fn contains_tuple(&self, t: &[Val]) -> bool {
        t.iter()
            .enumerate()
            .all(|(i, &a)| self.contains(Var::from(i), a))
    }

    pub fn is_full(&self, domain_size: usize) -> bool {
        self.active.iter().all(|s| s.len() == domain_size)
    }

    /// Number of tuples, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        self.active
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    /// Replaces the active set of `x`.
    pub fn with_active(&self, x: Var, values: Vec<Val>) -> Result<SearchSpace, ModelError> {
        let mut active = self.active.clone();
        active[x.index()] = values;
        SearchSpace::new(active)
    }

    /// `σ_{x=a}(S)`; `a` need not be active.
    pub fn select(&self, x: Var, a: Val) -> SearchSpace {
        let mut out = self.clone();
        out.active[x.index()] = vec![a];
        out
    }

    /// Drops `a` from `active(x)`; `None` if that would empty the set.
    pub fn without(&self, x: Var, a: Val) -> Option<SearchSpace> {
        let mut out = self.clone();
        out.active[x.index()].retain(|&v| v != a);
        if out.active[x.index()].is_empty() {
            None
        } else {
            Some(out)
        }
    }

    /// Drops the values a unary constraint rules out. Such values are
    /// inconsistent, so `Sol(C) ∩ S` is unchanged.
    pub fn node_consistent(&self, inst: &CspInstance) -> Result<SearchSpace, ModelError> {
        let mut active = self.active.clone();
        for c in inst.constraints().iter().filter(|c| c.arity() == 1) {
            let x = c.scope()[0];
            active[x.index()].retain(|&a| c.relation().contains(&[a]));
        }
        SearchSpace::new(active)
    }

    pub fn iter(&self) -> SpaceIter<'_> {
        SpaceIter {
            space: self,
            pos: vec![0; self.active.len()],
            done: false,
        }
    }
}

/// Lexicographic enumeration of a search space, first variable slowest.
pub struct SpaceIter<'a> {
    space: &'a SearchSpace,
    pos: Vec<usize>,
    done: bool,
}

impl Iterator for SpaceIter<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let current = Assignment(
            self.pos
                .iter()
                .enumerate()
                .map(|(i, &p)| self.space.active[i][p])
                .collect(),
        );
        let mut i = self.pos.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.pos[i] + 1 < self.space.active[i].len() {
                self.pos[i] += 1;
                break;
            }
            self.pos[i] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_space_of_five_ternary_vars() {
        let s = SearchSpace::full(5, 3);
        assert_eq!(s.iter().count(), 243);
        assert_eq!(s.size(), 243);
    }

    #[test]
    fn singleton_space_has_one_tuple() {
        let s = SearchSpace::new(vec![vec![Val(2)], vec![Val(0)]]).unwrap();
        let all: Vec<_> = s.iter().collect();
        assert_eq!(all, vec![Assignment(vec![Val(2), Val(0)])]);
    }

    #[test]
    fn zero_variables_give_the_empty_tuple() {
        assert_eq!(SearchSpace::full(0, 3).iter().count(), 1);
    }

    #[test]
    fn rejects_empty_active_sets() {
        assert_eq!(
            SearchSpace::new(vec![vec![Val(0)], vec![]]),
            Err(ModelError::EmptyActiveSet(Var(1)))
        );
        let s = SearchSpace::full(1, 2);
        assert!(s.without(Var(0), Val(0)).unwrap().without(Var(0), Val(1)).is_none());
    }

    proptest! {
        #[test]
        fn enumeration_is_lexicographic_and_complete(
            sets in proptest::collection::vec(proptest::collection::btree_set(0u32..4, 1..=4), 0..=5)
        ) {
            let active: Vec<Vec<Val>> = sets.iter().map(|s| s.iter().map(|&v| Val(v)).collect()).collect();
            let space = SearchSpace::new(active).unwrap();
            let all: Vec<_> = space.iter().collect();
            let expected: usize = sets.iter().map(|s| s.len()).product();
            prop_assert_eq!(all.len(), expected);
            prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(all.iter().all(|t| space.contains_tuple(t)));
            let again: Vec<_> = space.iter().collect();
            prop_assert_eq!(all, again);
        }
    }
}
