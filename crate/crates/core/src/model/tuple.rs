use std::collections::BTreeMap;
use std::ops::Deref;

use super::{ModelError, Val, Var};

/// A V-tuple: a total mapping from a set of variables to values.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple {
    bindings: BTreeMap<Var, Val>,
}

impl Tuple {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, Val)>>(pairs: I) -> Self {
        Tuple {
            bindings: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, x: Var) -> Option<Val> {
        self.bindings.get(&x).copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.bindings.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, Val)> + '_ {
        self.bindings.iter().map(|(&x, &a)| (x, a))
    }

    /// `t[x := a]`; `x` must already be bound.
    pub fn assign(&self, x: Var, a: Val) -> Result<Tuple, ModelError> {
        if !self.bindings.contains_key(&x) {
            return Err(ModelError::Unbound(x));
        }
        let mut out = self.clone();
        out.bindings.insert(x, a);
        Ok(out)
    }

    /// `t|_U`.
    pub fn restrict(&self, vars: &[Var]) -> Result<Tuple, ModelError> {
        let mut bindings = BTreeMap::new();
        for &x in vars {
            let a = self.get(x).ok_or(ModelError::Unbound(x))?;
            bindings.insert(x, a);
        }
        Ok(Tuple { bindings })
    }
}

impl From<&Assignment> for Tuple {
    fn from(t: &Assignment) -> Self {
        Tuple::from_pairs(t.iter().enumerate().map(|(i, &a)| (Var::from(i), a)))
    }
}

/// A dense X-tuple indexed by variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub Vec<Val>);

impl Assignment {
    pub fn value(&self, x: Var) -> Val {
        self.0[x.index()]
    }

    pub fn assigned(&self, x: Var, a: Val) -> Assignment {
        let mut out = self.clone();
        out.0[x.index()] = a;
        out
    }

    /// Converts a tuple binding every one of `n` variables `0..n`.
    pub fn from_tuple(t: &Tuple, n: usize) -> Result<Assignment, ModelError> {
        (0..n)
            .map(|i| t.get(Var::from(i)).ok_or(ModelError::Unbound(Var::from(i))))
            .collect::<Result<Vec<_>, _>>()
            .map(Assignment)
    }
}

impl Deref for Assignment {
    type Target = [Val];

    fn deref(&self) -> &[Val] {
        &self.0
    }
}
