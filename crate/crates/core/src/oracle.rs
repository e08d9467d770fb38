//! Exact, exhaustive decision procedures for every structural property.
//!
//! The oracle enumerates the whole search space once, records which tuples
//! are solutions, and then answers each query by walking the solutions in
//! lexicographic order. It never prunes: it is the reference the local and
//! tractable detectors are measured against. Every negative answer carries
//! the lexicographically least counterexample.
//!
//! Value quantifiers (the `b` in "there is some `b != a`", the `a` in "for
//! every `a`") range over the active set of the variable by default. With
//! [`Quantifier::FullDomain`] they range over the whole domain instead, in
//! which case candidate tuples may leave the search space and are checked
//! against the constraints directly.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{Assignment, CspInstance, ModelError, SearchSpace, Val, Var};
use crate::query::PropertyQuery;

/// Default cap on the number of tuples the oracle is willing to enumerate.
pub const DEFAULT_MAX_SPACE: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Quantifier {
    #[default]
    ActiveDomain,
    FullDomain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_space: u128,
    pub quantifier: Quantifier,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_space: DEFAULT_MAX_SPACE,
            quantifier: Quantifier::ActiveDomain,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("search space has {size} tuples, above the limit of {limit}")]
    SpaceTooLarge { size: u128, limit: u128 },
    #[error("value {value:?} is not in the quantification range of {var:?}")]
    ValueNotActive { var: Var, value: Val },
    #[error("dependence target {0:?} belongs to the determining set")]
    TargetInVarSet(Var),
    #[error("transformation is undefined on {0:?}")]
    PartialTransformation(Assignment),
    #[error("transformation maps {0:?} outside the search space")]
    LeavesSpace(Assignment),
}

/// Why a property failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Solution(Assignment),
    SolutionPair(Assignment, Assignment),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// The least counterexample when `holds` is false.
    pub evidence: Option<Evidence>,
}

impl Verdict {
    fn yes() -> Self {
        Verdict {
            holds: true,
            evidence: None,
        }
    }

    fn refuted(e: Evidence) -> Self {
        Verdict {
            holds: false,
            evidence: Some(e),
        }
    }
}

/// A total self-map of the search space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transformation {
    Identity,
    /// `t ↦ t[x := a]`
    Fix { var: Var, value: Val },
    /// `t ↦ t[x := b]` when `t_x = a`, identity otherwise.
    Substitute { var: Var, from: Val, to: Val },
    /// Swaps `a` and `b` on `x`.
    Swap { var: Var, a: Val, b: Val },
    /// An explicit table; must cover every tuple of the space.
    Table(Vec<(Assignment, Assignment)>),
}

impl Transformation {
    fn canonical_image(&self, t: &Assignment) -> Option<Assignment> {
        match *self {
            Transformation::Identity => Some(t.clone()),
            Transformation::Fix { var, value } => Some(t.assigned(var, value)),
            Transformation::Substitute { var, from, to } => Some(if t.value(var) == from {
                t.assigned(var, to)
            } else {
                t.clone()
            }),
            Transformation::Swap { var, a, b } => Some(match t.value(var) {
                v if v == a => t.assigned(var, b),
                v if v == b => t.assigned(var, a),
                _ => t.clone(),
            }),
            Transformation::Table(_) => None,
        }
    }
}

type ImageFn<'f> = dyn Fn(&Assignment) -> Result<Assignment, OracleError> + 'f;

/// Brute-force evaluator for one instance and search space.
pub struct Oracle<'a> {
    inst: &'a CspInstance,
    space: SearchSpace,
    quantifier: Quantifier,
    stride: Vec<usize>,
    // position of each domain value inside the active set, per variable
    position: Vec<Vec<Option<usize>>>,
    solutions: Vec<usize>,
    solution_bits: Vec<u64>,
}

impl<'a> Oracle<'a> {
    pub fn new(inst: &'a CspInstance, space: &SearchSpace) -> Result<Self, OracleError> {
        Self::with_config(inst, space, OracleConfig::default())
    }

    pub fn with_config(
        inst: &'a CspInstance,
        space: &SearchSpace,
        config: OracleConfig,
    ) -> Result<Self, OracleError> {
        space.validate(inst)?;
        let size = space.size();
        if size > config.max_space {
            return Err(OracleError::SpaceTooLarge {
                size,
                limit: config.max_space,
            });
        }
        let n = inst.num_vars();
        let mut stride = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            stride[i] = stride[i + 1] * space.active(Var::from(i + 1)).len();
        }
        let position = (0..n)
            .map(|i| {
                let mut pos = vec![None; inst.domain_size()];
                for (p, a) in space.active(Var::from(i)).iter().enumerate() {
                    pos[a.index()] = Some(p);
                }
                pos
            })
            .collect();

        let size = size as usize;
        let mut solution_bits = vec![0u64; size.div_ceil(64)];
        let mut solutions = Vec::new();
        for (idx, t) in space.iter().enumerate() {
            if inst.is_solution(&t) {
                solutions.push(idx);
                solution_bits[idx / 64] |= 1 << (idx % 64);
            }
        }
        Ok(Oracle {
            inst,
            space: space.clone(),
            quantifier: config.quantifier,
            stride,
            position,
            solutions,
            solution_bits,
        })
    }

    pub fn instance(&self) -> &'a CspInstance {
        self.inst
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn quantifier(&self) -> Quantifier {
        self.quantifier
    }

    /// An oracle for the same instance over a different space.
    pub fn restricted(&self, space: &SearchSpace) -> Result<Oracle<'a>, OracleError> {
        Oracle::with_config(
            self.inst,
            space,
            OracleConfig {
                max_space: u128::MAX,
                quantifier: self.quantifier,
            },
        )
    }

    pub fn solution_count(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_satisfiable(&self) -> bool {
        !self.solutions.is_empty()
    }

    /// `Sol(C) ∩ S` in enumeration order.
    pub fn solutions(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.solutions.iter().map(|&i| self.decode(i))
    }

    fn decode(&self, idx: usize) -> Assignment {
        Assignment(
            (0..self.inst.num_vars())
                .map(|i| self.value_at(idx, Var::from(i)))
                .collect(),
        )
    }

    #[inline]
    fn value_at(&self, idx: usize, x: Var) -> Val {
        let active = self.space.active(x);
        active[(idx / self.stride[x.index()]) % active.len()]
    }

    #[inline]
    fn bit(&self, idx: usize) -> bool {
        self.solution_bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Whether `t[x := b]` is a solution, where `t` is the tuple at `idx`.
    fn solution_after(&self, idx: usize, x: Var, b: Val) -> bool {
        match self.position[x.index()][b.index()] {
            Some(p) => {
                let cur = (idx / self.stride[x.index()]) % self.space.active(x).len();
                let moved = idx - cur * self.stride[x.index()] + p * self.stride[x.index()];
                self.bit(moved)
            }
            None => {
                let mut t = self.decode(idx);
                t.0[x.index()] = b;
                self.inst.is_solution(&t)
            }
        }
    }

    /// The values a quantifier over `x` ranges over.
    pub fn value_range(&self, x: Var) -> Vec<Val> {
        match self.quantifier {
            Quantifier::ActiveDomain => self.space.active(x).to_vec(),
            Quantifier::FullDomain => self.inst.values().collect(),
        }
    }

    fn require_var(&self, x: Var) -> Result<(), OracleError> {
        Ok(self.inst.check_var(x)?)
    }

    fn require_value(&self, x: Var, a: Val) -> Result<(), OracleError> {
        self.require_var(x)?;
        self.inst.check_val(a)?;
        let ok = match self.quantifier {
            Quantifier::ActiveDomain => self.space.contains(x, a),
            Quantifier::FullDomain => true,
        };
        if ok {
            Ok(())
        } else {
            Err(OracleError::ValueNotActive { var: x, value: a })
        }
    }

    fn first_failure<F>(&self, mut bad: F) -> Verdict
    where
        F: FnMut(usize) -> bool,
    {
        match self.solutions.iter().copied().find(|&s| bad(s)) {
            Some(s) => Verdict::refuted(Evidence::Solution(self.decode(s))),
            None => Verdict::yes(),
        }
    }

    pub fn fixable(&self, x: Var, a: Val) -> Result<Verdict, OracleError> {
        self.require_value(x, a)?;
        Ok(self.first_failure(|s| !self.solution_after(s, x, a)))
    }

    pub fn substitutable(&self, x: Var, a: Val, b: Val) -> Result<Verdict, OracleError> {
        self.require_value(x, a)?;
        self.require_value(x, b)?;
        Ok(self.first_failure(|s| self.value_at(s, x) == a && !self.solution_after(s, x, b)))
    }

    pub fn interchangeable(&self, x: Var, a: Val, b: Val) -> Result<Verdict, OracleError> {
        let forward = self.substitutable(x, a, b)?;
        if !forward.holds {
            return Ok(forward);
        }
        self.substitutable(x, b, a)
    }

    pub fn removable(&self, x: Var, a: Val) -> Result<Verdict, OracleError> {
        self.require_value(x, a)?;
        let range = self.value_range(x);
        Ok(self.first_failure(|s| {
            self.value_at(s, x) == a
                && !range
                    .iter()
                    .any(|&b| b != a && self.solution_after(s, x, b))
        }))
    }

    pub fn inconsistent(&self, x: Var, a: Val) -> Result<Verdict, OracleError> {
        self.require_value(x, a)?;
        Ok(self.first_failure(|s| self.value_at(s, x) == a))
    }

    pub fn implied(&self, x: Var, a: Val) -> Result<Verdict, OracleError> {
        self.require_value(x, a)?;
        Ok(self.first_failure(|s| self.value_at(s, x) != a))
    }

    pub fn determined(&self, x: Var) -> Result<Verdict, OracleError> {
        self.require_var(x)?;
        let range = self.value_range(x);
        Ok(self.first_failure(|s| {
            let own = self.value_at(s, x);
            range
                .iter()
                .any(|&b| b != own && self.solution_after(s, x, b))
        }))
    }

    pub fn irrelevant(&self, x: Var) -> Result<Verdict, OracleError> {
        self.require_var(x)?;
        let range = self.value_range(x);
        Ok(self.first_failure(|s| range.iter().any(|&a| !self.solution_after(s, x, a))))
    }

    pub fn dependent(&self, on: &[Var], y: Var) -> Result<Verdict, OracleError> {
        self.require_var(y)?;
        for &x in on {
            self.require_var(x)?;
        }
        if on.contains(&y) {
            return Err(OracleError::TargetInVarSet(y));
        }
        // first solution seen for each assignment of `on`
        let mut seen: HashMap<Vec<Val>, usize> = HashMap::new();
        for &s in &self.solutions {
            let key: Vec<Val> = on.iter().map(|&x| self.value_at(s, x)).collect();
            match seen.get(&key) {
                Some(&first) if self.value_at(first, y) != self.value_at(s, y) => {
                    return Ok(Verdict::refuted(Evidence::SolutionPair(
                        self.decode(first),
                        self.decode(s),
                    )));
                }
                Some(_) => {}
                None => {
                    seen.insert(key, s);
                }
            }
        }
        Ok(Verdict::yes())
    }

    pub fn check(&self, query: &PropertyQuery) -> Result<Verdict, OracleError> {
        match query {
            PropertyQuery::Fixable { var, value } => self.fixable(*var, *value),
            PropertyQuery::Substitutable { var, from, to } => self.substitutable(*var, *from, *to),
            PropertyQuery::Interchangeable { var, a, b } => self.interchangeable(*var, *a, *b),
            PropertyQuery::Removable { var, value } => self.removable(*var, *value),
            PropertyQuery::Inconsistent { var, value } => self.inconsistent(*var, *value),
            PropertyQuery::Implied { var, value } => self.implied(*var, *value),
            PropertyQuery::Determined { var } => self.determined(*var),
            PropertyQuery::Dependent { on, target } => self.dependent(on, *target),
            PropertyQuery::Irrelevant { var } => self.irrelevant(*var),
        }
    }

    /// Whether every solution is mapped to a solution.
    pub fn is_solution_preserving(&self, tau: &Transformation) -> Result<Verdict, OracleError> {
        let image: Box<ImageFn<'_>> = match tau {
            Transformation::Table(rows) => {
                let map: HashMap<&Assignment, &Assignment> =
                    rows.iter().map(|(from, to)| (from, to)).collect();
                for t in self.space.iter() {
                    match map.get(&t) {
                        None => return Err(OracleError::PartialTransformation(t)),
                        Some(img) if !self.space.contains_tuple(img) => {
                            return Err(OracleError::LeavesSpace(t))
                        }
                        Some(_) => {}
                    }
                }
                let owned: HashMap<Assignment, Assignment> = rows.iter().cloned().collect();
                Box::new(move |t| Ok(owned[t].clone()))
            }
            canonical => {
                for a in canonical_values(canonical) {
                    self.require_value(a.0, a.1)?;
                }
                let space = &self.space;
                Box::new(move |t| {
                    let img = canonical.canonical_image(t).expect("canonical transformation");
                    if space.contains_tuple(&img) {
                        Ok(img)
                    } else {
                        Err(OracleError::LeavesSpace(t.clone()))
                    }
                })
            }
        };
        for t in self.solutions() {
            if !self.inst.is_solution(&image(&t)?) {
                return Ok(Verdict::refuted(Evidence::Solution(t)));
            }
        }
        Ok(Verdict::yes())
    }
}

fn canonical_values(tau: &Transformation) -> Vec<(Var, Val)> {
    match *tau {
        Transformation::Fix { var, value } => vec![(var, value)],
        Transformation::Substitute { var, from, to } => vec![(var, from), (var, to)],
        Transformation::Swap { var, a, b } => vec![(var, a), (var, b)],
        _ => vec![],
    }
}

pub fn enumerate_solutions(
    inst: &CspInstance,
    space: &SearchSpace,
) -> Result<Vec<Assignment>, OracleError> {
    Ok(Oracle::new(inst, space)?.solutions().collect())
}

pub fn check(
    inst: &CspInstance,
    space: &SearchSpace,
    query: &PropertyQuery,
) -> Result<bool, OracleError> {
    Ok(Oracle::new(inst, space)?.check(query)?.holds)
}

pub fn check_fixable(inst: &CspInstance, s: &SearchSpace, x: Var, a: Val) -> Result<bool, OracleError> {
    check(inst, s, &PropertyQuery::Fixable { var: x, value: a })
}

pub fn check_substitutable(
    inst: &CspInstance,
    s: &SearchSpace,
    x: Var,
    a: Val,
    b: Val,
) -> Result<bool, OracleError> {
    check(inst, s, &PropertyQuery::Substitutable { var: x, from: a, to: b })
}

pub fn check_interchangeable(
    inst: &CspInstance,
    s: &SearchSpace,
    x: Var,
    a: Val,
    b: Val,
) -> Result<bool, OracleError> {
    check(inst, s, &PropertyQuery::Interchangeable { var: x, a, b })
}

pub fn check_removable(inst: &CspInstance, s: &SearchSpace, x: Var, a: Val) -> Result<bool, OracleError> {
    check(inst, s, &PropertyQuery::Removable { var: x, value: a })
}

pub fn check_inconsistent(
    inst: &CspInstance,
    s: &SearchSpace,
    x: Var,
    a: Val,
) -> Result<bool, OracleError> {
    check(inst, s, &PropertyQuery::Inconsistent { var: x, value: a })
}

pub fn check_implied(inst: &CspInstance, s: &SearchSpace, x: Var, a: Val) -> Result<bool, OracleError> {
    check(inst, s, &PropertyQuery::Implied { var: x, value: a })
}

pub fn check_determined(inst: &CspInstance, s: &SearchSpace, x: Var) -> Result<bool, OracleError> {
    check(inst, s, &PropertyQuery::Determined { var: x })
}

pub fn check_dependent(
    inst: &CspInstance,
    s: &SearchSpace,
    on: &[Var],
    y: Var,
) -> Result<bool, OracleError> {
    check(
        inst,
        s,
        &PropertyQuery::Dependent {
            on: on.to_vec(),
            target: y,
        },
    )
}

pub fn check_irrelevant(inst: &CspInstance, s: &SearchSpace, x: Var) -> Result<bool, OracleError> {
    check(inst, s, &PropertyQuery::Irrelevant { var: x })
}

pub fn is_solution_preserving(
    inst: &CspInstance,
    s: &SearchSpace,
    tau: &Transformation,
) -> Result<bool, OracleError> {
    Ok(Oracle::new(inst, s)?.is_solution_preserving(tau)?.holds)
}
