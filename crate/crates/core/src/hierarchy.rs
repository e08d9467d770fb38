//! The logical relationships between the properties, as executable edges.
//!
//! Each edge relates two formula templates over a parameter tuple drawn
//! from `(x, a, b, V, y)`. Instantiating both sides against the exact
//! oracle yields truth values; an implication or biconditional that fails
//! on some instantiation is a violation. Biconditionals whose left side is
//! a single property also serve as derived detectors.

use std::fmt;

use crate::model::{CspInstance, SearchSpace, Val, Var};
use crate::oracle::{Oracle, OracleError};
use crate::query::{PropertyKind, PropertyQuery};

/// Default cap on `|V|` when instantiating dependence edges.
pub const DEFAULT_DEP_MAX: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarSlot {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValSlot {
    A,
    B,
    /// The value bound by the innermost quantifier.
    Bound,
}

/// A property applied to slots; dependence reads `V` from the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub kind: PropertyKind,
    pub var: VarSlot,
    pub vals: Vec<ValSlot>,
}

impl Atom {
    pub fn new(kind: PropertyKind, var: VarSlot, vals: &[ValSlot]) -> Atom {
        Atom {
            kind,
            var,
            vals: vals.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Atom(Atom),
    And(Vec<Formula>),
    /// Over the active values of the slot's variable, skipping `except`.
    ForAllValues {
        of: VarSlot,
        except: Option<ValSlot>,
        body: Box<Formula>,
    },
    ExistsValue {
        of: VarSlot,
        except: Option<ValSlot>,
        body: Box<Formula>,
    },
    /// For every assignment `α` of `V` within the space, `body` evaluated
    /// on the space restricted to `V = α`.
    ForEachAssignment(Box<Formula>),
    /// Binds `x` to every variable in turn.
    ForAllVars(Box<Formula>),
    /// Exactly one solution in the space.
    UniqueSolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Implies,
    Iff,
}

/// Which parameters an edge is instantiated over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Params {
    /// Every variable `x`.
    X,
    /// Every `x` and `a ∈ active(x)`.
    XA,
    /// Every `x` and `a, b ∈ active(x)`.
    XAB,
    /// Every `V` with `|V|` up to the cap and `y ∉ V`.
    VY,
    /// A single instantiation with no parameters.
    Global,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationshipEdge {
    pub name: &'static str,
    pub kind: EdgeKind,
    pub params: Params,
    pub lhs: Formula,
    pub rhs: Formula,
}

impl RelationshipEdge {
    /// Swaps the two sides; used for negative controls.
    pub fn reversed(&self) -> RelationshipEdge {
        RelationshipEdge {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            ..self.clone()
        }
    }
}

fn atom(kind: PropertyKind, var: VarSlot, vals: &[ValSlot]) -> Formula {
    Formula::Atom(Atom::new(kind, var, vals))
}

fn for_all(of: VarSlot, except: Option<ValSlot>, body: Formula) -> Formula {
    Formula::ForAllValues {
        of,
        except,
        body: Box::new(body),
    }
}

fn exists(of: VarSlot, except: Option<ValSlot>, body: Formula) -> Formula {
    Formula::ExistsValue {
        of,
        except,
        body: Box::new(body),
    }
}

pub fn edge_catalog() -> Vec<RelationshipEdge> {
    use PropertyKind::*;
    use ValSlot::{Bound, A, B};
    use VarSlot::{X, Y};
    let edge = |name, kind, params, lhs, rhs| RelationshipEdge {
        name,
        kind,
        params,
        lhs,
        rhs,
    };
    vec![
        edge(
            "dependence-determinacy",
            EdgeKind::Iff,
            Params::VY,
            atom(Dependent, Y, &[]),
            Formula::ForEachAssignment(Box::new(exists(Y, None, atom(Implied, Y, &[Bound])))),
        ),
        edge(
            "irrelevance-fixability",
            EdgeKind::Iff,
            Params::X,
            atom(Irrelevant, X, &[]),
            for_all(X, None, atom(Fixable, X, &[Bound])),
        ),
        edge(
            "determinacy-implication",
            EdgeKind::Implies,
            Params::XA,
            atom(Implied, X, &[A]),
            atom(Determined, X, &[]),
        ),
        edge(
            "implication-fixability",
            EdgeKind::Implies,
            Params::XA,
            atom(Implied, X, &[A]),
            atom(Fixable, X, &[A]),
        ),
        edge(
            "implication-inconsistency",
            EdgeKind::Iff,
            Params::XA,
            atom(Implied, X, &[A]),
            for_all(X, Some(A), atom(Inconsistent, X, &[Bound])),
        ),
        edge(
            "fixability-substitutability",
            EdgeKind::Iff,
            Params::XA,
            atom(Fixable, X, &[A]),
            for_all(X, None, atom(Substitutable, X, &[Bound, A])),
        ),
        edge(
            "inconsistency-substitutability",
            EdgeKind::Implies,
            Params::XA,
            atom(Inconsistent, X, &[A]),
            for_all(X, None, atom(Substitutable, X, &[A, Bound])),
        ),
        edge(
            "inconsistency-removability",
            EdgeKind::Implies,
            Params::XA,
            atom(Inconsistent, X, &[A]),
            atom(Removable, X, &[A]),
        ),
        edge(
            "substitutability-removability",
            EdgeKind::Implies,
            Params::XA,
            exists(X, Some(A), atom(Substitutable, X, &[A, Bound])),
            atom(Removable, X, &[A]),
        ),
        edge(
            "interchangeability-definition",
            EdgeKind::Iff,
            Params::XAB,
            atom(Interchangeable, X, &[A, B]),
            Formula::And(vec![
                atom(Substitutable, X, &[A, B]),
                atom(Substitutable, X, &[B, A]),
            ]),
        ),
        edge(
            "unique-solution",
            EdgeKind::Implies,
            Params::Global,
            Formula::UniqueSolution,
            Formula::ForAllVars(Box::new(Formula::And(vec![
                exists(X, None, atom(Implied, X, &[Bound])),
                atom(Determined, X, &[]),
            ]))),
        ),
    ]
}

/// One instantiation of the edge parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Binding {
    pub x: Option<Var>,
    pub a: Option<Val>,
    pub b: Option<Val>,
    pub on: Vec<Var>,
    pub y: Option<Var>,
}

impl Binding {
    pub fn render(&self, inst: &CspInstance) -> String {
        let mut parts = Vec::new();
        if let Some(x) = self.x {
            parts.push(format!("x={}", inst.var_name(x)));
        }
        if let Some(a) = self.a {
            parts.push(format!("a={}", inst.val_name(a)));
        }
        if let Some(b) = self.b {
            parts.push(format!("b={}", inst.val_name(b)));
        }
        if let Some(y) = self.y {
            let on: Vec<&str> = self.on.iter().map(|&v| inst.var_name(v)).collect();
            parts.push(format!("V={{{}}}", on.join(",")));
            parts.push(format!("y={}", inst.var_name(y)));
        }
        parts.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub edge: &'static str,
    pub binding: Binding,
    pub lhs: bool,
    pub rhs: bool,
}

impl Violation {
    pub fn render(&self, inst: &CspInstance) -> String {
        format!(
            "{} [{}]: lhs={} rhs={}",
            self.edge,
            self.binding.render(inst),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Clone, Copy, Default)]
struct Env {
    x: Option<Var>,
    a: Option<Val>,
    b: Option<Val>,
    y: Option<Var>,
    bound: Option<Val>,
}

struct Eval<'b> {
    on: &'b [Var],
}

impl Eval<'_> {
    fn var(&self, env: &Env, slot: VarSlot) -> Var {
        match slot {
            VarSlot::X => env.x,
            VarSlot::Y => env.y,
        }
        .expect("variable slot bound by the edge parameters")
    }

    fn val(&self, env: &Env, slot: ValSlot) -> Val {
        match slot {
            ValSlot::A => env.a,
            ValSlot::B => env.b,
            ValSlot::Bound => env.bound,
        }
        .expect("value slot bound by the edge parameters")
    }

    fn query(&self, env: &Env, at: &Atom) -> PropertyQuery {
        let var = self.var(env, at.var);
        let v = |i: usize| self.val(env, at.vals[i]);
        match at.kind {
            PropertyKind::Fixable => PropertyQuery::Fixable { var, value: v(0) },
            PropertyKind::Substitutable => PropertyQuery::Substitutable {
                var,
                from: v(0),
                to: v(1),
            },
            PropertyKind::Interchangeable => PropertyQuery::Interchangeable {
                var,
                a: v(0),
                b: v(1),
            },
            PropertyKind::Removable => PropertyQuery::Removable { var, value: v(0) },
            PropertyKind::Inconsistent => PropertyQuery::Inconsistent { var, value: v(0) },
            PropertyKind::Implied => PropertyQuery::Implied { var, value: v(0) },
            PropertyKind::Determined => PropertyQuery::Determined { var },
            PropertyKind::Dependent => PropertyQuery::Dependent {
                on: self.on.to_vec(),
                target: var,
            },
            PropertyKind::Irrelevant => PropertyQuery::Irrelevant { var },
        }
    }

    fn eval(&self, oracle: &Oracle<'_>, env: Env, f: &Formula) -> Result<bool, OracleError> {
        match f {
            Formula::Atom(at) => Ok(oracle.check(&self.query(&env, at))?.holds),
            Formula::And(parts) => {
                for p in parts {
                    if !self.eval(oracle, env, p)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::ForAllValues { of, except, body } | Formula::ExistsValue { of, except, body } => {
                let universal = matches!(f, Formula::ForAllValues { .. });
                let skip = except.map(|s| self.val(&env, s));
                let x = self.var(&env, *of);
                for &c in oracle.space().active(x) {
                    if Some(c) == skip {
                        continue;
                    }
                    let inner = Env {
                        bound: Some(c),
                        ..env
                    };
                    if self.eval(oracle, inner, body)? != universal {
                        return Ok(!universal);
                    }
                }
                Ok(universal)
            }
            Formula::ForEachAssignment(body) => {
                let restricted = SearchSpace::new(
                    (0..oracle.space().num_vars())
                        .map(|i| {
                            let x = Var::from(i);
                            if self.on.contains(&x) {
                                oracle.space().active(x).to_vec()
                            } else {
                                vec![oracle.space().active(x)[0]]
                            }
                        })
                        .collect(),
                )?;
                for alpha in restricted.iter() {
                    let mut space = oracle.space().clone();
                    for &v in self.on {
                        space = space.select(v, alpha.value(v));
                    }
                    if !self.eval(&oracle.restricted(&space)?, env, body)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::ForAllVars(body) => {
                for i in 0..oracle.space().num_vars() {
                    let inner = Env {
                        x: Some(Var::from(i)),
                        ..env
                    };
                    if !self.eval(oracle, inner, body)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::UniqueSolution => Ok(oracle.solution_count() == 1),
        }
    }
}

/// Truth values of both sides of `edge` under `binding`.
pub fn evaluate_edge(
    oracle: &Oracle<'_>,
    edge: &RelationshipEdge,
    binding: &Binding,
) -> Result<(bool, bool), OracleError> {
    let ev = Eval { on: &binding.on };
    let env = Env {
        x: binding.x,
        a: binding.a,
        b: binding.b,
        y: binding.y,
        bound: None,
    };
    Ok((ev.eval(oracle, env, &edge.lhs)?, ev.eval(oracle, env, &edge.rhs)?))
}

/// Every admissible parameter binding for `params`.
pub fn bindings(space: &SearchSpace, params: Params, dep_max: usize) -> Vec<Binding> {
    let n = space.num_vars();
    let vars = || (0..n).map(Var::from);
    match params {
        Params::Global => vec![Binding::default()],
        Params::X => vars()
            .map(|x| Binding {
                x: Some(x),
                ..Binding::default()
            })
            .collect(),
        Params::XA => vars()
            .flat_map(|x| {
                space.active(x).iter().map(move |&a| Binding {
                    x: Some(x),
                    a: Some(a),
                    ..Binding::default()
                })
            })
            .collect(),
        Params::XAB => vars()
            .flat_map(|x| {
                let act = space.active(x);
                act.iter().flat_map(move |&a| {
                    act.iter().map(move |&b| Binding {
                        x: Some(x),
                        a: Some(a),
                        b: Some(b),
                        ..Binding::default()
                    })
                })
            })
            .collect(),
        Params::VY => {
            let mut out = Vec::new();
            for on in subsets_up_to(n, dep_max) {
                for y in vars().filter(|y| !on.contains(y)) {
                    out.push(Binding {
                        on: on.clone(),
                        y: Some(y),
                        ..Binding::default()
                    });
                }
            }
            out
        }
    }
}

/// Subsets of `{0..n}` with at most `k` elements, by size then lexicographically.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<Var>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<Var>> = vec![Vec::new()];
    for _ in 0..k.min(n) {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |v| v.index() + 1);
            for i in start..n {
                let mut t = s.clone();
                t.push(Var::from(i));
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn validate_hierarchy(
    inst: &CspInstance,
    space: &SearchSpace,
    dep_max: usize,
) -> Result<Vec<Violation>, OracleError> {
    validate_with_catalog(inst, space, &edge_catalog(), dep_max)
}

pub fn validate_with_catalog(
    inst: &CspInstance,
    space: &SearchSpace,
    catalog: &[RelationshipEdge],
    dep_max: usize,
) -> Result<Vec<Violation>, OracleError> {
    let oracle = Oracle::new(inst, space)?;
    let mut out = Vec::new();
    for edge in catalog {
        for binding in bindings(space, edge.params, dep_max) {
            let (lhs, rhs) = evaluate_edge(&oracle, edge, &binding)?;
            let ok = match edge.kind {
                EdgeKind::Implies => !lhs || rhs,
                EdgeKind::Iff => lhs == rhs,
            };
            if !ok {
                out.push(Violation {
                    edge: edge.name,
                    binding,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(out)
}

/// The biconditional whose left side is a bare `kind` atom, if any.
pub fn derivation_edge(kind: PropertyKind) -> Option<RelationshipEdge> {
    edge_catalog().into_iter().find(|e| {
        e.kind == EdgeKind::Iff && matches!(&e.lhs, Formula::Atom(at) if at.kind == kind)
    })
}

/// Decides `query` through the right side of its defining biconditional,
/// so the verdict is assembled from other properties. `None` when no edge
/// defines the kind or the query's argument shape does not fit the edge.
pub fn derived_check(
    oracle: &Oracle<'_>,
    query: &PropertyQuery,
) -> Result<Option<bool>, OracleError> {
    let Some(edge) = derivation_edge(query.kind()) else {
        return Ok(None);
    };
    let Formula::Atom(at) = &edge.lhs else {
        return Ok(None);
    };
    let mut binding = Binding::default();
    let vals = query.values();
    if vals.len() != at.vals.len() {
        return Ok(None);
    }
    for (slot, v) in at.vals.iter().zip(vals) {
        match slot {
            ValSlot::A => binding.a = Some(v),
            ValSlot::B => binding.b = Some(v),
            ValSlot::Bound => return Ok(None),
        }
    }
    match query {
        PropertyQuery::Dependent { on, target } => {
            binding.on = on.clone();
            binding.y = Some(*target);
        }
        q => binding.x = Some(q.var()),
    }
    for &v in &query.values() {
        if !oracle.space().contains(query.var(), v) {
            return Err(OracleError::ValueNotActive {
                var: query.var(),
                value: v,
            });
        }
    }
    let ev = Eval { on: &binding.on };
    let env = Env {
        x: binding.x,
        a: binding.a,
        b: binding.b,
        y: binding.y,
        bound: None,
    };
    Ok(Some(ev.eval(oracle, env, &edge.rhs)?))
}

impl fmt::Display for VarSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarSlot::X => "x",
            VarSlot::Y => "y",
        })
    }
}

impl fmt::Display for ValSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValSlot::A => "a",
            ValSlot::B => "b",
            ValSlot::Bound => "c",
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(at) => {
                write!(f, "{}(S", at.kind)?;
                if at.kind == PropertyKind::Dependent {
                    write!(f, ",V")?;
                }
                write!(f, ",{}", at.var)?;
                for v in &at.vals {
                    write!(f, ",{v}")?;
                }
                write!(f, ")")
            }
            Formula::And(parts) => {
                let s: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "({})", s.join(" ∧ "))
            }
            Formula::ForAllValues { of, except, body } | Formula::ExistsValue { of, except, body } => {
                let q = if matches!(self, Formula::ForAllValues { .. }) {
                    "∀"
                } else {
                    "∃"
                };
                write!(f, "{q}c∈active({of})")?;
                if let Some(e) = except {
                    write!(f, "∖{{{e}}}")?;
                }
                write!(f, " {body}")
            }
            Formula::ForEachAssignment(body) => write!(f, "∀α∈S[V] {body}[S:=σ(V=α)]"),
            Formula::ForAllVars(body) => write!(f, "∀x {body}"),
            Formula::UniqueSolution => write!(f, "|Sol∩S|=1"),
        }
    }
}

impl fmt::Display for RelationshipEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.kind {
            EdgeKind::Implies => "→",
            EdgeKind::Iff => "⟺",
        };
        write!(f, "{}: {} {arrow} {}", self.name, self.lhs, self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_eleven_distinct_edges() {
        let cat = edge_catalog();
        assert_eq!(cat.len(), 11);
        let mut names: Vec<&str> = cat.iter().map(|e| e.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 11);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets_up_to(3, 0), vec![Vec::<Var>::new()]);
        assert_eq!(subsets_up_to(4, 2).len(), 1 + 4 + 6);
        assert_eq!(subsets_up_to(2, 5).len(), 4);
    }

    #[test]
    fn derivable_kinds() {
        for kind in [
            PropertyKind::Dependent,
            PropertyKind::Irrelevant,
            PropertyKind::Implied,
            PropertyKind::Fixable,
            PropertyKind::Interchangeable,
        ] {
            assert!(derivation_edge(kind).is_some(), "{kind}");
        }
        assert!(derivation_edge(PropertyKind::Removable).is_none());
    }

    #[test]
    fn reversal_swaps_sides() {
        let e = &edge_catalog()[2];
        let r = e.reversed();
        assert_eq!(r.lhs, e.rhs);
        assert_eq!(r.reversed(), *e);
    }
}
