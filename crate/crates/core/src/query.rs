use std::fmt;

use crate::hierarchy::subsets_up_to;
use crate::model::{CspInstance, SearchSpace, Val, Var};

/// The nine structural properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyKind {
    Fixable,
    Substitutable,
    Interchangeable,
    Removable,
    Inconsistent,
    Implied,
    Determined,
    Dependent,
    Irrelevant,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 9] = [
        PropertyKind::Fixable,
        PropertyKind::Substitutable,
        PropertyKind::Interchangeable,
        PropertyKind::Removable,
        PropertyKind::Inconsistent,
        PropertyKind::Implied,
        PropertyKind::Determined,
        PropertyKind::Dependent,
        PropertyKind::Irrelevant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyKind::Fixable => "fixable",
            PropertyKind::Substitutable => "substitutable",
            PropertyKind::Interchangeable => "interchangeable",
            PropertyKind::Removable => "removable",
            PropertyKind::Inconsistent => "inconsistent",
            PropertyKind::Implied => "implied",
            PropertyKind::Determined => "determined",
            PropertyKind::Dependent => "dependent",
            PropertyKind::Irrelevant => "irrelevant",
        }
    }

    pub fn parse(s: &str) -> Option<PropertyKind> {
        PropertyKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A property instance to decide. Each variant carries exactly the
/// arguments its kind takes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyQuery {
    Fixable { var: Var, value: Val },
    Substitutable { var: Var, from: Val, to: Val },
    Interchangeable { var: Var, a: Val, b: Val },
    Removable { var: Var, value: Val },
    Inconsistent { var: Var, value: Val },
    Implied { var: Var, value: Val },
    Determined { var: Var },
    Dependent { on: Vec<Var>, target: Var },
    Irrelevant { var: Var },
}

impl PropertyQuery {
    pub fn kind(&self) -> PropertyKind {
        match self {
            PropertyQuery::Fixable { .. } => PropertyKind::Fixable,
            PropertyQuery::Substitutable { .. } => PropertyKind::Substitutable,
            PropertyQuery::Interchangeable { .. } => PropertyKind::Interchangeable,
            PropertyQuery::Removable { .. } => PropertyKind::Removable,
            PropertyQuery::Inconsistent { .. } => PropertyKind::Inconsistent,
            PropertyQuery::Implied { .. } => PropertyKind::Implied,
            PropertyQuery::Determined { .. } => PropertyKind::Determined,
            PropertyQuery::Dependent { .. } => PropertyKind::Dependent,
            PropertyQuery::Irrelevant { .. } => PropertyKind::Irrelevant,
        }
    }

    /// The subject variable (the target for dependence).
    pub fn var(&self) -> Var {
        match *self {
            PropertyQuery::Fixable { var, .. }
            | PropertyQuery::Substitutable { var, .. }
            | PropertyQuery::Interchangeable { var, .. }
            | PropertyQuery::Removable { var, .. }
            | PropertyQuery::Inconsistent { var, .. }
            | PropertyQuery::Implied { var, .. }
            | PropertyQuery::Determined { var }
            | PropertyQuery::Irrelevant { var } => var,
            PropertyQuery::Dependent { target, .. } => target,
        }
    }

    /// Values mentioned by the query, in argument order.
    pub fn values(&self) -> Vec<Val> {
        match *self {
            PropertyQuery::Fixable { value, .. }
            | PropertyQuery::Removable { value, .. }
            | PropertyQuery::Inconsistent { value, .. }
            | PropertyQuery::Implied { value, .. } => vec![value],
            PropertyQuery::Substitutable { from, to, .. } => vec![from, to],
            PropertyQuery::Interchangeable { a, b, .. } => vec![a, b],
            _ => vec![],
        }
    }

    /// Every variable the query mentions.
    pub fn vars(&self) -> Vec<Var> {
        match self {
            PropertyQuery::Dependent { on, target } => {
                let mut v = on.clone();
                v.push(*target);
                v
            }
            q => vec![q.var()],
        }
    }

    /// Arguments rendered with the instance's names, e.g. `x1 R G` or `{z,w} p`.
    pub fn render_args(&self, inst: &CspInstance) -> Vec<String> {
        match self {
            PropertyQuery::Dependent { on, target } => {
                let names: Vec<&str> = on.iter().map(|&x| inst.var_name(x)).collect();
                vec![
                    format!("{{{}}}", names.join(",")),
                    inst.var_name(*target).to_string(),
                ]
            }
            q => {
                let mut out = vec![inst.var_name(q.var()).to_string()];
                out.extend(q.values().into_iter().map(|a| inst.val_name(a).to_string()));
                out
            }
        }
    }

    pub fn render(&self, inst: &CspInstance) -> String {
        format!("{} {}", self.kind(), self.render_args(inst).join(" "))
    }
}

/// Every admissible query of the given kinds, in canonical order: kind,
/// then variable, then values in domain order. Dependence ranges over
/// nonempty `V` with `|V| ≤ dep_max` and `y ∉ V`.
pub fn enumerate_queries(
    space: &SearchSpace,
    kinds: &[PropertyKind],
    dep_max: usize,
) -> Vec<PropertyQuery> {
    let vars: Vec<Var> = (0..space.num_vars()).map(Var::from).collect();
    let mut out = Vec::new();
    for &kind in kinds {
        if kind == PropertyKind::Dependent {
            for &target in &vars {
                for on in subsets_up_to(space.num_vars(), dep_max) {
                    if !on.is_empty() && !on.contains(&target) {
                        out.push(PropertyQuery::Dependent { on, target });
                    }
                }
            }
            continue;
        }
        for &var in &vars {
            let act = space.active(var);
            match kind {
                PropertyKind::Determined => out.push(PropertyQuery::Determined { var }),
                PropertyKind::Irrelevant => out.push(PropertyQuery::Irrelevant { var }),
                PropertyKind::Substitutable | PropertyKind::Interchangeable => {
                    for &a in act {
                        for &b in act {
                            if a == b || (kind == PropertyKind::Interchangeable && a > b) {
                                continue;
                            }
                            out.push(if kind == PropertyKind::Substitutable {
                                PropertyQuery::Substitutable { var, from: a, to: b }
                            } else {
                                PropertyQuery::Interchangeable { var, a, b }
                            });
                        }
                    }
                }
                _ => {
                    for &value in act {
                        out.push(match kind {
                            PropertyKind::Fixable => PropertyQuery::Fixable { var, value },
                            PropertyKind::Removable => PropertyQuery::Removable { var, value },
                            PropertyKind::Inconsistent => PropertyQuery::Inconsistent { var, value },
                            _ => PropertyQuery::Implied { var, value },
                        });
                    }
                }
            }
        }
    }
    out
}
