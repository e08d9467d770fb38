//! Properties of values and variables in finite-domain constraint
//! satisfaction problems: exact checks, their logical relationships,
//! sound local detection, polynomial checks for tractable boolean
//! languages and a simplifier driven by them.

pub mod boolean;
pub mod crosscheck;
pub mod hierarchy;
pub mod instances;
pub mod local;
pub mod model;
pub mod oracle;
pub mod query;
pub mod simplify;

pub use model::{
    Assignment, Constraint, CspInstance, ModelError, Relation, SearchSpace, Selection, Tuple, Val,
    Var,
};
pub use oracle::{Oracle, OracleConfig, OracleError, Quantifier, Transformation, Verdict};
pub use query::{PropertyKind, PropertyQuery};
