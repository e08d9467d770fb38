//! The worked examples, bundled.

use super::{parse_csp, parse_dimacs};
use crate::boolean::BooleanFormula;
use crate::model::{CspInstance, SearchSpace};

pub const COLORING_CSP: &str = include_str!("../../fixtures/coloring.csp");
pub const EQUIVALENCES_CSP: &str = include_str!("../../fixtures/equivalences.csp");
pub const TABLES_CSP: &str = include_str!("../../fixtures/tables.csp");
pub const REMOVAL_TRAP_CSP: &str = include_str!("../../fixtures/removal_trap.csp");
pub const PURE_CNF: &str = include_str!("../../fixtures/pure.cnf");

fn load(text: &str) -> (CspInstance, SearchSpace) {
    parse_csp(text).expect("bundled fixture parses")
}

/// Five-node 3-coloring.
pub fn coloring() -> (CspInstance, SearchSpace) {
    load(COLORING_CSP)
}

/// Seven boolean variables with a unit, an implication and two equivalences.
pub fn boolean_equivalences() -> (CspInstance, SearchSpace) {
    load(EQUIVALENCES_CSP)
}

/// Three variables over `0 1 2` with three binary tables.
pub fn three_tables() -> (CspInstance, SearchSpace) {
    load(TABLES_CSP)
}

/// `x ≤ y ∧ x ≥ y ∧ x ≠ 1 ∧ x ≠ 3` over `1 2 3`.
pub fn local_removal_trap() -> (CspInstance, SearchSpace) {
    load(REMOVAL_TRAP_CSP)
}

/// `(x ∨ y ∨ z)(x ∨ ¬y ∨ ¬z)(y ∨ ¬z)`.
pub fn pure_literal_cnf() -> BooleanFormula {
    parse_dimacs(PURE_CNF).expect("bundled fixture parses").formula
}
