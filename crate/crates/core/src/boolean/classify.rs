use std::fmt;

use super::{BoolConstraint, BooleanFormula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchaeferClass {
    Horn,
    DualHorn,
    TwoCnf,
    Affine,
    Unrestricted,
}

impl SchaeferClass {
    /// The tractable classes in canonical priority order.
    pub const TRACTABLE: [SchaeferClass; 4] = [
        SchaeferClass::Horn,
        SchaeferClass::DualHorn,
        SchaeferClass::TwoCnf,
        SchaeferClass::Affine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchaeferClass::Horn => "horn",
            SchaeferClass::DualHorn => "dual-horn",
            SchaeferClass::TwoCnf => "2cnf",
            SchaeferClass::Affine => "affine",
            SchaeferClass::Unrestricted => "unrestricted",
        }
    }

    pub fn parse(s: &str) -> Option<SchaeferClass> {
        SchaeferClass::TRACTABLE
            .into_iter()
            .chain([SchaeferClass::Unrestricted])
            .find(|c| c.name() == s)
    }

    /// Whether a single constraint is expressible in this class.
    pub fn admits(self, c: &BoolConstraint) -> bool {
        match (self, c) {
            (SchaeferClass::Horn, BoolConstraint::Clause(cl)) => cl.positives() <= 1,
            (SchaeferClass::DualHorn, BoolConstraint::Clause(cl)) => cl.negatives() <= 1,
            (SchaeferClass::TwoCnf, BoolConstraint::Clause(cl)) => cl.len() <= 2,
            (SchaeferClass::Affine, BoolConstraint::Equation(_)) => true,
            (SchaeferClass::Unrestricted, _) => true,
            _ => false,
        }
    }

    pub fn admits_all<'a, I>(self, cs: I) -> bool
    where
        I: IntoIterator<Item = &'a BoolConstraint>,
    {
        cs.into_iter().all(|c| self.admits(c))
    }
}

impl fmt::Display for SchaeferClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Every tractable class the formula belongs to, in canonical order.
    pub applicable: Vec<SchaeferClass>,
    /// The first applicable class, or `Unrestricted`.
    pub primary: SchaeferClass,
}

impl Classification {
    pub fn contains(&self, cls: SchaeferClass) -> bool {
        cls == SchaeferClass::Unrestricted || self.applicable.contains(&cls)
    }
}

/// Syntactic classification. Formulas mixing clauses and equations are
/// never assigned a tractable class.
pub fn classify_schaefer(f: &BooleanFormula) -> Classification {
    let constraints = f.constraints();
    let applicable: Vec<SchaeferClass> = SchaeferClass::TRACTABLE
        .into_iter()
        .filter(|cls| cls.admits_all(&constraints))
        .collect();
    let primary = applicable
        .first()
        .copied()
        .unwrap_or(SchaeferClass::Unrestricted);
    Classification {
        applicable,
        primary,
    }
}
