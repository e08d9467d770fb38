//! Satisfiability-preserving reduction of the search space.
//!
//! Fixing a fixable value and removing a removable value both keep the
//! instance equi-satisfiable. The fixpoint loop only applies steps proved
//! by a sound detector; local removability is never accepted.

use std::fmt;

use thiserror::Error;

use crate::boolean::{
    classify_schaefer, tract_check, AffineEquation, BooleanFormula, Lit, SchaeferClass,
    TractableError, FALSE, TRUE,
};
use crate::local::{default_covering, local_check, pure_value_fixable, Covering, LocalError};
use crate::model::{CspInstance, SearchSpace, Val, Var};
use crate::oracle::{Oracle, OracleError};
use crate::query::PropertyQuery;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Detector {
    PureValue,
    TractableImplied,
    TractableFixable,
    TractableInconsistent,
    TractableSubstitutable,
    LocalImplied,
    LocalFixable,
    LocalInconsistent,
    LocalSubstitutable,
    /// Per-subset removability. Not sound; refused everywhere.
    LocalRemovable,
    OracleFixable,
    OracleInconsistent,
    OracleRemovable,
}

/// What a detector's positive answer proves about `(x, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proof {
    Fixable,
    Inconsistent,
    /// Substitutable by a witness value.
    Substitutable,
    Removable,
}

impl Detector {
    pub const ALL: [Detector; 13] = [
        Detector::PureValue,
        Detector::TractableImplied,
        Detector::TractableFixable,
        Detector::TractableInconsistent,
        Detector::TractableSubstitutable,
        Detector::LocalImplied,
        Detector::LocalFixable,
        Detector::LocalInconsistent,
        Detector::LocalSubstitutable,
        Detector::LocalRemovable,
        Detector::OracleFixable,
        Detector::OracleInconsistent,
        Detector::OracleRemovable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Detector::PureValue => "pure-value",
            Detector::TractableImplied => "tractable-implied",
            Detector::TractableFixable => "tractable-fixable",
            Detector::TractableInconsistent => "tractable-inconsistent",
            Detector::TractableSubstitutable => "tractable-substitutable",
            Detector::LocalImplied => "local-implied",
            Detector::LocalFixable => "local-fixable",
            Detector::LocalInconsistent => "local-inconsistent",
            Detector::LocalSubstitutable => "local-substitutable",
            Detector::LocalRemovable => "local-removable",
            Detector::OracleFixable => "oracle-fixable",
            Detector::OracleInconsistent => "oracle-inconsistent",
            Detector::OracleRemovable => "oracle-removable",
        }
    }

    pub fn parse(s: &str) -> Option<Detector> {
        Detector::ALL.into_iter().find(|d| d.name() == s)
    }

    pub fn proves(self) -> Proof {
        match self {
            Detector::PureValue
            | Detector::TractableImplied
            | Detector::TractableFixable
            | Detector::LocalImplied
            | Detector::LocalFixable
            | Detector::OracleFixable => Proof::Fixable,
            Detector::TractableInconsistent
            | Detector::LocalInconsistent
            | Detector::OracleInconsistent => Proof::Inconsistent,
            Detector::TractableSubstitutable | Detector::LocalSubstitutable => Proof::Substitutable,
            Detector::LocalRemovable | Detector::OracleRemovable => Proof::Removable,
        }
    }

    pub fn is_sound(self) -> bool {
        self != Detector::LocalRemovable
    }

    /// Exponential exact checks, allowed only in test mode.
    pub fn is_exact_search(self) -> bool {
        matches!(
            self,
            Detector::OracleFixable | Detector::OracleInconsistent | Detector::OracleRemovable
        )
    }

    fn needs_formula(self) -> bool {
        matches!(
            self,
            Detector::PureValue
                | Detector::TractableImplied
                | Detector::TractableFixable
                | Detector::TractableInconsistent
                | Detector::TractableSubstitutable
        )
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Polynomial detectors only.
    Production,
    /// Also exact oracle detectors, for small instances.
    Test,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "production" => Some(Mode::Production),
            "test" => Some(Mode::Test),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplifyError {
    #[error("detector {0} is not sound and cannot justify a step")]
    UnsoundDetector(Detector),
    #[error("detector {0} needs test mode")]
    ExactSearchInProduction(Detector),
    #[error("detector {0} needs the boolean formula")]
    MissingFormula(Detector),
    #[error("value {value:?} is not active for {var:?}")]
    NotActive { var: Var, value: Val },
    #[error("detector {detector} does not justify {action}")]
    WrongJustification {
        detector: Detector,
        action: &'static str,
    },
    #[error("substitution witness must be an active value other than the removed one")]
    BadWitness,
    #[error("refusing to remove the last active value of {0:?} without an inconsistency proof")]
    LastValue(Var),
    #[error("the formula has {formula} variables but the instance has {instance}")]
    FormulaMismatch { formula: usize, instance: usize },
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Tractable(#[from] TractableError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Justification {
    pub detector: Detector,
    /// The replacement value for substitution-based removals.
    pub witness: Option<Val>,
}

impl Justification {
    pub fn by(detector: Detector) -> Justification {
        Justification {
            detector,
            witness: None,
        }
    }

    pub fn substitution(detector: Detector, witness: Val) -> Justification {
        Justification {
            detector,
            witness: Some(witness),
        }
    }
}

/// `active(x) := {a}`.
pub fn apply_fix(
    space: &SearchSpace,
    x: Var,
    a: Val,
    why: &Justification,
) -> Result<SearchSpace, SimplifyError> {
    if !why.detector.is_sound() {
        return Err(SimplifyError::UnsoundDetector(why.detector));
    }
    if why.detector.proves() != Proof::Fixable {
        return Err(SimplifyError::WrongJustification {
            detector: why.detector,
            action: "a fix",
        });
    }
    if !space.contains(x, a) {
        return Err(SimplifyError::NotActive { var: x, value: a });
    }
    Ok(space.select(x, a))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RemoveOutcome {
    Removed(SearchSpace),
    /// The last value of a variable was proved inconsistent.
    ProvedUnsatisfiable,
}

/// `active(x) := active(x) ∖ {a}`.
pub fn apply_remove(
    space: &SearchSpace,
    x: Var,
    a: Val,
    why: &Justification,
) -> Result<RemoveOutcome, SimplifyError> {
    if !why.detector.is_sound() {
        return Err(SimplifyError::UnsoundDetector(why.detector));
    }
    let proof = why.detector.proves();
    if proof == Proof::Fixable {
        return Err(SimplifyError::WrongJustification {
            detector: why.detector,
            action: "a removal",
        });
    }
    if !space.contains(x, a) {
        return Ok(RemoveOutcome::Removed(space.clone()));
    }
    if proof == Proof::Substitutable {
        match why.witness {
            Some(b) if b != a && space.contains(x, b) => {}
            _ => return Err(SimplifyError::BadWitness),
        }
    }
    match space.without(x, a) {
        Some(s) => Ok(RemoveOutcome::Removed(s)),
        None if proof == Proof::Inconsistent => Ok(RemoveOutcome::ProvedUnsatisfiable),
        None => Err(SimplifyError::LastValue(x)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Fix { var: Var, value: Val },
    Remove { var: Var, value: Val },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplificationStep {
    pub action: Action,
    pub justification: Justification,
    pub size_before: u128,
    /// Zero for the removal that proves unsatisfiability.
    pub size_after: u128,
}

impl SimplificationStep {
    /// `FIX x=a BY <detector>` or `REMOVE x!=a BY <detector>`.
    pub fn render(&self, inst: &CspInstance) -> String {
        match self.action {
            Action::Fix { var, value } => format!(
                "FIX {}={} BY {}",
                inst.var_name(var),
                inst.val_name(value),
                self.justification.detector
            ),
            Action::Remove { var, value } => format!(
                "REMOVE {}!={} BY {}",
                inst.var_name(var),
                inst.val_name(value),
                self.justification.detector
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplificationResult {
    /// Last space reached; every active set is nonempty.
    pub final_space: SearchSpace,
    pub steps: Vec<SimplificationStep>,
    /// A full scan found nothing more to do.
    pub fixpoint: bool,
    /// Some variable's last value was proved inconsistent.
    pub proved_unsatisfiable: bool,
}

impl SimplificationResult {
    pub fn log(&self, inst: &CspInstance) -> Vec<String> {
        self.steps.iter().map(|s| s.render(inst)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SimplifyConfig {
    pub mode: Mode,
    /// Tried in this order for each candidate step.
    pub detectors: Vec<Detector>,
    pub group_size: usize,
    /// Boolean view of the instance for pure-value and tractable detectors;
    /// variable `i` of the formula is variable `i` of the instance.
    pub formula: Option<BooleanFormula>,
}

impl SimplifyConfig {
    /// Every sound detector the mode allows; formula-based ones only when
    /// a formula is supplied.
    pub fn new(mode: Mode, formula: Option<BooleanFormula>) -> SimplifyConfig {
        let detectors = Detector::ALL
            .into_iter()
            .filter(|d| d.is_sound())
            .filter(|d| mode == Mode::Test || !d.is_exact_search())
            .filter(|d| formula.is_some() || !d.needs_formula())
            .collect();
        SimplifyConfig {
            mode,
            detectors,
            group_size: 1,
            formula,
        }
    }

    pub fn with_detectors(mut self, detectors: Vec<Detector>) -> SimplifyConfig {
        self.detectors = detectors;
        self
    }

    fn validate(&self, inst: &CspInstance) -> Result<(), SimplifyError> {
        for &d in &self.detectors {
            if !d.is_sound() {
                return Err(SimplifyError::UnsoundDetector(d));
            }
            if d.is_exact_search() && self.mode == Mode::Production {
                return Err(SimplifyError::ExactSearchInProduction(d));
            }
            if d.needs_formula() && self.formula.is_none() {
                return Err(SimplifyError::MissingFormula(d));
            }
        }
        if let Some(f) = &self.formula {
            if f.num_vars() != inst.num_vars() {
                return Err(SimplifyError::FormulaMismatch {
                    formula: f.num_vars(),
                    instance: inst.num_vars(),
                });
            }
        }
        Ok(())
    }
}

/// Per-scan detector state.
struct Scan<'a> {
    inst: &'a CspInstance,
    space: &'a SearchSpace,
    cfg: &'a SimplifyConfig,
    covering: Covering,
    oracle: Option<Oracle<'a>>,
    /// The formula plus the singleton active sets, and its class.
    tract: Option<(BooleanFormula, SchaeferClass)>,
}

impl<'a> Scan<'a> {
    fn new(inst: &'a CspInstance, space: &'a SearchSpace, cfg: &'a SimplifyConfig) -> Result<Self, SimplifyError> {
        let covering = default_covering(inst, cfg.group_size)?;
        let oracle = if cfg.detectors.iter().any(|d| d.is_exact_search()) {
            Some(Oracle::new(inst, space)?)
        } else {
            None
        };
        let tract = match &cfg.formula {
            Some(f) if cfg.detectors.iter().any(|d| d.needs_formula() && *d != Detector::PureValue) => {
                restricted_formula(f, space)
            }
            _ => None,
        };
        Ok(Scan {
            inst,
            space,
            cfg,
            covering,
            oracle,
            tract,
        })
    }

    fn local(&self, q: PropertyQuery) -> Result<bool, SimplifyError> {
        Ok(local_check(self.inst, self.space, &self.covering, &q)?.established)
    }

    fn tractable(&self, q: PropertyQuery) -> Result<bool, SimplifyError> {
        match &self.tract {
            Some((f, cls)) => Ok(tract_check(f, *cls, &q)?),
            None => Ok(false),
        }
    }

    fn exact(&self, q: PropertyQuery) -> Result<bool, SimplifyError> {
        Ok(self.oracle.as_ref().expect("built when requested").check(&q)?.holds)
    }

    fn boolean(&self, x: Var) -> bool {
        self.inst.domain_size() == 2 && self.space.active(x).len() == 2
    }

    /// Whether `d` proves `a` fixable for `x`.
    fn fixable(&self, d: Detector, x: Var, a: Val) -> Result<bool, SimplifyError> {
        let fix = PropertyQuery::Fixable { var: x, value: a };
        let implied = PropertyQuery::Implied { var: x, value: a };
        match d {
            Detector::PureValue => match &self.cfg.formula {
                Some(f) if f.is_clausal() && self.boolean(x) => {
                    Ok(pure_value_fixable(f, x.index())? == Some(a == TRUE))
                }
                _ => Ok(false),
            },
            Detector::TractableImplied if self.boolean(x) => self.tractable(implied),
            Detector::TractableFixable if self.boolean(x) => self.tractable(fix),
            Detector::LocalImplied => self.local(implied),
            Detector::LocalFixable => self.local(fix),
            Detector::OracleFixable => self.exact(fix),
            _ => Ok(false),
        }
    }

    /// The justification `d` yields for removing `a` from `x`, if any.
    fn removal(&self, d: Detector, x: Var, a: Val) -> Result<Option<Justification>, SimplifyError> {
        let incons = PropertyQuery::Inconsistent { var: x, value: a };
        let holds = match d {
            Detector::TractableInconsistent if self.boolean(x) => self.tractable(incons)?,
            Detector::LocalInconsistent => self.local(incons)?,
            Detector::OracleInconsistent => self.exact(incons)?,
            Detector::OracleRemovable if self.space.active(x).len() > 1 => {
                self.exact(PropertyQuery::Removable { var: x, value: a })?
            }
            Detector::TractableSubstitutable | Detector::LocalSubstitutable => {
                for &b in self.space.active(x) {
                    if b == a {
                        continue;
                    }
                    let q = PropertyQuery::Substitutable {
                        var: x,
                        from: a,
                        to: b,
                    };
                    let ok = if d == Detector::LocalSubstitutable {
                        self.local(q)?
                    } else {
                        self.boolean(x) && self.tractable(q)?
                    };
                    if ok {
                        return Ok(Some(Justification::substitution(d, b)));
                    }
                }
                false
            }
            _ => false,
        };
        Ok(holds.then(|| Justification::by(d)))
    }

    fn next_step(&self) -> Result<Option<(Action, Justification)>, SimplifyError> {
        for x in self.inst.variables() {
            let act = self.space.active(x);
            if act.len() > 1 {
                for &a in act {
                    for &d in &self.cfg.detectors {
                        if d.proves() == Proof::Fixable && self.fixable(d, x, a)? {
                            return Ok(Some((Action::Fix { var: x, value: a }, Justification::by(d))));
                        }
                    }
                }
            }
            for &a in act {
                for &d in &self.cfg.detectors {
                    if d.proves() == Proof::Fixable {
                        continue;
                    }
                    if act.len() == 1 && d.proves() != Proof::Inconsistent {
                        continue;
                    }
                    if let Some(j) = self.removal(d, x, a)? {
                        return Ok(Some((Action::Remove { var: x, value: a }, j)));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// `f` plus unit constraints pinning the variables with a single active
/// value, with the class to decide it in; `None` outside the tractable
/// classes.
fn restricted_formula(f: &BooleanFormula, space: &SearchSpace) -> Option<(BooleanFormula, SchaeferClass)> {
    let cls = classify_schaefer(f).primary;
    if cls == SchaeferClass::Unrestricted {
        return None;
    }
    let mut g = f.clone();
    for i in 0..f.num_vars() {
        if let [v] = space.active(Var::from(i)) {
            if cls == SchaeferClass::Affine {
                g.add_equation(AffineEquation::new(vec![i], *v == TRUE));
            } else {
                g.add_clause(vec![Lit {
                    var: i,
                    positive: *v != FALSE,
                }]);
            }
        }
    }
    Some((g, cls))
}

pub fn simplify_fixpoint(
    inst: &CspInstance,
    space: &SearchSpace,
    cfg: &SimplifyConfig,
) -> Result<SimplificationResult, SimplifyError> {
    cfg.validate(inst)?;
    space.validate(inst).map_err(OracleError::from)?;
    let mut current = space.clone();
    let mut steps = Vec::new();
    loop {
        let found = Scan::new(inst, &current, cfg)?.next_step()?;
        let Some((action, justification)) = found else {
            return Ok(SimplificationResult {
                final_space: current,
                steps,
                fixpoint: true,
                proved_unsatisfiable: false,
            });
        };
        let size_before = current.size();
        let next = match action {
            Action::Fix { var, value } => Some(apply_fix(&current, var, value, &justification)?),
            Action::Remove { var, value } => match apply_remove(&current, var, value, &justification)? {
                RemoveOutcome::Removed(s) => Some(s),
                RemoveOutcome::ProvedUnsatisfiable => None,
            },
        };
        let size_after = next.as_ref().map_or(0, SearchSpace::size);
        steps.push(SimplificationStep {
            action,
            justification,
            size_before,
            size_after,
        });
        match next {
            Some(s) => current = s,
            None => {
                return Ok(SimplificationResult {
                    final_space: current,
                    steps,
                    fixpoint: false,
                    proved_unsatisfiable: true,
                })
            }
        }
    }
}

/// Reapplies a step log; `None` when a step proves unsatisfiability.
pub fn replay(space: &SearchSpace, steps: &[SimplificationStep]) -> Result<Option<SearchSpace>, SimplifyError> {
    let mut cur = space.clone();
    for s in steps {
        cur = match s.action {
            Action::Fix { var, value } => apply_fix(&cur, var, value, &s.justification)?,
            Action::Remove { var, value } => match apply_remove(&cur, var, value, &s.justification)? {
                RemoveOutcome::Removed(next) => next,
                RemoveOutcome::ProvedUnsatisfiable => return Ok(None),
            },
        };
    }
    Ok(Some(cur))
}
