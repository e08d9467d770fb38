//! Cross-validation of the fast detectors against the exact oracle.

use thiserror::Error;

use crate::boolean::{tract_check, BooleanFormula, SchaeferClass, TractableError};
use crate::hierarchy::{derivation_edge, derived_check, validate_hierarchy};
use crate::instances::{gen_boolean, gen_random, BoolSpec, GenError, RandomSpec};
use crate::local::{default_covering, local_check, Covering, LocalError};
use crate::model::{CspInstance, ModelError, SearchSpace};
use crate::oracle::{Oracle, OracleError};
use crate::query::{enumerate_queries, PropertyKind};
use crate::simplify::{replay, simplify_fixpoint, Mode, SimplifyConfig, SimplifyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Tractable(#[from] TractableError),
    #[error(transparent)]
    Simplify(#[from] SimplifyError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The eight kinds local reasoning handles.
pub const LOCAL_KINDS: [PropertyKind; 8] = [
    PropertyKind::Fixable,
    PropertyKind::Substitutable,
    PropertyKind::Interchangeable,
    PropertyKind::Inconsistent,
    PropertyKind::Implied,
    PropertyKind::Determined,
    PropertyKind::Dependent,
    PropertyKind::Irrelevant,
];

/// The eight kinds the tractable procedures handle.
pub const TRACTABLE_KINDS: [PropertyKind; 8] = [
    PropertyKind::Inconsistent,
    PropertyKind::Implied,
    PropertyKind::Substitutable,
    PropertyKind::Interchangeable,
    PropertyKind::Fixable,
    PropertyKind::Irrelevant,
    PropertyKind::Determined,
    PropertyKind::Removable,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Which suite found it, e.g. `local-soundness`.
    pub suite: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl Tally {
    fn record(&mut self, ok: bool, suite: &'static str, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                suite,
                detail: detail(),
            });
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every local-established fact must be oracle-true, for each group size.
pub fn local_soundness(
    inst: &CspInstance,
    space: &SearchSpace,
    group_sizes: &[usize],
    dep_max: usize,
) -> Result<Tally, CheckError> {
    let oracle = Oracle::new(inst, space)?;
    let queries = enumerate_queries(space, &LOCAL_KINDS, dep_max);
    let mut tally = Tally::default();
    for &g in group_sizes {
        let cov = default_covering(inst, g)?;
        for q in &queries {
            let local = local_check(inst, space, &cov, q)?.established;
            let exact = oracle.check(q)?.holds;
            tally.record(!local || exact, "local-soundness", || {
                format!("group size {g}: {} established locally but false", q.render(inst))
            });
        }
    }
    Ok(tally)
}

/// With a single subset holding every constraint the local verdict is exact.
pub fn local_global_agreement(
    inst: &CspInstance,
    space: &SearchSpace,
    dep_max: usize,
) -> Result<Tally, CheckError> {
    let mut tally = Tally::default();
    let m = inst.constraints().len();
    if m == 0 {
        return Ok(tally);
    }
    let oracle = Oracle::new(inst, space)?;
    let cov = Covering::new(inst, vec![(0..m).collect()])?;
    for q in enumerate_queries(space, &LOCAL_KINDS, dep_max) {
        let local = local_check(inst, space, &cov, &q)?.established;
        let exact = oracle.check(&q)?.holds;
        tally.record(local == exact, "local-global", || {
            format!("{}: single-subset {local}, oracle {exact}", q.render(inst))
        });
    }
    Ok(tally)
}

/// The hierarchy holds on the instance.
pub fn hierarchy(inst: &CspInstance, space: &SearchSpace, dep_max: usize) -> Result<Tally, CheckError> {
    let violations = validate_hierarchy(inst, space, dep_max)?;
    let mut tally = Tally {
        checks: 1,
        violations: Vec::new(),
    };
    for v in violations {
        tally.violations.push(Violation {
            suite: "hierarchy",
            detail: v.render(inst),
        });
    }
    Ok(tally)
}

/// Verdicts assembled through defining biconditionals match the oracle.
pub fn derived_agreement(inst: &CspInstance, space: &SearchSpace, dep_max: usize) -> Result<Tally, CheckError> {
    let oracle = Oracle::new(inst, space)?;
    let kinds: Vec<PropertyKind> = PropertyKind::ALL
        .into_iter()
        .filter(|&k| derivation_edge(k).is_some())
        .collect();
    let mut tally = Tally::default();
    for q in enumerate_queries(space, &kinds, dep_max) {
        if let Some(derived) = derived_check(&oracle, &q)? {
            let exact = oracle.check(&q)?.holds;
            tally.record(derived == exact, "derived", || {
                format!("{}: derived {derived}, oracle {exact}", q.render(inst))
            });
        }
    }
    Ok(tally)
}

/// The polynomial procedures agree with the oracle on every supported query.
pub fn tractable_exactness(f: &BooleanFormula, cls: SchaeferClass) -> Result<Tally, CheckError> {
    let inst = f.to_csp()?;
    let space = inst.full_space();
    let oracle = Oracle::new(&inst, &space)?;
    let mut tally = Tally::default();
    for q in enumerate_queries(&space, &TRACTABLE_KINDS, 0) {
        let fast = tract_check(f, cls, &q)?;
        let exact = oracle.check(&q)?.holds;
        tally.record(fast == exact, "tractable", || {
            format!("{} in {cls}: tractable {fast}, oracle {exact}", q.render(&inst))
        });
    }
    Ok(tally)
}

/// Simplification preserves satisfiability, shrinks at every step and
/// replays to the same space.
pub fn simplify_soundness(
    inst: &CspInstance,
    space: &SearchSpace,
    cfg: &SimplifyConfig,
) -> Result<Tally, CheckError> {
    let before = Oracle::new(inst, space)?.is_satisfiable();
    let res = simplify_fixpoint(inst, space, cfg)?;
    let after = !res.proved_unsatisfiable && Oracle::new(inst, &res.final_space)?.is_satisfiable();
    let mode = match cfg.mode {
        Mode::Production => "production",
        Mode::Test => "test",
    };
    let mut tally = Tally::default();
    tally.record(before == after, "simplify", || {
        format!("{mode} mode: satisfiable {before} before, {after} after; log {:?}", res.log(inst))
    });
    for s in &res.steps {
        tally.record(s.size_after < s.size_before, "simplify", || {
            format!("{mode} mode: step `{}` did not shrink the space", s.render(inst))
        });
    }
    let replayed = replay(space, &res.steps)?;
    let expected = (!res.proved_unsatisfiable).then(|| res.final_space.clone());
    tally.record(replayed == expected, "simplify", || format!("{mode} mode: replay diverged"));
    Ok(tally)
}

/// One member of a validation corpus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CorpusItem {
    Extensional(RandomSpec),
    Boolean(BoolSpec),
}

/// Seeds `1..=1000` of the extensional corpus and `1..=500` per tractable
/// boolean class.
pub fn default_corpus() -> Vec<CorpusItem> {
    let mut items: Vec<CorpusItem> = (1..=1000)
        .map(|s| CorpusItem::Extensional(RandomSpec::corpus(s)))
        .collect();
    for cls in SchaeferClass::TRACTABLE {
        items.extend((1..=500).map(|s| CorpusItem::Boolean(BoolSpec::corpus(cls, s))));
    }
    items
}

/// Every applicable suite on one corpus member.
pub fn check_item(item: &CorpusItem, dep_max: usize) -> Result<Tally, CheckError> {
    let mut tally = Tally::default();
    match item {
        CorpusItem::Extensional(spec) => {
            let (inst, space) = gen_random(spec)?;
            tally.merge(hierarchy(&inst, &space, dep_max)?);
            tally.merge(derived_agreement(&inst, &space, dep_max)?);
            tally.merge(local_soundness(&inst, &space, &[1, 2], dep_max)?);
            tally.merge(local_global_agreement(&inst, &space, dep_max)?);
            for mode in [Mode::Production, Mode::Test] {
                tally.merge(simplify_soundness(&inst, &space, &SimplifyConfig::new(mode, None))?);
            }
        }
        CorpusItem::Boolean(spec) => {
            let f = gen_boolean(spec)?;
            tally.merge(tractable_exactness(&f, spec.class)?);
            tally.merge(check_formula(&f)?);
        }
    }
    for v in &mut tally.violations {
        v.detail = format!("{}: {}", describe(item), v.detail);
    }
    Ok(tally)
}

/// Simplifier suites on a boolean formula, in both modes.
pub fn check_formula(f: &BooleanFormula) -> Result<Tally, CheckError> {
    let inst = f.to_csp()?;
    let space = inst.full_space();
    let mut tally = Tally::default();
    for mode in [Mode::Production, Mode::Test] {
        tally.merge(simplify_soundness(&inst, &space, &SimplifyConfig::new(mode, Some(f.clone())))?);
    }
    Ok(tally)
}

pub fn describe(item: &CorpusItem) -> String {
    match item {
        CorpusItem::Extensional(s) => format!("random seed {}", s.seed),
        CorpusItem::Boolean(s) => format!("{} seed {}", s.class, s.seed),
    }
}
