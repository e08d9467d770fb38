use std::time::Instant;

use anyhow::{bail, Result};
use csprops::boolean::{classify_schaefer, tract_check, SchaeferClass};
use csprops::crosscheck::TRACTABLE_KINDS;
use csprops::hierarchy::{derivation_edge, derived_check};
use csprops::local::{combinator, default_covering, local_check, Covering};
use csprops::oracle::Evidence;
use csprops::query::enumerate_queries;
use csprops::{CspInstance, Oracle, OracleConfig, PropertyKind, PropertyQuery, Quantifier};
use rayon::prelude::*;

use crate::input::Loaded;
use crate::report::{AnalysisReport, Finding, InstanceInfo, Method, Outcome, Summary, SCHEMA_VERSION};

pub struct AnalyzeOptions {
    pub methods: Vec<Method>,
    /// Methods named on the command line fail loudly when inapplicable;
    /// otherwise they are dropped with a note.
    pub explicit: bool,
    pub group_size: usize,
    pub dep_max: usize,
    pub all: bool,
    pub full_domain: bool,
    pub max_space: u128,
}

struct Engines<'a> {
    oracle: Option<Oracle<'a>>,
    covering: Option<Covering>,
    class: Option<SchaeferClass>,
}

fn applies(method: Method, kind: PropertyKind) -> bool {
    match method {
        Method::Oracle => true,
        Method::Local => combinator(kind).is_some(),
        Method::Tractable => TRACTABLE_KINDS.contains(&kind),
        Method::Hierarchy => derivation_edge(kind).is_some(),
    }
}

fn render_evidence(inst: &CspInstance, e: &Evidence) -> Vec<Vec<String>> {
    let row = |t: &csprops::Assignment| t.iter().map(|&a| inst.val_name(a).to_string()).collect();
    match e {
        Evidence::Solution(t) => vec![row(t)],
        Evidence::SolutionPair(s, t) => vec![row(s), row(t)],
    }
}

fn evaluate(loaded: &Loaded, eng: &Engines<'_>, q: &PropertyQuery, method: Method) -> Result<Finding> {
    let inst = &loaded.inst;
    let start = Instant::now();
    let (verdict, evidence) = match method {
        Method::Oracle => {
            let v = eng.oracle.as_ref().expect("oracle built").check(q)?;
            let outcome = if v.holds { Outcome::True } else { Outcome::False };
            (outcome, v.evidence.map(|e| render_evidence(inst, &e)))
        }
        Method::Local => {
            let cov = eng.covering.as_ref().expect("covering built");
            let v = local_check(inst, &loaded.space, cov, q)?;
            (if v.established { Outcome::True } else { Outcome::Unknown }, None)
        }
        Method::Tractable => {
            let f = loaded.formula.as_ref().expect("formula present");
            let holds = tract_check(f, eng.class.expect("class chosen"), q)?;
            (if holds { Outcome::True } else { Outcome::False }, None)
        }
        Method::Hierarchy => {
            let oracle = eng.oracle.as_ref().expect("oracle built");
            match derived_check(oracle, q)? {
                Some(true) => (Outcome::True, None),
                Some(false) => (Outcome::False, None),
                None => bail!("no defining relationship for {}", q.render(inst)),
            }
        }
    };
    Ok(Finding {
        property: q.kind().name().to_string(),
        args: q.render_args(inst),
        verdict,
        method,
        evidence,
        elapsed_us: u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX),
    })
}

pub fn analyze(file: &str, loaded: &Loaded, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let inst = &loaded.inst;
    let space = &loaded.space;
    let mut notes = Vec::new();
    let mut methods = opts.methods.clone();

    let mut skip = |m: Method, why: String, methods: &mut Vec<Method>| -> Result<()> {
        if opts.explicit {
            bail!("method {} is not applicable: {why}", m.name());
        }
        notes.push(format!("{} skipped: {why}", m.name()));
        methods.retain(|&x| x != m);
        Ok(())
    };

    let mut class = None;
    if methods.contains(&Method::Tractable) {
        match &loaded.formula {
            None => skip(Method::Tractable, "needs a DIMACS input".into(), &mut methods)?,
            Some(f) => match classify_schaefer(f).primary {
                SchaeferClass::Unrestricted => {
                    skip(Method::Tractable, "formula is in no tractable class".into(), &mut methods)?
                }
                cls => class = Some(cls),
            },
        }
    }
    if opts.full_domain && !space.is_full(inst.domain_size()) {
        for m in [Method::Local, Method::Tractable] {
            if methods.contains(&m) {
                skip(m, "it quantifies over active values only".into(), &mut methods)?;
            }
        }
    }
    if let Some(cls) = class.filter(|_| methods.contains(&Method::Tractable)) {
        notes.push(format!("tractable class {cls}"));
    }

    let oracle = if methods.iter().any(|m| matches!(m, Method::Oracle | Method::Hierarchy)) {
        let quantifier = if opts.full_domain { Quantifier::FullDomain } else { Quantifier::ActiveDomain };
        let config = OracleConfig {
            max_space: opts.max_space,
            quantifier,
        };
        Some(Oracle::with_config(inst, space, config)?)
    } else {
        None
    };
    let covering = if methods.contains(&Method::Local) {
        Some(default_covering(inst, opts.group_size)?)
    } else {
        None
    };
    let engines = Engines { oracle, covering, class };

    let mut tasks = Vec::new();
    for q in enumerate_queries(space, &PropertyKind::ALL, opts.dep_max) {
        for &m in Method::ALL.iter().filter(|m| methods.contains(m)) {
            if applies(m, q.kind()) {
                tasks.push((q.clone(), m));
            }
        }
    }
    // collect keeps input order, so the report is canonical whatever the scheduling
    let findings: Vec<Finding> = tasks
        .par_iter()
        .map(|(q, m)| evaluate(loaded, &engines, q, *m))
        .collect::<Result<_>>()?;

    let mut summary = Summary {
        evaluated: findings.len(),
        ..Summary::default()
    };
    for f in &findings {
        match f.verdict {
            Outcome::True => summary.holds += 1,
            Outcome::False => summary.fails += 1,
            Outcome::Unknown => summary.unknown += 1,
        }
    }
    let findings: Vec<Finding> = findings
        .into_iter()
        .filter(|f| opts.all || f.verdict == Outcome::True)
        .collect();
    summary.listed = findings.len();

    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        instance: InstanceInfo {
            file: file.to_string(),
            digest: loaded.digest(),
            variables: inst.num_vars(),
            domain: inst.domain_size(),
            constraints: inst.constraints().len(),
            space_size: u64::try_from(space.size()).unwrap_or(u64::MAX),
        },
        methods,
        dep_max: opts.dep_max,
        group_size: opts.group_size,
        full_domain: opts.full_domain,
        findings,
        summary,
        notes,
    })
}
