use anyhow::{bail, Context, Result};
use csprops::boolean::{classify_schaefer, SchaeferClass};
use csprops::crosscheck::{self, default_corpus, CorpusItem, Tally, Violation};
use csprops::hierarchy::{edge_catalog, validate_with_catalog};
use csprops::instances::{BoolSpec, RandomSpec};
use csprops::simplify::{Mode, SimplifyConfig};
use rayon::prelude::*;

use crate::input::Loaded;

pub struct CheckOptions {
    pub dep_max: usize,
    pub group_sizes: Vec<usize>,
    /// Edges to flip before validation; a fault-injection control.
    pub reverse_edges: Vec<String>,
}

/// `default`, or a comma-separated list of `random:N` and `<class>:N`
/// entries taking seeds `1..=N`.
pub fn parse_corpus(spec: &str) -> Result<Vec<CorpusItem>> {
    if spec == "default" {
        return Ok(default_corpus());
    }
    let mut items = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let (kind, count) = part
            .split_once(':')
            .with_context(|| format!("bad corpus entry `{part}`, expected `kind:count`"))?;
        let n: u64 = count.parse().with_context(|| format!("bad count in `{part}`"))?;
        if kind == "random" {
            items.extend((1..=n).map(|s| CorpusItem::Extensional(RandomSpec::corpus(s))));
        } else if let Some(cls) = SchaeferClass::parse(kind).filter(|c| *c != SchaeferClass::Unrestricted) {
            items.extend((1..=n).map(|s| CorpusItem::Boolean(BoolSpec::corpus(cls, s))));
        } else {
            bail!("unknown corpus kind `{kind}`");
        }
    }
    Ok(items)
}

pub fn check_corpus(items: &[CorpusItem], dep_max: usize) -> Result<Tally> {
    let tallies: Vec<Tally> = items
        .par_iter()
        .map(|item| crosscheck::check_item(item, dep_max))
        .collect::<Result<_, _>>()?;
    let mut total = Tally::default();
    for t in tallies {
        total.merge(t);
    }
    Ok(total)
}

fn hierarchy_suite(loaded: &Loaded, opts: &CheckOptions) -> Result<Tally> {
    let mut catalog = edge_catalog();
    for name in &opts.reverse_edges {
        let Some(e) = catalog.iter_mut().find(|e| e.name == *name) else {
            bail!("unknown edge `{name}`");
        };
        *e = e.reversed();
    }
    let found = validate_with_catalog(&loaded.inst, &loaded.space, &catalog, opts.dep_max)?;
    let mut tally = Tally {
        checks: catalog.len(),
        violations: Vec::new(),
    };
    tally.violations.extend(found.iter().map(|v| Violation {
        suite: "hierarchy",
        detail: v.render(&loaded.inst),
    }));
    Ok(tally)
}

pub fn check_file(loaded: &Loaded, opts: &CheckOptions) -> Result<Tally> {
    let (inst, space) = (&loaded.inst, &loaded.space);
    let mut tally = hierarchy_suite(loaded, opts)?;
    tally.merge(crosscheck::derived_agreement(inst, space, opts.dep_max)?);
    tally.merge(crosscheck::local_soundness(inst, space, &opts.group_sizes, opts.dep_max)?);
    tally.merge(crosscheck::local_global_agreement(inst, space, opts.dep_max)?);
    for mode in [Mode::Production, Mode::Test] {
        let cfg = SimplifyConfig::new(mode, loaded.formula.clone());
        tally.merge(crosscheck::simplify_soundness(inst, space, &cfg)?);
    }
    if let Some(f) = &loaded.formula {
        for cls in classify_schaefer(f).applicable {
            tally.merge(crosscheck::tractable_exactness(f, cls)?);
        }
    }
    Ok(tally)
}
