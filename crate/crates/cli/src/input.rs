use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use csprops::boolean::BooleanFormula;
use csprops::instances::{emit_csp, parse_csp, parse_dimacs};
use csprops::{CspInstance, SearchSpace};
use sha2::{Digest, Sha256};

/// An instance read from disk. DIMACS inputs keep their formula so the
/// boolean procedures can run on them.
pub struct Loaded {
    pub inst: CspInstance,
    pub space: SearchSpace,
    pub formula: Option<BooleanFormula>,
}

impl Loaded {
    /// SHA-256 of the canonical text form, so formatting does not matter.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(emit_csp(&self.inst, &self.space).as_bytes());
        format!("sha256:{}", hex::encode(hash))
    }
}

fn looks_like_dimacs(path: &Path, text: &str) -> bool {
    match path.extension().and_then(|e| e.to_str()) {
        Some("cnf" | "dimacs" | "xnf") => true,
        Some("csp") => false,
        _ => text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'))
            .is_some_and(|l| l.starts_with("p ")),
    }
}

pub fn load(path: &Path) -> Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    if looks_like_dimacs(path, &text) {
        let d = parse_dimacs(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let inst = d.formula.to_csp()?;
        let space = inst.full_space();
        Ok(Loaded {
            inst,
            space,
            formula: Some(d.formula),
        })
    } else {
        let (inst, space) = parse_csp(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        Ok(Loaded {
            inst,
            space,
            formula: None,
        })
    }
}
