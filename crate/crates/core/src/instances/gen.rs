use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::boolean::{AffineEquation, BooleanFormula, Lit, SchaeferClass};
use crate::model::{Assignment, Constraint, CspInstance, ModelError, Relation, SearchSpace, Val, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("node {node} is outside 1..={n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("at least one color is needed")]
    NoColors,
    #[error("{0}")]
    InvalidSpec(String),
    #[error("{z} has {digits} digits in base {base}; at most {cap} are supported")]
    TooManyDigits {
        z: u64,
        base: u32,
        digits: usize,
        cap: usize,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Undirected graph on nodes `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph, GenError> {
        for &(u, v) in &edges {
            for node in [u, v] {
                if node == 0 || node > n {
                    return Err(GenError::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(GenError::SelfLoop(u));
            }
        }
        Ok(Graph { n, edges })
    }

    /// Five nodes; node 1 isolated, a triangle on 2, 3, 4 and a pendant 5 on 4.
    pub fn five_node() -> Graph {
        Graph::new(5, vec![(2, 3), (3, 4), (2, 4), (4, 5)]).expect("valid graph")
    }

    pub fn triangle() -> Graph {
        Graph::new(3, vec![(1, 2), (2, 3), (1, 3)]).expect("valid graph")
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Parses `1-2,2-3`; whitespace is ignored.
    pub fn parse_edges(n: usize, spec: &str) -> Result<Graph, GenError> {
        let mut edges = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (u, v) = part
                .split_once('-')
                .ok_or_else(|| GenError::InvalidSpec(format!("bad edge `{part}`, expected `u-v`")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| GenError::InvalidSpec(format!("bad node `{s}`")))
            };
            edges.push((parse(u)?, parse(v)?));
        }
        Graph::new(n, edges)
    }
}

const PALETTE: [&str; 8] = ["R", "G", "B", "Y", "O", "P", "C", "M"];

pub fn color_names(k: usize) -> Vec<String> {
    if k <= PALETTE.len() {
        PALETTE[..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|i| format!("k{i}")).collect()
    }
}

/// One variable `x<i>` per node and one not-equal constraint per edge.
pub fn gen_coloring(g: &Graph, k: usize) -> Result<CspInstance, GenError> {
    if k == 0 {
        return Err(GenError::NoColors);
    }
    let ne = Relation::from_predicate(2, k, |r| r[0] != r[1]);
    let constraints = g
        .edges
        .iter()
        .map(|&(u, v)| {
            Constraint::new(
                format!("ne{u}_{v}"),
                vec![Var::from(u - 1), Var::from(v - 1)],
                ne.clone(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CspInstance::new(
        (1..=g.n).map(|i| format!("x{i}")).collect(),
        color_names(k),
        constraints,
    )?)
}

/// Largest digit count accepted by `gen_factoring`.
pub const FACTORING_DIGIT_CAP: usize = 8;

/// Upper bound on the enumerated combinations behind one generated relation.
pub const RELATION_CAP: u64 = 1 << 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactoringSpec {
    pub z: u64,
    pub base: u32,
    /// Require `X < Y`, removing the symmetric factorization.
    pub ordering: bool,
}

impl FactoringSpec {
    pub fn new(z: u64, base: u32, ordering: bool) -> FactoringSpec {
        FactoringSpec { z, base, ordering }
    }

    /// Little-endian digits of `z`.
    pub fn digits(&self) -> Vec<u64> {
        let b = u64::from(self.base);
        let mut out = Vec::new();
        let mut z = self.z;
        while z > 0 {
            out.push(z % b);
            z /= b;
        }
        out
    }

    pub fn carry_bound(&self) -> u64 {
        let b = u64::from(self.base);
        (b - 1) * (b - 1) * self.digits().len() as u64 / b
    }
}

/// Where the factor digits, carries and auxiliary partial sums live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoringLayout {
    pub base: u32,
    /// `x_1..x_n`, least significant first.
    pub x: Vec<Var>,
    pub y: Vec<Var>,
    /// `c_1..c_{n+1}`.
    pub carries: Vec<Var>,
    pub aux: Vec<Var>,
}

impl FactoringLayout {
    pub fn digit_vars(&self) -> Vec<Var> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    fn number(&self, digits: &[Var], t: &Assignment) -> u64 {
        digits
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * u64::from(self.base) + u64::from(t.value(d).0))
    }

    /// `(X, Y)` encoded by a total assignment.
    pub fn decode(&self, t: &Assignment) -> (u64, u64) {
        (self.number(&self.x, t), self.number(&self.y, t))
    }
}

#[derive(Clone, Debug)]
pub struct FactoringInstance {
    pub instance: CspInstance,
    pub layout: FactoringLayout,
    /// Human-readable description of the encoding, for file comments.
    pub notes: Vec<String>,
}

struct Builder {
    names: Vec<String>,
    bounds: Vec<u64>,
    constraints: Vec<Constraint>,
}

impl Builder {
    fn var(&mut self, name: String, bound: u64) -> Var {
        self.names.push(name);
        self.bounds.push(bound);
        Var::from(self.names.len() - 1)
    }

    /// Adds a constraint over `scope` whose rows are all combinations of
    /// in-range values accepted by `keep`.
    fn add<F>(&mut self, label: String, scope: Vec<Var>, keep: F) -> Result<(), GenError>
    where
        F: Fn(&[u64]) -> bool,
    {
        let ranges: Vec<u64> = scope.iter().map(|x| self.bounds[x.index()] + 1).collect();
        let mut rows = Vec::new();
        let mut cur = vec![0u64; scope.len()];
        'outer: loop {
            if keep(&cur) {
                rows.push(cur.iter().map(|&v| Val(v as u32)).collect());
            }
            for i in (0..cur.len()).rev() {
                cur[i] += 1;
                if cur[i] < ranges[i] {
                    continue 'outer;
                }
                cur[i] = 0;
            }
            break;
        }
        let rel = Relation::new(scope.len(), rows)?;
        self.constraints.push(Constraint::new(label, scope, rel)?);
        Ok(())
    }

    fn combos(&self, scope: &[Var]) -> u64 {
        scope
            .iter()
            .map(|x| self.bounds[x.index()] + 1)
            .fold(1u64, |a, r| a.saturating_mul(r))
    }
}

/// Long multiplication `X · Y = Z` over `n`-digit factors.
///
/// Variables are `x1..xn`, `y1..yn`, `c1..c{n+1}` and, for columns too wide
/// to tabulate at once, partial sums `s<j>_<k>`. Column `j` states
/// `Σ_{i+k=j+1} x_i·y_k + c_j = z_j + b·c_{j+1}`; products landing above
/// column `n` are forced to zero, and `c_1 = c_{n+1} = 0`.
pub fn gen_factoring(spec: &FactoringSpec) -> Result<FactoringInstance, GenError> {
    if spec.base < 2 {
        return Err(GenError::InvalidSpec("base must be at least 2".into()));
    }
    if spec.z < 4 {
        return Err(GenError::InvalidSpec("Z must be at least 4".into()));
    }
    let zd = spec.digits();
    let n = zd.len();
    let b = u64::from(spec.base);
    let too_wide = n > FACTORING_DIGIT_CAP
        || b.checked_pow(n as u32).is_none_or(|v| v > RELATION_CAP)
        || (spec.ordering && b.checked_pow(2 * n as u32).is_none_or(|v| v > RELATION_CAP));
    if too_wide {
        return Err(GenError::TooManyDigits {
            z: spec.z,
            base: spec.base,
            digits: n,
            cap: FACTORING_DIGIT_CAP,
        });
    }
    let carry_bound = spec.carry_bound();
    let mut bld = Builder {
        names: Vec::new(),
        bounds: Vec::new(),
        constraints: Vec::new(),
    };
    let x: Vec<Var> = (1..=n).map(|i| bld.var(format!("x{i}"), b - 1)).collect();
    let y: Vec<Var> = (1..=n).map(|i| bld.var(format!("y{i}"), b - 1)).collect();
    let carries: Vec<Var> = (1..=n + 1).map(|i| bld.var(format!("c{i}"), carry_bound)).collect();
    let mut aux = Vec::new();
    let mut notes = vec![
        format!("factoring Z={} in base {b}: X = x{n}..x1, Y = y{n}..y1, least significant digit first", spec.z),
        format!("carries c1..c{} range over 0..={carry_bound}", n + 1),
    ];

    bld.add("c1_zero".into(), vec![carries[0]], |r| r[0] == 0)?;
    bld.add(format!("c{}_zero", n + 1), vec![carries[n]], |r| r[0] == 0)?;
    bld.add("x_not_one".into(), x.clone(), |r| r[0] != 1 || r[1..].iter().any(|&d| d != 0))?;
    bld.add("y_not_one".into(), y.clone(), |r| r[0] != 1 || r[1..].iter().any(|&d| d != 0))?;
    if spec.ordering {
        let scope: Vec<Var> = x.iter().chain(&y).copied().collect();
        bld.add("x_lt_y".into(), scope, move |r| {
            let (xs, ys) = r.split_at(n);
            xs.iter().rev().lt(ys.iter().rev())
        })?;
    }
    for i in 1..=n {
        for k in 1..=n {
            if i + k - 1 > n {
                bld.add(format!("overflow_x{i}_y{k}"), vec![x[i - 1], y[k - 1]], |r| r[0] * r[1] == 0)?;
            }
        }
    }

    for j in 1..=n {
        let pairs: Vec<(Var, Var)> = (1..=j).map(|i| (x[i - 1], y[j - i])).collect();
        let (cin, cout, zj) = (carries[j - 1], carries[j], zd[j - 1]);
        let mut rest = pairs.as_slice();
        let mut partial: Option<(Var, u64)> = None;
        let mut piece = 0;
        loop {
            // Take as many pairs as fit under the cap for the closing constraint.
            let mut take = rest.len();
            let closing_scope = |t: usize, p: Option<(Var, u64)>| -> Vec<Var> {
                rest[..t]
                    .iter()
                    .flat_map(|&(a, c)| [a, c])
                    .chain(p.map(|(v, _)| v))
                    .chain([cin, cout])
                    .collect()
            };
            while take > 1 && bld.combos(&closing_scope(take, partial)) > RELATION_CAP {
                take -= 1;
            }
            if take == rest.len() {
                let scope = closing_scope(take, partial);
                let np = take;
                let has_partial = partial.is_some();
                bld.add(format!("col{j}"), scope, move |r| {
                    let prod: u64 = (0..np).map(|p| r[2 * p] * r[2 * p + 1]).sum();
                    let base_at = 2 * np;
                    let part = if has_partial { r[base_at] } else { 0 };
                    let off = base_at + usize::from(has_partial);
                    prod + part + r[off] == zj + b * r[off + 1]
                })?;
                break;
            }
            // Too wide: fold a prefix into a partial sum and continue.
            let mut take = rest.len() - 1;
            loop {
                let bound = partial.map_or(0, |(_, pb)| pb) + take as u64 * (b - 1) * (b - 1);
                let scope: Vec<Var> = rest[..take]
                    .iter()
                    .flat_map(|&(a, c)| [a, c])
                    .chain(partial.map(|(v, _)| v))
                    .collect();
                let combos = bld.combos(&scope).saturating_mul(bound + 1);
                if combos <= RELATION_CAP || take == 1 {
                    piece += 1;
                    let s = bld.var(format!("s{j}_{piece}"), bound);
                    aux.push(s);
                    notes.push(format!(
                        "s{j}_{piece} is a partial sum of column {j} over {take} products, range 0..={bound}"
                    ));
                    let mut scope = scope;
                    scope.push(s);
                    let has_partial = partial.is_some();
                    bld.add(format!("col{j}_part{piece}"), scope, move |r| {
                        let prod: u64 = (0..take).map(|p| r[2 * p] * r[2 * p + 1]).sum();
                        let part = if has_partial { r[2 * take] } else { 0 };
                        prod + part == r[r.len() - 1]
                    })?;
                    partial = Some((s, bound));
                    rest = &rest[take..];
                    break;
                }
                take -= 1;
            }
        }
    }

    let dmax = bld.bounds.iter().copied().max().unwrap_or(0).max(b - 1);
    // Shared domain: per-variable ranges become unary constraints.
    let unary: Vec<(Var, u64)> = bld
        .bounds
        .iter()
        .enumerate()
        .filter(|&(_, &bd)| bd < dmax)
        .map(|(i, &bd)| (Var::from(i), bd))
        .collect();
    let mut constraints = Vec::new();
    for (x, bd) in unary {
        let rel = Relation::new(1, (0..=bd).map(|v| vec![Val(v as u32)]))?;
        constraints.push(Constraint::new(format!("range_{}", bld.names[x.index()]), vec![x], rel)?);
    }
    constraints.append(&mut bld.constraints);
    let instance = CspInstance::new(
        bld.names,
        (0..=dmax).map(|v| v.to_string()).collect(),
        constraints,
    )?;
    Ok(FactoringInstance {
        instance,
        layout: FactoringLayout {
            base: spec.base,
            x,
            y,
            carries,
            aux,
        },
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub vars: usize,
    pub domain: usize,
    pub constraints: usize,
    pub max_arity: usize,
    /// Probability of including each tuple, in `(0, 1]`.
    pub density: f64,
    pub seed: u64,
}

impl RandomSpec {
    /// The standard corpus member for `seed`.
    pub fn corpus(seed: u64) -> RandomSpec {
        RandomSpec {
            vars: 5,
            domain: 3,
            constraints: 6,
            max_arity: 2,
            density: 0.5,
            seed,
        }
    }
}

pub fn gen_random(spec: &RandomSpec) -> Result<(CspInstance, SearchSpace), GenError> {
    if spec.vars == 0 || spec.domain == 0 || spec.max_arity == 0 {
        return Err(GenError::InvalidSpec(
            "variable count, domain size and arity bound must be positive".into(),
        ));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(GenError::InvalidSpec("density must lie in (0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut constraints = Vec::with_capacity(spec.constraints);
    for ci in 0..spec.constraints {
        let arity = rng.gen_range(1..=spec.max_arity.min(spec.vars));
        let mut scope: Vec<Var> = sample(&mut rng, spec.vars, arity)
            .into_iter()
            .map(Var::from)
            .collect();
        scope.sort_unstable();
        let full = Relation::full(arity, spec.domain);
        let rel = loop {
            let rows: Vec<Vec<Val>> = full
                .iter()
                .filter(|_| rng.gen_bool(spec.density))
                .cloned()
                .collect();
            if !rows.is_empty() || spec.density <= 0.5 {
                break Relation::new(arity, rows)?;
            }
        };
        constraints.push(Constraint::new(format!("c{}", ci + 1), scope, rel)?);
    }
    let inst = CspInstance::new(
        (1..=spec.vars).map(|i| format!("v{i}")).collect(),
        (0..spec.domain).map(|i| i.to_string()).collect(),
        constraints,
    )?;
    let space = inst.full_space();
    Ok((inst, space))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoolSpec {
    pub class: SchaeferClass,
    pub vars: usize,
    pub constraints: usize,
    /// Longest clause or equation.
    pub max_width: usize,
    pub seed: u64,
}

impl BoolSpec {
    /// Corpus member: up to 12 variables and 20 constraints, drawn from `seed`.
    pub fn corpus(class: SchaeferClass, seed: u64) -> BoolSpec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000);
        BoolSpec {
            class,
            vars: rng.gen_range(2..=12),
            constraints: rng.gen_range(1..=20),
            max_width: 3,
            seed,
        }
    }
}

/// A random formula whose every constraint lies in `spec.class`.
/// `Unrestricted` draws arbitrary clauses.
pub fn gen_boolean(spec: &BoolSpec) -> Result<BooleanFormula, GenError> {
    if spec.vars == 0 || spec.max_width == 0 {
        return Err(GenError::InvalidSpec("variable count and width must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut f = BooleanFormula::new(spec.vars);
    while f.clauses().len() + f.equations().len() < spec.constraints {
        let max_w = match spec.class {
            SchaeferClass::TwoCnf => spec.max_width.min(2),
            _ => spec.max_width,
        }
        .min(spec.vars);
        let w = rng.gen_range(1..=max_w);
        let vars: Vec<usize> = sample(&mut rng, spec.vars, w).into_vec();
        if spec.class == SchaeferClass::Affine {
            f.add_equation(AffineEquation::new(vars, rng.gen_bool(0.5)));
            continue;
        }
        let special = rng.gen_range(0..=w);
        let lits = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| match spec.class {
                // at most one positive literal, at position `special`
                SchaeferClass::Horn => Lit {
                    var: v,
                    positive: i == special,
                },
                SchaeferClass::DualHorn => Lit {
                    var: v,
                    positive: i != special,
                },
                _ => Lit {
                    var: v,
                    positive: rng.gen_bool(0.5),
                },
            })
            .collect();
        f.add_clause(lits);
    }
    Ok(f)
}
