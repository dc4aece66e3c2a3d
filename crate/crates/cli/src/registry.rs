//! Name resolution: builds every declared algebra, context, algebroid, and
//! coefficient once, in sorted name order, caching both successes and
//! failures so jobs can share them read-only.

use crate::config::{
    parse_matrix, parse_vec, AlgebraDef, AlgebroidDef, BimoduleDef, CoefficientDef, ContextDef,
    JobConfig,
};
use algebroid::algebra::{matrix_algebra, Algebra};
use algebroid::basechange::{base_change_algebroid, canonical_coefficient, Coefficient};
use algebroid::bimodule::Bimodule;
use algebroid::hopfalgebroid::{enveloping_hopf_algebroid, LeftHopfAlgebroid};
use algebroid::linalg::SparseVec;
use algebroid::morita::{identity_context, make_morita_context, matrix_context, MoritaContext};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

type Cached<T> = BTreeMap<String, Result<T, String>>;

/// Every named entity, fully built or failed with a message.
pub struct Registry {
    pub size_limit: usize,
    pub algebras: Cached<Arc<Algebra>>,
    pub contexts: Cached<Arc<MoritaContext>>,
    pub algebroids: Cached<Arc<LeftHopfAlgebroid>>,
    pub coefficients: Cached<Arc<Coefficient>>,
}

impl Registry {
    pub fn algebra(&self, name: &str) -> Result<Arc<Algebra>, String> {
        lookup(&self.algebras, "algebra", name)
    }

    pub fn context(&self, name: &str) -> Result<Arc<MoritaContext>, String> {
        lookup(&self.contexts, "context", name)
    }

    pub fn algebroid(&self, name: &str) -> Result<Arc<LeftHopfAlgebroid>, String> {
        lookup(&self.algebroids, "algebroid", name)
    }

    pub fn coefficient(&self, name: &str) -> Result<Arc<Coefficient>, String> {
        lookup(&self.coefficients, "coefficient", name)
    }
}

fn lookup<T: Clone>(map: &Cached<T>, kind: &str, name: &str) -> Result<T, String> {
    match map.get(name) {
        Some(Ok(v)) => Ok(v.clone()),
        Some(Err(e)) => Err(e.clone()),
        None => Err(format!("unknown {kind} {name:?}")),
    }
}

/// Build all declared entities. Definitions may reference each other by
/// name; reference cycles are reported as errors rather than recursed into.
pub fn build(cfg: &JobConfig, size_limit: usize) -> Registry {
    let mut reg = Registry {
        size_limit,
        algebras: BTreeMap::new(),
        contexts: BTreeMap::new(),
        algebroids: BTreeMap::new(),
        coefficients: BTreeMap::new(),
    };
    let mut visiting: BTreeSet<String> = BTreeSet::new();
    for name in cfg.algebras.keys() {
        let _ = resolve_algebra(cfg, &mut reg, &mut visiting, name);
    }
    for name in cfg.contexts.keys() {
        resolve_context(cfg, &mut reg, name);
    }
    for name in cfg.algebroids.keys() {
        let _ = resolve_algebroid(cfg, &mut reg, &mut visiting, name);
    }
    for name in cfg.coefficients.keys() {
        resolve_coefficient(cfg, &mut reg, name);
    }
    reg
}

fn resolve_algebra(
    cfg: &JobConfig,
    reg: &mut Registry,
    visiting: &mut BTreeSet<String>,
    name: &str,
) -> Result<Arc<Algebra>, String> {
    if let Some(hit) = reg.algebras.get(name) {
        return hit.clone();
    }
    let key = format!("algebra/{name}");
    if !visiting.insert(key.clone()) {
        let err = Err(format!("algebra {name}: definition cycle"));
        reg.algebras.insert(name.to_string(), err.clone());
        return err;
    }
    let result = build_algebra(cfg, reg, visiting, name);
    visiting.remove(&key);
    reg.algebras.insert(name.to_string(), result.clone());
    result
}

fn build_algebra(
    cfg: &JobConfig,
    reg: &mut Registry,
    visiting: &mut BTreeSet<String>,
    name: &str,
) -> Result<Arc<Algebra>, String> {
    let def = cfg
        .algebras
        .get(name)
        .ok_or_else(|| format!("unknown algebra {name:?}"))?;
    let at = format!("algebra {name}");
    match def {
        AlgebraDef::Rationals => Ok(Arc::new(Algebra::rationals())),
        AlgebraDef::DualNumbers => Ok(Arc::new(Algebra::dual_numbers())),
        AlgebraDef::SplitPair => Ok(Arc::new(Algebra::split_pair())),
        AlgebraDef::Matrix { base, k } => {
            if *k == 0 {
                return Err(format!("{at}: matrix size must be at least 1"));
            }
            let b = resolve_algebra(cfg, reg, visiting, base).map_err(|e| format!("{at}: {e}"))?;
            Ok(Arc::new(matrix_algebra(&b, *k)))
        }
        AlgebraDef::Explicit {
            dim,
            labels,
            unit,
            mul,
        } => {
            let labels = match labels {
                Some(l) => l.clone(),
                None => (0..*dim).map(|i| format!("e{i}")).collect(),
            };
            let unit = parse_vec(unit, *dim, &format!("{at} unit"))?;
            if mul.len() != *dim || mul.iter().any(|row| row.len() != *dim) {
                return Err(format!("{at}: mul must be a {dim}x{dim} table of vectors"));
            }
            let mut table: Vec<Vec<SparseVec>> = Vec::with_capacity(*dim);
            for (i, row) in mul.iter().enumerate() {
                let mut out = Vec::with_capacity(*dim);
                for (j, entry) in row.iter().enumerate() {
                    out.push(parse_vec(entry, *dim, &format!("{at} mul[{i}][{j}]"))?);
                }
                table.push(out);
            }
            Algebra::new(*dim, labels, table, unit)
                .map(Arc::new)
                .map_err(|e| format!("{at}: {e}"))
        }
    }
}

fn build_bimodule(
    def: &BimoduleDef,
    left_alg: &Arc<Algebra>,
    right_alg: &Arc<Algebra>,
    at: &str,
) -> Result<Bimodule, String> {
    if def.left.len() != left_alg.dim || def.right.len() != right_alg.dim {
        return Err(format!(
            "{at}: need one left matrix per basis element of the left algebra and one right matrix per basis element of the right algebra"
        ));
    }
    let mut left = Vec::with_capacity(left_alg.dim);
    for (a, rows) in def.left.iter().enumerate() {
        left.push(parse_matrix(rows, def.dim, def.dim, &format!("{at} left[{a}]"))?);
    }
    let mut right = Vec::with_capacity(right_alg.dim);
    for (a, rows) in def.right.iter().enumerate() {
        right.push(parse_matrix(rows, def.dim, def.dim, &format!("{at} right[{a}]"))?);
    }
    Bimodule::new(left_alg.clone(), right_alg.clone(), def.dim, left, right, at)
        .map_err(|e| format!("{at}: {e}"))
}

fn resolve_context(cfg: &JobConfig, reg: &mut Registry, name: &str) {
    if reg.contexts.contains_key(name) {
        return;
    }
    let result = build_context(cfg, reg, name);
    reg.contexts.insert(name.to_string(), result);
}

fn build_context(
    cfg: &JobConfig,
    reg: &mut Registry,
    name: &str,
) -> Result<Arc<MoritaContext>, String> {
    let def = cfg
        .contexts
        .get(name)
        .ok_or_else(|| format!("unknown context {name:?}"))?;
    let at = format!("context {name}");
    match def {
        ContextDef::Identity { base } => {
            let b = reg.algebra(base).map_err(|e| format!("{at}: {e}"))?;
            identity_context(&b, reg.size_limit)
                .map(Arc::new)
                .map_err(|e| format!("{at}: {e}"))
        }
        ContextDef::Matrix { base, k } => {
            if *k == 0 {
                return Err(format!("{at}: matrix size must be at least 1"));
            }
            let b = reg.algebra(base).map_err(|e| format!("{at}: {e}"))?;
            matrix_context(&b, *k, reg.size_limit)
                .map(Arc::new)
                .map_err(|e| format!("{at}: {e}"))
        }
        ContextDef::Explicit {
            r,
            s,
            p,
            q,
            phi,
            psi,
        } => {
            let ra = reg.algebra(r).map_err(|e| format!("{at}: {e}"))?;
            let sa = reg.algebra(s).map_err(|e| format!("{at}: {e}"))?;
            let pm = build_bimodule(p, &sa, &ra, &format!("{at} first bimodule"))?;
            let qm = build_bimodule(q, &ra, &sa, &format!("{at} second bimodule"))?;
            let phi = parse_matrix(phi, sa.dim, pm.dim * qm.dim, &format!("{at} phi"))?;
            let psi = parse_matrix(psi, ra.dim, qm.dim * pm.dim, &format!("{at} psi"))?;
            make_morita_context(&ra, &sa, &pm, &qm, &phi, &psi, reg.size_limit)
                .map(Arc::new)
                .map_err(|e| format!("{at}: {e}"))
        }
    }
}

fn resolve_algebroid(
    cfg: &JobConfig,
    reg: &mut Registry,
    visiting: &mut BTreeSet<String>,
    name: &str,
) -> Result<Arc<LeftHopfAlgebroid>, String> {
    if let Some(hit) = reg.algebroids.get(name) {
        return hit.clone();
    }
    let key = format!("algebroid/{name}");
    if !visiting.insert(key.clone()) {
        let err = Err(format!("algebroid {name}: definition cycle"));
        reg.algebroids.insert(name.to_string(), err.clone());
        return err;
    }
    let result = build_algebroid(cfg, reg, visiting, name);
    visiting.remove(&key);
    reg.algebroids.insert(name.to_string(), result.clone());
    result
}

fn build_algebroid(
    cfg: &JobConfig,
    reg: &mut Registry,
    visiting: &mut BTreeSet<String>,
    name: &str,
) -> Result<Arc<LeftHopfAlgebroid>, String> {
    let def = cfg
        .algebroids
        .get(name)
        .ok_or_else(|| format!("unknown algebroid {name:?}"))?;
    let at = format!("algebroid {name}");
    match def {
        AlgebroidDef::Enveloping { base } => {
            let b = reg.algebra(base).map_err(|e| format!("{at}: {e}"))?;
            enveloping_hopf_algebroid(&b, reg.size_limit)
                .map(Arc::new)
                .map_err(|e| format!("{at}: {e}"))
        }
        AlgebroidDef::BaseChange { context, algebroid } => {
            let ctx = reg.context(context).map_err(|e| format!("{at}: {e}"))?;
            let src =
                resolve_algebroid(cfg, reg, visiting, algebroid).map_err(|e| format!("{at}: {e}"))?;
            base_change_algebroid(&ctx, &src, reg.size_limit)
                .map(|bc| bc.hopf)
                .map_err(|e| format!("{at}: {e}"))
        }
    }
}

fn resolve_coefficient(cfg: &JobConfig, reg: &mut Registry, name: &str) {
    if reg.coefficients.contains_key(name) {
        return;
    }
    let result = build_coefficient(cfg, reg, name);
    reg.coefficients.insert(name.to_string(), result);
}

fn build_coefficient(
    cfg: &JobConfig,
    reg: &mut Registry,
    name: &str,
) -> Result<Arc<Coefficient>, String> {
    let def = cfg
        .coefficients
        .get(name)
        .ok_or_else(|| format!("unknown coefficient {name:?}"))?;
    let at = format!("coefficient {name}");
    match def {
        CoefficientDef::CanonicalR { algebroid } => {
            let h = reg.algebroid(algebroid).map_err(|e| format!("{at}: {e}"))?;
            canonical_coefficient(&h, reg.size_limit)
                .map(Arc::new)
                .map_err(|e| format!("{at}: {e}"))
        }
        CoefficientDef::Explicit {
            algebroid,
            dim,
            right_action,
            left_base,
            coaction,
        } => {
            let h = reg.algebroid(algebroid).map_err(|e| format!("{at}: {e}"))?;
            let du = h.bialgebroid.total.dim;
            let dr = h.bialgebroid.base.dim;
            if right_action.len() != du {
                return Err(format!("{at}: need one right_action matrix per total basis element ({du})"));
            }
            if left_base.len() != dr {
                return Err(format!("{at}: need one left_base matrix per base basis element ({dr})"));
            }
            let mut ra = Vec::with_capacity(du);
            for (u, rows) in right_action.iter().enumerate() {
                ra.push(parse_matrix(rows, *dim, *dim, &format!("{at} right_action[{u}]"))?);
            }
            let mut lb = Vec::with_capacity(dr);
            for (r, rows) in left_base.iter().enumerate() {
                lb.push(parse_matrix(rows, *dim, *dim, &format!("{at} left_base[{r}]"))?);
            }
            let co = parse_matrix(coaction, du * dim, *dim, &format!("{at} coaction"))?;
            Coefficient::new(&h, *dim, ra, lb, &co, reg.size_limit)
                .map(Arc::new)
                .map_err(|e| format!("{at}: {e}"))
        }
    }
}
