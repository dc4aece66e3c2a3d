//! Job configuration: named algebras, Morita contexts, algebroids, and
//! coefficients, plus the ordered list of jobs to run against them. The
//! format is TOML with every rational written exactly as "num/den".

use algebroid::linalg::{parse_scalar, sc, Matrix, SparseVec};
use serde::Deserialize;
use std::collections::BTreeMap;

/// A whole run: definitions by name, then jobs referring to the names.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Ambient-dimension cap for any single quotient construction.
    #[serde(default)]
    pub size_limit: Option<usize>,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraDef>,
    #[serde(default)]
    pub contexts: BTreeMap<String, ContextDef>,
    #[serde(default)]
    pub algebroids: BTreeMap<String, AlgebroidDef>,
    #[serde(default)]
    pub coefficients: BTreeMap<String, CoefficientDef>,
    #[serde(default)]
    pub jobs: Vec<JobDef>,
}

/// A named algebra: a stock constructor or explicit structure constants.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraDef {
    /// The rationals as a one-dimensional algebra.
    Rationals,
    /// The dual numbers: rationals adjoined a square-zero element.
    DualNumbers,
    /// The product of two copies of the rationals.
    SplitPair,
    /// k-by-k matrices over a named base algebra.
    Matrix { base: String, k: usize },
    /// Arbitrary structure constants: mul[i][j] is the dense coefficient
    /// vector of the product of basis elements i and j.
    Explicit {
        dim: usize,
        #[serde(default)]
        labels: Option<Vec<String>>,
        unit: Vec<String>,
        mul: Vec<Vec<Vec<String>>>,
    },
}

/// Dense action matrices per basis element of the two acting algebras.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleDef {
    pub dim: usize,
    /// left[a] is the dense matrix of left action by basis element a.
    pub left: Vec<Vec<Vec<String>>>,
    /// right[a] is the dense matrix of right action by basis element a.
    pub right: Vec<Vec<Vec<String>>>,
}

/// A named Morita context.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ContextDef {
    /// The trivial self-equivalence of a named algebra.
    Identity { base: String },
    /// The standard equivalence between a named algebra and its k-by-k
    /// matrix algebra through row and column modules.
    Matrix { base: String, k: usize },
    /// A full sextuple: both algebras, the two bimodules, and the pairing
    /// matrices on plain pair coordinates (left index times right dimension
    /// plus right index).
    Explicit {
        r: String,
        s: String,
        p: BimoduleDef,
        q: BimoduleDef,
        phi: Vec<Vec<String>>,
        psi: Vec<Vec<String>>,
    },
}

/// A named left Hopf algebroid.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebroidDef {
    /// The enveloping algebroid of a named base algebra.
    Enveloping { base: String },
    /// Morita base change of a named algebroid along a named context.
    BaseChange {
        context: String,
        algebroid: String,
    },
}

/// A named coefficient (module plus comodule) over a named algebroid.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientDef {
    /// The base algebra itself as the canonical stable coefficient of its
    /// enveloping algebroid.
    CanonicalR { algebroid: String },
    /// Explicit data: right_action[u] per total basis element, left_base[r]
    /// per base basis element, and the ambient coaction matrix with rows
    /// indexed by total index times coefficient dimension plus coefficient
    /// index.
    Explicit {
        algebroid: String,
        dim: usize,
        right_action: Vec<Vec<Vec<String>>>,
        left_base: Vec<Vec<Vec<String>>>,
        coaction: Vec<Vec<String>>,
    },
}

/// One job: a verb plus the names it applies to and an optional degree cap.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "verb", rename_all = "kebab-case", deny_unknown_fields)]
pub enum JobDef {
    /// Full bialgebroid and left Hopf axiom suite on a named algebroid.
    CheckAxioms { algebroid: String },
    /// Base change a named algebroid along a named context, verify the
    /// result in full, and identify the changed total algebra with the
    /// enveloping algebra of the new base when the source is enveloping.
    BaseChange { context: String, algebroid: String },
    /// Comodule, compatibility, and stability checks on a named coefficient.
    CheckSayd { coefficient: String },
    /// Para-cyclic identity suite plus Hochschild and cyclic homology
    /// tables of a named coefficient.
    Homology {
        coefficient: String,
        #[serde(default)]
        cap: Option<usize>,
    },
    /// Cochain mirror of the homology job.
    Cohomology {
        coefficient: String,
        #[serde(default)]
        cap: Option<usize>,
    },
    /// The full transfer verification between a named coefficient and its
    /// base change along a named context: chain maps, homotopy, cyclic
    /// compatibilities, the closed cyclic operator, the cochain mirrors,
    /// stability on both sides, and the dimension comparisons.
    VerifyMorita {
        context: String,
        coefficient: String,
        #[serde(default)]
        cap: Option<usize>,
    },
    /// End-to-end matrix-algebra invariance for a named plain algebra in
    /// classical shape, cross-checked against the independent resolution.
    Classical {
        base: String,
        k: usize,
        #[serde(default)]
        cap: Option<usize>,
    },
}

impl JobDef {
    pub fn verb(&self) -> &'static str {
        match self {
            JobDef::CheckAxioms { .. } => "check-axioms",
            JobDef::BaseChange { .. } => "base-change",
            JobDef::CheckSayd { .. } => "check-sayd",
            JobDef::Homology { .. } => "homology",
            JobDef::Cohomology { .. } => "cohomology",
            JobDef::VerifyMorita { .. } => "verify-morita",
            JobDef::Classical { .. } => "classical",
        }
    }

    /// The degree cap this job will run at, given the command-line override.
    pub fn effective_cap(&self, flag: Option<usize>) -> usize {
        let own = match self {
            JobDef::Homology { cap, .. }
            | JobDef::Cohomology { cap, .. }
            | JobDef::VerifyMorita { cap, .. }
            | JobDef::Classical { cap, .. } => *cap,
            _ => None,
        };
        flag.or(own).unwrap_or(3)
    }
}

/// Parse a dense coordinate vector of exact rationals.
pub fn parse_vec(entries: &[String], dim: usize, what: &str) -> Result<SparseVec, String> {
    if entries.len() != dim {
        return Err(format!("{what}: expected {dim} entries, got {}", entries.len()));
    }
    let mut v: SparseVec = Vec::new();
    for (i, text) in entries.iter().enumerate() {
        let c = parse_scalar(text).map_err(|e| format!("{what} entry {i}: {e}"))?;
        if c != sc(0) {
            v.push((i, c));
        }
    }
    Ok(v)
}

/// Parse a dense matrix of exact rationals, rows outermost.
pub fn parse_matrix(
    rows: &[Vec<String>],
    expect_rows: usize,
    expect_cols: usize,
    what: &str,
) -> Result<Matrix, String> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(format!("{what}: expected a {expect_rows}x{expect_cols} matrix"));
    }
    let mut triples = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, text) in row.iter().enumerate() {
            let c = parse_scalar(text).map_err(|e| format!("{what} entry ({i},{j}): {e}"))?;
            if c != sc(0) {
                triples.push((i, j, c));
            }
        }
    }
    Ok(Matrix::from_triples(expect_rows, expect_cols, triples))
}

/// Static validation: every referenced name is declared and every explicit
/// degree cap is at least one. Returns all problems, not just the first.
pub fn validate(cfg: &JobConfig) -> Vec<String> {
    let mut errs = Vec::new();
    let need_algebra = |name: &str, at: &str, errs: &mut Vec<String>| {
        if !cfg.algebras.contains_key(name) {
            errs.push(format!("{at}: unknown algebra {name:?}"));
        }
    };
    for (name, def) in &cfg.algebras {
        if let AlgebraDef::Matrix { base, k } = def {
            need_algebra(base, &format!("algebra {name}"), &mut errs);
            if *k == 0 {
                errs.push(format!("algebra {name}: matrix size must be at least 1"));
            }
        }
    }
    for (name, def) in &cfg.contexts {
        let at = format!("context {name}");
        match def {
            ContextDef::Identity { base } => need_algebra(base, &at, &mut errs),
            ContextDef::Matrix { base, k } => {
                need_algebra(base, &at, &mut errs);
                if *k == 0 {
                    errs.push(format!("{at}: matrix size must be at least 1"));
                }
            }
            ContextDef::Explicit { r, s, .. } => {
                need_algebra(r, &at, &mut errs);
                need_algebra(s, &at, &mut errs);
            }
        }
    }
    for (name, def) in &cfg.algebroids {
        let at = format!("algebroid {name}");
        match def {
            AlgebroidDef::Enveloping { base } => need_algebra(base, &at, &mut errs),
            AlgebroidDef::BaseChange { context, algebroid } => {
                if !cfg.contexts.contains_key(context) {
                    errs.push(format!("{at}: unknown context {context:?}"));
                }
                if !cfg.algebroids.contains_key(algebroid) {
                    errs.push(format!("{at}: unknown algebroid {algebroid:?}"));
                }
            }
        }
    }
    for (name, def) in &cfg.coefficients {
        let at = format!("coefficient {name}");
        let algebroid = match def {
            CoefficientDef::CanonicalR { algebroid } => algebroid,
            CoefficientDef::Explicit { algebroid, .. } => algebroid,
        };
        if !cfg.algebroids.contains_key(algebroid) {
            errs.push(format!("{at}: unknown algebroid {algebroid:?}"));
        }
    }
    for (i, job) in cfg.jobs.iter().enumerate() {
        let at = format!("job {i} ({})", job.verb());
        match job {
            JobDef::CheckAxioms { algebroid } => {
                if !cfg.algebroids.contains_key(algebroid) {
                    errs.push(format!("{at}: unknown algebroid {algebroid:?}"));
                }
            }
            JobDef::BaseChange { context, algebroid } => {
                if !cfg.contexts.contains_key(context) {
                    errs.push(format!("{at}: unknown context {context:?}"));
                }
                if !cfg.algebroids.contains_key(algebroid) {
                    errs.push(format!("{at}: unknown algebroid {algebroid:?}"));
                }
            }
            JobDef::CheckSayd { coefficient }
            | JobDef::Homology { coefficient, .. }
            | JobDef::Cohomology { coefficient, .. } => {
                if !cfg.coefficients.contains_key(coefficient) {
                    errs.push(format!("{at}: unknown coefficient {coefficient:?}"));
                }
            }
            JobDef::VerifyMorita {
                context,
                coefficient,
                ..
            } => {
                if !cfg.contexts.contains_key(context) {
                    errs.push(format!("{at}: unknown context {context:?}"));
                }
                if !cfg.coefficients.contains_key(coefficient) {
                    errs.push(format!("{at}: unknown coefficient {coefficient:?}"));
                }
            }
            JobDef::Classical { base, k, .. } => {
                need_algebra(base, &at, &mut errs);
                if *k == 0 {
                    errs.push(format!("{at}: matrix size must be at least 1"));
                }
            }
        }
        if job.effective_cap(None) < 1 {
            errs.push(format!("{at}: degree cap must be at least 1"));
        }
    }
    errs
}
