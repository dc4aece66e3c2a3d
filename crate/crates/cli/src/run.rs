//! Job execution: each verb builds what it needs from the registry, runs
//! the verifications, and produces one outcome with per-axiom booleans and
//! per-degree tables. Outcomes serialize deterministically.

use crate::config::{validate, JobConfig, JobDef};
use crate::registry::{self, Registry};
use algebroid::algebra::enveloping;
use algebroid::basechange::{
    base_change_algebroid, base_change_coefficient, canonical_coefficient, check_sayd,
    enveloping_total_iso,
};
use algebroid::classical::specialize_classical;
use algebroid::cyclic::{
    check_cyclicity, check_cocyclicity, check_para_cocyclic, check_para_cyclic, cyclic_cohomology,
    cyclic_homology, hochschild_cohomology, hochschild_homology, para_cocyclic_module,
    para_cyclic_module,
};
use algebroid::hopfalgebroid::{check_left_hopf, enveloping_hopf_algebroid};
use algebroid::linalg::{Matrix, DEFAULT_SIZE_LIMIT};
use algebroid::maps::{
    check_cocyclic_comparison, check_cyclic_comparison, cocyclic_comparison, cyclic_comparison,
};
use algebroid::oracle;
use algebroid::{CheckItem, Report};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;

type Tables = BTreeMap<String, Vec<usize>>;

/// The result of one job, written as one machine-readable file.
#[derive(Debug, Serialize)]
pub struct JobOutcome {
    pub index: usize,
    pub verb: String,
    pub inputs: BTreeMap<String, Value>,
    pub items: Vec<CheckItem>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: Tables,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    index: usize,
    verb: String,
    file: String,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct Summary {
    jobs: Vec<SummaryRow>,
    all_pass: bool,
}

/// Full run: parse, validate, build, execute, write. Returns the process
/// exit code: 0 when every job passes, 1 on verification failure, 2 when
/// the run could not be carried out.
pub fn run(
    config_path: &Path,
    out_dir: &Path,
    cap: Option<usize>,
    parallel: bool,
    size_limit: Option<usize>,
) -> i32 {
    let text = match std::fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", config_path.display());
            return 2;
        }
    };
    let cfg: JobConfig = match toml::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error in {}:\n{e}", config_path.display());
            return 2;
        }
    };
    let problems = validate(&cfg);
    if !problems.is_empty() {
        for p in &problems {
            eprintln!("config error: {p}");
        }
        return 2;
    }
    let limit = size_limit.or(cfg.size_limit).unwrap_or(DEFAULT_SIZE_LIMIT);
    let reg = match catch_unwind(AssertUnwindSafe(|| registry::build(&cfg, limit))) {
        Ok(r) => r,
        Err(p) => {
            eprintln!("internal error while building definitions: {}", panic_text(p));
            return 2;
        }
    };
    let outcomes = execute(&cfg, &reg, cap, parallel);
    if let Err(e) = write_outputs(out_dir, &outcomes) {
        eprintln!("cannot write outputs: {e}");
        return 2;
    }
    let mut all = true;
    for o in &outcomes {
        println!(
            "job {:03} {}: {}",
            o.index,
            o.verb,
            if o.pass { "pass" } else { "FAIL" }
        );
        all &= o.pass;
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("summary: {passed}/{} jobs pass", outcomes.len());
    if all {
        0
    } else {
        1
    }
}

fn panic_text(p: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".into()
    }
}

/// Run every job, sequentially or in parallel; outcomes are identical and
/// ordered by job index either way.
pub fn execute(
    cfg: &JobConfig,
    reg: &Registry,
    cap_flag: Option<usize>,
    parallel: bool,
) -> Vec<JobOutcome> {
    let run_one = |(index, job): (usize, &JobDef)| -> JobOutcome {
        match catch_unwind(AssertUnwindSafe(|| run_job(reg, index, job, cap_flag))) {
            Ok(outcome) => outcome,
            Err(p) => JobOutcome {
                index,
                verb: job.verb().to_string(),
                inputs: BTreeMap::new(),
                items: Vec::new(),
                tables: BTreeMap::new(),
                error: Some(format!("internal panic: {}", panic_text(p))),
                pass: false,
            },
        }
    };
    if parallel {
        use rayon::prelude::*;
        cfg.jobs
            .par_iter()
            .enumerate()
            .map(run_one)
            .collect()
    } else {
        cfg.jobs.iter().enumerate().map(run_one).collect()
    }
}

fn run_job(reg: &Registry, index: usize, job: &JobDef, cap_flag: Option<usize>) -> JobOutcome {
    let cap = job.effective_cap(cap_flag);
    let mut inputs: BTreeMap<String, Value> = BTreeMap::new();
    inputs.insert("size_limit".into(), reg.size_limit.into());
    let body: Result<(Report, Tables), String> = match job {
        JobDef::CheckAxioms { algebroid } => {
            inputs.insert("algebroid".into(), algebroid.as_str().into());
            job_check_axioms(reg, algebroid)
        }
        JobDef::BaseChange { context, algebroid } => {
            inputs.insert("context".into(), context.as_str().into());
            inputs.insert("algebroid".into(), algebroid.as_str().into());
            job_base_change(reg, context, algebroid)
        }
        JobDef::CheckSayd { coefficient } => {
            inputs.insert("coefficient".into(), coefficient.as_str().into());
            job_check_sayd(reg, coefficient)
        }
        JobDef::Homology { coefficient, .. } => {
            inputs.insert("coefficient".into(), coefficient.as_str().into());
            inputs.insert("cap".into(), cap.into());
            job_homology(reg, coefficient, cap)
        }
        JobDef::Cohomology { coefficient, .. } => {
            inputs.insert("coefficient".into(), coefficient.as_str().into());
            inputs.insert("cap".into(), cap.into());
            job_cohomology(reg, coefficient, cap)
        }
        JobDef::VerifyMorita {
            context,
            coefficient,
            ..
        } => {
            inputs.insert("context".into(), context.as_str().into());
            inputs.insert("coefficient".into(), coefficient.as_str().into());
            inputs.insert("cap".into(), cap.into());
            job_verify_morita(reg, context, coefficient, cap)
        }
        JobDef::Classical { base, k, .. } => {
            inputs.insert("base".into(), base.as_str().into());
            inputs.insert("k".into(), (*k).into());
            inputs.insert("cap".into(), cap.into());
            job_classical(reg, base, *k, cap)
        }
    };
    match body {
        Ok((report, tables)) => JobOutcome {
            index,
            verb: job.verb().to_string(),
            inputs,
            pass: report.all_pass(),
            items: report.items,
            tables,
            error: None,
        },
        Err(e) => JobOutcome {
            index,
            verb: job.verb().to_string(),
            inputs,
            items: Vec::new(),
            tables: BTreeMap::new(),
            error: Some(e),
            pass: false,
        },
    }
}

/// Collect a per-degree table for degrees 0 through `top`.
fn table(
    top: usize,
    f: impl Fn(usize) -> algebroid::Result<usize>,
) -> Result<Vec<usize>, String> {
    (0..=top).map(|n| f(n).map_err(|e| e.to_string())).collect()
}

fn job_check_axioms(reg: &Registry, name: &str) -> Result<(Report, Tables), String> {
    let h = reg.algebroid(name)?;
    Ok((check_left_hopf(&h), BTreeMap::new()))
}

fn job_base_change(reg: &Registry, cname: &str, aname: &str) -> Result<(Report, Tables), String> {
    let ctx = reg.context(cname)?;
    let src = reg.algebroid(aname)?;
    let bc = base_change_algebroid(&ctx, &src, reg.size_limit).map_err(|e| e.to_string())?;
    let mut report = check_left_hopf(&bc.hopf);
    let sb = &src.bialgebroid;
    if sb.total.same_structure(&enveloping(&sb.base))
        && sb.eta.matrix == Matrix::identity(sb.total.dim)
    {
        match enveloping_total_iso(&bc) {
            Ok(_) => report.pass("changed total algebra is the enveloping algebra of the new base"),
            Err(e) => report.fail(
                "changed total algebra is the enveloping algebra of the new base",
                e.to_string(),
            ),
        }
    }
    Ok((report, BTreeMap::new()))
}

fn job_check_sayd(reg: &Registry, name: &str) -> Result<(Report, Tables), String> {
    let c = reg.coefficient(name)?;
    Ok((check_sayd(&c), BTreeMap::new()))
}

fn job_homology(reg: &Registry, name: &str, cap: usize) -> Result<(Report, Tables), String> {
    let c = reg.coefficient(name)?;
    let pm = para_cyclic_module(&c, cap, reg.size_limit).map_err(|e| e.to_string())?;
    let mut report = check_para_cyclic(&pm);
    report.extend(check_cyclicity(&pm));
    let mut tables = BTreeMap::new();
    tables.insert(
        "hochschild_homology".into(),
        table(cap - 1, |n| hochschild_homology(&pm, n))?,
    );
    match table(cap - 1, |n| cyclic_homology(&pm, n)) {
        Ok(hc) => {
            tables.insert("cyclic_homology".into(), hc);
        }
        Err(e) => report.fail("cyclic homology is defined", e),
    }
    Ok((report, tables))
}

fn job_cohomology(reg: &Registry, name: &str, cap: usize) -> Result<(Report, Tables), String> {
    let c = reg.coefficient(name)?;
    let pc = para_cocyclic_module(&c, cap, reg.size_limit).map_err(|e| e.to_string())?;
    let mut report = check_para_cocyclic(&pc);
    report.extend(check_cocyclicity(&pc));
    let mut tables = BTreeMap::new();
    tables.insert(
        "hochschild_cohomology".into(),
        table(cap - 1, |n| hochschild_cohomology(&pc, n))?,
    );
    match table(cap - 1, |n| cyclic_cohomology(&pc, n)) {
        Ok(hc) => {
            tables.insert("cyclic_cohomology".into(), hc);
        }
        Err(e) => report.fail("cyclic cohomology is defined", e),
    }
    Ok((report, tables))
}

fn job_verify_morita(
    reg: &Registry,
    cname: &str,
    mname: &str,
    cap: usize,
) -> Result<(Report, Tables), String> {
    let ctx = reg.context(cname)?;
    let coeff = reg.coefficient(mname)?;
    let limit = reg.size_limit;
    let bc = base_change_algebroid(&ctx, &coeff.hopf, limit).map_err(|e| e.to_string())?;
    let changed = base_change_coefficient(&bc, &coeff, limit).map_err(|e| e.to_string())?;
    let source = para_cyclic_module(&coeff, cap, limit).map_err(|e| e.to_string())?;
    let target = para_cyclic_module(&changed.coefficient, cap, limit).map_err(|e| e.to_string())?;
    let ccap = cap - 1;
    let comp =
        cyclic_comparison(&bc, &changed, &source, &target, ccap).map_err(|e| e.to_string())?;
    let mut report = check_cyclic_comparison(&source, &target, &comp);
    let co_source = para_cocyclic_module(&coeff, cap, limit).map_err(|e| e.to_string())?;
    let co_target =
        para_cocyclic_module(&changed.coefficient, cap, limit).map_err(|e| e.to_string())?;
    let cocomp = cocyclic_comparison(&bc, &changed, &co_source, &co_target, ccap)
        .map_err(|e| e.to_string())?;
    report.extend(check_cocyclic_comparison(&co_source, &co_target, &cocomp));
    report.extend_prefixed("source coefficient: ", check_sayd(&coeff));
    report.extend_prefixed("changed coefficient: ", check_sayd(&changed.coefficient));
    let mut tables = BTreeMap::new();
    let hh_s = table(ccap, |n| hochschild_homology(&source, n))?;
    let hh_t = table(ccap, |n| hochschild_homology(&target, n))?;
    let hc_s = table(ccap, |n| cyclic_homology(&source, n))?;
    let hc_t = table(ccap, |n| cyclic_homology(&target, n))?;
    let ch_s = table(ccap, |n| hochschild_cohomology(&co_source, n))?;
    let ch_t = table(ccap, |n| hochschild_cohomology(&co_target, n))?;
    let cc_s = table(ccap, |n| cyclic_cohomology(&co_source, n))?;
    let cc_t = table(ccap, |n| cyclic_cohomology(&co_target, n))?;
    report.check(
        "Hochschild homology dimensions agree across the base change",
        hh_s == hh_t,
        format!("source {hh_s:?}, changed {hh_t:?}"),
    );
    report.check(
        "cyclic homology dimensions agree across the base change",
        hc_s == hc_t,
        format!("source {hc_s:?}, changed {hc_t:?}"),
    );
    report.check(
        "Hochschild cohomology dimensions agree across the base change",
        ch_s == ch_t,
        format!("source {ch_s:?}, changed {ch_t:?}"),
    );
    report.check(
        "cyclic cohomology dimensions agree across the base change",
        cc_s == cc_t,
        format!("source {cc_s:?}, changed {cc_t:?}"),
    );
    tables.insert("hochschild_homology".into(), hh_s);
    tables.insert("hochschild_homology_changed".into(), hh_t);
    tables.insert("cyclic_homology".into(), hc_s);
    tables.insert("cyclic_homology_changed".into(), hc_t);
    tables.insert("hochschild_cohomology".into(), ch_s);
    tables.insert("hochschild_cohomology_changed".into(), ch_t);
    tables.insert("cyclic_cohomology".into(), cc_s);
    tables.insert("cyclic_cohomology_changed".into(), cc_t);
    Ok((report, tables))
}

fn job_classical(
    reg: &Registry,
    base: &str,
    k: usize,
    cap: usize,
) -> Result<(Report, Tables), String> {
    let r = reg.algebra(base)?;
    let limit = reg.size_limit;
    let mut report = specialize_classical(&r, k, cap, limit).map_err(|e| e.to_string())?;
    let dense = oracle::dense_structure(&r);
    let regular = oracle::OracleBimodule::regular(&dense);
    let hh_oracle = oracle::hochschild_dims(&dense, &regular, cap - 1);
    let hc_oracle = oracle::cyclic_dims(&dense, cap - 1);
    let env = Arc::new(enveloping_hopf_algebroid(&r, limit).map_err(|e| e.to_string())?);
    let coeff = canonical_coefficient(&env, limit).map_err(|e| e.to_string())?;
    let pm = para_cyclic_module(&coeff, cap, limit).map_err(|e| e.to_string())?;
    let hh = table(cap - 1, |n| hochschild_homology(&pm, n))?;
    let hc = table(cap - 1, |n| cyclic_homology(&pm, n))?;
    report.check(
        "pipeline Hochschild homology matches the independent resolution",
        hh == hh_oracle,
        format!("pipeline {hh:?}, oracle {hh_oracle:?}"),
    );
    report.check(
        "pipeline cyclic homology matches the independent bicomplex",
        hc == hc_oracle,
        format!("pipeline {hc:?}, oracle {hc_oracle:?}"),
    );
    let mut tables = BTreeMap::new();
    tables.insert("hochschild_homology".into(), hh);
    tables.insert("hochschild_oracle".into(), hh_oracle);
    tables.insert("cyclic_homology".into(), hc);
    tables.insert("cyclic_oracle".into(), hc_oracle);
    Ok((report, tables))
}

/// Render one value for the human report without JSON string quotes.
fn show(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Write per-job JSON files, the JSON summary, and the human report.
pub fn write_outputs(out_dir: &Path, outcomes: &[JobOutcome]) -> Result<(), String> {
    std::fs::create_dir_all(out_dir).map_err(|e| format!("{}: {e}", out_dir.display()))?;
    let mut rows = Vec::with_capacity(outcomes.len());
    let mut human = String::from("verification report\n");
    for o in outcomes {
        let file = format!("job-{:03}-{}.json", o.index, o.verb);
        let body = serde_json::to_string_pretty(o).map_err(|e| e.to_string())?;
        std::fs::write(out_dir.join(&file), body + "\n")
            .map_err(|e| format!("{file}: {e}"))?;
        human.push_str(&format!("\njob {:03}: {}\n", o.index, o.verb));
        for (key, value) in &o.inputs {
            human.push_str(&format!("  {key} = {}\n", show(value)));
        }
        if let Some(e) = &o.error {
            human.push_str(&format!("  error: {e}\n"));
        }
        for item in &o.items {
            match (&item.pass, &item.detail) {
                (true, _) => human.push_str(&format!("  pass  {}\n", item.name)),
                (false, Some(d)) => human.push_str(&format!("  FAIL  {}: {d}\n", item.name)),
                (false, None) => human.push_str(&format!("  FAIL  {}\n", item.name)),
            }
        }
        for (name, dims) in &o.tables {
            human.push_str(&format!("  {name} = {dims:?}\n"));
        }
        human.push_str(&format!(
            "  result: {}\n",
            if o.pass { "pass" } else { "FAIL" }
        ));
        rows.push(SummaryRow {
            index: o.index,
            verb: o.verb.clone(),
            file,
            pass: o.pass,
        });
    }
    let all_pass = outcomes.iter().all(|o| o.pass);
    let passed = outcomes.iter().filter(|o| o.pass).count();
    human.push_str(&format!("\nsummary: {passed}/{} jobs pass\n", outcomes.len()));
    let summary = Summary {
        jobs: rows,
        all_pass,
    };
    let body = serde_json::to_string_pretty(&summary).map_err(|e| e.to_string())?;
    std::fs::write(out_dir.join("summary.json"), body + "\n")
        .map_err(|e| format!("summary.json: {e}"))?;
    std::fs::write(out_dir.join("report.txt"), human)
        .map_err(|e| format!("report.txt: {e}"))?;
    Ok(())
}
