use std::path::Path;

use anyhow::{bail, Context, Result};
use diffpi::diffpoly::parse_list;
use diffpi::exactla::RankAccumulator;
use diffpi::fdalg::{derivation_space, lie_structure, operator_closure, AlgebraJson, FDAlgebra, OperatorBasis};
use diffpi::ideals::{
    cocharacter, codimension, verify_generating_set, EvaluationPlan, PlanMode,
};
use diffpi::zoo::{
    build_named, closed_form, default_truncation, expected_multiplicities, generator_set,
    grassmann_scan, list_models, ModelSpec,
};
use diffpi::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{DerspaceArgs, ModelArgs, RunArgs, ScanArgs, VerifyArgs};
use crate::report::Report;

/// An algebra ready for computation, with its registry entry when built in.
struct Loaded {
    name: String,
    spec: Option<ModelSpec>,
    algebra: FDAlgebra,
    w: OperatorBasis,
}

fn is_grassmann_family(name: &str) -> bool {
    name == "grassmann" || name == "grassmann_der" || name.starts_with("grassmann(") || name.starts_with("grassmann_der(")
}

/// The model for degree `n`; Grassmann truncations default to `2n + t`.
fn load(args: &ModelArgs, n: usize) -> Result<Loaded> {
    if let Some(path) = &args.json {
        if args.m.is_some() || args.t.is_some() {
            bail!("--m and --t apply only to built-in Grassmann models");
        }
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let algebra = AlgebraJson::parse(&text)?;
        let w = operator_closure(&algebra);
        let name = Path::new(path).file_stem().map_or("json".into(), |s| s.to_string_lossy().into_owned());
        return Ok(Loaded { name, spec: None, algebra, w });
    }
    let name = args.model.as_deref().expect("clap requires --model or --json");
    if !is_grassmann_family(name) && (args.m.is_some() || args.t.is_some()) {
        bail!("--m and --t apply only to Grassmann models, not {name}");
    }
    if name == "grassmann" && args.t.is_some() {
        bail!("--t needs grassmann_der; grassmann has no derivations");
    }
    let m = match (args.m, name) {
        (Some(m), _) => Some(m),
        (None, "grassmann") => Some(default_truncation(n, 0)),
        (None, "grassmann_der") => Some(default_truncation(n, args.t.unwrap_or(1))),
        _ => None,
    };
    let spec = ModelSpec::parse_with(name, m, args.t)?;
    let model = build_named(&spec)?;
    Ok(Loaded { name: spec.to_string(), spec: Some(spec), algebra: model.algebra, w: model.w })
}

/// Loads once for ordinary models and once per degree for Grassmann truncations.
struct ModelCache<'a> {
    args: &'a ModelArgs,
    current: Option<(bool, Loaded)>,
}

impl<'a> ModelCache<'a> {
    fn new(args: &'a ModelArgs) -> Self {
        ModelCache { args, current: None }
    }

    fn get(&mut self, n: usize) -> Result<&Loaded> {
        let reusable = matches!(&self.current, Some((per_degree, _)) if !per_degree);
        if !reusable {
            let loaded = load(self.args, n)?;
            let per_degree = loaded.spec.is_some_and(|s| s.is_grassmann()) && self.args.m.is_none()
                && !self.args.model.as_deref().is_some_and(|m| m.contains('('));
            self.current = Some((per_degree, loaded));
        }
        Ok(&self.current.as_ref().unwrap().1)
    }
}

fn plan_for(args: &RunArgs, model: &Loaded) -> EvaluationPlan {
    let grassmann = model.algebra.grassmann_shape().is_some();
    let mode = args.mode.unwrap_or(if grassmann { PlanMode::Canonical } else { PlanMode::Full });
    EvaluationPlan { seed: args.seed, ..EvaluationPlan::new(mode) }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

#[derive(Serialize)]
struct CodimRow {
    model: String,
    n: usize,
    c_n: usize,
    expected: Option<u64>,
    #[serde(rename = "match")]
    matches: Option<bool>,
    mode: PlanMode,
    seed: u64,
    ms: u128,
    exact: bool,
    ambient: usize,
    tuples_evaluated: usize,
}

pub fn codim(args: &RunArgs) -> Result<Report> {
    let mut cache = ModelCache::new(&args.model);
    let mut rows = Vec::new();
    let mut report = Report::new(&["model", "n", "c_n", "expected", "match", "mode", "seed", "ms"]);
    for n in args.n.0..=args.n.1 {
        let model = cache.get(n)?;
        let plan = plan_for(args, model);
        let r = codimension(&model.algebra, &model.w, n, &plan)?;
        let expected = model.spec.and_then(|s| closed_form(&s, n));
        let row = CodimRow {
            model: model.name.clone(),
            n,
            c_n: r.c_n,
            expected,
            matches: expected.map(|e| e == r.c_n as u64),
            mode: plan.mode,
            seed: plan.seed,
            ms: if args.timing { r.ms } else { 0 },
            exact: r.exact,
            ambient: r.ambient,
            tuples_evaluated: r.tuples_evaluated,
        };
        if row.matches == Some(false) {
            report.fail(json!({"model": row.model, "n": n, "c_n": r.c_n, "expected": expected}));
        }
        report.row(vec![
            row.model.clone(),
            n.to_string(),
            r.c_n.to_string(),
            opt(expected),
            opt(row.matches),
            plan.mode.to_string(),
            plan.seed.to_string(),
            row.ms.to_string(),
        ]);
        rows.push(row);
    }
    report.json = serde_json::to_value(rows)?;
    Ok(report)
}

pub fn cochar(args: &RunArgs) -> Result<Report> {
    let mut cache = ModelCache::new(&args.model);
    let mut out = Vec::new();
    let mut report = Report::new(&[
        "model", "n", "c_n", "partition", "multiplicity", "expected", "match", "mode", "seed", "ms",
    ]);
    for n in args.n.0..=args.n.1 {
        let model = cache.get(n)?;
        let plan = plan_for(args, model);
        let start = std::time::Instant::now();
        let c = cocharacter(&model.algebra, &model.w, n, &plan)?;
        let ms = if args.timing { start.elapsed().as_millis() } else { 0 };
        let expected = model.spec.and_then(|s| expected_multiplicities(&s, n));
        let matches = expected.as_ref().map(|e| *e == c.multiplicities);
        if matches == Some(false) {
            report.fail(json!({
                "model": model.name, "n": n,
                "multiplicities": c.multiplicities.to_string(),
                "expected": expected.as_ref().map(ToString::to_string),
            }));
        }
        let mut shapes: Vec<_> = c.multiplicities.iter().map(|(l, _)| l.clone()).collect();
        if let Some(e) = &expected {
            shapes.extend(e.iter().map(|(l, _)| l.clone()));
        }
        shapes.sort();
        shapes.dedup();
        for lambda in &shapes {
            let got = c.multiplicities.get(lambda);
            let want = expected.as_ref().map(|e| e.get(lambda));
            report.row(vec![
                model.name.clone(),
                n.to_string(),
                c.c_n.to_string(),
                lambda.to_string(),
                got.to_string(),
                opt(want),
                opt(want.map(|w| w == got)),
                plan.mode.to_string(),
                plan.seed.to_string(),
                ms.to_string(),
            ]);
        }
        out.push(json!({
            "model": model.name,
            "n": n,
            "c_n": c.c_n,
            "multiplicities": c.multiplicities,
            "expected": expected,
            "match": matches,
            "traces": c.traces.iter().map(|(k, v)| json!([k, v.to_string()])).collect::<Vec<_>>(),
            "mode": plan.mode,
            "seed": plan.seed,
            "ms": ms,
        }));
    }
    report.json = Value::Array(out);
    Ok(report)
}

pub fn verify(args: &VerifyArgs) -> Result<Report> {
    let run = &args.run;
    let mut cache = ModelCache::new(&run.model);
    let mut out = Vec::new();
    let mut report = Report::new(&[
        "model", "n", "c_n", "expected", "match", "mode", "seed", "ms", "upper", "equal", "gens_hash",
    ]);
    for n in run.n.0..=run.n.1 {
        let model = cache.get(n)?;
        let gens = match (&args.gens, model.spec) {
            (Some(text), _) => parse_list(text, &model.w)?,
            (None, Some(spec)) => generator_set(&spec, &model.w)?,
            (None, None) => bail!("--gens is required for algebras read from JSON"),
        };
        let plan = plan_for(run, model);
        let expected = model.spec.and_then(|s| closed_form(&s, n));
        let start = std::time::Instant::now();
        let v = match verify_generating_set(&model.algebra, &model.w, &gens, n, expected, &plan) {
            Ok(v) => v,
            Err(Error::NotAnIdentity { generator, tuple }) => {
                report.fail(json!({
                    "model": model.name, "n": n,
                    "not_an_identity": generator,
                    "witness": tuple.iter().map(|&b| model.algebra.basis_names()[b].clone()).collect::<Vec<_>>(),
                }));
                break;
            }
            Err(e) => return Err(e.into()),
        };
        let ms = if run.timing { start.elapsed().as_millis() } else { 0 };
        if !v.equal || v.matches_closed_form == Some(false) {
            report.fail(json!({
                "model": model.name, "n": n, "lower": v.lower, "upper": v.upper, "expected": expected,
            }));
        }
        report.row(vec![
            model.name.clone(),
            n.to_string(),
            v.lower.to_string(),
            opt(expected),
            opt(v.matches_closed_form),
            plan.mode.to_string(),
            plan.seed.to_string(),
            ms.to_string(),
            v.upper.to_string(),
            v.equal.to_string(),
            v.gens_hash.clone(),
        ]);
        let mut entry = serde_json::to_value(&v)?;
        entry["model"] = json!(model.name);
        entry["seed"] = json!(plan.seed);
        entry["ms"] = json!(ms);
        out.push(entry);
    }
    report.json = Value::Array(out);
    Ok(report)
}

pub fn derspace(args: &DerspaceArgs) -> Result<Report> {
    let model = load(&args.model, 1)?;
    let a = &model.algebra;
    let (dim, basis) = derivation_space(a);
    let lie = lie_structure(&basis);
    let mut inner = RankAccumulator::new(a.dim() * a.dim());
    for i in 0..a.dim() {
        inner.insert(&a.inner_derivation(&a.basis_vector(i))?.flatten())?;
    }
    let all_inner = basis.iter().all(|d| inner.contains(&d.flatten()).unwrap_or(false));
    let mut report = Report::new(&["model", "dim", "derived_dim", "abelian", "metabelian", "inner_dim", "all_inner"]);
    report.row(vec![
        model.name.clone(),
        dim.to_string(),
        lie.derived_dim.to_string(),
        lie.abelian.to_string(),
        lie.metabelian.to_string(),
        inner.rank().to_string(),
        all_inner.to_string(),
    ]);
    let matrices: Vec<Vec<Vec<String>>> = basis
        .iter()
        .map(|m| m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect())
        .collect();
    report.json = json!({
        "model": model.name,
        "dim": dim,
        "lie": lie,
        "inner_dim": inner.rank(),
        "all_inner": all_inner,
        "basis": matrices,
    });
    Ok(report)
}

pub fn scan(args: &ScanArgs) -> Result<Report> {
    let mut report = Report::new(&["t", "n", "stable", "expected", "match", "values"]);
    let mut out = Vec::new();
    for n in args.n.0..=args.n.1 {
        let start = args.m_start.unwrap_or(default_truncation(n, args.t));
        let end = args.m_max.unwrap_or(start + 4);
        if end < start {
            bail!("--m-max {end} is below the first truncation {start}");
        }
        let s = grassmann_scan(n, args.t, start, end)?;
        if !s.matches {
            report.fail(json!({"t": args.t, "n": n, "stable": s.stable, "expected": s.closed_form, "values": s.values}));
        }
        let values: Vec<String> = s.values.iter().map(|(m, c)| format!("{m}:{c}")).collect();
        report.row(vec![
            args.t.to_string(),
            n.to_string(),
            opt(s.stable),
            s.closed_form.to_string(),
            s.matches.to_string(),
            values.join(";"),
        ]);
        out.push(s);
    }
    report.json = serde_json::to_value(out)?;
    Ok(report)
}

pub fn zoo_list(n: usize) -> Result<Report> {
    let list = list_models(n)?;
    let mut report = Report::new(&["name", "dim", "dim_w", "derivations", "w_labels"]);
    for s in &list {
        report.row(vec![
            s.name.clone(),
            s.dim.to_string(),
            s.dim_w.to_string(),
            s.derivations.join(";"),
            s.w_labels.join(";"),
        ]);
    }
    report.json = serde_json::to_value(list)?;
    Ok(report)
}

pub fn zoo_export(args: &ModelArgs, n: usize) -> Result<String> {
    if args.json.is_some() {
        bail!("export takes a built-in --model");
    }
    let loaded = load(args, n)?;
    Ok(serde_json::to_string_pretty(&AlgebraJson::from_algebra(&loaded.algebra))? + "\n")
}
