//! Batch front end: read an instance, dispatch a command, write a JSON report.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use mhx_core::deligne::triple_data;
use mhx_core::factorize::{first_order_defect, glp_factor};
use mhx_core::filtered::{DecreasingFiltration, Grading, IncreasingFiltration};
use mhx_core::fixtures::fixture;
use mhx_core::hodge::deligne_bigrading;
use mhx_core::instance::{emit_instance, matrix_json, parse_instance, subspaces_json, vector_json, InstanceDocument, Meta};
use mhx_core::linalg::Matrix;
use mhx_core::orbit::{
    check_orbit, generate_split_orbit, generate_unipotent_model, grading_trace, split_admissibility, theorem4_report,
    unipotent_admissibility, IrrepSpec, OrbitSpec, PeriodMapModel, TraceMode, TraceVerdict,
};
use mhx_core::weightfilt::{monodromy_weight, relative_weight};
use mhx_core::{Complex64, GaussRat, MhxError, Scalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Bigrading,
    Wfilt,
    Relwfilt,
    GradingY,
    Factorize,
    OrbitCheck,
    Admissible,
    Theorem4,
    Trace,
    Gen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Unipotent {
    Admissible,
    Nonadmissible,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "mhx", about = "Mixed Hodge structure and nilpotent orbit computations")]
pub struct Args {
    pub command: Command,
    /// Instance files; a bare fixture name such as `tate.json` falls back to the bundled copy.
    pub files: Vec<String>,
    /// Sample points `y`, comma separated scalars.
    #[arg(long, value_delimiter = ',')]
    pub ys: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "float")]
    pub mode: Mode,
    /// Value of `s` in exact trace mode.
    #[arg(long, default_value = "0")]
    pub s: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: Option<String>,
    /// gen: one trivial string per weight.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights: Option<Vec<i64>>,
    /// gen: strings as `weight:d` or `weight:d:offset`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub irreps: Option<Vec<String>>,
    /// gen: required extension degrees.
    #[arg(long, value_delimiter = ',')]
    pub extensions: Option<Vec<i64>>,
    /// gen: conjugate by a random rational change of basis.
    #[arg(long)]
    pub scramble: bool,
    /// gen: emit a unipotent model instead of a split orbit.
    #[arg(long, value_enum)]
    pub unipotent: Option<Unipotent>,
    /// Add wall-clock timings to the report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

fn exit_for(e: &MhxError) -> i32 {
    match e {
        MhxError::Internal(_) => EXIT_INTERNAL,
        MhxError::Precondition(_) | MhxError::NotMixedHodge(_) | MhxError::Infeasible(_) => EXIT_FALSE,
        _ => EXIT_INPUT,
    }
}

fn failure(e: &MhxError) -> Outcome {
    let code = exit_for(e);
    let kind = match code {
        EXIT_INTERNAL => "internal",
        EXIT_FALSE => "verdict",
        _ => "input",
    };
    Outcome { report: json!({"verdict": false, "error": {"kind": kind, "message": e.to_string()}}), code }
}

fn input_error(message: impl Into<String>) -> Outcome {
    Outcome { report: json!({"verdict": false, "error": {"kind": "input", "message": message.into()}}), code: EXIT_INPUT }
}

fn verdict(v: bool, mut body: Map<String, Value>) -> Outcome {
    body.insert("verdict".into(), json!(v));
    Outcome { report: Value::Object(body), code: if v { EXIT_OK } else { EXIT_FALSE } }
}

pub fn grading_json(g: &Grading<GaussRat>) -> Value {
    json!({"weights": g.weights(), "eigenspaces": subspaces_json(g.eigenspaces())})
}

pub fn increasing_json(w: &IncreasingFiltration<GaussRat>) -> Value {
    subspaces_json(&w.listed())
}

pub fn decreasing_json(f: &DecreasingFiltration<GaussRat>) -> Value {
    subspaces_json(&f.listed())
}

fn complex_matrix_json(m: &Matrix<Complex64>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(|z| json!([z.re, z.im])).collect())).collect())
}

fn parse_scalars(xs: &[String]) -> Result<Vec<GaussRat>, Outcome> {
    xs.iter().map(|x| x.parse::<GaussRat>().map_err(|e| input_error(e.to_string()))).collect()
}

/// Reads `path`, falling back to the bundled fixture of the same stem.
pub fn load_instance(path: &str) -> Result<InstanceDocument, Outcome> {
    match std::fs::read_to_string(path) {
        Ok(text) => parse_instance(&text).map_err(|e| input_error(format!("{path}: {e}"))),
        Err(io) => {
            let stem = Path::new(path).file_stem().and_then(|s| s.to_str()).unwrap_or(path);
            fixture(stem).ok_or_else(|| input_error(format!("{path}: {io}")))
        }
    }
}

fn bigrading(doc: &InstanceDocument) -> Outcome {
    let o = doc.orbit();
    match deligne_bigrading(&o.f, &o.w) {
        Ok(mhs) => {
            let parts: Map<String, Value> = mhs
                .bigrading()
                .iter()
                .map(|((p, q), s)| (format!("{p},{q}"), Value::Array(s.basis().iter().map(|v| vector_json(v)).collect())))
                .collect();
            let numbers: Map<String, Value> =
                mhs.hodge_numbers().iter().map(|((p, q), h)| (format!("{p},{q}"), json!(h))).collect();
            let mut body = Map::new();
            body.insert("bigrading".into(), Value::Object(parts));
            body.insert("hodge_numbers".into(), Value::Object(numbers));
            body.insert("y".into(), grading_json(mhs.y()));
            body.insert("split_real".into(), json!(mhs.is_split_real()));
            verdict(true, body)
        }
        Err(e) => failure(&e),
    }
}

fn wfilt(doc: &InstanceDocument) -> Outcome {
    match monodromy_weight(&doc.orbit().n) {
        Ok(m) => {
            let mut body = Map::new();
            body.insert("monodromy_weight".into(), increasing_json(&m));
            verdict(true, body)
        }
        Err(e) => failure(&e),
    }
}

fn relwfilt(doc: &InstanceDocument) -> Outcome {
    let o = doc.orbit();
    match relative_weight(&o.n, &o.w) {
        Ok(r) => {
            let mut body = Map::new();
            body.insert("exists".into(), json!(r.exists));
            body.insert("relative_weight".into(), r.filtration.as_ref().map_or(Value::Null, increasing_json));
            body.insert("failure_witness".into(), json!(r.failure_witness));
            verdict(r.exists, body)
        }
        Err(e) => failure(&e),
    }
}

fn grading_y(doc: &InstanceDocument) -> Outcome {
    let o = doc.orbit();
    match triple_data(&o.f, &o.w, &o.n) {
        Ok(t) => {
            let c = t.grading.certificate;
            let comps: Map<String, Value> =
                t.grading.n_components.iter().map(|(k, m)| (k.to_string(), matrix_json(m))).collect();
            let mut body = Map::new();
            body.insert("y".into(), grading_json(&t.grading.y));
            body.insert("relative_weight".into(), increasing_json(&t.rel_w));
            body.insert("n_components".into(), Value::Object(comps));
            body.insert(
                "certificate".into(),
                json!({
                    "commutes_with_rel": c.commutes_with_rel,
                    "n_minus_one_vanishes": c.n_minus_one_vanishes,
                    "primitive": c.primitive,
                    "grades_w": c.grades_w,
                }),
            );
            verdict(c.all(), body)
        }
        Err(e) => failure(&e),
    }
}

fn factorize(doc: &InstanceDocument) -> Outcome {
    let Some(alpha) = &doc.alpha else { return input_error("factorize needs an `alpha` entry") };
    let o = doc.orbit();
    let run = || -> mhx_core::Result<Map<String, Value>> {
        let mhs = deligne_bigrading(&o.f, &o.w)?;
        let r = glp_factor(alpha, &mhs)?;
        let (dg, dl, dp) = first_order_defect(&r, alpha, &mhs)?;
        let mut body = Map::new();
        body.insert("gamma".into(), matrix_json(&r.gamma));
        body.insert("lambda".into(), matrix_json(&r.lambda));
        body.insert("phi".into(), matrix_json(&r.phi));
        body.insert("iterations".into(), json!(r.iterations));
        body.insert(
            "first_order_defect".into(),
            json!({"gamma": matrix_json(&dg), "lambda": matrix_json(&dl), "phi": matrix_json(&dp)}),
        );
        Ok(body)
    };
    match run() {
        Ok(body) => verdict(true, body),
        Err(e) => failure(&e),
    }
}

fn default_ys(args: &Args, fallback: &[i64]) -> Result<Vec<GaussRat>, Outcome> {
    match &args.ys {
        Some(ys) => parse_scalars(ys),
        None => Ok(fallback.iter().map(|&y| GaussRat::from_i64(y)).collect()),
    }
}

fn orbit_check(doc: &InstanceDocument, args: &Args) -> Outcome {
    let ys = match default_ys(args, &[1, 2, 4, 8]) {
        Ok(ys) => ys,
        Err(o) => return o,
    };
    let c = check_orbit(doc.orbit(), &ys);
    let samples: Map<String, Value> = c.samples.iter().map(|(y, ok)| (y.clone(), json!(ok))).collect();
    let mut body = Map::new();
    body.insert("horizontal".into(), json!(c.horizontal));
    body.insert("monodromy_ok".into(), json!(c.monodromy_ok));
    body.insert("samples".into(), Value::Object(samples));
    verdict(c.passed(), body)
}

fn theorem4_json(t: &mhx_core::orbit::Theorem4Report<GaussRat>) -> Value {
    let comps: Map<String, Value> = t.components.iter().map(|(k, m)| (k.to_string(), matrix_json(m))).collect();
    let hw: Map<String, Value> = t
        .highest_weight
        .iter()
        .map(|(k, (h, np))| (k.to_string(), json!({"h_eigenvalue": h, "killed_by_n_plus": np})))
        .collect();
    json!({
        "components": comps,
        "n0_equals_rho_nminus": t.n0_equals_rho_nminus,
        "nminus1_zero": t.nminus1_zero,
        "no_positive_components": t.no_positive_components,
        "highest_weight": hw,
        "all_pass": t.all_pass(),
    })
}

fn admissible(doc: &InstanceDocument) -> Outcome {
    let r = match split_admissibility(doc.orbit()) {
        Ok(r) => r,
        Err(e) => return failure(&e),
    };
    let mut body = Map::new();
    body.insert("admissible".into(), json!(r.admissible()));
    body.insert("limiting_filtration_exists".into(), json!(r.limiting_filtration_exists));
    body.insert("relative_weight_exists".into(), json!(r.relative_weight_exists));
    body.insert("relative_weight".into(), r.relative_weight.as_ref().map_or(Value::Null, increasing_json));
    body.insert("failure_witness".into(), json!(r.failure_witness));
    body.insert("is_mhs_pair".into(), json!(r.is_mhs_pair));
    body.insert("w_by_sub_mhs".into(), json!(r.w_by_sub_mhs));
    body.insert("n_is_minus1minus1".into(), json!(r.n_is_minus1minus1));
    body.insert("is_split".into(), json!(r.is_split));
    body.insert("split_direct".into(), json!(r.split_direct()));
    body.insert("split_limit".into(), json!(r.split_limit()));
    body.insert("y_infty".into(), r.y_infty.as_ref().map_or(Value::Null, grading_json));
    body.insert("y_infty_real".into(), json!(r.y_infty_real));
    body.insert("orbit_check".into(), json!(r.orbit.passed()));
    if doc.model.is_unipotent() {
        if let Ok(u) = unipotent_admissibility(&doc.model) {
            body.insert(
                "unipotent".into(),
                json!({
                    "admissible": u.admissible,
                    "y_infty": u.y_infty.as_ref().map_or(Value::Null, grading_json),
                    "obstruction": u.obstruction.as_ref().map_or(Value::Null, matrix_json),
                }),
            );
        }
    }
    verdict(r.admissible(), body)
}

fn theorem4(doc: &InstanceDocument) -> Outcome {
    let r = match split_admissibility(doc.orbit()) {
        Ok(r) => r,
        Err(e) => return failure(&e),
    };
    let Some(y) = &r.y_infty else {
        let mut body = Map::new();
        body.insert("reason".into(), json!("no limiting grading: the orbit is not admissible"));
        return verdict(false, body);
    };
    let t = match r.theorem4.clone().map(Ok).unwrap_or_else(|| theorem4_report(doc.orbit(), y)) {
        Ok(t) => t,
        Err(e) => return failure(&e),
    };
    let mut body = Map::new();
    body.insert("y_infty".into(), grading_json(y));
    body.insert("report".into(), theorem4_json(&t));
    verdict(t.all_pass(), body)
}

fn trace(doc: &InstanceDocument, args: &Args) -> Outcome {
    let ys = match default_ys(args, &[2, 4, 8, 16]) {
        Ok(ys) => ys,
        Err(o) => return o,
    };
    let mode = match args.mode {
        Mode::Float => TraceMode::Float,
        Mode::Exact => match args.s.parse::<GaussRat>() {
            Ok(s) => TraceMode::ExactDecoupled { s },
            Err(e) => return input_error(e.to_string()),
        },
    };
    let t = match grading_trace(&doc.model, &ys, &mode) {
        Ok(t) => t,
        Err(e) => return failure(&e),
    };
    let samples: Vec<Value> = t
        .samples
        .iter()
        .map(|s| {
            json!({
                "y": s.y,
                "distance": s.distance,
                "operator": s.operator.as_ref().map_or(Value::Null, complex_matrix_json),
                "flagged": s.flagged,
                "noise_floor": s.noise_floor,
            })
        })
        .collect();
    let label = match t.verdict {
        TraceVerdict::Converges => "converges",
        TraceVerdict::Diverges => "diverges",
        TraceVerdict::Undetermined => "undetermined",
    };
    let mut body = Map::new();
    body.insert("prediction".into(), grading_json(&t.prediction));
    body.insert("samples".into(), Value::Array(samples));
    body.insert("trace".into(), json!(label));
    verdict(t.verdict == TraceVerdict::Converges, body)
}

fn parse_irrep(text: &str) -> Option<IrrepSpec> {
    let parts: Vec<i64> = text.split(':').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    match parts.as_slice() {
        [weight, d] if *d >= 0 => Some(IrrepSpec { weight: *weight, d: *d as usize, offset: 0 }),
        [weight, d, offset] if *d >= 0 => Some(IrrepSpec { weight: *weight, d: *d as usize, offset: *offset }),
        _ => None,
    }
}

fn gen(args: &Args) -> Outcome {
    if let Some(kind) = args.unipotent {
        let want = kind == Unipotent::Admissible;
        return match generate_unipotent_model(args.seed, want, args.scramble) {
            Ok(model) => {
                let name = if want { "unipotent-admissible" } else { "unipotent-nonadmissible" };
                let doc = document(name, args.seed, model);
                let mut out = emit_instance(&doc);
                out["verification"] = json!({"unipotent_admissible": want});
                Outcome { report: out, code: EXIT_OK }
            }
            Err(e) => failure(&e),
        };
    }
    let mut spec = match (&args.weights, &args.irreps) {
        (Some(_), Some(_)) => return input_error("give either --weights or --irreps"),
        (Some(ws), None) => OrbitSpec::from_weights(ws),
        (None, Some(irs)) => {
            let mut irreps = Vec::new();
            for t in irs {
                match parse_irrep(t) {
                    Some(ir) => irreps.push(ir),
                    None => return input_error(format!("bad irreducible spec {t:?}; expected weight:d[:offset]")),
                }
            }
            let mut spec = OrbitSpec::from_weights(&irreps.iter().map(|i| i.weight).collect::<Vec<_>>());
            spec.irreps = irreps;
            spec
        }
        (None, None) => OrbitSpec::random(args.seed, 8),
    };
    if let Some(ext) = &args.extensions {
        spec.extensions = ext.clone();
        spec.optional_extensions = false;
    }
    spec.scramble |= args.scramble;
    match generate_split_orbit(&spec, args.seed) {
        Ok(g) => {
            let model = PeriodMapModel { orbit: g.orbit, gamma: BTreeMap::new() };
            let doc = document("generated-split", args.seed, model);
            let mut out = emit_instance(&doc);
            out["verification"] = json!({
                "split_admissible": true,
                "y_infty": grading_json(&g.yinf),
                "extensions": g.extensions,
            });
            Outcome { report: out, code: EXIT_OK }
        }
        Err(e) => failure(&e),
    }
}

fn document(name: &str, seed: u64, model: PeriodMapModel<GaussRat>) -> InstanceDocument {
    InstanceDocument { meta: Meta { name: name.into(), coordinate: "s".into(), seed: Some(seed) }, model, alpha: None }
}

fn run_on(doc: &InstanceDocument, args: &Args) -> Outcome {
    match args.command {
        Command::Bigrading => bigrading(doc),
        Command::Wfilt => wfilt(doc),
        Command::Relwfilt => relwfilt(doc),
        Command::GradingY => grading_y(doc),
        Command::Factorize => factorize(doc),
        Command::OrbitCheck => orbit_check(doc, args),
        Command::Admissible => admissible(doc),
        Command::Theorem4 => theorem4(doc),
        Command::Trace => trace(doc, args),
        Command::Gen => unreachable!("gen takes no instance"),
    }
}

fn command_name(c: Command) -> String {
    c.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn echo(args: &Args, file: Option<&str>) -> Value {
    let mut flags = Map::new();
    if let Some(ys) = &args.ys {
        flags.insert("ys".into(), json!(ys));
    }
    if args.command == Command::Trace {
        flags.insert("mode".into(), json!(if args.mode == Mode::Exact { "exact" } else { "float" }));
        if args.mode == Mode::Exact {
            flags.insert("s".into(), json!(args.s));
        }
    }
    if args.command == Command::Gen {
        flags.insert("seed".into(), json!(args.seed));
    }
    json!({"command": command_name(args.command), "file": file, "flags": flags})
}

fn single(args: &Args, file: &str) -> Outcome {
    let start = Instant::now();
    let mut out = match load_instance(file) {
        Ok(doc) => run_on(&doc, args),
        Err(o) => o,
    };
    if let Value::Object(m) = &mut out.report {
        m.insert("command".into(), echo(args, Some(file)));
        if args.timings {
            m.insert("elapsed_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
        }
    }
    out
}

/// Runs the command on every file, spreading files over `jobs` threads.
pub fn run(args: &Args) -> Outcome {
    if args.command == Command::Gen {
        let start = Instant::now();
        let mut out = gen(args);
        if args.timings {
            out.report["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
        }
        if out.code != EXIT_OK {
            out.report["command"] = echo(args, None);
        }
        return out;
    }
    match args.files.as_slice() {
        [] => input_error("no instance file given"),
        [one] => single(args, one),
        files => {
            let jobs = args.jobs.max(1).min(files.len());
            let mut results: Vec<Option<Outcome>> = vec![None; files.len()];
            std::thread::scope(|scope| {
                let chunks: Vec<_> = results.chunks_mut(files.len().div_ceil(jobs)).zip(files.chunks(files.len().div_ceil(jobs))).collect();
                for (slots, names) in chunks {
                    scope.spawn(move || {
                        for (slot, name) in slots.iter_mut().zip(names) {
                            *slot = Some(single(args, name));
                        }
                    });
                }
            });
            let results: Vec<Outcome> = results.into_iter().map(|r| r.expect("every file processed")).collect();
            let code = results.iter().map(|r| r.code).max().unwrap_or(EXIT_OK);
            Outcome { report: Value::Array(results.into_iter().map(|r| r.report).collect()), code }
        }
    }
}
