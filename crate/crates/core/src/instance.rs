//! JSON instance documents.
//!
//! ```json
//! {
//!   "meta": {"name": "tate", "coordinate": "s", "seed": 7},
//!   "dimension": 2,
//!   "weight_filtration": {"0": [["1", "0"]], "2": [["1", "0"], ["0", "1"]]},
//!   "hodge_filtration": {"0": [["1", "0"], ["0", "1"]], "1": [["0", "1"]]},
//!   "N": [["0", "1"], ["0", "0"]],
//!   "gamma": {"1": [["0", "1"], ["0", "0"]]},
//!   "alpha": [["0", "1"], ["0", "0"]]
//! }
//! ```
//!
//! `W_k` is the entry at the greatest listed index `<= k`; the top entry must be
//! the whole space. `F^p` is the entry at the smallest listed index `>= p`; the
//! lowest entry must be the whole space. `gamma` and `alpha` are optional.
//! `coordinate` records the local coordinate `s` the model is written in.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::filtered::{DecreasingFiltration, IncreasingFiltration};
use crate::linalg::{Matrix, Subspace};
use crate::orbit::{NilpotentOrbit, PeriodMapModel};
use crate::scalar::GaussRat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", if self.path.is_empty() { "$" } else { &self.path }, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(path: &str, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { path: path.to_string(), message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Meta {
    pub name: String,
    pub coordinate: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDocument {
    pub meta: Meta,
    pub model: PeriodMapModel<GaussRat>,
    pub alpha: Option<Matrix<GaussRat>>,
}

impl InstanceDocument {
    pub fn orbit(&self) -> &NilpotentOrbit<GaussRat> {
        &self.model.orbit
    }

    pub fn dimension(&self) -> usize {
        self.model.orbit.dim()
    }
}

fn scalar(v: &Value, path: &str) -> Result<GaussRat, ParseError> {
    match v {
        Value::String(s) => s.parse().or_else(|e: crate::scalar::ScalarParseError| err(path, e.to_string())),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(crate::scalar::q(i, 1)),
            None => err(path, format!("number {n} is not an integer; write fractions as strings")),
        },
        _ => err(path, "expected a scalar string"),
    }
}

fn vector(v: &Value, n: usize, path: &str) -> Result<Vec<GaussRat>, ParseError> {
    let Value::Array(items) = v else { return err(path, "expected a list of scalars") };
    if items.len() != n {
        return err(path, format!("expected {n} entries, found {}", items.len()));
    }
    items.iter().enumerate().map(|(i, x)| scalar(x, &format!("{path}[{i}]"))).collect()
}

fn matrix(v: &Value, n: usize, path: &str) -> Result<Matrix<GaussRat>, ParseError> {
    let Value::Array(rows) = v else { return err(path, "expected a list of rows") };
    if rows.len() != n {
        return err(path, format!("expected {n} rows, found {}", rows.len()));
    }
    let rows = rows.iter().enumerate().map(|(i, r)| vector(r, n, &format!("{path}[{i}]"))).collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::square_from_rows(n, rows).expect("shape checked"))
}

fn indexed<'a>(v: &'a Value, path: &str) -> Result<Vec<(i64, &'a Value)>, ParseError> {
    let Value::Object(map) = v else { return err(path, "expected an object keyed by integer indices") };
    let mut out = Vec::new();
    for (k, x) in map {
        match k.trim().parse::<i64>() {
            Ok(i) => out.push((i, x)),
            Err(_) => return err(&format!("{path}.{k}"), "index is not an integer"),
        }
    }
    out.sort_by_key(|p| p.0);
    Ok(out)
}

fn subspaces(v: &Value, n: usize, path: &str) -> Result<BTreeMap<i64, Subspace<GaussRat>>, ParseError> {
    let mut out = BTreeMap::new();
    for (k, x) in indexed(v, path)? {
        let p = format!("{path}.{k}");
        let Value::Array(vs) = x else { return err(&p, "expected a list of vectors") };
        let vecs = vs.iter().enumerate().map(|(i, y)| vector(y, n, &format!("{p}[{i}]"))).collect::<Result<Vec<_>, _>>()?;
        out.insert(k, Subspace::span_of(n, vecs));
    }
    if out.is_empty() {
        return err(path, "no subspaces listed");
    }
    Ok(out)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, ParseError> {
    obj.get(key).ok_or_else(|| ParseError { path: key.to_string(), message: "missing field".into() })
}

pub fn parse_instance(text: &str) -> Result<InstanceDocument, ParseError> {
    let root: Value = serde_json::from_str(text).or_else(|e| err("", format!("invalid JSON: {e}")))?;
    let Value::Object(obj) = &root else { return err("", "expected a JSON object") };

    let meta = match obj.get("meta") {
        None => Meta::default(),
        Some(Value::Object(m)) => Meta {
            name: m.get("name").and_then(Value::as_str).unwrap_or_default().to_string(),
            coordinate: m.get("coordinate").and_then(Value::as_str).unwrap_or_default().to_string(),
            seed: match m.get("seed") {
                None | Some(Value::Null) => None,
                Some(s) => Some(s.as_u64().ok_or_else(|| ParseError { path: "meta.seed".into(), message: "expected an unsigned integer".into() })?),
            },
        },
        Some(_) => return err("meta", "expected an object"),
    };

    let n = field(obj, "dimension")?
        .as_u64()
        .filter(|&d| d > 0)
        .ok_or_else(|| ParseError { path: "dimension".into(), message: "expected a positive integer".into() })? as usize;

    let w = IncreasingFiltration::new(n, subspaces(field(obj, "weight_filtration")?, n, "weight_filtration")?)
        .or_else(|e| err("weight_filtration", e.to_string()))?;
    let f = DecreasingFiltration::new(n, subspaces(field(obj, "hodge_filtration")?, n, "hodge_filtration")?)
        .or_else(|e| err("hodge_filtration", e.to_string()))?;

    let nm = matrix(field(obj, "N")?, n, "N")?;
    if !nm.is_nilpotent() {
        return err("N", "N is not nilpotent");
    }
    if !nm.is_real() {
        return err("N", "N is not real");
    }

    let mut gamma = BTreeMap::new();
    if let Some(g) = obj.get("gamma") {
        for (j, x) in indexed(g, "gamma")? {
            let p = format!("gamma.{j}");
            if j < 1 {
                return err(&p, "coefficient indices start at 1");
            }
            let m = matrix(x, n, &p)?;
            if !w.lowers_by(&m, 1) {
                return err(&p, "Γ_j does not lie in Lie_-1");
            }
            gamma.insert(j as usize, m);
        }
    }
    let alpha = match obj.get("alpha") {
        None | Some(Value::Null) => None,
        Some(a) => Some(matrix(a, n, "alpha")?),
    };
    let orbit = NilpotentOrbit::new(nm, f, w).expect("dimensions checked");
    Ok(InstanceDocument { meta, model: PeriodMapModel { orbit, gamma }, alpha })
}

pub fn vector_json(v: &[GaussRat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn matrix_json(m: &Matrix<GaussRat>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector_json(r)).collect())
}

pub fn subspaces_json(map: &BTreeMap<i64, Subspace<GaussRat>>) -> Value {
    Value::Object(
        map.iter()
            .map(|(k, s)| (k.to_string(), Value::Array(s.basis().iter().map(|b| vector_json(b)).collect())))
            .collect(),
    )
}

pub fn emit_instance(doc: &InstanceDocument) -> Value {
    let o = &doc.model.orbit;
    let mut meta = json!({"name": doc.meta.name, "coordinate": doc.meta.coordinate});
    if let Some(s) = doc.meta.seed {
        meta["seed"] = json!(s);
    }
    let mut out = json!({
        "meta": meta,
        "dimension": o.dim(),
        "weight_filtration": subspaces_json(&o.w.listed()),
        "hodge_filtration": subspaces_json(&o.f.listed()),
        "N": matrix_json(&o.n),
    });
    if !doc.model.gamma.is_empty() {
        out["gamma"] = Value::Object(doc.model.gamma.iter().map(|(j, m)| (j.to_string(), matrix_json(m))).collect());
    }
    if let Some(a) = &doc.alpha {
        out["alpha"] = matrix_json(a);
    }
    out
}
