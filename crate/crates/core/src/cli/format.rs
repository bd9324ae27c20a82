use std::collections::HashMap;

use serde_json::{json, Map, Value};

use crate::exactlin::{ExactMatrix, RingSpec};
use crate::functorcalc::{constant_functor, ind, ind_constant, FunctorData, SurjFunctorData};
use crate::pointedsets::{pointed_generators, PointedMap, Surjection};
use crate::polyfunctors::{build_p, build_p_le};

use super::SpecError;

/// What a spec file describes, with its kind-specific payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorKind {
    Constant {
        rank: usize,
    },
    IndConstant,
    P {
        n: usize,
        d: usize,
    },
    PLe {
        n: usize,
        d: usize,
    },
    /// `Ind(F)` for `F` given on (at least) the surjection generators.
    Ind {
        ranks: Vec<usize>,
        actions: Vec<(Surjection, ExactMatrix)>,
    },
    /// A pointed-set functor given on (at least) the pointed generators.
    Explicit {
        ranks: Vec<usize>,
        actions: Vec<(PointedMap, ExactMatrix)>,
    },
}

/// A parsed functor spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorSpecFile {
    pub ring: RingSpec,
    pub max_size: usize,
    pub kind: FunctorKind,
}

fn field(path: &str, msg: impl Into<String>) -> SpecError {
    SpecError::Field { path: path.to_string(), message: msg.into() }
}

fn get<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, SpecError> {
    obj.get(key).ok_or_else(|| field(&join(path, key), "missing"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_usize(v: &Value, path: &str) -> Result<usize, SpecError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| field(path, "expected a nonnegative integer"))
}

fn as_usize_list(v: &Value, path: &str) -> Result<Vec<usize>, SpecError> {
    let arr = v.as_array().ok_or_else(|| field(path, "expected an array"))?;
    arr.iter().enumerate().map(|(k, x)| as_usize(x, &format!("{path}[{k}]"))).collect()
}

fn parse_matrix(ring: RingSpec, v: &Value, rows: usize, cols: usize, path: &str) -> Result<ExactMatrix, SpecError> {
    let arr = v.as_array().ok_or_else(|| field(path, "expected an array of rows"))?;
    if arr.len() != rows {
        return Err(field(path, format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut values = Vec::with_capacity(rows * cols);
    for (i, row) in arr.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| field(&rpath, "expected an array of entries"))?;
        if row.len() != cols {
            return Err(field(&rpath, format!("expected {cols} entries, found {}", row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            let epath = format!("{rpath}[{j}]");
            let text = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                _ => return Err(field(&epath, "expected an exact scalar string")),
            };
            let q = ring.parse_scalar(&text).map_err(|e| field(&epath, e.to_string()))?;
            if ring == RingSpec::Integers && !q.is_integer() {
                return Err(field(&epath, "Z entries must be integers"));
            }
            values.push(q);
        }
    }
    ExactMatrix::from_rationals(ring, rows, cols, &values).map_err(|e| field(path, e.to_string()))
}

pub(crate) fn matrix_json(m: &ExactMatrix) -> Value {
    let ring = m.ring();
    let v = m.to_rationals();
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| Value::String(ring.format_scalar(&v[i * m.cols() + j]))).collect()))
        .collect();
    Value::Array(rows)
}

impl FunctorSpecFile {
    /// Parses a JSON document; syntax errors carry line and column, shape
    /// and value errors carry the path of the offending field.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let value: Value = serde_json::from_str(text).map_err(|e| SpecError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self, SpecError> {
        let obj = value.as_object().ok_or_else(|| field("", "top level must be an object"))?;
        let ring_text = get(obj, "", "ring")?.as_str().ok_or_else(|| field("ring", "expected a string"))?;
        let ring: RingSpec =
            ring_text.parse().map_err(|e: crate::exactlin::LinAlgError| field("ring", e.to_string()))?;
        let max_size = as_usize(get(obj, "", "N")?, "N")?;
        let kind_text = get(obj, "", "kind")?.as_str().ok_or_else(|| field("kind", "expected a string"))?;
        let kind = match kind_text {
            "constant" => FunctorKind::Constant { rank: as_usize(get(obj, "", "rank")?, "rank")? },
            "ind_constant" => FunctorKind::IndConstant,
            "P" | "P_le" => {
                let n = as_usize(get(obj, "", "n")?, "n")?;
                let d = as_usize(get(obj, "", "d")?, "d")?;
                if n == 0 {
                    return Err(field("n", "needs at least one colour"));
                }
                if kind_text == "P" {
                    FunctorKind::P { n, d }
                } else {
                    FunctorKind::PLe { n, d }
                }
            }
            "ind" | "explicit" => {
                let ranks = as_usize_list(get(obj, "", "ranks")?, "ranks")?;
                if ranks.len() != max_size + 1 {
                    return Err(field("ranks", format!("expected {} ranks (sizes 0..=N)", max_size + 1)));
                }
                let list = get(obj, "", "actions")?.as_array().ok_or_else(|| field("actions", "expected an array"))?;
                let mut pointed = Vec::new();
                let mut surj = Vec::new();
                for (k, entry) in list.iter().enumerate() {
                    let path = format!("actions[{k}]");
                    let e = entry.as_object().ok_or_else(|| field(&path, "expected an object"))?;
                    let images = as_usize_list(get(e, &path, "images")?, &join(&path, "images"))?;
                    let target = as_usize(get(e, &path, "target")?, &join(&path, "target"))?;
                    if images.len() > max_size || target > max_size {
                        return Err(field(&path, format!("map leaves the size bound {max_size}")));
                    }
                    let cols = ranks[images.len()];
                    let m = parse_matrix(ring, get(e, &path, "matrix")?, ranks[target], cols, &join(&path, "matrix"))?;
                    if kind_text == "ind" {
                        let s = Surjection::new(target, images)
                            .map_err(|e| field(&join(&path, "images"), e.to_string()))?;
                        surj.push((s, m));
                    } else {
                        let p = PointedMap::new(target, images)
                            .map_err(|e| field(&join(&path, "images"), e.to_string()))?;
                        pointed.push((p, m));
                    }
                }
                if kind_text == "ind" {
                    FunctorKind::Ind { ranks, actions: surj }
                } else {
                    FunctorKind::Explicit { ranks, actions: pointed }
                }
            }
            other => return Err(field("kind", format!("unknown kind {other:?}"))),
        };
        Ok(FunctorSpecFile { ring, max_size, kind })
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "ring": self.ring.to_string(), "N": self.max_size });
        let obj = v.as_object_mut().expect("object");
        let action = |images: &[usize], target: usize, m: &ExactMatrix| json!({ "images": images, "target": target, "matrix": matrix_json(m) });
        match &self.kind {
            FunctorKind::Constant { rank } => {
                obj.insert("kind".into(), "constant".into());
                obj.insert("rank".into(), (*rank).into());
            }
            FunctorKind::IndConstant => {
                obj.insert("kind".into(), "ind_constant".into());
            }
            FunctorKind::P { n, d } | FunctorKind::PLe { n, d } => {
                let k = if matches!(self.kind, FunctorKind::P { .. }) { "P" } else { "P_le" };
                obj.insert("kind".into(), k.into());
                obj.insert("n".into(), (*n).into());
                obj.insert("d".into(), (*d).into());
            }
            FunctorKind::Ind { ranks, actions } => {
                let mut sorted: Vec<&(Surjection, ExactMatrix)> = actions.iter().collect();
                sorted.sort_by(|a, b| {
                    (a.0.source(), a.0.target(), a.0.images()).cmp(&(b.0.source(), b.0.target(), b.0.images()))
                });
                obj.insert("kind".into(), "ind".into());
                obj.insert("ranks".into(), json!(ranks));
                obj.insert(
                    "actions".into(),
                    Value::Array(sorted.iter().map(|(s, m)| action(s.images(), s.target(), m)).collect()),
                );
            }
            FunctorKind::Explicit { ranks, actions } => {
                let mut sorted: Vec<&(PointedMap, ExactMatrix)> = actions.iter().collect();
                sorted.sort_by(|a, b| {
                    (a.0.source(), a.0.target(), a.0.images()).cmp(&(b.0.source(), b.0.target(), b.0.images()))
                });
                obj.insert("kind".into(), "explicit".into());
                obj.insert("ranks".into(), json!(ranks));
                obj.insert(
                    "actions".into(),
                    Value::Array(sorted.iter().map(|(p, m)| action(p.images(), p.target(), m)).collect()),
                );
            }
        }
        v
    }

    /// Pretty JSON with sorted keys, exact scalar strings and sorted actions,
    /// ending in a newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    /// The functor itself. Tables must contain the generators; the laws
    /// are not checked here.
    pub fn build(&self) -> Result<FunctorData, SpecError> {
        let (ring, n) = (self.ring, self.max_size);
        Ok(match &self.kind {
            FunctorKind::Constant { rank } => constant_functor(ring, n, *rank),
            FunctorKind::IndConstant => ind_constant(ring, n),
            FunctorKind::P { n: c, d } => build_p(ring, *c, *d, n),
            FunctorKind::PLe { n: c, d } => build_p_le(ring, *c, *d, n),
            FunctorKind::Ind { ranks, actions } => {
                let table: HashMap<Surjection, ExactMatrix> = actions.iter().cloned().collect();
                ind(&SurjFunctorData::from_table(ring, n, ranks.clone(), table)?)
            }
            FunctorKind::Explicit { ranks, actions } => {
                let table: HashMap<PointedMap, ExactMatrix> = actions.iter().cloned().collect();
                FunctorData::from_table(ring, n, ranks.clone(), table)?
            }
        })
    }

    /// An `explicit` spec holding `g` on the pointed generators.
    pub fn from_functor(g: &FunctorData) -> Self {
        let actions = pointed_generators(g.max_size()).into_iter().map(|p| {
            let m = (*g.action(&p)).clone();
            (p, m)
        });
        FunctorSpecFile {
            ring: g.ring(),
            max_size: g.max_size(),
            kind: FunctorKind::Explicit { ranks: g.ranks().to_vec(), actions: actions.collect() },
        }
    }

    /// An `ind` spec listing every surjection of `f`.
    pub fn from_surj(f: &SurjFunctorData) -> Self {
        let actions = f.entries().into_iter().filter(|(s, _)| s.source() >= 1).map(|(s, m)| (s, m.clone())).collect();
        FunctorSpecFile {
            ring: f.ring(),
            max_size: f.max_size(),
            kind: FunctorKind::Ind { ranks: f.ranks().to_vec(), actions },
        }
    }
}
