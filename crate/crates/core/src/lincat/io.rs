//! JSON encodings of presentations and modules. Maps are emitted through
//! `serde_json::Map`, which keeps keys sorted, so output is byte-stable.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Tensor3};
use crate::scalar::{Field, Scalar};

use super::{LinCat, Module, Side};

pub const SCHEMA_VERSION: u32 = 1;

fn key2(a: &str, b: &str) -> String {
    format!("{a}|{b}")
}

fn split_key(k: &str, parts: usize) -> Result<Vec<&str>> {
    let v: Vec<&str> = k.split('|').collect();
    if v.len() != parts {
        return Err(Error::Parse(format!("expected {parts} objects in key {k:?}")));
    }
    Ok(v)
}

fn usize_of(v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| Error::Parse(format!("expected a nonnegative integer, got {v}")))
}

pub fn category_to_json(cat: &LinCat) -> Value {
    let n = cat.len();
    let mut hom = Map::new();
    for x in 0..n {
        for y in 0..n {
            if cat.hom_dim(x, y) > 0 {
                hom.insert(key2(cat.object(x), cat.object(y)), json!(cat.hom_dim(x, y)));
            }
        }
    }
    let mut compose = Map::new();
    for (&(x, y, z), t) in cat.compose_tensors() {
        let entries: Vec<Value> = t
            .entries()
            .iter()
            .map(|(i, j, l, s)| json!([i, j, l, s.to_json()]))
            .collect();
        compose.insert(
            format!("{}|{}|{}", cat.object(x), cat.object(y), cat.object(z)),
            Value::Array(entries),
        );
    }
    let mut identity = Map::new();
    for x in 0..n {
        identity.insert(
            cat.object(x).to_string(),
            Value::Array(cat.identity(x).iter().map(Scalar::to_json).collect()),
        );
    }
    json!({
        "field": serde_json::to_value(cat.field()).expect("field encodes"),
        "objects": cat.objects(),
        "hom": hom,
        "compose": compose,
        "identity": identity,
    })
}

pub fn category_from_json(v: &Value) -> Result<LinCat> {
    let field: Field = serde_json::from_value(v.get("field").cloned().unwrap_or(Value::Null))?;
    let objects: Vec<String> = serde_json::from_value(
        v.get("objects")
            .cloned()
            .ok_or_else(|| Error::Parse("missing \"objects\"".into()))?,
    )?;
    if let Some(bad) = objects.iter().find(|o| o.contains('|')) {
        return Err(Error::Parse(format!("object id {bad:?} contains '|'")));
    }
    let n = objects.len();
    let index: BTreeMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    let idx = |o: &str| index.get(o).copied().ok_or_else(|| Error::UnknownObject(o.to_string()));
    let mut hom = vec![0; n * n];
    if let Some(h) = v.get("hom").and_then(Value::as_object) {
        for (k, d) in h {
            let p = split_key(k, 2)?;
            hom[idx(p[0])? * n + idx(p[1])?] = usize_of(d)?;
        }
    }
    let mut compose = BTreeMap::new();
    if let Some(c) = v.get("compose").and_then(Value::as_object) {
        for (k, list) in c {
            let p = split_key(k, 3)?;
            let (x, y, z) = (idx(p[0])?, idx(p[1])?, idx(p[2])?);
            let list = list
                .as_array()
                .ok_or_else(|| Error::Parse(format!("composition {k:?} must be a list")))?;
            let mut entries = Vec::with_capacity(list.len());
            for e in list {
                let e = e
                    .as_array()
                    .filter(|e| e.len() == 4)
                    .ok_or_else(|| Error::Parse(format!("composition entry {e} must be [i, j, l, s]")))?;
                entries.push((usize_of(&e[0])?, usize_of(&e[1])?, usize_of(&e[2])?, field.parse_json(&e[3])?));
            }
            let dims = (hom[y * n + z], hom[x * n + y], hom[x * n + z]);
            compose.insert((x, y, z), Tensor3::new(dims, entries)?);
        }
    }
    let mut identity = vec![Vec::new(); n];
    if let Some(ids) = v.get("identity").and_then(Value::as_object) {
        for (k, coords) in ids {
            let coords = coords
                .as_array()
                .ok_or_else(|| Error::Parse(format!("identity of {k:?} must be a list")))?;
            identity[idx(k)?] = coords.iter().map(|s| field.parse_json(s)).collect::<Result<_>>()?;
        }
    }
    LinCat::from_parts(field, objects, hom, compose, identity)
}

/// Module body: side, dimensions and action matrices keyed by `"x|y"`.
pub fn module_to_json(cat: &LinCat, m: &Module) -> Value {
    let n = cat.len();
    let mut dims = Map::new();
    for x in 0..n {
        dims.insert(cat.object(x).to_string(), json!(m.dim(x)));
    }
    let mut action = Map::new();
    for x in 0..n {
        for y in 0..n {
            if cat.hom_dim(x, y) > 0 {
                action.insert(
                    key2(cat.object(x), cat.object(y)),
                    Value::Array(m.action(x, y).iter().map(Matrix::to_json).collect()),
                );
            }
        }
    }
    json!({
        "side": m.side(),
        "dims": dims,
        "action": action,
    })
}

pub fn module_from_json(cat: &LinCat, v: &Value) -> Result<Module> {
    let side: Side = serde_json::from_value(v.get("side").cloned().unwrap_or(json!("left")))?;
    let n = cat.len();
    let mut dims = vec![0; n];
    if let Some(d) = v.get("dims").and_then(Value::as_object) {
        for (k, d) in d {
            dims[cat.index_of(k)?] = usize_of(d)?;
        }
    }
    let mut action = BTreeMap::new();
    if let Some(a) = v.get("action").and_then(Value::as_object) {
        for (k, mats) in a {
            let p = split_key(k, 2)?;
            let (x, y) = (cat.index_of(p[0])?, cat.index_of(p[1])?);
            let shape = match side {
                Side::Left => (dims[y], dims[x]),
                Side::Right => (dims[x], dims[y]),
            };
            let mats = mats
                .as_array()
                .ok_or_else(|| Error::Parse(format!("action {k:?} must be a list of matrices")))?;
            action.insert(
                (x, y),
                mats.iter()
                    .map(|m| Matrix::from_json(cat.field(), shape, m))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
    }
    // Unlisted endomorphism actions default to the identity matrices when
    // the endomorphism space is spanned by the identity.
    for x in 0..n {
        if !action.contains_key(&(x, x)) && cat.hom_dim(x, x) == 1 && cat.identity(x)[0].is_one() {
            action.insert((x, x), vec![Matrix::identity(cat.field(), dims[x])]);
        }
    }
    Module::new(cat, side, dims, action)
}

/// Header of a module file: which category it lives over.
#[derive(Clone, Debug)]
pub struct ModuleFile {
    pub category: String,
    pub field: Option<Field>,
    pub body: Value,
}

impl ModuleFile {
    pub fn parse(text: &str) -> Result<ModuleFile> {
        let body: Value = serde_json::from_str(text)?;
        let category = body
            .get("category")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("module file needs a \"category\" reference".into()))?
            .to_string();
        let field = match body.get("field") {
            Some(f) => Some(serde_json::from_value(f.clone())?),
            None => None,
        };
        Ok(ModuleFile { category, field, body })
    }
}

pub fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::lincat::representable;

    #[test]
    fn category_round_trip_is_byte_stable() {
        for cat in [gallery::chain(Field::Rationals, 3), gallery::zneg_window(Field::Prime(3), 4)] {
            let v = category_to_json(&cat);
            let back = category_from_json(&v).unwrap();
            assert_eq!(back, cat);
            assert_eq!(
                serde_json::to_string(&category_to_json(&back)).unwrap(),
                serde_json::to_string(&v).unwrap()
            );
        }
    }

    #[test]
    fn omitted_hom_entries_are_zero() {
        let v = json!({"field": {"Fp": 2}, "objects": ["a", "b"], "hom": {"a|a": 1, "b|b": 1},
                       "compose": {"a|a|a": [[0, 0, 0, 1]], "b|b|b": [[0, 0, 0, 1]]},
                       "identity": {"a": [1], "b": [1]}});
        let c = category_from_json(&v).unwrap();
        assert_eq!(c.hom_dim(0, 1), 0);
    }

    #[test]
    fn module_round_trip() {
        let cat = gallery::chain(Field::Rationals, 3);
        for side in [Side::Left, Side::Right] {
            let m = representable(&cat, side, 1);
            let back = module_from_json(&cat, &module_to_json(&cat, &m)).unwrap();
            assert_eq!(back, m);
        }
    }
}
