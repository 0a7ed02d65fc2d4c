//! Textual file formats: structure documents, data model documents,
//! unravelling documents and strategy records, all JSON with sorted keys so
//! output is byte-stable.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use ppml_core::comonad::Unravelling;
use ppml_core::games::Strategy;
use ppml_core::semantics::{DataKripkeModel, ModelError};
use ppml_core::signature::{Signature, SignatureError};
use ppml_core::structure::{PointedStructure, StructureError};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("field `{field}`: {problem}")]
    BadField { field: &'static str, problem: String },
    #[error("unknown element name `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn bad(field: &'static str, problem: impl Into<String>) -> IoError {
    IoError::BadField {
        field,
        problem: problem.into(),
    }
}

/// Element count plus an optional name-to-index map.
fn parse_universe(value: &Value, field: &'static str) -> Result<(usize, Option<BTreeMap<String, usize>>), IoError> {
    match value {
        Value::Number(n) => {
            let size = n
                .as_u64()
                .ok_or_else(|| bad(field, "expected a non-negative count"))?;
            Ok((size as usize, None))
        }
        Value::Array(names) => {
            let mut map = BTreeMap::new();
            for (i, name) in names.iter().enumerate() {
                let name = name
                    .as_str()
                    .ok_or_else(|| bad(field, "element names must be strings"))?;
                if map.insert(name.to_string(), i).is_some() {
                    return Err(bad(field, format!("duplicate element name `{name}`")));
                }
            }
            Ok((names.len(), Some(map)))
        }
        _ => Err(bad(field, "expected a count or a list of names")),
    }
}

fn parse_element(
    value: &Value,
    names: Option<&BTreeMap<String, usize>>,
    field: &'static str,
) -> Result<usize, IoError> {
    match value {
        Value::Number(n) => n
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| bad(field, "expected a non-negative index")),
        Value::String(name) => names
            .and_then(|m| m.get(name))
            .copied()
            .ok_or_else(|| IoError::UnknownName(name.clone())),
        _ => Err(bad(field, "expected an index or an element name")),
    }
}

/// Parses a structure document:
/// `{ "signature": {"E": 2, ...}, "universe": n | [names], "basepoint": i | name,
///    "relations": {"S": [[0,3], ...], ...} }`.
/// Missing relation keys mean empty interpretations; named universes map
/// names to indices in listing order.
pub fn load_structure(text: &str) -> Result<PointedStructure, IoError> {
    let doc: Value = serde_json::from_str(text)?;
    let sig_value = doc
        .get("signature")
        .ok_or(IoError::MissingField("signature"))?;
    let sig_map = sig_value
        .as_object()
        .ok_or_else(|| bad("signature", "expected a name-to-arity object"))?;
    let mut symbols = BTreeMap::new();
    for (name, arity) in sig_map {
        let arity = arity
            .as_u64()
            .ok_or_else(|| bad("signature", format!("arity of `{name}` must be a number")))?;
        symbols.insert(name.clone(), arity as usize);
    }
    let signature = Signature::new(symbols)?;

    let universe = doc.get("universe").ok_or(IoError::MissingField("universe"))?;
    let (size, names) = parse_universe(universe, "universe")?;
    let basepoint = parse_element(
        doc.get("basepoint").ok_or(IoError::MissingField("basepoint"))?,
        names.as_ref(),
        "basepoint",
    )?;

    let mut interpretations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    if let Some(relations) = doc.get("relations") {
        let relations = relations
            .as_object()
            .ok_or_else(|| bad("relations", "expected a symbol-to-tuples object"))?;
        for (symbol, tuples) in relations {
            let tuples = tuples
                .as_array()
                .ok_or_else(|| bad("relations", format!("`{symbol}` must list tuples")))?;
            let mut set = BTreeSet::new();
            for tuple in tuples {
                let entries = tuple
                    .as_array()
                    .ok_or_else(|| bad("relations", "each tuple must be a list"))?;
                let mut parsed = Vec::with_capacity(entries.len());
                for e in entries {
                    parsed.push(parse_element(e, names.as_ref(), "relations")?);
                }
                set.insert(parsed);
            }
            interpretations.insert(symbol.clone(), set);
        }
    }
    Ok(PointedStructure::new(signature, size, basepoint, interpretations)?)
}

fn structure_value(s: &PointedStructure) -> Value {
    let mut signature = Map::new();
    for (name, arity) in s.signature().symbols() {
        signature.insert(name.to_string(), json!(arity));
    }
    let mut relations = Map::new();
    for (name, _) in s.signature().symbols() {
        let tuples = s.interpretation(name).expect("all symbols interpreted");
        if !tuples.is_empty() {
            relations.insert(name.to_string(), json!(tuples.iter().collect::<Vec<_>>()));
        }
    }
    json!({
        "signature": signature,
        "universe": s.universe_size(),
        "basepoint": s.basepoint(),
        "relations": relations,
    })
}

pub fn save_structure(s: &PointedStructure) -> String {
    let mut out = serde_json::to_string_pretty(&structure_value(s)).expect("valid json");
    out.push('\n');
    out
}

/// Parses a data model document:
/// `{ "worlds": n | [names], "edges": [[0,1], ...], "data": [d0, ...],
///    "props": {"p": [worlds...], ...} }`.
pub fn load_model(text: &str) -> Result<DataKripkeModel, IoError> {
    let doc: Value = serde_json::from_str(text)?;
    let worlds = doc.get("worlds").ok_or(IoError::MissingField("worlds"))?;
    let (count, names) = parse_universe(worlds, "worlds")?;

    let mut edges = BTreeSet::new();
    if let Some(list) = doc.get("edges") {
        let list = list
            .as_array()
            .ok_or_else(|| bad("edges", "expected a list of pairs"))?;
        for pair in list {
            let pair = pair
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| bad("edges", "each edge must be a pair"))?;
            edges.insert((
                parse_element(&pair[0], names.as_ref(), "edges")?,
                parse_element(&pair[1], names.as_ref(), "edges")?,
            ));
        }
    }

    let data_value = doc.get("data").ok_or(IoError::MissingField("data"))?;
    let data_list = data_value
        .as_array()
        .ok_or_else(|| bad("data", "expected a list of data values"))?;
    let mut data = Vec::with_capacity(data_list.len());
    for d in data_list {
        data.push(
            d.as_u64()
                .ok_or_else(|| bad("data", "data values are naturals"))?,
        );
    }

    let mut props = BTreeSet::new();
    let mut props_of = vec![BTreeSet::new(); count];
    if let Some(map) = doc.get("props") {
        let map = map
            .as_object()
            .ok_or_else(|| bad("props", "expected a proposition-to-worlds object"))?;
        for (prop, worlds) in map {
            props.insert(prop.clone());
            let worlds = worlds
                .as_array()
                .ok_or_else(|| bad("props", format!("`{prop}` must list worlds")))?;
            for w in worlds {
                let w = parse_element(w, names.as_ref(), "props")?;
                if w >= count {
                    return Err(IoError::Model(ModelError::WorldOutOfRange(w)));
                }
                props_of[w].insert(prop.clone());
            }
        }
    }
    Ok(DataKripkeModel::new(count, edges, data, props, props_of)?)
}

pub fn save_model(m: &DataKripkeModel) -> String {
    let mut props = Map::new();
    for p in m.props() {
        let worlds: Vec<usize> = (0..m.world_count())
            .filter(|&w| m.props_at(w).contains(p))
            .collect();
        props.insert(p.clone(), json!(worlds));
    }
    let doc = json!({
        "worlds": m.world_count(),
        "edges": m.edges().iter().collect::<Vec<_>>(),
        "data": m.data_of(),
        "props": props,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("valid json");
    out.push('\n');
    out
}

/// Structure document of the unravelled tree plus a `chains` key mapping
/// each node index to the source chain it denotes.
pub fn save_unravelling(u: &Unravelling) -> String {
    let mut doc = structure_value(u.structure());
    let mut chains = Map::new();
    for v in 0..u.node_count() {
        chains.insert(v.to_string(), json!(u.chain_of(v)));
    }
    doc.as_object_mut()
        .expect("structure documents are objects")
        .insert("chains".into(), Value::Object(chains));
    let mut out = serde_json::to_string_pretty(&doc).expect("valid json");
    out.push('\n');
    out
}

/// Strategy records: a list of `(position, side, spoiler, response)` entries,
/// the position given by its chain pair.
pub fn save_strategy(s: &Strategy) -> String {
    let records: Vec<Value> = s
        .records()
        .map(|(left, right, side, spoiler, answer)| {
            json!({
                "position": [left, right],
                "side": match side {
                    ppml_core::games::Side::Left => "left",
                    ppml_core::games::Side::Right => "right",
                },
                "spoiler": spoiler,
                "response": answer,
            })
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&json!(records)).expect("valid json");
    out.push('\n');
    out
}
