use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_file, write_file, IoError};
use crate::model::{Automaton, Channel, Edge, Location, ModelError, Network, SyncAction, VariableDecl};
use crate::query::{parse_guard, parse_select, parse_sync, parse_update};

pub const MODEL_FORMAT: &str = "privcheck-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    format: String,
    version: u32,
    channels: Vec<Channel>,
    #[serde(default)]
    variables: Vec<VariableDoc>,
    processes: Vec<ProcessDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableDoc {
    name: String,
    min: i64,
    max: i64,
    init: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProcessDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    aliases: Vec<String>,
    locations: Vec<LocationDoc>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

fn is_false(b: &bool) -> bool {
    !b
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LocationDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    aliases: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    initial: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    committed: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    urgent: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    source: String,
    target: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    select: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    guard: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    sync: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    update: String,
}

/// Pretty JSON with a trailing newline.
pub fn model_to_string(network: &Network) -> String {
    let doc = ModelDoc {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        channels: network.channels().to_vec(),
        variables: network
            .variables()
            .iter()
            .map(|v| VariableDoc { name: v.name.clone(), min: v.min, max: v.max, init: v.init })
            .collect(),
        processes: network.processes().iter().map(process_doc).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("model documents always serialize");
    s.push('\n');
    s
}

fn process_doc(p: &Automaton) -> ProcessDoc {
    let name = |id: usize| p.location(id).name.clone();
    ProcessDoc {
        name: p.name().into(),
        aliases: p.aliases().to_vec(),
        locations: p
            .locations()
            .iter()
            .map(|l| LocationDoc {
                name: l.name.clone(),
                aliases: l.aliases.clone(),
                initial: l.initial,
                committed: l.committed,
                urgent: l.urgent,
            })
            .collect(),
        edges: p
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                source: name(e.source),
                target: name(e.target),
                select: e.select.as_ref().map(ToString::to_string).unwrap_or_default(),
                guard: if e.guard.is_true() { String::new() } else { e.guard.to_string() },
                sync: e.sync.to_string(),
                update: e.update.to_string(),
            })
            .collect(),
    }
}

pub fn model_from_str(text: &str) -> Result<Network, IoError> {
    let probe: serde_json::Value = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
    let format = probe.get("format").and_then(|v| v.as_str()).unwrap_or_default();
    if format != MODEL_FORMAT {
        return Err(IoError::Format { expected: MODEL_FORMAT, found: format.into() });
    }
    let version = probe.get("version").and_then(|v| v.as_u64()).unwrap_or(0);
    if version != u64::from(MODEL_VERSION) {
        return Err(IoError::Version {
            what: "model",
            found: u32::try_from(version).unwrap_or(u32::MAX),
            expected: MODEL_VERSION,
        });
    }
    let doc: ModelDoc = serde_json::from_value(probe).map_err(|e| IoError::Json(e.to_string()))?;
    let variables = doc
        .variables
        .into_iter()
        .map(|v| VariableDecl::new(v.name, v.min, v.max, v.init))
        .collect::<Result<Vec<_>, _>>()?;
    let processes = doc.processes.into_iter().map(process_from_doc).collect::<Result<Vec<_>, _>>()?;
    Ok(Network::new(processes, doc.channels, variables)?)
}

fn process_from_doc(doc: ProcessDoc) -> Result<Automaton, IoError> {
    let locations: Vec<Location> = doc
        .locations
        .into_iter()
        .map(|l| Location {
            name: l.name,
            aliases: l.aliases,
            committed: l.committed,
            urgent: l.urgent,
            initial: l.initial,
        })
        .collect();
    let find = |name: &str| {
        locations.iter().position(|l| l.name == name).ok_or_else(|| {
            IoError::Model(ModelError::UnknownLocation { automaton: doc.name.clone(), location: name.into() })
        })
    };
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (i, e) in doc.edges.iter().enumerate() {
        let ctx = |field: &str, error| IoError::Expression {
            process: doc.name.clone(),
            context: format!("edge {i} ({} -> {}) {field}", e.source, e.target),
            error,
        };
        let sync: SyncAction = parse_sync(&e.sync).map_err(|x| ctx("sync", x))?;
        edges.push(
            Edge::new(find(&e.source)?, find(&e.target)?)
                .with_guard(parse_guard(&e.guard).map_err(|x| ctx("guard", x))?)
                .with_sync(sync)
                .with_update(parse_update(&e.update).map_err(|x| ctx("update", x))?)
                .with_select(parse_select(&e.select).map_err(|x| ctx("select", x))?),
        );
    }
    Ok(Automaton::new(doc.name.clone(), locations, edges)?.with_aliases(doc.aliases))
}

pub fn save_model(network: &Network, path: &Path) -> Result<(), IoError> {
    write_file(path, &model_to_string(network))
}

pub fn load_model(path: &Path) -> Result<Network, IoError> {
    model_from_str(&read_file(path)?)
}
