//! JSON instance and realization files.

use rds_core::instance::validate_instance;
use rds_core::{Instance, Kind, RawInstance, Realization};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::KitError;

/// The on-disk instance layout. Which degree fields are read depends on
/// `kind`; the others must be absent or empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub u_degrees: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub w_degrees: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub out_degrees: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub in_degrees: Vec<usize>,
    #[serde(default)]
    pub star_center: Option<usize>,
    #[serde(default)]
    pub star_leaves: Vec<usize>,
    #[serde(default)]
    pub matching: Vec<(usize, usize)>,
}

fn default_kind() -> String {
    "bipartite".into()
}

fn malformed(e: serde_json::Error) -> KitError {
    KitError::Malformed { line: e.line(), column: e.column(), message: e.to_string() }
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile, KitError> {
    serde_json::from_str(text).map_err(malformed)
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance, KitError> {
        let kind = match self.kind.as_str() {
            "bipartite" => Kind::Bipartite,
            "general" => Kind::General,
            "directed" => Kind::Directed,
            other => return Err(KitError::Usage(format!("unknown kind {other:?}"))),
        };
        let raw = RawInstance {
            kind,
            u_degrees: self.u_degrees.clone(),
            w_degrees: self.w_degrees.clone(),
            degrees: self.degrees.clone(),
            out_degrees: self.out_degrees.clone(),
            in_degrees: self.in_degrees.clone(),
            star_center: self.star_center,
            star_leaves: self.star_leaves.clone(),
            matching: self.matching.clone(),
        };
        Ok(validate_instance(&raw)?)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let mut f = InstanceFile {
            kind: inst.kind().as_str().into(),
            star_center: inst.star_center(),
            star_leaves: inst.star_leaves().iter().map(|&l| inst.local(l)).collect(),
            ..Default::default()
        };
        match inst.kind() {
            Kind::Bipartite => {
                f.u_degrees = inst.u_vertices().map(|v| inst.degree(v)).collect();
                f.w_degrees = inst.w_vertices().map(|v| inst.degree(v)).collect();
            }
            Kind::Directed => {
                f.out_degrees = inst.u_vertices().map(|v| inst.degree(v)).collect();
                f.in_degrees = inst.w_vertices().map(|v| inst.degree(v)).collect();
            }
            Kind::General => f.degrees = inst.degrees().to_vec(),
        }
        if inst.kind() != Kind::Directed {
            f.matching = inst.matching().iter().map(|&(a, b)| inst.local_pair(a, b)).collect();
        }
        f
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, KitError> {
    parse_instance_file(text)?.to_instance()
}

/// Reads `{"edges": [[a, b], ...]}` or a bare `[[a, b], ...]` in local
/// coordinates.
pub fn parse_realization(inst: &Instance, text: &str) -> Result<Realization, KitError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Edges {
        Wrapped { edges: Vec<(usize, usize)> },
        Bare(Vec<(usize, usize)>),
    }
    let edges = match serde_json::from_str::<Edges>(text).map_err(malformed)? {
        Edges::Wrapped { edges } | Edges::Bare(edges) => edges,
    };
    Ok(Realization::from_local_edges(inst, &edges)?)
}

/// Sorted local edge list as JSON.
pub fn realization_json(inst: &Instance, real: &Realization) -> Value {
    json!({ "edges": real.local_edges(inst) })
}
