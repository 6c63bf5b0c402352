//! JSON game documents:
//! `{"vertices":[{"name":"v0","hatness":2},...],"edges":[["v0","v1"],...],"rotation":{...}}`.
//!
//! Vertex order in the array is the enumeration order. `rotation` is
//! optional and maps each vertex to the cyclic order of its neighbors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{EmbeddingError, RotationSystem};
use crate::game::{Game, GameError, Graph};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed game document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("rotation: {0}")]
    Rotation(#[from] EmbeddingError),
    #[error("rotation names unknown vertex `{0}`")]
    RotationVertex(String),
    #[error("rotation is missing vertex `{0}`")]
    RotationMissing(String),
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    name: String,
    hatness: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rotation: Option<BTreeMap<String, Vec<String>>>,
}

/// A parsed document.
#[derive(Clone, Debug)]
pub struct GameDocument {
    pub game: Game,
    pub rotation: Option<RotationSystem>,
}

pub fn to_json(game: &Game, rotation: Option<&RotationSystem>) -> String {
    let g = game.graph();
    let doc = GameDoc {
        vertices: g
            .names()
            .iter()
            .zip(game.hatness())
            .map(|(name, &hatness)| VertexDoc { name: name.clone(), hatness })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|&(u, v)| (g.name(u).to_string(), g.name(v).to_string()))
            .collect(),
        rotation: rotation.map(|r| {
            r.orders()
                .iter()
                .enumerate()
                .map(|(v, order)| {
                    (
                        g.name(v).to_string(),
                        order.iter().map(|&u| g.name(u).to_string()).collect(),
                    )
                })
                .collect()
        }),
    };
    serde_json::to_string_pretty(&doc).expect("documents serialize")
}

pub fn from_json(text: &str) -> Result<GameDocument, DocumentError> {
    let doc: GameDoc = serde_json::from_str(text)?;
    let names: Vec<String> = doc.vertices.iter().map(|v| v.name.clone()).collect();
    let hatness = doc.vertices.iter().map(|v| v.hatness).collect();
    let graph = Graph::new(names, doc.edges)?;
    let rotation = match doc.rotation {
        None => None,
        Some(map) => {
            let mut order = vec![None; graph.len()];
            for (name, ring) in map {
                let v = graph.index_of(&name).ok_or_else(|| DocumentError::RotationVertex(name.clone()))?;
                let ring = ring
                    .iter()
                    .map(|n| graph.index_of(n).ok_or_else(|| DocumentError::RotationVertex(n.clone())))
                    .collect::<Result<Vec<_>, _>>()?;
                order[v] = Some(ring);
            }
            let order = order
                .into_iter()
                .enumerate()
                .map(|(v, ring)| ring.ok_or_else(|| DocumentError::RotationMissing(graph.name(v).to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            Some(RotationSystem::new(&graph, order)?)
        }
    };
    Ok(GameDocument {
        game: Game::new(graph, hatness)?,
        rotation,
    })
}
