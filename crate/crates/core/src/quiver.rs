//! Covering quivers Γ_G(W).
//!
//! Vertices are the elements of G in lexicographic exponent order. The arrow
//! (a_i, g) runs from v_{g⁻¹} to v_{w_i g⁻¹}, so every vertex has exactly one
//! outgoing and one incoming arrow per weight.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::group::{FinAbGroup, GroupElt, WeightSeq};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("({0}) is not a weight sequence of {1}")]
    NotWeightSequence(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub family: usize,
    pub shift: GroupElt,
}

#[derive(Debug, Clone)]
pub struct CoveringQuiver {
    group: FinAbGroup,
    weights: WeightSeq,
    vertices: Vec<GroupElt>,
    /// `targets[v][i]`: end vertex of the family-i arrow leaving v.
    targets: Vec<Vec<usize>>,
    /// `sources[v][i]`: start vertex of the family-i arrow entering v.
    sources: Vec<Vec<usize>>,
}

/// Connected components as sorted vertex index lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Components {
    pub components: Vec<Vec<usize>>,
    /// Position in `components` of the component containing v_e.
    pub identity_component: usize,
}

impl CoveringQuiver {
    pub fn new(group: FinAbGroup, weights: WeightSeq) -> Result<Self, QuiverError> {
        if !group.is_weight_sequence(&weights) {
            return Err(QuiverError::NotWeightSequence(
                weights.to_string(),
                group.to_string(),
            ));
        }
        let vertices = group.elements();
        let idx = |g: &GroupElt| group.index_of(g);
        let targets = vertices
            .iter()
            .map(|v| {
                weights
                    .weights()
                    .iter()
                    .map(|w| idx(&group.mul(w, v)))
                    .collect()
            })
            .collect();
        let sources = vertices
            .iter()
            .map(|v| {
                weights
                    .weights()
                    .iter()
                    .map(|w| idx(&group.mul(&group.inv(w), v)))
                    .collect()
            })
            .collect();
        Ok(CoveringQuiver {
            group,
            weights,
            vertices,
            targets,
            sources,
        })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn weights(&self) -> &WeightSeq {
        &self.weights
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_families(&self) -> usize {
        self.weights.len()
    }

    pub fn vertex(&self, v: usize) -> &GroupElt {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, g: &GroupElt) -> usize {
        self.group.index_of(g)
    }

    pub fn identity_vertex(&self) -> usize {
        self.group.index_of(&self.group.identity())
    }

    pub fn target(&self, v: usize, family: usize) -> usize {
        self.targets[v][family]
    }

    pub fn source_into(&self, v: usize, family: usize) -> usize {
        self.sources[v][family]
    }

    /// Arrows ordered by (family, shift).
    pub fn arrows(&self) -> Vec<Arrow> {
        (0..self.num_families())
            .flat_map(|family| {
                self.vertices.iter().map(move |g| Arrow {
                    family,
                    shift: g.clone(),
                })
            })
            .collect()
    }

    pub fn arrow_source(&self, a: &Arrow) -> usize {
        self.group.index_of(&self.group.inv(&a.shift))
    }

    pub fn arrow_target(&self, a: &Arrow) -> usize {
        self.target(self.arrow_source(a), a.family)
    }

    /// The arrow of the given family leaving vertex v.
    pub fn arrow_from(&self, v: usize, family: usize) -> Arrow {
        Arrow {
            family,
            shift: self.group.inv(&self.vertices[v]),
        }
    }

    /// Left action g·v_f = v_{fg⁻¹} on vertex indices.
    pub fn translate_vertex(&self, g: &GroupElt, v: usize) -> usize {
        self.group
            .index_of(&self.group.mul(&self.vertices[v], &self.group.inv(g)))
    }

    pub fn connected_components(&self) -> Components {
        let n = self.num_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let nbrs = self.targets[v].iter().chain(&self.sources[v]);
                for &u in nbrs {
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                        queue.push_back(u);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        let identity_component = comp[self.identity_vertex()];
        Components {
            components,
            identity_component,
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph covering_quiver {{");
        let _ = writeln!(out, "  label=\"Gamma_{}({})\";", self.group, self.weights);
        for v in &self.vertices {
            let _ = writeln!(out, "  \"v{v}\";");
        }
        for a in self.arrows() {
            let s = &self.vertices[self.arrow_source(&a)];
            let t = &self.vertices[self.arrow_target(&a)];
            let _ = writeln!(
                out,
                "  \"v{s}\" -> \"v{t}\" [label=\"(a_{}, {})\"];",
                a.family + 1,
                a.shift
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arrows: Vec<serde_json::Value> = self
            .arrows()
            .iter()
            .map(|a| {
                serde_json::json!({
                    "family": a.family + 1,
                    "shift": a.shift,
                    "source": self.vertices[self.arrow_source(a)],
                    "target": self.vertices[self.arrow_target(a)],
                })
            })
            .collect();
        serde_json::json!({
            "group": self.group.to_string(),
            "weights": self.weights,
            "vertices": self.vertices,
            "arrows": arrows,
        })
    }
}
