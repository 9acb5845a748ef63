//! Quivers, dimension vectors, and the quiver description document.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rat, parse_rat};

/// Reserved suffix marking the reversed edge `e*` of the doubled quiver.
pub const STAR: char = '*';
/// Reserved suffix marking the degree −1 generators `e'` of Ginzburg algebras.
pub const PRIME: char = '\'';

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// Finite directed multigraph. Parallel edges and loops are allowed; edge ids
/// are unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, String)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::IdCollision(format!("vertex `{v}` declared twice")));
            }
        }
        let index: BTreeMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut eseen = std::collections::BTreeSet::new();
        let mut es = Vec::with_capacity(edges.len());
        for (id, src, tgt) in edges {
            if !eseen.insert(id.clone()) {
                return Err(Error::IdCollision(format!("edge `{id}` declared twice")));
            }
            let &s = index
                .get(src.as_str())
                .ok_or_else(|| Error::UnknownVertex(src.clone()))?;
            let &t = index
                .get(tgt.as_str())
                .ok_or_else(|| Error::UnknownVertex(tgt.clone()))?;
            es.push(Edge { id, src: s, tgt: t });
        }
        Ok(Quiver {
            vertices,
            edges: es,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.into()))
    }

    /// The doubled quiver: one reversed edge `e*` per edge `e`.
    ///
    /// Input ids must not already carry the star marker.
    pub fn double(&self) -> Result<Quiver> {
        for e in &self.edges {
            if e.id.contains(STAR) {
                return Err(Error::IdCollision(format!(
                    "edge `{}` contains the reserved star marker",
                    e.id
                )));
            }
        }
        let mut edges = self.edges.clone();
        for e in &self.edges {
            edges.push(Edge {
                id: format!("{}{}", e.id, STAR),
                src: e.tgt,
                tgt: e.src,
            });
        }
        Ok(Quiver {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    /// The framed quiver: one new vertex `v+` and one edge `v+ -> v` per
    /// vertex `v`.
    pub fn frame(&self) -> Result<Quiver> {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        let n = self.vertices.len();
        for (i, v) in self.vertices.iter().enumerate() {
            let fv = format!("{v}+");
            if vertices.contains(&fv) {
                return Err(Error::IdCollision(format!("framing vertex `{fv}` exists")));
            }
            let fe = format!("f{v}");
            if edges.iter().any(|e| e.id == fe) {
                return Err(Error::IdCollision(format!("framing edge `{fe}` exists")));
            }
            vertices.push(fv);
            edges.push(Edge {
                id: fe,
                src: n + i,
                tgt: i,
            });
        }
        Ok(Quiver { vertices, edges })
    }

    /// True when `sub` is a subquiver: its vertices and edges all occur here
    /// with the same endpoints.
    pub fn contains_subquiver(&self, sub: &Quiver) -> bool {
        for v in &sub.vertices {
            if !self.vertices.contains(v) {
                return false;
            }
        }
        for e in &sub.edges {
            let Ok(idx) = self.edge_index(&e.id) else {
                return false;
            };
            let mine = &self.edges[idx];
            if self.vertices[mine.src] != sub.vertices[e.src]
                || self.vertices[mine.tgt] != sub.vertices[e.tgt]
            {
                return false;
            }
        }
        true
    }

    /// True when every edge `e` has a partner `e*` with reversed endpoints.
    pub fn is_doubled(&self) -> bool {
        let base: Vec<&Edge> = self
            .edges
            .iter()
            .filter(|e| !e.id.ends_with(STAR))
            .collect();
        if base.len() * 2 != self.edges.len() {
            return false;
        }
        base.iter().all(|e| {
            self.edges
                .iter()
                .any(|f| f.id == format!("{}{}", e.id, STAR) && f.src == e.tgt && f.tgt == e.src)
        })
    }

    /// Base edges (those without the star marker) of a doubled quiver,
    /// paired with the index of their star partner.
    pub fn star_pairs(&self) -> Result<Vec<(usize, usize)>> {
        if !self.is_doubled() {
            return Err(Error::InvalidQuiver("not a doubled quiver".into()));
        }
        let mut pairs = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !e.id.ends_with(STAR) {
                let j = self.edge_index(&format!("{}{}", e.id, STAR))?;
                pairs.push((i, j));
            }
        }
        Ok(pairs)
    }
}

/// Per-vertex sizes for a representation; the domain is the vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionVector {
    dims: Vec<usize>,
}

impl DimensionVector {
    pub fn new(quiver: &Quiver, dims: Vec<usize>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::InvalidQuiver(format!(
                "dimension vector has {} entries for {} vertices",
                dims.len(),
                quiver.vertex_count()
            )));
        }
        Ok(DimensionVector { dims })
    }

    pub fn constant(quiver: &Quiver, n: usize) -> Self {
        DimensionVector {
            dims: vec![n; quiver.vertex_count()],
        }
    }

    pub fn from_map(quiver: &Quiver, map: &BTreeMap<String, usize>) -> Result<Self> {
        let mut dims = vec![0usize; quiver.vertex_count()];
        if map.len() != quiver.vertex_count() {
            return Err(Error::InvalidQuiver(
                "dimension vector domain differs from the vertex set".into(),
            ));
        }
        for (v, &n) in map {
            dims[quiver.vertex_index(v)?] = n;
        }
        Ok(DimensionVector { dims })
    }

    pub fn dim(&self, vertex: usize) -> usize {
        self.dims[vertex]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
}

// ---------------------------------------------------------------------------
// Quiver description document (JSON-compatible)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    id: String,
    src: String,
    tgt: String,
}

#[derive(Serialize, Deserialize)]
struct CycleDoc {
    coeff: String,
    cycle: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct QuiverDoc {
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    potential: Option<Vec<CycleDoc>>,
}

/// Parses the quiver description document, validating all invariants.
/// Returns the quiver and the optional potential.
pub fn parse_quiver_doc(text: &str) -> Result<(Quiver, Option<crate::poly::NCPolynomial>)> {
    let doc: QuiverDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("quiver document: {e}")))?;
    let quiver = Quiver::new(
        doc.vertices,
        doc.edges
            .into_iter()
            .map(|e| (e.id, e.src, e.tgt))
            .collect(),
    )?;
    let potential = match doc.potential {
        None => None,
        Some(cycles) => {
            let alphabet = crate::poly::Alphabet::from_quiver(&quiver);
            let mut p = crate::poly::NCPolynomial::zero();
            for c in cycles {
                let coeff = parse_rat(&c.coeff)?;
                let mut ids = Vec::with_capacity(c.cycle.len());
                for id in &c.cycle {
                    ids.push(quiver.edge_index(id)? as u32);
                }
                let path = crate::poly::Path::from_edges(&alphabet, ids)?;
                p.add_term(path, coeff);
            }
            crate::poly::Potential::new(&alphabet, p.clone())?;
            Some(p)
        }
    };
    Ok((quiver, potential))
}

/// Serializes a quiver (and optional potential) back to the document format.
pub fn quiver_doc_string(
    quiver: &Quiver,
    potential: Option<&crate::poly::NCPolynomial>,
) -> String {
    let alphabet = crate::poly::Alphabet::from_quiver(quiver);
    let doc = QuiverDoc {
        vertices: quiver.vertices().to_vec(),
        edges: quiver
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id.clone(),
                src: quiver.vertices()[e.src].clone(),
                tgt: quiver.vertices()[e.tgt].clone(),
            })
            .collect(),
        potential: potential.map(|p| {
            p.terms()
                .map(|(path, coeff)| CycleDoc {
                    coeff: fmt_rat(coeff),
                    cycle: path
                        .letters()
                        .iter()
                        .map(|&l| alphabet.symbol(l).name.clone())
                        .collect(),
                })
                .collect()
        }),
    };
    serde_json::to_string_pretty(&doc).expect("document serialization")
}
