//! Graphs in adjacency and incidence encoding, grid graphs, and the
//! incidence-graph transformation.

use super::{RelDecl, Signature, Structure, StructureError, StructureKind, VERTEX_PRED};
use std::collections::{BTreeMap, BTreeSet};

pub const EDGE_REL: &str = "E";
pub const INCIDENCE_REL: &str = "inc";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphEncoding {
    Adjacency,
    Incidence,
}

/// A finite simple graph, stored as a relational structure in one of the
/// two encodings. Labels are unary predicates over the domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    s: Structure,
    encoding: GraphEncoding,
}

impl Graph {
    /// Adjacency-encoded graph. Edges are unordered pairs of distinct
    /// vertices; both orientations are stored in `E`.
    pub fn adjacency(
        vertices: Vec<String>,
        edges: Vec<(String, String)>,
    ) -> Result<Self, StructureError> {
        Graph::adjacency_labeled(vertices, edges, Vec::new())
    }

    /// Adjacency-encoded graph with unary label predicates
    /// (`labels: (name, members)`).
    pub fn adjacency_labeled(
        vertices: Vec<String>,
        edges: Vec<(String, String)>,
        labels: Vec<(String, Vec<String>)>,
    ) -> Result<Self, StructureError> {
        let mut decls = vec![RelDecl {
            name: EDGE_REL.into(),
            arity: 2,
            is_label: false,
        }];
        for (name, _) in &labels {
            decls.push(RelDecl {
                name: name.clone(),
                arity: 1,
                is_label: true,
            });
        }
        let sig = Signature::new(decls)?;
        for (u, v) in &edges {
            if u == v {
                return Err(StructureError::Graph(format!("self-loop at `{}`", u)));
            }
        }
        let mut contents = vec![(
            EDGE_REL.to_string(),
            edges
                .iter()
                .flat_map(|(u, v)| {
                    [
                        vec![u.clone(), v.clone()],
                        vec![v.clone(), u.clone()],
                    ]
                })
                .collect(),
        )];
        for (name, members) in labels {
            contents.push((name, members.into_iter().map(|m| vec![m]).collect()));
        }
        let s = Structure::new(sig, StructureKind::GraphAdj, vertices, contents)?;
        Ok(Graph {
            s,
            encoding: GraphEncoding::Adjacency,
        })
    }

    /// Wrap an existing structure known to follow one of the graph
    /// encodings.
    pub fn from_structure(s: Structure) -> Result<Self, StructureError> {
        let encoding = match s.kind() {
            StructureKind::GraphAdj => GraphEncoding::Adjacency,
            StructureKind::GraphInc => GraphEncoding::Incidence,
            k => {
                return Err(StructureError::Graph(format!(
                    "structure kind `{}` is not a graph encoding",
                    k.tag()
                )))
            }
        };
        validate_graph(&s, encoding)?;
        Ok(Graph { s, encoding })
    }

    pub fn structure(&self) -> &Structure {
        &self.s
    }

    pub fn into_structure(self) -> Structure {
        self.s
    }

    pub fn encoding(&self) -> GraphEncoding {
        self.encoding
    }

    /// Vertex element ids. For adjacency encodings this is the whole
    /// domain; for incidence encodings, the `vert`-flagged part.
    pub fn vertex_ids(&self) -> Vec<u32> {
        match self.encoding {
            GraphEncoding::Adjacency => (0..self.s.size()).collect(),
            GraphEncoding::Incidence => self.s.vertex_range().unwrap_or_default(),
        }
    }

    /// Undirected edges as canonical id pairs `(min, max)`.
    pub fn edge_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = BTreeSet::new();
        match self.encoding {
            GraphEncoding::Adjacency => {
                for t in self.s.tuples_by_name(EDGE_REL).into_iter().flatten() {
                    out.insert((t[0].min(t[1]), t[0].max(t[1])));
                }
            }
            GraphEncoding::Incidence => {
                let mut ends: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
                for t in self.s.tuples_by_name(INCIDENCE_REL).into_iter().flatten() {
                    ends.entry(t[0]).or_default().push(t[1]);
                }
                for (_, vs) in ends {
                    if let [a, b] = vs[..] {
                        out.insert((a.min(b), a.max(b)));
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

fn validate_graph(s: &Structure, encoding: GraphEncoding) -> Result<(), StructureError> {
    match encoding {
        GraphEncoding::Adjacency => {
            let e = s
                .tuples_by_name(EDGE_REL)
                .ok_or_else(|| StructureError::Graph("missing `E` relation".into()))?;
            for t in e {
                if t[0] == t[1] {
                    return Err(StructureError::Graph(format!(
                        "self-loop at `{}`",
                        s.element_name(t[0])
                    )));
                }
                if !e.contains(&vec![t[1], t[0]]) {
                    return Err(StructureError::Graph("adjacency must be symmetric".into()));
                }
            }
        }
        GraphEncoding::Incidence => {
            let inc = s
                .tuples_by_name(INCIDENCE_REL)
                .ok_or_else(|| StructureError::Graph("missing `inc` relation".into()))?;
            let vert: BTreeSet<u32> = s
                .tuples_by_name(VERTEX_PRED)
                .ok_or_else(|| StructureError::Graph("missing `vert` predicate".into()))?
                .iter()
                .map(|t| t[0])
                .collect();
            let mut degree: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
            for t in inc {
                if vert.contains(&t[0]) || !vert.contains(&t[1]) {
                    return Err(StructureError::Graph(
                        "incidence pairs must be (edge-element, vertex)".into(),
                    ));
                }
                degree.entry(t[0]).or_default().insert(t[1]);
            }
            for e in 0..s.size() {
                if !vert.contains(&e) {
                    let d = degree.get(&e).map(|s| s.len()).unwrap_or(0);
                    if d != 2 {
                        return Err(StructureError::Graph(format!(
                            "edge-element `{}` has degree {}, expected 2",
                            s.element_name(e),
                            d
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

pub(super) fn validate_kinded(s: &Structure) -> Result<(), StructureError> {
    match s.kind() {
        StructureKind::Tree => {
            super::tree::Tree::from_structure(s)?;
        }
        StructureKind::Grid => {
            let (_, coords) = super::as_grid(s)
                .ok_or_else(|| StructureError::Graph("not a valid grid".into()))?;
            for (e, &(i, j)) in coords.iter().enumerate() {
                if s.element_name(e as u32) != super::grid_cell_name(i, j) {
                    return Err(StructureError::Graph(format!(
                        "grid cell `{}` should be named `{}`",
                        s.element_name(e as u32),
                        super::grid_cell_name(i, j)
                    )));
                }
            }
        }
        StructureKind::GraphAdj => validate_graph(s, GraphEncoding::Adjacency)?,
        StructureKind::GraphInc => validate_graph(s, GraphEncoding::Incidence)?,
        StructureKind::Generic => {}
    }
    Ok(())
}

/// The `n x n` grid graph: vertices `[n] x [n]`, adjacency exactly at
/// Manhattan distance 1.
pub fn make_grid_graph(n: u32) -> Result<Graph, StructureError> {
    if n == 0 {
        return Err(StructureError::EmptyGrid);
    }
    let mut vertices = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            vertices.push(super::grid_cell_name(i, j));
        }
    }
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i < n {
                edges.push((super::grid_cell_name(i, j), super::grid_cell_name(i + 1, j)));
            }
            if j < n {
                edges.push((super::grid_cell_name(i, j), super::grid_cell_name(i, j + 1)));
            }
        }
    }
    Graph::adjacency(vertices, edges)
}

/// Canonical name for the edge-element between `u` and `v` in incidence
/// encodings.
pub fn edge_element_name(u: &str, v: &str) -> String {
    if u <= v {
        format!("{}|{}", u, v)
    } else {
        format!("{}|{}", v, u)
    }
}

/// The incidence encoding of an adjacency-encoded graph: domain `V  E`,
/// incidence relation between edge-elements and their endpoints, and the
/// reserved `vert` predicate marking original vertices. Unary labels on
/// vertices carry over.
pub fn incidence_graph(g: &Graph) -> Result<Graph, StructureError> {
    if g.encoding() != GraphEncoding::Adjacency {
        return Err(StructureError::Graph(
            "incidence_graph expects an adjacency-encoded graph".into(),
        ));
    }
    let s = g.structure();
    let mut decls = vec![
        RelDecl {
            name: INCIDENCE_REL.into(),
            arity: 2,
            is_label: false,
        },
        RelDecl {
            name: VERTEX_PRED.into(),
            arity: 1,
            is_label: false,
        },
    ];
    let label_rels: Vec<&RelDecl> = s
        .signature()
        .rels()
        .iter()
        .filter(|d| d.is_label)
        .collect();
    for d in &label_rels {
        decls.push(RelDecl {
            name: d.name.clone(),
            arity: 1,
            is_label: true,
        });
    }
    let sig = Signature::new(decls)?;
    let mut domain: Vec<String> = s.elements().to_vec();
    let edges = g.edge_pairs();
    for &(u, v) in &edges {
        domain.push(edge_element_name(s.element_name(u), s.element_name(v)));
    }
    let n_vert = s.size();
    let mut inc = BTreeSet::new();
    let mut vert = BTreeSet::new();
    for v in 0..n_vert {
        vert.insert(vec![v]);
    }
    for (k, &(u, v)) in edges.iter().enumerate() {
        let e = n_vert + k as u32;
        inc.insert(vec![e, u]);
        inc.insert(vec![e, v]);
    }
    let mut rels = vec![inc, vert];
    for d in &label_rels {
        rels.push(s.tuples_by_name(&d.name).unwrap().clone());
    }
    let out = Structure::from_indexed(sig, StructureKind::GraphInc, domain, rels)?;
    Graph::from_structure(out)
}

/// Reinterpret an incidence-encoded graph as the adjacency encoding of the
/// incidence graph itself: same domain, `E` is the symmetrized incidence
/// relation, `vert` kept as a distinguishing predicate.
pub fn incidence_as_adjacency(g: &Graph) -> Result<Graph, StructureError> {
    if g.encoding() != GraphEncoding::Incidence {
        return Err(StructureError::Graph(
            "expected an incidence-encoded graph".into(),
        ));
    }
    let s = g.structure();
    let mut decls = vec![
        RelDecl {
            name: EDGE_REL.into(),
            arity: 2,
            is_label: false,
        },
        RelDecl {
            name: VERTEX_PRED.into(),
            arity: 1,
            is_label: false,
        },
    ];
    let label_rels: Vec<&RelDecl> = s
        .signature()
        .rels()
        .iter()
        .filter(|d| d.is_label)
        .collect();
    for d in &label_rels {
        decls.push(RelDecl {
            name: d.name.clone(),
            arity: 1,
            is_label: true,
        });
    }
    let sig = Signature::new(decls)?;
    let mut e = BTreeSet::new();
    for t in s.tuples_by_name(INCIDENCE_REL).unwrap() {
        e.insert(vec![t[0], t[1]]);
        e.insert(vec![t[1], t[0]]);
    }
    let mut rels = vec![e, s.tuples_by_name(VERTEX_PRED).unwrap().clone()];
    for d in &label_rels {
        rels.push(s.tuples_by_name(&d.name).unwrap().clone());
    }
    let out = Structure::from_indexed(sig, StructureKind::GraphAdj, s.elements().to_vec(), rels)?;
    Ok(Graph {
        s: out,
        encoding: GraphEncoding::Adjacency,
    })
}
