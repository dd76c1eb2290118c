//! Finite relational structures and the concrete families used throughout:
//! labeled binary trees, grids, grid graphs, and graph encodings.
//!
//! Structures are immutable after validation. Element identifiers are
//! opaque strings with a fixed total order (their position in the domain
//! list); all relation contents are stored as index tuples into that list,
//! so iteration is deterministic everywhere.

mod format;
mod graph;
mod tree;

pub use format::{parse_structure, print_structure};
pub use graph::{
    edge_element_name, incidence_as_adjacency, incidence_graph, make_grid_graph, Graph,
    GraphEncoding, EDGE_REL, INCIDENCE_REL,
};
pub use tree::{tree_signature, Side, Tree, LABEL_PREFIX};

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

/// Reserved unary predicate marking original vertices in incidence
/// encodings and in adjacency encodings of incidence graphs.
pub const VERTEX_PRED: &str = "vert";

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("duplicate relation name `{0}` in signature")]
    DuplicateRelation(String),
    #[error("relation `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("label predicate `{0}` must be unary")]
    NonUnaryLabel(String),
    #[error("duplicate element `{0}` in domain")]
    DuplicateElement(String),
    #[error("invalid element name `{0}`: must be non-empty without whitespace, parentheses or braces")]
    BadElementName(String),
    #[error("unknown relation name `{0}`")]
    UnknownRelation(String),
    #[error("relation `{rel}`: tuple has {got} entries, arity is {want}")]
    ArityMismatch { rel: String, got: usize, want: usize },
    #[error("relation `{rel}`: element `{elem}` is not in the domain")]
    ElementOutsideDomain { rel: String, elem: String },
    #[error("grid side must be at least 1")]
    EmptyGrid,
    #[error("{0} is not a valid tree: {1}")]
    NotATree(String, String),
    #[error("graph error: {0}")]
    Graph(String),
    #[error("structure parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// What family a structure belongs to; drives range conventions and the
/// `kind` tag of the file format.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StructureKind {
    Tree,
    Grid,
    GraphAdj,
    GraphInc,
    Generic,
}

impl StructureKind {
    pub fn tag(self) -> &'static str {
        match self {
            StructureKind::Tree => "tree",
            StructureKind::Grid => "grid",
            StructureKind::GraphAdj => "graph-adj",
            StructureKind::GraphInc => "graph-inc",
            StructureKind::Generic => "generic",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "tree" => Some(StructureKind::Tree),
            "grid" => Some(StructureKind::Grid),
            "graph-adj" => Some(StructureKind::GraphAdj),
            "graph-inc" => Some(StructureKind::GraphInc),
            "generic" => Some(StructureKind::Generic),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelDecl {
    pub name: String,
    pub arity: usize,
    /// Unary predicates flagged as labels (alphabet symbols, Λ-labels).
    pub is_label: bool,
}

/// A relational signature: named relations with positive arities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Signature {
    rels: Vec<RelDecl>,
    by_name: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new(decls: Vec<RelDecl>) -> Result<Self, StructureError> {
        let mut by_name = BTreeMap::new();
        for (i, d) in decls.iter().enumerate() {
            if d.arity == 0 {
                return Err(StructureError::ZeroArity(d.name.clone()));
            }
            if d.is_label && d.arity != 1 {
                return Err(StructureError::NonUnaryLabel(d.name.clone()));
            }
            if by_name.insert(d.name.clone(), i).is_some() {
                return Err(StructureError::DuplicateRelation(d.name.clone()));
            }
        }
        Ok(Signature {
            rels: decls,
            by_name,
        })
    }

    /// Convenience constructor from `(name, arity)` pairs, no labels.
    pub fn from_arities(pairs: &[(&str, usize)]) -> Result<Self, StructureError> {
        Signature::new(
            pairs
                .iter()
                .map(|(n, a)| RelDecl {
                    name: n.to_string(),
                    arity: *a,
                    is_label: false,
                })
                .collect(),
        )
    }

    pub fn rels(&self) -> &[RelDecl] {
        &self.rels
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.rels[i].arity)
    }
}

fn valid_element_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '{' | '}'))
}

/// A finite relational structure over a [`Signature`].
#[derive(Clone, Debug)]
pub struct Structure {
    sig: Arc<Signature>,
    kind: StructureKind,
    elems: Vec<String>,
    by_elem: BTreeMap<String, u32>,
    rels: Vec<BTreeSet<Vec<u32>>>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig
            && self.kind == other.kind
            && self.elems == other.elems
            && self.rels == other.rels
    }
}
impl Eq for Structure {}

impl Structure {
    /// Build a validated structure. `contents` maps relation names to
    /// tuples of element names.
    pub fn new(
        sig: Signature,
        kind: StructureKind,
        domain: Vec<String>,
        contents: Vec<(String, Vec<Vec<String>>)>,
    ) -> Result<Self, StructureError> {
        let mut by_elem = BTreeMap::new();
        for (i, e) in domain.iter().enumerate() {
            if !valid_element_name(e) {
                return Err(StructureError::BadElementName(e.clone()));
            }
            if by_elem.insert(e.clone(), i as u32).is_some() {
                return Err(StructureError::DuplicateElement(e.clone()));
            }
        }
        let mut rels: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); sig.rels.len()];
        for (name, tuples) in contents {
            let idx = sig
                .index_of(&name)
                .ok_or_else(|| StructureError::UnknownRelation(name.clone()))?;
            let arity = sig.rels[idx].arity;
            for tup in tuples {
                if tup.len() != arity {
                    return Err(StructureError::ArityMismatch {
                        rel: name.clone(),
                        got: tup.len(),
                        want: arity,
                    });
                }
                let mut enc = Vec::with_capacity(arity);
                for e in &tup {
                    let id = by_elem.get(e).copied().ok_or_else(|| {
                        StructureError::ElementOutsideDomain {
                            rel: name.clone(),
                            elem: e.clone(),
                        }
                    })?;
                    enc.push(id);
                }
                rels[idx].insert(enc);
            }
        }
        let s = Structure {
            sig: Arc::new(sig),
            kind,
            elems: domain,
            by_elem,
            rels,
        };
        graph::validate_kinded(&s)?;
        Ok(s)
    }

    /// Build from already-encoded index tuples (used by internal
    /// constructors that produce indices directly).
    pub(crate) fn from_indexed(
        sig: Signature,
        kind: StructureKind,
        domain: Vec<String>,
        rels: Vec<BTreeSet<Vec<u32>>>,
    ) -> Result<Self, StructureError> {
        debug_assert_eq!(rels.len(), sig.rels.len());
        let mut by_elem = BTreeMap::new();
        for (i, e) in domain.iter().enumerate() {
            if !valid_element_name(e) {
                return Err(StructureError::BadElementName(e.clone()));
            }
            if by_elem.insert(e.clone(), i as u32).is_some() {
                return Err(StructureError::DuplicateElement(e.clone()));
            }
        }
        for (i, tuples) in rels.iter().enumerate() {
            for t in tuples {
                if t.len() != sig.rels[i].arity {
                    return Err(StructureError::ArityMismatch {
                        rel: sig.rels[i].name.clone(),
                        got: t.len(),
                        want: sig.rels[i].arity,
                    });
                }
                if t.iter().any(|&e| e as usize >= domain.len()) {
                    return Err(StructureError::ElementOutsideDomain {
                        rel: sig.rels[i].name.clone(),
                        elem: "<index>".into(),
                    });
                }
            }
        }
        Ok(Structure {
            sig: Arc::new(sig),
            kind,
            elems: domain,
            by_elem,
            rels,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn size(&self) -> u32 {
        self.elems.len() as u32
    }

    pub fn elements(&self) -> &[String] {
        &self.elems
    }

    pub fn element_name(&self, id: u32) -> &str {
        &self.elems[id as usize]
    }

    pub fn element_id(&self, name: &str) -> Option<u32> {
        self.by_elem.get(name).copied()
    }

    pub fn tuples(&self, rel: usize) -> &BTreeSet<Vec<u32>> {
        &self.rels[rel]
    }

    pub fn tuples_by_name(&self, rel: &str) -> Option<&BTreeSet<Vec<u32>>> {
        self.sig.index_of(rel).map(|i| &self.rels[i])
    }

    pub fn holds(&self, rel: usize, tuple: &[u32]) -> bool {
        self.rels[rel].contains(tuple)
    }

    /// Elements satisfying the reserved vertex predicate, if present.
    /// Object and parameter ranges of definable set systems restrict to
    /// these on incidence-style structures.
    pub fn vertex_range(&self) -> Option<Vec<u32>> {
        let idx = self.sig.index_of(VERTEX_PRED)?;
        Some(self.rels[idx].iter().map(|t| t[0]).collect())
    }

    /// Rename every element through `f`, keeping order and contents.
    pub fn rename_elements(
        &self,
        f: impl Fn(&str) -> String,
    ) -> Result<Structure, StructureError> {
        Structure::from_indexed(
            (*self.sig).clone(),
            self.kind,
            self.elems.iter().map(|e| f(e)).collect(),
            self.rels.clone(),
        )
    }

    /// Same domain and relations under a different kind tag.
    pub fn with_kind(&self, kind: StructureKind) -> Structure {
        let mut s = self.clone();
        s.kind = kind;
        s
    }
}

/// The oriented `n x n` grid: universe `[n] x [n]` with horizontal and
/// vertical successor relations. Element `(i,j)` is rendered as `"i,j"`.
pub fn make_grid(n: u32) -> Result<Structure, StructureError> {
    if n == 0 {
        return Err(StructureError::EmptyGrid);
    }
    let sig = Signature::from_arities(&[("H", 2), ("V", 2)])?;
    let id = |i: u32, j: u32| (i - 1) * n + (j - 1);
    let mut domain = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            domain.push(grid_cell_name(i, j));
        }
    }
    let mut h = BTreeSet::new();
    let mut v = BTreeSet::new();
    for i in 1..=n {
        for j in 1..=n {
            if i < n {
                h.insert(vec![id(i, j), id(i + 1, j)]);
            }
            if j < n {
                v.insert(vec![id(i, j), id(i, j + 1)]);
            }
        }
    }
    Structure::from_indexed(sig, StructureKind::Grid, domain, vec![h, v])
}

pub fn grid_cell_name(i: u32, j: u32) -> String {
    format!("{},{}", i, j)
}

/// Reconstruct grid coordinates from any `{H, V}` structure that is
/// isomorphic to a square grid. Returns the side and, per element, its
/// `(column, row)` coordinate; `None` if the structure is not a grid.
pub fn as_grid(s: &Structure) -> Option<(u32, Vec<(u32, u32)>)> {
    let h = s.tuples_by_name("H")?;
    let v = s.tuples_by_name("V")?;
    let n_elems = s.size() as usize;
    let side = (1..=n_elems).find(|k| k * k == n_elems)? as u32;
    let mut h_next = vec![None; n_elems];
    let mut v_next = vec![None; n_elems];
    let mut h_in = vec![false; n_elems];
    let mut v_in = vec![false; n_elems];
    for t in h {
        if h_next[t[0] as usize].replace(t[1]).is_some() {
            return None;
        }
        h_in[t[1] as usize] = true;
    }
    for t in v {
        if v_next[t[0] as usize].replace(t[1]).is_some() {
            return None;
        }
        v_in[t[1] as usize] = true;
    }
    // The origin is the unique cell without predecessors.
    let origin = (0..n_elems).find(|&e| !h_in[e] && !v_in[e])? as u32;
    let mut coords = vec![None; n_elems];
    let mut col_start = origin;
    for i in 1..=side {
        let mut cell = col_start;
        for j in 1..=side {
            if coords[cell as usize].replace((i, j)).is_some() {
                return None;
            }
            if j < side {
                cell = v_next[cell as usize]?;
            } else if v_next[cell as usize].is_some() {
                return None;
            }
        }
        if i < side {
            col_start = h_next[col_start as usize]?;
        } else if h_next[col_start as usize].is_some() {
            return None;
        }
    }
    let coords: Option<Vec<_>> = coords.into_iter().collect();
    let coords = coords?;
    // Every successor pair must match the reconstructed coordinates.
    let expect_h = coords
        .iter()
        .enumerate()
        .filter(|(_, &(i, _))| i < side)
        .count();
    if h.len() != expect_h || v.len() != expect_h {
        return None;
    }
    for t in h {
        let (i0, j0) = coords[t[0] as usize];
        let (i1, j1) = coords[t[1] as usize];
        if i1 != i0 + 1 || j1 != j0 {
            return None;
        }
    }
    for t in v {
        let (i0, j0) = coords[t[0] as usize];
        let (i1, j1) = coords[t[1] as usize];
        if i1 != i0 || j1 != j0 + 1 {
            return None;
        }
    }
    Some((side, coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        // n=1: no successors at all.
        let g1 = make_grid(1).unwrap();
        assert_eq!(g1.tuples_by_name("H").unwrap().len(), 0);
        assert_eq!(g1.tuples_by_name("V").unwrap().len(), 0);

        // n=2: forced by the definition.
        let g2 = make_grid(2).unwrap();
        let name = |t: &Vec<u32>| {
            (
                g2.element_name(t[0]).to_string(),
                g2.element_name(t[1]).to_string(),
            )
        };
        let h: Vec<_> = g2.tuples_by_name("H").unwrap().iter().map(name).collect();
        assert_eq!(
            h,
            vec![
                ("1,1".into(), "2,1".into()),
                ("1,2".into(), "2,2".into())
            ]
        );
        let v: Vec<_> = g2.tuples_by_name("V").unwrap().iter().map(name).collect();
        assert_eq!(
            v,
            vec![
                ("1,1".into(), "1,2".into()),
                ("2,1".into(), "2,2".into())
            ]
        );

        // n=3: n(n-1) tuples per direction, checked by enumeration.
        let g3 = make_grid(3).unwrap();
        assert_eq!(g3.tuples_by_name("H").unwrap().len(), 6);
        assert_eq!(g3.tuples_by_name("V").unwrap().len(), 6);
    }

    #[test]
    fn grid_degree_invariant() {
        let g = make_grid(4).unwrap();
        let h = g.tuples_by_name("H").unwrap();
        let v = g.tuples_by_name("V").unwrap();
        for e in 0..g.size() {
            let name = g.element_name(e);
            let (i, j) = name.split_once(',').unwrap();
            let (i, j): (u32, u32) = (i.parse().unwrap(), j.parse().unwrap());
            let h_out = h.iter().filter(|t| t[0] == e).count();
            let v_out = v.iter().filter(|t| t[0] == e).count();
            assert_eq!(h_out == 1, i < 4);
            assert_eq!(v_out == 1, j < 4);
        }
    }

    #[test]
    fn grid_zero_rejected() {
        assert!(make_grid(0).is_err());
    }

    #[test]
    fn as_grid_roundtrip() {
        for n in 1..=5 {
            let g = make_grid(n).unwrap();
            let (side, coords) = as_grid(&g).expect("grid recognized");
            assert_eq!(side, n);
            for (e, &(i, j)) in coords.iter().enumerate() {
                assert_eq!(g.element_name(e as u32), grid_cell_name(i, j));
            }
        }
    }

    #[test]
    fn as_grid_rejects_non_grid() {
        let sig = Signature::from_arities(&[("H", 2), ("V", 2)]).unwrap();
        let s = Structure::new(
            sig,
            StructureKind::Generic,
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![("H".into(), vec![vec!["a".into(), "b".into()]])],
        )
        .unwrap();
        assert!(as_grid(&s).is_none());
    }

    #[test]
    fn build_structure_validation() {
        let sig = Signature::from_arities(&[("E", 2)]).unwrap();
        let err = Structure::new(
            sig.clone(),
            StructureKind::Generic,
            vec!["1".into(), "2".into()],
            vec![("E".into(), vec![vec!["1".into()]])],
        );
        assert!(matches!(err, Err(StructureError::ArityMismatch { .. })));

        let err = Structure::new(
            sig.clone(),
            StructureKind::Generic,
            vec!["1".into()],
            vec![("E".into(), vec![vec!["1".into(), "7".into()]])],
        );
        assert!(matches!(
            err,
            Err(StructureError::ElementOutsideDomain { .. })
        ));

        let err = Structure::new(
            sig,
            StructureKind::Generic,
            vec!["1".into()],
            vec![("F".into(), vec![])],
        );
        assert!(matches!(err, Err(StructureError::UnknownRelation(_))));
    }

    #[test]
    fn k2_adjacency() {
        let sig = Signature::from_arities(&[("E", 2)]).unwrap();
        let s = Structure::new(
            sig,
            StructureKind::GraphAdj,
            vec!["1".into(), "2".into()],
            vec![(
                "E".into(),
                vec![
                    vec!["1".into(), "2".into()],
                    vec!["2".into(), "1".into()],
                ],
            )],
        )
        .unwrap();
        assert_eq!(s.tuples_by_name("E").unwrap().len(), 2);
    }
}
