//! Labeled binary trees, both as a dedicated type (used by the automata
//! and compression machinery) and as relational structures over the tree
//! signature (used by the logic oracle).

use super::{RelDecl, Signature, Structure, StructureError, StructureKind};
use std::collections::BTreeSet;

pub const LABEL_PREFIX: &str = "label_";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// A finite rooted binary tree with one alphabet symbol per node.
///
/// Nodes are indexed `0..size`. The structure view (see
/// [`Tree::to_structure`]) uses two child relations `left`/`right` (parent
/// first) and one unary predicate `label_<sym>` per alphabet symbol.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tree {
    alphabet: Vec<String>,
    labels: Vec<u32>,
    left: Vec<Option<u32>>,
    right: Vec<Option<u32>>,
    parent: Vec<Option<(u32, Side)>>,
    root: u32,
    names: Vec<String>,
}

impl Tree {
    /// Build a tree from per-node labels and child pointers. Node names
    /// default to `n0..nK`.
    pub fn new(
        alphabet: Vec<String>,
        labels: Vec<u32>,
        children: Vec<(Option<u32>, Option<u32>)>,
    ) -> Result<Self, StructureError> {
        let names = (0..labels.len()).map(|i| format!("n{}", i)).collect();
        Tree::with_names(alphabet, labels, children, names)
    }

    pub fn with_names(
        alphabet: Vec<String>,
        labels: Vec<u32>,
        children: Vec<(Option<u32>, Option<u32>)>,
        names: Vec<String>,
    ) -> Result<Self, StructureError> {
        let n = labels.len();
        let fail = |msg: &str| StructureError::NotATree("input".into(), msg.into());
        if children.len() != n || names.len() != n || n == 0 {
            return Err(fail("node arrays must be non-empty and equal length"));
        }
        {
            let mut sorted = names.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(fail("node names must be unique"));
            }
        }
        if labels.iter().any(|&l| l as usize >= alphabet.len()) {
            return Err(fail("label index out of alphabet range"));
        }
        let mut parent: Vec<Option<(u32, Side)>> = vec![None; n];
        for (p, &(l, r)) in children.iter().enumerate() {
            for (child, side) in [(l, Side::Left), (r, Side::Right)] {
                if let Some(c) = child {
                    if c as usize >= n {
                        return Err(fail("child index out of range"));
                    }
                    if parent[c as usize].replace((p as u32, side)).is_some() {
                        return Err(fail("node has more than one parent"));
                    }
                }
            }
        }
        let roots: Vec<u32> = (0..n as u32)
            .filter(|&v| parent[v as usize].is_none())
            .collect();
        if roots.len() != 1 {
            return Err(fail("tree must have exactly one root"));
        }
        let root = roots[0];
        // Connectivity (acyclicity follows from unique parents + one root).
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        let mut count = 0;
        while let Some(v) = stack.pop() {
            if seen[v as usize] {
                return Err(fail("cycle detected"));
            }
            seen[v as usize] = true;
            count += 1;
            let (l, r) = children[v as usize];
            stack.extend(l);
            stack.extend(r);
        }
        if count != n {
            return Err(fail("tree is not connected"));
        }
        let (left, right) = children.iter().map(|&(l, r)| (l, r)).unzip();
        Ok(Tree {
            alphabet,
            labels,
            left,
            right,
            parent,
            root,
            names,
        })
    }

    pub fn single(alphabet: Vec<String>, label: u32) -> Result<Self, StructureError> {
        Tree::new(alphabet, vec![label], vec![(None, None)])
    }

    pub fn size(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn label(&self, v: u32) -> u32 {
        self.labels[v as usize]
    }

    pub fn symbol(&self, v: u32) -> &str {
        &self.alphabet[self.labels[v as usize] as usize]
    }

    pub fn left(&self, v: u32) -> Option<u32> {
        self.left[v as usize]
    }

    pub fn right(&self, v: u32) -> Option<u32> {
        self.right[v as usize]
    }

    pub fn parent(&self, v: u32) -> Option<(u32, Side)> {
        self.parent[v as usize]
    }

    pub fn name(&self, v: u32) -> &str {
        &self.names[v as usize]
    }

    pub fn node_by_name(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    /// Children in bottom-up dependency order: every node appears after
    /// both of its children.
    pub fn postorder(&self) -> Vec<u32> {
        let mut order = Vec::with_capacity(self.labels.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
            } else {
                stack.push((v, true));
                if let Some(r) = self.right(v) {
                    stack.push((r, false));
                }
                if let Some(l) = self.left(v) {
                    stack.push((l, false));
                }
            }
        }
        order
    }

    /// All descendants of `v`, including `v` itself.
    pub fn subtree(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.left(u));
            stack.extend(self.right(u));
        }
        out.sort_unstable();
        out
    }

    /// Is `a` an ancestor of `b` (reflexively)?
    pub fn is_ancestor(&self, a: u32, b: u32) -> bool {
        let mut cur = b;
        loop {
            if cur == a {
                return true;
            }
            match self.parent(cur) {
                Some((p, _)) => cur = p,
                None => return false,
            }
        }
    }

    /// Same tree with every node's label replaced through `f`, over a new
    /// alphabet.
    pub fn relabel(
        &self,
        alphabet: Vec<String>,
        f: impl Fn(u32, u32) -> u32,
    ) -> Result<Tree, StructureError> {
        let labels = self
            .labels
            .iter()
            .enumerate()
            .map(|(v, &l)| f(v as u32, l))
            .collect();
        let children = self
            .left
            .iter()
            .zip(&self.right)
            .map(|(&l, &r)| (l, r))
            .collect();
        Tree::with_names(alphabet, labels, children, self.names.clone())
    }

    pub fn to_structure(&self) -> Structure {
        let sig = tree_signature(&self.alphabet).expect("valid tree signature");
        let n = self.labels.len();
        let mut rels: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); sig.rels().len()];
        for v in 0..n as u32 {
            if let Some(l) = self.left(v) {
                rels[0].insert(vec![v, l]);
            }
            if let Some(r) = self.right(v) {
                rels[1].insert(vec![v, r]);
            }
            rels[2 + self.labels[v as usize] as usize].insert(vec![v]);
        }
        Structure::from_indexed(sig, StructureKind::Tree, self.names.clone(), rels)
            .expect("tree structure is valid by construction")
    }

    pub fn from_structure(s: &Structure) -> Result<Self, StructureError> {
        let fail = |msg: String| StructureError::NotATree("structure".into(), msg);
        let left_rel = s
            .tuples_by_name("left")
            .ok_or_else(|| fail("missing `left` relation".into()))?;
        let right_rel = s
            .tuples_by_name("right")
            .ok_or_else(|| fail("missing `right` relation".into()))?;
        let mut alphabet = Vec::new();
        let mut label_rels = Vec::new();
        for d in s.signature().rels() {
            if d.is_label {
                let sym = d
                    .name
                    .strip_prefix(LABEL_PREFIX)
                    .ok_or_else(|| fail(format!("label relation `{}` must be named {}<sym>", d.name, LABEL_PREFIX)))?;
                alphabet.push(sym.to_string());
                label_rels.push(s.signature().index_of(&d.name).unwrap());
            }
        }
        let n = s.size() as usize;
        let mut labels = vec![None; n];
        for (sym_idx, &rel) in label_rels.iter().enumerate() {
            for t in s.tuples(rel) {
                if labels[t[0] as usize].replace(sym_idx as u32).is_some() {
                    return Err(fail(format!(
                        "node `{}` carries more than one symbol",
                        s.element_name(t[0])
                    )));
                }
            }
        }
        let labels: Vec<u32> = labels
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or_else(|| fail(format!("node `{}` carries no symbol", s.element_name(v as u32)))))
            .collect::<Result<_, _>>()?;
        let mut children: Vec<(Option<u32>, Option<u32>)> = vec![(None, None); n];
        for t in left_rel {
            if children[t[0] as usize].0.replace(t[1]).is_some() {
                return Err(fail("node has two left children".into()));
            }
        }
        for t in right_rel {
            if children[t[0] as usize].1.replace(t[1]).is_some() {
                return Err(fail("node has two right children".into()));
            }
        }
        Tree::with_names(alphabet, labels, children, s.elements().to_vec())
    }
}

/// The signature of `alphabet`-labeled binary trees: `left`, `right`, and
/// one label predicate per symbol.
pub fn tree_signature(alphabet: &[String]) -> Result<Signature, StructureError> {
    let mut decls = vec![
        RelDecl {
            name: "left".into(),
            arity: 2,
            is_label: false,
        },
        RelDecl {
            name: "right".into(),
            arity: 2,
            is_label: false,
        },
    ];
    for sym in alphabet {
        decls.push(RelDecl {
            name: format!("{}{}", LABEL_PREFIX, sym),
            arity: 1,
            is_label: true,
        });
    }
    Signature::new(decls)
}
