//! Rooted phylogenetic networks on a fixed taxon set.
//!
//! A network is a rooted acyclic digraph without parallel arcs in which the
//! root has out-degree 2 (or the network is a single labeled vertex), every
//! leaf has in-degree 1 and carries a taxon label, every other tree vertex
//! has in-degree 1 and out-degree 2, and every reticulation has in-degree 2
//! and out-degree 1. Vertices are dense indices; parent and child lists keep
//! insertion order, which all deterministic tie-breaking builds on.

use std::collections::BTreeMap;
use std::fmt;

/// Dense vertex index into a [`Network`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Coarse vertex role, derived from degrees on a structurally valid network.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VertexKind {
    Root,
    Leaf,
    TreeVertex,
    Reticulation,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Vertex {
    pub(crate) parents: Vec<VertexId>,
    pub(crate) children: Vec<VertexId>,
    pub(crate) label: Option<String>,
}

/// Immutable rooted network. Construct through [`NetworkBuilder`] or a parser;
/// structural edits go through the tidy operations in [`crate::edit`], which
/// return fresh, re-compacted networks.
#[derive(Clone, Debug)]
pub struct Network {
    verts: Vec<Vertex>,
    root: VertexId,
    /// Taxon label -> leaf vertex, sorted by label.
    taxa: BTreeMap<String, VertexId>,
}

/// One structural rule violation found by [`Network::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoRoot,
    MultipleRoots(Vec<VertexId>),
    RootOutDegree(VertexId, usize),
    BadDegrees(VertexId, usize, usize),
    UnlabeledLeaf(VertexId),
    LabeledInternal(VertexId),
    ParallelArc(VertexId, VertexId),
    DuplicateTaxon(String),
    Cycle(Vec<VertexId>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRoot => write!(f, "no vertex of in-degree 0"),
            Violation::MultipleRoots(vs) => {
                write!(f, "multiple vertices of in-degree 0:")?;
                for v in vs {
                    write!(f, " {v}")?;
                }
                Ok(())
            }
            Violation::RootOutDegree(v, d) => {
                write!(f, "root {v} has out-degree {d}, expected 2")
            }
            Violation::BadDegrees(v, din, dout) => {
                write!(f, "vertex {v} has in-degree {din} and out-degree {dout}")
            }
            Violation::UnlabeledLeaf(v) => write!(f, "leaf {v} has no taxon label"),
            Violation::LabeledInternal(v) => {
                write!(f, "internal vertex {v} carries a taxon label")
            }
            Violation::ParallelArc(u, v) => write!(f, "parallel arcs from {u} to {v}"),
            Violation::DuplicateTaxon(t) => write!(f, "taxon `{t}` labels more than one leaf"),
            Violation::Cycle(vs) => {
                write!(f, "directed cycle through")?;
                for v in vs {
                    write!(f, " {v}")?;
                }
                Ok(())
            }
        }
    }
}

impl Network {
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn arc_count(&self) -> usize {
        self.verts.iter().map(|v| v.children.len()).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.verts.len() as u32).map(VertexId)
    }

    /// Arcs in (tail id, stored child order) order.
    pub fn arcs(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.arc_count());
        for v in self.vertices() {
            for &c in self.children(v) {
                out.push((v, c));
            }
        }
        out
    }

    pub fn parents(&self, v: VertexId) -> &[VertexId] {
        &self.verts[v.index()].parents
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.verts[v.index()].children
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.parents(v).len()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.children(v).len()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.verts[v.index()].label.as_deref()
    }

    /// The single parent of a leaf or tree vertex.
    pub fn sole_parent(&self, v: VertexId) -> VertexId {
        debug_assert_eq!(self.in_degree(v), 1, "{v} does not have exactly one parent");
        self.parents(v)[0]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.out_degree(v) == 0
    }

    pub fn is_reticulation(&self, v: VertexId) -> bool {
        self.in_degree(v) == 2
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        if self.in_degree(v) == 0 {
            VertexKind::Root
        } else if self.out_degree(v) == 0 {
            VertexKind::Leaf
        } else if self.in_degree(v) == 2 {
            VertexKind::Reticulation
        } else {
            VertexKind::TreeVertex
        }
    }

    pub fn reticulations(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_reticulation(v)).collect()
    }

    pub fn reticulation_count(&self) -> usize {
        self.vertices().filter(|&v| self.is_reticulation(v)).count()
    }

    pub fn has_arc(&self, tail: VertexId, head: VertexId) -> bool {
        self.children(tail).contains(&head)
    }

    pub fn taxon_count(&self) -> usize {
        self.taxa.len()
    }

    /// Taxon labels in sorted order.
    pub fn taxa(&self) -> Vec<&str> {
        self.taxa.keys().map(|s| s.as_str()).collect()
    }

    pub fn leaf_of(&self, taxon: &str) -> Option<VertexId> {
        self.taxa.get(taxon).copied()
    }

    /// All structural rule violations, in a deterministic order. Empty means
    /// the network is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.verts.len();

        let roots: Vec<VertexId> = self.vertices().filter(|&v| self.in_degree(v) == 0).collect();
        match roots.len() {
            0 => out.push(Violation::NoRoot),
            1 => {}
            _ => out.push(Violation::MultipleRoots(roots.clone())),
        }

        if n == 1 {
            let v = VertexId(0);
            if self.out_degree(v) == 0 {
                if self.label(v).is_none() {
                    out.push(Violation::UnlabeledLeaf(v));
                }
                return out;
            }
            // Fall through: a single vertex with arcs is caught below.
        }

        for v in self.vertices() {
            let din = self.in_degree(v);
            let dout = self.out_degree(v);
            let labeled = self.label(v).is_some();
            match (din, dout) {
                (0, d) => {
                    if d != 2 {
                        out.push(Violation::RootOutDegree(v, d));
                    }
                    if labeled {
                        out.push(Violation::LabeledInternal(v));
                    }
                }
                (1, 0) => {
                    if !labeled {
                        out.push(Violation::UnlabeledLeaf(v));
                    }
                }
                (1, 2) | (2, 1) => {
                    if labeled {
                        out.push(Violation::LabeledInternal(v));
                    }
                }
                _ => out.push(Violation::BadDegrees(v, din, dout)),
            }
        }

        for v in self.vertices() {
            let mut seen = self.children(v).to_vec();
            seen.sort();
            for w in seen.windows(2) {
                if w[0] == w[1] {
                    out.push(Violation::ParallelArc(v, w[0]));
                }
            }
        }

        let mut label_counts: BTreeMap<&str, usize> = BTreeMap::new();
        for v in self.vertices() {
            if let Some(l) = self.label(v) {
                *label_counts.entry(l).or_insert(0) += 1;
            }
        }
        for (l, c) in label_counts {
            if c > 1 {
                out.push(Violation::DuplicateTaxon(l.to_string()));
            }
        }

        // Kahn peel; leftover vertices lie on or below a directed cycle.
        let mut indeg: Vec<usize> = self.vertices().map(|v| self.in_degree(v)).collect();
        let mut queue: Vec<VertexId> =
            self.vertices().filter(|v| indeg[v.index()] == 0).collect();
        let mut seen = 0usize;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &c in self.children(v) {
                indeg[c.index()] -= 1;
                if indeg[c.index()] == 0 {
                    queue.push(c);
                }
            }
        }
        if seen != n {
            let stuck: Vec<VertexId> =
                self.vertices().filter(|v| indeg[v.index()] > 0).collect();
            out.push(Violation::Cycle(stuck));
        }

        out
    }

    pub fn ensure_valid(&self) -> crate::error::Result<()> {
        let vs = self.validate();
        if vs.is_empty() {
            Ok(())
        } else {
            Err(crate::error::Error::InvalidNetwork(vs))
        }
    }

    pub(crate) fn verts(&self) -> &[Vertex] {
        &self.verts
    }

    /// Assemble a network from raw parts, re-compacting ids so that they
    /// follow DFS first-appearance order from the root (children visited in
    /// stored order). Unreachable vertices keep their relative order after
    /// all reachable ones, so validation can still report on them.
    pub(crate) fn assemble(verts: Vec<Vertex>, root_hint: Option<VertexId>) -> Network {
        let n = verts.len();
        let root_old = root_hint
            .or_else(|| {
                (0..n as u32)
                    .map(VertexId)
                    .find(|v| verts[v.index()].parents.is_empty())
            })
            .unwrap_or(VertexId(0));

        let mut order: Vec<VertexId> = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        if n > 0 {
            let mut stack = vec![root_old];
            while let Some(v) = stack.pop() {
                if seen[v.index()] {
                    continue;
                }
                seen[v.index()] = true;
                order.push(v);
                for &c in verts[v.index()].children.iter().rev() {
                    if !seen[c.index()] {
                        stack.push(c);
                    }
                }
            }
        }
        for (i, &hit) in seen.iter().enumerate() {
            if !hit {
                order.push(VertexId(i as u32));
            }
        }

        let mut new_id = vec![VertexId(0); n];
        for (new, &old) in order.iter().enumerate() {
            new_id[old.index()] = VertexId(new as u32);
        }

        let mut new_verts: Vec<Vertex> = Vec::with_capacity(n);
        for &old in &order {
            let v = &verts[old.index()];
            new_verts.push(Vertex {
                parents: v.parents.iter().map(|&p| new_id[p.index()]).collect(),
                children: v.children.iter().map(|&c| new_id[c.index()]).collect(),
                label: v.label.clone(),
            });
        }

        let mut taxa = BTreeMap::new();
        for (i, v) in new_verts.iter().enumerate() {
            if let Some(l) = &v.label {
                taxa.entry(l.clone()).or_insert(VertexId(i as u32));
            }
        }

        Network {
            verts: new_verts,
            root: if n > 0 { new_id[root_old.index()] } else { VertexId(0) },
            taxa,
        }
    }
}

/// Incremental construction of a [`Network`]. No validation happens here;
/// call [`Network::validate`] on the result.
#[derive(Default)]
pub struct NetworkBuilder {
    verts: Vec<Vertex>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: Option<&str>) -> VertexId {
        let id = VertexId(self.verts.len() as u32);
        self.verts.push(Vertex {
            parents: Vec::new(),
            children: Vec::new(),
            label: label.map(str::to_string),
        });
        id
    }

    pub fn add_arc(&mut self, tail: VertexId, head: VertexId) {
        self.verts[tail.index()].children.push(head);
        self.verts[head.index()].parents.push(tail);
    }

    pub fn build(self) -> Network {
        Network::assemble(self.verts, None)
    }

    /// Build, treating `root` as the intended root even if other parentless
    /// vertices exist (validation will still report those).
    pub(crate) fn build_rooted(self, root: VertexId) -> Network {
        Network::assemble(self.verts, Some(root))
    }
}
