//! Structural edits with cleanup.
//!
//! Every public operation copies the input network into a scratch workspace,
//! applies the requested deletions, then runs the tidy closure until nothing
//! changes: unlabeled childless vertices are removed, vertices with one
//! parent and one child are contracted away, a root left with a single child
//! is removed in favor of that child, and parallel arc pairs created by
//! contraction are collapsed to a single arc. The result is re-compacted so
//! vertex ids again follow DFS first-appearance order.

use crate::error::{Error, Result};
use crate::network::{Network, Vertex, VertexId};

/// Mutable scratch copy of a network. Ids are stable while editing; deleted
/// slots become `None` and disappear on [`Work::into_network`].
pub(crate) struct Work {
    verts: Vec<Option<Vertex>>,
    root: Option<VertexId>,
}

impl Work {
    pub(crate) fn from_network(net: &Network) -> Work {
        Work {
            verts: net.verts().iter().cloned().map(Some).collect(),
            root: Some(net.root()),
        }
    }

    fn live(&self, v: VertexId) -> bool {
        self.verts[v.index()].is_some()
    }

    fn ids(&self) -> Vec<VertexId> {
        (0..self.verts.len() as u32)
            .map(VertexId)
            .filter(|&v| self.live(v))
            .collect()
    }

    fn vert(&self, v: VertexId) -> &Vertex {
        self.verts[v.index()].as_ref().expect("deleted vertex")
    }

    fn vert_mut(&mut self, v: VertexId) -> &mut Vertex {
        self.verts[v.index()].as_mut().expect("deleted vertex")
    }

    fn in_degree(&self, v: VertexId) -> usize {
        self.vert(v).parents.len()
    }

    fn out_degree(&self, v: VertexId) -> usize {
        self.vert(v).children.len()
    }

    fn labeled(&self, v: VertexId) -> bool {
        self.vert(v).label.is_some()
    }

    /// Remove one occurrence of the arc. Errors if absent.
    pub(crate) fn delete_arc(&mut self, tail: VertexId, head: VertexId) -> Result<()> {
        let t = self.vert_mut(tail);
        match t.children.iter().position(|&c| c == head) {
            Some(i) => {
                t.children.remove(i);
            }
            None => return Err(Error::Edit(format!("no arc from {tail} to {head}"))),
        }
        let h = self.vert_mut(head);
        let i = h
            .parents
            .iter()
            .position(|&p| p == tail)
            .expect("arc lists out of sync");
        h.parents.remove(i);
        Ok(())
    }

    /// Remove a vertex and every arc incident to it.
    pub(crate) fn delete_vertex(&mut self, v: VertexId) {
        let Vertex { parents, children, .. } =
            self.verts[v.index()].take().expect("deleted vertex");
        for p in parents {
            if let Some(pv) = self.verts[p.index()].as_mut() {
                pv.children.retain(|&c| c != v);
            }
        }
        for c in children {
            if let Some(cv) = self.verts[c.index()].as_mut() {
                cv.parents.retain(|&p| p != v);
            }
        }
        if self.root == Some(v) {
            self.root = None;
        }
    }

    pub(crate) fn set_label(&mut self, v: VertexId, label: Option<String>) {
        self.vert_mut(v).label = label;
    }

    /// Splice out a vertex with exactly one parent and one child.
    fn contract(&mut self, v: VertexId) {
        debug_assert_eq!(self.in_degree(v), 1);
        debug_assert_eq!(self.out_degree(v), 1);
        let p = self.vert(v).parents[0];
        let c = self.vert(v).children[0];
        self.delete_vertex(v);
        self.vert_mut(p).children.push(c);
        self.vert_mut(c).parents.push(p);
    }

    /// Run the cleanup rules to a fixpoint. Each pass sweeps vertices in id
    /// order, so the rewrite sequence is deterministic.
    pub(crate) fn tidy(&mut self) -> Result<()> {
        let cap = (self.verts.len() + 2) * (self.verts.len() + 2);
        for _ in 0..cap {
            let mut changed = false;

            for v in self.ids() {
                if !self.labeled(v) && self.out_degree(v) == 0 {
                    self.delete_vertex(v);
                    changed = true;
                }
            }

            for v in self.ids() {
                if self.in_degree(v) == 1 && self.out_degree(v) == 1 {
                    debug_assert!(!self.labeled(v), "labeled vertex grew a child");
                    self.contract(v);
                    changed = true;
                }
            }

            if let Some(r) = self.root {
                if self.live(r) && self.in_degree(r) == 0 && self.out_degree(r) == 1 {
                    let c = self.vert(r).children[0];
                    self.delete_vertex(r);
                    self.root = Some(c);
                    changed = true;
                }
            }

            for v in self.ids() {
                let mut kids = self.vert(v).children.clone();
                kids.sort();
                kids.dedup();
                if kids.len() < self.out_degree(v) {
                    for &c in &kids {
                        let extra =
                            self.vert(v).children.iter().filter(|&&x| x == c).count() - 1;
                        for _ in 0..extra {
                            self.delete_arc(v, c)?;
                            changed = true;
                        }
                    }
                }
            }

            if !changed {
                return Ok(());
            }
        }
        Err(Error::Internal(
            "tidy failed to reach a fixpoint within the pass budget".into(),
        ))
    }

    pub(crate) fn into_network(self) -> Result<Network> {
        let root = match self.root {
            Some(r) if self.live(r) => r,
            _ => {
                return Err(Error::Internal(
                    "network lost its root during an edit".into(),
                ))
            }
        };
        // Squeeze out deleted slots, keeping relative order, then let
        // assemble re-sort ids by DFS.
        let n = self.verts.len();
        let mut new_id = vec![VertexId(0); n];
        let mut dense: Vec<Vertex> = Vec::new();
        for (i, slot) in self.verts.iter().enumerate() {
            if let Some(v) = slot {
                new_id[i] = VertexId(dense.len() as u32);
                dense.push(v.clone());
            }
        }
        for v in &mut dense {
            for p in &mut v.parents {
                *p = new_id[p.index()];
            }
            for c in &mut v.children {
                *c = new_id[c.index()];
            }
        }
        Ok(Network::assemble(dense, Some(new_id[root.index()])))
    }
}

/// Delete one arc whose head is a reticulation, then tidy. This is the only
/// arc deletion the containment engine performs; deleting a tree arc would
/// disconnect a taxon, so such requests are rejected.
pub fn delete_arc_tidy(net: &Network, tail: VertexId, head: VertexId) -> Result<Network> {
    if !net.has_arc(tail, head) {
        return Err(Error::Edit(format!("no arc from {tail} to {head}")));
    }
    if !net.is_reticulation(head) {
        return Err(Error::Edit(format!(
            "arc head {head} is not a reticulation (in-degree {})",
            net.in_degree(head)
        )));
    }
    let mut w = Work::from_network(net);
    w.delete_arc(tail, head)?;
    w.tidy()?;
    w.into_network()
}

/// Delete the leaf carrying `taxon`, then tidy. At least one other taxon
/// must remain.
pub fn delete_leaf_tidy(net: &Network, taxon: &str) -> Result<Network> {
    let leaf = net
        .leaf_of(taxon)
        .ok_or_else(|| Error::UnknownTaxon(taxon.to_string()))?;
    if net.taxon_count() < 2 {
        return Err(Error::Edit(format!(
            "cannot delete `{taxon}`: it is the only taxon"
        )));
    }
    let mut w = Work::from_network(net);
    w.delete_vertex(leaf);
    w.tidy()?;
    w.into_network()
}

/// Replace the cherry `{x, y}` by a single fresh leaf on their common
/// parent. Returns the new network and the fresh taxon label.
pub fn reduce_cherry(net: &Network, x: &str, y: &str) -> Result<(Network, String)> {
    let lx = net
        .leaf_of(x)
        .ok_or_else(|| Error::UnknownTaxon(x.to_string()))?;
    let ly = net
        .leaf_of(y)
        .ok_or_else(|| Error::UnknownTaxon(y.to_string()))?;
    if lx == ly {
        return Err(Error::Edit(format!("`{x}` and `{y}` are the same leaf")));
    }
    let px = net.sole_parent(lx);
    let py = net.sole_parent(ly);
    if px != py {
        return Err(Error::Edit(format!(
            "`{x}` and `{y}` do not form a cherry (parents {px} and {py})"
        )));
    }
    let fresh = {
        let mut k = 1usize;
        loop {
            let cand = format!("cherry{k}");
            if net.leaf_of(&cand).is_none() {
                break cand;
            }
            k += 1;
        }
    };
    let mut w = Work::from_network(net);
    w.delete_vertex(lx);
    w.delete_vertex(ly);
    w.set_label(px, Some(fresh.clone()));
    w.tidy()?;
    Ok((w.into_network()?, fresh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;

    /// Root -> {s, t}; s -> {x, h}; t -> {h, y}; h -> z.
    fn net1() -> (Network, VertexId, VertexId, VertexId) {
        let mut b = NetworkBuilder::new();
        let r = b.add_vertex(None);
        let s = b.add_vertex(None);
        let t = b.add_vertex(None);
        let h = b.add_vertex(None);
        let x = b.add_vertex(Some("x"));
        let y = b.add_vertex(Some("y"));
        let z = b.add_vertex(Some("z"));
        b.add_arc(r, s);
        b.add_arc(r, t);
        b.add_arc(s, x);
        b.add_arc(s, h);
        b.add_arc(t, h);
        b.add_arc(t, y);
        b.add_arc(h, z);
        let n = b.build();
        assert!(n.validate().is_empty());
        let s_new = n.sole_parent(n.leaf_of("x").unwrap());
        let t_new = n.sole_parent(n.leaf_of("y").unwrap());
        let h_new = n.sole_parent(n.leaf_of("z").unwrap());
        (n, s_new, t_new, h_new)
    }

    #[test]
    fn delete_reticulation_arc_and_tidy() {
        let (n, s, _t, h) = net1();
        let out = delete_arc_tidy(&n, s, h).unwrap();
        assert!(out.validate().is_empty());
        // Expected shape: (x,(y,z)).
        assert_eq!(out.taxa(), vec!["x", "y", "z"]);
        assert_eq!(out.vertex_count(), 5);
        assert_eq!(out.reticulation_count(), 0);
        let x = out.leaf_of("x").unwrap();
        let y = out.leaf_of("y").unwrap();
        let z = out.leaf_of("z").unwrap();
        assert_eq!(out.sole_parent(x), out.root());
        assert_eq!(out.sole_parent(y), out.sole_parent(z));
    }

    #[test]
    fn delete_leaf_and_tidy() {
        let (n, ..) = net1();
        let out = delete_leaf_tidy(&n, "z").unwrap();
        assert!(out.validate().is_empty());
        // Removing z starves the reticulation; both its parents contract away.
        assert_eq!(out.taxa(), vec!["x", "y"]);
        assert_eq!(out.vertex_count(), 3);
        let x = out.leaf_of("x").unwrap();
        let y = out.leaf_of("y").unwrap();
        assert_eq!(out.sole_parent(x), out.root());
        assert_eq!(out.sole_parent(y), out.root());
    }

    #[test]
    fn delete_arc_requires_reticulation_head() {
        let (n, s, ..) = net1();
        let x = n.leaf_of("x").unwrap();
        let err = delete_arc_tidy(&n, s, x).unwrap_err();
        assert!(err.to_string().contains("not a reticulation"));
    }

    #[test]
    fn delete_arc_requires_existing_arc() {
        let (n, _s, _t, h) = net1();
        let err = delete_arc_tidy(&n, n.root(), h).unwrap_err();
        assert!(err.to_string().contains("no arc"));
    }

    #[test]
    fn cannot_delete_last_taxon() {
        let mut b = NetworkBuilder::new();
        b.add_vertex(Some("only"));
        let n = b.build();
        assert!(delete_leaf_tidy(&n, "only").is_err());
    }

    #[test]
    fn reduce_cherry_relabels_parent() {
        let mut b = NetworkBuilder::new();
        let r = b.add_vertex(None);
        let s = b.add_vertex(None);
        let x = b.add_vertex(Some("x"));
        let y = b.add_vertex(Some("y"));
        let z = b.add_vertex(Some("z"));
        b.add_arc(r, s);
        b.add_arc(r, z);
        b.add_arc(s, x);
        b.add_arc(s, y);
        let n = b.build();
        let (out, fresh) = reduce_cherry(&n, "x", "y").unwrap();
        assert_eq!(fresh, "cherry1");
        assert!(out.validate().is_empty());
        assert_eq!(out.taxa(), vec!["cherry1", "z"]);
        assert_eq!(out.vertex_count(), 3);
    }

    #[test]
    fn reduce_cherry_rejects_non_cherry() {
        let (n, ..) = net1();
        assert!(reduce_cherry(&n, "x", "y").is_err());
    }

    #[test]
    fn reduce_cherry_picks_unused_fresh_label() {
        let mut b = NetworkBuilder::new();
        let r = b.add_vertex(None);
        let s = b.add_vertex(None);
        let x = b.add_vertex(Some("x"));
        let y = b.add_vertex(Some("y"));
        let z = b.add_vertex(Some("cherry1"));
        b.add_arc(r, s);
        b.add_arc(r, z);
        b.add_arc(s, x);
        b.add_arc(s, y);
        let n = b.build();
        let (_, fresh) = reduce_cherry(&n, "x", "y").unwrap();
        assert_eq!(fresh, "cherry2");
    }
}
