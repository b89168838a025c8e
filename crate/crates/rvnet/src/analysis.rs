//! Ancestry, verifier, and tree-path tables, plus the key-vertex finders.
//!
//! A leaf `x` verifies a vertex `v` when every path from the root to `x`
//! passes through `v`. A network is reticulation-visible when every
//! reticulation is verified by at least one leaf. The containment engine
//! leans on two derived vertices: `v_x`, the reticulation closest to the
//! root whose verifier set is exactly `{x}` (the leaf itself when none
//! exists), and `rho_xy`, the vertex furthest from the root verified by both
//! `x` and `y`.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::network::{Network, VertexId};

/// Precomputed relation tables for one network. Rebuild after every edit;
/// vertex ids are not stable across edits.
pub struct Tables {
    taxa: Vec<String>,
    leaf_vertex: Vec<VertexId>,
    /// Proper ancestors, indexed by vertex.
    anc: Vec<FixedBitSet>,
    /// Proper descendants, indexed by vertex.
    desc: Vec<FixedBitSet>,
    /// Verifying taxa (bits are taxon indices), indexed by vertex.
    verif: Vec<FixedBitSet>,
    /// Vertices reachable by paths that avoid reticulations after the start
    /// vertex (start excluded), indexed by vertex.
    treepath: Vec<FixedBitSet>,
    rets: Vec<VertexId>,
}

impl Tables {
    pub fn build(net: &Network) -> Result<Tables> {
        let n = net.vertex_count();
        let taxa: Vec<String> = net.taxa().iter().map(|s| s.to_string()).collect();
        let leaf_vertex: Vec<VertexId> = taxa
            .iter()
            .map(|t| net.leaf_of(t).expect("taxon index out of sync"))
            .collect();

        let topo = topo_order(net)?;

        let mut anc = vec![FixedBitSet::with_capacity(n); n];
        for &v in &topo {
            for &c in net.children(v) {
                let (av, ac) = two_mut(&mut anc, v.index(), c.index());
                ac.union_with(av);
                ac.insert(v.index());
            }
        }
        let mut desc = vec![FixedBitSet::with_capacity(n); n];
        for &v in topo.iter().rev() {
            for &c in net.children(v) {
                let (dv, dc) = two_mut(&mut desc, v.index(), c.index());
                dv.union_with(dc);
                dv.insert(c.index());
            }
        }

        let nt = taxa.len();
        let mut verif = vec![FixedBitSet::with_capacity(nt); n];
        let mut reached = FixedBitSet::with_capacity(n);
        for v in net.vertices() {
            reached.clear();
            if v != net.root() {
                let mut stack = vec![net.root()];
                reached.insert(net.root().index());
                while let Some(w) = stack.pop() {
                    for &c in net.children(w) {
                        if c != v && !reached.contains(c.index()) {
                            reached.insert(c.index());
                            stack.push(c);
                        }
                    }
                }
            }
            let row = &mut verif[v.index()];
            for (t, &leaf) in leaf_vertex.iter().enumerate() {
                if !reached.contains(leaf.index()) {
                    row.insert(t);
                }
            }
        }

        let mut treepath = vec![FixedBitSet::with_capacity(n); n];
        for v in net.vertices() {
            let row = &mut treepath[v.index()];
            let mut stack = vec![v];
            while let Some(w) = stack.pop() {
                for &c in net.children(w) {
                    if !net.is_reticulation(c) && !row.contains(c.index()) {
                        row.insert(c.index());
                        stack.push(c);
                    }
                }
            }
        }

        Ok(Tables {
            taxa,
            leaf_vertex,
            anc,
            desc,
            verif,
            treepath,
            rets: net.reticulations(),
        })
    }

    pub fn taxa(&self) -> &[String] {
        &self.taxa
    }

    pub fn taxon_index(&self, taxon: &str) -> Option<usize> {
        self.taxa.binary_search_by(|t| t.as_str().cmp(taxon)).ok()
    }

    pub fn leaf_vertex(&self, taxon_idx: usize) -> VertexId {
        self.leaf_vertex[taxon_idx]
    }

    pub fn reticulations(&self) -> &[VertexId] {
        &self.rets
    }

    /// Is `u` a proper ancestor of `v`?
    pub fn is_anc(&self, u: VertexId, v: VertexId) -> bool {
        self.anc[v.index()].contains(u.index())
    }

    pub fn is_anc_eq(&self, u: VertexId, v: VertexId) -> bool {
        u == v || self.is_anc(u, v)
    }

    pub fn comparable(&self, u: VertexId, v: VertexId) -> bool {
        self.is_anc_eq(u, v) || self.is_anc(v, u)
    }

    pub fn proper_descendants(&self, v: VertexId) -> &FixedBitSet {
        &self.desc[v.index()]
    }

    /// Does taxon `t` verify vertex `v`?
    pub fn verifies(&self, t: usize, v: VertexId) -> bool {
        self.verif[v.index()].contains(t)
    }

    pub fn verifier_set(&self, v: VertexId) -> &FixedBitSet {
        &self.verif[v.index()]
    }

    pub fn smallest_verifier(&self, v: VertexId) -> Option<usize> {
        self.verif[v.index()].ones().next()
    }

    pub fn is_visible(&self, v: VertexId) -> bool {
        self.verif[v.index()].count_ones(..) > 0
    }

    /// Vertices reachable from `v` without passing through a reticulation
    /// strictly after `v`.
    pub fn treepath_set(&self, v: VertexId) -> &FixedBitSet {
        &self.treepath[v.index()]
    }
}

fn two_mut<T>(xs: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    debug_assert_ne!(i, j);
    if i < j {
        let (a, b) = xs.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (a, b) = xs.split_at_mut(i);
        (&mut b[0], &mut a[j])
    }
}

fn topo_order(net: &Network) -> Result<Vec<VertexId>> {
    let n = net.vertex_count();
    let mut indeg: Vec<usize> = net.vertices().map(|v| net.in_degree(v)).collect();
    let mut queue: Vec<VertexId> = net.vertices().filter(|v| indeg[v.index()] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop() {
        order.push(v);
        for &c in net.children(v) {
            indeg[c.index()] -= 1;
            if indeg[c.index()] == 0 {
                queue.push(c);
            }
        }
    }
    if order.len() != n {
        return Err(Error::Internal(
            "cannot order vertices: the graph has a directed cycle".into(),
        ));
    }
    Ok(order)
}

/// First reticulation (smallest id) with no verifying leaf, if any.
pub fn first_invisible_reticulation(net: &Network, tb: &Tables) -> Option<VertexId> {
    net.reticulations()
        .into_iter()
        .find(|&h| !tb.is_visible(h))
}

pub fn is_reticulation_visible(net: &Network, tb: &Tables) -> bool {
    first_invisible_reticulation(net, tb).is_none()
}

/// The reticulation closest to the root whose verifier set is exactly
/// `{taxon}`, or the leaf itself when no such reticulation exists.
pub fn find_v(net: &Network, tb: &Tables, taxon: &str) -> Result<VertexId> {
    let t = tb
        .taxon_index(taxon)
        .ok_or_else(|| Error::UnknownTaxon(taxon.to_string()))?;
    let mut cands: Vec<VertexId> = Vec::new();
    for &h in tb.reticulations() {
        let set = tb.verifier_set(h);
        if set.count_ones(..) == 1 && set.contains(t) {
            cands.push(h);
        }
    }
    let _ = net;
    match cands.split_first() {
        None => Ok(tb.leaf_vertex(t)),
        Some((&first, rest)) => {
            let mut top = first;
            for &c in rest {
                if tb.is_anc(c, top) {
                    top = c;
                }
            }
            for &c in &cands {
                if !tb.is_anc_eq(top, c) {
                    return Err(Error::Internal(format!(
                        "reticulations verified only by `{taxon}` do not form a chain: {top} and {c} are non-comparable"
                    )));
                }
            }
            Ok(top)
        }
    }
}

/// The vertex furthest from the root verified by both taxa. Always exists:
/// the root is verified by every taxon.
pub fn find_rho(net: &Network, tb: &Tables, a: &str, b: &str) -> Result<VertexId> {
    let ta = tb
        .taxon_index(a)
        .ok_or_else(|| Error::UnknownTaxon(a.to_string()))?;
    let tber = tb
        .taxon_index(b)
        .ok_or_else(|| Error::UnknownTaxon(b.to_string()))?;
    let mut cands: Vec<VertexId> = net
        .vertices()
        .filter(|&v| tb.verifies(ta, v) && tb.verifies(tber, v))
        .collect();
    if cands.is_empty() {
        return Err(Error::Internal(format!(
            "no common verified vertex for `{a}` and `{b}` (the root should qualify)"
        )));
    }
    let mut bottom = cands[0];
    for &c in &cands[1..] {
        if tb.is_anc(bottom, c) {
            bottom = c;
        }
    }
    for c in cands.drain(..) {
        if !tb.is_anc_eq(c, bottom) {
            return Err(Error::Internal(format!(
                "vertices verified by both `{a}` and `{b}` do not form a chain: {bottom} and {c} are non-comparable"
            )));
        }
    }
    Ok(bottom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;

    /// Root -> {s, t}; s -> {x, h}; t -> {h, y}; h -> z.
    fn net1() -> Network {
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
        b.build()
    }

    #[test]
    fn ancestry_and_visibility() {
        let n = net1();
        let tb = Tables::build(&n).unwrap();
        let h = n.sole_parent(n.leaf_of("z").unwrap());
        let s = n.sole_parent(n.leaf_of("x").unwrap());
        assert!(n.is_reticulation(h));
        assert!(tb.is_anc(n.root(), h));
        assert!(tb.is_anc(s, h));
        assert!(!tb.is_anc(h, s));
        assert!(tb.is_anc_eq(h, h));
        assert!(is_reticulation_visible(&n, &tb));
    }

    #[test]
    fn verifier_sets() {
        let n = net1();
        let tb = Tables::build(&n).unwrap();
        let h = n.sole_parent(n.leaf_of("z").unwrap());
        let s = n.sole_parent(n.leaf_of("x").unwrap());
        let zi = tb.taxon_index("z").unwrap();
        let xi = tb.taxon_index("x").unwrap();
        let yi = tb.taxon_index("y").unwrap();
        // z verifies the reticulation (both routes to z pass it); x and y do not.
        assert!(tb.verifies(zi, h));
        assert!(!tb.verifies(xi, h));
        assert!(!tb.verifies(yi, h));
        // s is verified by x only.
        assert!(tb.verifies(xi, s));
        assert!(!tb.verifies(zi, s));
        // The root is verified by everyone.
        for t in 0..3 {
            assert!(tb.verifies(t, n.root()));
        }
    }

    #[test]
    fn key_vertices() {
        let n = net1();
        let tb = Tables::build(&n).unwrap();
        let h = n.sole_parent(n.leaf_of("z").unwrap());
        // The reticulation is verified exactly by z.
        assert_eq!(find_v(&n, &tb, "z").unwrap(), h);
        // No reticulation is verified exactly by x, so v_x is the leaf.
        assert_eq!(find_v(&n, &tb, "x").unwrap(), n.leaf_of("x").unwrap());
        // Deepest vertex verified by both x and y is the root; likewise for
        // x and z, since the route through t bypasses s.
        assert_eq!(find_rho(&n, &tb, "x", "y").unwrap(), n.root());
        assert_eq!(find_rho(&n, &tb, "x", "z").unwrap(), n.root());
    }

    #[test]
    fn rho_descends_below_root_when_paths_agree() {
        // Tree ((x,y),z): every path to x or y passes their common parent.
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
        let tb = Tables::build(&n).unwrap();
        let s_new = n.sole_parent(n.leaf_of("x").unwrap());
        assert_eq!(find_rho(&n, &tb, "x", "y").unwrap(), s_new);
        assert_eq!(find_rho(&n, &tb, "x", "z").unwrap(), n.root());
    }

    #[test]
    fn treepath_blocks_at_reticulations() {
        let n = net1();
        let tb = Tables::build(&n).unwrap();
        let s = n.sole_parent(n.leaf_of("x").unwrap());
        let h = n.sole_parent(n.leaf_of("z").unwrap());
        let x = n.leaf_of("x").unwrap();
        let set = tb.treepath_set(s);
        assert!(set.contains(x.index()));
        assert!(!set.contains(h.index()));
    }

    #[test]
    fn invisible_reticulation_detected() {
        // Stacked reticulations: h1 feeds only h2, and every leaf below h2
        // is also reachable around h1, so no leaf verifies h1.
        let mut b = NetworkBuilder::new();
        let r = b.add_vertex(None);
        let s = b.add_vertex(None);
        let t = b.add_vertex(None);
        let u = b.add_vertex(None);
        let h1 = b.add_vertex(None);
        let h2 = b.add_vertex(None);
        let x = b.add_vertex(Some("x"));
        let y = b.add_vertex(Some("y"));
        let z = b.add_vertex(Some("z"));
        b.add_arc(r, s);
        b.add_arc(r, t);
        b.add_arc(s, x);
        b.add_arc(s, h1);
        b.add_arc(t, h1);
        b.add_arc(t, u);
        b.add_arc(u, y);
        b.add_arc(u, h2);
        b.add_arc(h1, h2);
        b.add_arc(h2, z);
        let n = b.build();
        assert!(n.validate().is_empty());
        let tb = Tables::build(&n).unwrap();
        let h1_new = n
            .reticulations()
            .into_iter()
            .find(|&h| !tb.is_visible(h))
            .unwrap();
        assert_eq!(first_invisible_reticulation(&n, &tb), Some(h1_new));
        assert!(!is_reticulation_visible(&n, &tb));
        // The lower reticulation is verified by z.
        let h2_new = n.sole_parent(n.leaf_of("z").unwrap());
        let zi = tb.taxon_index("z").unwrap();
        assert!(tb.verifies(zi, h2_new));
    }
}
