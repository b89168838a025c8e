//! Rooted binary phylogenetic trees: networks without reticulations.

use crate::edit;
use crate::error::{Error, Result};
use crate::network::{Network, VertexId};

/// A structurally valid network with no reticulations. Wrapping keeps the
/// invariant: every constructor validates.
#[derive(Clone, Debug)]
pub struct PhyloTree {
    net: Network,
}

impl PhyloTree {
    pub fn from_network(net: Network) -> Result<PhyloTree> {
        net.ensure_valid()?;
        let r = net.reticulation_count();
        if r > 0 {
            return Err(Error::Param(format!(
                "not a tree: network has {r} reticulation(s)"
            )));
        }
        Ok(PhyloTree { net })
    }

    pub fn as_network(&self) -> &Network {
        &self.net
    }

    pub fn taxa(&self) -> Vec<&str> {
        self.net.taxa()
    }

    pub fn taxon_count(&self) -> usize {
        self.net.taxon_count()
    }

    pub fn leaf_of(&self, taxon: &str) -> Option<VertexId> {
        self.net.leaf_of(taxon)
    }

    pub fn root(&self) -> VertexId {
        self.net.root()
    }

    fn depth(&self, v: VertexId) -> usize {
        let mut d = 0;
        let mut cur = v;
        while self.net.in_degree(cur) == 1 {
            cur = self.net.sole_parent(cur);
            d += 1;
        }
        d
    }

    pub fn lca(&self, u: VertexId, v: VertexId) -> VertexId {
        let (mut u, mut v) = (u, v);
        let (mut du, mut dv) = (self.depth(u), self.depth(v));
        while du > dv {
            u = self.net.sole_parent(u);
            du -= 1;
        }
        while dv > du {
            v = self.net.sole_parent(v);
            dv -= 1;
        }
        while u != v {
            u = self.net.sole_parent(u);
            v = self.net.sole_parent(v);
        }
        u
    }

    /// Does this tree display the rooted triple `xy|z`, that is, do `x` and
    /// `y` meet strictly below the meeting point with `z`?
    pub fn displays_triple(&self, x: &str, y: &str, z: &str) -> Result<bool> {
        if x == y || y == z || x == z {
            return Err(Error::Param(format!(
                "rooted triple needs three distinct taxa, got `{x}`, `{y}`, `{z}`"
            )));
        }
        let lx = self
            .leaf_of(x)
            .ok_or_else(|| Error::UnknownTaxon(x.to_string()))?;
        let ly = self
            .leaf_of(y)
            .ok_or_else(|| Error::UnknownTaxon(y.to_string()))?;
        let lz = self
            .leaf_of(z)
            .ok_or_else(|| Error::UnknownTaxon(z.to_string()))?;
        let meet_xy = self.lca(lx, ly);
        let meet_xz = self.lca(lx, lz);
        // Both meeting points are ancestors of x, hence comparable; deeper
        // means strictly below.
        Ok(self.depth(meet_xy) > self.depth(meet_xz))
    }

    pub fn delete_leaf(&self, taxon: &str) -> Result<PhyloTree> {
        let net = edit::delete_leaf_tidy(&self.net, taxon)?;
        PhyloTree::from_network(net)
    }

    /// Canonical single-line Newick form: children ordered by their smallest
    /// descendant taxon, no whitespace, terminated by `;`. Equal strings
    /// exactly characterise label-isomorphic trees.
    pub fn canonical_newick(&self) -> String {
        fn canon(net: &Network, v: VertexId) -> (String, String) {
            if net.is_leaf(v) {
                let l = net.label(v).unwrap_or_default().to_string();
                return (l.clone(), l);
            }
            let mut parts: Vec<(String, String)> = net
                .children(v)
                .iter()
                .map(|&c| canon(net, c))
                .collect();
            parts.sort();
            let min = parts[0].0.clone();
            let text = format!(
                "({})",
                parts
                    .iter()
                    .map(|(_, t)| t.as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            (min, text)
        }
        let (_, text) = canon(&self.net, self.net.root());
        format!("{text};")
    }
}

/// Label-respecting equality of trees, by canonical form.
pub fn tree_equal(t1: &PhyloTree, t2: &PhyloTree) -> bool {
    t1.canonical_newick() == t2.canonical_newick()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;

    fn tree(arcs: &[(&str, &str)]) -> PhyloTree {
        // Build a tree from (parent, child) name pairs; names with letters
        // only are taxa if they never appear as a parent.
        let mut b = NetworkBuilder::new();
        let mut ids = std::collections::HashMap::new();
        let parents: std::collections::HashSet<&str> =
            arcs.iter().map(|&(p, _)| p).collect();
        for &(p, c) in arcs {
            for name in [p, c] {
                if !ids.contains_key(name) {
                    let label = if parents.contains(name) { None } else { Some(name) };
                    ids.insert(name, b.add_vertex(label));
                }
            }
        }
        for &(p, c) in arcs {
            b.add_arc(ids[p], ids[c]);
        }
        PhyloTree::from_network(b.build()).unwrap()
    }

    fn caterpillar_xyz() -> PhyloTree {
        // ((x,y),z)
        tree(&[("r", "s"), ("r", "z"), ("s", "x"), ("s", "y")])
    }

    #[test]
    fn canonical_newick_sorts_children() {
        let t1 = caterpillar_xyz();
        let t2 = tree(&[("r", "z"), ("r", "s"), ("s", "y"), ("s", "x")]);
        assert_eq!(t1.canonical_newick(), "((x,y),z);");
        assert_eq!(t2.canonical_newick(), "((x,y),z);");
        assert!(tree_equal(&t1, &t2));
    }

    #[test]
    fn rooted_triples() {
        let t = caterpillar_xyz();
        assert!(t.displays_triple("x", "y", "z").unwrap());
        assert!(t.displays_triple("y", "x", "z").unwrap());
        assert!(!t.displays_triple("x", "z", "y").unwrap());
        assert!(!t.displays_triple("y", "z", "x").unwrap());
    }

    #[test]
    fn triple_args_checked() {
        let t = caterpillar_xyz();
        assert!(t.displays_triple("x", "x", "z").is_err());
        assert!(t.displays_triple("x", "y", "w").is_err());
    }

    #[test]
    fn delete_leaf_contracts() {
        let t = caterpillar_xyz();
        let t2 = t.delete_leaf("y").unwrap();
        assert_eq!(t2.canonical_newick(), "(x,z);");
        let t3 = t2.delete_leaf("z").unwrap();
        assert_eq!(t3.canonical_newick(), "x;");
    }

    #[test]
    fn network_with_reticulation_is_not_a_tree() {
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
        assert!(PhyloTree::from_network(b.build()).is_err());
    }
}
