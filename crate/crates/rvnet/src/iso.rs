//! Label-respecting isomorphism between networks.
//!
//! Two networks are considered equal when there is a bijection of vertices
//! that maps root to root, preserves arcs, and maps every labeled leaf to
//! the leaf with the same label. Used to check that parsing a written file
//! reproduces the original network regardless of internal vertex numbering.

use crate::network::{Network, VertexId};

struct Matcher<'a> {
    a: &'a Network,
    b: &'a Network,
    fwd: Vec<Option<VertexId>>,
    bwd: Vec<Option<VertexId>>,
    trail: Vec<VertexId>,
}

impl<'a> Matcher<'a> {
    fn compatible(&self, u: VertexId, v: VertexId) -> bool {
        self.a.in_degree(u) == self.b.in_degree(v)
            && self.a.out_degree(u) == self.b.out_degree(v)
            && self.a.label(u) == self.b.label(v)
    }

    fn bind(&mut self, u: VertexId, v: VertexId) {
        self.fwd[u.0 as usize] = Some(v);
        self.bwd[v.0 as usize] = Some(u);
        self.trail.push(u);
    }

    fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let u = self.trail.pop().expect("trail entry");
            let v = self.fwd[u.0 as usize].take().expect("bound pair");
            self.bwd[v.0 as usize] = None;
        }
    }

    fn try_match(&mut self, u: VertexId, v: VertexId) -> bool {
        if let Some(mapped) = self.fwd[u.0 as usize] {
            return mapped == v;
        }
        if self.bwd[v.0 as usize].is_some() || !self.compatible(u, v) {
            return false;
        }
        let mark = self.trail.len();
        self.bind(u, v);
        let ca = self.a.children(u).to_vec();
        let cb = self.b.children(v).to_vec();
        debug_assert_eq!(ca.len(), cb.len());
        if self.match_children(&ca, &cb) {
            return true;
        }
        self.rollback(mark);
        false
    }

    fn match_children(&mut self, ca: &[VertexId], cb: &[VertexId]) -> bool {
        match ca.len() {
            0 => true,
            1 => self.try_match(ca[0], cb[0]),
            2 => {
                let mark = self.trail.len();
                if self.try_match(ca[0], cb[0]) && self.try_match(ca[1], cb[1]) {
                    return true;
                }
                self.rollback(mark);
                if self.try_match(ca[0], cb[1]) && self.try_match(ca[1], cb[0]) {
                    return true;
                }
                self.rollback(mark);
                false
            }
            _ => false,
        }
    }
}

/// Test whether two networks are label-respecting isomorphic.
pub fn isomorphic(a: &Network, b: &Network) -> bool {
    if a.vertex_count() != b.vertex_count()
        || a.arc_count() != b.arc_count()
        || a.reticulation_count() != b.reticulation_count()
        || a.taxa() != b.taxa()
    {
        return false;
    }
    let mut m = Matcher {
        a,
        b,
        fwd: vec![None; a.vertex_count()],
        bwd: vec![None; b.vertex_count()],
        trail: Vec::new(),
    };
    m.try_match(a.root(), b.root())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enewick::parse_enewick;

    #[test]
    fn same_network_different_child_order() {
        let a = parse_enewick("((x,(z)#H1),(y,#H1));").unwrap();
        let b = parse_enewick("((#H1,y),((z)#H1,x));").unwrap();
        assert!(isomorphic(&a, &b));
    }

    #[test]
    fn hybrid_tag_numbers_do_not_matter() {
        let a = parse_enewick("((x,(z)#H1),(y,#H1));").unwrap();
        let b = parse_enewick("((x,(z)#H7),(y,#H7));").unwrap();
        assert!(isomorphic(&a, &b));
    }

    #[test]
    fn different_topology_rejected() {
        let a = parse_enewick("((x,y),z);").unwrap();
        let b = parse_enewick("((x,z),y);").unwrap();
        assert!(!isomorphic(&a, &b));
    }

    #[test]
    fn hybrid_definition_site_is_irrelevant() {
        let a = parse_enewick("((x,(z)#H1),(y,#H1));").unwrap();
        let b = parse_enewick("((y,(z)#H1),(x,#H1));").unwrap();
        assert!(isomorphic(&a, &b));
    }

    #[test]
    fn label_swap_rejected() {
        let a = parse_enewick("(((x,y),z),w);").unwrap();
        let b = parse_enewick("(((x,y),w),z);").unwrap();
        assert!(!isomorphic(&a, &b));
    }

    #[test]
    fn hybrid_child_identity_matters() {
        let a = parse_enewick("((x,(z)#H1),(y,#H1));").unwrap();
        let b = parse_enewick("((z,(x)#H1),(y,#H1));").unwrap();
        assert!(!isomorphic(&a, &b));
    }
}
