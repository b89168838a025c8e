//! Extended Newick reading and writing.
//!
//! The dialect: a reticulation appears exactly twice, once as a definition
//! `(subtree)#H<k>` giving its single child and once as a bare reference
//! `#H<k>`. Leaf labels match `[A-Za-z0-9.|-][A-Za-z0-9_.|-]*` (underscores
//! allowed, but not first). Names on internal vertices are accepted and
//! ignored. No branch lengths. The parser only rejects malformed syntax;
//! structural problems (degrees, duplicate taxa, cycles) are left for
//! [`Network::validate`] so callers see them as network violations.
//!
//! The writer is canonical: children are ordered by their descendant taxa
//! (smallest first, ties broken by the full taxa list, then by subtree
//! closure size), hybrid tags are renumbered in discovery order of that
//! traversal, and the first encounter of a reticulation emits its
//! definition. Two label-isomorphic networks may still differ textually only
//! if they contain indistinguishable subnetworks; for trees the canonical
//! form is exact.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::network::{Network, NetworkBuilder, VertexId};
use crate::tree::PhyloTree;

fn is_label_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, b'_' | b'.' | b'|' | b'-')
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    b: NetworkBuilder,
    hybrids: HashMap<u64, VertexId>,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            s: s.as_bytes(),
            pos: 0,
            b: NetworkBuilder::new(),
            hybrids: HashMap::new(),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!(
                "expected `{}`, found {}",
                c as char,
                match self.peek() {
                    Some(d) => format!("`{}`", d as char),
                    None => "end of input".into(),
                }
            ))
        }
    }

    fn parse_name(&mut self) -> Result<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if is_label_char(c)) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a name");
        }
        let name = std::str::from_utf8(&self.s[start..self.pos])
            .expect("label chars are ascii")
            .to_string();
        if name.starts_with('_') {
            self.pos = start;
            return self.err(format!("name `{name}` may not start with an underscore"));
        }
        Ok(name)
    }

    /// Parse `#H<k>` with the leading `#` already peeked.
    fn parse_hybrid_tag(&mut self) -> Result<u64> {
        self.expect(b'#')?;
        self.expect(b'H')?;
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("hybrid tag `#H` needs digits");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("digits are ascii")
            .parse()
            .or_else(|_| self.err("hybrid tag number too large"))
    }

    fn hybrid_vertex(&mut self, tag: u64) -> VertexId {
        if let Some(&v) = self.hybrids.get(&tag) {
            v
        } else {
            let v = self.b.add_vertex(None);
            self.hybrids.insert(tag, v);
            v
        }
    }

    /// Parse one node and return its vertex.
    fn parse_node(&mut self) -> Result<VertexId> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut kids = vec![self.parse_node()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            kids.push(self.parse_node()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.err("expected `,` or `)`"),
                    }
                }
                self.skip_ws();
                // Optional internal name (ignored), optional hybrid tag.
                if matches!(self.peek(), Some(c) if is_label_char(c)) {
                    let _ignored = self.parse_name()?;
                }
                let v = if self.peek() == Some(b'#') {
                    let tag = self.parse_hybrid_tag()?;
                    self.hybrid_vertex(tag)
                } else {
                    self.b.add_vertex(None)
                };
                for k in kids {
                    self.b.add_arc(v, k);
                }
                Ok(v)
            }
            Some(b'#') => {
                let tag = self.parse_hybrid_tag()?;
                Ok(self.hybrid_vertex(tag))
            }
            Some(c) if is_label_char(c) => {
                let name = self.parse_name()?;
                if self.peek() == Some(b'#') {
                    // A named hybrid stub; the name is ignored like other
                    // internal names.
                    let tag = self.parse_hybrid_tag()?;
                    Ok(self.hybrid_vertex(tag))
                } else {
                    Ok(self.b.add_vertex(Some(&name)))
                }
            }
            Some(c) => self.err(format!("unexpected character `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn parse_toplevel(mut self) -> Result<Network> {
        let top = self.parse_node()?;
        self.skip_ws();
        self.expect(b';')?;
        self.skip_ws();
        if self.pos != self.s.len() {
            return self.err("trailing characters after `;`");
        }
        Ok(self.b.build_rooted(top))
    }
}

/// Parse an extended Newick string into a network. Syntax errors are
/// reported with byte positions; structural violations are reported by
/// validating the returned network.
pub fn parse_enewick(input: &str) -> Result<Network> {
    Parser::new(input).parse_toplevel()
}

/// Parse a plain Newick string into a tree. Reticulation syntax is accepted
/// by the reader but rejected here because the result must be a tree.
pub fn parse_newick(input: &str) -> Result<PhyloTree> {
    PhyloTree::from_network(parse_enewick(input)?)
}

/// Canonical plain Newick for a tree.
pub fn write_newick(tree: &PhyloTree) -> String {
    tree.canonical_newick()
}

/// Canonical extended Newick. Expects a structurally valid network.
pub fn write_enewick(net: &Network) -> String {
    let n = net.vertex_count();

    // Descendant taxa and closure sizes, bottom-up.
    let order = depth_first_postorder(net);
    let mut taxa_below: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut closure: Vec<usize> = vec![1; n];
    for &v in &order {
        let mut t: Vec<String> = Vec::new();
        if let Some(l) = net.label(v) {
            t.push(l.to_string());
        }
        let mut size = 1;
        for &c in net.children(v) {
            t.extend(taxa_below[c.index()].iter().cloned());
            size += closure[c.index()];
        }
        t.sort();
        t.dedup();
        taxa_below[v.index()] = t;
        closure[v.index()] = size;
    }

    let sorted_children = |v: VertexId| -> Vec<VertexId> {
        let mut kids = net.children(v).to_vec();
        kids.sort_by(|&x, &y| {
            taxa_below[x.index()]
                .cmp(&taxa_below[y.index()])
                .then(closure[x.index()].cmp(&closure[y.index()]))
                .then(x.cmp(&y))
        });
        kids
    };

    fn emit(
        net: &Network,
        v: VertexId,
        out: &mut String,
        tag_of: &mut HashMap<VertexId, usize>,
        next_tag: &mut usize,
        sorted_children: &dyn Fn(VertexId) -> Vec<VertexId>,
    ) {
        if net.is_reticulation(v) {
            if let Some(&k) = tag_of.get(&v) {
                out.push_str(&format!("#H{k}"));
                return;
            }
            let k = *next_tag;
            *next_tag += 1;
            tag_of.insert(v, k);
            out.push('(');
            let kids = sorted_children(v);
            for (i, c) in kids.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                emit(net, *c, out, tag_of, next_tag, sorted_children);
            }
            out.push_str(&format!(")#H{k}"));
            return;
        }
        if net.is_leaf(v) {
            out.push_str(net.label(v).unwrap_or(""));
            return;
        }
        out.push('(');
        let kids = sorted_children(v);
        for (i, c) in kids.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            emit(net, *c, out, tag_of, next_tag, sorted_children);
        }
        out.push(')');
    }

    let mut out = String::new();
    let mut tag_of = HashMap::new();
    let mut next_tag = 1usize;
    emit(
        net,
        net.root(),
        &mut out,
        &mut tag_of,
        &mut next_tag,
        &sorted_children,
    );
    out.push(';');
    out
}

fn depth_first_postorder(net: &Network) -> Vec<VertexId> {
    let n = net.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    // Iterative postorder over the DAG, visiting each vertex once.
    let mut stack: Vec<(VertexId, usize)> = vec![(net.root(), 0)];
    seen[net.root().index()] = true;
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        let kids = net.children(v);
        if *i < kids.len() {
            let c = kids[*i];
            *i += 1;
            if !seen[c.index()] {
                seen[c.index()] = true;
                stack.push((c, 0));
            }
        } else {
            order.push(v);
            stack.pop();
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_vertex() {
        let n = parse_enewick("x;").unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.vertex_count(), 1);
        assert_eq!(n.taxa(), vec!["x"]);
    }

    #[test]
    fn parse_tree() {
        let n = parse_enewick("((x,y),z);").unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.taxa(), vec!["x", "y", "z"]);
        assert_eq!(n.reticulation_count(), 0);
    }

    #[test]
    fn parse_network_with_hybrid() {
        let n = parse_enewick("((x,(z)#H1),(#H1,y));").unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.taxa(), vec!["x", "y", "z"]);
        assert_eq!(n.reticulation_count(), 1);
        let h = n.sole_parent(n.leaf_of("z").unwrap());
        assert!(n.is_reticulation(h));
    }

    #[test]
    fn hybrid_order_is_flexible() {
        // Reference before definition.
        let n = parse_enewick("((x,#H7),((z)#H7,y));").unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.reticulation_count(), 1);
    }

    #[test]
    fn canonical_write_round_trips() {
        let n = parse_enewick("((#H1,y),(x,(z)#H1));").unwrap();
        let s = write_enewick(&n);
        assert_eq!(s, "((x,(z)#H1),(y,#H1));");
        let n2 = parse_enewick(&s).unwrap();
        assert_eq!(write_enewick(&n2), s);
    }

    #[test]
    fn internal_names_are_ignored() {
        let n = parse_enewick("((x,y)s,z)root;").unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.taxa(), vec!["x", "y", "z"]);
    }

    #[test]
    fn whitespace_is_allowed_between_tokens() {
        let n = parse_enewick(" ( ( x , y ) , z ) ; ").unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.taxa(), vec!["x", "y", "z"]);
    }

    #[test]
    fn syntax_errors_report_positions() {
        for bad in ["x", "(x,);", "(x));", "_bad;", "(x,y)#H;", "x y;", ""] {
            match parse_enewick(bad) {
                Err(Error::Parse { .. }) => {}
                other => panic!("`{bad}` should be a parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn structural_problems_are_left_to_validate() {
        // A hybrid definition with two children parses but fails validation.
        let n = parse_enewick("(((x,y)#H1,z),#H1);").unwrap();
        assert!(!n.validate().is_empty());
        // A hybrid defined but never referenced has degree two.
        let n = parse_enewick("((x)#H1,y);").unwrap();
        assert!(!n.validate().is_empty());
    }

    #[test]
    fn newick_tree_interface() {
        let t = parse_newick("((x,y),z);").unwrap();
        assert_eq!(write_newick(&t), "((x,y),z);");
        assert!(parse_newick("((x,(z)#H1),(#H1,y));").is_err());
    }

    #[test]
    fn labels_allow_inner_underscores_and_punct() {
        let n = parse_enewick("((a_1,b.2),(c|3,d-4));").unwrap();
        assert_eq!(n.taxa(), vec!["a_1", "b.2", "c|3", "d-4"]);
    }
}
