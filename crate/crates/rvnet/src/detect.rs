//! The containment decision procedure.
//!
//! Repeatedly pick the deepest cherry of the tree, decide one reduction
//! step through the case analysis, apply it to the network (and sometimes
//! the tree), and stop at a two-leaf tree or a definitive no. Every
//! intermediate network is revalidated; a visible network stays visible
//! through correct reductions, so any violation surfaces as `Internal`.

use crate::analysis::{is_reticulation_visible, Tables};
pub use crate::cases::{Action, CaseDecision};
use crate::cases::{cherry_sibling_case, easy_cases, leaf_sibling_case};
use crate::edit::{delete_arc_tidy, delete_leaf_tidy};
use crate::error::{Error, Result};
use crate::frame::{build_situation_frame, cherry_context};
use crate::network::{Network, VertexId};
use crate::tree::PhyloTree;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Yes => write!(f, "yes"),
            Answer::No => write!(f, "no"),
        }
    }
}

/// One decided reduction step, in the order they were applied.
pub struct TraceStep {
    pub label: &'static str,
    pub action: Action,
    /// Taxa remaining in the tree when the step was decided.
    pub taxa_before: usize,
    pub witness: String,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.label, self.action)
    }
}

pub struct Containment {
    pub answer: Answer,
    pub trace: Vec<TraceStep>,
}

/// The sibling subtree of the selected cherry: a single leaf or another
/// cherry.
pub enum Sibling {
    Leaf(String),
    Cherry(String, String),
}

pub struct Selection {
    pub a: String,
    pub b: String,
    pub sibling: Sibling,
}

fn internal(msg: String) -> Error {
    Error::Internal(msg)
}

/// Pick the deepest cherry of the tree; among equally deep cherries the one
/// containing the alphabetically smallest leaf. Requires at least three
/// taxa so the cherry has a sibling.
pub fn select_cherry(tree: &PhyloTree) -> Result<Selection> {
    let net = tree.as_network();
    let mut depth = vec![0usize; net.vertex_count()];
    let mut order = vec![net.root()];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &c in net.children(v) {
            depth[c.index()] = depth[v.index()] + 1;
            order.push(c);
        }
    }
    let leaf_pair = |p: VertexId| -> Option<(String, String)> {
        let ch = net.children(p);
        if ch.len() == 2 && ch.iter().all(|&c| net.is_leaf(c)) {
            let mut labels: Vec<&str> = ch.iter().map(|&c| net.label(c).unwrap()).collect();
            labels.sort_unstable();
            Some((labels[0].to_string(), labels[1].to_string()))
        } else {
            None
        }
    };
    let mut best: Option<(usize, String, String, VertexId)> = None;
    for v in net.vertices() {
        if let Some((a, b)) = leaf_pair(v) {
            let better = match &best {
                None => true,
                Some((d, a0, _, _)) => {
                    depth[v.index()] > *d || (depth[v.index()] == *d && a < *a0)
                }
            };
            if better {
                best = Some((depth[v.index()], a, b, v));
            }
        }
    }
    let (_, a, b, p) = best.ok_or_else(|| internal("a binary tree has no cherry".into()))?;
    if p == net.root() {
        return Err(internal("cherry selection needs at least three taxa".into()));
    }
    let g = net.sole_parent(p);
    let s = net
        .children(g)
        .iter()
        .copied()
        .find(|&c| c != p)
        .ok_or_else(|| internal(format!("{g} has no child besides the cherry")))?;
    let sibling = if net.is_leaf(s) {
        Sibling::Leaf(net.label(s).unwrap().to_string())
    } else {
        let (c, d) = leaf_pair(s).ok_or_else(|| {
            internal("the sibling of the deepest cherry is neither a leaf nor a cherry".into())
        })?;
        Sibling::Cherry(c, d)
    };
    Ok(Selection { a, b, sibling })
}

fn decide_step(net: &Network, tb: &Tables, tree: &PhyloTree) -> Result<CaseDecision> {
    let sel = select_cherry(tree)?;
    let cx = cherry_context(net, tb, &sel.a, &sel.b)?;
    if let Some(d) = easy_cases(net, tb, tree, &cx)? {
        return Ok(d);
    }
    match sel.sibling {
        Sibling::Leaf(c) => {
            let f = build_situation_frame(net, tb, &cx)?;
            leaf_sibling_case(net, tb, &cx, &f, &c)
        }
        Sibling::Cherry(c, d) => {
            let cd_cx = cherry_context(net, tb, &c, &d)?;
            if let Some(mut dec) = easy_cases(net, tb, tree, &cd_cx)? {
                dec.witness = format!("for sibling cherry {c},{d}: {}", dec.witness);
                return Ok(dec);
            }
            let ab_f = build_situation_frame(net, tb, &cx)?;
            let cd_f = build_situation_frame(net, tb, &cd_cx)?;
            if tb.is_anc(cd_cx.rho, cx.rho) {
                cherry_sibling_case(net, tb, &cd_cx, &cd_f, &cx, &ab_f, true)
            } else {
                cherry_sibling_case(net, tb, &cx, &ab_f, &cd_cx, &cd_f, false)
            }
        }
    }
}

/// Decide whether the network displays the tree, with the step-by-step
/// trace of reductions that led to the answer.
pub fn tree_containment(net: &Network, tree: &PhyloTree) -> Result<Containment> {
    net.ensure_valid()?;
    let mut net_taxa: Vec<String> = net.taxa().iter().map(|t| t.to_string()).collect();
    let mut tree_taxa: Vec<String> = tree.taxa().iter().map(|t| t.to_string()).collect();
    net_taxa.sort_unstable();
    tree_taxa.sort_unstable();
    if net_taxa != tree_taxa {
        return Err(Error::TaxaMismatch(format!(
            "network has {} taxa, tree has {}",
            net_taxa.len(),
            tree_taxa.len()
        )));
    }
    {
        let tb = Tables::build(net)?;
        if !is_reticulation_visible(net, &tb) {
            return Err(Error::NotVisible(
                "a reticulation is verified by no leaf".into(),
            ));
        }
    }

    let m0 = tree.taxon_count();
    let cap = 12 * m0 + 4;
    let mut net = net.clone();
    let mut tree = tree.clone();
    let mut trace = Vec::new();

    loop {
        let m = tree.taxon_count();
        if m <= 2 {
            trace.push(TraceStep {
                label: if m == 1 { "TrivialYes" } else { "TwoLeafYes" },
                action: Action::AnswerYes,
                taxa_before: m,
                witness: format!("{m} taxa left; any visible network displays this tree"),
            });
            return Ok(Containment {
                answer: Answer::Yes,
                trace,
            });
        }
        if trace.len() >= cap {
            return Err(internal(format!(
                "no terminal state after {} steps on {m0} starting taxa",
                trace.len()
            )));
        }
        let tb = Tables::build(&net)?;
        if !is_reticulation_visible(&net, &tb) {
            return Err(internal("a reduction left an unverified reticulation".into()));
        }
        let decision = decide_step(&net, &tb, &tree)?;
        let action = decision.action.clone();
        trace.push(TraceStep {
            label: decision.label,
            action: decision.action,
            taxa_before: m,
            witness: decision.witness,
        });
        match action {
            Action::AnswerNo { .. } => {
                return Ok(Containment {
                    answer: Answer::No,
                    trace,
                });
            }
            Action::AnswerYes => {
                return Ok(Containment {
                    answer: Answer::Yes,
                    trace,
                });
            }
            Action::DeleteArc { tail, head } => {
                net = delete_arc_tidy(&net, tail, head)
                    .map_err(|e| internal(format!("decided arc cannot be deleted: {e}")))?;
            }
            Action::DeleteLeaf { taxon } => {
                net = delete_leaf_tidy(&net, &taxon)
                    .map_err(|e| internal(format!("decided leaf cannot be deleted: {e}")))?;
                tree = tree
                    .delete_leaf(&taxon)
                    .map_err(|e| internal(format!("leaf missing from the tree: {e}")))?;
            }
            Action::ReduceCherry { .. } | Action::SwapCherries => {
                return Err(internal(format!(
                    "the driver never schedules `{action}` as a step"
                )));
            }
        }
        net.ensure_valid()
            .map_err(|e| internal(format!("reduction broke the network: {e}")))?;
    }
}

/// Convenience wrapper: just the yes/no answer.
pub fn displays(net: &Network, tree: &PhyloTree) -> Result<bool> {
    Ok(tree_containment(net, tree)?.answer == Answer::Yes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enewick::{parse_enewick, parse_newick};

    fn net1() -> Network {
        parse_enewick("((x,(z)#H1),(y,#H1));").unwrap()
    }

    #[test]
    fn golden_triple() {
        let net = net1();
        for (newick, expect) in [
            ("((x,z),y);", Answer::Yes),
            ("(x,(y,z));", Answer::Yes),
            ("((x,y),z);", Answer::No),
        ] {
            let tree = parse_newick(newick).unwrap();
            let out = tree_containment(&net, &tree).unwrap();
            assert_eq!(out.answer, expect, "{newick}");
            assert!(!out.trace.is_empty());
        }
    }

    #[test]
    fn selection_prefers_deepest_then_smallest() {
        let tree = parse_newick("((x,y),(z,w));").unwrap();
        let sel = select_cherry(&tree).unwrap();
        assert_eq!((sel.a.as_str(), sel.b.as_str()), ("w", "z"));
        match sel.sibling {
            Sibling::Cherry(c, d) => assert_eq!((c.as_str(), d.as_str()), ("x", "y")),
            Sibling::Leaf(_) => panic!("expected a cherry sibling"),
        }
        let tree = parse_newick("(((a,b),c),d);").unwrap();
        let sel = select_cherry(&tree).unwrap();
        assert_eq!((sel.a.as_str(), sel.b.as_str()), ("a", "b"));
        match sel.sibling {
            Sibling::Leaf(c) => assert_eq!(c, "c"),
            Sibling::Cherry(..) => panic!("expected a leaf sibling"),
        }
    }

    #[test]
    fn taxa_mismatch_is_an_error() {
        let net = net1();
        let tree = parse_newick("((x,w),y);").unwrap();
        assert!(matches!(
            tree_containment(&net, &tree),
            Err(Error::TaxaMismatch(_))
        ));
    }

    #[test]
    fn invisible_network_is_rejected() {
        let net = crate::gen::fixture_stacked_invisible();
        let tree = parse_newick("((x,y),z);").unwrap();
        assert!(matches!(
            tree_containment(&net, &tree),
            Err(Error::NotVisible(_))
        ));
    }

    #[test]
    fn traces_are_deterministic_and_bounded() {
        let net = crate::gen::extremal_network(4).unwrap();
        let tree = crate::gen::sample_displayed_tree(&net, 7).unwrap();
        let m0 = tree.taxon_count();
        let render = |out: &Containment| -> Vec<String> {
            out.trace.iter().map(|s| s.to_string()).collect()
        };
        let one = tree_containment(&net, &tree).unwrap();
        let two = tree_containment(&net, &tree).unwrap();
        assert_eq!(one.answer, two.answer);
        assert_eq!(render(&one), render(&two));
        assert!(one.trace.len() <= 12 * m0 + 4);
    }

    #[test]
    fn agrees_with_oracle_on_fixture_family() {
        let net = crate::gen::extremal_network(3).unwrap();
        for seed in 0..6 {
            let displayed = crate::gen::sample_displayed_tree(&net, seed).unwrap();
            assert!(displays(&net, &displayed).unwrap(), "seed {seed}");
        }
        for seed in 0..6 {
            let tree = crate::gen::random_tree(3, 1000 + seed).unwrap();
            let expect = crate::oracle::displays_oracle(&net, &tree, 20).unwrap();
            assert_eq!(displays(&net, &tree).unwrap(), expect, "seed {seed}");
        }
    }
}
