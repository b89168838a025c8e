//! Network generators, fixtures, and size-bound reporting.
//!
//! Every reticulation-visible network satisfies `n <= 8m - 7` vertices and
//! `r <= 3m - 3` reticulations for `m` taxa, and both bounds are sharp:
//! [`extremal_network`] builds a family attaining them exactly. The random
//! generator produces reticulation-visible networks by repeated arc
//! insertion with rejection, reporting how many reticulations it managed to
//! place.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{is_reticulation_visible, Tables};
use crate::enewick::parse_enewick;
use crate::error::{Error, Result};
use crate::network::{Network, NetworkBuilder, VertexId};
use crate::oracle;
use crate::tree::PhyloTree;

/// Three taxa, one reticulation, visible. Displays exactly two trees.
pub fn fixture_net1() -> Network {
    parse_enewick("((x,(z)#H1),(y,#H1));").expect("fixture parses")
}

/// Two taxa at the extremal size: 9 vertices, 3 reticulations.
pub fn fixture_ext2() -> Network {
    extremal_network(2).expect("two taxa is valid")
}

/// Valid network that is not reticulation-visible (stacked reticulations).
pub fn fixture_stacked_invisible() -> Network {
    let arcs = [
        ("rho", "s"),
        ("rho", "t"),
        ("s", "x"),
        ("s", "h1"),
        ("t", "h1"),
        ("t", "u"),
        ("u", "y"),
        ("u", "h2"),
        ("h1", "h2"),
        ("h2", "z"),
    ];
    let named: Vec<(String, String)> =
        arcs.iter().map(|&(t, h)| (t.to_string(), h.to_string())).collect();
    net_from_named_arcs(&named).expect("fixture is well formed")
}

/// Build a network from named arcs. A name that never appears as a tail is
/// a leaf and becomes its own taxon label; all other names are internal.
pub(crate) fn net_from_named_arcs(arcs: &[(String, String)]) -> Result<Network> {
    let mut order: Vec<&str> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (t, h) in arcs {
        for name in [t.as_str(), h.as_str()] {
            if seen.insert(name) {
                order.push(name);
            }
        }
    }
    let tails: std::collections::HashSet<&str> =
        arcs.iter().map(|(t, _)| t.as_str()).collect();
    let mut b = NetworkBuilder::new();
    let mut id = std::collections::HashMap::new();
    for name in &order {
        let label = if tails.contains(name) { None } else { Some(*name) };
        id.insert(*name, b.add_vertex(label));
    }
    for (t, h) in arcs {
        b.add_arc(id[t.as_str()], id[h.as_str()]);
    }
    let net = b.build();
    net.ensure_valid()?;
    Ok(net)
}

/// Arcs of the two-taxon extremal block with fresh internal names.
fn extremal_block(tag: &str, x_label: &str, y_label: &str) -> Vec<(String, String)> {
    let n = |s: &str| format!("{tag}{s}");
    vec![
        (n("r"), n("h1")),
        (n("r"), n("t3")),
        (n("t3"), n("h1")),
        (n("t3"), n("h3")),
        (n("h1"), n("t1")),
        (n("t1"), n("h2")),
        (n("t1"), n("t2")),
        (n("t2"), n("h2")),
        (n("t2"), n("h3")),
        (n("h2"), x_label.to_string()),
        (n("h3"), y_label.to_string()),
    ]
}

/// Reticulation-visible network on `m` taxa attaining both size bounds:
/// exactly `8m - 7` vertices and `3m - 3` reticulations.
///
/// Starts from the two-taxon block and repeatedly replaces the deepest leaf
/// (ties broken by smallest label) with another block, keeping the old
/// label and introducing the next taxon.
pub fn extremal_network(m: usize) -> Result<Network> {
    if m == 0 {
        return Err(Error::Param("need at least one taxon".into()));
    }
    if m == 1 {
        let mut b = NetworkBuilder::new();
        b.add_vertex(Some("x1"));
        let net = b.build();
        net.ensure_valid()?;
        return Ok(net);
    }
    let mut arcs = extremal_block("g2_", "x1", "x2");
    for k in 3..=m {
        let (parent, leaf) = deepest_leaf_arc(&arcs);
        let tag = format!("g{k}_");
        let root = format!("{tag}r");
        let pos = arcs
            .iter()
            .position(|(t, h)| *t == parent && *h == leaf)
            .expect("arc of the selected leaf");
        arcs.remove(pos);
        arcs.push((parent, root));
        arcs.extend(extremal_block(&tag, &leaf, &format!("x{k}")));
    }
    net_from_named_arcs(&arcs)
}

/// Deepest leaf by arc distance from the root, ties by smallest name.
/// Returns the (parent, leaf) arc.
fn deepest_leaf_arc(arcs: &[(String, String)]) -> (String, String) {
    use std::collections::{HashMap, HashSet, VecDeque};
    let tails: HashSet<&str> = arcs.iter().map(|(t, _)| t.as_str()).collect();
    let heads: HashSet<&str> = arcs.iter().map(|(_, h)| h.as_str()).collect();
    let root = arcs
        .iter()
        .map(|(t, _)| t.as_str())
        .find(|t| !heads.contains(t))
        .expect("rooted arc list");
    let mut children: HashMap<&str, Vec<&str>> = HashMap::new();
    for (t, h) in arcs {
        children.entry(t.as_str()).or_default().push(h.as_str());
    }
    let mut depth: HashMap<&str, usize> = HashMap::new();
    depth.insert(root, 0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = depth[v];
        for &c in children.get(v).into_iter().flatten() {
            if !depth.contains_key(c) {
                depth.insert(c, d + 1);
                queue.push_back(c);
            }
        }
    }
    let best = depth
        .iter()
        .filter(|(name, _)| !tails.contains(*name))
        .max_by(|(n1, d1), (n2, d2)| d1.cmp(d2).then(n2.cmp(n1)))
        .map(|(name, _)| *name)
        .expect("at least one leaf");
    let (t, h) = arcs
        .iter()
        .find(|(_, h)| h == best)
        .expect("leaf has a parent arc");
    (t.clone(), h.clone())
}

fn random_tree_with(m: usize, rng: &mut ChaCha8Rng) -> Result<Network> {
    if m == 0 {
        return Err(Error::Param("need at least one taxon".into()));
    }
    let mut b = NetworkBuilder::new();
    if m == 1 {
        b.add_vertex(Some("x1"));
        let net = b.build();
        net.ensure_valid()?;
        return Ok(net);
    }
    let mut labels: Vec<Option<String>> = vec![None, Some("x1".into()), Some("x2".into())];
    let mut arcs: Vec<(usize, usize)> = vec![(0, 1), (0, 2)];
    for k in 3..=m {
        let idx = rng.gen_range(0..arcs.len());
        let (u, v) = arcs[idx];
        let s = labels.len();
        labels.push(None);
        let leaf = labels.len();
        labels.push(Some(format!("x{k}")));
        arcs[idx] = (u, s);
        arcs.push((s, v));
        arcs.push((s, leaf));
    }
    let ids: Vec<VertexId> =
        labels.iter().map(|l| b.add_vertex(l.as_deref())).collect();
    for (u, v) in arcs {
        b.add_arc(ids[u], ids[v]);
    }
    let net = b.build();
    net.ensure_valid()?;
    Ok(net)
}

/// Uniform-ish random binary tree on taxa `x1..xm`, grown by repeatedly
/// subdividing a random arc and hanging the next leaf off it.
pub fn random_tree(m: usize, seed: u64) -> Result<PhyloTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PhyloTree::from_network(random_tree_with(m, &mut rng)?)
}

fn reaches(net: &Network, from: VertexId, to: VertexId) -> bool {
    if from == to {
        return true;
    }
    let mut stack = vec![from];
    let mut seen = vec![false; net.vertex_count()];
    seen[from.index()] = true;
    while let Some(v) = stack.pop() {
        for &c in net.children(v) {
            if c == to {
                return true;
            }
            if !seen[c.index()] {
                seen[c.index()] = true;
                stack.push(c);
            }
        }
    }
    false
}

/// Rebuild the network with `(u1,v1)` and `(u2,v2)` subdivided and a new
/// reticulation arc from the first subdivider to the second.
fn insert_reticulation(
    net: &Network,
    (u1, v1): (VertexId, VertexId),
    (u2, v2): (VertexId, VertexId),
) -> Network {
    let mut b = NetworkBuilder::new();
    let ids: Vec<VertexId> =
        net.vertices().map(|v| b.add_vertex(net.label(v))).collect();
    let s1 = b.add_vertex(None);
    let s2 = b.add_vertex(None);
    for (t, h) in net.arcs() {
        if (t, h) == (u1, v1) {
            b.add_arc(ids[t.index()], s1);
            b.add_arc(s1, ids[h.index()]);
        } else if (t, h) == (u2, v2) {
            b.add_arc(ids[t.index()], s2);
            b.add_arc(s2, ids[h.index()]);
        } else {
            b.add_arc(ids[t.index()], ids[h.index()]);
        }
    }
    b.add_arc(s1, s2);
    b.build()
}

/// Random reticulation-visible network on `m` taxa. Tries to place
/// `r_target` reticulations by joining two subdivided tree arcs, rejecting
/// insertions that would create a cycle or break visibility (50 attempts
/// each). Returns the network and the number actually placed, which can
/// fall short of the request.
pub fn random_rv_network(m: usize, r_target: usize, seed: u64) -> Result<(Network, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = random_tree_with(m, &mut rng)?;
    let mut achieved = 0;
    for _ in 0..r_target {
        let mut placed = false;
        for _ in 0..50 {
            let arcs: Vec<(VertexId, VertexId)> = net
                .arcs()
                .into_iter()
                .filter(|&(_, h)| !net.is_reticulation(h))
                .collect();
            if arcs.len() < 2 {
                break;
            }
            let i = rng.gen_range(0..arcs.len());
            let j = rng.gen_range(0..arcs.len());
            if i == j {
                continue;
            }
            let (a1, a2) = (arcs[i], arcs[j]);
            if reaches(&net, a2.1, a1.0) {
                continue;
            }
            let cand = insert_reticulation(&net, a1, a2);
            if cand.validate().is_empty() {
                let tb = Tables::build(&cand)?;
                if is_reticulation_visible(&cand, &tb) {
                    net = cand;
                    placed = true;
                    break;
                }
            }
        }
        if placed {
            achieved += 1;
        }
    }
    Ok((net, achieved))
}

/// One displayed tree, chosen by resolving each reticulation at random.
pub fn sample_displayed_tree(net: &Network, seed: u64) -> Result<PhyloTree> {
    net.ensure_valid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choice: Vec<usize> = (0..net.reticulation_count())
        .map(|_| rng.gen_range(0..2))
        .collect();
    oracle::resolve(net, &choice)
}

/// Size measurements of a reticulation-visible network against the sharp
/// bounds `n <= 8m - 7` and `r <= 3m - 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub taxa: usize,
    pub vertices: usize,
    pub reticulations: usize,
    pub vertex_bound: usize,
    pub reticulation_bound: usize,
    pub vertices_tight: bool,
    pub reticulations_tight: bool,
}

/// Measure a network against the size bounds. The network must be valid
/// and reticulation-visible.
pub fn bounds_report(net: &Network) -> Result<BoundsReport> {
    net.ensure_valid()?;
    let tb = Tables::build(net)?;
    if let Some(h) = crate::analysis::first_invisible_reticulation(net, &tb) {
        return Err(Error::NotVisible(format!(
            "reticulation {h} is not verified by any leaf"
        )));
    }
    let m = net.taxon_count();
    let n = net.vertex_count();
    let r = net.reticulation_count();
    let vertex_bound = 8 * m - 7;
    let reticulation_bound = 3 * m - 3;
    Ok(BoundsReport {
        taxa: m,
        vertices: n,
        reticulations: r,
        vertex_bound,
        reticulation_bound,
        vertices_tight: n == vertex_bound,
        reticulations_tight: r == reticulation_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext2_shape() {
        let n = fixture_ext2();
        assert!(n.validate().is_empty());
        assert_eq!(n.vertex_count(), 9);
        assert_eq!(n.reticulation_count(), 3);
        assert_eq!(n.taxa(), vec!["x1", "x2"]);
        let tb = Tables::build(&n).unwrap();
        assert!(is_reticulation_visible(&n, &tb));
    }

    #[test]
    fn ext2_displays_only_the_cherry() {
        let n = fixture_ext2();
        let set = oracle::display_set(&n, 20).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains("(x1,x2);"));
    }

    #[test]
    fn stacked_fixture_is_valid_but_not_visible() {
        let n = fixture_stacked_invisible();
        assert!(n.validate().is_empty());
        let tb = Tables::build(&n).unwrap();
        assert!(!is_reticulation_visible(&n, &tb));
        assert!(matches!(bounds_report(&n), Err(Error::NotVisible(_))));
    }

    #[test]
    fn extremal_sizes_are_tight() {
        for m in 1..=6 {
            let net = extremal_network(m).unwrap();
            assert!(net.validate().is_empty(), "m={m}");
            assert_eq!(net.taxon_count(), m, "m={m}");
            assert_eq!(net.vertex_count(), 8 * m - 7, "m={m}");
            assert_eq!(net.reticulation_count(), 3 * m - 3, "m={m}");
            let report = bounds_report(&net).unwrap();
            assert!(report.vertices_tight && report.reticulations_tight, "m={m}");
        }
    }

    #[test]
    fn single_taxon_extremal() {
        let net = extremal_network(1).unwrap();
        assert_eq!(net.vertex_count(), 1);
        let report = bounds_report(&net).unwrap();
        assert_eq!(report.vertex_bound, 1);
        assert_eq!(report.reticulation_bound, 0);
        assert!(report.vertices_tight && report.reticulations_tight);
    }

    #[test]
    fn random_tree_is_deterministic_and_valid() {
        let t1 = random_tree(7, 42).unwrap();
        let t2 = random_tree(7, 42).unwrap();
        assert_eq!(t1.canonical_newick(), t2.canonical_newick());
        assert_eq!(t1.taxon_count(), 7);
        let t3 = random_tree(7, 43).unwrap();
        assert!(t1.canonical_newick() != t3.canonical_newick() || 7 < 4);
    }

    #[test]
    fn random_network_visible_and_within_bounds() {
        for seed in 0..8 {
            let (net, got) = random_rv_network(5, 6, seed).unwrap();
            assert!(net.validate().is_empty(), "seed={seed}");
            assert_eq!(net.reticulation_count(), got, "seed={seed}");
            let tb = Tables::build(&net).unwrap();
            assert!(is_reticulation_visible(&net, &tb), "seed={seed}");
            assert!(net.vertex_count() <= 8 * 5 - 7, "seed={seed}");
            assert!(net.reticulation_count() <= 3 * 5 - 3, "seed={seed}");
        }
    }

    #[test]
    fn random_network_zero_rets_is_a_tree() {
        let (net, got) = random_rv_network(4, 0, 9).unwrap();
        assert_eq!(got, 0);
        assert_eq!(net.reticulation_count(), 0);
        assert!(PhyloTree::from_network(net).is_ok());
    }

    #[test]
    fn sampled_tree_is_displayed() {
        let net = fixture_net1();
        for seed in 0..4 {
            let t = sample_displayed_tree(&net, seed).unwrap();
            assert!(oracle::displays_oracle(&net, &t, 20).unwrap(), "seed={seed}");
        }
    }
}
