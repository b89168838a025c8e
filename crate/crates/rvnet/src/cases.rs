//! Case analysis for one reduction step.
//!
//! Each public function inspects the network around the chosen cherry and
//! returns a decision: which arc or leaf to delete, or a final answer. The
//! easy cases handle degenerate arrangements of the two key vertices; the
//! sibling cases consult a precomputed action table once the cherry has a
//! clean frame. `Internal` errors mark guarantees that the preceding cases
//! are supposed to establish.

use crate::analysis::Tables;
use crate::error::{Error, Result};
use crate::frame::{
    classify_junction, classify_path, deepest_channel_ancestor, find_hat_v_c, on_channel,
    project_on_channel, CherryContext, SituationFrame,
};
use crate::network::{Network, VertexId};
use crate::tree::PhyloTree;
use std::collections::VecDeque;
use std::fmt;

/// What a reduction step does to the network (and, for leaf deletion, to
/// the tree as well). The driver only ever emits the first two and the
/// answers; ReduceCherry and SwapCherries round out the vocabulary for
/// consumers that build traces from the lower-level editing calls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    DeleteArc { tail: VertexId, head: VertexId },
    DeleteLeaf { taxon: String },
    ReduceCherry { a: String, b: String },
    SwapCherries,
    AnswerYes,
    AnswerNo { reason: String },
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::DeleteArc { tail, head } => write!(f, "delete-arc {tail}->{head}"),
            Action::DeleteLeaf { taxon } => write!(f, "delete-leaf {taxon}"),
            Action::ReduceCherry { a, b } => write!(f, "reduce-cherry {a},{b}"),
            Action::SwapCherries => write!(f, "swap-cherries"),
            Action::AnswerYes => write!(f, "yes"),
            Action::AnswerNo { .. } => write!(f, "no"),
        }
    }
}

pub struct CaseDecision {
    pub label: &'static str,
    pub action: Action,
    pub witness: String,
}

fn internal(msg: String) -> Error {
    Error::Internal(msg)
}

fn other_parent(net: &Network, v: VertexId, not: VertexId) -> Result<VertexId> {
    net.parents(v)
        .iter()
        .copied()
        .find(|&p| p != not)
        .ok_or_else(|| internal(format!("{v} has no second parent besides {not}")))
}

fn min_parent(net: &Network, v: VertexId) -> VertexId {
    net.parents(v).iter().copied().min().expect("parent")
}

fn parents_where(
    net: &Network,
    v: VertexId,
    pred: impl Fn(VertexId) -> bool,
) -> Vec<VertexId> {
    let mut ps: Vec<VertexId> = net.parents(v).iter().copied().filter(|&p| pred(p)).collect();
    ps.sort();
    ps
}

/// Breadth-first distances from `from` along arcs; `None` for unreachable
/// vertices.
fn bfs_dist(net: &Network, from: VertexId) -> Vec<Option<usize>> {
    let mut dist = vec![None; net.vertex_count()];
    dist[from.index()] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x.index()].unwrap();
        for &c in net.children(x) {
            if dist[c.index()].is_none() {
                dist[c.index()] = Some(d + 1);
                queue.push_back(c);
            }
        }
    }
    dist
}

/// Search below `start` for the nearest reticulation not verified by taxon
/// `t_idx`. Exploration does not continue below such reticulations. Returns
/// the arc that reached the winner, picked by level, then reticulation id,
/// then tail id.
fn unverified_ret_frontier(
    net: &Network,
    tb: &Tables,
    start: VertexId,
    t_idx: usize,
) -> Option<(usize, VertexId, VertexId)> {
    let mut seen = vec![false; net.vertex_count()];
    seen[start.index()] = true;
    let mut queue = VecDeque::from([(start, 0usize)]);
    let mut best: Option<(usize, VertexId, VertexId)> = None;
    while let Some((x, lvl)) = queue.pop_front() {
        for &c in net.children(x) {
            if net.is_reticulation(c) && !tb.verifies(t_idx, c) {
                let cand = (lvl + 1, c, x);
                if best.is_none() || cand < best.unwrap() {
                    best = Some(cand);
                }
            } else if !seen[c.index()] {
                seen[c.index()] = true;
                queue.push_back((c, lvl + 1));
            }
        }
    }
    best
}

/// First reticulation on the forced chain of sole parents above a leaf;
/// `None` when the chain reaches the root without one.
fn first_ret_above(net: &Network, leaf: VertexId) -> Option<VertexId> {
    let mut cur = net.sole_parent(leaf);
    loop {
        if net.is_reticulation(cur) {
            return Some(cur);
        }
        if net.in_degree(cur) == 0 {
            return None;
        }
        cur = net.sole_parent(cur);
    }
}

struct Side<'a> {
    name: &'a str,
    other_name: &'a str,
    idx: usize,
    other_idx: usize,
    leaf: VertexId,
    other_leaf: VertexId,
    v: VertexId,
    other_v: VertexId,
}

fn sides(cx: &CherryContext) -> [Side<'_>; 2] {
    [
        Side {
            name: &cx.a,
            other_name: &cx.b,
            idx: cx.a_idx,
            other_idx: cx.b_idx,
            leaf: cx.a_leaf,
            other_leaf: cx.b_leaf,
            v: cx.v_a,
            other_v: cx.v_b,
        },
        Side {
            name: &cx.b,
            other_name: &cx.a,
            idx: cx.b_idx,
            other_idx: cx.a_idx,
            leaf: cx.b_leaf,
            other_leaf: cx.a_leaf,
            v: cx.v_b,
            other_v: cx.v_a,
        },
    ]
}

fn ec1(net: &Network, cx: &CherryContext) -> Option<CaseDecision> {
    if net.sole_parent(cx.a_leaf) == net.sole_parent(cx.b_leaf) {
        Some(CaseDecision {
            label: "EC1",
            action: Action::DeleteLeaf {
                taxon: cx.b.clone(),
            },
            witness: format!("{} and {} form a cherry in the network", cx.a, cx.b),
        })
    } else {
        None
    }
}

fn ec2(net: &Network, tb: &Tables, cx: &CherryContext) -> Result<Option<CaseDecision>> {
    for s in sides(cx) {
        if s.v != s.leaf {
            continue;
        }
        let p_i = net.sole_parent(s.leaf);
        if net.is_reticulation(p_i) {
            return Err(internal(format!(
                "the parent of `{}` is a reticulation although no reticulation is verified by `{}` alone",
                s.name, s.name
            )));
        }
        let path = tb.treepath_set(p_i);
        let stray = path
            .ones()
            .map(|i| VertexId(i as u32))
            .filter(|&v| net.is_leaf(v) && v != s.leaf && v != s.other_leaf)
            .min_by(|&x, &y| net.label(x).cmp(&net.label(y)));
        if let Some(l) = stray {
            let l_name = net.label(l).unwrap_or("?").to_string();
            let reason = format!(
                "leaf {l_name} is separated from {} and {} only above the parent of {}",
                s.name, s.other_name, s.name
            );
            return Ok(Some(CaseDecision {
                label: "EC2",
                action: Action::AnswerNo {
                    reason: reason.clone(),
                },
                witness: reason,
            }));
        }
        let mut cand: Option<(VertexId, VertexId)> = None;
        for p_u in std::iter::once(p_i).chain(path.ones().map(|i| VertexId(i as u32))) {
            for &u in net.children(p_u) {
                if net.is_reticulation(u) {
                    let pair = (u, p_u);
                    if cand.is_none() || pair < cand.unwrap() {
                        cand = Some(pair);
                    }
                }
            }
        }
        let (u, p_u) = cand.ok_or_else(|| {
            internal(format!(
                "no reticulation hangs off the tree path above `{}`",
                s.name
            ))
        })?;
        let action = if u != s.other_v {
            Action::DeleteArc { tail: p_u, head: u }
        } else {
            let other = other_parent(net, u, p_u)?;
            Action::DeleteArc {
                tail: other,
                head: u,
            }
        };
        return Ok(Some(CaseDecision {
            label: "EC2",
            action,
            witness: format!(
                "{} has no private reticulation; pruning around the reticulation {u} off its tree path",
                s.name
            ),
        }));
    }
    Ok(None)
}

fn ec3(net: &Network, tb: &Tables, cx: &CherryContext) -> Result<Option<CaseDecision>> {
    for s in sides(cx) {
        let (v_i, v_j) = (s.v, s.other_v);
        if !tb.is_anc(v_i, v_j) {
            continue;
        }
        let below = parents_where(net, v_j, |p| tb.is_anc_eq(v_i, p));
        let p_j = *below.first().ok_or_else(|| {
            internal(format!("no parent of {v_j} lies below its ancestor {v_i}"))
        })?;
        let mut cur = p_j;
        let u = loop {
            if cur == v_i || net.is_reticulation(cur) {
                break cur;
            }
            cur = net.sole_parent(cur);
            if !tb.is_anc_eq(v_i, cur) {
                return Err(internal(format!(
                    "walk above {p_j} escaped past {v_i} without meeting a reticulation"
                )));
            }
        };
        let action = if !tb.is_anc(u, s.leaf) {
            Action::DeleteArc {
                tail: p_j,
                head: v_j,
            }
        } else {
            let other = other_parent(net, v_j, p_j)?;
            Action::DeleteArc {
                tail: other,
                head: v_j,
            }
        };
        return Ok(Some(CaseDecision {
            label: "EC3",
            action,
            witness: format!(
                "the key vertex of {} is an ancestor of the key vertex of {}",
                s.name, s.other_name
            ),
        }));
    }
    Ok(None)
}

fn ec4(net: &Network, tb: &Tables, cx: &CherryContext) -> Result<Option<CaseDecision>> {
    for s in sides(cx) {
        let w = net
            .vertices()
            .filter(|&w| tb.is_anc(w, s.v) && tb.verifies(s.idx, w) && !tb.verifies(s.other_idx, w))
            .min();
        let Some(w) = w else { continue };
        let action = if !tb.is_anc(w, s.other_leaf) {
            Action::DeleteArc {
                tail: min_parent(net, s.v),
                head: s.v,
            }
        } else if let Some(z) = tb
            .reticulations()
            .iter()
            .copied()
            .filter(|&z| tb.is_anc(w, z) && tb.is_anc(z, s.other_v) && !tb.is_anc(z, s.leaf))
            .min()
        {
            let ps = parents_where(net, s.other_v, |p| tb.is_anc_eq(z, p));
            let p = *ps.first().ok_or_else(|| {
                internal(format!("no parent of {} lies below {z}", s.other_v))
            })?;
            Action::DeleteArc {
                tail: p,
                head: s.other_v,
            }
        } else {
            let ps = parents_where(net, s.other_v, |p| !tb.is_anc_eq(w, p));
            if ps.len() != 1 {
                return Err(internal(format!(
                    "expected exactly one parent of {} outside the span of {w}, found {}",
                    s.other_v,
                    ps.len()
                )));
            }
            Action::DeleteArc {
                tail: ps[0],
                head: s.other_v,
            }
        };
        return Ok(Some(CaseDecision {
            label: "EC4",
            action,
            witness: format!(
                "{w} above the key vertex of {} is verified by {} but not by {}",
                s.name, s.name, s.other_name
            ),
        }));
    }
    Ok(None)
}

fn ec5(net: &Network, tb: &Tables, cx: &CherryContext) -> Option<CaseDecision> {
    for s in sides(cx) {
        if let Some((lvl, c, x)) = unverified_ret_frontier(net, tb, s.v, s.idx) {
            return Some(CaseDecision {
                label: "EC5",
                action: Action::DeleteArc { tail: x, head: c },
                witness: format!(
                    "reticulation {c} at depth {lvl} below the key vertex of {} is not verified by {}",
                    s.name, s.name
                ),
            });
        }
    }
    None
}

fn ec6(net: &Network, tb: &Tables, cx: &CherryContext) -> Result<Option<CaseDecision>> {
    for s in sides(cx) {
        let u = tb
            .reticulations()
            .iter()
            .copied()
            .filter(|&u| tb.is_anc(u, s.v) && !tb.is_anc(u, s.other_leaf))
            .min();
        let Some(u) = u else { continue };
        let ps = parents_where(net, s.v, |p| tb.is_anc_eq(u, p));
        let p = *ps.first().ok_or_else(|| {
            internal(format!("no parent of {} lies below {u}", s.v))
        })?;
        return Ok(Some(CaseDecision {
            label: "EC6",
            action: Action::DeleteArc { tail: p, head: s.v },
            witness: format!(
                "reticulation {u} above the key vertex of {} avoids {}",
                s.name, s.other_name
            ),
        }));
    }
    Ok(None)
}

fn verifier_name(tb: &Tables, v: VertexId) -> Result<usize> {
    tb.smallest_verifier(v)
        .ok_or_else(|| internal(format!("{v} has no verifying leaf")))
}

fn ec7(
    net: &Network,
    tb: &Tables,
    tree: &PhyloTree,
    cx: &CherryContext,
) -> Result<Option<CaseDecision>> {
    for s in sides(cx) {
        let d_i: Vec<VertexId> = tb
            .reticulations()
            .iter()
            .copied()
            .filter(|&z| tb.is_anc(cx.rho, z) && tb.is_anc(z, s.v))
            .collect();
        let mut init: Option<(VertexId, VertexId)> = None;
        for (k, &u) in d_i.iter().enumerate() {
            for &w in &d_i[k + 1..] {
                if !tb.comparable(u, w) {
                    let pair = (u.min(w), u.max(w));
                    if init.is_none() || pair < init.unwrap() {
                        init = Some(pair);
                    }
                }
            }
        }
        let Some((mut u, mut w)) = init else { continue };
        loop {
            let mut changed = false;
            if let Some(z) = d_i
                .iter()
                .copied()
                .filter(|&z| tb.is_anc(u, z) && !tb.comparable(z, w))
                .min()
            {
                u = z;
                changed = true;
            }
            if let Some(z) = d_i
                .iter()
                .copied()
                .filter(|&z| tb.is_anc(w, z) && !tb.comparable(u, z))
                .min()
            {
                w = z;
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let mut l_u = verifier_name(tb, u)?;
        let mut l_w = verifier_name(tb, w)?;
        if l_u == l_w || [l_u, l_w].contains(&s.idx) || [l_u, l_w].contains(&s.other_idx) {
            return Err(internal(format!(
                "verifiers of the incomparable reticulations {u} and {w} are not distinct from the cherry"
            )));
        }
        let between = |top: VertexId| -> Vec<VertexId> {
            tb.reticulations()
                .iter()
                .copied()
                .filter(|&z| tb.is_anc(top, z) && tb.is_anc(z, s.v))
                .collect()
        };
        let mut swapped = false;
        let mut cands = between(u);
        if cands.is_empty() {
            let w_side = between(w);
            if !w_side.is_empty() {
                std::mem::swap(&mut u, &mut w);
                std::mem::swap(&mut l_u, &mut l_w);
                swapped = true;
                cands = w_side;
            }
        }
        let taxa = tb.taxa();
        let swap_note = if swapped { "; sides swapped" } else { "" };
        if !cands.is_empty() {
            let dist = bfs_dist(net, u);
            let u2 = cands
                .into_iter()
                .map(|z| {
                    dist[z.index()]
                        .map(|d| (d, z))
                        .ok_or_else(|| internal(format!("{z} should be reachable from {u}")))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .map(|(_, z)| z)
                .unwrap();
            let l_u2 = tb
                .verifier_set(u2)
                .ones()
                .filter(|&t| ![l_u, l_w, s.idx, s.other_idx].contains(&t))
                .min()
                .ok_or_else(|| {
                    internal(format!("{u2} has no verifier outside the pair and the cherry"))
                })?;
            let w_parents = parents_where(net, u2, |p| tb.is_anc_eq(w, p));
            if w_parents.len() != 1 {
                return Err(internal(format!(
                    "expected exactly one parent of {u2} below {w}, found {}",
                    w_parents.len()
                )));
            }
            let w_parent = w_parents[0];
            let u_parent = other_parent(net, u2, w_parent)?;
            if !tb.is_anc_eq(u, u_parent) {
                return Err(internal(format!(
                    "the second parent of {u2} does not lie below {u}"
                )));
            }
            let grouped = tree.displays_triple(&taxa[l_u2], &taxa[l_u], &taxa[l_w])?;
            let action = if grouped {
                Action::DeleteArc {
                    tail: w_parent,
                    head: u2,
                }
            } else {
                Action::DeleteArc {
                    tail: u_parent,
                    head: u2,
                }
            };
            return Ok(Some(CaseDecision {
                label: "EC7",
                action,
                witness: format!(
                    "incomparable reticulations {u} and {w} above the key vertex of {}; triple on {} settled {u2}{swap_note}",
                    s.name, taxa[l_u2]
                ),
            }));
        }
        let p_side = parents_where(net, s.v, |p| tb.is_anc_eq(u, p));
        if p_side.len() != 1 {
            return Err(internal(format!(
                "expected exactly one parent of {} below {u}, found {}",
                s.v,
                p_side.len()
            )));
        }
        let p_i = p_side[0];
        let q_i = other_parent(net, s.v, p_i)?;
        if !tb.is_anc_eq(w, q_i) {
            return Err(internal(format!(
                "the second parent of {} does not lie below {w}",
                s.v
            )));
        }
        let grouped = tree.displays_triple(s.name, &taxa[l_u], &taxa[l_w])?;
        let action = if grouped {
            Action::DeleteArc {
                tail: q_i,
                head: s.v,
            }
        } else {
            Action::DeleteArc {
                tail: p_i,
                head: s.v,
            }
        };
        return Ok(Some(CaseDecision {
            label: "EC7",
            action,
            witness: format!(
                "incomparable reticulations {u} and {w} above the key vertex of {}; triple on {} settled the side{swap_note}",
                s.name, s.name
            ),
        }));
    }
    Ok(None)
}

/// Run the easy cases in order; the first applicable one decides the step.
pub fn easy_cases(
    net: &Network,
    tb: &Tables,
    tree: &PhyloTree,
    cx: &CherryContext,
) -> Result<Option<CaseDecision>> {
    if let Some(d) = ec1(net, cx) {
        return Ok(Some(d));
    }
    if let Some(d) = ec2(net, tb, cx)? {
        return Ok(Some(d));
    }
    if let Some(d) = ec3(net, tb, cx)? {
        return Ok(Some(d));
    }
    if let Some(d) = ec4(net, tb, cx)? {
        return Ok(Some(d));
    }
    if let Some(d) = ec5(net, tb, cx) {
        return Ok(Some(d));
    }
    if let Some(d) = ec6(net, tb, cx)? {
        return Ok(Some(d));
    }
    ec7(net, tb, tree, cx)
}

/// Which arc (or leaf) an action-table cell deletes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cell {
    Pa,
    Qa,
    Pc,
    Qc,
    B,
}

use Cell::{Pa, Pc, Qa, Qc, B};

/// Rows: class of the first parent, then of the second; columns: the three
/// layouts.
pub(crate) const TABLE1: [[[Cell; 3]; 4]; 4] = [
    [[Pa, Pa, Pa], [Pc, Qc, Qc], [Pc, Pc, Pc], [Pa, Pa, Pa]],
    [[Pc, Pc, Pc], [Qa, Qa, Qa], [Qa, Pc, Pc], [Pc, Pc, Pc]],
    [[Qc, Qc, Qc], [Qa, Qc, Qc], [Qa, Qa, Qa], [B, B, B]],
    [[Pa, Pa, Pa], [Qc, Qc, Qc], [B, B, B], [Pa, Pa, Pa]],
];

/// Rows: junction type of the sibling cherry's first fork, then of the
/// second; columns: the three layouts.
pub(crate) const TABLE2: [[[Cell; 3]; 4]; 4] = [
    [[Pa, Pa, Pa], [Pc, Qc, Qc], [Pc, Pc, Pc], [Pa, Pa, Pa]],
    [[Pc, Pc, Pc], [Qa, Qa, Qa], [Qa, Pc, Pc], [Pc, Pc, Pc]],
    [[Qc, Qc, Qc], [Qa, Qc, Qc], [Qa, Qa, Qa], [B, B, B]],
    [[Pa, Pa, Pa], [Qc, Qc, Qc], [B, B, B], [Pa, Pa, Pa]],
];

fn resolve_cell(
    cell: Cell,
    f: &SituationFrame,
    cx: &CherryContext,
    pc: (VertexId, VertexId),
    qc: (VertexId, VertexId),
) -> Action {
    match cell {
        Pa => Action::DeleteArc {
            tail: f.p_a,
            head: cx.v_a,
        },
        Qa => Action::DeleteArc {
            tail: f.q_a,
            head: cx.v_a,
        },
        Pc => Action::DeleteArc {
            tail: pc.0,
            head: pc.1,
        },
        Qc => Action::DeleteArc {
            tail: qc.0,
            head: qc.1,
        },
        B => Action::DeleteLeaf {
            taxon: cx.b.clone(),
        },
    }
}

/// The cherry's sibling in the tree is a single leaf `c`.
pub fn leaf_sibling_case(
    net: &Network,
    tb: &Tables,
    cx: &CherryContext,
    f: &SituationFrame,
    c: &str,
) -> Result<CaseDecision> {
    let c_idx = tb
        .taxon_index(c)
        .ok_or_else(|| Error::UnknownTaxon(c.to_string()))?;
    let c_leaf = tb.leaf_vertex(c_idx);
    if !tb.is_anc(cx.rho, c_leaf) {
        return Ok(CaseDecision {
            label: "SC1.1",
            action: Action::DeleteArc {
                tail: f.p_a,
                head: cx.v_a,
            },
            witness: format!("{c} does not hang below the junction of the cherry"),
        });
    }
    let hat = find_hat_v_c(net, tb, cx, c)?;
    if let Some((lvl, z, p)) = unverified_ret_frontier(net, tb, hat, c_idx) {
        return Ok(CaseDecision {
            label: "SC1.2",
            action: Action::DeleteArc { tail: p, head: z },
            witness: format!(
                "reticulation {z} at depth {lvl} below the stop vertex of {c} is not verified by {c}"
            ),
        });
    }
    let above = tb
        .reticulations()
        .iter()
        .copied()
        .filter(|&z| tb.is_anc(z, hat) && !tb.is_anc(z, cx.a_leaf) && !tb.is_anc(z, cx.b_leaf))
        .min();
    if let Some(u) = above {
        if hat == c_leaf {
            if tb.verifies(c_idx, u) {
                let other = tb
                    .verifier_set(u)
                    .ones()
                    .find(|&t| t != c_idx)
                    .ok_or_else(|| {
                        internal(format!("reticulation {u} is verified by {c} alone"))
                    })?;
                let reason = format!(
                    "{c} and {} must meet below {u}, away from the cherry",
                    tb.taxa()[other]
                );
                return Ok(CaseDecision {
                    label: "SC1.3",
                    action: Action::AnswerNo {
                        reason: reason.clone(),
                    },
                    witness: reason,
                });
            }
            let target = first_ret_above(net, c_leaf).ok_or_else(|| {
                internal(format!("{c} has a unique root path that avoids {u}"))
            })?;
            let ps = parents_where(net, target, |p| tb.is_anc_eq(u, p));
            let p_c = *ps
                .first()
                .ok_or_else(|| internal(format!("no parent of {target} lies below {u}")))?;
            return Ok(CaseDecision {
                label: "SC1.3",
                action: Action::DeleteArc {
                    tail: p_c,
                    head: target,
                },
                witness: format!(
                    "reticulation {u} above {c} avoids the cherry; {target} gates every path to {c}"
                ),
            });
        }
        let ps = parents_where(net, hat, |p| tb.is_anc_eq(u, p));
        let p_c = *ps
            .first()
            .ok_or_else(|| internal(format!("no parent of {hat} lies below {u}")))?;
        return Ok(CaseDecision {
            label: "SC1.3",
            action: Action::DeleteArc {
                tail: p_c,
                head: hat,
            },
            witness: format!("reticulation {u} above the stop vertex of {c} avoids the cherry"),
        });
    }
    if !tb.verifies(c_idx, cx.rho) {
        let target = if hat == c_leaf {
            first_ret_above(net, c_leaf).ok_or_else(|| {
                internal(format!(
                    "{c} has a unique root path yet does not verify the cherry junction"
                ))
            })?
        } else {
            hat
        };
        let ps = parents_where(net, target, |p| !tb.is_anc_eq(cx.rho, p));
        let p = *ps.first().ok_or_else(|| {
            internal(format!(
                "every parent of {target} descends from the cherry junction although {c} does not verify it"
            ))
        })?;
        return Ok(CaseDecision {
            label: "SC1.4",
            action: Action::DeleteArc {
                tail: p,
                head: target,
            },
            witness: format!("{c} does not verify the junction of the cherry"),
        });
    }
    if hat == c_leaf {
        let attach = deepest_channel_ancestor(net, tb, cx, net.sole_parent(c_leaf))?;
        let k = classify_path(tb, f, attach)?;
        let pa = Action::DeleteArc {
            tail: f.p_a,
            head: cx.v_a,
        };
        let qa = Action::DeleteArc {
            tail: f.q_a,
            head: cx.v_a,
        };
        let action = match k.row() {
            0 => pa,
            1 => qa,
            2 => {
                if tb.is_anc(attach, f.q_ab) {
                    Action::DeleteLeaf {
                        taxon: cx.b.clone(),
                    }
                } else {
                    qa
                }
            }
            _ => pa,
        };
        return Ok(CaseDecision {
            label: "SC1.5",
            action,
            witness: format!("{c} hangs off the channels at {attach}, which classifies as {k:?}"),
        });
    }
    let parents = net.parents(hat);
    let p_c = parents[0].min(parents[1]);
    let q_c = parents[0].max(parents[1]);
    let p2 = deepest_channel_ancestor(net, tb, cx, p_c)?;
    let q2 = deepest_channel_ancestor(net, tb, cx, q_c)?;
    let pk = classify_path(tb, f, p2)?;
    let qk = classify_path(tb, f, q2)?;
    let cell = TABLE1[pk.row()][qk.row()][f.layout.column()];
    Ok(CaseDecision {
        label: "SC1.5",
        action: resolve_cell(cell, f, cx, (p_c, hat), (q_c, hat)),
        witness: format!(
            "parents of the stop vertex of {c} classify as {pk:?} and {qk:?} under {:?}",
            f.layout
        ),
    })
}

/// The cherry's sibling in the tree is another cherry `{c, d}`. The second
/// context and frame describe that sibling cherry; `swapped` records that
/// the two cherries exchanged roles before this call.
pub fn cherry_sibling_case(
    net: &Network,
    tb: &Tables,
    ab_cx: &CherryContext,
    ab_f: &SituationFrame,
    cd_cx: &CherryContext,
    cd_f: &SituationFrame,
    swapped: bool,
) -> Result<CaseDecision> {
    let note = if swapped { "; cherry roles swapped" } else { "" };
    let c = &cd_cx.a;
    if !tb.comparable(cd_cx.rho, ab_cx.rho) {
        return Ok(CaseDecision {
            label: "SC2.1",
            action: Action::DeleteArc {
                tail: ab_f.p_a,
                head: ab_cx.v_a,
            },
            witness: format!("the two cherry junctions are incomparable{note}"),
        });
    }
    if !on_channel(tb, ab_cx, cd_cx.rho) {
        return Ok(CaseDecision {
            label: "SC2.2",
            action: Action::DeleteArc {
                tail: cd_f.p_a,
                head: cd_cx.v_a,
            },
            witness: format!(
                "the junction of {{{c},{}}} leaves the channels of {{{},{}}}{note}",
                cd_cx.b, ab_cx.a, ab_cx.b
            ),
        });
    }
    let z = tb
        .reticulations()
        .iter()
        .copied()
        .filter(|&z| {
            (tb.is_anc(z, cd_f.p_ab) || tb.is_anc(z, cd_f.q_ab))
                && !tb.is_anc(z, ab_cx.a_leaf)
                && !tb.is_anc(z, ab_cx.b_leaf)
        })
        .min();
    if let Some(z) = z {
        let (tail, side) = if tb.is_anc(z, cd_f.p_ab) {
            (cd_f.p_a, "first")
        } else {
            (cd_f.q_a, "second")
        };
        return Ok(CaseDecision {
            label: "SC2.3",
            action: Action::DeleteArc {
                tail,
                head: cd_cx.v_a,
            },
            witness: format!(
                "reticulation {z} above the {side} fork of {{{c},{}}} avoids {{{},{}}}{note}",
                cd_cx.b, ab_cx.a, ab_cx.b
            ),
        });
    }
    let p_proj = project_on_channel(net, tb, ab_cx, cd_f.p_ab)?;
    let q_proj = project_on_channel(net, tb, ab_cx, cd_f.q_ab)?;
    let tp = classify_junction(tb, ab_f, cd_f.p_ab, p_proj)?;
    let tq = classify_junction(tb, ab_f, cd_f.q_ab, q_proj)?;
    let cell = TABLE2[tp.row()][tq.row()][ab_f.layout.column()];
    Ok(CaseDecision {
        label: "SC2.4",
        action: resolve_cell(
            cell,
            ab_f,
            ab_cx,
            (cd_f.p_a, cd_cx.v_a),
            (cd_f.q_a, cd_cx.v_a),
        ),
        witness: format!(
            "forks of {{{c},{}}} classify as {tp:?} and {tq:?} under {:?}{note}",
            cd_cx.b, ab_f.layout
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Tables;
    use crate::edit::{delete_arc_tidy, delete_leaf_tidy};
    use crate::enewick::{parse_enewick, parse_newick};
    use crate::frame::cherry_context;
    use crate::tree::tree_equal;
    use std::path::Path;

    fn ctx(net: &Network, a: &str, b: &str) -> (Tables, CherryContext) {
        let tb = Tables::build(net).unwrap();
        let cx = cherry_context(net, &tb, a, b).unwrap();
        (tb, cx)
    }

    #[test]
    fn ec1_reduces_network_cherry() {
        let net = parse_enewick("((a,b),x);").unwrap();
        let tree = parse_newick("((a,b),x);").unwrap();
        let (tb, cx) = ctx(&net, "a", "b");
        let d = easy_cases(&net, &tb, &tree, &cx).unwrap().unwrap();
        assert_eq!(d.label, "EC1");
        assert_eq!(
            d.action,
            Action::DeleteLeaf {
                taxon: "b".into()
            }
        );
    }

    #[test]
    fn ec2_deletes_competing_arc() {
        let net = parse_enewick("((x,(z)#H1),(y,#H1));").unwrap();
        let tree = parse_newick("((x,z),y);").unwrap();
        let (tb, cx) = ctx(&net, "x", "z");
        let d = easy_cases(&net, &tb, &tree, &cx).unwrap().unwrap();
        assert_eq!(d.label, "EC2");
        let Action::DeleteArc { tail, head } = d.action else {
            panic!("expected an arc deletion, got {}", d.action)
        };
        let reduced = delete_arc_tidy(&net, tail, head).unwrap();
        assert!(tree_equal(
            &crate::tree::PhyloTree::from_network(reduced).unwrap(),
            &tree
        ));
    }

    #[test]
    fn ec2_answers_no_on_blocking_leaf() {
        let net = parse_enewick("(((x,w),(z)#H1),(y,#H1));").unwrap();
        let tree = parse_newick("((x,z),(y,w));").unwrap();
        let (tb, cx) = ctx(&net, "x", "z");
        let d = easy_cases(&net, &tb, &tree, &cx).unwrap().unwrap();
        assert_eq!(d.label, "EC2");
        assert!(matches!(d.action, Action::AnswerNo { .. }));
        assert!(d.witness.contains('w'));
    }

    #[test]
    fn table_cells_match_checked_in_transcription() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/action_tables.txt");
        let text = std::fs::read_to_string(path).unwrap();
        let mut t1 = [[[None::<Cell>; 3]; 4]; 4];
        let mut t2 = [[[None::<Cell>; 3]; 4]; 4];
        let mut current = 0;
        let row_index = |k: &str| match k {
            "P12" | "T1" => 0,
            "P34" | "T2" => 1,
            "AP" | "T3" => 2,
            "AQ" | "T4" => 3,
            other => panic!("bad row key {other}"),
        };
        let cell = |k: &str| match k {
            "Pa" => Pa,
            "Qa" => Qa,
            "Pc" => Pc,
            "Qc" => Qc,
            "B" => B,
            other => panic!("bad cell {other}"),
        };
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "table1" {
                current = 1;
                continue;
            }
            if line == "table2" {
                current = 2;
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(parts.len(), 5, "bad line: {line}");
            let (r, c) = (row_index(parts[0]), row_index(parts[1]));
            let target = if current == 1 { &mut t1 } else { &mut t2 };
            for (col, p) in parts[2..].iter().enumerate() {
                assert!(target[r][c][col].is_none(), "duplicate entry: {line}");
                target[r][c][col] = Some(cell(p));
            }
        }
        for r in 0..4 {
            for c in 0..4 {
                for col in 0..3 {
                    assert_eq!(t1[r][c][col], Some(TABLE1[r][c][col]), "table1 at {r},{c},{col}");
                    assert_eq!(t2[r][c][col], Some(TABLE2[r][c][col]), "table2 at {r},{c},{col}");
                }
            }
        }
    }

    #[test]
    fn ec1_application_keeps_taxa_aligned() {
        let net = parse_enewick("((a,b),x);").unwrap();
        let reduced = delete_leaf_tidy(&net, "b").unwrap();
        let mut taxa = reduced.taxa();
        taxa.sort_unstable();
        assert_eq!(taxa, ["a", "x"]);
    }
}
