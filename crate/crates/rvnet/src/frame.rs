//! Local structure around a cherry after the easy-case screen has passed.
//!
//! For a cherry `{a, b}` of the tree (with `a`, `b` also leaves of the
//! network), the frame captures how the two reticulations above `a` and `b`
//! hang below their deepest common verified vertex `rho`: which parent of
//! each key vertex belongs to which channel, where the channels fork, and
//! whether the channels pass through a shared reticulation. Every
//! `Internal` error here marks a structural guarantee that failed, meaning
//! a bug rather than bad input.

use crate::analysis::{find_rho, find_v, Tables};
use crate::error::{Error, Result};
use crate::network::{Network, VertexId};

/// A cherry `{a, b}` of the tree resolved against the network: leaf
/// vertices, taxon indices, key vertices, and the deepest vertex verified
/// by both.
pub struct CherryContext {
    pub a: String,
    pub b: String,
    pub a_leaf: VertexId,
    pub b_leaf: VertexId,
    pub a_idx: usize,
    pub b_idx: usize,
    pub v_a: VertexId,
    pub v_b: VertexId,
    pub rho: VertexId,
}

pub fn cherry_context(net: &Network, tb: &Tables, a: &str, b: &str) -> Result<CherryContext> {
    let a_idx = tb
        .taxon_index(a)
        .ok_or_else(|| Error::UnknownTaxon(a.to_string()))?;
    let b_idx = tb
        .taxon_index(b)
        .ok_or_else(|| Error::UnknownTaxon(b.to_string()))?;
    Ok(CherryContext {
        a: a.to_string(),
        b: b.to_string(),
        a_leaf: tb.leaf_vertex(a_idx),
        b_leaf: tb.leaf_vertex(b_idx),
        a_idx,
        b_idx,
        v_a: find_v(net, tb, a)?,
        v_b: find_v(net, tb, b)?,
        rho: find_rho(net, tb, a, b)?,
    })
}

/// How the channels from `rho` down to the two key vertices are arranged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// No reticulation lies strictly between `rho` and a key vertex; the
    /// two channels separate at `rho` itself.
    Separate,
    /// The channels pass a deepest shared reticulation, and the junction of
    /// the bypass channel does not sit above it.
    LowJunction,
    /// The channels pass a deepest shared reticulation, and the junction of
    /// the bypass channel sits strictly above it.
    HighJunction,
}

impl Layout {
    /// Column index used by the action tables.
    pub fn column(self) -> usize {
        match self {
            Layout::Separate => 0,
            Layout::LowJunction => 1,
            Layout::HighJunction => 2,
        }
    }
}

/// Channel structure around a cherry, valid once the easy cases failed. The
/// `p` side carries the shared reticulation when there is one; the field
/// suffixes `_a` and `_b` refer to the context's first and second leaf.
pub struct SituationFrame {
    pub layout: Layout,
    /// Deepest reticulation strictly between `rho` and a key vertex.
    pub shared: Option<VertexId>,
    pub p_a: VertexId,
    pub q_a: VertexId,
    pub p_b: VertexId,
    pub q_b: VertexId,
    /// Deepest common ancestor of `p_a` and `p_b`.
    pub p_ab: VertexId,
    /// Deepest common ancestor of `q_a` and `q_b`.
    pub q_ab: VertexId,
}

fn internal(msg: String) -> Error {
    Error::Internal(msg)
}

/// The unique parent of `v` that is a descendant of `side` (or `side`
/// itself), paired with the other parent. Errors unless exactly one parent
/// qualifies.
fn split_parents(
    net: &Network,
    tb: &Tables,
    v: VertexId,
    side: VertexId,
) -> Result<(VertexId, VertexId)> {
    let ps = net.parents(v);
    if ps.len() != 2 {
        return Err(internal(format!("{v} should be a reticulation with two parents")));
    }
    match (tb.is_anc_eq(side, ps[0]), tb.is_anc_eq(side, ps[1])) {
        (true, false) => Ok((ps[0], ps[1])),
        (false, true) => Ok((ps[1], ps[0])),
        (true, true) => Err(internal(format!(
            "both parents of {v} descend from {side}; expected exactly one"
        ))),
        (false, false) => Err(internal(format!(
            "no parent of {v} descends from {side}; expected exactly one"
        ))),
    }
}

/// The unique vertex furthest from the root that is an ancestor of (or
/// equal to) both arguments.
fn deepest_common_ancestor(
    net: &Network,
    tb: &Tables,
    x: VertexId,
    y: VertexId,
) -> Result<VertexId> {
    let cands: Vec<VertexId> = net
        .vertices()
        .filter(|&v| tb.is_anc_eq(v, x) && tb.is_anc_eq(v, y))
        .collect();
    unique_deepest(tb, &cands).ok_or_else(|| {
        internal(format!("the deepest common ancestor of {x} and {y} is not unique"))
    })
}

/// The single vertex in `cands` with no proper descendant in `cands`, if
/// there is exactly one.
fn unique_deepest(tb: &Tables, cands: &[VertexId]) -> Option<VertexId> {
    let mut deepest: Vec<VertexId> = cands
        .iter()
        .copied()
        .filter(|&v| !cands.iter().any(|&w| tb.is_anc(v, w)))
        .collect();
    if deepest.len() == 1 {
        deepest.pop()
    } else {
        None
    }
}

pub fn build_situation_frame(
    net: &Network,
    tb: &Tables,
    cx: &CherryContext,
) -> Result<SituationFrame> {
    for (leaf, v, name) in [(cx.a_leaf, cx.v_a, &cx.a), (cx.b_leaf, cx.v_b, &cx.b)] {
        if net.sole_parent(leaf) != v || !net.is_reticulation(v) {
            return Err(internal(format!(
                "after the easy cases, the key vertex of `{name}` must be its parent and a reticulation"
            )));
        }
    }
    if net.is_reticulation(cx.rho) || net.out_degree(cx.rho) != 2 {
        return Err(internal(format!(
            "the deepest vertex verified by `{}` and `{}` must branch in two",
            cx.a, cx.b
        )));
    }

    let shared_rets: Vec<VertexId> = net
        .reticulations()
        .into_iter()
        .filter(|&z| z != cx.v_a && z != cx.v_b)
        .filter(|&z| tb.is_anc(cx.rho, z) && (tb.is_anc(z, cx.v_a) || tb.is_anc(z, cx.v_b)))
        .collect();

    let (shared, p_a, q_a, p_b, q_b) = if shared_rets.is_empty() {
        let kids = net.children(cx.rho);
        let (p, q) = if kids[0].0 < kids[1].0 {
            (kids[0], kids[1])
        } else {
            (kids[1], kids[0])
        };
        let (p_a, q_a) = split_parents(net, tb, cx.v_a, p)?;
        if !tb.is_anc_eq(q, q_a) {
            return Err(internal(format!(
                "parent {q_a} of {} descends from neither child of {}",
                cx.v_a, cx.rho
            )));
        }
        let (p_b, q_b) = split_parents(net, tb, cx.v_b, p)?;
        if !tb.is_anc_eq(q, q_b) {
            return Err(internal(format!(
                "parent {q_b} of {} descends from neither child of {}",
                cx.v_b, cx.rho
            )));
        }
        (None, p_a, q_a, p_b, q_b)
    } else {
        let mut u = shared_rets[0];
        for &z in &shared_rets[1..] {
            if tb.is_anc(u, z) {
                u = z;
            }
        }
        for &z in &shared_rets {
            if !tb.is_anc_eq(z, u) {
                return Err(internal(format!(
                    "reticulations between {} and the cherry are not totally ordered: {z} and {u}",
                    cx.rho
                )));
            }
        }
        let (p_a, q_a) = split_parents(net, tb, cx.v_a, u)?;
        let (p_b, q_b) = split_parents(net, tb, cx.v_b, u)?;
        (Some(u), p_a, q_a, p_b, q_b)
    };

    let p_ab = deepest_common_ancestor(net, tb, p_a, p_b)?;
    let q_ab = deepest_common_ancestor(net, tb, q_a, q_b)?;
    let layout = match shared {
        None => Layout::Separate,
        Some(u) => {
            if tb.is_anc(q_ab, u) {
                Layout::HighJunction
            } else {
                Layout::LowJunction
            }
        }
    };
    Ok(SituationFrame {
        layout,
        shared,
        p_a,
        q_a,
        p_b,
        q_b,
        p_ab,
        q_ab,
    })
}

/// The first reticulation on the walk from the key vertex of `c` down to
/// the leaf `c` that is an ancestor of neither cherry leaf; the leaf `c`
/// itself when the walk reaches it first. The result is always verified by
/// `c`.
pub fn find_hat_v_c(
    net: &Network,
    tb: &Tables,
    cx: &CherryContext,
    c: &str,
) -> Result<VertexId> {
    let c_idx = tb
        .taxon_index(c)
        .ok_or_else(|| Error::UnknownTaxon(c.to_string()))?;
    let c_leaf = tb.leaf_vertex(c_idx);
    let mut cur = find_v(net, tb, c)?;
    loop {
        if net.is_reticulation(cur)
            && !tb.is_anc(cur, cx.a_leaf)
            && !tb.is_anc(cur, cx.b_leaf)
        {
            break;
        }
        if cur == c_leaf {
            break;
        }
        cur = net
            .children(cur)
            .iter()
            .copied()
            .filter(|&ch| tb.is_anc_eq(ch, c_leaf))
            .min_by_key(|ch| ch.0)
            .ok_or_else(|| {
                internal(format!("walk from the key vertex of `{c}` cannot reach `{c}`"))
            })?;
    }
    if !tb.verifies(c_idx, cur) {
        return Err(internal(format!("`{c}` does not verify the vertex {cur} found above it")));
    }
    Ok(cur)
}

/// Where a vertex sits relative to the four channel segments: on the
/// segment from a fork down to a key-vertex parent, or above a fork.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathClass {
    OnPa,
    OnPb,
    OnQa,
    OnQb,
    AboveP,
    AboveQ,
}

impl PathClass {
    /// Row index in the four-row action tables: the two `p`-side segments
    /// collapse to one row, likewise the `q`-side.
    pub fn row(self) -> usize {
        match self {
            PathClass::OnPa | PathClass::OnPb => 0,
            PathClass::OnQa | PathClass::OnQb => 1,
            PathClass::AboveP => 2,
            PathClass::AboveQ => 3,
        }
    }
}

fn on_segment(tb: &Tables, top: VertexId, bottom: VertexId, v: VertexId) -> bool {
    tb.is_anc_eq(top, v) && tb.is_anc_eq(v, bottom)
}

/// Classify a vertex against the frame, first match wins.
pub fn classify_path(tb: &Tables, f: &SituationFrame, v: VertexId) -> Result<PathClass> {
    if on_segment(tb, f.p_ab, f.p_a, v) {
        Ok(PathClass::OnPa)
    } else if on_segment(tb, f.p_ab, f.p_b, v) {
        Ok(PathClass::OnPb)
    } else if on_segment(tb, f.q_ab, f.q_a, v) {
        Ok(PathClass::OnQa)
    } else if on_segment(tb, f.q_ab, f.q_b, v) {
        Ok(PathClass::OnQb)
    } else if tb.is_anc(v, f.p_ab) {
        Ok(PathClass::AboveP)
    } else if tb.is_anc(v, f.q_ab) {
        Ok(PathClass::AboveQ)
    } else {
        Err(internal(format!("{v} is neither on a channel segment nor above a fork")))
    }
}

/// The unique deepest vertex that is an ancestor of (or equal to) `x` and a
/// proper ancestor of one of the cherry leaves.
pub fn deepest_channel_ancestor(
    net: &Network,
    tb: &Tables,
    cx: &CherryContext,
    x: VertexId,
) -> Result<VertexId> {
    let cands: Vec<VertexId> = net
        .vertices()
        .filter(|&v| tb.is_anc_eq(v, x))
        .filter(|&v| tb.is_anc(v, cx.a_leaf) || tb.is_anc(v, cx.b_leaf))
        .collect();
    unique_deepest(tb, &cands).ok_or_else(|| {
        internal(format!(
            "no unique deepest ancestor of {x} above `{}` or `{}`",
            cx.a, cx.b
        ))
    })
}

/// Is `v` on a path from `rho` down to a key vertex of the cherry?
pub fn on_channel(tb: &Tables, cx: &CherryContext, v: VertexId) -> bool {
    tb.is_anc_eq(cx.rho, v) && (tb.is_anc_eq(v, cx.v_a) || tb.is_anc_eq(v, cx.v_b))
}

/// `x` itself when it lies on a channel path, otherwise its unique deepest
/// proper ancestor that does.
pub fn project_on_channel(
    net: &Network,
    tb: &Tables,
    cx: &CherryContext,
    x: VertexId,
) -> Result<VertexId> {
    if on_channel(tb, cx, x) {
        return Ok(x);
    }
    let cands: Vec<VertexId> = net
        .vertices()
        .filter(|&v| on_channel(tb, cx, v) && tb.is_anc(v, x))
        .collect();
    unique_deepest(tb, &cands).ok_or_else(|| {
        internal(format!("projection of {x} onto the cherry channels is not unique"))
    })
}

/// Junction types for the cherry-sibling table rows, first match wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JunctionType {
    Type1,
    Type2,
    Type3,
    Type4,
}

impl JunctionType {
    pub fn row(self) -> usize {
        match self {
            JunctionType::Type1 => 0,
            JunctionType::Type2 => 1,
            JunctionType::Type3 => 2,
            JunctionType::Type4 => 3,
        }
    }
}

/// Classify a sibling-cherry junction `x` (with channel projection `proj`)
/// against this frame's forks.
pub fn classify_junction(
    tb: &Tables,
    f: &SituationFrame,
    x: VertexId,
    proj: VertexId,
) -> Result<JunctionType> {
    if tb.is_anc_eq(f.p_ab, proj) || (tb.is_anc(proj, f.p_ab) && proj == x) {
        Ok(JunctionType::Type1)
    } else if tb.is_anc_eq(f.q_ab, proj) || (tb.is_anc(proj, f.q_ab) && proj == x) {
        Ok(JunctionType::Type2)
    } else if tb.is_anc(proj, f.p_ab) && proj != x {
        Ok(JunctionType::Type3)
    } else if tb.is_anc(proj, f.q_ab) && proj != x {
        Ok(JunctionType::Type4)
    } else {
        Err(internal(format!("junction {x} fits no type relative to the cherry frame")))
    }
}
