//! Brute-force containment by exhaustive reticulation resolution.
//!
//! Resolving a network picks, for every reticulation, which incoming arc
//! survives; deleting the others and tidying yields a displayed tree.
//! Enumerating all `2^r` resolutions gives a slow but independently trusted
//! answer to "does this network display that tree", used to cross-check the
//! polynomial containment engine. Everything here goes through the raw edit
//! workspace on purpose: the oracle must not share the engine's arc-choice
//! logic.

use std::collections::BTreeSet;

use crate::edit::Work;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::tree::PhyloTree;

/// Hard ceiling on reticulation count for exhaustive enumeration.
pub const DEFAULT_MAX_RETICULATIONS: usize = 20;

/// Resolve the network with one surviving parent per reticulation.
/// `choice[k]` selects the kept incoming arc (index into the stored parent
/// list) of the k-th reticulation in vertex-id order.
pub fn resolve(net: &Network, choice: &[usize]) -> Result<PhyloTree> {
    net.ensure_valid()?;
    let rets = net.reticulations();
    if choice.len() != rets.len() {
        return Err(Error::Param(format!(
            "expected {} resolution choices, got {}",
            rets.len(),
            choice.len()
        )));
    }
    let mut w = Work::from_network(net);
    for (k, &h) in rets.iter().enumerate() {
        let parents = net.parents(h);
        let keep = *choice.get(k).expect("length checked");
        if keep >= parents.len() {
            return Err(Error::Param(format!(
                "resolution choice {keep} out of range for reticulation {h}"
            )));
        }
        for (i, &p) in parents.iter().enumerate() {
            if i != keep {
                w.delete_arc(p, h)?;
            }
        }
    }
    w.tidy()?;
    PhyloTree::from_network(w.into_network()?)
}

fn check_ret_budget(net: &Network, max_rets: usize) -> Result<usize> {
    let r = net.reticulation_count();
    if r > max_rets {
        return Err(Error::Param(format!(
            "network has {r} reticulations; the exhaustive oracle is capped at {max_rets}"
        )));
    }
    Ok(r)
}

/// All distinct displayed trees, as canonical Newick strings.
pub fn display_set(net: &Network, max_rets: usize) -> Result<BTreeSet<String>> {
    net.ensure_valid()?;
    let r = check_ret_budget(net, max_rets)?;
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << r) {
        let choice: Vec<usize> = (0..r).map(|k| ((mask >> k) & 1) as usize).collect();
        let t = resolve(net, &choice)?;
        out.insert(t.canonical_newick());
    }
    Ok(out)
}

/// Does the network display the tree? Exhaustive, with early exit.
pub fn displays_oracle(net: &Network, tree: &PhyloTree, max_rets: usize) -> Result<bool> {
    net.ensure_valid()?;
    let nt = net.taxa();
    let tt = tree.taxa();
    if nt != tt {
        return Err(Error::TaxaMismatch(format!(
            "network has {{{}}}, tree has {{{}}}",
            nt.join(","),
            tt.join(",")
        )));
    }
    let r = check_ret_budget(net, max_rets)?;
    let target = tree.canonical_newick();
    for mask in 0u64..(1u64 << r) {
        let choice: Vec<usize> = (0..r).map(|k| ((mask >> k) & 1) as usize).collect();
        if resolve(net, &choice)?.canonical_newick() == target {
            return Ok(true);
        }
    }
    Ok(false)
}
