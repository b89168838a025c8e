//! Randomized properties: the reduction-based decision procedure must agree
//! with the brute-force oracle, and reductions must keep networks valid and
//! visible.

use rvnet::analysis::{is_reticulation_visible, Tables};
use rvnet::detect::{displays, tree_containment, Answer};
use rvnet::edit::reduce_cherry;
use rvnet::enewick::{write_enewick, write_newick};
use rvnet::gen::{random_rv_network, random_tree, sample_displayed_tree};
use rvnet::oracle::displays_oracle;

const KNOWN_LABELS: [&str; 18] = [
    "EC1", "EC2", "EC3", "EC4", "EC5", "EC6", "EC7", "SC1.1", "SC1.2", "SC1.3", "SC1.4",
    "SC1.5", "SC2.1", "SC2.2", "SC2.3", "SC2.4", "TrivialYes", "TwoLeafYes",
];

fn r_targets(m: usize) -> Vec<usize> {
    let cap = 3 * m - 3;
    let mut ts = vec![0, 1, 2, m, 2 * m - 2, cap];
    ts.retain(|&r| r <= cap);
    ts.sort_unstable();
    ts.dedup();
    ts
}

#[test]
fn decision_agrees_with_oracle() {
    let mut checked = 0usize;
    for m in 2..=7 {
        for r in r_targets(m) {
            for seed in 0..3u64 {
                let base = (m as u64) * 10_000 + (r as u64) * 100 + seed;
                let (net, _achieved) = random_rv_network(m, r, base).unwrap();
                let displayed = sample_displayed_tree(&net, base + 1).unwrap();
                let random = random_tree(m, base + 2).unwrap();
                for tree in [&displayed, &random] {
                    let fast = displays(&net, tree).unwrap_or_else(|e| {
                        panic!(
                            "decision failed ({e}) on m={m} r={r} seed={seed}\n  net: {}\n  tree: {}",
                            write_enewick(&net),
                            write_newick(tree)
                        )
                    });
                    let slow = displays_oracle(&net, tree, 25).unwrap();
                    assert_eq!(
                        fast,
                        slow,
                        "disagreement on m={m} r={r} seed={seed}\n  net: {}\n  tree: {}",
                        write_enewick(&net),
                        write_newick(tree)
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 150, "only {checked} comparisons ran");
}

#[test]
fn traces_use_known_labels_and_shrink() {
    for m in 3..=6 {
        for seed in 40..44u64 {
            let (net, _) = random_rv_network(m, m, seed).unwrap();
            let tree = sample_displayed_tree(&net, seed + 9).unwrap();
            let out = tree_containment(&net, &tree).unwrap();
            assert_eq!(out.answer, Answer::Yes);
            assert!(out.trace.len() <= 12 * m + 4);
            let mut last = usize::MAX;
            for step in &out.trace {
                assert!(
                    KNOWN_LABELS.contains(&step.label),
                    "unknown label {}",
                    step.label
                );
                assert!(step.taxa_before <= last.max(step.taxa_before));
                last = step.taxa_before;
            }
            let last_label = out.trace.last().unwrap().label;
            assert!(last_label == "TrivialYes" || last_label == "TwoLeafYes");
        }
    }
}

#[test]
fn cherry_reduction_keeps_networks_valid_and_visible() {
    let mut reduced = 0usize;
    for m in 3..=6 {
        for seed in 70..90u64 {
            let (net, _) = random_rv_network(m, 2.min(m - 1), seed).unwrap();
            let cherry = net.taxa().iter().find_map(|&a| {
                let la = net.leaf_of(a)?;
                let p = net.sole_parent(la);
                net.children(p)
                    .iter()
                    .find(|&&c| c != la && net.is_leaf(c))
                    .map(|&c| (a.to_string(), net.label(c).unwrap().to_string()))
            });
            let Some((a, b)) = cherry else { continue };
            let (smaller, _kept) = reduce_cherry(&net, &a, &b).unwrap();
            smaller.ensure_valid().unwrap();
            let tb = Tables::build(&smaller).unwrap();
            assert!(is_reticulation_visible(&smaller, &tb));
            assert_eq!(smaller.taxon_count(), net.taxon_count() - 1);
            reduced += 1;
        }
    }
    assert!(reduced >= 5, "only {reduced} cherries were reduced");
}
