//! Cross-check the polynomial decision against the exhaustive oracle
//! over a batch of random instances.

use rvnet::detect::displays;
use rvnet::gen::{random_rv_network, random_tree, sample_displayed_tree};
use rvnet::oracle::displays_oracle;

fn main() -> Result<(), rvnet::error::Error> {
    let mut checked = 0;
    let mut yes = 0;

    for m in 2..=6 {
        for seed in 0..10u64 {
            let (net, _) = random_rv_network(m, 3 * m - 3, seed)?;
            let displayed = sample_displayed_tree(&net, seed + 100)?;
            let other = random_tree(m, seed + 200)?;

            for tree in [&displayed, &other] {
                let fast = displays(&net, tree)?;
                let slow = displays_oracle(&net, tree, 25)?;
                assert_eq!(fast, slow, "disagreement at m={m} seed={seed}");
                checked += 1;
                if fast {
                    yes += 1;
                }
            }
        }
    }

    println!("{checked} instances checked, {yes} displayed, zero disagreements");
    Ok(())
}
