//! Watch the reduction sequence that decides a containment query.

use rvnet::detect::tree_containment;
use rvnet::enewick::write_enewick;
use rvnet::gen::{random_rv_network, sample_displayed_tree};

fn main() -> Result<(), rvnet::error::Error> {
    let (net, _) = random_rv_network(6, 9, 42)?;
    let tree = sample_displayed_tree(&net, 7)?;

    println!("network: {}", write_enewick(&net));
    let out = tree_containment(&net, &tree)?;
    for step in &out.trace {
        println!("  {step}");
    }
    println!("answer: {}", out.answer);
    Ok(())
}
