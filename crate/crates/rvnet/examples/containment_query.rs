//! Ask whether a network displays each of three candidate trees.

use rvnet::detect::tree_containment;
use rvnet::enewick::{parse_enewick, parse_newick};

fn main() -> Result<(), rvnet::error::Error> {
    let net = parse_enewick("((x,(z)#H1),(y,#H1));")?;

    for newick in ["((x,z),y);", "(x,(y,z));", "((x,y),z);"] {
        let tree = parse_newick(newick)?;
        let out = tree_containment(&net, &tree)?;
        println!("{newick}  ->  {}", out.answer);
    }
    Ok(())
}
