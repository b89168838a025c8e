//! Generate networks: the extremal family and random reticulation-visible
//! instances, round-tripped through the text formats.

use rvnet::arclist::write_arclist;
use rvnet::enewick::{parse_enewick, write_enewick};
use rvnet::gen::{extremal_network, random_rv_network};
use rvnet::iso::isomorphic;

fn main() -> Result<(), rvnet::error::Error> {
    let ext = extremal_network(3)?;
    println!("extremal m=3: {}", write_enewick(&ext));

    let (rand, achieved) = random_rv_network(4, 6, 5)?;
    println!("random m=4 r={achieved}: {}", write_enewick(&rand));

    let reparsed = parse_enewick(&write_enewick(&rand))?;
    println!("round trip isomorphic: {}", isomorphic(&rand, &reparsed));

    println!("arc list form:\n{}", write_arclist(&rand));
    Ok(())
}
