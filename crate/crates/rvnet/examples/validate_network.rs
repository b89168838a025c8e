//! Parse a network from extended Newick and report its shape.

use rvnet::enewick::parse_enewick;
use rvnet::gen::bounds_report;

fn main() -> Result<(), rvnet::error::Error> {
    let net = parse_enewick("((x,(z)#H1),(y,#H1));")?;
    let report = bounds_report(&net)?;

    println!("taxa:          {}", report.taxa);
    println!("vertices:      {} (bound {})", report.vertices, report.vertex_bound);
    println!("reticulations: {} (bound {})", report.reticulations, report.reticulation_bound);
    println!(
        "tight:         vertices={} reticulations={}",
        report.vertices_tight, report.reticulations_tight
    );
    Ok(())
}
