//! Command-line front end: validate, check, oracle, gen, bench.
//!
//! Results go to stdout; diagnostics and traces go to stderr. Exit codes:
//! 0 success, 1 answer "no" under --status-by-answer, 2 input error,
//! 3 internal invariant failure or oracle disagreement.

use crate::analysis::{is_reticulation_visible, Tables};
use crate::arclist::parse_arclist;
use crate::detect::{tree_containment, Answer};
use crate::enewick::{parse_enewick, parse_newick, write_enewick};
use crate::error::{Error, Result};
use crate::gen::{extremal_network, random_rv_network, random_tree, sample_displayed_tree};
use crate::network::Network;
use crate::oracle::{display_set, displays_oracle};
use crate::tree::PhyloTree;
use clap::{Args, Parser, Subcommand};
use std::time::Instant;

const ORACLE_RET_CAP: usize = 20;

/// Print one result line; reports whether the reader is still there, so
/// loops can stop quietly when piped into `head`.
fn emit(line: std::fmt::Arguments) -> Result<bool> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_fmt(line).and_then(|()| out.write_all(b"\n")) {
        Ok(()) => Ok(true),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(false),
        Err(e) => Err(Error::Param(format!("cannot write to stdout: {e}"))),
    }
}

#[derive(Parser)]
#[command(name = "rvnet", version, about = "Tree containment for reticulation-visible networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a network file and report its size, bounds, and visibility
    Validate { net: String },
    /// Decide whether the network displays the tree
    Check {
        net: String,
        tree: String,
        /// Print one `<case_label> <action>` line per reduction to stderr
        #[arg(long)]
        trace: bool,
        /// Re-check the answer against the brute-force oracle (needs r <= 20)
        #[arg(long)]
        oracle_verify: bool,
        /// Exit 1 when the answer is no
        #[arg(long)]
        status_by_answer: bool,
    },
    /// Brute-force answers by enumerating reticulation resolutions
    Oracle {
        net: String,
        tree: Option<String>,
        /// Print every displayed tree instead of deciding one
        #[arg(long, conflicts_with = "tree")]
        display_set: bool,
        /// Refuse networks with more reticulations than this
        #[arg(long, default_value_t = ORACLE_RET_CAP)]
        max_ret: usize,
    },
    /// Emit a generated network as extended Newick
    #[command(subcommand)]
    Gen(GenCommand),
    /// Time tree containment over generated instances, CSV to stdout
    Bench {
        #[arg(long, default_value_t = 8)]
        max_leaves: usize,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// The family attaining n = 8m-7 and r = 3m-3 exactly
    Extremal {
        #[arg(long)]
        leaves: usize,
    },
    /// Random reticulation-visible network (placed reticulations may fall
    /// short of the request; the count achieved is reported on stderr)
    Random(RandomArgs),
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    leaves: usize,
    #[arg(long)]
    rets: usize,
    #[arg(long)]
    seed: u64,
}

fn read_network(path: &str) -> Result<Network> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Param(format!("cannot read {path}: {e}")))?;
    if text.trim_start().starts_with('#') {
        parse_arclist(&text)
    } else {
        parse_enewick(&text)
    }
}

fn read_tree(path: &str) -> Result<PhyloTree> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Param(format!("cannot read {path}: {e}")))?;
    parse_newick(&text)
}

fn cmd_validate(path: &str) -> Result<i32> {
    let net = read_network(path)?;
    let tb = Tables::build(&net)?;
    let m = net.taxon_count();
    println!(
        "m={} n={} r={} visible={} n_bound={} r_bound={}",
        m,
        net.vertex_count(),
        net.reticulation_count(),
        is_reticulation_visible(&net, &tb),
        8 * m - 7,
        3 * m - 3,
    );
    Ok(0)
}

fn cmd_check(
    net_path: &str,
    tree_path: &str,
    trace: bool,
    oracle_verify: bool,
    status_by_answer: bool,
) -> Result<i32> {
    let net = read_network(net_path)?;
    let tree = read_tree(tree_path)?;
    let r = net.reticulation_count();
    if oracle_verify && r > ORACLE_RET_CAP {
        return Err(Error::Param(format!(
            "--oracle-verify needs at most {ORACLE_RET_CAP} reticulations, network has {r}"
        )));
    }
    let out = tree_containment(&net, &tree)?;
    if trace {
        for step in &out.trace {
            eprintln!("{step}");
        }
    }
    println!("{}", out.answer);
    if oracle_verify {
        let expect = displays_oracle(&net, &tree, ORACLE_RET_CAP)?;
        if expect != (out.answer == Answer::Yes) {
            eprintln!(
                "oracle disagreement: algorithm says {}, oracle says {}",
                out.answer,
                if expect { "yes" } else { "no" }
            );
            return Ok(3);
        }
    }
    if status_by_answer && out.answer == Answer::No {
        return Ok(1);
    }
    Ok(0)
}

fn cmd_oracle(
    net_path: &str,
    tree_path: Option<&str>,
    list: bool,
    max_ret: usize,
) -> Result<i32> {
    let net = read_network(net_path)?;
    if list {
        for line in display_set(&net, max_ret)? {
            if !emit(format_args!("{line}"))? {
                break;
            }
        }
        return Ok(0);
    }
    let Some(tree_path) = tree_path else {
        return Err(Error::Param(
            "give a tree file or --display-set".into(),
        ));
    };
    let tree = read_tree(tree_path)?;
    let yes = displays_oracle(&net, &tree, max_ret)?;
    println!("{}", if yes { "yes" } else { "no" });
    Ok(0)
}

fn cmd_gen(cmd: &GenCommand) -> Result<i32> {
    match cmd {
        GenCommand::Extremal { leaves } => {
            println!("{}", write_enewick(&extremal_network(*leaves)?));
        }
        GenCommand::Random(a) => {
            let (net, achieved) = random_rv_network(a.leaves, a.rets, a.seed)?;
            if achieved < a.rets {
                eprintln!("placed {achieved} of {} reticulations", a.rets);
            }
            println!("{}", write_enewick(&net));
        }
    }
    Ok(0)
}

fn cmd_bench(max_leaves: usize, samples: usize, seed: u64) -> Result<i32> {
    if !emit(format_args!("m,n,r,trial,answer,micros"))? {
        return Ok(0);
    }
    for m in 1..=max_leaves {
        let r_target = (3 * m).saturating_sub(3);
        for t in 0..samples {
            let base = seed
                .wrapping_add((m as u64) << 32)
                .wrapping_add((t as u64) << 8);
            let (net, _) = random_rv_network(m, r_target, base)?;
            let displayed = sample_displayed_tree(&net, base + 1)?;
            let other = random_tree(m, base + 2)?;
            for (trial, tree) in [(t, &displayed), (samples + t, &other)] {
                let start = Instant::now();
                let out = tree_containment(&net, tree)?;
                let micros = start.elapsed().as_micros();
                let alive = emit(format_args!(
                    "{},{},{},{},{},{}",
                    m,
                    net.vertex_count(),
                    net.reticulation_count(),
                    trial,
                    out.answer,
                    micros
                ))?;
                if !alive {
                    return Ok(0);
                }
            }
        }
    }
    Ok(0)
}

/// Parse std::env::args and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Validate { net } => cmd_validate(net),
        Command::Check {
            net,
            tree,
            trace,
            oracle_verify,
            status_by_answer,
        } => cmd_check(net, tree, *trace, *oracle_verify, *status_by_answer),
        Command::Oracle {
            net,
            tree,
            display_set,
            max_ret,
        } => cmd_oracle(net, tree.as_deref(), *display_set, *max_ret),
        Command::Gen(g) => cmd_gen(g),
        Command::Bench {
            max_leaves,
            samples,
            seed,
        } => cmd_bench(*max_leaves, *samples, *seed),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
