//! Arc-list reading and writing.
//!
//! Format: a header line `# taxa: x, y, z` followed by one `tail -> head`
//! line per arc. A name from the header denotes that taxon's leaf; any other
//! name is an internal vertex. The writer names internal vertices `_<id>`,
//! which can never collide with taxa because taxon labels may not start with
//! an underscore. A single taxon with no arcs denotes the one-vertex
//! network. As with the Newick reader, only format problems are rejected
//! here; structural problems surface through [`Network::validate`].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::network::{Network, NetworkBuilder, VertexId};

fn valid_taxon(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('_')
        && name
            .bytes()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, b'_' | b'.' | b'|' | b'-'))
}

pub fn parse_arclist(input: &str) -> Result<Network> {
    let mut taxa: Vec<String> = Vec::new();
    let mut header_seen = false;
    let mut b = NetworkBuilder::new();
    let mut by_name: HashMap<String, VertexId> = HashMap::new();
    let mut arcs_seen: HashMap<(VertexId, VertexId), ()> = HashMap::new();
    let mut arc_count = 0usize;

    let mut offset = 0usize;
    for line in input.split_inclusive('\n') {
        let pos = offset;
        offset += line.len();
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            let rest = line.strip_prefix("# taxa:").ok_or(Error::Parse {
                pos,
                msg: "first line must be `# taxa: <comma-separated labels>`".to_string(),
            })?;
            for name in rest.split(',') {
                let name = name.trim();
                if !valid_taxon(name) {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("invalid taxon label `{name}`"),
                    });
                }
                if taxa.iter().any(|t| t == name) {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("taxon `{name}` listed twice in header"),
                    });
                }
                taxa.push(name.to_string());
            }
            for t in &taxa {
                by_name.insert(t.clone(), b.add_vertex(Some(t)));
            }
            header_seen = true;
            continue;
        }
        let (lhs, rhs) = line.split_once("->").ok_or(Error::Parse {
            pos,
            msg: format!("expected `tail -> head`, found `{line}`"),
        })?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        if lhs.is_empty() || rhs.is_empty() || lhs.contains(char::is_whitespace) || rhs.contains(char::is_whitespace)
        {
            return Err(Error::Parse {
                pos,
                msg: format!("malformed arc line `{line}`"),
            });
        }
        let mut vertex = |b: &mut NetworkBuilder, name: &str| -> VertexId {
            *by_name
                .entry(name.to_string())
                .or_insert_with(|| b.add_vertex(None))
        };
        let t = vertex(&mut b, lhs);
        let h = vertex(&mut b, rhs);
        if arcs_seen.insert((t, h), ()).is_some() {
            return Err(Error::Parse {
                pos,
                msg: format!("duplicate arc `{lhs} -> {rhs}`"),
            });
        }
        b.add_arc(t, h);
        arc_count += 1;
    }

    if !header_seen {
        return Err(Error::Parse {
            pos: 0,
            msg: "missing `# taxa:` header".to_string(),
        });
    }
    if arc_count == 0 {
        if taxa.len() == 1 {
            return Ok(b.build());
        }
        return Err(Error::Parse {
            pos: input.len(),
            msg: format!("{} taxa listed but no arcs given", taxa.len()),
        });
    }
    for t in &taxa {
        let v = by_name[t];
        if !arcs_seen.keys().any(|&(a, bb)| a == v || bb == v) {
            return Err(Error::Parse {
                pos: input.len(),
                msg: format!("taxon `{t}` does not appear in any arc"),
            });
        }
    }
    Ok(b.build())
}

/// Write the arc list: leaves by label, internal vertices as `_<id>`, arcs
/// in (tail id, stored child order) order.
pub fn write_arclist(net: &Network) -> String {
    let mut out = String::from("# taxa: ");
    out.push_str(&net.taxa().join(", "));
    out.push('\n');
    let name = |v: VertexId| -> String {
        match net.label(v) {
            Some(l) => l.to_string(),
            None => format!("_{}", v.0),
        }
    };
    for (t, h) in net.arcs() {
        out.push_str(&format!("{} -> {}\n", name(t), name(h)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_small_network() {
        let input = "# taxa: x, y, z\nr -> s\nr -> t\ns -> x\ns -> h\nt -> h\nt -> y\nh -> z\n";
        let n = parse_arclist(input).unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.taxa(), vec!["x", "y", "z"]);
        assert_eq!(n.reticulation_count(), 1);
        let s = write_arclist(&n);
        let n2 = parse_arclist(&s).unwrap();
        assert!(n2.validate().is_empty());
        assert_eq!(write_arclist(&n2), s);
    }

    #[test]
    fn single_vertex() {
        let n = parse_arclist("# taxa: only\n").unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.vertex_count(), 1);
        let s = write_arclist(&n);
        assert_eq!(s, "# taxa: only\n");
        assert!(parse_arclist(&s).is_ok());
    }

    #[test]
    fn missing_taxon_in_arcs_rejected() {
        let err = parse_arclist("# taxa: x, y\nr -> x\n").unwrap_err();
        assert!(err.to_string().contains("does not appear"));
    }

    #[test]
    fn duplicate_arc_rejected() {
        let err = parse_arclist("# taxa: x\nr -> x\nr -> x\n").unwrap_err();
        assert!(err.to_string().contains("duplicate arc"));
    }

    #[test]
    fn several_taxa_need_arcs() {
        assert!(parse_arclist("# taxa: x, y\n").is_err());
    }

    #[test]
    fn header_required() {
        assert!(parse_arclist("r -> x\n").is_err());
        assert!(parse_arclist("").is_err());
    }

    #[test]
    fn bad_labels_rejected() {
        assert!(parse_arclist("# taxa: _x\n_0 -> _x\n").is_err());
        assert!(parse_arclist("# taxa: x, x\nr -> x\n").is_err());
    }
}
