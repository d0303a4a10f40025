//! Line-oriented poset files.
//!
//! ```text
//! # comment
//! node r
//! node a colour=red
//! node i irrational
//! edge r a
//! ```
//!
//! `edge a b` declares the covering relation `a < b`; the loader closes the
//! order transitively and rejects cycles.

use super::{FinPoset, Node, PosetError};
use std::fmt::Write;

pub fn parse_poset(text: &str) -> Result<FinPoset, PosetError> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let err = |msg: String| PosetError::Parse { line, msg };
        match words.next() {
            Some("node") => {
                let name = words
                    .next()
                    .ok_or_else(|| err("`node` needs an id".into()))?;
                let mut node = Node::new(name);
                for attr in words {
                    if attr == "irrational" {
                        node.irrational = true;
                    } else if let Some(tag) = attr.strip_prefix("colour=") {
                        if tag.is_empty() {
                            return Err(err("empty colour tag".into()));
                        }
                        node.colour = Some(tag.to_string());
                    } else {
                        return Err(err(format!("unknown node attribute `{attr}`")));
                    }
                }
                if nodes.iter().any(|n| n.name == node.name) {
                    return Err(err(format!("duplicate node `{}`", node.name)));
                }
                nodes.push(node);
            }
            Some("edge") => {
                let (Some(a), Some(b), None) = (words.next(), words.next(), words.next()) else {
                    return Err(err("`edge` takes exactly two ids".into()));
                };
                edges.push((line, a.to_string(), b.to_string()));
            }
            Some(other) => return Err(err(format!("unknown directive `{other}`"))),
            None => unreachable!(),
        }
    }
    let mut rel = Vec::with_capacity(edges.len());
    for (line, a, b) in &edges {
        let find = |name: &str| {
            nodes
                .iter()
                .position(|n| n.name == name)
                .ok_or_else(|| PosetError::Parse {
                    line: *line,
                    msg: format!("unknown node `{name}`"),
                })
        };
        rel.push((find(a)?, find(b)?));
    }
    FinPoset::new(nodes, &rel)
}

/// Writes nodes in index order followed by the covering edges.
pub fn render_poset(p: &FinPoset) -> String {
    let mut out = String::new();
    for node in p.nodes() {
        out.push_str("node ");
        out.push_str(&node.name);
        if let Some(c) = &node.colour {
            let _ = write!(out, " colour={c}");
        }
        if node.irrational {
            out.push_str(" irrational");
        }
        out.push('\n');
    }
    for (a, b) in p.covers() {
        let _ = writeln!(out, "edge {} {}", p.name(a), p.name(b));
    }
    out
}

/// Graphviz rendering of the Hasse diagram, drawn bottom-up. Irrational
/// nodes are dashed.
pub fn to_dot(p: &FinPoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for node in p.nodes() {
        let label = match &node.colour {
            Some(c) => format!("{}:{}", node.name, c),
            None => node.name.clone(),
        };
        let style = if node.irrational {
            ", style=dashed"
        } else {
            ""
        };
        let _ = writeln!(out, "  \"{}\" [label=\"{}\"{}];", node.name, label, style);
    }
    for (a, b) in p.covers() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", p.name(a), p.name(b));
    }
    out.push_str("}\n");
    out
}
