//! Text formats: whitespace edge lists and one-id-per-line node sets.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{BuildReport, NodeSet, WeightedGraph};

/// Node ids above this bound are rejected as overflow.
pub const MAX_NODE_ID: u64 = u32::MAX as u64 - 1;

#[derive(Debug, Clone, Default)]
pub struct EdgeListOptions {
    /// Treat ids as opaque labels and map them to dense ids in order of appearance.
    pub relabel: bool,
    /// Add self-loop weight to the node degree instead of dropping it.
    pub fold_self_loops: bool,
}

/// Reads `u v [w]` lines; `#` starts a comment and `w` defaults to 1.
pub fn load_edge_list<R: BufRead>(reader: R, options: &EdgeListOptions) -> Result<(WeightedGraph, BuildReport)> {
    let mut edges = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut label_ids: HashMap<String, usize> = HashMap::new();
    let mut max_id: Option<usize> = None;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected `u v [w]`, found {} fields", fields.len()),
            });
        }
        let mut endpoint = |token: &str| -> Result<usize> {
            if options.relabel {
                if let Some(&id) = label_ids.get(token) {
                    return Ok(id);
                }
                let id = labels.len();
                labels.push(token.to_string());
                label_ids.insert(token.to_string(), id);
                Ok(id)
            } else {
                parse_id(token, lineno)
            }
        };
        let u = endpoint(fields[0])?;
        let v = endpoint(fields[1])?;
        let w = match fields.get(2) {
            Some(tok) => tok.parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad weight `{tok}`"),
            })?,
            None => 1.0,
        };
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::NegativeWeight { line: lineno, weight: w });
        }
        max_id = Some(max_id.map_or(u.max(v), |m: usize| m.max(u).max(v)));
        edges.push((u, v, w));
    }

    let node_count = if options.relabel {
        labels.len()
    } else {
        max_id.map_or(0, |m| m + 1)
    };
    let (mut graph, report) = WeightedGraph::from_edges_with(node_count, &edges, options.fold_self_loops)?;
    if options.relabel {
        graph.set_labels(labels);
    }
    Ok((graph, report))
}

fn parse_id(token: &str, line: usize) -> Result<usize> {
    match token.parse::<u64>() {
        Ok(id) if id <= MAX_NODE_ID => Ok(id as usize),
        Ok(_) => Err(Error::IdOverflow {
            line,
            id: token.to_string(),
        }),
        Err(_) if !token.is_empty() && token.chars().all(|c| c.is_ascii_digit()) => Err(Error::IdOverflow {
            line,
            id: token.to_string(),
        }),
        Err(_) => Err(Error::Parse {
            line,
            message: format!("bad node id `{token}`"),
        }),
    }
}

/// Reads a node-set file: one id per line, `#` comments. Ids resolve through
/// the graph's labels when it was loaded with relabelling.
pub fn read_node_set<R: BufRead>(reader: R, graph: &WeightedGraph) -> Result<NodeSet> {
    let index = graph.label_index();
    let mut ids = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        for token in content.split_whitespace() {
            let id = match &index {
                Some(map) => *map.get(token).ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: format!("unknown node label `{token}`"),
                })?,
                None => parse_id(token, lineno)?,
            };
            if id >= graph.node_count() {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("node id {id} out of range (graph has {} nodes)", graph.node_count()),
                });
            }
            ids.push(id);
        }
    }
    NodeSet::new(graph, ids)
}

/// Parses inline ids such as `"0,1,5"` or `"0 1 5"`.
pub fn parse_inline_set(text: &str, graph: &WeightedGraph) -> Result<NodeSet> {
    let normalized = text.replace(',', "\n");
    read_node_set(normalized.as_bytes(), graph)
}

pub fn write_edge_list<W: Write>(graph: &WeightedGraph, mut out: W) -> std::io::Result<()> {
    for (u, v, w) in graph.edges() {
        writeln!(out, "{} {} {}", graph.label(u), graph.label(v), w)?;
    }
    for u in 0..graph.node_count() {
        let l = graph.self_loop_weight(u);
        if l > 0.0 {
            writeln!(out, "{} {} {}", graph.label(u), graph.label(u), l)?;
        }
    }
    Ok(())
}

pub fn write_node_set<W: Write>(graph: &WeightedGraph, set: &NodeSet, mut out: W) -> std::io::Result<()> {
    for u in set.iter() {
        writeln!(out, "{}", graph.label(u))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<(WeightedGraph, BuildReport)> {
        load_edge_list(text.as_bytes(), &EdgeListOptions::default())
    }

    #[test]
    fn path_graph() {
        let (g, _) = load("0 1\n1 2").unwrap();
        assert_eq!(g.degrees(), &[1.0, 2.0, 1.0]);
        assert_eq!(g.total_volume(), 4.0);
    }

    #[test]
    fn duplicate_merge_rule() {
        let (g, _) = load("0 1 2.0\n0 1 3.0").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge_weight(0, 1), 5.0);
    }

    #[test]
    fn self_loop_strip_rule() {
        let (g, report) = load("0 0 1.0\n0 1 1.0").unwrap();
        assert_eq!(g.degrees(), &[1.0, 1.0]);
        assert_eq!(report.self_loops_dropped, 1);
    }

    #[test]
    fn comments_and_blank_lines() {
        let (g, _) = load("# header\n\n0 1 # trailing\n  1 2 0.5\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(2), 0.5);
    }

    #[test]
    fn load_errors() {
        assert!(matches!(load("0 1 -2"), Err(Error::NegativeWeight { line: 1, .. })));
        assert!(matches!(load("0 99999999999"), Err(Error::IdOverflow { line: 1, .. })));
        assert!(matches!(load("0 x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load("# nothing\n"), Err(Error::EmptyGraph)));
        assert!(matches!(load("0 1 2 3"), Err(Error::Parse { .. })));
    }

    #[test]
    fn relabel_keeps_names() {
        let opts = EdgeListOptions {
            relabel: true,
            ..Default::default()
        };
        let (g, _) = load_edge_list("a b\nb c 2".as_bytes(), &opts).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.label(2), "c");
        let s = read_node_set("c\nb\n".as_bytes(), &g).unwrap();
        assert_eq!(s.members(), &[1, 2]);
        let mut out = Vec::new();
        write_edge_list(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "a b 1\nb c 2\n");
    }

    #[test]
    fn node_set_file_errors_name_line() {
        let (g, _) = load("0 1\n1 2").unwrap();
        let err = read_node_set("0\n# c\n7\n".as_bytes(), &g).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let s = parse_inline_set("2,0", &g).unwrap();
        assert_eq!(s.members(), &[0, 2]);
    }
}
