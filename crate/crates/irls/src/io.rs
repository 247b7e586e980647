//! Text formats: edge lists, planted communities, attribute tables and
//! detection results. Every writer is byte-stable for a given input.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use irls_core::graph::GraphBuilder;
use irls_core::synth::GroundTruth;
use irls_core::{Layer, NodeSet, WeightedGraph};

use crate::error::{Error, Result};

/// Splits off a `#` comment and tokenizes the rest.
fn tokens(line: &str) -> Vec<&str> {
    line.split('#').next().unwrap_or("").split_whitespace().collect()
}

fn lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader.lines().enumerate().map(|(i, l)| l.map(|l| (i + 1, l)).map_err(|e| Error::parse(i + 1, e.to_string())))
}

/// Reads `u v` or `u v w` lines. Labels get dense indices in order of first
/// appearance; two-token lines have weight 1.
pub fn read_graph<R: BufRead>(reader: R) -> Result<WeightedGraph> {
    let mut builder = GraphBuilder::new();
    for item in lines(reader) {
        let (no, line) = item?;
        match tokens(&line)[..] {
            [] => {}
            [u, v] => builder.edge(u, v, 1.0)?,
            [u, v, w] => {
                let w: f64 = w.parse().map_err(|_| Error::parse(no, format!("bad weight {w:?}")))?;
                builder.edge(u, v, w)?;
            }
            _ => return Err(Error::parse(no, "expected `u v` or `u v w`")),
        }
    }
    Ok(builder.build()?)
}

/// One edge per line, ordered by `(min label, max label)`. Unit weights are
/// left implicit.
pub fn write_graph<W: Write>(g: &WeightedGraph, mut out: W) -> Result<(), std::io::Error> {
    let mut edges: Vec<(&str, &str, f64)> = g
        .edges()
        .map(|(u, v, w)| {
            let (a, b) = (g.label(u), g.label(v));
            if a <= b { (a, b, w) } else { (b, a, w) }
        })
        .collect();
    edges.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    for (a, b, w) in edges {
        if w == 1.0 {
            writeln!(out, "{a} {b}")?;
        } else {
            writeln!(out, "{a} {b} {w}")?;
        }
    }
    out.flush()
}

fn index_token(no: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::parse(no, format!("bad {what} {tok:?}")))
}

/// Reads `layer community label...` lines into planted layers.
///
/// Layer and community indices only group labels; layers come out in index
/// order, communities in order of their index within the layer.
pub fn read_truth<R: BufRead>(reader: R, g: &WeightedGraph) -> Result<GroundTruth> {
    let mut groups: BTreeMap<usize, BTreeMap<usize, Vec<usize>>> = BTreeMap::new();
    let mut seen: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
    for item in lines(reader) {
        let (no, line) = item?;
        let toks = tokens(&line);
        if toks.is_empty() {
            continue;
        }
        if toks.len() < 2 {
            return Err(Error::parse(no, "expected `layer community label...`"));
        }
        let layer = index_token(no, toks[0], "layer index")?;
        let community = index_token(no, toks[1], "community index")?;
        let marks = seen.entry(layer).or_insert_with(|| vec![false; g.node_count()]);
        let members = groups.entry(layer).or_default().entry(community).or_default();
        for label in &toks[2..] {
            let v = g.resolve(label)?;
            if std::mem::replace(&mut marks[v], true) {
                return Err(Error::parse(no, format!("node {label:?} appears twice in layer {layer}")));
            }
            members.push(v);
        }
    }
    let depth = groups.keys().next_back().map_or(0, |&l| l + 1);
    let mut layers = vec![Layer::empty(); depth];
    for (l, communities) in groups {
        layers[l] = Layer::new(communities.into_values().map(NodeSet::new).collect());
    }
    Ok(GroundTruth { layers })
}

pub fn write_truth<W: Write>(truth: &GroundTruth, g: &WeightedGraph, mut out: W) -> Result<(), std::io::Error> {
    for (l, layer) in truth.layers.iter().enumerate() {
        for (c, community) in layer.communities().iter().enumerate() {
            write!(out, "{l} {c}")?;
            for v in community.iter() {
                write!(out, " {}", g.label(v))?;
            }
            writeln!(out)?;
        }
    }
    out.flush()
}

/// Reads a node attribute table `label value_1 ... value_L`, one layer per
/// column. Each connected group of nodes sharing a value forms a community;
/// `missing` marks an unknown value. Labels absent from the graph are skipped.
pub fn read_attributes<R: BufRead>(reader: R, g: &WeightedGraph, missing: &str) -> Result<GroundTruth> {
    let mut columns: Option<Vec<BTreeMap<String, Vec<usize>>>> = None;
    for item in lines(reader) {
        let (no, line) = item?;
        let toks = tokens(&line);
        if toks.is_empty() {
            continue;
        }
        let cols = columns.get_or_insert_with(|| vec![BTreeMap::new(); toks.len() - 1]);
        if toks.len() - 1 != cols.len() || cols.is_empty() {
            return Err(Error::parse(no, format!("expected a label and {} values", cols.len().max(1))));
        }
        let Some(v) = g.index_of(toks[0]) else { continue };
        for (col, value) in cols.iter_mut().zip(&toks[1..]) {
            if *value != missing {
                col.entry(value.to_string()).or_default().push(v);
            }
        }
    }
    let layers = columns
        .unwrap_or_default()
        .into_iter()
        .map(|col| Layer::new(col.into_values().flat_map(|members| components(g, members)).collect()))
        .collect();
    Ok(GroundTruth { layers })
}

/// Connected components of the subgraph induced by `members`.
fn components(g: &WeightedGraph, members: Vec<usize>) -> Vec<NodeSet> {
    let members = NodeSet::new(members);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for start in members.iter() {
        if !seen.insert(start) {
            continue;
        }
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            for (v, _) in g.neighbors(u) {
                if members.contains(v) && seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        out.push(NodeSet::new(comp));
    }
    out
}

/// `layer <i>` followed by the labels of the detected community, one line per layer.
pub fn write_result<W: Write>(communities: &[NodeSet], g: &WeightedGraph, mut out: W) -> Result<(), std::io::Error> {
    for (i, c) in communities.iter().enumerate() {
        write!(out, "layer {i}")?;
        for v in c.iter() {
            write!(out, " {}", g.label(v))?;
        }
        writeln!(out)?;
    }
    out.flush()
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Creates `path` and hands a buffered writer to `fill`.
pub fn write_file(path: &Path, fill: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let wrap = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = File::create(path).map(BufWriter::new).map_err(wrap)?;
    fill(&mut out).and_then(|_| out.flush()).map_err(wrap)
}

pub fn load_graph(path: &Path) -> Result<WeightedGraph> {
    read_graph(open(path)?)
}

pub fn load_truth(path: &Path, g: &WeightedGraph) -> Result<GroundTruth> {
    read_truth(open(path)?, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(text: &str) -> Result<WeightedGraph> {
        read_graph(text.as_bytes())
    }

    #[test]
    fn default_and_explicit_weights() {
        let g = graph("a b\nb c").unwrap();
        assert_eq!((g.node_count(), g.edge_count(), g.total_weight()), (3, 2, 2.0));
        assert_eq!(g.labels(), ["a", "b", "c"]);
        let g = graph("# header\na b 2.5  # trailing\n\n").unwrap();
        assert_eq!(g.total_weight(), 2.5);
    }

    #[test]
    fn ingest_errors() {
        assert_eq!(graph("a b\nb a").unwrap_err().name(), "DuplicateEdge");
        assert_eq!(graph("a a").unwrap_err().name(), "SelfLoop");
        assert_eq!(graph("a b 0").unwrap_err().name(), "BadWeight");
        assert_eq!(graph("a b -1").unwrap_err().name(), "BadWeight");
        let err = graph("a b\nc d e f").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(graph("a b x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(graph("lonely"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn graph_round_trip_is_sorted() {
        let g = graph("z y 3\nb a\nb z 0.1").unwrap();
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "a b\nb z 0.1\ny z 3\n");
        let h = read_graph(&buf[..]).unwrap();
        for (u, v, w) in g.edges() {
            let (a, b) = (h.resolve(g.label(u)).unwrap(), h.resolve(g.label(v)).unwrap());
            assert_eq!(h.weight(a, b), Some(w));
        }
        assert_eq!(h.edge_count(), g.edge_count());
    }

    #[test]
    fn truth_round_trip() {
        let g = graph("a b\nc d\nb c").unwrap();
        let truth = read_truth("0 0 a b\n0 1 c d\n1 0 b c\n".as_bytes(), &g).unwrap();
        assert_eq!(truth.layers.len(), 2);
        assert_eq!(truth.layers[1].communities(), [NodeSet::new(vec![1, 2])]);
        let mut buf = Vec::new();
        write_truth(&truth, &g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 0 a b\n0 1 c d\n1 0 b c\n");
    }

    #[test]
    fn truth_errors() {
        let g = graph("a b").unwrap();
        assert_eq!(read_truth("0 0 a x".as_bytes(), &g).unwrap_err().name(), "UnknownLabel");
        assert_eq!(read_truth("0 0 a\n0 1 a".as_bytes(), &g).unwrap_err().name(), "ParseError");
        assert_eq!(read_truth("x 0 a".as_bytes(), &g).unwrap_err().name(), "ParseError");
    }

    #[test]
    fn attribute_layers() {
        let g = graph("a b\nb c\nc d").unwrap();
        let table = "a 2004 east\nb 2004 0\nc 2005 east\nd 0 west\nghost 2004 east\n";
        let truth = read_attributes(table.as_bytes(), &g, "0").unwrap();
        assert_eq!(truth.layers.len(), 2);
        let set = |v: &[usize]| NodeSet::new(v.to_vec());
        assert_eq!(truth.layers[0].communities(), [set(&[0, 1]), set(&[2])]);
        assert_eq!(truth.layers[1].communities(), [set(&[0]), set(&[2]), set(&[3])]);
        assert!(read_attributes("a 1 2\nb 1".as_bytes(), &g, "0").is_err());
    }

    #[test]
    fn result_lines() {
        let g = graph("a b\nb c").unwrap();
        let mut buf = Vec::new();
        write_result(&[NodeSet::new(vec![0, 1]), NodeSet::new(vec![2])], &g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "layer 0 a b\nlayer 1 c\n");
    }
}
