//! Edge streams: file-backed and in-memory sources, replay orderings, and
//! synthetic generators.
//!
//! The on-disk format is a plain edge list: one edge per line as two
//! whitespace-separated vertex tokens, `#`-prefixed comment lines and
//! blank lines skipped, tokens beyond the second ignored. Edges are
//! undirected and unordered; repeated lines are repeated edges and a
//! self-loop is a legal edge.
//!
//! A stream can be replayed any number of times (files are reopened,
//! in-memory edges re-iterated), which is what lets ground truth be
//! computed in a pass that shares nothing with a sketch pass.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Replay order for a stream.
///
/// The three block regimes rebuild the stream the way a per-node edge list
/// would be walked: nodes are laid out in some order, and every edge is
/// emitted in the block of whichever endpoint comes first in that order.
/// Ties between equal-degree nodes break by label (byte order), so block
/// orders are fully deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamOrder {
    /// Replay exactly as stored.
    AsIs,
    /// Uniform shuffle of the edge sequence.
    Shuffled { seed: u64 },
    /// Node blocks, highest-degree node first.
    DegreeDescBlocks,
    /// Node blocks, lowest-degree node first.
    DegreeAscBlocks,
    /// Node blocks in random node order.
    ShuffledBlocks { seed: u64 },
}

/// Families of synthetic graphs with known degree structure.
#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticSpec {
    /// Complete graph on `n` vertices.
    Clique { n: u64 },
    /// One center joined to `edges` distinct leaves.
    Star { edges: u64 },
    /// `edges` disjoint edges.
    Matching { edges: u64 },
    /// Power-law random graph: expected degree of the `i`-th vertex is
    /// proportional to `(i + 1)^(-1 / (exponent - 1))`, scaled so the mean
    /// expected degree is `avg_degree`. Each pair is joined independently
    /// with probability `w_u * w_v / sum(w)`, capped at one.
    ChungLu {
        n: u64,
        exponent: f64,
        avg_degree: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone)]
enum Source {
    File(PathBuf),
    Memory {
        labels: Arc<Vec<String>>,
        edges: Vec<[u32; 2]>,
    },
}

/// A replayable sequence of undirected edges.
#[derive(Debug, Clone)]
pub struct EdgeStream {
    source: Source,
}

impl EdgeStream {
    /// Stream lazily from an edge-list file. The file is opened on first
    /// replay, so I/O problems surface at iteration time.
    pub fn from_path(path: impl Into<PathBuf>) -> EdgeStream {
        EdgeStream {
            source: Source::File(path.into()),
        }
    }

    /// Wrap interned edges: `edges` holds indices into `labels`.
    pub fn from_edges(labels: Vec<String>, edges: Vec<[u32; 2]>) -> EdgeStream {
        EdgeStream {
            source: Source::Memory {
                labels: Arc::new(labels),
                edges,
            },
        }
    }

    /// Convenience constructor for small literal streams.
    pub fn from_labeled_edges(pairs: &[(&str, &str)]) -> EdgeStream {
        let mut labels = Vec::new();
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut intern = |token: &str, labels: &mut Vec<String>| -> u32 {
            if let Some(&id) = ids.get(token) {
                return id;
            }
            let id = labels.len() as u32;
            labels.push(token.to_string());
            ids.insert(token.to_string(), id);
            id
        };
        let edges = pairs
            .iter()
            .map(|(u, v)| {
                let a = intern(u, &mut labels);
                let b = intern(v, &mut labels);
                [a, b]
            })
            .collect();
        EdgeStream::from_edges(labels, edges)
    }

    /// Replay the stream front to back, invoking `f` once per edge.
    pub fn for_each_edge<F: FnMut(&str, &str)>(&self, mut f: F) -> Result<()> {
        match &self.source {
            Source::File(path) => {
                let file = File::open(path).map_err(|e| Error::io(path, e))?;
                for_each_edge_in_reader(BufReader::new(file), path, f)
            }
            Source::Memory { labels, edges } => {
                for e in edges {
                    f(&labels[e[0] as usize], &labels[e[1] as usize]);
                }
                Ok(())
            }
        }
    }

    /// Number of edges if known without a pass.
    pub fn edge_count(&self) -> Option<usize> {
        match &self.source {
            Source::File(_) => None,
            Source::Memory { edges, .. } => Some(edges.len()),
        }
    }

    /// Load a file-backed stream into memory; in-memory streams are
    /// cloned as-is.
    pub fn materialize(&self) -> Result<EdgeStream> {
        match &self.source {
            Source::Memory { .. } => Ok(self.clone()),
            Source::File(_) => {
                let mut labels: Vec<String> = Vec::new();
                let mut ids: HashMap<String, u32> = HashMap::new();
                let mut edges: Vec<[u32; 2]> = Vec::new();
                self.for_each_edge(|u, v| {
                    let a = intern(&mut ids, &mut labels, u);
                    let b = intern(&mut ids, &mut labels, v);
                    edges.push([a, b]);
                })?;
                Ok(EdgeStream::from_edges(labels, edges))
            }
        }
    }

    /// Rebuild the stream in a different replay order. `AsIs` is the
    /// identity; everything else materializes the edges first.
    pub fn reorder(&self, order: &StreamOrder) -> Result<EdgeStream> {
        if let StreamOrder::AsIs = order {
            return Ok(self.clone());
        }
        let mat = self.materialize()?;
        let (labels, mut edges) = match mat.source {
            Source::Memory { labels, edges } => (labels, edges),
            Source::File(_) => unreachable!("materialize returns an in-memory stream"),
        };
        match order {
            StreamOrder::AsIs => unreachable!(),
            StreamOrder::Shuffled { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                edges.shuffle(&mut rng);
            }
            StreamOrder::DegreeDescBlocks => {
                let rank = block_ranks(&labels, &edges, BlockOrder::DegreeDesc, 0);
                stable_sort_by_owner(&mut edges, &rank);
            }
            StreamOrder::DegreeAscBlocks => {
                let rank = block_ranks(&labels, &edges, BlockOrder::DegreeAsc, 0);
                stable_sort_by_owner(&mut edges, &rank);
            }
            StreamOrder::ShuffledBlocks { seed } => {
                let rank = block_ranks(&labels, &edges, BlockOrder::Random, *seed);
                stable_sort_by_owner(&mut edges, &rank);
            }
        }
        Ok(EdgeStream {
            source: Source::Memory { labels, edges },
        })
    }

    /// Write the stream as a tab-separated edge list.
    pub fn write_edgelist(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let mut io_err: Option<std::io::Error> = None;
        self.for_each_edge(|u, v| {
            if io_err.is_none() {
                if let Err(e) = writeln!(w, "{u}\t{v}") {
                    io_err = Some(e);
                }
            }
        })?;
        if let Some(e) = io_err {
            return Err(Error::io(path, e));
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

fn intern(ids: &mut HashMap<String, u32>, labels: &mut Vec<String>, token: &str) -> u32 {
    if let Some(&id) = ids.get(token) {
        return id;
    }
    let id = labels.len() as u32;
    labels.push(token.to_string());
    ids.insert(token.to_string(), id);
    id
}

/// Parse edges out of any buffered reader; `origin` names the source in
/// errors. One edge per non-comment, non-blank line; fewer than two
/// tokens is a parse error carrying the 1-based line number.
pub fn for_each_edge_in_reader<R: BufRead, F: FnMut(&str, &str)>(
    reader: R,
    origin: &Path,
    mut f: F,
) -> Result<()> {
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        let text = line.trim_start();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut tokens = text.split_whitespace();
        match (tokens.next(), tokens.next()) {
            (Some(u), Some(v)) => f(u, v),
            (first, _) => {
                return Err(Error::MalformedLine {
                    path: origin.to_path_buf(),
                    line: idx as u64 + 1,
                    found: usize::from(first.is_some()),
                })
            }
        }
    }
    Ok(())
}

/// Open an edge-list file as a lazily-replayed stream.
pub fn parse_edgelist(path: impl Into<PathBuf>) -> EdgeStream {
    EdgeStream::from_path(path)
}

enum BlockOrder {
    DegreeDesc,
    DegreeAsc,
    Random,
}

/// Position of every node in the chosen node order (smaller = earlier).
fn block_ranks(
    labels: &[String],
    edges: &[[u32; 2]],
    order: BlockOrder,
    seed: u64,
) -> Vec<u32> {
    let mut degree = vec![0u64; labels.len()];
    for e in edges {
        degree[e[0] as usize] += 1;
        degree[e[1] as usize] += 1;
    }
    let mut nodes: Vec<u32> = (0..labels.len() as u32).collect();
    // Deterministic base order by label, then the requested arrangement.
    nodes.sort_by(|&a, &b| labels[a as usize].cmp(&labels[b as usize]));
    match order {
        BlockOrder::DegreeDesc => {
            nodes.sort_by(|&a, &b| degree[b as usize].cmp(&degree[a as usize]));
        }
        BlockOrder::DegreeAsc => {
            nodes.sort_by(|&a, &b| degree[a as usize].cmp(&degree[b as usize]));
        }
        BlockOrder::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            nodes.shuffle(&mut rng);
        }
    }
    let mut rank = vec![0u32; labels.len()];
    for (pos, &node) in nodes.iter().enumerate() {
        rank[node as usize] = pos as u32;
    }
    rank
}

/// Order edges by the rank of their earlier endpoint, keeping the original
/// relative order inside each block.
fn stable_sort_by_owner(edges: &mut [[u32; 2]], rank: &[u32]) {
    edges.sort_by_key(|e| rank[e[0] as usize].min(rank[e[1] as usize]));
}

/// Materialize a synthetic graph as an in-memory stream. Vertices are
/// labeled by decimal index.
pub fn generate(spec: &SyntheticSpec) -> Result<EdgeStream> {
    match *spec {
        SyntheticSpec::Clique { n } => {
            if n < 2 {
                return Err(Error::invalid("n", "a clique needs at least 2 vertices"));
            }
            let n = checked_u32(n, "n")?;
            let labels = index_labels(n);
            let mut edges = Vec::with_capacity((n as usize * (n as usize - 1)) / 2);
            for i in 0..n {
                for j in (i + 1)..n {
                    edges.push([i, j]);
                }
            }
            Ok(EdgeStream::from_edges(labels, edges))
        }
        SyntheticSpec::Star { edges: k } => {
            if k < 1 {
                return Err(Error::invalid("edges", "a star needs at least 1 edge"));
            }
            let vertices = checked_u32(k + 1, "edges")?;
            let labels = index_labels(vertices);
            let edges = (1..vertices).map(|i| [0, i]).collect();
            Ok(EdgeStream::from_edges(labels, edges))
        }
        SyntheticSpec::Matching { edges: k } => {
            if k < 1 {
                return Err(Error::invalid("edges", "a matching needs at least 1 edge"));
            }
            let vertices = checked_u32(2 * k, "edges")?;
            let labels = index_labels(vertices);
            let edges = (0..vertices / 2).map(|i| [2 * i, 2 * i + 1]).collect();
            Ok(EdgeStream::from_edges(labels, edges))
        }
        SyntheticSpec::ChungLu {
            n,
            exponent,
            avg_degree,
            seed,
        } => chung_lu(n, exponent, avg_degree, seed),
    }
}

fn checked_u32(v: u64, name: &'static str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::invalid(name, format!("{v} exceeds the supported size")))
}

fn index_labels(n: u32) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Power-law random graph by the skipping method: for each left endpoint
/// the candidate right endpoints are walked in decreasing-weight order
/// with geometric jumps sized to the current probability bound, giving
/// expected time linear in vertices plus edges.
fn chung_lu(n: u64, exponent: f64, avg_degree: f64, seed: u64) -> Result<EdgeStream> {
    if n < 2 {
        return Err(Error::invalid("n", "need at least 2 vertices"));
    }
    if !(exponent > 1.0) || !exponent.is_finite() {
        return Err(Error::invalid(
            "exponent",
            format!("{exponent} must be a finite value above 1"),
        ));
    }
    if !(avg_degree > 0.0) || !avg_degree.is_finite() {
        return Err(Error::invalid(
            "avg_degree",
            format!("{avg_degree} must be a finite positive value"),
        ));
    }
    let n32 = checked_u32(n, "n")?;
    let alpha = 1.0 / (exponent - 1.0);
    let mut weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-alpha)).collect();
    let raw_total: f64 = weights.iter().sum();
    let scale = n as f64 * avg_degree / raw_total;
    for w in &mut weights {
        *w *= scale;
    }
    let total = n as f64 * avg_degree;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<[u32; 2]> = Vec::new();
    let nu = n as usize;
    for u in 0..nu.saturating_sub(1) {
        let mut v = u + 1;
        // Weights are already in decreasing order, so p only shrinks as v
        // advances and stays a valid bound for the skip distribution.
        let mut p = (weights[u] * weights[v] / total).min(1.0);
        while v < nu && p > 0.0 {
            if p < 1.0 {
                let r: f64 = rng.gen();
                let skip = r.ln() / (1.0 - p).ln();
                if !skip.is_finite() || skip >= (nu - v) as f64 {
                    break;
                }
                v += skip as usize;
            }
            let q = (weights[u] * weights[v] / total).min(1.0);
            if rng.gen::<f64>() < q / p {
                edges.push([u as u32, v as u32]);
            }
            p = q;
            v += 1;
        }
    }
    Ok(EdgeStream::from_edges(index_labels(n32), edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histogram::{dh_to_ccdh, exact_dh};
    use std::io::Cursor;

    fn collect_edges(stream: &EdgeStream) -> Vec<(String, String)> {
        let mut out = Vec::new();
        stream
            .for_each_edge(|u, v| out.push((u.to_string(), v.to_string())))
            .unwrap();
        out
    }

    fn parse_str(text: &str) -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        for_each_edge_in_reader(Cursor::new(text), Path::new("<test>"), |u, v| {
            out.push((u.to_string(), v.to_string()))
        })?;
        Ok(out)
    }

    #[test]
    fn parser_skips_comments_and_blanks_and_extra_columns() {
        let text = "# SNAP-style header\n\na b\n  # indented comment\nb c 1.5\n";
        let edges = parse_str(text).unwrap();
        assert_eq!(
            edges,
            vec![
                ("a".to_string(), "b".to_string()),
                ("b".to_string(), "c".to_string())
            ]
        );
    }

    #[test]
    fn parser_reports_line_of_malformed_row() {
        let text = "a b\nlonely\n";
        match parse_str(text) {
            Err(Error::MalformedLine { line, found, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(found, 1);
            }
            other => panic!("expected malformed-line error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let stream = parse_edgelist("/nonexistent/degstream-test-edges");
        assert!(matches!(
            stream.for_each_edge(|_, _| {}),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn reorder_preserves_the_edge_multiset() {
        let stream = generate(&SyntheticSpec::Clique { n: 8 }).unwrap();
        let truth = exact_dh(&stream).unwrap();
        for order in [
            StreamOrder::AsIs,
            StreamOrder::Shuffled { seed: 5 },
            StreamOrder::DegreeDescBlocks,
            StreamOrder::DegreeAscBlocks,
            StreamOrder::ShuffledBlocks { seed: 5 },
        ] {
            let reordered = stream.reorder(&order).unwrap();
            let mut a = collect_edges(&stream);
            let mut b = collect_edges(&reordered);
            a.sort();
            b.sort();
            assert_eq!(a, b, "multiset changed under {order:?}");
            assert_eq!(exact_dh(&reordered).unwrap(), truth);
        }
    }

    #[test]
    fn shuffles_are_seed_deterministic() {
        let stream = generate(&SyntheticSpec::Clique { n: 10 }).unwrap();
        let a = collect_edges(&stream.reorder(&StreamOrder::Shuffled { seed: 11 }).unwrap());
        let b = collect_edges(&stream.reorder(&StreamOrder::Shuffled { seed: 11 }).unwrap());
        let c = collect_edges(&stream.reorder(&StreamOrder::Shuffled { seed: 12 }).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, c, "different seeds should give different shuffles");
        assert_ne!(a, collect_edges(&stream), "seed 11 should actually move edges");
    }

    #[test]
    fn degree_blocks_put_the_hub_first_or_last() {
        // Star: the center has degree 5, leaves degree 1.
        let stream = generate(&SyntheticSpec::Star { edges: 5 }).unwrap();
        let desc = collect_edges(&stream.reorder(&StreamOrder::DegreeDescBlocks).unwrap());
        // Center block first, edges in stored order.
        assert_eq!(desc, collect_edges(&stream));

        let asc = collect_edges(&stream.reorder(&StreamOrder::DegreeAscBlocks).unwrap());
        // Every edge is owned by its leaf; leaves order by label bytes.
        let leaf_order: Vec<&str> = asc.iter().map(|(_, v)| v.as_str()).collect();
        assert_eq!(leaf_order, vec!["1", "2", "3", "4", "5"]);
    }

    #[test]
    fn equal_degree_ties_break_by_label() {
        // Two disjoint edges: all nodes degree 1; blocks order by label.
        let stream = EdgeStream::from_labeled_edges(&[("z", "y"), ("a", "b")]);
        let desc = collect_edges(&stream.reorder(&StreamOrder::DegreeDescBlocks).unwrap());
        assert_eq!(desc[0], ("a".to_string(), "b".to_string()));
    }

    #[test]
    fn generators_hit_their_degree_structure() {
        let clique = generate(&SyntheticSpec::Clique { n: 5 }).unwrap();
        assert_eq!(clique.edge_count(), Some(10));
        assert_eq!(exact_dh(&clique).unwrap().count(4), 5);

        let star = generate(&SyntheticSpec::Star { edges: 9 }).unwrap();
        let dh = exact_dh(&star).unwrap();
        assert_eq!(dh.count(9), 1);
        assert_eq!(dh.count(1), 9);

        let matching = generate(&SyntheticSpec::Matching { edges: 7 }).unwrap();
        let dh = exact_dh(&matching).unwrap();
        assert_eq!(dh.count(1), 14);
        assert_eq!(dh.max_degree(), 1);
    }

    #[test]
    fn generator_parameters_are_validated() {
        assert!(generate(&SyntheticSpec::Clique { n: 1 }).is_err());
        assert!(generate(&SyntheticSpec::Star { edges: 0 }).is_err());
        assert!(generate(&SyntheticSpec::Matching { edges: 0 }).is_err());
        assert!(generate(&SyntheticSpec::ChungLu {
            n: 100,
            exponent: 1.0,
            avg_degree: 5.0,
            seed: 0
        })
        .is_err());
        assert!(generate(&SyntheticSpec::ChungLu {
            n: 100,
            exponent: 2.5,
            avg_degree: 0.0,
            seed: 0
        })
        .is_err());
    }

    #[test]
    fn chung_lu_is_seed_deterministic_and_heavy_tailed() {
        let spec = SyntheticSpec::ChungLu {
            n: 20_000,
            exponent: 2.5,
            avg_degree: 10.0,
            seed: 42,
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(collect_edges(&a), collect_edges(&b));

        let other = generate(&SyntheticSpec::ChungLu {
            n: 20_000,
            exponent: 2.5,
            avg_degree: 10.0,
            seed: 43,
        })
        .unwrap();
        assert_ne!(collect_edges(&a), collect_edges(&other));

        let ccdh = dh_to_ccdh(&exact_dh(&a).unwrap()).unwrap();
        let endpoints = 2.0 * a.edge_count().unwrap() as f64;
        let realized_avg = endpoints / 20_000.0;
        assert!(
            (realized_avg - 10.0).abs() < 3.0,
            "realized average degree {realized_avg} too far from target"
        );
        assert!(
            ccdh.d_max() >= 1000,
            "expected a multi-decade tail, got d_max {}",
            ccdh.d_max()
        );
    }

    #[test]
    fn edgelist_file_round_trip() {
        let dir = std::env::temp_dir().join("degstream-stream-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("edges.tsv");
        let original = generate(&SyntheticSpec::Star { edges: 4 }).unwrap();
        original.write_edgelist(&path).unwrap();
        let read = parse_edgelist(&path).materialize().unwrap();
        assert_eq!(collect_edges(&read), collect_edges(&original));
        std::fs::remove_file(&path).unwrap();
    }
}
