//! The 45 connected graphs on 2..=7 vertices that represent every class
//! under local complementation and relabelling, plus the plain-text
//! edge-list format used to read and write graphs.
//!
//! Each entry carries the GCM and GEM values published alongside the graph
//! list (five decimals). They are reference values for tests, not computed
//! truth.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::LazyLock;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

pub const CATALOG_SIZE: usize = 45;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog id {0} outside 1..={CATALOG_SIZE}")]
    UnknownId(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: usize,
    pub graph: Graph,
    pub expected_gcm: Option<f64>,
    pub expected_gem: Option<f64>,
}

impl CatalogEntry {
    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

struct Row {
    id: usize,
    n: usize,
    edges: &'static [(usize, usize)],
    gcm: f64,
    gem: f64,
}

const fn row(id: usize, n: usize, edges: &'static [(usize, usize)], gcm: f64, gem: f64) -> Row {
    Row { id, n, edges, gcm, gem }
}

// Entry 43 carries the edge {1,7}. The widely reproduced list omits it,
// but without it the graph is LC-equivalent to entry 38 and its GCM is
// 1.73205 rather than the published 1.75000. See `PRINTED_ROW_43`.
#[rustfmt::skip]
static ROWS: [Row; CATALOG_SIZE] = [
    row(1, 2, &[(1, 2)], 1.00000, 0.50000),
    row(2, 3, &[(1, 2), (1, 3)], 1.22474, 0.50000),
    row(3, 4, &[(1, 2), (1, 3), (1, 4)], 1.32288, 0.50000),
    row(4, 4, &[(1, 2), (2, 3), (3, 4)], 1.41421, 0.75000),
    row(5, 5, &[(1, 2), (1, 3), (1, 4), (1, 5)], 1.36931, 0.50000),
    row(6, 5, &[(1, 2), (2, 3), (3, 4), (2, 5)], 1.50000, 0.75000),
    row(7, 5, &[(1, 2), (2, 3), (3, 4), (4, 5)], 1.54110, 0.75000),
    row(8, 5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)], 1.58114, 0.86855),
    row(9, 6, &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)], 1.39194, 0.50000),
    row(10, 6, &[(1, 6), (2, 6), (3, 6), (4, 5), (5, 6)], 1.54110, 0.75000),
    row(11, 6, &[(1, 6), (2, 6), (3, 5), (4, 5), (5, 6)], 1.58114, 0.75000),
    row(12, 6, &[(1, 2), (2, 3), (3, 4), (4, 5), (2, 6)], 1.60078, 0.75000),
    row(13, 6, &[(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)], 1.62019, 0.87500),
    row(14, 6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)], 1.63936, 0.87500),
    row(15, 6, &[(1, 6), (2, 4), (3, 4), (4, 5), (5, 6), (3, 6)], 1.62019, 0.75000),
    row(16, 6, &[(1, 2), (2, 3), (3, 4), (4, 5), (2, 4), (3, 6)], 1.63936, 0.87500),
    row(17, 6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 6)], 1.65831, 0.87500),
    row(18, 6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)], 1.67705, 0.87500),
    row(19, 6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (1, 3), (4, 6), (2, 5)], 1.69558, 0.91667),
    row(20, 7, &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7)], 1.40312, 0.50000),
    row(21, 7, &[(1, 7), (2, 7), (3, 7), (4, 7), (5, 6), (6, 7)], 1.56125, 0.75000),
    row(22, 7, &[(1, 7), (2, 7), (3, 7), (4, 6), (5, 6), (6, 7)], 1.62019, 0.75000),
    row(23, 7, &[(1, 7), (2, 7), (3, 7), (4, 5), (5, 6), (6, 7)], 1.62980, 0.75000),
    row(24, 7, &[(1, 7), (2, 7), (3, 5), (4, 5), (5, 6), (6, 7)], 1.64886, 0.75000),
    row(25, 7, &[(1, 2), (1, 7), (3, 7), (4, 7), (5, 6), (6, 7)], 1.65831, 0.87500),
    row(26, 7, &[(1, 7), (2, 7), (3, 6), (4, 5), (5, 6), (6, 7)], 1.67705, 0.87500),
    row(27, 7, &[(1, 2), (2, 7), (2, 3), (4, 3), (5, 4), (6, 5)], 1.68634, 0.87500),
    row(28, 7, &[(1, 2), (2, 3), (3, 4), (3, 5), (5, 6), (6, 7)], 1.69558, 0.87500),
    row(29, 7, &[(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7)], 1.70477, 0.87500),
    row(30, 7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)], 1.71391, 0.87500),
    row(31, 7, &[(2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (1, 3), (6, 3)], 1.65831, 0.75000),
    row(32, 7, &[(1, 7), (2, 7), (3, 6), (4, 5), (5, 6), (6, 7), (5, 7)], 1.68634, 0.87500),
    row(33, 7, &[(2, 3), (3, 4), (4, 5), (6, 5), (7, 6), (3, 7), (1, 3)], 1.69558, 0.87500),
    row(34, 7, &[(2, 3), (3, 4), (4, 5), (6, 5), (7, 6), (3, 6), (1, 4)], 1.70477, 0.87500),
    row(35, 7, &[(2, 3), (3, 4), (4, 5), (6, 5), (7, 6), (3, 7), (1, 6)], 1.71391, 0.87500),
    row(36, 7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7), (3, 5)], 1.71391, 0.87500),
    row(37, 7, &[(1, 7), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 7)], 1.72301, 0.87500),
    row(38, 7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 6)], 1.73205, 0.87500),
    row(39, 7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 5)], 1.73205, 0.93428),
    row(40, 7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 7)], 1.75000, 0.93750),
    row(41, 7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 5), (1, 6)], 1.74105, 0.93428),
    row(42, 7, &[(1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 7), (2, 6)], 1.75000, 0.93750),
    row(43, 7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (1, 4), (3, 6), (1, 7)], 1.75000, 0.87500),
    row(44, 7, &[(1, 4), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 7), (2, 7), (3, 5)], 1.75891, 0.93750),
    row(45, 7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 7), (2, 7), (2, 5), (4, 6)], 1.75000, 0.93428),
];

/// Entry 43 as usually printed, without the edge {1,7}. Kept so the
/// discrepancy stays testable: this graph lies in the same LC class as
/// entry 38.
pub const PRINTED_ROW_43: &[(usize, usize)] =
    &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (1, 4), (3, 6)];

static ENTRIES: LazyLock<Vec<CatalogEntry>> = LazyLock::new(|| {
    ROWS.iter()
        .map(|r| CatalogEntry {
            id: r.id,
            graph: Graph::new(r.n, r.edges.iter().copied()).expect("catalog rows are valid"),
            expected_gcm: Some(r.gcm),
            expected_gem: Some(r.gem),
        })
        .collect()
});

pub fn catalog_get(id: usize) -> Result<&'static CatalogEntry, CatalogError> {
    if id == 0 || id > CATALOG_SIZE {
        return Err(CatalogError::UnknownId(id));
    }
    Ok(&ENTRIES[id - 1])
}

/// All entries in id order.
pub fn catalog() -> &'static [CatalogEntry] {
    &ENTRIES
}

/// Parses the edge-list format: one `i j` pair per line (1-indexed),
/// `#` comment lines, blank lines ignored, and an optional `n <count>`
/// header. Without a header the vertex count is the largest index seen.
pub fn parse_edge_list(text: &str) -> Result<Graph, CatalogError> {
    let mut header: Option<usize> = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| CatalogError::Parse { line: line_no, message };
        if fields[0] == "n" {
            if header.is_some() || !edges.is_empty() {
                return Err(parse_err("`n` header must come once, before any edge".into()));
            }
            let [_, count] = fields[..] else {
                return Err(parse_err(format!("expected `n <count>`, got `{line}`")));
            };
            header = Some(
                count
                    .parse()
                    .map_err(|_| parse_err(format!("bad vertex count `{count}`")))?,
            );
            continue;
        }
        let [a, b] = fields[..] else {
            return Err(parse_err(format!("expected two vertex indices, got `{line}`")));
        };
        let parse_vertex = |s: &str| -> Result<usize, CatalogError> {
            match s.parse::<i64>() {
                Ok(v) if v >= 1 => Ok(v as usize),
                Ok(v) => Err(parse_err(format!("vertex {v} must be at least 1"))),
                Err(_) => Err(parse_err(format!("bad vertex `{s}`"))),
            }
        };
        let (i, j) = (parse_vertex(a)?, parse_vertex(b)?);
        if i == j {
            return Err(CatalogError::Graph {
                line: line_no,
                source: GraphError::SelfLoop(i),
            });
        }
        edges.push((line_no, i, j));
    }

    let n = header
        .or_else(|| edges.iter().map(|&(_, i, j)| i.max(j)).max())
        .ok_or(CatalogError::Parse {
            line: 0,
            message: "no edges and no `n` header".into(),
        })?;
    if let Some(&(line, i, j)) = edges.iter().find(|&&(_, i, j)| i.max(j) > n) {
        return Err(CatalogError::Graph {
            line,
            source: GraphError::VertexOutOfRange { vertex: i.max(j), n },
        });
    }
    Graph::new(n, edges.into_iter().map(|(_, i, j)| (i, j))).map_err(|source| CatalogError::Graph { line: 0, source })
}

/// Writes `n <count>` followed by one sorted edge per line.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (i, j) in g.edges() {
        writeln!(out, "{i} {j}").expect("writing to String");
    }
    out
}

#[derive(Debug, Serialize)]
struct IndexRow {
    id: usize,
    n: usize,
    edge_count: usize,
    expected_gcm: Option<f64>,
    expected_gem: Option<f64>,
}

/// Writes `gNN.edges` for every entry and an `index.json` summary into `dir`.
pub fn export_corpus(dir: &Path) -> Result<(), CatalogError> {
    std::fs::create_dir_all(dir)?;
    let mut index = Vec::with_capacity(CATALOG_SIZE);
    for e in catalog() {
        let body = format!("# catalog graph {}\n{}", e.id, serialize_edge_list(&e.graph));
        std::fs::write(dir.join(format!("g{:02}.edges", e.id)), body)?;
        index.push(IndexRow {
            id: e.id,
            n: e.n(),
            edge_count: e.graph.edge_count(),
            expected_gcm: e.expected_gcm,
            expected_gem: e.expected_gem,
        });
    }
    let json = serde_json::to_string_pretty(&index)?;
    std::fs::write(dir.join("index.json"), json + "\n")?;
    Ok(())
}
