//! Text formats: a plain edge list and graph6 (short form, `n <= 62`).

use super::{Graph, GraphError};

/// Result of parsing an edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListParse {
    pub graph: Graph,
    /// Number of edge lines that repeated an earlier edge (in either
    /// orientation) and were collapsed.
    pub duplicate_edges: usize,
}

impl EdgeListParse {
    pub fn has_duplicates(&self) -> bool {
        self.duplicate_edges > 0
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses `"n m"` followed by `m` lines `"u v"`. Blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<EdgeListParse, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let (n, m) = parse_pair(header_line, header)?;

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, text) = lines
            .next()
            .ok_or_else(|| parse_err(header_line, format!("expected {m} edge lines")))?;
        let (u, v) = parse_pair(line, text)?;
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::Index { vertex: w, order: n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        edges.push((u.min(v), u.max(v)));
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, format!("more than the declared {m} edges")));
    }

    let mut unique = edges.clone();
    unique.sort_unstable();
    unique.dedup();
    let duplicate_edges = edges.len() - unique.len();
    Ok(EdgeListParse {
        graph: Graph::from_valid_edges(n, unique),
        duplicate_edges,
    })
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), GraphError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(line, format!("expected two integers, got `{text}`")));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| parse_err(line, format!("`{s}` is not a non-negative integer")))
    };
    Ok((num(fields[0])?, num(fields[1])?))
}

/// Canonical edge list: header line then one `u v` line per edge with
/// `u < v` in lexicographic order, newline terminated.
pub fn emit_edge_list(graph: &Graph) -> String {
    let mut out = format!("{} {}\n", graph.order(), graph.size());
    for (u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

const GRAPH6_MAX_ORDER: usize = 62;
const GRAPH6_HEADER: &str = ">>graph6<<";

fn graph6_data_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Parses a short-form graph6 string. Surrounding whitespace and the optional
/// `>>graph6<<` header are accepted; padding bits must be zero.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let text = text.trim();
    let text = text.strip_prefix(GRAPH6_HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    let (&first, data) = bytes
        .split_first()
        .ok_or_else(|| GraphError::Format("empty string".into()))?;
    if first == 126 {
        return Err(GraphError::Format(
            "long form (n >= 63) is not supported".into(),
        ));
    }
    if !(63..126).contains(&first) {
        return Err(GraphError::Format(format!("invalid order byte {first}")));
    }
    let n = (first - 63) as usize;
    let expected = graph6_data_len(n);
    if data.len() != expected {
        return Err(GraphError::Format(format!(
            "expected {expected} data bytes for n = {n}, got {}",
            data.len()
        )));
    }
    let mut bits = Vec::with_capacity(expected * 6);
    for &b in data {
        if !(63..=126).contains(&b) {
            return Err(GraphError::Format(format!("invalid data byte {b}")));
        }
        let value = b - 63;
        bits.extend((0..6).rev().map(|k| value >> k & 1 == 1));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    if bits[pairs..].iter().any(|&b| b) {
        return Err(GraphError::Format("non-zero padding bits".into()));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::from_valid_edges(n, edges))
}

/// Encodes a graph as short-form graph6 (no trailing newline).
pub fn emit_graph6(graph: &Graph) -> Result<String, GraphError> {
    let n = graph.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(GraphError::TooLarge(format!(
            "graph6 short form supports n <= {GRAPH6_MAX_ORDER}, got {n}"
        )));
    }
    let mut out = String::with_capacity(1 + graph6_data_len(n));
    out.push((n as u8 + 63) as char);
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk = chunk << 1 | graph.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((chunk + 63) as char);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((chunk << (6 - filled)) + 63) as char);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_examples() {
        let k3 = parse_edge_list("3 3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!(k3.graph.size(), 3);
        assert!(!k3.has_duplicates());
        let p2 = parse_edge_list("2 1\n0 1").unwrap();
        assert_eq!(p2.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(
            parse_edge_list("3 2\n0 1\n0 3"),
            Err(GraphError::Index { vertex: 3, order: 3 })
        );
    }

    #[test]
    fn edge_list_errors_and_duplicates() {
        assert!(matches!(parse_edge_list("3 1\n0 x"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("3 2\n0 1"), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_edge_list("3 1\n0 1\n1 2"), Err(GraphError::Parse { line: 3, .. })));
        assert_eq!(parse_edge_list("3 1\n2 2"), Err(GraphError::SelfLoop(2)));
        let dup = parse_edge_list("3 3\n0 1\n1 0\n1 2\n").unwrap();
        assert_eq!(dup.duplicate_edges, 1);
        assert_eq!(dup.graph.size(), 2);
    }

    #[test]
    fn edge_list_emit() {
        let g = Graph::from_edges(3, [(1, 2), (0, 1)]).unwrap();
        assert_eq!(emit_edge_list(&g), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn graph6_examples() {
        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!(k3.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        let p2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(emit_graph6(&p2).unwrap(), "A_");
        assert_eq!(parse_graph6("A_\n").unwrap(), p2);
        assert!(matches!(parse_graph6("B"), Err(GraphError::Format(_))));
    }

    #[test]
    fn graph6_rejects_malformed() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("~??~").is_err());
        assert!(parse_graph6("Bx").is_err()); // padding bit set
        assert!(parse_graph6("B ").is_err());
        assert_eq!(parse_graph6(">>graph6<<Bw").unwrap().size(), 3);
        assert_eq!(emit_graph6(&Graph::empty(0)).unwrap(), "?");
        assert!(emit_graph6(&Graph::empty(63)).is_err());
    }
}
