//! Edge-list ingestion, ranking serialization, and top-rho edge removal.
//!
//! Edge lists are plain text, one edge per line: `<tail> <head> [<weight>]`,
//! whitespace-separated; lines starting with `#` or `%` are skipped. Node
//! labels are arbitrary whitespace-free strings, densified to indices in
//! first-seen order; a missing weight means 1.
//!
//! Rankings are CSV with header `edge_id,tail,head,weight,score,rank`, rows
//! in edge order, rank 1 for the highest score, ties sharing the smaller
//! rank. Output is byte-identical for identical inputs and flags.

use crate::centrality::CentralityVector;
use crate::error::{Error, Result};
use crate::graph::Graph;
use std::collections::HashMap;
use std::io::{BufRead, Write};

/// A parsed edge list with its original node labels.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeListDocument {
    /// Original string ids in first-seen order; index = dense node id.
    pub node_labels: Vec<String>,
    /// Parsed lines in file order, weights as written (None when omitted).
    pub triples: Vec<(String, String, Option<f64>)>,
    pub directed: bool,
}

impl EdgeListDocument {
    pub fn label(&self, node: usize) -> &str {
        &self.node_labels[node]
    }

    /// A document with labels "0".."n-1" for graphs born without one.
    pub fn index_labels(g: &Graph, directed: bool) -> EdgeListDocument {
        EdgeListDocument {
            node_labels: (0..g.node_count()).map(|v| v.to_string()).collect(),
            triples: g
                .edges()
                .iter()
                .map(|e| (e.tail.to_string(), e.head.to_string(), Some(e.weight)))
                .collect(),
            directed,
        }
    }
}

/// Parses an edge list and densifies it into a [`Graph`].
///
/// ```
/// use edgerake::io::parse_edge_list;
///
/// let text = "# a triangle\na b\nb c 2.5\nc a\n";
/// let (doc, g) = parse_edge_list(std::io::Cursor::new(text), false)?;
/// assert_eq!(doc.node_labels, ["a", "b", "c"]);
/// assert_eq!(g.edge(1).weight, 2.5);
/// # Ok::<(), edgerake::Error>(())
/// ```
pub fn parse_edge_list(reader: impl BufRead, directed: bool) -> Result<(EdgeListDocument, Graph)> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut doc_triples = Vec::new();
    let mut graph_triples = Vec::new();
    let mut intern = |token: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(token) {
            return i;
        }
        let i = labels.len();
        labels.push(token.to_string());
        index.insert(token.to_string(), i);
        i
    };
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = line_no + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(Error::Parse {
                line: line_no,
                reason: format!(
                    "expected `<tail> <head> [<weight>]`, got {} token(s)",
                    tokens.len()
                ),
            });
        }
        if tokens.len() > 3 {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("too many tokens ({}), expected at most 3", tokens.len()),
            });
        }
        let weight = match tokens.get(2) {
            None => None,
            Some(w) => Some(w.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                reason: format!("invalid weight `{w}`"),
            })?),
        };
        if let Some(w) = weight {
            if w <= 0.0 || !w.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    reason: format!("non-positive weight {w}"),
                });
            }
        }
        let tail = intern(tokens[0], &mut labels);
        let head = intern(tokens[1], &mut labels);
        if tail == head {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("self-loop at `{}`", tokens[0]),
            });
        }
        doc_triples.push((tokens[0].to_string(), tokens[1].to_string(), weight));
        graph_triples.push((tail, head, weight.unwrap_or(1.0)));
    }
    let graph = Graph::with_nodes(&graph_triples, directed, labels.len())?;
    Ok((
        EdgeListDocument {
            node_labels: labels,
            triples: doc_triples,
            directed,
        },
        graph,
    ))
}

/// Writes a graph back out as an edge list (weights always included).
pub fn write_edge_list(
    doc: &EdgeListDocument,
    g: &Graph,
    edge_indices: Option<&[usize]>,
    mut sink: impl Write,
) -> Result<()> {
    let write_edge = |sink: &mut dyn Write, e: usize| -> std::io::Result<()> {
        let edge = g.edge(e);
        writeln!(
            sink,
            "{} {} {}",
            doc.label(edge.tail),
            doc.label(edge.head),
            edge.weight
        )
    };
    match edge_indices {
        Some(indices) => {
            for &e in indices {
                write_edge(&mut sink, e)?;
            }
        }
        None => {
            for e in 0..g.edge_count() {
                write_edge(&mut sink, e)?;
            }
        }
    }
    Ok(())
}

/// Removal order for [`residual_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RemovalOrder {
    /// Delete the lowest-scoring edges first.
    #[default]
    Ascending,
    /// Delete the highest-scoring edges first.
    Descending,
}

/// Removes the first `floor(m * rho)` edges of the score sort from the graph
/// and returns the residual together with the retained edge indices (in their
/// original order). Ties are broken by ascending edge index.
pub fn residual_graph(
    g: &Graph,
    scores: &CentralityVector,
    rho: f64,
    order: RemovalOrder,
) -> Result<(Graph, Vec<usize>)> {
    if scores.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            got: scores.len(),
            expected: g.edge_count(),
        });
    }
    if !(0.0..=1.0).contains(&rho) || rho.is_nan() {
        return Err(Error::ParamOutOfRange {
            name: "rho",
            value: rho,
        });
    }
    let m = g.edge_count();
    let remove = (m as f64 * rho).floor() as usize;
    let mut by_score: Vec<usize> = (0..m).collect();
    // Index tie-break keeps the removal set deterministic.
    by_score.sort_by(|&a, &b| {
        let ord = scores.scores[a]
            .partial_cmp(&scores.scores[b])
            .expect("scores are finite");
        let ord = match order {
            RemovalOrder::Ascending => ord,
            RemovalOrder::Descending => ord.reverse(),
        };
        ord.then(a.cmp(&b))
    });
    let mut removed = vec![false; m];
    for &e in by_score.iter().take(remove) {
        removed[e] = true;
    }
    let kept: Vec<usize> = (0..m).filter(|&e| !removed[e]).collect();
    let triples: Vec<(usize, usize, f64)> = kept
        .iter()
        .map(|&e| {
            let edge = g.edge(e);
            (edge.tail, edge.head, edge.weight)
        })
        .collect();
    let residual = Graph::with_nodes(&triples, g.is_directed(), g.node_count())?;
    Ok((residual, kept))
}

/// Competition ranks: rank 1 is the highest score, equal scores share the
/// smaller rank.
pub fn competition_ranks(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("scores are finite")
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0usize; scores.len()];
    let mut rank = 0usize;
    let mut prev: Option<f64> = None;
    for (position, &e) in order.iter().enumerate() {
        if prev != Some(scores[e]) {
            rank = position + 1;
            prev = Some(scores[e]);
        }
        ranks[e] = rank;
    }
    ranks
}

/// Formats a score with 12 significant digits.
pub fn format_score(score: f64) -> String {
    format!("{score:.11e}")
}

/// Writes the rankings CSV for one score vector.
pub fn write_rankings(
    doc: &EdgeListDocument,
    g: &Graph,
    scores: &CentralityVector,
    mut sink: impl Write,
) -> Result<()> {
    if scores.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            got: scores.len(),
            expected: g.edge_count(),
        });
    }
    let ranks = competition_ranks(&scores.scores);
    writeln!(sink, "edge_id,tail,head,weight,score,rank")?;
    for (e, edge) in g.edges().iter().enumerate() {
        writeln!(
            sink,
            "{},{},{},{},{},{}",
            e,
            doc.label(edge.tail),
            doc.label(edge.head),
            edge.weight,
            format_score(scores.scores[e]),
            ranks[e]
        )?;
    }
    Ok(())
}

/// Reads the `score` column back from a rankings CSV, in edge order.
pub fn read_scores_csv(reader: impl BufRead) -> Result<Vec<f64>> {
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = line_no + 1;
        if line_no == 1 {
            if !line.starts_with("edge_id,") {
                return Err(Error::Parse {
                    line: 1,
                    reason: "missing `edge_id,...` header".to_string(),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected 6 columns, got {}", fields.len()),
            });
        }
        let edge_id: usize = fields[0].parse().map_err(|_| Error::Parse {
            line: line_no,
            reason: format!("invalid edge_id `{}`", fields[0]),
        })?;
        let score: f64 = fields[4].parse().map_err(|_| Error::Parse {
            line: line_no,
            reason: format!("invalid score `{}`", fields[4]),
        })?;
        rows.push((edge_id, score));
    }
    rows.sort_by_key(|&(e, _)| e);
    for (expect, &(e, _)) in rows.iter().enumerate() {
        if e != expect {
            return Err(Error::Parse {
                line: 0,
                reason: format!("edge ids are not contiguous: missing {expect}"),
            });
        }
    }
    Ok(rows.into_iter().map(|(_, s)| s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::{Measure, Params};
    use std::io::Cursor;

    fn vector(scores: Vec<f64>) -> CentralityVector {
        CentralityVector::new(scores, Measure::EdgeBetweenness, Params::default())
    }

    #[test]
    fn parses_plain_path() {
        let (doc, g) = parse_edge_list(Cursor::new("0 1\n1 2\n"), false).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(doc.node_labels, vec!["0", "1", "2"]);
        assert!(g.is_unweighted());
    }

    #[test]
    fn parses_comments_weights_and_labels() {
        let (doc, g) = parse_edge_list(Cursor::new("# comment\na b 2.5\n"), false).unwrap();
        assert_eq!(doc.node_labels, vec!["a", "b"]);
        assert_eq!(g.edge(0).weight, 2.5);
        assert_eq!(doc.triples[0].2, Some(2.5));
    }

    #[test]
    fn reports_malformed_lines() {
        let err = parse_edge_list(Cursor::new("0\n"), false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));

        let err = parse_edge_list(Cursor::new("0 1\n1 2 -3\n"), false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = parse_edge_list(Cursor::new("%skip\n0 1 2 3\n"), false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = parse_edge_list(Cursor::new("x x\n"), false).unwrap_err();
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn parse_write_round_trip() {
        let text = "a b 1\nb c 0.5\nc a 2\n";
        let (doc, g) = parse_edge_list(Cursor::new(text), false).unwrap();
        let mut out = Vec::new();
        write_edge_list(&doc, &g, None, &mut out).unwrap();
        let (doc2, g2) = parse_edge_list(Cursor::new(out), false).unwrap();
        assert_eq!(g, g2);
        assert_eq!(doc.node_labels, doc2.node_labels);
    }

    #[test]
    fn residual_keeps_everything_at_rho_zero() {
        let (_, g) = parse_edge_list(Cursor::new("0 1\n1 2\n2 3\n"), false).unwrap();
        let scores = vector(vec![3.0, 1.0, 2.0]);
        let (residual, kept) = residual_graph(&g, &scores, 0.0, RemovalOrder::Ascending).unwrap();
        assert_eq!(residual, g);
        assert_eq!(kept, vec![0, 1, 2]);
    }

    #[test]
    fn residual_removes_lowest_scores_first() {
        let triples: Vec<(usize, usize, f64)> = (0..10).map(|i| (i, i + 1, 1.0)).collect();
        let g = Graph::new(&triples, false).unwrap();
        let scores = vector((0..10).map(|i| ((i * 7) % 10) as f64).collect());
        let (_, kept) = residual_graph(&g, &scores, 0.3, RemovalOrder::Ascending).unwrap();
        assert_eq!(kept.len(), 7);
        // Scores 0,1,2 sit at edges 0, 3, 6.
        assert!(!kept.contains(&0) && !kept.contains(&3) && !kept.contains(&6));
    }

    #[test]
    fn residual_tie_break_and_nesting() {
        let g = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], false).unwrap();
        let scores = vector(vec![1.0, 1.0, 2.0]);
        let (_, kept) = residual_graph(&g, &scores, 1.0 / 3.0, RemovalOrder::Ascending).unwrap();
        assert_eq!(kept, vec![1, 2], "lower edge index leaves first on ties");

        // Nested removals: a larger rho removes a superset.
        let (_, kept_two) = residual_graph(&g, &scores, 0.7, RemovalOrder::Ascending).unwrap();
        assert!(kept_two.iter().all(|e| kept.contains(e)));

        let (_, kept_desc) =
            residual_graph(&g, &scores, 1.0 / 3.0, RemovalOrder::Descending).unwrap();
        assert_eq!(kept_desc, vec![0, 1]);
    }

    #[test]
    fn residual_rejects_bad_rho() {
        let g = Graph::new(&[(0, 1, 1.0)], false).unwrap();
        let scores = vector(vec![1.0]);
        assert!(residual_graph(&g, &scores, -0.1, RemovalOrder::Ascending).is_err());
        assert!(residual_graph(&g, &scores, 1.5, RemovalOrder::Ascending).is_err());
    }

    #[test]
    fn ranks_share_smaller_on_ties() {
        assert_eq!(competition_ranks(&[0.5, 0.5, 0.5]), vec![1, 1, 1]);
        assert_eq!(competition_ranks(&[1.0, 3.0, 3.0, 2.0]), vec![4, 1, 1, 3]);
    }

    #[test]
    fn rankings_csv_shape() {
        let (doc, g) = parse_edge_list(Cursor::new("0 1\n1 2\n0 2\n"), false).unwrap();
        let scores = vector(vec![0.5, 0.5, 0.5]);
        let mut out = Vec::new();
        write_rankings(&doc, &g, &scores, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "edge_id,tail,head,weight,score,rank");
        assert_eq!(lines.len(), 4);
        for line in &lines[1..] {
            assert!(line.ends_with(",1"), "all tied at rank 1: {line}");
        }

        let parsed = read_scores_csv(Cursor::new(text)).unwrap();
        assert_eq!(parsed, vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn score_format_has_twelve_significant_digits() {
        assert_eq!(format_score(0.5), "5.00000000000e-1");
        assert_eq!(format_score(2.0 / 3.0), "6.66666666667e-1");
    }
}
