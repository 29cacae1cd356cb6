//! r-uniform hypergraphs on vertex set {1..n}, plus the `.hg` text format.
//!
//! Edges are kept sorted in the canonical order (lexicographic on ascending
//! id lists) with no duplicates, so equality of two hypergraphs is equality
//! of their serialized forms. All operations are pure.
//!
//! File format:
//! - header line `n r m`;
//! - m edge lines, each holding r strictly increasing vertex ids;
//! - blank lines and lines starting with `#` are ignored anywhere.
//!
//! A 0-uniform hypergraph is legal and has at most one edge, the empty set;
//! since an empty edge line would be indistinguishable from an ignored blank
//! line, `r = 0` edges occupy no lines at all and only the header count says
//! whether the empty edge is present.

use crate::combin::binomial;
use crate::error::{Error, ParseErrorKind, Result};
use crate::vertexset::VertexSet;
use itertools::Itertools;
use std::fmt::Write as _;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    n: u32,
    r: usize,
    edges: Vec<VertexSet>,
}

impl Hypergraph {
    /// Validates arity, id range, and distinctness, then stores the edges in
    /// canonical order.
    pub fn new(n: u32, r: usize, mut edges: Vec<VertexSet>) -> Result<Self> {
        for e in &edges {
            if e.len() != r {
                return Err(Error::invalid(format!(
                    "edge {e} has {} vertices, expected {r}",
                    e.len()
                )));
            }
            if let Some(max) = e.max_id() {
                if max > n {
                    return Err(Error::invalid(format!(
                        "edge {e} mentions vertex {max}, ground set is 1..={n}"
                    )));
                }
            }
        }
        edges.sort_unstable();
        if let Some((a, _)) = edges.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(Error::invalid(format!("duplicate edge {a}")));
        }
        Ok(Self { n, r, edges })
    }

    pub fn empty(n: u32, r: usize) -> Self {
        Self {
            n,
            r,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: &VertexSet) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// Number of edges containing `s`.
    pub fn degree_of(&self, s: &VertexSet) -> usize {
        self.edges.iter().filter(|e| s.is_subset(e)).count()
    }

    /// The (r - |s|)-uniform link: `{e \ s : s subset of e in E}` on the same
    /// ground set. Distinct edges over `s` stay distinct after removal, so no
    /// deduplication is needed.
    pub fn link_graph(&self, s: &VertexSet) -> Result<Hypergraph> {
        if s.len() > self.r {
            return Err(Error::invalid(format!(
                "link set {s} has {} vertices, uniformity is {}",
                s.len(),
                self.r
            )));
        }
        if let Some(max) = s.max_id() {
            if max > self.n {
                return Err(Error::invalid(format!(
                    "link set {s} mentions vertex {max}, ground set is 1..={}",
                    self.n
                )));
            }
        }
        let mut edges: Vec<VertexSet> = self
            .edges
            .iter()
            .filter(|e| s.is_subset(e))
            .map(|e| e.difference(s))
            .collect();
        edges.sort_unstable();
        Ok(Hypergraph {
            n: self.n,
            r: self.r - s.len(),
            edges,
        })
    }

    /// All binomial(n, r) edges. `r = 0` gives the single empty edge.
    pub fn complete(n: u32, r: usize) -> Result<Hypergraph> {
        if r as u64 > n as u64 {
            return Err(Error::invalid(format!(
                "complete hypergraph needs r <= n, got r={r}, n={n}"
            )));
        }
        let edges: Vec<VertexSet> = (1..=n)
            .combinations(r)
            .map(VertexSet::from_ids)
            .collect();
        debug_assert_eq!(edges.len() as u128, binomial(n as u64, r as u64));
        Ok(Hypergraph { n, r, edges })
    }

    pub fn parse(text: &str) -> Result<Hypergraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            kind: ParseErrorKind::MalformedHeader,
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad_header = Error::Parse {
            line: header_line,
            kind: ParseErrorKind::MalformedHeader,
        };
        if fields.len() != 3 {
            return Err(bad_header);
        }
        let n: u32 = fields[0].parse().map_err(|_| bad_header.clone())?;
        let r: usize = fields[1].parse().map_err(|_| bad_header.clone())?;
        let m: usize = fields[2].parse().map_err(|_| bad_header)?;

        let mut edges: Vec<VertexSet> = Vec::with_capacity(m.min(1 << 20));
        if r == 0 {
            // The empty edge has no line of its own; the header count alone
            // states whether it is present.
            if m > 1 {
                return Err(Error::Parse {
                    line: header_line,
                    kind: ParseErrorKind::DuplicateEdge,
                });
            }
            if m == 1 {
                edges.push(VertexSet::new());
            }
        } else {
            for (line_no, line) in lines.by_ref() {
                if edges.len() == m {
                    return Err(Error::Parse {
                        line: line_no,
                        kind: ParseErrorKind::EdgeCountMismatch {
                            expected: m,
                            found: m + 1,
                        },
                    });
                }
                let mut ids = Vec::with_capacity(r);
                for tok in line.split_whitespace() {
                    let id: u64 = tok.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        kind: ParseErrorKind::MalformedHeader,
                    })?;
                    ids.push(id);
                }
                if ids.len() != r {
                    return Err(Error::Parse {
                        line: line_no,
                        kind: ParseErrorKind::WrongArity {
                            expected: r,
                            found: ids.len(),
                        },
                    });
                }
                if ids.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Parse {
                        line: line_no,
                        kind: ParseErrorKind::NotIncreasing,
                    });
                }
                for &id in &ids {
                    if id == 0 || id > n as u64 {
                        return Err(Error::Parse {
                            line: line_no,
                            kind: ParseErrorKind::IdOutOfRange { id, n },
                        });
                    }
                }
                let edge = VertexSet::from_ids(ids.iter().map(|&x| x as u32));
                edges.push(edge);
            }
            if edges.len() != m {
                return Err(Error::Parse {
                    line: header_line,
                    kind: ParseErrorKind::EdgeCountMismatch {
                        expected: m,
                        found: edges.len(),
                    },
                });
            }
        }

        let mut sorted = edges.clone();
        sorted.sort_unstable();
        if sorted.iter().tuple_windows().any(|(a, b)| a == b) {
            // Report the first line whose edge already appeared.
            let mut seen = std::collections::BTreeSet::new();
            let mut line = header_line;
            let mut counted = 0usize;
            for (line_no, l) in text
                .lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
                .skip(1)
            {
                counted += 1;
                let e = VertexSet::from_ids(
                    l.split_whitespace().map(|t| t.parse::<u32>().unwrap_or(0)),
                );
                if !seen.insert(e) {
                    line = line_no;
                    break;
                }
                if counted == m {
                    break;
                }
            }
            return Err(Error::Parse {
                line,
                kind: ParseErrorKind::DuplicateEdge,
            });
        }

        Hypergraph::new(n, r, edges)
    }

    /// Canonical text form: header, then edges in canonical order. Parsing
    /// the output reproduces the hypergraph exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.n, self.r, self.edges.len());
        if self.r > 0 {
            for e in &self.edges {
                let ids: Vec<String> = e.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", ids.join(" "));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ParseErrorKind as K;

    fn parse_err(text: &str) -> ParseErrorKind {
        match Hypergraph::parse(text) {
            Err(Error::Parse { kind, .. }) => kind,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_canonical() {
        let h = Hypergraph::new(
            5,
            2,
            vec![
                VertexSet::from_ids([2, 5]),
                VertexSet::from_ids([1, 3]),
                VertexSet::from_ids([1, 2]),
            ],
        )
        .unwrap();
        let text = h.serialize();
        assert_eq!(text, "5 2 3\n1 2\n1 3\n2 5\n");
        let back = Hypergraph::parse(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.serialize(), text);
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let h = Hypergraph::parse("# a comment\n\n3 2 2\n1 2\n# another\n\n2 3\n").unwrap();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.n(), 3);
    }

    #[test]
    fn distinct_diagnostics() {
        assert_eq!(parse_err("3 2\n"), K::MalformedHeader);
        assert_eq!(parse_err("x 2 1\n1 2\n"), K::MalformedHeader);
        assert_eq!(
            parse_err("3 2 1\n1 2 3\n"),
            K::WrongArity {
                expected: 2,
                found: 3
            }
        );
        assert_eq!(parse_err("3 2 1\n2 1\n"), K::NotIncreasing);
        assert_eq!(parse_err("3 2 1\n1 1\n"), K::NotIncreasing);
        assert_eq!(parse_err("3 2 1\n1 4\n"), K::IdOutOfRange { id: 4, n: 3 });
        assert_eq!(parse_err("3 2 2\n1 2\n1 2\n"), K::DuplicateEdge);
        assert_eq!(
            parse_err("3 2 2\n1 2\n"),
            K::EdgeCountMismatch {
                expected: 2,
                found: 1
            }
        );
        assert_eq!(
            parse_err("3 2 1\n1 2\n2 3\n"),
            K::EdgeCountMismatch {
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn zero_uniform_round_trip() {
        let with_edge = Hypergraph::parse("5 0 1\n").unwrap();
        assert_eq!(with_edge.edge_count(), 1);
        assert_eq!(with_edge.edges()[0], VertexSet::new());
        assert_eq!(Hypergraph::parse(&with_edge.serialize()).unwrap(), with_edge);
        let without = Hypergraph::parse("5 0 0\n").unwrap();
        assert_eq!(without.edge_count(), 0);
        assert_eq!(parse_err("5 0 2\n"), K::DuplicateEdge);
    }

    #[test]
    fn complete_counts() {
        assert_eq!(Hypergraph::complete(5, 2).unwrap().edge_count(), 10);
        assert_eq!(Hypergraph::complete(5, 0).unwrap().edge_count(), 1);
        assert_eq!(Hypergraph::complete(4, 4).unwrap().edge_count(), 1);
        assert!(Hypergraph::complete(3, 4).is_err());
    }

    #[test]
    fn link_graph_basics() {
        let h = Hypergraph::complete(5, 3).unwrap();
        let link = h.link_graph(&VertexSet::from_ids([1, 2])).unwrap();
        assert_eq!(link.r(), 1);
        assert_eq!(link.edge_count(), 3);
        let full = h.link_graph(&VertexSet::new()).unwrap();
        assert_eq!(full, h);
        assert!(h.link_graph(&VertexSet::from_ids([1, 2, 3, 4])).is_err());
        assert!(h.link_graph(&VertexSet::singleton(9)).is_err());
    }
}
