//! Simple undirected graphs and the labeled families used throughout.
//!
//! Labeling conventions:
//! - path on `n` vertices: `0 - 1 - ... - (n-1)`;
//! - spider: center `0`, each leg numbered consecutively outward, legs in the
//!   order given;
//! - trinacria `T_{abc}`: triangle `0, 1, 2`; leg `a` hangs from `0`, then leg
//!   `b` from `1`, then leg `c` from `2`, numbered consecutively from `3`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::combinatorics::Partition;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, rejecting loops and out-of-range endpoints. Repeated
    /// edges collapse.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(vertex_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            vertex_count,
            edges: BTreeSet::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v || u >= self.vertex_count || v >= self.vertex_count {
            return Err(Error::InvalidEdge(u, v, self.vertex_count));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        let mut g = self.clone();
        g.add_edge(u, v)?;
        Ok(g)
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Self {
        let mut g = self.clone();
        g.edges.remove(&(u.min(v), u.max(v)));
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.edges.insert((v - 1, v));
        }
        g
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::CycleTooSmall(n));
        }
        let mut g = Graph::path(n);
        g.edges.insert((0, n - 1));
        Ok(g)
    }

    /// The tree of paths of lengths `λ_1, ..., λ_d` sharing the endpoint `0`.
    pub fn spider(legs: &Partition) -> Self {
        let mut g = Graph::empty(1 + legs.size());
        let mut next = 1;
        for &len in legs.parts() {
            g.attach_leg(0, next, len as usize);
            next += len as usize;
        }
        g
    }

    pub fn trinacria(a: usize, b: usize, c: usize) -> Self {
        let mut g = Graph::empty(a + b + c + 3);
        g.edges.extend([(0, 1), (0, 2), (1, 2)]);
        let mut next = 3;
        for (root, len) in [(0, a), (1, b), (2, c)] {
            g.attach_leg(root, next, len);
            next += len;
        }
        g
    }

    fn attach_leg(&mut self, root: usize, first: usize, len: usize) {
        let mut prev = root;
        for v in first..first + len {
            self.edges.insert((prev.min(v), prev.max(v)));
            prev = v;
        }
    }

    /// Whether no two of the given vertices are adjacent.
    pub fn is_stable(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    /// Parses the edge-list format: the vertex count on the first data line,
    /// then one `u v` pair per line. `#` starts a comment.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut graph: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("expected a nonnegative integer, found {s:?}"),
                })
            };
            match &mut graph {
                None => {
                    if fields.len() != 1 {
                        return Err(Error::Parse {
                            line: line_no,
                            message: "expected the vertex count alone on the first line".into(),
                        });
                    }
                    graph = Some(Graph::empty(parse(fields[0])?));
                }
                Some(g) => {
                    if fields.len() != 2 {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("expected \"u v\", found {line:?}"),
                        });
                    }
                    let (u, v) = (parse(fields[0])?, parse(fields[1])?);
                    g.add_edge(u, v).map_err(|e| Error::Parse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                }
            }
        }
        graph.ok_or(Error::Parse {
            line: 0,
            message: "missing vertex count".into(),
        })
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count);
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").expect("writing to a String");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let net = Graph::trinacria(1, 1, 1);
        assert_eq!((net.vertex_count(), net.edge_count()), (6, 6));
        let k3 = Graph::trinacria(0, 0, 0);
        assert_eq!(k3.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        let claw = Graph::spider(&"111".parse().unwrap());
        assert_eq!(claw.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3)]);
        let t = Graph::trinacria(3, 1, 2);
        assert_eq!((t.vertex_count(), t.edge_count()), (9, 9));
        assert!(t.has_edge(0, 3) && t.has_edge(4, 5) && t.has_edge(1, 6) && t.has_edge(2, 7) && t.has_edge(7, 8));
        let s = Graph::spider(&"421".parse().unwrap());
        assert_eq!((s.vertex_count(), s.edge_count()), (8, 7));
        assert_eq!(Graph::cycle(4).unwrap().edge_count(), 4);
        assert!(matches!(Graph::cycle(2), Err(Error::CycleTooSmall(2))));
        assert_eq!(Graph::path(0).vertex_count(), 0);
    }

    #[test]
    fn edge_validation() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        let g = Graph::new(3, [(1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(Graph::path(5).is_stable(&[0, 2, 4]));
        assert!(!Graph::path(5).is_stable(&[0, 1, 4]));
    }

    #[test]
    fn edge_list_round_trip() {
        let t = Graph::trinacria(2, 1, 1);
        assert_eq!(Graph::from_edge_list(&t.to_edge_list()).unwrap(), t);
        let text = "# a path\n3\n0 1 # first\n\n1 2\n";
        assert_eq!(Graph::from_edge_list(text).unwrap(), Graph::path(3));
        let err = Graph::from_edge_list("3\n0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(Graph::from_edge_list("3\n0\n").is_err());
        assert!(Graph::from_edge_list("").is_err());
    }
}
