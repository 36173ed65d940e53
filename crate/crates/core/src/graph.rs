//! Weighted undirected graphs on labelled vertices, plus the text format
//! `i j [w]` (1-indexed, `#` comments) and a few standard families.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QmcError, Result};

/// Vertices are `0..n` internally; files and JSON use `1..=n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    /// `(i, j, w)` with `i < j`, 0-based.
    pub edges: Vec<(usize, usize, f64)>,
}

impl GraphSpec {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut g = GraphSpec { n, edges: Vec::with_capacity(edges.len()) };
        for (i, j, w) in edges {
            g.add_edge(i, j, w)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        GraphSpec { n, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if a == b || b >= self.n {
            return Err(QmcError::InvalidArgument(format!("bad edge ({i},{j}) for n={}", self.n)));
        }
        if !w.is_finite() {
            return Err(QmcError::InvalidArgument(format!("non-finite weight on ({i},{j})")));
        }
        if self.edges.iter().any(|&(x, y, _)| x == a && y == b) {
            return Err(QmcError::InvalidArgument(format!("duplicate edge ({i},{j})")));
        }
        self.edges.push((a, b, w));
        Ok(())
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn total_abs_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2.abs()).sum()
    }

    pub fn clique(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0))).collect();
        GraphSpec { n, edges }
    }

    /// Star with centre `0` and `n - 1` leaves.
    pub fn star(n: usize) -> Self {
        GraphSpec { n, edges: (1..n).map(|j| (0, j, 1.0)).collect() }
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j, 1.0))).collect();
        GraphSpec { n: a + b, edges }
    }

    pub fn path(n: usize) -> Self {
        GraphSpec { n, edges: (1..n).map(|j| (j - 1, j, 1.0)).collect() }
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.edges.push((0, n - 1, 1.0));
        }
        g
    }

    /// Each pair becomes an edge with probability `p`, weight uniform in `[lo, hi)`.
    pub fn random(n: usize, p: f64, lo: f64, hi: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((i, j, rng.gen_range(lo..hi)));
                }
            }
        }
        GraphSpec { n, edges }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b, _) in &self.edges {
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Parses the edge-list format. `n` is the largest vertex label unless
    /// a `# n = N` header line says otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n_hint = None;
        let mut raw = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let (body, comment) = match line.find('#') {
                Some(k) => (&line[..k], Some(&line[k + 1..])),
                None => (line, None),
            };
            if let Some(c) = comment {
                let c = c.trim();
                if let Some(rest) = c.strip_prefix("n") {
                    let rest = rest.trim_start();
                    if let Some(v) = rest.strip_prefix('=') {
                        n_hint = v.trim().parse::<usize>().ok();
                    }
                }
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            if toks.len() < 2 || toks.len() > 3 {
                return Err(QmcError::InvalidArgument(format!("line {}: expected `i j [w]`", lineno + 1)));
            }
            let idx = |t: &str| -> Result<usize> {
                let v: usize = t
                    .parse()
                    .map_err(|_| QmcError::InvalidArgument(format!("line {}: bad vertex {t:?}", lineno + 1)))?;
                if v == 0 {
                    return Err(QmcError::InvalidArgument(format!("line {}: vertices are 1-indexed", lineno + 1)));
                }
                Ok(v - 1)
            };
            let i = idx(toks[0])?;
            let j = idx(toks[1])?;
            let w = match toks.get(2) {
                Some(t) => t
                    .parse::<f64>()
                    .map_err(|_| QmcError::InvalidArgument(format!("line {}: bad weight {t:?}", lineno + 1)))?,
                None => 1.0,
            };
            raw.push((i, j, w));
        }
        let max_v = raw.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0);
        let n = n_hint.unwrap_or(max_v).max(max_v);
        GraphSpec::new(n, raw)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| QmcError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Inverse of [`GraphSpec::parse`]; always writes the `# n = N` header.
    pub fn to_text(&self) -> String {
        let mut s = format!("# n = {}\n", self.n);
        for &(i, j, w) in &self.edges {
            let _ = writeln!(s, "{} {} {}", i + 1, j + 1, w);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(GraphSpec::clique(4).edges.len(), 6);
        assert_eq!(GraphSpec::star(5).edges.len(), 4);
        assert_eq!(GraphSpec::complete_bipartite(3, 3).edges.len(), 9);
        assert_eq!(GraphSpec::cycle(5).edges.len(), 5);
        assert!(GraphSpec::path(4).is_connected());
        assert!(!GraphSpec::empty(2).is_connected());
    }

    #[test]
    fn parse_and_round_trip() {
        let g = GraphSpec::parse("# triangle\n1 2\n2 3 0.5  # weighted\n\n1 3 2\n").unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.edges, vec![(0, 1, 1.0), (1, 2, 0.5), (0, 2, 2.0)]);
        let again = GraphSpec::parse(&g.to_text()).unwrap();
        assert_eq!(again, g);
        let iso = GraphSpec::parse("# n = 5\n1 2\n").unwrap();
        assert_eq!(iso.n, 5);
    }

    #[test]
    fn parse_errors() {
        assert!(GraphSpec::parse("0 1\n").is_err());
        assert!(GraphSpec::parse("1 1\n").is_err());
        assert!(GraphSpec::parse("1 2\n2 1\n").is_err());
        assert!(GraphSpec::parse("1 2 x\n").is_err());
        assert!(GraphSpec::parse("1\n").is_err());
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(GraphSpec::random(6, 0.5, 0.1, 1.0, 7), GraphSpec::random(6, 0.5, 0.1, 1.0, 7));
    }
}
