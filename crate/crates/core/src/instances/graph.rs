//! Undirected (multi)graphs with optional colours and automorphism generators.
//!
//! ```text
//! symips graph v1
//! vertices 4
//! edge 0 1
//! colour 0 5
//! ecolour 0 1 2
//! aut 1 0 2 3
//! ```
//!
//! `aut` lists the image of every vertex in order.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::textfile::{expect_header, header, keyword};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GraphInput {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub vertex_colours: Option<Vec<i64>>,
    /// Colour per edge index.
    pub edge_colours: Option<Vec<i64>>,
    /// Automorphism generators as vertex image lists.
    pub aut: Vec<Vec<usize>>,
}

impl GraphInput {
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Self {
        GraphInput {
            vertices,
            edges: edges.to_vec(),
            ..Default::default()
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        Self::new(n, &edges)
    }

    /// The triangular prism: two triangles joined by a perfect matching.
    pub fn prism() -> Self {
        Self::new(
            6,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
    }

    pub fn validate(&self) -> Result<()> {
        for &(a, b) in &self.edges {
            if a >= self.vertices || b >= self.vertices {
                return Err(Error::invalid(format!(
                    "edge {a}-{b} has an unknown endpoint"
                )));
            }
        }
        if let Some(c) = &self.vertex_colours {
            if c.len() != self.vertices {
                return Err(Error::invalid("one colour per vertex required"));
            }
        }
        if let Some(c) = &self.edge_colours {
            if c.len() != self.edges.len() {
                return Err(Error::invalid("one colour per edge required"));
            }
        }
        for a in &self.aut {
            if !self.is_automorphism(a) {
                return Err(Error::invalid(format!("{a:?} is not an automorphism")));
            }
        }
        Ok(())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// Edge indices incident to `v`, in increasing order.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v)
            .collect()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        (0..self.vertices).all(|v| self.degree(v) == d)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertices];
        seen[0] = true;
        let mut q = VecDeque::from([0]);
        while let Some(v) = q.pop_front() {
            for &(a, b) in &self.edges {
                for (s, t) in [(a, b), (b, a)] {
                    if s == v && !seen[t] {
                        seen[t] = true;
                        q.push_back(t);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_colour(&self, v: usize) -> i64 {
        self.vertex_colours.as_ref().map_or(0, |c| c[v])
    }

    /// Multiset of colours on edges between `a` and `b` (empty if none).
    pub fn edge_profile(&self, a: usize, b: usize) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(x, y))| (x, y) == (a, b) || (y, x) == (a, b))
            .map(|(e, _)| self.edge_colours.as_ref().map_or(0, |c| c[e]))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_automorphism(&self, p: &[usize]) -> bool {
        if p.len() != self.vertices {
            return false;
        }
        let mut seen = vec![false; self.vertices];
        for &t in p {
            if t >= self.vertices || std::mem::replace(&mut seen[t], true) {
                return false;
            }
        }
        (0..self.vertices).all(|v| self.vertex_colour(v) == self.vertex_colour(p[v]))
            && (0..self.vertices).all(|a| {
                (0..self.vertices).all(|b| self.edge_profile(a, b) == self.edge_profile(p[a], p[b]))
            })
    }

    /// Decides isomorphism by trying every vertex bijection (small graphs only).
    pub fn isomorphic_brute_force(&self, other: &GraphInput) -> bool {
        if self.vertices != other.vertices || self.edges.len() != other.edges.len() {
            return false;
        }
        let n = self.vertices;
        let mut perm: Vec<usize> = (0..n).collect();
        let check = |p: &[usize]| {
            (0..n).all(|v| self.vertex_colour(v) == other.vertex_colour(p[v]))
                && (0..n).all(|a| {
                    (a..n).all(|b| self.edge_profile(a, b) == other.edge_profile(p[a], p[b]))
                })
        };
        // Heap's algorithm.
        let mut c = vec![0usize; n];
        if check(&perm) {
            return true;
        }
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                if check(&perm) {
                    return true;
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        false
    }
}

pub fn parse_graph(text: &str) -> Result<GraphInput> {
    let lines = expect_header(text, "graph")?;
    let mut g = GraphInput::default();
    let mut colours: BTreeMap<usize, i64> = BTreeMap::new();
    let mut ecolours: Vec<(usize, usize, usize, i64)> = Vec::new();
    let mut have_vertices = false;
    for (ln, line) in lines {
        let (kw, body) = keyword(line);
        let nums: Vec<i64> = body
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::parse(ln, format!("bad number '{t}'")))
            })
            .collect::<Result<_>>()?;
        let idx = |k: usize| -> Result<usize> {
            nums.get(k)
                .and_then(|&v| usize::try_from(v).ok())
                .ok_or_else(|| Error::parse(ln, format!("'{kw}' needs more arguments")))
        };
        match kw {
            "vertices" => {
                g.vertices = idx(0)?;
                have_vertices = true;
            }
            "edge" => g.edges.push((idx(0)?, idx(1)?)),
            "colour" | "color" => {
                colours.insert(
                    idx(0)?,
                    *nums
                        .get(1)
                        .ok_or_else(|| Error::parse(ln, "missing colour"))?,
                );
            }
            "ecolour" | "ecolor" => ecolours.push((
                ln,
                idx(0)?,
                idx(1)?,
                *nums
                    .get(2)
                    .ok_or_else(|| Error::parse(ln, "missing colour"))?,
            )),
            "aut" => g
                .aut
                .push((0..nums.len()).map(&idx).collect::<Result<_>>()?),
            _ => return Err(Error::parse(ln, format!("unknown keyword '{kw}'"))),
        }
    }
    if !have_vertices {
        return Err(Error::parse(0, "missing 'vertices' line"));
    }
    if !colours.is_empty() {
        g.vertex_colours = Some(
            (0..g.vertices)
                .map(|v| colours.get(&v).copied().unwrap_or(0))
                .collect(),
        );
    }
    if !ecolours.is_empty() {
        let mut ec = vec![0i64; g.edges.len()];
        for (ln, a, b, c) in ecolours {
            let e = g
                .edges
                .iter()
                .position(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
                .ok_or_else(|| Error::parse(ln, format!("no edge {a}-{b}")))?;
            ec[e] = c;
        }
        g.edge_colours = Some(ec);
    }
    g.validate()?;
    Ok(g)
}

pub fn write_graph(g: &GraphInput) -> String {
    let mut out = header("graph");
    out.push('\n');
    let _ = writeln!(out, "vertices {}", g.vertices);
    for &(a, b) in &g.edges {
        let _ = writeln!(out, "edge {a} {b}");
    }
    if let Some(c) = &g.vertex_colours {
        for (v, c) in c.iter().enumerate() {
            let _ = writeln!(out, "colour {v} {c}");
        }
    }
    if let Some(c) = &g.edge_colours {
        for (e, c) in c.iter().enumerate() {
            let _ = writeln!(out, "ecolour {} {} {c}", g.edges[e].0, g.edges[e].1);
        }
    }
    for a in &g.aut {
        let s: Vec<String> = a.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "aut {}", s.join(" "));
    }
    out
}
