//! Cut-rank over GF(2) and discrete rank-width of small finite graphs.
//!
//! Vertex sets are `u64` masks, so graphs have at most 64 vertices. A
//! layout is an unrooted tree of maximal degree 3 whose leaves are the
//! vertices; the rank-width is the least, over layouts, of the largest
//! cut-rank across one tree edge.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;

pub type Mask = u64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RwError {
    #[error("graphs have at most 64 vertices, got {0}")]
    TooManyVertices(usize),
    #[error("exhaustive layout search is limited to {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("loop at `{0}`")]
    Loop(String),
    #[error("edge {0} - {1} given twice")]
    ParallelEdge(String, String),
    #[error("vertex sets overlap")]
    Overlap,
    #[error("invalid layout: {0}")]
    Layout(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Bit rows over GF(2), at most 64 columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    pub rows: Vec<u64>,
    pub cols: usize,
}

impl Gf2Matrix {
    pub fn new(rows: Vec<u64>, cols: usize) -> Self {
        Gf2Matrix { rows, cols }
    }

    pub fn identity(n: usize) -> Self {
        Gf2Matrix { rows: (0..n).map(|i| 1 << i).collect(), cols: n }
    }

    /// Rank by elimination; 0 for a matrix without rows or columns.
    pub fn rank(&self) -> usize {
        gf2_rank(&self.rows)
    }
}

pub fn gf2_rank(rows: &[u64]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    while let Some(i) = rows.iter().position(|&r| r != 0) {
        let pivot = rows.swap_remove(i);
        let bit = pivot & pivot.wrapping_neg();
        for r in rows.iter_mut() {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// Loop-free undirected graph without parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    adj: Vec<Mask>,
}

impl Graph {
    pub fn new(n: usize) -> Result<Self, RwError> {
        Self::with_names((0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_names(names: Vec<String>) -> Result<Self, RwError> {
        if names.len() > 64 {
            return Err(RwError::TooManyVertices(names.len()));
        }
        let n = names.len();
        Ok(Graph { names, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, RwError> {
        let mut g = Self::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Self::from_edges(n, &edges).unwrap()
    }

    /// Each pair is an edge with probability `p`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, p: f64) -> Self {
        let mut g = Self::new(n).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), RwError> {
        if u == v {
            return Err(RwError::Loop(self.names[u].clone()));
        }
        if self.adj[u] >> v & 1 == 1 {
            return Err(RwError::ParallelEdge(self.names[u].clone(), self.names[v].clone()));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn all(&self) -> Mask {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|u| (u + 1..self.len()).filter(move |&v| self.adjacent(u, v)).map(move |v| (u, v))).collect()
    }

    /// The subgraph induced by `keep`, vertices in increasing order.
    pub fn induced(&self, keep: Mask) -> Graph {
        let vs: Vec<usize> = (0..self.len()).filter(|&v| keep >> v & 1 == 1).collect();
        let mut g = Graph::with_names(vs.iter().map(|&v| self.names[v].clone()).collect()).unwrap();
        for (i, &u) in vs.iter().enumerate() {
            for (k, &v) in vs.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    g.add_edge(i, k).unwrap();
                }
            }
        }
        g
    }

    /// The `u × w` block of the adjacency matrix, rows in vertex order,
    /// columns packed in vertex order.
    pub fn block(&self, u: Mask, w: Mask) -> Gf2Matrix {
        let cols: Vec<usize> = (0..self.len()).filter(|&v| w >> v & 1 == 1).collect();
        let rows = (0..self.len())
            .filter(|&v| u >> v & 1 == 1)
            .map(|v| cols.iter().enumerate().fold(0u64, |r, (i, &c)| r | ((self.adj[v] >> c & 1) << i)))
            .collect();
        Gf2Matrix { rows, cols: cols.len() }
    }

    pub fn cut_rank(&self, u: Mask, w: Mask) -> Result<usize, RwError> {
        if u & w != 0 {
            return Err(RwError::Overlap);
        }
        // rows masked to w keep column positions; rank does not care
        Ok(gf2_rank(&(0..self.len()).filter(|&v| u >> v & 1 == 1).map(|v| self.adj[v] & w).collect::<Vec<_>>()))
    }

    /// Edge list text: `u v` per line, a lone name declares an isolated
    /// vertex, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Graph, RwError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() > 2 {
                return Err(RwError::Parse { line: i + 1, msg: format!("expected `u v`, got `{line}`") });
            }
            let ids: Vec<usize> = words
                .iter()
                .map(|w| {
                    *index.entry(w.to_string()).or_insert_with(|| {
                        names.push(w.to_string());
                        names.len() - 1
                    })
                })
                .collect();
            if let [u, v] = ids[..] {
                edges.push((i + 1, u, v));
            }
        }
        let mut g = Graph::with_names(names)?;
        for (line, u, v) in edges {
            g.add_edge(u, v).map_err(|e| RwError::Parse { line, msg: e.to_string() })?;
        }
        Ok(g)
    }
}

/// Unrooted tree of maximal degree 3 with the graph's vertices as leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    /// Neighbour lists of the tree nodes.
    pub adj: Vec<Vec<usize>>,
    /// Vertex carried by each tree node; leaves carry exactly one.
    pub vertex: Vec<Option<usize>>,
}

impl Layout {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.adj.len()).flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b))).collect()
    }

    /// Checks the shape against a graph with `n` vertices.
    pub fn validate(&self, n: usize) -> Result<(), RwError> {
        let m = self.adj.len();
        let bad = |s: String| Err(RwError::Layout(s));
        if self.vertex.len() != m {
            return bad("vertex table has the wrong length".into());
        }
        if self.edges().len() + 1 != m.max(1) {
            return bad(format!("{m} nodes need {} edges", m.saturating_sub(1)));
        }
        for a in 0..m {
            if self.adj[a].iter().any(|&b| b >= m || !self.adj[b].contains(&a)) {
                return bad(format!("node {a} has a dangling neighbour"));
            }
            if self.adj[a].len() > 3 {
                return bad(format!("node {a} has degree {}", self.adj[a].len()));
            }
        }
        let mut seen = vec![false; m];
        let mut stack = if m > 0 { vec![0] } else { vec![] };
        while let Some(a) = stack.pop() {
            if !std::mem::replace(&mut seen[a], true) {
                stack.extend(&self.adj[a]);
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("not connected".into());
        }
        let mut hit = vec![false; n];
        for a in 0..m {
            let leaf = self.adj[a].len() <= 1;
            match self.vertex[a] {
                Some(v) if !leaf => return bad(format!("vertex {v} sits on inner node {a}")),
                None if leaf => return bad(format!("leaf {a} carries no vertex")),
                Some(v) if v >= n || std::mem::replace(&mut hit[v], true) => {
                    return bad(format!("vertex {v} is missing from the graph or placed twice"))
                }
                _ => {}
            }
        }
        if hit.iter().any(|h| !h) {
            return bad("some vertex has no leaf".into());
        }
        Ok(())
    }

    /// Vertices on `b`'s side of the tree edge `a - b`.
    pub fn side(&self, a: usize, b: usize) -> Mask {
        let mut mask = 0;
        let mut stack = vec![(b, a)];
        while let Some((x, from)) = stack.pop() {
            if let Some(v) = self.vertex[x] {
                mask |= 1 << v;
            }
            stack.extend(self.adj[x].iter().filter(|&&y| y != from).map(|&y| (y, x)));
        }
        mask
    }

    pub fn to_dot(&self, g: &Graph) -> String {
        let mut out = String::from("graph layout {\n");
        for (a, v) in self.vertex.iter().enumerate() {
            match v {
                Some(v) => writeln!(out, "  n{a} [label=\"{}\", shape=box];", g.names()[*v]).unwrap(),
                None => writeln!(out, "  n{a} [label=\"\", shape=point];").unwrap(),
            }
        }
        for (a, b) in self.edges() {
            let r = g.cut_rank(self.side(b, a), self.side(a, b)).unwrap();
            writeln!(out, "  n{a} -- n{b} [label=\"{r}\"];").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Largest cut-rank over the edges of a valid layout.
pub fn layout_rank(g: &Graph, t: &Layout) -> Result<usize, RwError> {
    t.validate(g.len())?;
    Ok(unchecked_layout_rank(g, t, usize::MAX))
}

/// Stops early once some cut reaches `stop`.
fn unchecked_layout_rank(g: &Graph, t: &Layout, stop: usize) -> usize {
    let all = g.all();
    let mut worst = 0;
    for (a, b) in t.edges() {
        let x = t.side(a, b);
        worst = worst.max(g.cut_rank(x, all & !x).unwrap());
        if worst >= stop {
            break;
        }
    }
    worst
}

/// All cubic layouts with leaves `0..n`, each leaf `k ≥ 3` inserted by
/// subdividing an edge of a layout on `0..k`. There are `(2n − 5)!!` of them
/// for `n ≥ 3`.
pub fn cubic_layouts(n: usize) -> Vec<Layout> {
    match n {
        0 => return vec![Layout { adj: vec![], vertex: vec![] }],
        1 => return vec![Layout { adj: vec![vec![]], vertex: vec![Some(0)] }],
        2 => return vec![Layout { adj: vec![vec![1], vec![0]], vertex: vec![Some(0), Some(1)] }],
        _ => {}
    }
    let star = Layout { adj: vec![vec![3], vec![3], vec![3], vec![0, 1, 2]], vertex: vec![Some(0), Some(1), Some(2), None] };
    let mut level = vec![star];
    for k in 3..n {
        let mut next = Vec::with_capacity(level.len() * (2 * k - 3));
        for t in &level {
            for (a, b) in t.edges() {
                let mut u = t.clone();
                let (mid, leaf) = (u.adj.len(), u.adj.len() + 1);
                for (x, y) in [(a, b), (b, a)] {
                    let slot = u.adj[x].iter().position(|&z| z == y).unwrap();
                    u.adj[x][slot] = mid;
                }
                u.adj.push(vec![a, b, leaf]);
                u.adj.push(vec![mid]);
                u.vertex.extend([None, Some(k)]);
                next.push(u);
            }
        }
        level = next;
    }
    level
}

pub const MAX_EXHAUSTIVE: usize = 9;

/// Least layout rank over all cubic layouts, with a witness, for graphs of
/// at most `max_n` vertices.
pub fn discrete_rankwidth(g: &Graph, max_n: usize) -> Result<(usize, Layout), RwError> {
    if g.len() > max_n {
        return Err(RwError::TooLarge { n: g.len(), max: max_n });
    }
    let mut best: Option<(usize, Layout)> = None;
    for t in cubic_layouts(g.len()) {
        let bound = best.as_ref().map_or(usize::MAX, |b| b.0);
        let r = unchecked_layout_rank(g, &t, bound);
        if r < bound {
            let done = r == 0;
            best = Some((r, t));
            if done {
                break;
            }
        }
    }
    Ok(best.expect("at least one layout"))
}
