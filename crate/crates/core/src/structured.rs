//! Join-forests together with a partition into lines (a structuring).
//!
//! Lines are stored bottom to top. An axis is a line without a top; a valid
//! structured forest has one axis per component.

use std::collections::BTreeMap;
use std::fmt;

use crate::order::{NodeId, OrderError, Poset};

pub type LineId = usize;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StructError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("node `{0}` is in {1} lines")]
    NotPartition(String, usize),
    #[error("block {0:?} is not a line")]
    NotALine(Vec<String>),
    #[error("not a join-forest")]
    NotJoinForest,
    #[error("not a join-tree")]
    NotJoinTree,
    #[error("component of `{0}` has {1} axes")]
    AxisCount(String, usize),
    #[error("node `{0}` has degree {1} > 2")]
    NotBinary(String, usize),
    #[error("minimum `{0}` of the axis has degree {1}")]
    AxisMinDegree(String, usize),
    #[error("node `{0}` is the top of {1} lines")]
    ManyLinesTopped(String, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Structured {
    poset: Poset,
    lines: Vec<Vec<NodeId>>,
    line_of: Vec<LineId>,
    top: Vec<Option<NodeId>>,
}

impl Structured {
    /// Checks that `lines` partition the nodes into lines of a join-forest
    /// with exactly one topless line per component.
    pub fn new(poset: Poset, lines: Vec<Vec<NodeId>>) -> Result<Self, StructError> {
        if !poset.is_join_forest() {
            return Err(StructError::NotJoinForest);
        }
        let s = Self::new_unchecked(poset, lines)?;
        // one axis per component: every maximal node lies on an axis
        let mut axes_per_root: BTreeMap<NodeId, usize> = BTreeMap::new();
        for (l, line) in s.lines.iter().enumerate() {
            if s.top[l].is_none() {
                let root = *line.last().unwrap();
                if s.poset.parent(root).is_some() {
                    // topless but not upward closed cannot happen in finite forests
                    return Err(StructError::NotALine(s.line_names(l)));
                }
                *axes_per_root.entry(root).or_default() += 1;
            }
        }
        for r in s.poset.maximal() {
            let k = axes_per_root.get(&r).copied().unwrap_or(0);
            if k != 1 {
                return Err(StructError::AxisCount(s.poset.name(r).to_string(), k));
            }
        }
        Ok(s)
    }

    /// Partition and line checks only; lines may be given in any order.
    pub fn new_unchecked(poset: Poset, mut lines: Vec<Vec<NodeId>>) -> Result<Self, StructError> {
        let n = poset.len();
        let mut line_of = vec![usize::MAX; n];
        let mut seen = vec![0usize; n];
        lines.retain(|l| !l.is_empty());
        for (i, line) in lines.iter_mut().enumerate() {
            line.sort_by(|&a, &b| {
                if a == b {
                    std::cmp::Ordering::Equal
                } else if poset.leq(a, b) {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            });
            for &x in line.iter() {
                seen[x] += 1;
                line_of[x] = i;
            }
        }
        if let Some(x) = (0..n).find(|&x| seen[x] != 1) {
            return Err(StructError::NotPartition(poset.name(x).to_string(), seen[x]));
        }
        for line in &lines {
            if !poset.is_line(line) {
                return Err(StructError::NotALine(line.iter().map(|&x| poset.name(x).to_string()).collect()));
            }
        }
        let top = lines.iter().map(|l| poset.parent(*l.last().unwrap())).collect();
        Ok(Structured { poset, lines, line_of, top })
    }

    pub fn empty() -> Self {
        Structured { poset: Poset::empty(), lines: vec![], line_of: vec![], top: vec![] }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Forgets the structuring.
    pub fn fgs(&self) -> Poset {
        self.poset.clone()
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn name(&self, x: NodeId) -> &str {
        self.poset.name(x)
    }

    pub fn lines(&self) -> &[Vec<NodeId>] {
        &self.lines
    }

    pub fn line(&self, l: LineId) -> &[NodeId] {
        &self.lines[l]
    }

    pub fn line_of(&self, x: NodeId) -> LineId {
        self.line_of[x]
    }

    fn line_names(&self, l: LineId) -> Vec<String> {
        self.lines[l].iter().map(|&x| self.name(x).to_string()).collect()
    }

    /// Least strict upper bound of line `l`, absent for axes.
    pub fn top(&self, l: LineId) -> Option<NodeId> {
        self.top[l]
    }

    /// Topless lines, sorted.
    pub fn axes(&self) -> Vec<LineId> {
        (0..self.lines.len()).filter(|&l| self.top[l].is_none()).collect()
    }

    /// The axis of a join-tree (absent when empty).
    pub fn axis(&self) -> Option<LineId> {
        self.axes().first().copied()
    }

    /// Lines whose top is `x` (the set 𝒰ˣ), sorted.
    pub fn lines_topped_by(&self, x: NodeId) -> Vec<LineId> {
        (0..self.lines.len()).filter(|&l| self.top[l] == Some(x)).collect()
    }

    /// Length of the top-chain of `x`.
    pub fn depth(&self, x: NodeId) -> usize {
        let mut d = 0;
        let mut l = self.line_of[x];
        while let Some(t) = self.top[l] {
            d += 1;
            l = self.line_of[t];
        }
        d
    }

    pub fn is_join_tree(&self) -> bool {
        self.poset.is_join_tree()
    }

    /// Conditions of structured binary join-trees on top of [`Structured::new`]:
    /// a join-tree, binary, axis minimum of degree ≤ 1, each node tops at most one line.
    pub fn check_sbj(&self) -> Result<(), StructError> {
        if !self.poset.is_join_tree() {
            return Err(StructError::NotJoinTree);
        }
        for x in self.poset.nodes() {
            let d = self.poset.degree(x);
            if d > 2 {
                return Err(StructError::NotBinary(self.name(x).into(), d));
            }
            let k = self.lines_topped_by(x).len();
            if k > 1 {
                return Err(StructError::ManyLinesTopped(self.name(x).into(), k));
            }
        }
        if let Some(a) = self.axis() {
            let m = self.lines[a][0];
            let d = self.poset.degree(m);
            if d > 1 {
                return Err(StructError::AxisMinDegree(self.name(m).into(), d));
            }
        }
        Ok(())
    }

    /// Canonical string of a line; children lines of each node are sorted,
    /// so equal strings mean isomorphic structured trees.
    pub fn canon_line(&self, l: LineId) -> String {
        let mut s = String::from("[");
        for &x in &self.lines[l] {
            s.push_str(&self.canon_node(x));
        }
        s.push(']');
        s
    }

    fn canon_node(&self, x: NodeId) -> String {
        let mut kids: Vec<String> = self.lines_topped_by(x).into_iter().map(|l| self.canon_line(l)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }

    /// Canonical form of the whole forest (components sorted).
    pub fn canonical(&self) -> String {
        let mut comps: Vec<String> = self.axes().into_iter().map(|l| self.canon_line(l)).collect();
        comps.sort();
        comps.concat()
    }

    /// Renames nodes; `f` must be injective.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Structured {
        let names: Vec<String> = self.poset.names().iter().map(|s| f(s)).collect();
        let poset = Poset::from_leq(names, |a, b| self.poset.leq(a, b)).expect("renaming keeps the order");
        Structured { poset, lines: self.lines.clone(), line_of: self.line_of.clone(), top: self.top.clone() }
    }

    /// Equality up to node numbering: same names, order and lines.
    pub fn same_as(&self, other: &Structured) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let Ok(map) = self.poset.names().iter().map(|n| other.poset.id(n)).collect::<Result<Vec<_>, _>>() else {
            return false;
        };
        self.poset.nodes().all(|x| {
            self.poset.nodes().all(|y| {
                self.poset.leq(x, y) == other.poset.leq(map[x], map[y])
                    && (self.line_of[x] == self.line_of[y]) == (other.line_of[map[x]] == other.line_of[map[y]])
            })
        })
    }

    /// Sub-forest on `keep`; lines are intersected with `keep`.
    pub fn restrict(&self, keep: &[NodeId]) -> Result<Structured, StructError> {
        let poset = self.poset.restrict(keep);
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &x) in keep.iter().enumerate() {
            pos[x] = i;
        }
        let lines = self
            .lines
            .iter()
            .map(|l| l.iter().filter(|&&x| pos[x] != usize::MAX).map(|&x| pos[x]).collect())
            .collect();
        Structured::new(poset, lines)
    }

    /// Builds and validates from a node list, an order predicate and lines.
    pub fn from_parts(
        names: Vec<String>,
        leq: impl Fn(NodeId, NodeId) -> bool,
        lines: Vec<Vec<NodeId>>,
    ) -> Result<Structured, StructError> {
        Structured::new(Poset::from_leq(names, leq)?, lines)
    }

    /// Graphviz rendering of the covering relation, drawn upwards; covers
    /// inside one line are bold.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n  rankdir=BT;\n");
        for x in self.poset.nodes() {
            out.push_str(&format!("  n{x} [label={:?}];\n", self.name(x)));
        }
        for (a, b) in self.poset.covers() {
            let style = if self.line_of(a) == self.line_of(b) { " [style=bold, penwidth=2.5]" } else { "" };
            out.push_str(&format!("  n{a} -> n{b}{style};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// Poset text plus `axis:` and `line:` records.
    pub fn to_text(&self) -> String {
        let mut out = self.poset.to_text();
        let mut ls: Vec<(bool, Vec<String>)> =
            (0..self.lines.len()).map(|l| (self.top[l].is_some(), self.line_names(l))).collect();
        ls.sort();
        for (topped, names) in ls {
            out.push_str(if topped { "line:" } else { "axis:" });
            for n in names {
                out.push(' ');
                out.push_str(&n);
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`Structured::to_text`] output; unknown records are returned.
    pub fn parse_with_extras(text: &str) -> Result<(Structured, Vec<(usize, String)>), StructError> {
        let (poset, extras) = Poset::parse_with_extras(text)?;
        let mut lines = Vec::new();
        let mut rest = Vec::new();
        // nodes that only appear in line records
        let mut extra_nodes: Vec<String> = Vec::new();
        for (ln, rec) in &extras {
            if let Some(body) = rec.strip_prefix("line:").or_else(|| rec.strip_prefix("axis:")) {
                for n in body.split_whitespace() {
                    if poset.id(n).is_err() && !extra_nodes.iter().any(|e| e == n) {
                        extra_nodes.push(n.to_string());
                    }
                }
                lines.push((*ln, rec.starts_with("axis:"), body.to_string()));
            } else {
                rest.push((*ln, rec.clone()));
            }
        }
        let poset = if extra_nodes.is_empty() {
            poset
        } else {
            let mut names = poset.names().to_vec();
            let old = poset.len();
            names.extend(extra_nodes);
            Poset::from_leq(names, |a, b| a == b || (a < old && b < old && poset.leq(a, b)))?
        };
        let mut blocks = Vec::new();
        let mut kinds = Vec::new();
        for (ln, is_axis, body) in lines {
            if body.split_whitespace().next().is_none() {
                return Err(StructError::Parse { line: ln, msg: "empty line record".into() });
            }
            kinds.push((ln, is_axis));
            let mut block = Vec::new();
            for n in body.split_whitespace() {
                block.push(poset.id(n).map_err(|e| StructError::Parse { line: ln, msg: e.to_string() })?);
            }
            blocks.push(block);
        }
        if blocks.is_empty() && !poset.is_empty() {
            return Err(StructError::Parse { line: 0, msg: "no line records".into() });
        }
        let s = Structured::new(poset, blocks)?;
        for (l, (ln, is_axis)) in kinds.into_iter().enumerate() {
            if s.top(l).is_none() != is_axis {
                let msg = if is_axis { "axis record has a top" } else { "line record has no top" };
                return Err(StructError::Parse { line: ln, msg: msg.into() });
            }
        }
        Ok((s, rest))
    }

    pub fn parse(text: &str) -> Result<Structured, StructError> {
        let (s, rest) = Self::parse_with_extras(text)?;
        if let Some((line, r)) = rest.into_iter().next() {
            return Err(StructError::Parse { line, msg: format!("unrecognised record `{r}`") });
        }
        Ok(s)
    }
}

impl fmt::Debug for Structured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}
