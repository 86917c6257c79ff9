//! Finite partial orders, join-trees and join-forests.
//!
//! A poset is stored as its full reachability relation, one bitset row per
//! node for the up-set and one for the down-set. Node ids are indices into
//! the name table; every set-valued result is sorted by index.

use std::collections::HashMap;
use std::fmt;

use crate::bits::BitSet;

pub type NodeId = usize;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("relation is not antisymmetric: {0} and {1} are mutually below each other")]
    NotAntisymmetric(String, String),
    #[error("relation is not reflexive at {0}")]
    NotReflexive(String),
    #[error("relation is not transitive: {0} <= {1} <= {2}")]
    NotTransitive(String, String, String),
    #[error("not a join-forest")]
    NotJoinForest,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

/// Result of [`Poset::laminar_components`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Laminar {
    /// Maximal lines contained in the set, each listed bottom to top.
    Components(Vec<Vec<NodeId>>),
    /// `x < z`, `y < z`, both intervals inside the set, neither contains the other.
    NotLaminar { x: NodeId, y: NodeId, z: NodeId },
}

impl Poset {
    /// Builds the order generated by the strict pairs `(x, y)` meaning `x < y`.
    pub fn from_pairs(names: Vec<String>, pairs: &[(NodeId, NodeId)]) -> Result<Self, OrderError> {
        let n = names.len();
        let index = build_index(&names)?;
        let mut up: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        let mut succ: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for &(x, y) in pairs {
            succ[x].push(y);
        }
        for (x, row) in up.iter_mut().enumerate() {
            let mut stack = vec![x];
            row.insert(x);
            while let Some(a) = stack.pop() {
                for &b in &succ[a] {
                    if !row.contains(b) {
                        row.insert(b);
                        stack.push(b);
                    }
                }
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if y != x && up[y].contains(x) {
                    return Err(OrderError::NotAntisymmetric(names[x].clone(), names[y].clone()));
                }
            }
        }
        Ok(Self::from_up_rows(names, index, up))
    }

    /// Builds a poset from a full `leq` predicate, validating the order axioms.
    pub fn from_leq(names: Vec<String>, leq: impl Fn(NodeId, NodeId) -> bool) -> Result<Self, OrderError> {
        let n = names.len();
        let index = build_index(&names)?;
        let mut up: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for (x, row) in up.iter_mut().enumerate() {
            for y in 0..n {
                if leq(x, y) {
                    row.insert(y);
                }
            }
        }
        for x in 0..n {
            if !up[x].contains(x) {
                return Err(OrderError::NotReflexive(names[x].clone()));
            }
            for y in up[x].iter() {
                if y != x && up[y].contains(x) {
                    return Err(OrderError::NotAntisymmetric(names[x].clone(), names[y].clone()));
                }
                if !up[y].is_subset(&up[x]) {
                    let z = up[y].iter().find(|&z| !up[x].contains(z)).unwrap();
                    return Err(OrderError::NotTransitive(
                        names[x].clone(),
                        names[y].clone(),
                        names[z].clone(),
                    ));
                }
            }
        }
        Ok(Self::from_up_rows(names, index, up))
    }

    fn from_up_rows(names: Vec<String>, index: HashMap<String, NodeId>, up: Vec<BitSet>) -> Self {
        let n = names.len();
        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for (x, row) in up.iter().enumerate() {
            for y in row.iter() {
                down[y].insert(x);
            }
        }
        Poset { names, index, up, down }
    }

    pub fn empty() -> Self {
        Poset { names: Vec::new(), index: HashMap::new(), up: Vec::new(), down: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.names.len()
    }

    pub fn name(&self, x: NodeId) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Result<NodeId, OrderError> {
        self.index.get(name).copied().ok_or_else(|| OrderError::UnknownNode(name.to_string()))
    }

    #[inline]
    pub fn leq(&self, x: NodeId, y: NodeId) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: NodeId, y: NodeId) -> bool {
        x != y && self.up[x].contains(y)
    }

    #[inline]
    pub fn incomparable(&self, x: NodeId, y: NodeId) -> bool {
        !self.leq(x, y) && !self.leq(y, x)
    }

    /// `[x, +∞[`
    pub fn up_set(&self, x: NodeId) -> &BitSet {
        &self.up[x]
    }

    /// `]−∞, x]`
    pub fn down_row(&self, x: NodeId) -> &BitSet {
        &self.down[x]
    }

    /// Least upper bound of `x` and `y`, if any.
    pub fn join(&self, x: NodeId, y: NodeId) -> Option<NodeId> {
        let mut ub = self.up[x].clone();
        ub.intersect_with(&self.up[y]);
        least_of(&self.up, &ub)
    }

    /// Every up-set is a chain.
    fn up_sets_are_chains(&self) -> bool {
        self.nodes().all(|x| {
            let ys: Vec<_> = self.up[x].iter().collect();
            ys.iter().all(|&a| ys.iter().all(|&b| self.leq(a, b) || self.leq(b, a)))
        })
    }

    pub fn is_join_tree(&self) -> bool {
        self.up_sets_are_chains()
            && self.nodes().all(|x| self.nodes().all(|y| y <= x || self.join(x, y).is_some()))
    }

    /// Up-sets are chains and any two nodes with a common upper bound have a join.
    pub fn is_join_forest(&self) -> bool {
        self.up_sets_are_chains()
            && self.nodes().all(|x| {
                self.nodes().all(|y| {
                    if y <= x {
                        return true;
                    }
                    let mut ub = self.up[x].clone();
                    ub.intersect_with(&self.up[y]);
                    ub.is_empty() || least_of(&self.up, &ub).is_some()
                })
            })
    }

    /// Linearly ordered and convex.
    pub fn is_line(&self, ys: &[NodeId]) -> bool {
        let mut set = BitSet::new(self.len());
        for &y in ys {
            set.insert(y);
        }
        for &a in ys {
            for &b in ys {
                if !self.leq(a, b) && !self.leq(b, a) {
                    return false;
                }
                if self.lt(a, b) {
                    // convexity: everything between a and b is in ys
                    let mut between = self.up[a].clone();
                    between.intersect_with(&self.down[b]);
                    if !between.is_subset(&set) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Nodes covered by `x` (immediate predecessors).
    pub fn lower_covers(&self, x: NodeId) -> Vec<NodeId> {
        self.down[x].iter().filter(|&y| y != x && self.interval_len(y, x) == 2).collect()
    }

    fn interval_len(&self, a: NodeId, b: NodeId) -> usize {
        let mut between = self.up[a].clone();
        between.intersect_with(&self.down[b]);
        between.count()
    }

    /// The unique node covering `x`, if any (finite join-forests).
    pub fn parent(&self, x: NodeId) -> Option<NodeId> {
        let mut strict = self.up[x].clone();
        strict.remove(x);
        least_of(&self.up, &strict)
    }

    /// Maximal nodes, sorted.
    pub fn maximal(&self) -> Vec<NodeId> {
        self.nodes().filter(|&x| self.up[x].count() == 1).collect()
    }

    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn covers(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for x in self.nodes() {
            for y in self.up[x].iter() {
                if y != x && self.interval_len(x, y) == 2 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Directions relative to `x`: classes of `]−∞,x[` under `z ~ y ⟺ z⊔y < x`.
    pub fn directions(&self, x: NodeId) -> Result<Vec<Vec<NodeId>>, OrderError> {
        if !self.is_join_forest() {
            return Err(OrderError::NotJoinForest);
        }
        Ok(self.directions_unchecked(x))
    }

    /// As [`Poset::directions`] without the join-forest check.
    pub fn directions_unchecked(&self, x: NodeId) -> Vec<Vec<NodeId>> {
        let mut out: Vec<Vec<NodeId>> =
            self.lower_covers(x).into_iter().map(|c| self.down[c].iter().collect()).collect();
        out.sort();
        out
    }

    pub fn degree(&self, x: NodeId) -> usize {
        self.lower_covers(x).len()
    }

    /// `↓(X)`, sorted.
    pub fn down_set(&self, xs: &[NodeId]) -> Vec<NodeId> {
        let mut acc = BitSet::new(self.len());
        for &x in xs {
            acc.union_with(&self.down[x]);
        }
        acc.iter().collect()
    }

    /// Splits a laminar set into its maximal lines, or reports a violating triple.
    pub fn laminar_components(&self, xs: &[NodeId]) -> Laminar {
        let mut set = BitSet::new(self.len());
        for &x in xs {
            set.insert(x);
        }
        // In a finite join-tree the set is laminar iff no member has two
        // lower covers inside the set.
        for z in set.iter() {
            let inside: Vec<_> = self.lower_covers(z).into_iter().filter(|c| set.contains(*c)).collect();
            if inside.len() >= 2 {
                return Laminar::NotLaminar { x: inside[0], y: inside[1], z };
            }
        }
        let mut comps: Vec<Vec<NodeId>> = Vec::new();
        for x in set.iter() {
            let below_inside = self.lower_covers(x).into_iter().any(|c| set.contains(c));
            if below_inside {
                continue;
            }
            let mut line = vec![x];
            let mut cur = x;
            while let Some(p) = self.parent(cur) {
                if !set.contains(p) {
                    break;
                }
                line.push(p);
                cur = p;
            }
            comps.push(line);
        }
        comps.sort();
        Laminar::Components(comps)
    }

    /// Sub-poset induced on `keep` (names preserved, ids renumbered in order).
    pub fn restrict(&self, keep: &[NodeId]) -> Poset {
        let names: Vec<String> = keep.iter().map(|&x| self.names[x].clone()).collect();
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let k = keep.len();
        let mut up: Vec<BitSet> = (0..k).map(|_| BitSet::new(k)).collect();
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if self.leq(a, b) {
                    up[i].insert(j);
                }
            }
        }
        Self::from_up_rows(names, index, up)
    }

    /// Parses the text format: `a < b` lines (chains `a < b < c` allowed),
    /// `node a` lines, `#` comments. Lines whose first word is unknown to
    /// this format are returned untouched for callers layering extra records.
    pub fn parse_with_extras(text: &str) -> Result<(Poset, Vec<(usize, String)>), OrderError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, NodeId> = HashMap::new();
        let mut pairs = Vec::new();
        let mut extras = Vec::new();
        let mut intern = |s: &str, names: &mut Vec<String>| -> NodeId {
            *index.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                names.len() - 1
            })
        };
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("node ") {
                for tok in rest.split_whitespace() {
                    intern(tok, &mut names);
                }
            } else if line.contains('<') && !line.contains(':') {
                let parts: Vec<&str> = line.split('<').map(str::trim).collect();
                if parts.iter().any(|p| p.is_empty() || p.contains(char::is_whitespace)) {
                    return Err(OrderError::Parse { line: ln + 1, msg: format!("bad pair `{line}`") });
                }
                let ids: Vec<NodeId> = parts.iter().map(|p| intern(p, &mut names)).collect();
                for w in ids.windows(2) {
                    pairs.push((w[0], w[1]));
                }
            } else {
                extras.push((ln + 1, line.to_string()));
            }
        }
        Ok((Poset::from_pairs(names, &pairs)?, extras))
    }

    pub fn parse(text: &str) -> Result<Poset, OrderError> {
        let (p, extras) = Self::parse_with_extras(text)?;
        if let Some((line, s)) = extras.into_iter().next() {
            return Err(OrderError::Parse { line, msg: format!("unrecognised record `{s}`") });
        }
        Ok(p)
    }

    /// Text serialization: isolated nodes as `node` lines, then covering pairs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let covers = self.covers();
        let mut touched = vec![false; self.len()];
        for &(a, b) in &covers {
            touched[a] = true;
            touched[b] = true;
        }
        for x in self.nodes().filter(|&x| !touched[x]) {
            out.push_str(&format!("node {}\n", self.names[x]));
        }
        for (a, b) in covers {
            out.push_str(&format!("{} < {}\n", self.names[a], self.names[b]));
        }
        out
    }
}

fn build_index(names: &[String]) -> Result<HashMap<String, NodeId>, OrderError> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, s) in names.iter().enumerate() {
        if index.insert(s.clone(), i).is_some() {
            return Err(OrderError::DuplicateNode(s.clone()));
        }
    }
    Ok(index)
}

/// Least element of `set` w.r.t. the order given by `up` rows.
fn least_of(up: &[BitSet], set: &BitSet) -> Option<NodeId> {
    set.iter().find(|&z| set.is_subset(&up[z]))
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset {{ {} }}", self.to_text().trim_end().replace('\n', "; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(names: &[&str]) -> Poset {
        let pairs: Vec<_> = (1..names.len()).map(|i| (i - 1, i)).collect();
        Poset::from_pairs(names.iter().map(|s| s.to_string()).collect(), &pairs).unwrap()
    }

    #[test]
    fn chain_is_join_tree() {
        let p = chain(&["a", "b", "c"]);
        assert!(p.is_join_tree());
        assert_eq!(p.join(0, 2), Some(2));
        assert!(!p.is_line(&[0, 2]));
        assert!(p.is_line(&[1]));
        assert_eq!(p.down_set(&[1]), vec![0, 1]);
    }

    #[test]
    fn antichain_and_fork() {
        let p = Poset::parse("node a b").unwrap();
        assert!(!p.is_join_tree());
        assert!(p.is_join_forest());
        assert_eq!(p.join(0, 1), None);
        let q = Poset::parse("x < z\nx < t").unwrap();
        assert!(!q.is_join_tree());
        assert!(Poset::empty().is_join_tree());
    }

    #[test]
    fn directions_of_binary_node() {
        let p = Poset::parse("l1 < l\nl2 < l\nl < r\nr1 < r").unwrap();
        let r = p.id("r").unwrap();
        let dirs = p.directions(r).unwrap();
        assert_eq!(dirs.len(), 2);
        assert_eq!(p.directions(p.id("l1").unwrap()).unwrap(), Vec::<Vec<NodeId>>::new());
        // agrees with the definition z ~ y iff z⊔y < x
        for x in p.nodes() {
            for d in &dirs_by_definition(&p, x) {
                assert!(p.directions(x).unwrap().contains(d));
            }
        }
    }

    fn dirs_by_definition(p: &Poset, x: NodeId) -> Vec<Vec<NodeId>> {
        let below: Vec<_> = p.nodes().filter(|&y| p.lt(y, x)).collect();
        let mut classes: Vec<Vec<NodeId>> = Vec::new();
        for &y in &below {
            match classes.iter_mut().find(|c| p.lt(p.join(c[0], y).unwrap(), x)) {
                Some(c) => c.push(y),
                None => classes.push(vec![y]),
            }
        }
        classes
    }

    #[test]
    fn laminar_detects_merge() {
        let p = Poset::parse("a < c\nb < c\nc < d\ne < d").unwrap();
        let ids = |s: &[&str]| s.iter().map(|n| p.id(n).unwrap()).collect::<Vec<_>>();
        assert!(matches!(p.laminar_components(&ids(&["a", "b", "c"])), Laminar::NotLaminar { .. }));
        match p.laminar_components(&ids(&["a", "c", "e"])) {
            Laminar::Components(c) => {
                assert_eq!(c.len(), 2);
                assert!(c.iter().all(|l| p.is_line(l)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_cycles_and_duplicates() {
        assert!(matches!(Poset::parse("a < b\nb < a"), Err(OrderError::NotAntisymmetric(..))));
        let bad = Poset::from_leq(vec!["a".into(), "b".into(), "c".into()], |x, y| x == y || (x, y) == (0, 1) || (x, y) == (1, 2));
        assert!(matches!(bad, Err(OrderError::NotTransitive(..))));
        assert!(matches!(Poset::from_pairs(vec!["a".into(), "a".into()], &[]), Err(OrderError::DuplicateNode(_))));
    }

    #[test]
    fn text_roundtrip() {
        let p = Poset::parse("# tree\na < b\nc < b\nnode z").unwrap();
        let q = Poset::parse(&p.to_text()).unwrap();
        assert_eq!(p.len(), q.len());
        for x in p.nodes() {
            for y in p.nodes() {
                let (qx, qy) = (q.id(p.name(x)).unwrap(), q.id(p.name(y)).unwrap());
                assert_eq!(p.leq(x, y), q.leq(qx, qy));
            }
        }
    }
}
