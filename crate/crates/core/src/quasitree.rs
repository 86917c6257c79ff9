//! Betweenness relations and quasi-trees.
//!
//! A [`Betweenness`] is a finite ternary relation; whether it satisfies the
//! axioms A1–A7 (quasi-tree) or A1–A7′ (linear order) is computed by
//! [`check_axioms`], never assumed.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::order::{NodeId, OrderError, Poset};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum QtError {
    #[error("a quasi-tree needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("not a join-tree")]
    NotJoinTree,
    #[error("axiom {axiom} fails at {witness}")]
    Axiom { axiom: Axiom, witness: String },
    #[error("nodes must be pairwise distinct")]
    NotDistinct,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("order reconstruction is ambiguous: {0}")]
    Ambiguous(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Betweenness {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    rel: BitSet,
}

impl Betweenness {
    pub fn new(names: Vec<String>) -> Result<Self, QtError> {
        let mut index = HashMap::new();
        for (i, s) in names.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(QtError::Order(OrderError::DuplicateNode(s.clone())));
            }
        }
        let n = names.len();
        Ok(Betweenness { names, index, rel: BitSet::new(n * n * n) })
    }

    /// Relation given by a predicate on node ids.
    pub fn from_fn(names: Vec<String>, b: impl Fn(NodeId, NodeId, NodeId) -> bool) -> Result<Self, QtError> {
        let mut s = Self::new(names)?;
        let n = s.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if b(x, y, z) {
                        s.insert(x, y, z);
                    }
                }
            }
        }
        Ok(s)
    }

    /// `B_L` of the linear order listing `names` from least to greatest.
    pub fn of_order(names: Vec<String>) -> Result<Self, QtError> {
        Self::from_fn(names, |x, y, z| (x < y && y < z) || (z < y && y < x))
    }

    /// `B_J` of a join-tree with at least 3 nodes.
    pub fn of_join_tree(j: &Poset) -> Result<Self, QtError> {
        if !j.is_join_tree() {
            return Err(QtError::NotJoinTree);
        }
        if j.len() < 3 {
            return Err(QtError::TooFewNodes(j.len()));
        }
        Self::from_fn(j.names().to_vec(), |x, y, z| join_tree_between(j, x, y, z))
    }

    fn at(&self, x: NodeId, y: NodeId, z: NodeId) -> usize {
        let n = self.len();
        (x * n + y) * n + z
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

    pub fn name(&self, x: NodeId) -> &str {
        &self.names[x]
    }

    pub fn id(&self, name: &str) -> Result<NodeId, QtError> {
        self.index.get(name).copied().ok_or_else(|| QtError::UnknownNode(name.to_string()))
    }

    pub fn holds(&self, x: NodeId, y: NodeId, z: NodeId) -> bool {
        self.rel.contains(self.at(x, y, z))
    }

    pub fn insert(&mut self, x: NodeId, y: NodeId, z: NodeId) {
        let i = self.at(x, y, z);
        self.rel.insert(i);
    }

    pub fn remove(&mut self, x: NodeId, y: NodeId, z: NodeId) {
        let i = self.at(x, y, z);
        self.rel.remove(i);
    }

    /// All triples in lexicographic order of ids.
    pub fn triples(&self) -> Vec<(NodeId, NodeId, NodeId)> {
        let n = self.len();
        self.rel.iter().map(|i| (i / (n * n), i / n % n, i % n)).collect()
    }

    /// The restriction to `keep`, in the given order.
    pub fn restrict(&self, keep: &[NodeId]) -> Betweenness {
        let names = keep.iter().map(|&x| self.names[x].clone()).collect();
        Self::from_fn(names, |x, y, z| self.holds(keep[x], keep[y], keep[z])).expect("names are distinct")
    }

    /// `[x, y]_B`, sorted by id.
    pub fn interval(&self, x: NodeId, y: NodeId) -> Vec<NodeId> {
        (0..self.len()).filter(|&z| z == x || z == y || self.holds(x, z, y)).collect()
    }

    /// A leaf is never strictly between two nodes.
    pub fn is_leaf(&self, z: NodeId) -> bool {
        (0..self.len()).all(|x| (0..self.len()).all(|y| !self.holds(x, z, y)))
    }

    pub fn check_axioms(&self, mode: Mode) -> AxiomReport {
        let all: Vec<NodeId> = (0..self.len()).collect();
        check_axioms(self.len(), |x, y, z| self.holds(x, y, z), |_, _, _| all.clone(), mode)
    }

    /// Parses `B x y z` triples, `node a b ...` declarations and `#` comments.
    /// Triples are taken verbatim; no symmetric closure is added.
    pub fn parse(text: &str) -> Result<Betweenness, QtError> {
        let mut names: Vec<String> = Vec::new();
        let mut triples = Vec::new();
        let intern = |s: &str, names: &mut Vec<String>| match names.iter().position(|n| n == s) {
            Some(i) => i,
            None => {
                names.push(s.to_string());
                names.len() - 1
            }
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                [] => {}
                ["node", rest @ ..] => rest.iter().for_each(|w| {
                    intern(w, &mut names);
                }),
                ["B", x, y, z] => {
                    let t = (intern(x, &mut names), intern(y, &mut names), intern(z, &mut names));
                    triples.push(t);
                }
                _ => return Err(QtError::Parse { line: i + 1, msg: format!("expected `B x y z` or `node ...`, got `{line}`") }),
            }
        }
        let mut b = Betweenness::new(names)?;
        for (x, y, z) in triples {
            b.insert(x, y, z);
        }
        Ok(b)
    }

    /// A `node` line listing every node in id order, then the triples.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.is_empty() {
            out.push_str(&format!("node {}\n", self.names.join(" ")));
        }
        for (x, y, z) in self.triples() {
            out.push_str(&format!("B {} {} {}\n", self.names[x], self.names[y], self.names[z]));
        }
        out
    }
}

impl fmt::Debug for Betweenness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Betweenness {{ {} }}", self.to_text().trim_end().replace('\n', "; "))
    }
}

/// `B_J(x, y, z)` evaluated from the order and joins of `j`.
pub fn join_tree_between(j: &Poset, x: NodeId, y: NodeId, z: NodeId) -> bool {
    if x == y || y == z || x == z {
        return false;
    }
    let Some(m) = j.join(x, z) else { return false };
    (j.lt(x, y) || j.lt(z, y)) && j.leq(y, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A7Prime,
}

impl Axiom {
    pub const ALL: [Axiom; 8] =
        [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::A5, Axiom::A6, Axiom::A7, Axiom::A7Prime];
    pub const QUASI_TREE: [Axiom; 7] = [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::A5, Axiom::A6, Axiom::A7];
    pub const LINEAR: [Axiom; 7] =
        [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::A5, Axiom::A6, Axiom::A7Prime];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::A7Prime => write!(f, "A7'"),
            a => write!(f, "{a:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every quadruple of the domain.
    Exhaustive,
    /// `quads` quadruples drawn uniformly with a seeded generator.
    Sampled { quads: usize, seed: u64 },
}

/// First violation of each axiom, as `(x, y, z, u)`; `u` is unused by the
/// three-variable axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub failures: Vec<(Axiom, [NodeId; 4])>,
    pub quadruples: usize,
}

impl AxiomReport {
    pub fn failure(&self, a: Axiom) -> Option<[NodeId; 4]> {
        self.failures.iter().find(|f| f.0 == a).map(|f| f.1)
    }

    pub fn passes(&self, axioms: &[Axiom]) -> bool {
        axioms.iter().all(|&a| self.failure(a).is_none())
    }

    pub fn is_quasi_tree(&self) -> bool {
        self.passes(&Axiom::QUASI_TREE)
    }

    pub fn is_linear(&self) -> bool {
        self.passes(&Axiom::LINEAR)
    }
}

/// Checks A1–A7 and A7′ for the predicate `b` on nodes `0..n`. The witness of
/// A7's last disjunct is searched among `witnesses(x, y, z)`.
pub fn check_axioms(
    n: usize,
    b: impl Fn(NodeId, NodeId, NodeId) -> bool,
    witnesses: impl Fn(NodeId, NodeId, NodeId) -> Vec<NodeId>,
    mode: Mode,
) -> AxiomReport {
    let mut failures: Vec<(Axiom, [NodeId; 4])> = Vec::new();
    let fail = |a: Axiom, q: [NodeId; 4], failures: &mut Vec<(Axiom, [NodeId; 4])>| {
        if !failures.iter().any(|f| f.0 == a) {
            failures.push((a, q));
        }
    };
    let distinct = |x: NodeId, y: NodeId, z: NodeId| x != y && y != z && x != z;
    let check = |x: NodeId, y: NodeId, z: NodeId, u: NodeId, failures: &mut Vec<(Axiom, [NodeId; 4])>| {
        let q = [x, y, z, u];
        let bxyz = b(x, y, z);
        if u == 0 {
            if bxyz && !distinct(x, y, z) {
                fail(Axiom::A1, q, failures);
            }
            if bxyz && !b(z, y, x) {
                fail(Axiom::A2, q, failures);
            }
            if bxyz && b(x, z, y) {
                fail(Axiom::A3, q, failures);
            }
            if distinct(x, y, z) {
                let line = bxyz || b(x, z, y) || b(y, x, z);
                if !line {
                    fail(Axiom::A7Prime, q, failures);
                    let w = witnesses(x, y, z);
                    if !w.iter().any(|&w| b(x, w, y) && b(y, w, z) && b(x, w, z)) {
                        fail(Axiom::A7, q, failures);
                    }
                }
            }
        }
        if !bxyz {
            return;
        }
        if b(y, z, u) && !(b(x, y, u) && b(x, z, u)) {
            fail(Axiom::A4, q, failures);
        }
        if b(x, u, y) && !(b(x, u, z) && b(u, y, z)) {
            fail(Axiom::A5, q, failures);
        }
        if b(x, u, z) && !(y == u || (b(x, u, y) && b(u, y, z)) || (b(x, y, u) && b(y, u, z))) {
            fail(Axiom::A6, q, failures);
        }
    };
    let mut count = 0;
    match mode {
        Mode::Exhaustive => {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for u in 0..n {
                            check(x, y, z, u, &mut failures);
                            count += 1;
                        }
                    }
                }
            }
        }
        Mode::Sampled { quads, seed } if n > 0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..quads {
                let [x, y, z, u] = [0; 4].map(|_| rng.gen_range(0..n));
                // the three-variable axioms are checked when u is 0
                check(x, y, z, u, &mut failures);
                check(x, y, z, 0, &mut failures);
                count += 1;
            }
        }
        Mode::Sampled { .. } => {}
    }
    failures.sort();
    AxiomReport { failures, quadruples: count }
}

/// Axiom check of `B_J` computed on the fly from the order of `j`, with A7
/// witnesses drawn from the pairwise joins only.
pub fn check_join_tree(j: &Poset, mode: Mode) -> AxiomReport {
    check_axioms(
        j.len(),
        |x, y, z| join_tree_between(j, x, y, z),
        |x, y, z| [j.join(x, y), j.join(y, z), j.join(x, z)].into_iter().flatten().collect(),
        mode,
    )
}

/// The result of [`QuasiTree::median`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Median {
    /// One of the three nodes is between the other two.
    OnALine,
    Node(NodeId),
}

/// A finite betweenness relation with at least 3 nodes satisfying A1–A7.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiTree {
    b: Betweenness,
}

impl QuasiTree {
    pub fn new(b: Betweenness) -> Result<Self, QtError> {
        if b.len() < 3 {
            return Err(QtError::TooFewNodes(b.len()));
        }
        let report = b.check_axioms(Mode::Exhaustive);
        if let Some(&(axiom, q)) = report.failures.iter().find(|f| Axiom::QUASI_TREE.contains(&f.0)) {
            let witness = format!("({})", q.map(|x| b.name(x).to_string()).join(", "));
            return Err(QtError::Axiom { axiom, witness });
        }
        Ok(QuasiTree { b })
    }

    pub fn of_join_tree(j: &Poset) -> Result<Self, QtError> {
        Self::new(Betweenness::of_join_tree(j)?)
    }

    pub fn betweenness(&self) -> &Betweenness {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `M_S(x, y, z)` when the three nodes are not on a line.
    pub fn median(&self, x: NodeId, y: NodeId, z: NodeId) -> Result<Median, QtError> {
        if x == y || y == z || x == z {
            return Err(QtError::NotDistinct);
        }
        let b = &self.b;
        if b.holds(x, y, z) || b.holds(x, z, y) || b.holds(y, x, z) {
            return Ok(Median::OnALine);
        }
        let ws: Vec<NodeId> =
            (0..b.len()).filter(|&w| b.holds(x, w, y) && b.holds(y, w, z) && b.holds(x, w, z)).collect();
        match ws.as_slice() {
            [w] => Ok(Median::Node(*w)),
            _ => Err(QtError::Axiom { axiom: Axiom::A7, witness: format!("{} medians", ws.len()) }),
        }
    }

    /// The join-tree with root `r` whose order is `x ≤ y ⟺ y ∈ [x, r]`.
    pub fn root_order(&self, r: NodeId) -> Poset {
        let b = &self.b;
        Poset::from_leq(b.names().to_vec(), |x, y| x == y || y == r || b.holds(x, y, r))
            .expect("rooting a quasi-tree gives a join-tree")
    }

    /// `y ∼_x z`, on nodes other than `x`.
    pub fn same_direction(&self, x: NodeId, y: NodeId, z: NodeId) -> bool {
        let b = &self.b;
        y == z || b.holds(y, z, x) || b.holds(z, y, x) || (0..b.len()).any(|u| b.holds(y, u, x) && b.holds(z, u, x))
    }

    /// The directions relative to `x`, each sorted, ordered by least element.
    pub fn directions(&self, x: NodeId) -> Vec<Vec<NodeId>> {
        let mut classes: Vec<Vec<NodeId>> = Vec::new();
        for y in (0..self.len()).filter(|&y| y != x) {
            match classes.iter_mut().find(|c| self.same_direction(x, c[0], y)) {
                Some(c) => c.push(y),
                None => classes.push(vec![y]),
            }
        }
        classes
    }

    pub fn degree(&self, x: NodeId) -> usize {
        self.directions(x).len()
    }

    pub fn is_leaf(&self, x: NodeId) -> bool {
        self.degree(x) <= 1
    }

    pub fn is_subcubic(&self) -> bool {
        (0..self.len()).all(|x| self.degree(x) <= 3)
    }

    /// Every interval of a finite quasi-tree is finite.
    pub fn is_discrete(&self) -> bool {
        true
    }

    /// `L` is closed under intervals and its restriction satisfies A7′.
    pub fn is_line(&self, l: &[NodeId]) -> bool {
        let closed = l.iter().all(|&x| l.iter().all(|&y| self.b.interval(x, y).iter().all(|z| l.contains(z))));
        closed && self.b.restrict(l).check_axioms(Mode::Exhaustive).passes(&[Axiom::A7Prime])
    }
}

impl QuasiTree {
    /// Graphviz rendering of the tree whose betweenness this is.
    pub fn to_dot(&self) -> String {
        let j = self.root_order(0);
        let mut out = String::from("graph quasitree {\n");
        for x in 0..self.len() {
            out.push_str(&format!("  n{x} [label={:?}];\n", self.b.name(x)));
        }
        for (a, b) in j.covers() {
            out.push_str(&format!("  n{a} -- n{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// The quantifier-free description of `x < y` in the order with `a < b`.
pub fn z_predicate(b: &Betweenness, a: NodeId, bb: NodeId, x: NodeId, y: NodeId) -> bool {
    let t = |p, q, r| b.holds(p, q, r);
    x != y
        && ((t(x, a, bb) && !t(y, x, a))
            || (x == a && !t(y, a, bb))
            || (t(a, x, bb) && !t(y, x, bb))
            || (x == bb && t(a, bb, y))
            || (t(a, bb, x) && t(bb, x, y)))
}

/// Form of [`z_predicate`] valid when `bb` is never strictly between two nodes.
pub fn z_predicate_no_upper(b: &Betweenness, bb: NodeId, x: NodeId, y: NodeId) -> bool {
    x != y && (y == bb || b.holds(x, y, bb))
}

/// The unique linear order with `a < b` whose betweenness is `b`, listed
/// from least to greatest. Elements are inserted in id order after `a, b`.
pub fn order_from_betweenness(b: &Betweenness, a: NodeId, bb: NodeId) -> Result<Vec<NodeId>, QtError> {
    if a == bb {
        return Err(QtError::NotDistinct);
    }
    let report = b.check_axioms(Mode::Exhaustive);
    if let Some(&(axiom, q)) = report.failures.iter().find(|f| Axiom::LINEAR.contains(&f.0)) {
        let witness = format!("({})", q.map(|x| b.name(x).to_string()).join(", "));
        return Err(QtError::Axiom { axiom, witness });
    }
    let mut l = vec![a, bb];
    for x in (0..b.len()).filter(|&x| x != a && x != bb) {
        let inner: Vec<usize> = (0..l.len() - 1).filter(|&p| b.holds(l[p], x, l[p + 1])).collect();
        let between_some = (0..l.len()).any(|i| (i + 1..l.len()).any(|j| b.holds(l[i], x, l[j])));
        let at = if between_some {
            match inner.as_slice() {
                [p] => p + 1,
                _ => return Err(QtError::Ambiguous(format!("{} tight pairs around {}", inner.len(), b.name(x)))),
            }
        } else {
            let k = l.len();
            let before = b.holds(x, l[0], l[1]);
            let after = b.holds(l[k - 2], l[k - 1], x);
            match (before, after) {
                (true, false) => 0,
                (false, true) => k,
                _ => return Err(QtError::Ambiguous(format!("no unique extremal neighbour for {}", b.name(x)))),
            }
        };
        l.insert(at, x);
    }
    let pos: Vec<usize> = {
        let mut p = vec![0; b.len()];
        for (i, &x) in l.iter().enumerate() {
            p[x] = i;
        }
        p
    };
    for x in 0..b.len() {
        for y in 0..b.len() {
            for z in 0..b.len() {
                let bl = (pos[x] < pos[y] && pos[y] < pos[z]) || (pos[z] < pos[y] && pos[y] < pos[x]);
                if bl != b.holds(x, y, z) {
                    return Err(QtError::Ambiguous(format!(
                        "inserted order disagrees at ({}, {}, {})",
                        b.name(x),
                        b.name(y),
                        b.name(z)
                    )));
                }
            }
            if (pos[x] < pos[y]) != z_predicate(b, a, bb, x, y) {
                return Err(QtError::Ambiguous(format!("Z disagrees at ({}, {})", b.name(x), b.name(y))));
            }
        }
    }
    Ok(l)
}

/// Random rooted tree order on `n ≥ 1` nodes `v0, v1, ...` (`v0` the root),
/// each new node hanging below a uniformly chosen earlier one.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Poset {
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i, rng.gen_range(0..i))).collect();
    Poset::from_pairs(names, &pairs).expect("a tree order")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn order_of_three() {
        let b = Betweenness::of_order(names("1 2 3")).unwrap();
        assert_eq!(b.triples(), vec![(0, 1, 2), (2, 1, 0)]);
        assert!(Betweenness::of_order(names("1 2")).unwrap().triples().is_empty());
    }

    #[test]
    fn parse_round_trip() {
        let b = Betweenness::parse("node q\nB x c y # star\nB y c x\n").unwrap();
        assert_eq!(b.names(), &names("q x c y")[..]);
        assert_eq!(Betweenness::parse(&b.to_text()).unwrap(), b);
        assert_eq!(Betweenness::parse("B x y").unwrap_err(), QtError::Parse {
            line: 1,
            msg: "expected `B x y z` or `node ...`, got `B x y`".into()
        });
    }

    #[test]
    fn path_rooted_in_the_middle() {
        let b = Betweenness::of_order(names("a b c")).unwrap();
        let q = QuasiTree::new(b).unwrap();
        let j = q.root_order(1);
        assert!(j.lt(0, 1) && j.lt(2, 1) && j.incomparable(0, 2));
    }
}
