//! Arrangements: labelled linear orders.
//!
//! Finite arrangements are label vectors. Regular ones are kept twice: as an
//! [`Expr`] when one is known, and always as an [`ArrGraph`], a finite graph
//! of `•`/`Ω`/leaf nodes whose frontier is the arrangement. Positions of a
//! graph are Dewey words over `{1,2}` ordered lexicographically.

mod expr;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

pub use expr::{nf_to_expr, parse_expr, Expr, ExprParseError, Item, Nf};

use crate::term::{Dewey, StateId, Symbol, TermAutomaton, TermError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Finite(u64),
    Omega,
}

impl Count {
    pub fn plus(self, other: Count) -> Count {
        match (self, other) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a + b),
            _ => Count::Omega,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Omega => write!(f, "w"),
        }
    }
}

/// A multiset with multiplicities in `ℕ ∪ {ω}`; zero counts are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledSet<L: Ord> {
    counts: BTreeMap<L, Count>,
}

impl<L: Ord + Clone> Default for LabelledSet<L> {
    fn default() -> Self {
        Self::new()
    }
}

impl<L: Ord + Clone> LabelledSet<L> {
    pub fn new() -> Self {
        LabelledSet { counts: BTreeMap::new() }
    }

    pub fn add(&mut self, a: L, c: Count) {
        if c == Count::Finite(0) {
            return;
        }
        let e = self.counts.entry(a).or_insert(Count::Finite(0));
        *e = e.plus(c);
    }

    pub fn count(&self, a: &L) -> Count {
        self.counts.get(a).copied().unwrap_or(Count::Finite(0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, Count)> {
        self.counts.iter().map(|(a, &c)| (a, c))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn relabel<M: Ord + Clone>(&self, f: impl Fn(&L) -> M) -> LabelledSet<M> {
        let mut out = LabelledSet::new();
        for (a, c) in self.iter() {
            out.add(f(a), c);
        }
        out
    }

    pub fn from_items(items: impl IntoIterator<Item = L>) -> Self {
        let mut out = LabelledSet::new();
        for a in items {
            out.add(a, Count::Finite(1));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoAnswer {
    Iso,
    NotIso,
    /// Undecided; the payload is the bound that was explored.
    Unknown(usize),
}

/// A finite arrangement: the labels of positions `0..n` in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteArrangement<L> {
    pub labels: Vec<L>,
}

impl<L: Clone + Ord> FiniteArrangement<L> {
    pub fn new(labels: Vec<L>) -> Self {
        FiniteArrangement { labels }
    }

    pub fn empty() -> Self {
        FiniteArrangement { labels: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Self {
        FiniteArrangement { labels: self.labels.iter().chain(&other.labels).cloned().collect() }
    }

    pub fn relabel<M: Clone + Ord>(&self, f: impl Fn(&L) -> M) -> FiniteArrangement<M> {
        FiniteArrangement { labels: self.labels.iter().map(f).collect() }
    }

    /// Finite arrangements are isomorphic iff their label words coincide.
    pub fn iso(&self, other: &Self) -> IsoAnswer {
        if self.labels == other.labels {
            IsoAnswer::Iso
        } else {
            IsoAnswer::NotIso
        }
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = self.labels.clone();
        seen.sort();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn labelled_set(&self) -> LabelledSet<L> {
        LabelledSet::from_items(self.labels.iter().cloned())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrNode<L> {
    Empty,
    Leaf(L),
    /// Left and right operands of `•`.
    Concat(usize, usize),
}

/// Finite graph presentation of a regular arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrGraph<L> {
    nodes: Vec<ArrNode<L>>,
    root: usize,
    productive: Vec<bool>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("symbol `{0}` is not allowed in an arrangement term")]
    BadSymbol(String),
    #[error("position {0} is not an occurrence of the arrangement")]
    NotAPosition(Dewey),
}

impl<L: Clone + Ord> ArrGraph<L> {
    pub fn new(nodes: Vec<ArrNode<L>>, root: usize) -> Self {
        let productive = productive_nodes(&nodes);
        ArrGraph { nodes, root, productive }
    }

    pub fn from_expr(e: &Expr<L>) -> Self {
        let mut nodes = Vec::new();
        let root = compile(e, &mut nodes);
        Self::new(nodes, root)
    }

    pub fn from_word(ls: &[L]) -> Self {
        Self::from_expr(&Expr::word(ls.iter().cloned()))
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, i: usize) -> &ArrNode<L> {
        &self.nodes[i]
    }

    pub fn relabel<M: Clone + Ord>(&self, f: impl Fn(&L) -> M) -> ArrGraph<M> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                ArrNode::Empty => ArrNode::Empty,
                ArrNode::Leaf(a) => ArrNode::Leaf(f(a)),
                ArrNode::Concat(a, b) => ArrNode::Concat(*a, *b),
            })
            .collect();
        ArrGraph { nodes, root: self.root, productive: self.productive.clone() }
    }

    /// Node reached by `u`, if `u` is a position of a leaf.
    fn walk(&self, u: &Dewey) -> Option<usize> {
        let mut n = self.root;
        for &d in &u.0 {
            n = match (&self.nodes[n], d) {
                (ArrNode::Concat(a, _), 1) => *a,
                (ArrNode::Concat(_, b), 2) => *b,
                _ => return None,
            };
        }
        Some(n)
    }

    pub fn label_at(&self, u: &Dewey) -> Option<&L> {
        match self.walk(u).map(|n| &self.nodes[n]) {
            Some(ArrNode::Leaf(a)) => Some(a),
            _ => None,
        }
    }

    pub fn is_position(&self, u: &Dewey) -> bool {
        self.label_at(u).is_some()
    }

    /// Positions in breadth-first order, at most `k` of them.
    pub fn enumerate(&self, k: usize) -> Vec<Dewey> {
        let mut out = Vec::new();
        if !self.productive[self.root] {
            return out;
        }
        let mut queue = VecDeque::from([(Dewey::root(), self.root)]);
        while let Some((u, n)) = queue.pop_front() {
            if out.len() >= k {
                break;
            }
            match &self.nodes[n] {
                ArrNode::Leaf(_) => out.push(u),
                ArrNode::Concat(a, b) => {
                    for (d, c) in [(1, *a), (2, *b)] {
                        if self.productive[c] {
                            queue.push_back((u.child(d), c));
                        }
                    }
                }
                ArrNode::Empty => {}
            }
        }
        out
    }

    /// Up to `k` enumerated positions nearest `center` in enumeration order,
    /// sorted.
    pub fn window(&self, center: Option<&Dewey>, k: usize) -> Vec<Dewey> {
        if k == 0 {
            return Vec::new();
        }
        let mut pos = match center {
            None => self.enumerate(k),
            Some(c) => {
                // enumerate until the center shows up, then k more
                let mut limit = k.max(16);
                let all = loop {
                    let all = self.enumerate(limit);
                    if all.contains(c) || all.len() < limit || limit > 1 << 16 {
                        break all;
                    }
                    limit *= 2;
                };
                let i = all.iter().position(|u| u == c).unwrap_or(0);
                let all = self.enumerate(i + k);
                let lo = i.saturating_sub(k / 2);
                all[lo..all.len().min(lo + k)].to_vec()
            }
        };
        pos.sort();
        pos
    }

    /// Labels of `window(None, k)`.
    pub fn window_word(&self, k: usize) -> Vec<L> {
        self.window(None, k).iter().map(|u| self.label_at(u).unwrap().clone()).collect()
    }

    /// No productive cycle is reachable: the arrangement is finite.
    pub fn is_finite(&self) -> bool {
        self.cyclic_reach().iter().all(|&c| !c)
    }

    /// `out[v]`: `v` is productive and reachable from a productive cycle
    /// reachable from the root.
    fn cyclic_reach(&self) -> Vec<bool> {
        let n = self.nodes.len();
        let succ = |v: usize| -> Vec<usize> {
            match self.nodes[v] {
                ArrNode::Concat(a, b) => [a, b].into_iter().filter(|&c| self.productive[c]).collect(),
                _ => vec![],
            }
        };
        let reach_from = |s: usize| -> Vec<bool> {
            let mut seen = vec![false; n];
            let mut stack = succ(s);
            while let Some(v) = stack.pop() {
                if !seen[v] {
                    seen[v] = true;
                    stack.extend(succ(v));
                }
            }
            seen
        };
        let from_root = {
            let mut r = reach_from(self.root);
            r[self.root] = self.productive[self.root];
            r
        };
        let mut out = vec![false; n];
        for v in 0..n {
            if from_root[v] && self.productive[v] {
                let r = reach_from(v);
                if r[v] {
                    out[v] = true;
                    for (w, &x) in r.iter().enumerate() {
                        if x {
                            out[w] = true;
                        }
                    }
                }
            }
        }
        out
    }

    /// The label word, if finite.
    pub fn finite_word(&self) -> Option<Vec<L>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = Vec::new();
        fn go<L: Clone>(g: &ArrGraph<L>, n: usize, out: &mut Vec<L>) {
            if !g.productive[n] {
                return;
            }
            match &g.nodes[n] {
                ArrNode::Leaf(a) => out.push(a.clone()),
                ArrNode::Concat(a, b) => {
                    go(g, *a, out);
                    go(g, *b, out);
                }
                ArrNode::Empty => {}
            }
        }
        if self.productive[self.root] {
            go(self, self.root, &mut out);
        }
        Some(out)
    }

    pub fn labelled_set(&self) -> LabelledSet<L> {
        let inf = self.cyclic_reach();
        let mut out = LabelledSet::new();
        // path counts over the acyclic part
        let mut memo: HashMap<usize, u64> = HashMap::new();
        fn paths<L: Clone + Ord>(g: &ArrGraph<L>, v: usize, target: usize, memo: &mut HashMap<usize, u64>) -> u64 {
            if v == target {
                return 1;
            }
            if let Some(&c) = memo.get(&v) {
                return c;
            }
            let c = match g.nodes[v] {
                // only nodes that reach the leaf; none of them lies on a cycle
                ArrNode::Concat(a, b) => [a, b]
                    .into_iter()
                    .filter(|&c| g.productive[c] && g.reaches(c, target))
                    .map(|c| paths(g, c, target, memo))
                    .sum(),
                _ => 0,
            };
            memo.insert(v, c);
            c
        }
        if !self.productive[self.root] {
            return out;
        }
        for (v, node) in self.nodes.iter().enumerate() {
            if let ArrNode::Leaf(a) = node {
                if inf[v] {
                    out.add(a.clone(), Count::Omega);
                } else {
                    memo.clear();
                    let c = paths(self, self.root, v, &mut memo);
                    out.add(a.clone(), Count::Finite(c));
                }
            }
        }
        out
    }

    /// Solves the graph into an expression when every cycle matches one of
    /// the patterns `X = A•X`, `X = X•A`, `X = A•X•B`, `X = X•A1•X•…•Ak•X`.
    pub fn to_expr(&self) -> Option<Expr<L>> {
        let mut memo: HashMap<usize, Option<Expr<L>>> = HashMap::new();
        let on_cycle = self.on_cycle();
        solve(self, self.root, &on_cycle, &mut memo)
    }

    fn on_cycle(&self) -> Vec<bool> {
        let n = self.nodes.len();
        (0..n)
            .map(|v| {
                if !self.productive[v] {
                    return false;
                }
                let mut seen = vec![false; n];
                let mut stack = vec![v];
                while let Some(x) = stack.pop() {
                    if let ArrNode::Concat(a, b) = self.nodes[x] {
                        for c in [a, b] {
                            if c == v {
                                return true;
                            }
                            if self.productive[c] && !seen[c] {
                                seen[c] = true;
                                stack.push(c);
                            }
                        }
                    }
                }
                false
            })
            .collect()
    }

    /// Whether `a` can reach `b` through productive nodes.
    fn reaches(&self, a: usize, b: usize) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            if let ArrNode::Concat(l, r) = self.nodes[x] {
                for c in [l, r] {
                    if self.productive[c] && !seen[c] {
                        seen[c] = true;
                        stack.push(c);
                    }
                }
            }
        }
        false
    }

    /// The first (`from_end = false`) or last `k` labels, and whether the
    /// walk ran out of arrangement (`Some(true)`), hit a point with no
    /// extremal element (`Some(false)`), or reached `k` (`None`).
    pub fn end_labels(&self, k: usize, from_end: bool) -> (Vec<L>, Option<bool>) {
        let mut out = Vec::new();
        if !self.productive[self.root] {
            return (out, Some(true));
        }
        let mut pending = vec![self.root];
        let mut visited_since_emit: Vec<usize> = Vec::new();
        while let Some(mut n) = pending.pop() {
            loop {
                if out.len() >= k {
                    return (out, None);
                }
                if visited_since_emit.contains(&n) {
                    return (out, Some(false));
                }
                visited_since_emit.push(n);
                match &self.nodes[n] {
                    ArrNode::Leaf(a) => {
                        out.push(a.clone());
                        visited_since_emit.clear();
                        break;
                    }
                    ArrNode::Concat(a, b) => {
                        let (first, second) = if from_end { (*b, *a) } else { (*a, *b) };
                        if self.productive[second] {
                            pending.push(second);
                        }
                        if self.productive[first] {
                            n = first;
                        } else {
                            break;
                        }
                    }
                    ArrNode::Empty => break,
                }
            }
        }
        (out, Some(true))
    }
}

fn productive_nodes<L>(nodes: &[ArrNode<L>]) -> Vec<bool> {
    let mut p: Vec<bool> = nodes.iter().map(|n| matches!(n, ArrNode::Leaf(_))).collect();
    loop {
        let mut changed = false;
        for (i, n) in nodes.iter().enumerate() {
            if let ArrNode::Concat(a, b) = n {
                if !p[i] && (p[*a] || p[*b]) {
                    p[i] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return p;
        }
    }
}

fn compile<L: Clone>(e: &Expr<L>, nodes: &mut Vec<ArrNode<L>>) -> usize {
    let push = |nodes: &mut Vec<ArrNode<L>>, n: ArrNode<L>| {
        nodes.push(n);
        nodes.len() - 1
    };
    match e {
        Expr::Empty => push(nodes, ArrNode::Empty),
        Expr::Letter(a) => push(nodes, ArrNode::Leaf(a.clone())),
        Expr::Concat(a, b) => {
            let x = compile(a, nodes);
            let y = compile(b, nodes);
            push(nodes, ArrNode::Concat(x, y))
        }
        Expr::Omega(b) => {
            // t = b • t
            let t = push(nodes, ArrNode::Empty);
            let x = compile(b, nodes);
            nodes[t] = ArrNode::Concat(x, t);
            t
        }
        Expr::OmegaRev(b) => {
            // t = t • b
            let t = push(nodes, ArrNode::Empty);
            let x = compile(b, nodes);
            nodes[t] = ArrNode::Concat(t, x);
            t
        }
        Expr::Shuffle(es) => {
            // t = t • (e1 • (t • (e2 • … (ek • t))))
            let t = push(nodes, ArrNode::Empty);
            if es.is_empty() {
                return t;
            }
            let comps: Vec<usize> = es.iter().map(|c| compile(c, nodes)).collect();
            let mut tail = t;
            for (i, &c) in comps.iter().enumerate().rev() {
                let inner = push(nodes, ArrNode::Concat(c, tail));
                tail = if i == 0 { inner } else { push(nodes, ArrNode::Concat(t, inner)) };
            }
            nodes[t] = ArrNode::Concat(t, tail);
            t
        }
    }
}

#[derive(Clone)]
enum TItem<L> {
    Var,
    Closed(Expr<L>),
}

fn solve<L: Clone + Ord>(
    g: &ArrGraph<L>,
    v: usize,
    on_cycle: &[bool],
    memo: &mut HashMap<usize, Option<Expr<L>>>,
) -> Option<Expr<L>> {
    if let Some(r) = memo.get(&v) {
        return r.clone();
    }
    let r = if !g.productive[v] {
        Some(Expr::Empty)
    } else if !on_cycle[v] {
        match &g.nodes[v] {
            ArrNode::Leaf(a) => Some(Expr::Letter(a.clone())),
            ArrNode::Concat(a, b) => {
                let (x, y) = (solve(g, *a, on_cycle, memo)?, solve(g, *b, on_cycle, memo)?);
                Some(join(x, y))
            }
            ArrNode::Empty => Some(Expr::Empty),
        }
    } else {
        memo.insert(v, None);
        let mut stack = Vec::new();
        let tpl = expand(g, v, v, &mut stack, on_cycle, memo)?;
        match_pattern(tpl)
    };
    memo.insert(v, r.clone());
    r
}

fn join<L: Clone + Ord>(x: Expr<L>, y: Expr<L>) -> Expr<L> {
    match (x, y) {
        (Expr::Empty, y) => y,
        (x, Expr::Empty) => x,
        (x, y) => Expr::concat(x, y),
    }
}

/// Unfolds the definition of `w` until every path returns to `target`.
fn expand<L: Clone + Ord>(
    g: &ArrGraph<L>,
    w: usize,
    target: usize,
    stack: &mut Vec<usize>,
    on_cycle: &[bool],
    memo: &mut HashMap<usize, Option<Expr<L>>>,
) -> Option<Vec<TItem<L>>> {
    if w == target && !stack.is_empty() {
        return Some(vec![TItem::Var]);
    }
    if !g.productive[w] {
        return Some(vec![]);
    }
    let same_scc = g.reaches(w, target) && g.reaches(target, w);
    if !same_scc {
        return Some(vec![TItem::Closed(solve(g, w, on_cycle, memo)?)]);
    }
    if stack.contains(&w) {
        return None;
    }
    stack.push(w);
    let r = match &g.nodes[w] {
        ArrNode::Concat(a, b) => {
            let mut x = expand(g, *a, target, stack, on_cycle, memo)?;
            x.extend(expand(g, *b, target, stack, on_cycle, memo)?);
            Some(x)
        }
        ArrNode::Leaf(a) => Some(vec![TItem::Closed(Expr::Letter(a.clone()))]),
        ArrNode::Empty => Some(vec![]),
    };
    stack.pop();
    r
}

fn match_pattern<L: Clone + Ord>(tpl: Vec<TItem<L>>) -> Option<Expr<L>> {
    // merge adjacent closed items, collapse adjacent variables
    let mut seq: Vec<TItem<L>> = Vec::new();
    // X•X = X only holds for dense shuffles
    let mut doubled = false;
    for it in tpl {
        match (seq.last_mut(), it) {
            (_, TItem::Closed(Expr::Empty)) => {}
            (Some(TItem::Closed(prev)), TItem::Closed(e)) => *prev = join(prev.clone(), e),
            (Some(TItem::Var), TItem::Var) => doubled = true,
            (_, it) => seq.push(it),
        }
    }
    if doubled && !matches!(seq.as_slice(), [TItem::Var, rest @ ..] if rest.len() >= 2 && rest.len() % 2 == 0) {
        return None;
    }
    match seq.as_slice() {
        [TItem::Closed(a), TItem::Var] => Some(Expr::omega(a.clone())),
        [TItem::Var, TItem::Closed(b)] => Some(Expr::omega_rev(b.clone())),
        [TItem::Closed(a), TItem::Var, TItem::Closed(b)] => {
            Some(Expr::concat(Expr::omega(a.clone()), Expr::omega_rev(b.clone())))
        }
        [TItem::Var, rest @ ..] if rest.len() >= 2 && rest.len() % 2 == 0 => {
            let mut comps = Vec::new();
            for pair in rest.chunks(2) {
                match pair {
                    [TItem::Closed(e), TItem::Var] => comps.push(e.clone()),
                    _ => return None,
                }
            }
            Some(Expr::Shuffle(comps))
        }
        _ => None,
    }
}

/// What a term-automaton state contributes to a frontier.
pub enum FrontierNode<L> {
    Leaf(L),
    Concat,
    Empty,
}

/// Frontier of the subterm at `anchor`: the arrangement of leaf occurrences
/// ordered lexicographically. `classify` decides which states are leaves.
pub fn frontier_with<L: Clone + Ord>(
    a: &TermAutomaton,
    anchor: &Dewey,
    classify: impl Fn(StateId) -> Result<FrontierNode<L>, ArrangementError>,
) -> Result<ArrGraph<L>, ArrangementError> {
    let start = a.walk(anchor)?;
    // graph nodes are automaton states reachable through Concat states
    let mut index: HashMap<StateId, usize> = HashMap::new();
    let mut nodes: Vec<ArrNode<L>> = Vec::new();
    let mut todo = vec![start];
    index.insert(start, 0);
    nodes.push(ArrNode::Empty);
    while let Some(q) = todo.pop() {
        let node = match classify(q)? {
            FrontierNode::Leaf(l) => ArrNode::Leaf(l),
            FrontierNode::Empty => ArrNode::Empty,
            FrontierNode::Concat => {
                let kids = &a.state(q).kids;
                let mut ids = [0usize; 2];
                for (i, &k) in kids.iter().take(2).enumerate() {
                    ids[i] = *index.entry(k).or_insert_with(|| {
                        nodes.push(ArrNode::Empty);
                        todo.push(k);
                        nodes.len() - 1
                    });
                }
                ArrNode::Concat(ids[0], ids[1])
            }
        };
        nodes[index[&q]] = node;
    }
    Ok(ArrGraph::new(nodes, 0))
}

/// Frontier of a term over `{•, Ω} ∪ X`: letters are leaves.
pub fn frontier(a: &TermAutomaton, anchor: &Dewey) -> Result<ArrGraph<String>, ArrangementError> {
    frontier_with(a, anchor, |q| match &a.state(q).sym {
        Symbol::Named(x) if a.state(q).kids.is_empty() => Ok(FrontierNode::Leaf(x.clone())),
        Symbol::Dot => Ok(FrontierNode::Concat),
        Symbol::Omega(_) => Ok(FrontierNode::Empty),
        s => Err(ArrangementError::BadSymbol(s.to_string())),
    })
}

/// A regular arrangement with its graph and, when known, an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement<L> {
    graph: ArrGraph<L>,
    expr: Option<Expr<L>>,
}

impl<L: Clone + Ord> Arrangement<L> {
    pub fn from_expr(e: Expr<L>) -> Self {
        Arrangement { graph: ArrGraph::from_expr(&e), expr: Some(e) }
    }

    pub fn from_word(ls: Vec<L>) -> Self {
        Self::from_expr(Expr::word(ls))
    }

    pub fn empty() -> Self {
        Self::from_expr(Expr::Empty)
    }

    pub fn from_graph(g: ArrGraph<L>) -> Self {
        let expr = g.to_expr();
        Arrangement { graph: g, expr }
    }

    pub fn graph(&self) -> &ArrGraph<L> {
        &self.graph
    }

    pub fn expr(&self) -> Option<&Expr<L>> {
        self.expr.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.graph.is_finite()
    }

    pub fn finite_word(&self) -> Option<Vec<L>> {
        self.graph.finite_word()
    }

    pub fn relabel<M: Clone + Ord>(&self, f: impl Fn(&L) -> M) -> Arrangement<M> {
        Arrangement { graph: self.graph.relabel(&f), expr: self.expr.as_ref().map(|e| e.relabel(&f)) }
    }

    pub fn labelled_set(&self) -> LabelledSet<L> {
        self.graph.labelled_set()
    }

    pub fn concat(&self, other: &Self) -> Self {
        match (&self.expr, &other.expr) {
            (Some(a), Some(b)) => Self::from_expr(join(a.clone(), b.clone())),
            _ => {
                let off = self.graph.nodes.len();
                let mut nodes = self.graph.nodes.clone();
                nodes.extend(other.graph.nodes.iter().map(|n| match n {
                    ArrNode::Concat(a, b) => ArrNode::Concat(a + off, b + off),
                    other => other.clone(),
                }));
                nodes.push(ArrNode::Concat(self.graph.root, other.graph.root + off));
                let root = nodes.len() - 1;
                Self::from_graph(ArrGraph::new(nodes, root))
            }
        }
    }

    /// Exact on finite arrangements and on the normal-form fragment;
    /// otherwise certificates from counts and end segments, else unknown.
    pub fn iso(&self, other: &Self, bound: usize) -> IsoAnswer {
        if let (Some(a), Some(b)) = (self.finite_word(), other.finite_word()) {
            return if a == b { IsoAnswer::Iso } else { IsoAnswer::NotIso };
        }
        if self.is_finite() != other.is_finite() {
            return IsoAnswer::NotIso;
        }
        if let (Some(a), Some(b)) = (&self.expr, &other.expr) {
            let r = a.iso(b, bound);
            if r != IsoAnswer::Unknown(bound) {
                return r;
            }
        }
        if self.labelled_set() != other.labelled_set() {
            return IsoAnswer::NotIso;
        }
        for from_end in [false, true] {
            if self.graph.end_labels(bound, from_end) != other.graph.end_labels(bound, from_end) {
                return IsoAnswer::NotIso;
            }
        }
        IsoAnswer::Unknown(bound)
    }
}

impl<L: Clone + Ord + fmt::Display> fmt::Display for Arrangement<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.expr {
            Some(e) => write!(f, "{}", e.normalized()),
            None => write!(f, "<graph with {} nodes>", self.graph.nodes.len()),
        }
    }
}
