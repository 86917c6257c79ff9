//! Ordered join-trees, structured ordered join-trees (SOJ) and join-hedges.
//!
//! The total order `⊑` is stored as a node sequence. Lines of an SOJ-tree
//! other than the axis carry a side: `Minus` lines sit before the central
//! direction of their top, `Plus` lines after it.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::order::{NodeId, Poset};
use crate::structured::{StructError, Structured};
use crate::term::{pos_meet, Dewey, FiniteTerm, Sort, Symbol, TermAutomaton, TermError};
use crate::value::TermValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Minus,
    Plus,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OjError {
    #[error(transparent)]
    Struct(#[from] StructError),
    #[error("order is not a permutation of the nodes")]
    NotTotal,
    #[error("`{0}` ≤ `{1}` but `{1}` ⊏ `{0}`")]
    CondI(String, String),
    #[error("`{x}` ≤ `{y}`, `{x2}` ≤ `{y2}`, `{y}` ⊥ `{y2}` disagree under ⊑")]
    CondII { x: String, y: String, x2: String, y2: String },
    #[error("line {line:?}: {msg}")]
    Side { line: Vec<String>, msg: String },
    #[error("sort mismatch: {0}")]
    Sort(String),
    #[error("local order at `{0}` is not a permutation of its directions")]
    Local(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// `(i)` and `(ii)` for a total order given by `rank` on a join-forest.
pub fn check_oj(p: &Poset, rank: &[usize]) -> Result<(), OjError> {
    let n = p.len();
    // representative of the direction of `x` at an ancestor `j`
    let child_towards = |j: NodeId, x: NodeId| p.lower_covers(j).into_iter().find(|&c| p.leq(x, c)).unwrap();
    let root_of = |x: NodeId| {
        let mut r = x;
        while let Some(q) = p.parent(r) {
            r = q;
        }
        r
    };
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            if p.leq(x, y) {
                if rank[x] > rank[y] {
                    return Err(OjError::CondI(p.name(x).into(), p.name(y).into()));
                }
                continue;
            }
            if p.leq(y, x) || x > y {
                continue;
            }
            let (cx, cy) = match p.join(x, y) {
                Some(j) => (child_towards(j, x), child_towards(j, y)),
                None => (root_of(x), root_of(y)),
            };
            if (rank[x] < rank[y]) != (rank[cx] < rank[cy]) {
                return Err(OjError::CondII {
                    x: p.name(x).into(),
                    y: p.name(cx).into(),
                    x2: p.name(y).into(),
                    y2: p.name(cy).into(),
                });
            }
        }
    }
    Ok(())
}

fn ranks_of(n: usize, order: &[NodeId]) -> Result<Vec<usize>, OjError> {
    let mut rank = vec![usize::MAX; n];
    if order.len() != n {
        return Err(OjError::NotTotal);
    }
    for (i, &x) in order.iter().enumerate() {
        if x >= n || rank[x] != usize::MAX {
            return Err(OjError::NotTotal);
        }
        rank[x] = i;
    }
    Ok(rank)
}

/// `⊑` from per-node orders of directions; `local[x]` lists the lower covers
/// of `x` (one per direction) in order. Roots of a forest follow `roots`.
pub fn oj_global_from_local(p: &Poset, roots: &[NodeId], local: &[Vec<NodeId>]) -> Result<Vec<NodeId>, OjError> {
    for x in p.nodes() {
        let mut a = local.get(x).cloned().unwrap_or_default();
        let mut b = p.lower_covers(x);
        a.sort();
        b.sort();
        if a != b {
            return Err(OjError::Local(p.name(x).into()));
        }
    }
    let mut r = roots.to_vec();
    r.sort();
    if r != p.maximal() {
        return Err(OjError::Local("roots".into()));
    }
    let mut out = Vec::with_capacity(p.len());
    fn post(x: NodeId, local: &[Vec<NodeId>], out: &mut Vec<NodeId>) {
        for &c in &local[x] {
            post(c, local, out);
        }
        out.push(x);
    }
    for &root in roots {
        post(root, local, &mut out);
    }
    Ok(out)
}

/// Inverse of [`oj_global_from_local`]: validates `(i)`, `(ii)` and sorts
/// the directions of every node.
pub fn oj_local_from_global(p: &Poset, order: &[NodeId]) -> Result<(Vec<NodeId>, Vec<Vec<NodeId>>), OjError> {
    let rank = ranks_of(p.len(), order)?;
    check_oj(p, &rank)?;
    let mut roots = p.maximal();
    roots.sort_by_key(|&r| rank[r]);
    let local = p
        .nodes()
        .map(|x| {
            let mut cs = p.lower_covers(x);
            cs.sort_by_key(|&c| rank[c]);
            cs
        })
        .collect();
    Ok((roots, local))
}

/// An SOJ-tree, or a structured join-hedge when `hedge` is set.
#[derive(Clone, PartialEq, Eq)]
pub struct Ordered {
    s: Structured,
    order: Vec<NodeId>,
    rank: Vec<usize>,
    side: Vec<Option<Side>>,
    hedge: bool,
}

impl Ordered {
    /// SOJ-tree: `side[l]` is `None` exactly for the axis.
    pub fn new_tree(s: Structured, order: Vec<NodeId>, side: Vec<Option<Side>>) -> Result<Self, OjError> {
        if !s.is_empty() && !s.is_join_tree() {
            return Err(StructError::NotJoinTree.into());
        }
        let o = Self::build(s, order, side, false)?;
        o.check_sides()?;
        Ok(o)
    }

    /// Join-hedge whose nested lines get the default sides of [`default_sides`].
    pub fn new_hedge(s: Structured, order: Vec<NodeId>) -> Result<Self, OjError> {
        let side = default_sides(&s, &ranks_of(s.len(), &order)?);
        Self::new_hedge_with_sides(s, order, side)
    }

    /// Join-hedge keeping the sides of nested lines; topless lines have none.
    pub fn new_hedge_with_sides(s: Structured, order: Vec<NodeId>, side: Vec<Option<Side>>) -> Result<Self, OjError> {
        let o = Self::build(s, order, side, true)?;
        o.check_sides()?;
        Ok(o)
    }

    fn build(s: Structured, order: Vec<NodeId>, side: Vec<Option<Side>>, hedge: bool) -> Result<Self, OjError> {
        let rank = ranks_of(s.len(), &order)?;
        check_oj(s.poset(), &rank)?;
        if side.len() != s.lines().len() {
            return Err(OjError::Sort("one side per line expected".into()));
        }
        Ok(Ordered { s, order, rank, side, hedge })
    }

    fn line_names(&self, l: usize) -> Vec<String> {
        self.s.line(l).iter().map(|&x| self.s.name(x).to_string()).collect()
    }

    fn check_sides(&self) -> Result<(), OjError> {
        let s = &self.s;
        for l in 0..s.lines().len() {
            let bad = |msg: &str| OjError::Side { line: self.line_names(l), msg: msg.into() };
            match (s.top(l), self.side[l]) {
                (None, Some(_)) => return Err(bad("a topless line has no side")),
                (Some(_), None) => return Err(bad("missing side")),
                _ => {}
            }
        }
        for x in s.poset().nodes() {
            let line = s.line(s.line_of(x));
            let i = line.iter().position(|&y| y == x).unwrap();
            let central = if i > 0 { Some(line[i - 1]) } else { None };
            let mut last_minus = None;
            let mut first_plus = None;
            for l in s.lines_topped_by(x) {
                let m = *s.line(l).last().unwrap();
                let r = self.rank[m];
                let bad = |msg: &str| OjError::Side { line: self.line_names(l), msg: msg.into() };
                match self.side[l] {
                    Some(Side::Minus) => {
                        if central.is_some_and(|c| self.rank[c] < r) {
                            return Err(bad("minus line after the central direction"));
                        }
                        last_minus = last_minus.max(Some(r));
                    }
                    _ => {
                        if central.is_some_and(|c| self.rank[c] > r) {
                            return Err(bad("plus line before the central direction"));
                        }
                        first_plus = Some(first_plus.map_or(r, |f: usize| f.min(r)));
                    }
                }
            }
            if let (Some(a), Some(b)) = (last_minus, first_plus) {
                if a > b {
                    return Err(OjError::Side {
                        line: vec![s.name(x).to_string()],
                        msg: "minus lines must precede plus lines".into(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn empty_tree() -> Self {
        Ordered { s: Structured::empty(), order: vec![], rank: vec![], side: vec![], hedge: false }
    }

    pub fn empty_hedge() -> Self {
        Ordered { hedge: true, ..Self::empty_tree() }
    }

    pub fn structured(&self) -> &Structured {
        &self.s
    }

    pub fn poset(&self) -> &Poset {
        self.s.poset()
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn is_hedge(&self) -> bool {
        self.hedge
    }

    /// Nodes in `⊑` order.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn rank(&self, x: NodeId) -> usize {
        self.rank[x]
    }

    pub fn sq_lt(&self, x: NodeId, y: NodeId) -> bool {
        self.rank[x] < self.rank[y]
    }

    pub fn side(&self, l: usize) -> Option<Side> {
        self.side[l]
    }

    /// Order of the node names under `⊑`.
    pub fn order_names(&self) -> Vec<&str> {
        self.order.iter().map(|&x| self.s.name(x)).collect()
    }

    /// Canonical string: lines topped by a node listed in `⊑` order with
    /// their side; hedge components in `⊑` order.
    pub fn canonical(&self) -> String {
        let mut axes = self.s.axes();
        axes.sort_by_key(|&l| self.rank[*self.s.line(l).last().unwrap()]);
        let mut out = String::from(if self.hedge { "H" } else { "T" });
        for l in axes {
            out.push_str(&self.canon_line(l));
        }
        out
    }

    fn canon_line(&self, l: usize) -> String {
        let mark = match self.side[l] {
            None => "",
            Some(Side::Minus) => "-",
            Some(Side::Plus) => "+",
        };
        let mut s = format!("{mark}[");
        for &x in self.s.line(l) {
            let mut kids = self.s.lines_topped_by(x);
            kids.sort_by_key(|&m| self.rank[*self.s.line(m).last().unwrap()]);
            s.push('(');
            for m in kids {
                s.push_str(&self.canon_line(m));
            }
            s.push(')');
        }
        s.push(']');
        s
    }

    /// Equality up to node numbering.
    pub fn same_as(&self, other: &Ordered) -> bool {
        self.hedge == other.hedge
            && self.s.same_as(&other.s)
            && self.order_names() == other.order_names()
            && (0..self.s.lines().len()).all(|l| {
                let x = other.s.poset().id(self.s.name(self.s.line(l)[0])).unwrap();
                other.side[other.s.line_of(x)] == self.side[l]
            })
    }

    fn rename(&self, f: impl Fn(&str) -> String) -> Ordered {
        Ordered { s: self.s.rename(f), ..self.clone() }
    }

    /// Text: structured format with `uminus:` / `uplus:` records for
    /// sided lines and a `sqle:` record listing `⊑`.
    pub fn to_text(&self) -> String {
        let mut out = self.s.poset().to_text();
        for l in 0..self.s.lines().len() {
            let kw = match (self.side[l], self.s.top(l)) {
                (Some(Side::Minus), _) => "uminus:",
                (Some(Side::Plus), _) => "uplus:",
                (None, None) => "axis:",
                (None, Some(_)) => "line:",
            };
            out.push_str(kw);
            for n in self.line_names(l) {
                out.push(' ');
                out.push_str(&n);
            }
            out.push('\n');
        }
        if self.hedge {
            out.push_str("hedge\n");
        }
        out.push_str("sqle:");
        for n in self.order_names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        out
    }

    /// Parses [`Ordered::to_text`]; a `hedge` record marks join-hedges.
    pub fn parse(text: &str) -> Result<Ordered, OjError> {
        let mut sides = Vec::new();
        let mut sqle = None;
        let mut hedge = false;
        let mut body = String::new();
        for (i, raw) in text.lines().enumerate() {
            let t = raw.trim();
            if t == "hedge" {
                hedge = true;
                continue;
            }
            if let Some(r) = t.strip_prefix("sqle:") {
                sqle = Some((i + 1, r.to_string()));
                continue;
            }
            let (line, side) = if let Some(r) = t.strip_prefix("uminus:") {
                (format!("line:{r}"), Some(Some(Side::Minus)))
            } else if let Some(r) = t.strip_prefix("uplus:") {
                (format!("line:{r}"), Some(Some(Side::Plus)))
            } else if t.starts_with("line:") || t.starts_with("axis:") {
                (t.to_string(), Some(None))
            } else {
                (raw.to_string(), None)
            };
            if let Some(sd) = side {
                sides.push(sd);
            }
            body.push_str(&line);
            body.push('\n');
        }
        let s = Structured::parse(&body)?;
        let (ln, sq) = sqle.ok_or(StructError::Parse { line: 0, msg: "missing sqle record".into() })?;
        let order = sq
            .split_whitespace()
            .map(|n| s.poset().id(n).map_err(|e| StructError::Parse { line: ln, msg: e.to_string() }))
            .collect::<Result<Vec<_>, _>>()?;
        if !hedge {
            Ordered::new_tree(s, order, sides)
        } else if sides.iter().any(|s| s.is_some()) {
            Ordered::new_hedge_with_sides(s, order, sides)
        } else {
            Ordered::new_hedge(s, order)
        }
    }
}

impl fmt::Debug for Ordered {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Sides for a structuring of an ordered forest: lines before the central
/// direction of their top are `Minus`, the others `Plus` (all of them when
/// the top has no central direction). Topless lines get none.
pub fn default_sides(s: &Structured, rank: &[usize]) -> Vec<Option<Side>> {
    (0..s.lines().len())
        .map(|l| {
            let t = s.top(l)?;
            let line = s.line(s.line_of(t));
            let i = line.iter().position(|&y| y == t).unwrap();
            let m = *s.line(l).last().unwrap();
            Some(if i > 0 && rank[m] < rank[line[i - 1]] { Side::Minus } else { Side::Plus })
        })
        .collect()
}

/// An OJ-tree with a structuring, made into an SOJ-tree by [`default_sides`].
pub fn structure_oj(s: Structured, order: Vec<NodeId>) -> Result<Ordered, OjError> {
    let side = default_sides(&s, &ranks_of(s.len(), &order)?);
    Ordered::new_tree(s, order, side)
}

fn require(o: &Ordered, hedge: bool, what: &str) -> Result<(), OjError> {
    if o.hedge != hedge {
        let want = if hedge { "hedge" } else { "tree" };
        return Err(OjError::Sort(format!("{what} expects a {want}")));
    }
    Ok(())
}

fn pair(a: &Ordered, b: &Ordered) -> (Ordered, Ordered) {
    if a.s.poset().names().iter().any(|n| b.s.poset().id(n).is_ok()) {
        (a.rename(|n| format!("L:{n}")), b.rename(|n| format!("R:{n}")))
    } else {
        (a.clone(), b.clone())
    }
}

/// `J1 • J2` on SOJ-trees.
pub fn soj_concat(a: &Ordered, b: &Ordered) -> Result<Ordered, OjError> {
    require(a, false, "•")?;
    require(b, false, "•")?;
    if a.is_empty() {
        return Ok(b.clone());
    }
    if b.is_empty() {
        return Ok(a.clone());
    }
    let (a, b) = pair(a, b);
    let s = crate::sbjt::op_concat(&a.s, &b.s)?;
    let n1 = a.len();
    let sb = &b.s;
    let axis2 = sb.axis().unwrap();
    // side of the line below the axis of J2 that contains y
    let side_at_axis = |y: NodeId| -> Option<Side> {
        let mut l = sb.line_of(y);
        loop {
            let t = sb.top(l)?;
            if sb.line_of(t) == axis2 {
                return b.side[l];
            }
            l = sb.line_of(t);
        }
    };
    let less = |x: NodeId, y: NodeId| -> bool {
        match (x < n1, y < n1) {
            (true, true) => a.rank[x] < a.rank[y],
            (false, false) => b.rank[x - n1] < b.rank[y - n1],
            (true, false) => match side_at_axis(y - n1) {
                None => true,
                Some(sd) => sd == Side::Plus,
            },
            (false, true) => match side_at_axis(x - n1) {
                None => false,
                Some(sd) => sd == Side::Minus,
            },
        }
    };
    let mut order: Vec<NodeId> = (0..s.len()).collect();
    order.sort_by(|&x, &y| if x == y { Ordering::Equal } else if less(x, y) { Ordering::Less } else { Ordering::Greater });
    // lines of op_concat: merged axis first, then J1's others, then J2's others
    let mut side = vec![None];
    side.extend((0..a.s.lines().len()).filter(|&l| a.s.top(l).is_some()).map(|l| a.side[l]));
    side.extend((0..sb.lines().len()).filter(|&l| l != axis2).map(|l| b.side[l]));
    Ordered::new_tree(s, order, side)
}

/// `ext_u(H1, H2)`: `H1` to the left (minus lines), `H2` to the right.
pub fn soj_ext(h1: &Ordered, h2: &Ordered, u: &str) -> Result<Ordered, OjError> {
    require(h1, true, "ext")?;
    require(h2, true, "ext")?;
    let h = hedge_concat(h1, h2)?;
    let n1 = h1.len();
    let s = crate::sbjt::op_ext(&h.s, u)?;
    let mut order = h.order.clone();
    order.push(h.len());
    // only the lines that become topped by `u` get a new side
    let mut side: Vec<Option<Side>> = (0..h.s.lines().len())
        .map(|l| h.side[l].or(Some(if h.s.line(l)[0] < n1 { Side::Minus } else { Side::Plus })))
        .collect();
    side.push(None);
    Ordered::new_tree(s, order, side)
}

/// `H1 ⊗ H2`.
pub fn hedge_concat(h1: &Ordered, h2: &Ordered) -> Result<Ordered, OjError> {
    require(h1, true, "⊗")?;
    require(h2, true, "⊗")?;
    let (h1, h2) = pair(h1, h2);
    let s = super::sj_union(&h1.s, &h2.s)?;
    let n1 = h1.len();
    let mut order = h1.order.clone();
    order.extend(h2.order.iter().map(|&x| x + n1));
    let mut side = h1.side.clone();
    side.extend(h2.side.iter().copied());
    Ordered::new_hedge_with_sides(s, order, side)
}

/// `mkh`: the axis becomes an ordinary topless line. Sides of nested lines
/// are kept so that a later `ext` does not have to guess them.
pub fn mkh(j: &Ordered) -> Result<Ordered, OjError> {
    require(j, false, "mkh")?;
    Ordered::new_hedge_with_sides(j.s.clone(), j.order.clone(), j.side.clone())
}

/// Value of an F″ term computed with the operations.
pub fn eval_soj(t: &FiniteTerm) -> Result<Ordered, OjError> {
    fn go(t: &FiniteTerm, at: &Dewey) -> Result<Ordered, OjError> {
        let kid = |i: usize| go(&t.kids[i], &at.child(i as u8 + 1));
        match (&t.sym, t.kids.len()) {
            (Symbol::Omega(Sort::T), 0) => Ok(Ordered::empty_tree()),
            (Symbol::Omega(Sort::H), 0) => Ok(Ordered::empty_hedge()),
            (Symbol::Dot, 2) => soj_concat(&kid(0)?, &kid(1)?),
            (Symbol::Otimes, 2) => hedge_concat(&kid(0)?, &kid(1)?),
            (Symbol::Mkh, 1) => mkh(&kid(0)?),
            (Symbol::Ext, 2) => soj_ext(&kid(0)?, &kid(1)?, &t.name.clone().unwrap_or_else(|| at.to_string())),
            (s, k) => Err(OjError::Sort(format!("`{s}` with {k} arguments is not in F''"))),
        }
    }
    go(t, &Dewey::root())
}

/// `⊑` on ext occurrences of an F″ term, by the three join cases.
pub fn sq_leq(v: &TermValue, x: &Dewey, y: &Dewey) -> Result<bool, OjError> {
    if x == y || v.leq(x, y)? {
        return Ok(true);
    }
    if v.leq(y, x)? {
        return Ok(false);
    }
    let aut = v.automaton();
    let (j, dx, dy) = pos_meet(x, y);
    let sym = &aut.state(aut.walk(&j)?).sym;
    // highest ext strictly above `p` and at or below `s2(j)`
    let highest_ext = |p: &Dewey| -> Result<Option<Dewey>, OjError> {
        let path = aut.path(p)?;
        Ok((j.len() + 1..p.len()).find(|&l| matches!(aut.state(path[l]).sym, Symbol::Ext)).map(|l| p.prefix(l)))
    };
    Ok(match sym {
        Symbol::Otimes | Symbol::Ext => dx == Some(1) && dy == Some(2),
        Symbol::Dot if dx == Some(1) => match highest_ext(y)? {
            Some(z) => y.0[z.len()] == 2,
            None => false,
        },
        Symbol::Dot if dy == Some(1) => match highest_ext(x)? {
            Some(z) => x.0[z.len()] == 1,
            None => false,
        },
        _ => false,
    })
}

/// Value of an F″ term over its ext occurrences of length below `max_len`
/// (all of them for finite terms).
pub fn val_soj(aut: &TermAutomaton, max_len: usize) -> Result<Ordered, OjError> {
    let v = TermValue::new(aut);
    let nodes = v.nodes(max_len);
    let s = v.materialize(&nodes)?;
    let s = Structured::new(s.poset().clone(), s.lines().to_vec())?;
    let mut idx: Vec<usize> = (0..nodes.len()).collect();
    let mut err = None;
    idx.sort_by(|&a, &b| {
        if a == b {
            return Ordering::Equal;
        }
        match sq_leq(&v, &nodes[a], &nodes[b]) {
            Ok(true) => Ordering::Less,
            Ok(false) => Ordering::Greater,
            Err(e) => {
                err.get_or_insert(e);
                Ordering::Equal
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let mut side = Vec::new();
    for l in 0..s.lines().len() {
        let r = v.rep(&nodes[s.line(l)[0]])?;
        side.push(v.top(&r)?.map(|z| if r.0[z.len()] == 1 { Side::Minus } else { Side::Plus }));
    }
    if aut.state(aut.root()).sym.result_sort() == Sort::H {
        return Ordered::new_hedge_with_sides(s, idx, side);
    }
    Ordered::new_tree(s, idx, side)
}

/// Value of a finite F″ term.
pub fn val_soj_finite(t: &FiniteTerm) -> Result<Ordered, OjError> {
    val_soj(&TermAutomaton::from_finite(t), usize::MAX)
}

/// Random well-sorted F″ term with exactly `n` named ext nodes.
pub fn random_soj_term<R: Rng>(rng: &mut R, n: usize, sort: Sort) -> FiniteTerm {
    fn go<R: Rng>(rng: &mut R, n: usize, sort: Sort, next: &mut usize) -> FiniteTerm {
        match sort {
            Sort::H => {
                if n == 0 && rng.gen_bool(0.7) {
                    return FiniteTerm::omega_of(Sort::H);
                }
                if rng.gen_bool(0.5) {
                    FiniteTerm::new(Symbol::Mkh, vec![go(rng, n, Sort::T, next)])
                } else {
                    let k = rng.gen_range(0..=n);
                    let a = go(rng, k, Sort::H, next);
                    FiniteTerm::new(Symbol::Otimes, vec![a, go(rng, n - k, Sort::H, next)])
                }
            }
            _ => {
                if n == 0 {
                    return FiniteTerm::omega();
                }
                if rng.gen_bool(0.5) {
                    let name = format!("x{next}");
                    *next += 1;
                    let k = rng.gen_range(0..n);
                    let a = go(rng, k, Sort::H, next);
                    FiniteTerm::ext2_named(&name, a, go(rng, n - 1 - k, Sort::H, next))
                } else {
                    let k = rng.gen_range(0..=n);
                    let a = go(rng, k, Sort::T, next);
                    FiniteTerm::dot(a, go(rng, n - k, Sort::T, next))
                }
            }
        }
    }
    go(rng, n, sort, &mut 0)
}
