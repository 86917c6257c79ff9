//! Description schemes for structured join-trees: binary (SBJ), unbounded
//! (SJ) and ordered (SOJ).
//!
//! States and directions are indices into `states` and `dirs`; arrangements
//! are labelled by those indices. The two domains never mix.

mod minimize;
mod text;
mod unfold;

use std::fmt;

use crate::arrangement::{frontier_with, ArrGraph, Arrangement, ArrangementError, FrontierNode, IsoAnswer, LabelledSet};
use crate::sjt_ojt::oj::{OjError, Ordered, Side};
use crate::structured::{StructError, Structured};
use crate::term::{Dewey, StateId, Symbol, TermAutomaton};

pub use minimize::iso;
pub use unfold::{Seq, Slot, Unfolding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Sbj,
    Sj,
    Soj,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Sbj => "sbj",
            Kind::Sj => "sj",
            Kind::Soj => "soj",
        })
    }
}

/// What a state says about the lines topped by a node in that state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Children {
    /// The single line, over states.
    Word(Arrangement<usize>),
    /// The lines by direction, unordered.
    Mset(LabelledSet<usize>),
    /// Lines left and right of the central direction, over directions.
    Sides(Arrangement<usize>, Arrangement<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    kind: Kind,
    states: Vec<String>,
    dirs: Vec<String>,
    axis: Arrangement<usize>,
    children: Vec<Children>,
    dir_words: Vec<Arrangement<usize>>,
}

/// A run: a state per node and a direction per topped line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub r: Vec<usize>,
    /// Indexed by line id; `None` on axes and everywhere for SBJ schemes.
    pub rt: Vec<Option<usize>>,
}

#[derive(Debug, thiserror::Error)]
pub enum SchemeError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown direction `{0}`")]
    UnknownDir(String),
    #[error("{0}")]
    Kind(String),
    #[error("bounds must be positive")]
    Bound,
    #[error("cannot merge {0} and {1}: their images differ")]
    Merge(String, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bad run: {0}")]
    Run(String),
    #[error(transparent)]
    Struct(#[from] StructError),
    #[error(transparent)]
    Oj(#[from] OjError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    Axis,
    /// SBJ: the line below a node.
    Below,
    /// SJ: the multiset of directions below a node.
    Mset,
    Minus,
    Plus,
    /// SJ/SOJ: the word of a topped line.
    Line,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Axis => "axis",
            Clause::Below => "line below node",
            Clause::Mset => "directions below node",
            Clause::Minus => "minus lines",
            Clause::Plus => "plus lines",
            Clause::Line => "line word",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    /// Node, line or automaton state where the clause fails.
    pub at: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.clause, self.at, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// Every clause holds or was undecided at this bound.
    HoldsUpTo(usize),
    Violated(Violation),
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }
}

fn check_letters(a: &Arrangement<usize>, n: usize, what: &str) -> Result<(), SchemeError> {
    match a.labelled_set().iter().find(|(l, _)| **l >= n) {
        Some((l, _)) => Err(SchemeError::Kind(format!("{what} uses letter {l} out of range"))),
        None => Ok(()),
    }
}

impl Scheme {
    pub fn sbj(states: Vec<String>, axis: Arrangement<usize>, words: Vec<Arrangement<usize>>) -> Result<Self, SchemeError> {
        Self::build(Kind::Sbj, states, vec![], axis, words.into_iter().map(Children::Word).collect(), vec![])
    }

    pub fn sj(
        states: Vec<String>,
        dirs: Vec<String>,
        axis: Arrangement<usize>,
        msets: Vec<LabelledSet<usize>>,
        dir_words: Vec<Arrangement<usize>>,
    ) -> Result<Self, SchemeError> {
        Self::build(Kind::Sj, states, dirs, axis, msets.into_iter().map(Children::Mset).collect(), dir_words)
    }

    pub fn soj(
        states: Vec<String>,
        dirs: Vec<String>,
        axis: Arrangement<usize>,
        sides: Vec<(Arrangement<usize>, Arrangement<usize>)>,
        dir_words: Vec<Arrangement<usize>>,
    ) -> Result<Self, SchemeError> {
        let children = sides.into_iter().map(|(m, p)| Children::Sides(m, p)).collect();
        Self::build(Kind::Soj, states, dirs, axis, children, dir_words)
    }

    fn build(
        kind: Kind,
        states: Vec<String>,
        dirs: Vec<String>,
        axis: Arrangement<usize>,
        children: Vec<Children>,
        dir_words: Vec<Arrangement<usize>>,
    ) -> Result<Self, SchemeError> {
        let (nq, nd) = (states.len(), dirs.len());
        if children.len() != nq || dir_words.len() != nd {
            return Err(SchemeError::Kind("one entry per state and per direction is required".into()));
        }
        if kind == Kind::Sbj && nd > 0 {
            return Err(SchemeError::Kind("binary schemes have no directions".into()));
        }
        check_letters(&axis, nq, "the axis")?;
        for (q, c) in children.iter().enumerate() {
            let ok = matches!(
                (kind, c),
                (Kind::Sbj, Children::Word(_)) | (Kind::Sj, Children::Mset(_)) | (Kind::Soj, Children::Sides(..))
            );
            if !ok {
                return Err(SchemeError::Kind(format!("state {} does not fit a {kind} scheme", states[q])));
            }
            match c {
                Children::Word(w) => check_letters(w, nq, &states[q])?,
                Children::Mset(m) => {
                    if let Some((d, _)) = m.iter().find(|(d, _)| **d >= nd) {
                        return Err(SchemeError::Kind(format!("{} uses direction {d} out of range", states[q])));
                    }
                }
                Children::Sides(m, p) => {
                    check_letters(m, nd, &states[q])?;
                    check_letters(p, nd, &states[q])?;
                }
            }
        }
        for (d, w) in dir_words.iter().enumerate() {
            check_letters(w, nq, &dirs[d])?;
        }
        Ok(Scheme { kind, states, dirs, axis, children, dir_words })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn dirs(&self) -> &[String] {
        &self.dirs
    }

    pub fn axis(&self) -> &Arrangement<usize> {
        &self.axis
    }

    pub fn children(&self, q: usize) -> &Children {
        &self.children[q]
    }

    pub fn dir_word(&self, d: usize) -> &Arrangement<usize> {
        &self.dir_words[d]
    }

    pub fn state_id(&self, name: &str) -> Result<usize, SchemeError> {
        self.states.iter().position(|s| s == name).ok_or_else(|| SchemeError::UnknownState(name.into()))
    }

    pub fn dir_id(&self, name: &str) -> Result<usize, SchemeError> {
        self.dirs.iter().position(|s| s == name).ok_or_else(|| SchemeError::UnknownDir(name.into()))
    }

    /// All arrangements are finite words.
    pub fn is_finite_word(&self) -> bool {
        let arrs = self.children.iter().flat_map(|c| match c {
            Children::Word(w) => vec![w],
            Children::Mset(_) => vec![],
            Children::Sides(m, p) => vec![m, p],
        });
        std::iter::once(&self.axis).chain(arrs).chain(&self.dir_words).all(|a| a.finite_word().is_some())
    }

    /// States and directions reachable from the axis.
    pub fn reachable(&self) -> (Vec<bool>, Vec<bool>) {
        let mut sq = vec![false; self.states.len()];
        let mut sd = vec![false; self.dirs.len()];
        let mut todo: Vec<usize> = Vec::new();
        let push = |q: usize, sq: &mut Vec<bool>, todo: &mut Vec<usize>| {
            if !sq[q] {
                sq[q] = true;
                todo.push(q);
            }
        };
        for (q, _) in self.axis.labelled_set().iter() {
            push(*q, &mut sq, &mut todo);
        }
        while let Some(q) = todo.pop() {
            let ds: Vec<usize> = match &self.children[q] {
                Children::Word(w) => {
                    for (p, _) in w.labelled_set().iter() {
                        push(*p, &mut sq, &mut todo);
                    }
                    vec![]
                }
                Children::Mset(m) => m.iter().map(|(d, _)| *d).collect(),
                Children::Sides(m, p) => {
                    m.labelled_set().iter().chain(p.labelled_set().iter()).map(|(d, _)| *d).collect()
                }
            };
            for d in ds {
                if !sd[d] {
                    sd[d] = true;
                    for (p, _) in self.dir_words[d].labelled_set().iter() {
                        push(*p, &mut sq, &mut todo);
                    }
                }
            }
        }
        (sq, sd)
    }

    /// Checks that `run` shows this scheme describes `j`. Uses the
    /// arrangement oracle with `bound` wherever an infinite arrangement is
    /// compared with a finite one.
    pub fn describes(&self, j: &Structured, run: &Run, bound: usize) -> Result<Verdict, SchemeError> {
        if self.kind == Kind::Soj {
            return Err(SchemeError::Kind("ordered schemes describe ordered trees".into()));
        }
        self.check(j, None, run, bound)
    }

    pub fn describes_ordered(&self, o: &Ordered, run: &Run, bound: usize) -> Result<Verdict, SchemeError> {
        if self.kind != Kind::Soj {
            return Err(SchemeError::Kind("only ordered schemes describe ordered trees".into()));
        }
        self.check(o.structured(), Some(o), run, bound)
    }

    fn check(&self, j: &Structured, o: Option<&Ordered>, run: &Run, bound: usize) -> Result<Verdict, SchemeError> {
        if run.r.len() != j.len() || run.rt.len() != j.lines().len() {
            return Err(SchemeError::Run("sizes do not match the tree".into()));
        }
        if let Some(&q) = run.r.iter().find(|&&q| q >= self.states.len()) {
            return Err(SchemeError::Run(format!("state {q} out of range")));
        }
        if j.axes().len() > 1 {
            return Err(SchemeError::Kind("schemes describe trees, not forests".into()));
        }
        let mut undecided = false;
        let mut cmp = |w: &Arrangement<usize>, word: Vec<usize>, clause: Clause, at: String| -> Option<Violation> {
            match Arrangement::from_word(word.clone()).iso(w, bound) {
                IsoAnswer::Iso => None,
                IsoAnswer::Unknown(_) => {
                    undecided = true;
                    None
                }
                IsoAnswer::NotIso => Some(Violation { clause, at, detail: format!("got {}", self.word_text(&word, clause)) }),
            }
        };
        let states_of = |l: usize| j.line(l).iter().map(|&x| run.r[x]).collect::<Vec<usize>>();
        let axis_word = j.axis().map(states_of).unwrap_or_default();
        if let Some(v) = cmp(&self.axis, axis_word, Clause::Axis, "axis".into()) {
            return Ok(Verdict::Violated(v));
        }
        let dir_of = |l: usize| -> Result<usize, SchemeError> {
            match run.rt[l] {
                Some(d) if d < self.dirs.len() => Ok(d),
                _ => Err(SchemeError::Run(format!("line {} has no direction", j.line_names_joined(l)))),
            }
        };
        for x in j.poset().nodes() {
            let below = j.lines_topped_by(x);
            let at = || j.name(x).to_string();
            match &self.children[run.r[x]] {
                Children::Word(w) => {
                    if below.len() > 1 {
                        return Ok(Verdict::Violated(Violation {
                            clause: Clause::Below,
                            at: at(),
                            detail: "the node tops several lines".into(),
                        }));
                    }
                    let word = below.first().map(|&l| states_of(l)).unwrap_or_default();
                    if let Some(v) = cmp(w, word, Clause::Below, at()) {
                        return Ok(Verdict::Violated(v));
                    }
                }
                Children::Mset(m) => {
                    let got = LabelledSet::from_items(below.iter().map(|&l| dir_of(l)).collect::<Result<Vec<_>, _>>()?);
                    if got != *m {
                        let detail = format!("got {}", self.mset_text(&got));
                        return Ok(Verdict::Violated(Violation { clause: Clause::Mset, at: at(), detail }));
                    }
                }
                Children::Sides(wm, wp) => {
                    let o = o.ok_or_else(|| SchemeError::Kind("ordered scheme needs an ordered tree".into()))?;
                    for (side, w, clause) in [(Side::Minus, wm, Clause::Minus), (Side::Plus, wp, Clause::Plus)] {
                        let mut ls: Vec<usize> = below.iter().copied().filter(|&l| o.side(l) == Some(side)).collect();
                        ls.sort_by_key(|&l| o.rank(j.line(l)[0]));
                        let word = ls.iter().map(|&l| dir_of(l)).collect::<Result<Vec<_>, _>>()?;
                        if let Some(v) = cmp(w, word, clause, at()) {
                            return Ok(Verdict::Violated(v));
                        }
                    }
                }
            }
        }
        if self.kind != Kind::Sbj {
            for l in 0..j.lines().len() {
                if j.top(l).is_none() {
                    continue;
                }
                let d = dir_of(l)?;
                if let Some(v) = cmp(&self.dir_words[d], states_of(l), Clause::Line, j.line_names_joined(l)) {
                    return Ok(Verdict::Violated(v));
                }
            }
        }
        Ok(if undecided { Verdict::HoldsUpTo(bound) } else { Verdict::Holds })
    }

    /// Checks that the scheme describes `val(t)` for a binary scheme, with
    /// the run given on the ext states of the automaton. Exact up to the
    /// arrangement oracle since equal states have equal subterms.
    pub fn describes_term(&self, aut: &TermAutomaton, run: &[Option<usize>], bound: usize) -> Result<Verdict, SchemeError> {
        if self.kind != Kind::Sbj {
            return Err(SchemeError::Kind("terms over F are described by binary schemes".into()));
        }
        let reach = aut.reachable();
        let mut undecided = false;
        let relabel = |g: ArrGraph<usize>| -> Result<Arrangement<usize>, SchemeError> {
            let g = g.relabel(|&q| run.get(q).copied().flatten().unwrap_or(usize::MAX));
            let a = Arrangement::from_graph(g);
            check_letters(&a, self.states.len(), "the run").map_err(|_| SchemeError::Run("an ext state has no state".into()))?;
            Ok(a)
        };
        let mut check = |got: Arrangement<usize>, w: &Arrangement<usize>, clause, at: String| match got.iso(w, bound) {
            IsoAnswer::Iso => None,
            IsoAnswer::Unknown(_) => {
                undecided = true;
                None
            }
            IsoAnswer::NotIso => Some(Violation { clause, at, detail: format!("got {}", got.relabel(|&q| self.states[q].clone())) }),
        };
        let axis = relabel(ext_frontier(aut, aut.root())?)?;
        if let Some(v) = check(axis, &self.axis, Clause::Axis, "axis".into()) {
            return Ok(Verdict::Violated(v));
        }
        for q in (0..aut.len()).filter(|&q| reach[q] && aut.state(q).sym == Symbol::Ext) {
            let Some(p) = run.get(q).copied().flatten() else {
                return Err(SchemeError::Run(format!("ext state {} has no state", aut.state_name(q))));
            };
            let Children::Word(w) = &self.children[p] else { unreachable!() };
            let got = relabel(ext_frontier(aut, aut.state(q).kids[0])?)?;
            if let Some(v) = check(got, w, Clause::Below, aut.state_name(q).to_string()) {
                return Ok(Verdict::Violated(v));
            }
        }
        Ok(if undecided { Verdict::HoldsUpTo(bound) } else { Verdict::Holds })
    }

    fn word_text(&self, word: &[usize], clause: Clause) -> String {
        let names = if matches!(clause, Clause::Minus | Clause::Plus) { &self.dirs } else { &self.states };
        if word.is_empty() {
            return "empty".into();
        }
        word.iter().map(|&x| names[x].as_str()).collect::<Vec<_>>().join(" . ")
    }

    fn mset_text(&self, m: &LabelledSet<usize>) -> String {
        let parts: Vec<String> = m.iter().map(|(d, c)| format!("{}:{c}", self.dirs[*d])).collect();
        if parts.is_empty() {
            "empty".into()
        } else {
            parts.join(" ")
        }
    }
}

trait LineNames {
    fn line_names_joined(&self, l: usize) -> String;
}

impl LineNames for Structured {
    fn line_names_joined(&self, l: usize) -> String {
        self.line(l).iter().map(|&x| self.name(x)).collect::<Vec<_>>().join(" ")
    }
}

/// Arrangement of maximal ext states below state `q`, labelled by state.
fn ext_frontier(aut: &TermAutomaton, q: StateId) -> Result<ArrGraph<usize>, SchemeError> {
    let a = aut.rooted_at(q);
    Ok(frontier_with(&a, &Dewey::root(), |p| match (&a.state(p).sym, a.state(p).kids.len()) {
        (Symbol::Ext, 1) => Ok(FrontierNode::Leaf(p)),
        (Symbol::Dot, 2) => Ok(FrontierNode::Concat),
        (Symbol::Omega(_), 0) => Ok(FrontierNode::Empty),
        (s, _) => Err(ArrangementError::BadSymbol(s.to_string())),
    })?)
}

/// The first `k` positions of the maximal ext occurrences at or below `u`,
/// in lexicographic order.
pub fn max_ext(aut: &TermAutomaton, u: &Dewey, k: usize) -> Result<Vec<Dewey>, SchemeError> {
    let q = aut.walk(u).map_err(ArrangementError::from)?;
    let g = ext_frontier(aut, q)?;
    let mut out: Vec<Dewey> = g.enumerate(k).into_iter().map(|p| Dewey(u.0.iter().chain(&p.0).copied().collect())).collect();
    out.sort();
    Ok(out)
}

/// The scheme of a regular term over F with the state map of its automaton:
/// states are the reachable ext states, the axis is the frontier of the
/// root and `w_q` the frontier of the son of `q`. The returned vector maps
/// automaton states to scheme states and is a run on `val(t)`.
pub fn scheme_of_term(aut: &TermAutomaton) -> Result<(Scheme, Vec<Option<usize>>), SchemeError> {
    let reach = aut.reachable();
    let exts: Vec<StateId> = (0..aut.len()).filter(|&q| reach[q] && aut.state(q).sym == Symbol::Ext).collect();
    let mut h = vec![None; aut.len()];
    for (i, &q) in exts.iter().enumerate() {
        h[q] = Some(i);
    }
    let label = |q: StateId| aut.state(q).name.clone();
    let unique = exts.iter().all(|&q| {
        label(q).is_some_and(|n| exts.iter().filter(|&&p| label(p).as_deref() == Some(n.as_str())).count() == 1)
    });
    let states: Vec<String> =
        exts.iter().map(|&q| if unique { label(q).unwrap() } else { aut.state_name(q).to_string() }).collect();
    let to_arr = |g: ArrGraph<StateId>| Arrangement::from_graph(g.relabel(|&q| h[q].unwrap()));
    let axis = to_arr(ext_frontier(aut, aut.root())?);
    let mut words = Vec::new();
    for &q in &exts {
        words.push(to_arr(ext_frontier(aut, aut.state(q).kids[0])?));
    }
    Ok((Scheme::sbj(states, axis, words)?, h))
}

/// Run of [`scheme_of_term`]'s scheme on a materialized value whose nodes
/// are named by position or by a name carried by a single ext state.
pub fn run_on_positions(aut: &TermAutomaton, h: &[Option<usize>], j: &Structured) -> Result<Run, SchemeError> {
    let mut r = Vec::with_capacity(j.len());
    for x in j.poset().nodes() {
        let name = j.name(x);
        let pos = name.rsplit_once('@').map_or(name, |(_, u)| u);
        let by_pos = Dewey::parse(pos).and_then(|u| aut.walk(&u).ok());
        let q = by_pos.or_else(|| {
            let mut qs = (0..aut.len()).filter(|&q| aut.state(q).name.as_deref() == Some(name));
            qs.next().filter(|_| qs.next().is_none())
        });
        let q = q.ok_or_else(|| SchemeError::Run(format!("cannot place node `{name}`")))?;
        r.push(h[q].ok_or_else(|| SchemeError::Run(format!("`{name}` is not an ext occurrence")))?);
    }
    Ok(Run { r, rt: vec![None; j.lines().len()] })
}

/// Reads a run on `j` from lines `x q` (node `x` in state `q`) and
/// `dir x d` (the line of `x` has direction `d`). Nodes without a record
/// take the state of the same name; topped lines without one take the
/// direction named `U_x` after their first node, when such names exist.
pub fn parse_run(s: &Scheme, j: &Structured, text: &str) -> Result<Run, SchemeError> {
    let mut r: Vec<Option<usize>> = j.poset().nodes().map(|x| s.state_id(j.name(x)).ok()).collect();
    let mut rt: Vec<Option<usize>> = (0..j.lines().len())
        .map(|l| if s.kind == Kind::Sbj || j.top(l).is_none() { None } else { s.dir_id(&format!("U_{}", j.name(j.line(l)[0]))).ok() })
        .collect();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        let err = |msg: String| SchemeError::Parse { line: i + 1, msg };
        let node = |n: &str| j.poset().id(n).map_err(|e| err(e.to_string()));
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            [] => {}
            ["dir", x, d] => {
                rt[j.line_of(node(x)?)] = Some(s.dir_id(d).map_err(|e| err(e.to_string()))?)
            }
            [x, q] => r[node(x)?] = Some(s.state_id(q).map_err(|e| err(e.to_string()))?),
            _ => return Err(err(format!("expected `node state` or `dir node direction`, got `{line}`"))),
        }
    }
    let r = r
        .into_iter()
        .enumerate()
        .map(|(x, q)| q.ok_or_else(|| SchemeError::Run(format!("no state for node {}", j.name(x)))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Run { r, rt })
}

/// The standard scheme of a finite tree: one state per node, one direction
/// per topped line, identity run.
pub fn standard_scheme(j: &Structured, kind: Kind) -> Result<(Scheme, Run), SchemeError> {
    if kind == Kind::Soj {
        return Err(SchemeError::Kind("use standard_scheme_ordered for ordered trees".into()));
    }
    standard(j, None, kind)
}

pub fn standard_scheme_ordered(o: &Ordered) -> Result<(Scheme, Run), SchemeError> {
    standard(o.structured(), Some(o), Kind::Soj)
}

fn standard(j: &Structured, o: Option<&Ordered>, kind: Kind) -> Result<(Scheme, Run), SchemeError> {
    if j.axes().len() > 1 {
        return Err(SchemeError::Kind("schemes describe trees, not forests".into()));
    }
    let states: Vec<String> = j.poset().names().to_vec();
    let word = |l: usize| Arrangement::from_word(j.line(l).to_vec());
    let axis = j.axis().map(word).unwrap_or_else(Arrangement::empty);
    let topped: Vec<usize> = (0..j.lines().len()).filter(|&l| j.top(l).is_some()).collect();
    let dir_of = |l: usize| topped.iter().position(|&m| m == l).unwrap();
    let run = Run {
        r: j.poset().nodes().collect(),
        rt: (0..j.lines().len()).map(|l| (kind != Kind::Sbj && j.top(l).is_some()).then(|| dir_of(l))).collect(),
    };
    let nodes = j.poset().nodes();
    let scheme = match kind {
        Kind::Sbj => {
            let mut words = Vec::new();
            for x in nodes {
                let below = j.lines_topped_by(x);
                if below.len() > 1 {
                    return Err(SchemeError::Kind(format!("{} tops several lines", j.name(x))));
                }
                words.push(below.first().map(|&l| word(l)).unwrap_or_else(Arrangement::empty));
            }
            Scheme::sbj(states, axis, words)?
        }
        Kind::Sj => {
            let dirs = topped.iter().map(|&l| format!("U_{}", j.name(j.line(l)[0]))).collect();
            let msets = nodes.map(|x| LabelledSet::from_items(j.lines_topped_by(x).into_iter().map(dir_of))).collect();
            Scheme::sj(states, dirs, axis, msets, topped.iter().map(|&l| word(l)).collect())?
        }
        Kind::Soj => {
            let o = o.unwrap();
            let dirs = topped.iter().map(|&l| format!("U_{}", j.name(j.line(l)[0]))).collect();
            let sides = nodes
                .map(|x| {
                    let mut below = j.lines_topped_by(x);
                    below.sort_by_key(|&l| o.rank(j.line(l)[0]));
                    let pick = |s: Side| {
                        Arrangement::from_word(below.iter().copied().filter(|&l| o.side(l) == Some(s)).map(dir_of).collect())
                    };
                    (pick(Side::Minus), pick(Side::Plus))
                })
                .collect();
            Scheme::soj(states, dirs, axis, sides, topped.iter().map(|&l| word(l)).collect())?
        }
    };
    Ok((scheme, run))
}

impl Scheme {
    /// Quotient by state and direction maps onto `0..n` ranges. Merged
    /// states (directions) must have isomorphic images.
    pub fn quotient(&self, smap: &[usize], dmap: &[usize], bound: usize) -> Result<Scheme, SchemeError> {
        let onto = |m: &[usize]| {
            let n = m.iter().max().map_or(0, |x| x + 1);
            (0..n).all(|i| m.contains(&i)).then_some(n)
        };
        let nq = onto(smap).filter(|_| smap.len() == self.states.len());
        let nd = onto(dmap).filter(|_| dmap.len() == self.dirs.len());
        let (Some(nq), Some(nd)) = (nq, nd) else {
            return Err(SchemeError::Kind("state and direction maps must be total and onto 0..n".into()));
        };
        let kids: Vec<Children> = self.children.iter().map(|c| self.map_children(c, smap, dmap)).collect();
        let dws: Vec<Arrangement<usize>> = self.dir_words.iter().map(|w| w.relabel(|&q| smap[q])).collect();
        let same = |a: &Children, b: &Children| match (a, b) {
            (Children::Word(x), Children::Word(y)) => x.iso(y, bound) == IsoAnswer::Iso,
            (Children::Mset(x), Children::Mset(y)) => x == y,
            (Children::Sides(x1, x2), Children::Sides(y1, y2)) => {
                x1.iso(y1, bound) == IsoAnswer::Iso && x2.iso(y2, bound) == IsoAnswer::Iso
            }
            _ => false,
        };
        let mut rep_q: Vec<Option<usize>> = vec![None; nq];
        for q in 0..self.states.len() {
            match rep_q[smap[q]] {
                None => rep_q[smap[q]] = Some(q),
                Some(p) if !same(&kids[p], &kids[q]) => {
                    return Err(SchemeError::Merge(self.states[p].clone(), self.states[q].clone()))
                }
                _ => {}
            }
        }
        let mut rep_d: Vec<Option<usize>> = vec![None; nd];
        for d in 0..self.dirs.len() {
            match rep_d[dmap[d]] {
                None => rep_d[dmap[d]] = Some(d),
                Some(e) if dws[e].iso(&dws[d], bound) != IsoAnswer::Iso => {
                    return Err(SchemeError::Merge(self.dirs[e].clone(), self.dirs[d].clone()))
                }
                _ => {}
            }
        }
        let rep_q: Vec<usize> = rep_q.into_iter().map(Option::unwrap).collect();
        let rep_d: Vec<usize> = rep_d.into_iter().map(Option::unwrap).collect();
        Scheme::build(
            self.kind,
            rep_q.iter().map(|&q| self.states[q].clone()).collect(),
            rep_d.iter().map(|&d| self.dirs[d].clone()).collect(),
            self.axis.relabel(|&q| smap[q]),
            rep_q.iter().map(|&q| kids[q].clone()).collect(),
            rep_d.iter().map(|&d| dws[d].clone()).collect(),
        )
    }

    fn map_children(&self, c: &Children, smap: &[usize], dmap: &[usize]) -> Children {
        match c {
            Children::Word(w) => Children::Word(w.relabel(|&q| smap[q])),
            Children::Mset(m) => Children::Mset(m.relabel(|&d| dmap[d])),
            Children::Sides(a, b) => Children::Sides(a.relabel(|&d| dmap[d]), b.relabel(|&d| dmap[d])),
        }
    }
}
