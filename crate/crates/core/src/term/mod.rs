//! Finite and regular terms over the tree signatures, presented as term
//! automata `τ : Q → F × Seq(Q)`.

mod parse;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

pub use parse::{parse_equations, parse_term};

pub type StateId = usize;

/// Sort of a symbol's value: trees, forests, hedges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    T,
    F,
    H,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Dot,
    /// Unary in F and F′, binary in F″.
    Ext,
    Union,
    Otimes,
    Mkf,
    Mkh,
    Omega(Sort),
    /// Letters and free function symbols.
    Named(String),
}

impl Symbol {
    pub fn result_sort(&self) -> Sort {
        match self {
            Symbol::Union | Symbol::Mkf => Sort::F,
            Symbol::Otimes | Symbol::Mkh => Sort::H,
            Symbol::Omega(s) => *s,
            _ => Sort::T,
        }
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, Symbol::Omega(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Dot => write!(f, "."),
            Symbol::Ext => write!(f, "ext"),
            Symbol::Union => write!(f, "U+"),
            Symbol::Otimes => write!(f, "x"),
            Symbol::Mkf => write!(f, "mkf"),
            Symbol::Mkh => write!(f, "mkh"),
            Symbol::Omega(Sort::T) => write!(f, "Omega"),
            Symbol::Omega(Sort::F) => write!(f, "Omega_f"),
            Symbol::Omega(Sort::H) => write!(f, "Omega_h"),
            Symbol::Named(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Signature {
    /// `{•, ext, Ω}`
    F,
    /// `{•, ⊎, ext, mkf, Ω_t, Ω_f}`
    FPrime,
    /// `{•, ⊗, ext, mkh, Ω_t, Ω_h}`
    FSecond,
    /// `{•, Ω}` plus nullary letters.
    Arrangement,
    /// Named symbols of fixed arity, single sort.
    Free(BTreeMap<String, usize>),
}

impl Signature {
    pub fn free(symbols: &[(&str, usize)]) -> Self {
        Signature::Free(symbols.iter().map(|(s, a)| (s.to_string(), *a)).collect())
    }

    /// Argument sorts of `sym`, or `None` if the symbol is not in the signature.
    pub fn arg_sorts(&self, sym: &Symbol) -> Option<Vec<Sort>> {
        use Sort::*;
        use Symbol::*;
        match (self, sym) {
            (_, Dot) if !matches!(self, Signature::Free(_)) => Some(vec![T, T]),
            (Signature::F, Ext) => Some(vec![T]),
            (Signature::F, Omega(T)) => Some(vec![]),
            (Signature::FPrime, Union) => Some(vec![F, F]),
            (Signature::FPrime, Ext) => Some(vec![F]),
            (Signature::FPrime, Mkf) => Some(vec![T]),
            (Signature::FPrime, Omega(T | F)) => Some(vec![]),
            (Signature::FSecond, Otimes) => Some(vec![H, H]),
            (Signature::FSecond, Ext) => Some(vec![H, H]),
            (Signature::FSecond, Mkh) => Some(vec![T]),
            (Signature::FSecond, Omega(T | H)) => Some(vec![]),
            (Signature::Arrangement, Omega(T)) => Some(vec![]),
            (Signature::Arrangement, Named(_)) => Some(vec![]),
            (Signature::Free(m), Named(s)) => m.get(s).map(|&a| vec![T; a]),
            (Signature::Free(_), Omega(T)) => Some(vec![]),
            _ => None,
        }
    }

    /// Guesses the signature from the symbols used.
    pub fn infer<'a>(symbols: impl IntoIterator<Item = (&'a Symbol, usize)>) -> Signature {
        let mut prime = false;
        let mut second = false;
        let mut letters = false;
        let mut ext = false;
        let mut named: BTreeMap<String, usize> = BTreeMap::new();
        let mut named_args = false;
        for (s, arity) in symbols {
            match s {
                Symbol::Union | Symbol::Mkf | Symbol::Omega(Sort::F) => prime = true,
                Symbol::Otimes | Symbol::Mkh | Symbol::Omega(Sort::H) => second = true,
                Symbol::Ext if arity == 2 => second = true,
                Symbol::Ext => ext = true,
                Symbol::Named(n) => {
                    letters = true;
                    named_args |= arity > 0;
                    named.insert(n.clone(), arity);
                }
                _ => {}
            }
        }
        if second {
            Signature::FSecond
        } else if prime {
            Signature::FPrime
        } else if ext {
            Signature::F
        } else if named_args {
            Signature::Free(named)
        } else if letters {
            Signature::Arrangement
        } else {
            Signature::F
        }
    }
}

/// A position in a term: a word over 1-based digits.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dewey(pub Vec<u8>);

impl Dewey {
    pub fn root() -> Self {
        Dewey(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, digit: u8) -> Self {
        let mut v = self.0.clone();
        v.push(digit);
        Dewey(v)
    }

    pub fn is_prefix_of(&self, other: &Dewey) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self ≤_t other`: `self` is an extension of `other`.
    pub fn below_or_eq(&self, other: &Dewey) -> bool {
        other.is_prefix_of(self)
    }

    pub fn prefix(&self, n: usize) -> Dewey {
        Dewey(self.0[..n].to_vec())
    }

    pub fn parse(s: &str) -> Option<Dewey> {
        if s == "ε" || s == "e" || s.is_empty() {
            return Some(Dewey::root());
        }
        s.chars().map(|c| c.to_digit(10).filter(|&d| d >= 1).map(|d| d as u8)).collect::<Option<Vec<_>>>().map(Dewey)
    }
}

impl fmt::Display for Dewey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Dewey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Longest common prefix of `u` and `v` and the next digit on each side.
pub fn pos_meet(u: &Dewey, v: &Dewey) -> (Dewey, Option<u8>, Option<u8>) {
    let k = u.0.iter().zip(&v.0).take_while(|(a, b)| a == b).count();
    (u.prefix(k), u.0.get(k).copied(), v.0.get(k).copied())
}

/// Lexicographic comparison: a prefix comes first, otherwise the first
/// differing digit decides.
pub fn lex_compare(u: &Dewey, v: &Dewey) -> std::cmp::Ordering {
    u.0.cmp(&v.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteTerm {
    pub sym: Symbol,
    /// Optional node name, used for `ext` occurrences.
    pub name: Option<String>,
    pub kids: Vec<FiniteTerm>,
}

impl FiniteTerm {
    pub fn new(sym: Symbol, kids: Vec<FiniteTerm>) -> Self {
        FiniteTerm { sym, name: None, kids }
    }

    pub fn omega() -> Self {
        Self::new(Symbol::Omega(Sort::T), vec![])
    }

    pub fn omega_of(sort: Sort) -> Self {
        Self::new(Symbol::Omega(sort), vec![])
    }

    pub fn dot(a: FiniteTerm, b: FiniteTerm) -> Self {
        Self::new(Symbol::Dot, vec![a, b])
    }

    pub fn ext(a: FiniteTerm) -> Self {
        Self::new(Symbol::Ext, vec![a])
    }

    pub fn ext_named(name: &str, a: FiniteTerm) -> Self {
        FiniteTerm { sym: Symbol::Ext, name: Some(name.to_string()), kids: vec![a] }
    }

    pub fn ext2_named(name: &str, a: FiniteTerm, b: FiniteTerm) -> Self {
        FiniteTerm { sym: Symbol::Ext, name: Some(name.to_string()), kids: vec![a, b] }
    }

    pub fn letter(a: &str) -> Self {
        Self::new(Symbol::Named(a.to_string()), vec![])
    }

    pub fn size(&self) -> usize {
        1 + self.kids.iter().map(FiniteTerm::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.kids.iter().map(FiniteTerm::depth).max().unwrap_or(0)
    }

    pub fn subterm(&self, u: &Dewey) -> Option<&FiniteTerm> {
        let mut t = self;
        for &d in &u.0 {
            t = t.kids.get(d as usize - 1)?;
        }
        Some(t)
    }

    /// All positions in prefix order.
    pub fn positions(&self) -> Vec<Dewey> {
        let mut out = Vec::new();
        fn go(t: &FiniteTerm, u: &mut Vec<u8>, out: &mut Vec<Dewey>) {
            out.push(Dewey(u.clone()));
            for (i, k) in t.kids.iter().enumerate() {
                u.push(i as u8 + 1);
                go(k, u, out);
                u.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Symbols with their arities, for signature inference.
    pub fn symbols(&self) -> Vec<(&Symbol, usize)> {
        let mut out = vec![(&self.sym, self.kids.len())];
        for k in &self.kids {
            out.extend(k.symbols());
        }
        out
    }

    /// `self ≪ other`: every non-Ω occurrence of `self` carries the same symbol in `other`.
    pub fn leq_term(&self, other: &FiniteTerm) -> bool {
        if self.sym.is_omega() {
            return self.sym.result_sort() == other.sym.result_sort();
        }
        self.sym == other.sym
            && self.kids.len() == other.kids.len()
            && self.kids.iter().zip(&other.kids).all(|(a, b)| a.leq_term(b))
    }
}

impl fmt::Display for FiniteTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let named = |f: &mut fmt::Formatter<'_>, base: &str| match &self.name {
            Some(n) => write!(f, "{base}_{n}"),
            None => write!(f, "{base}"),
        };
        match (&self.sym, self.kids.as_slice()) {
            (Symbol::Dot | Symbol::Union | Symbol::Otimes, [a, b]) => write!(f, "({a} {} {b})", self.sym),
            (Symbol::Ext, [a]) => {
                named(f, "ext")?;
                write!(f, "({a})")
            }
            (Symbol::Ext, [a, b]) => {
                named(f, "ext2")?;
                write!(f, "({a}, {b})")
            }
            (s, []) => write!(f, "{s}"),
            (s, kids) => {
                write!(f, "{s}(")?;
                for (i, k) in kids.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub sym: Symbol,
    pub kids: Vec<StateId>,
    /// Optional node name carried over from a named `ext`.
    pub name: Option<String>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("position {0} falls off the term")]
    FallsOff(Dewey),
    #[error("state {state}: {msg}")]
    Invalid { state: String, msg: String },
    #[error("unguarded equation for `{0}`")]
    Unguarded(String),
    #[error("undefined unknown `{0}`")]
    Undefined(String),
    #[error("`{0}` defined twice")]
    Redefined(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A regular term as a finite automaton; `h(ε)` is `root`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermAutomaton {
    states: Vec<State>,
    names: Vec<String>,
    root: StateId,
}

impl TermAutomaton {
    pub fn new(states: Vec<State>, names: Vec<String>, root: StateId) -> Self {
        assert_eq!(states.len(), names.len());
        TermAutomaton { states, names, root }
    }

    /// One state per node of `t`, numbered in prefix order.
    pub fn from_finite(t: &FiniteTerm) -> Self {
        let mut states = Vec::new();
        fn go(t: &FiniteTerm, states: &mut Vec<State>) -> StateId {
            let id = states.len();
            states.push(State { sym: t.sym.clone(), kids: vec![], name: t.name.clone() });
            let kids = t.kids.iter().map(|k| go(k, states)).collect();
            states[id].kids = kids;
            id
        }
        go(t, &mut states);
        let names = (0..states.len()).map(|i| format!("s{i}")).collect();
        TermAutomaton { states, names, root: 0 }
    }

    pub fn root(&self) -> StateId {
        self.root
    }

    pub fn state(&self, q: StateId) -> &State {
        &self.states[q]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Same transition structure with a different root state.
    pub fn rooted_at(&self, q: StateId) -> TermAutomaton {
        TermAutomaton { states: self.states.clone(), names: self.names.clone(), root: q }
    }

    /// State reached by walking `u` from the root.
    pub fn walk(&self, u: &Dewey) -> Result<StateId, TermError> {
        self.walk_from(self.root, u)
    }

    pub fn walk_from(&self, q: StateId, u: &Dewey) -> Result<StateId, TermError> {
        let mut q = q;
        for &d in &u.0 {
            q = *self.states[q].kids.get((d as usize).wrapping_sub(1)).ok_or_else(|| TermError::FallsOff(u.clone()))?;
        }
        Ok(q)
    }

    /// States at every prefix of `u`, from `ε` to `u` inclusive.
    pub fn path(&self, u: &Dewey) -> Result<Vec<StateId>, TermError> {
        let mut q = self.root;
        let mut out = Vec::with_capacity(u.len() + 1);
        out.push(q);
        for &d in &u.0 {
            q = *self.states[q].kids.get((d as usize).wrapping_sub(1)).ok_or_else(|| TermError::FallsOff(u.clone()))?;
            out.push(q);
        }
        Ok(out)
    }

    pub fn symbol_at(&self, u: &Dewey) -> Result<&Symbol, TermError> {
        Ok(&self.states[self.walk(u)?].sym)
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        while let Some(q) = stack.pop() {
            for &k in &self.states[q].kids {
                if !seen[k] {
                    seen[k] = true;
                    stack.push(k);
                }
            }
        }
        seen
    }

    /// Checks arities and sorts against `sig`; unreachable states are reported too.
    pub fn validate(&self, sig: &Signature) -> Result<(), Vec<TermError>> {
        let mut errs = Vec::new();
        let reach = self.reachable();
        for (q, st) in self.states.iter().enumerate() {
            let bad = |msg: String| TermError::Invalid { state: self.names[q].clone(), msg };
            if !reach[q] {
                errs.push(bad("unreachable from the root".into()));
                continue;
            }
            match sig.arg_sorts(&st.sym) {
                None => errs.push(bad(format!("symbol `{}` of arity {} not in signature", st.sym, st.kids.len()))),
                Some(sorts) if sorts.len() != st.kids.len() => {
                    errs.push(bad(format!("`{}` expects {} arguments, got {}", st.sym, sorts.len(), st.kids.len())))
                }
                Some(sorts) => {
                    for (i, (&k, s)) in st.kids.iter().zip(&sorts).enumerate() {
                        let got = self.states[k].sym.result_sort();
                        if got != *s {
                            errs.push(bad(format!("argument {} of `{}` has sort {got:?}, expected {s:?}", i + 1, st.sym)));
                        }
                    }
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// The finite term agreeing with `self` on positions shorter than `d`,
    /// with Ω of the matching sort at depth `d`.
    pub fn truncate(&self, d: usize) -> FiniteTerm {
        self.truncate_from(self.root, d)
    }

    pub fn truncate_from(&self, q: StateId, d: usize) -> FiniteTerm {
        let st = &self.states[q];
        if d == 0 {
            return FiniteTerm::omega_of(st.sym.result_sort());
        }
        FiniteTerm {
            sym: st.sym.clone(),
            name: st.name.clone(),
            kids: st.kids.iter().map(|&k| self.truncate_from(k, d - 1)).collect(),
        }
    }

    /// Whether the term is finite (no cycle reachable from the root).
    pub fn is_finite(&self) -> bool {
        // colour-based DFS
        let mut colour = vec![0u8; self.states.len()];
        fn dfs(a: &TermAutomaton, q: StateId, colour: &mut [u8]) -> bool {
            colour[q] = 1;
            for &k in &a.states[q].kids {
                if colour[k] == 1 || (colour[k] == 0 && !dfs(a, k, colour)) {
                    return false;
                }
            }
            colour[q] = 2;
            true
        }
        dfs(self, self.root, &mut colour)
    }

    /// Unfolds a finite automaton into a finite term.
    pub fn to_finite(&self) -> Option<FiniteTerm> {
        if !self.is_finite() {
            return None;
        }
        Some(self.truncate(usize::MAX))
    }

    /// Positions of length at most `max_len` whose state satisfies `pred`, in
    /// breadth-first order.
    pub fn positions_where(&self, max_len: usize, pred: impl Fn(&Symbol) -> bool) -> Vec<Dewey> {
        let mut out = Vec::new();
        let mut queue = VecDeque::from([(Dewey::root(), self.root)]);
        while let Some((u, q)) = queue.pop_front() {
            if pred(&self.states[q].sym) {
                out.push(u.clone());
            }
            if u.len() < max_len {
                for (i, &k) in self.states[q].kids.iter().enumerate() {
                    queue.push_back((u.child(i as u8 + 1), k));
                }
            }
        }
        out
    }

    /// Merges states with identical unfoldings (coarsest congruence on τ).
    pub fn minimize(&self) -> TermAutomaton {
        let n = self.states.len();
        let mut class: Vec<usize> = {
            let mut keys: BTreeMap<(Symbol, usize), usize> = BTreeMap::new();
            self.states
                .iter()
                .map(|s| {
                    let k = keys.len();
                    *keys.entry((s.sym.clone(), s.kids.len())).or_insert(k)
                })
                .collect()
        };
        loop {
            let mut keys: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|q| {
                    let key = (class[q], self.states[q].kids.iter().map(|&k| class[k]).collect());
                    let k = keys.len();
                    *keys.entry(key).or_insert(k)
                })
                .collect();
            let stable = keys.len() == class.iter().collect::<std::collections::HashSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // renumber classes reachable from the root in BFS order
        let mut new_id: HashMap<usize, StateId> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.root]);
        new_id.insert(class[self.root], 0);
        order.push(self.root);
        while let Some(q) = queue.pop_front() {
            for &k in &self.states[q].kids {
                if !new_id.contains_key(&class[k]) {
                    new_id.insert(class[k], order.len());
                    order.push(k);
                    queue.push_back(k);
                }
            }
        }
        let states = order
            .iter()
            .map(|&q| State {
                sym: self.states[q].sym.clone(),
                kids: self.states[q].kids.iter().map(|&k| new_id[&class[k]]).collect(),
                name: None,
            })
            .collect();
        let names = (0..order.len()).map(|i| format!("s{i}")).collect();
        TermAutomaton { states, names, root: 0 }
    }

    /// Equation-file rendering, one equation per state.
    pub fn to_equations(&self) -> String {
        let mut out = String::new();
        let reach = self.reachable();
        let mut order: Vec<StateId> = (0..self.states.len()).filter(|&q| reach[q]).collect();
        order.sort_by_key(|&q| q != self.root);
        for q in order {
            let st = &self.states[q];
            let k = |i: usize| self.names[st.kids[i]].clone();
            let rhs = match (&st.sym, st.kids.len()) {
                (Symbol::Dot | Symbol::Union | Symbol::Otimes, 2) => format!("{} {} {}", k(0), st.sym, k(1)),
                (Symbol::Ext, 1) => format!("ext{}({})", suffix(&st.name), k(0)),
                (Symbol::Ext, 2) => format!("ext2{}({}, {})", suffix(&st.name), k(0), k(1)),
                (s, 0) => format!("{s}"),
                (s, n) => format!("{s}({})", (0..n).map(k).collect::<Vec<_>>().join(", ")),
            };
            out.push_str(&format!("{} = {}\n", self.names[q], rhs));
        }
        out
    }
}

fn suffix(name: &Option<String>) -> String {
    name.as_ref().map(|n| format!("_{n}")).unwrap_or_default()
}

/// `t ≪ a`: every non-Ω occurrence of `t` is the same symbol in `a`.
pub fn term_leq(t: &FiniteTerm, a: &TermAutomaton) -> bool {
    fn go(t: &FiniteTerm, a: &TermAutomaton, q: StateId) -> bool {
        let st = a.state(q);
        if t.sym.is_omega() {
            return t.sym.result_sort() == st.sym.result_sort();
        }
        t.sym == st.sym && t.kids.len() == st.kids.len() && t.kids.iter().zip(&st.kids).all(|(k, &qk)| go(k, a, qk))
    }
    go(t, a, a.root())
}
