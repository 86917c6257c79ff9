//! Equation files: `name = expr`, one per line, `#` comments.
//!
//! Infix `.` is `•`, `U+` is `⊎`, `x` (or `*`) is `⊗`. `ext_a(..)` and
//! `ext2_a(..)` name the occurrence `a`. A bare `Omega` takes the sort its
//! context expects.

use std::collections::HashMap;

use super::{FiniteTerm, Signature, Sort, State, StateId, Symbol, TermAutomaton, TermError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Union,
    Otimes,
}

fn lex(s: &str, line: usize) -> Result<Vec<Tok>, TermError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1
            }
            '.' | '•' => {
                out.push(Tok::Dot);
                i += 1
            }
            '⊎' => {
                out.push(Tok::Union);
                i += 1
            }
            '*' | '⊗' => {
                out.push(Tok::Otimes);
                i += 1
            }
            c if c.is_alphanumeric() || c == '_' || c == '\'' => {
                let start = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                    i += 1;
                }
                let word: String = cs[start..i].iter().collect();
                if word == "U" && cs.get(i) == Some(&'+') {
                    i += 1;
                    out.push(Tok::Union);
                } else {
                    out.push(Tok::Ident(word));
                }
            }
            _ => return Err(TermError::Parse { line, msg: format!("unexpected character `{c}`") }),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Raw {
    App { sym: Symbol, name: Option<String>, args: Vec<Raw>, sort_free: bool },
    Ident(String),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> TermError {
        TermError::Parse { line: self.line, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Raw, TermError> {
        let mut lhs = self.primary()?;
        loop {
            let sym = match self.peek() {
                Some(Tok::Dot) => Symbol::Dot,
                Some(Tok::Union) => Symbol::Union,
                Some(Tok::Otimes) => Symbol::Otimes,
                Some(Tok::Ident(x)) if x == "x" => Symbol::Otimes,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.primary()?;
            lhs = Raw::App { sym, name: None, args: vec![lhs, rhs], sort_free: false };
        }
    }

    fn primary(&mut self) -> Result<Raw, TermError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                let args = if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let mut args = vec![self.expr()?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen)?;
                    Some(args)
                } else {
                    None
                };
                self.application(id, args)
            }
            other => Err(self.err(format!("expected a term, found {other:?}"))),
        }
    }

    fn application(&self, id: String, args: Option<Vec<Raw>>) -> Result<Raw, TermError> {
        let app = |sym, name, args| Ok(Raw::App { sym, name, args, sort_free: false });
        let arity = args.as_ref().map_or(0, Vec::len);
        let (base, name) = match id.split_once('_') {
            Some((b @ ("ext" | "ext2"), n)) if !n.is_empty() => (b.to_string(), Some(n.to_string())),
            _ => (id.clone(), None),
        };
        match (base.as_str(), args) {
            ("Omega", None) => Ok(Raw::App { sym: Symbol::Omega(Sort::T), name: None, args: vec![], sort_free: true }),
            ("Omega_t", None) => app(Symbol::Omega(Sort::T), None, vec![]),
            ("Omega_f", None) => app(Symbol::Omega(Sort::F), None, vec![]),
            ("Omega_h", None) => app(Symbol::Omega(Sort::H), None, vec![]),
            ("ext", Some(a)) if arity == 1 || arity == 2 => app(Symbol::Ext, name, a),
            ("ext2", Some(a)) if arity == 2 => app(Symbol::Ext, name, a),
            ("ext" | "ext2", _) => Err(self.err(format!("`{id}` used with {arity} arguments"))),
            ("mkf", Some(a)) if arity == 1 => app(Symbol::Mkf, None, a),
            ("mkh", Some(a)) if arity == 1 => app(Symbol::Mkh, None, a),
            (_, None) => Ok(Raw::Ident(id)),
            (_, Some(a)) => app(Symbol::Named(id), None, a),
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), TermError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {t:?}, found {:?}", self.peek())))
        }
    }
}

fn parse_line(s: &str, line: usize) -> Result<Raw, TermError> {
    let mut p = Parser { toks: lex(s, line)?, pos: 0, line };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err(format!("trailing input at token {:?}", p.toks[p.pos])));
    }
    Ok(e)
}

fn collect_symbols<'a>(r: &'a Raw, unknowns: &HashMap<String, usize>, out: &mut Vec<(Symbol, usize)>) {
    match r {
        Raw::App { sym, args, .. } => {
            out.push((sym.clone(), args.len()));
            for a in args {
                collect_symbols(a, unknowns, out);
            }
        }
        Raw::Ident(id) if !unknowns.contains_key(id) => out.push((Symbol::Named(id.clone()), 0)),
        Raw::Ident(_) => {}
    }
}

/// Gives each bare `Omega` the sort its parent expects.
fn resolve_sorts(r: &mut Raw, expected: Sort, sig: &Signature) {
    if let Raw::App { sym, args, sort_free, .. } = r {
        if *sort_free {
            *sym = Symbol::Omega(expected);
            return;
        }
        let sorts = sig.arg_sorts(sym).filter(|s| s.len() == args.len()).unwrap_or_else(|| vec![Sort::T; args.len()]);
        for (a, s) in args.iter_mut().zip(sorts) {
            resolve_sorts(a, s, sig);
        }
    }
}

/// Parses a single closed term; every identifier is a letter.
pub fn parse_term(s: &str) -> Result<FiniteTerm, TermError> {
    let mut raw = parse_line(s, 1)?;
    let mut syms = Vec::new();
    collect_symbols(&raw, &HashMap::new(), &mut syms);
    let sig = Signature::infer(syms.iter().map(|(s, a)| (s, *a)));
    resolve_sorts(&mut raw, Sort::T, &sig);
    fn build(r: &Raw) -> FiniteTerm {
        match r {
            Raw::App { sym, name, args, .. } => {
                FiniteTerm { sym: sym.clone(), name: name.clone(), kids: args.iter().map(build).collect() }
            }
            Raw::Ident(id) => FiniteTerm::letter(id),
        }
    }
    Ok(build(&raw))
}

/// Builds the automaton of an equation system; the first equation is the root.
pub fn parse_equations(text: &str) -> Result<TermAutomaton, TermError> {
    let mut eqs: Vec<(String, Raw, usize)> = Vec::new();
    let mut unknowns: HashMap<String, usize> = HashMap::new();
    for (ln, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) =
            line.split_once('=').ok_or_else(|| TermError::Parse { line: ln + 1, msg: "expected `name = expr`".into() })?;
        let lhs = lhs.trim().to_string();
        if lhs.is_empty() || !lhs.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
            return Err(TermError::Parse { line: ln + 1, msg: format!("bad unknown name `{lhs}`") });
        }
        if unknowns.insert(lhs.clone(), eqs.len()).is_some() {
            return Err(TermError::Redefined(lhs));
        }
        eqs.push((lhs, parse_line(rhs, ln + 1)?, ln + 1));
    }
    if eqs.is_empty() {
        return Err(TermError::Parse { line: 0, msg: "no equations".into() });
    }
    // an identifier is an unknown if it is defined, a letter otherwise
    for (lhs, rhs, _) in &eqs {
        match rhs {
            Raw::Ident(id) if unknowns.contains_key(id) => return Err(TermError::Unguarded(lhs.clone())),
            _ => {}
        }
    }
    let mut syms = Vec::new();
    for (_, rhs, _) in &eqs {
        collect_symbols(rhs, &unknowns, &mut syms);
    }
    let sig = Signature::infer(syms.iter().map(|(s, a)| (s, *a)));
    // letters are only meaningful in letter-based signatures
    if matches!(sig, Signature::F | Signature::FPrime | Signature::FSecond) {
        if let Some((Symbol::Named(n), _)) = syms.iter().find(|(s, _)| matches!(s, Symbol::Named(_))) {
            return Err(TermError::Undefined(n.clone()));
        }
    }
    for (_, rhs, _) in eqs.iter_mut() {
        resolve_sorts(rhs, Sort::T, &sig);
    }

    let mut states: Vec<State> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut pending: Vec<(StateId, usize, String)> = Vec::new();
    let mut roots = vec![0; eqs.len()];
    fn alloc(
        r: &Raw,
        owner: &str,
        states: &mut Vec<State>,
        names: &mut Vec<String>,
        pending: &mut Vec<(StateId, usize, String)>,
        unknowns: &HashMap<String, usize>,
    ) -> Option<StateId> {
        match r {
            Raw::Ident(id) if unknowns.contains_key(id) => None,
            Raw::Ident(id) => {
                states.push(State { sym: Symbol::Named(id.clone()), kids: vec![], name: None });
                names.push(format!("{owner}.{}", states.len()));
                Some(states.len() - 1)
            }
            Raw::App { sym, name, args, .. } => {
                let id = states.len();
                states.push(State { sym: sym.clone(), kids: vec![usize::MAX; args.len()], name: name.clone() });
                names.push(format!("{owner}.{id}"));
                for (i, a) in args.iter().enumerate() {
                    match alloc(a, owner, states, names, pending, unknowns) {
                        Some(k) => states[id].kids[i] = k,
                        None => {
                            if let Raw::Ident(u) = a {
                                pending.push((id, i, u.clone()));
                            }
                        }
                    }
                }
                Some(id)
            }
        }
    }
    for (i, (lhs, rhs, _)) in eqs.iter().enumerate() {
        let root = alloc(rhs, lhs, &mut states, &mut names, &mut pending, &unknowns).expect("guarded");
        names[root] = lhs.clone();
        roots[i] = root;
    }
    for (st, i, u) in pending {
        states[st].kids[i] = roots[unknowns[&u]];
    }
    // drop states unreachable from the root equation
    let a = TermAutomaton::new(states, names, roots[0]);
    Ok(compact(&a))
}

/// Removes unreachable states, keeping names.
fn compact(a: &TermAutomaton) -> TermAutomaton {
    let reach = a.reachable();
    let mut map = vec![usize::MAX; a.len()];
    let mut k = 0;
    for q in 0..a.len() {
        if reach[q] {
            map[q] = k;
            k += 1;
        }
    }
    let mut states = Vec::new();
    let mut names = Vec::new();
    for q in 0..a.len() {
        if reach[q] {
            let s = a.state(q);
            states.push(State { sym: s.sym.clone(), kids: s.kids.iter().map(|&c| map[c]).collect(), name: s.name.clone() });
            names.push(a.state_name(q).to_string());
        }
    }
    TermAutomaton::new(states, names, map[a.root()])
}
