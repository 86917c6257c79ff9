//! Regular arrangement expressions and their normal form.

use std::collections::BTreeSet;
use std::fmt;

use super::{Count, IsoAnswer, LabelledSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr<L> {
    Empty,
    Letter(L),
    Concat(Box<Expr<L>>, Box<Expr<L>>),
    /// `e^ω`
    Omega(Box<Expr<L>>),
    /// `e^-ω`
    OmegaRev(Box<Expr<L>>),
    /// η-shuffle of the components.
    Shuffle(Vec<Expr<L>>),
}

/// Item of a normal form; a normal form is a concatenation of items.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item<L> {
    Letter(L),
    Omega(Vec<Item<L>>),
    OmegaRev(Vec<Item<L>>),
    Shuffle(BTreeSet<Vec<Item<L>>>),
}

pub type Nf<L> = Vec<Item<L>>;

impl<L: Clone + Ord> Expr<L> {
    pub fn letter(a: L) -> Self {
        Expr::Letter(a)
    }

    pub fn concat(a: Expr<L>, b: Expr<L>) -> Self {
        Expr::Concat(Box::new(a), Box::new(b))
    }

    pub fn omega(e: Expr<L>) -> Self {
        Expr::Omega(Box::new(e))
    }

    pub fn omega_rev(e: Expr<L>) -> Self {
        Expr::OmegaRev(Box::new(e))
    }

    /// Finite word from letters.
    pub fn word(ls: impl IntoIterator<Item = L>) -> Self {
        let mut items: Vec<Expr<L>> = ls.into_iter().map(Expr::Letter).collect();
        match items.len() {
            0 => Expr::Empty,
            _ => {
                let mut acc = items.pop().unwrap();
                while let Some(x) = items.pop() {
                    acc = Expr::concat(x, acc);
                }
                acc
            }
        }
    }

    pub fn relabel<M: Clone + Ord>(&self, f: &impl Fn(&L) -> M) -> Expr<M> {
        match self {
            Expr::Empty => Expr::Empty,
            Expr::Letter(a) => Expr::Letter(f(a)),
            Expr::Concat(a, b) => Expr::concat(a.relabel(f), b.relabel(f)),
            Expr::Omega(e) => Expr::omega(e.relabel(f)),
            Expr::OmegaRev(e) => Expr::omega_rev(e.relabel(f)),
            Expr::Shuffle(es) => Expr::Shuffle(es.iter().map(|e| e.relabel(f)).collect()),
        }
    }

    pub fn letters(&self) -> BTreeSet<L> {
        let mut out = BTreeSet::new();
        self.visit_letters(&mut |a| {
            out.insert(a.clone());
        });
        out
    }

    fn visit_letters(&self, f: &mut impl FnMut(&L)) {
        match self {
            Expr::Empty => {}
            Expr::Letter(a) => f(a),
            Expr::Concat(a, b) => {
                a.visit_letters(f);
                b.visit_letters(f);
            }
            Expr::Omega(e) | Expr::OmegaRev(e) => e.visit_letters(f),
            Expr::Shuffle(es) => es.iter().for_each(|e| e.visit_letters(f)),
        }
    }

    pub fn normal_form(&self) -> Nf<L> {
        match self {
            Expr::Empty => vec![],
            Expr::Letter(a) => vec![Item::Letter(a.clone())],
            Expr::Concat(a, b) => {
                let mut left = a.normal_form();
                for it in b.normal_form() {
                    push_item(&mut left, it);
                }
                left
            }
            Expr::Omega(e) => power(e.normal_form(), false),
            Expr::OmegaRev(e) => power(e.normal_form(), true),
            Expr::Shuffle(es) => {
                let set: BTreeSet<Nf<L>> = es.iter().map(Expr::normal_form).filter(|n| !n.is_empty()).collect();
                if set.is_empty() {
                    vec![]
                } else {
                    vec![Item::Shuffle(set)]
                }
            }
        }
    }

    /// The expression rebuilt from its normal form.
    pub fn normalized(&self) -> Expr<L> {
        nf_to_expr(&self.normal_form())
    }

    /// The finite word denoted, if the expression is finite.
    pub fn finite_word(&self) -> Option<Vec<L>> {
        self.normal_form()
            .into_iter()
            .map(|it| match it {
                Item::Letter(a) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn labelled_set(&self) -> LabelledSet<L> {
        nf_counts(&self.normal_form())
    }

    /// Normal-form equality, with prefix/suffix/count certificates for
    /// `NotIso`; anything else is `Unknown`.
    pub fn iso(&self, other: &Expr<L>, bound: usize) -> IsoAnswer {
        let (a, b) = (self.normal_form(), other.normal_form());
        if a == b {
            return IsoAnswer::Iso;
        }
        let finite = |n: &Nf<L>| n.iter().all(|i| matches!(i, Item::Letter(_)));
        if finite(&a) && finite(&b) {
            return IsoAnswer::NotIso;
        }
        if nf_counts(&a) != nf_counts(&b) {
            return IsoAnswer::NotIso;
        }
        if end_letters(&a, bound, false) != end_letters(&b, bound, false)
            || end_letters(&a, bound, true) != end_letters(&b, bound, true)
        {
            return IsoAnswer::NotIso;
        }
        IsoAnswer::Unknown(bound)
    }
}

fn push_item<L: Clone + Ord>(left: &mut Nf<L>, it: Item<L>) {
    match it {
        Item::Omega(mut body) => {
            // x (y x)^ω = (x y)^ω
            while left.last().is_some() && left.last() == body.last() {
                left.pop();
                body.rotate_right(1);
            }
            left.push(Item::Omega(body));
        }
        Item::Shuffle(set) => {
            if let Some(Item::Shuffle(s)) = left.last() {
                if *s == set {
                    return;
                }
            }
            // sh(S) z sh(S) = sh(S) when z ∈ S
            let n = left.len();
            if n >= 2 {
                if let Item::Shuffle(s) = &left[n - 2] {
                    if *s == set && set.contains(&vec![left[n - 1].clone()]) {
                        left.pop();
                        return;
                    }
                }
            }
            left.push(Item::Shuffle(set));
        }
        other => {
            // (x y)^-ω x = (y x)^-ω
            if let Some(Item::OmegaRev(body)) = left.last_mut() {
                if body.first() == Some(&other) {
                    body.rotate_left(1);
                    return;
                }
            }
            left.push(other);
        }
    }
}

fn power<L: Clone + Ord>(body: Nf<L>, rev: bool) -> Nf<L> {
    if body.is_empty() {
        return vec![];
    }
    if let [Item::Shuffle(_)] = body.as_slice() {
        return body;
    }
    let body = primitive_root(body);
    vec![if rev { Item::OmegaRev(body) } else { Item::Omega(body) }]
}

fn primitive_root<T: PartialEq>(mut v: Vec<T>) -> Vec<T> {
    let n = v.len();
    for p in 1..n {
        if n % p == 0 && (p..n).all(|i| v[i] == v[i - p]) {
            v.truncate(p);
            return v;
        }
    }
    v
}

fn nf_counts<L: Clone + Ord>(nf: &Nf<L>) -> LabelledSet<L> {
    let mut out = LabelledSet::new();
    for it in nf {
        match it {
            Item::Letter(a) => out.add(a.clone(), Count::Finite(1)),
            Item::Omega(b) | Item::OmegaRev(b) => {
                for (a, _) in nf_counts(b).iter() {
                    out.add(a.clone(), Count::Omega);
                }
            }
            Item::Shuffle(s) => {
                for b in s {
                    for (a, _) in nf_counts(b).iter() {
                        out.add(a.clone(), Count::Omega);
                    }
                }
            }
        }
    }
    out
}

/// How a walk from one end stopped.
#[derive(Debug, PartialEq, Eq)]
enum Stop {
    /// The whole arrangement was consumed.
    End,
    /// The remainder has no extremal element.
    NoExtremum,
    /// The requested number of letters was reached.
    Limit,
}

/// The first (or last, if `from_end`) `k` letters, and why the walk stopped.
fn end_letters<L: Clone + Ord>(nf: &Nf<L>, k: usize, from_end: bool) -> (Vec<L>, Stop) {
    let mut out = Vec::new();
    let stop = walk_items(nf, k, from_end, &mut out);
    (out, stop)
}

fn walk_items<L: Clone + Ord>(nf: &[Item<L>], k: usize, from_end: bool, out: &mut Vec<L>) -> Stop {
    let items: Box<dyn Iterator<Item = &Item<L>>> = if from_end { Box::new(nf.iter().rev()) } else { Box::new(nf.iter()) };
    for it in items {
        if out.len() >= k {
            return Stop::Limit;
        }
        let s = match it {
            Item::Letter(a) => {
                out.push(a.clone());
                Stop::End
            }
            Item::Shuffle(_) => Stop::NoExtremum,
            Item::Omega(_) if from_end => Stop::NoExtremum,
            Item::OmegaRev(_) if !from_end => Stop::NoExtremum,
            Item::Omega(body) | Item::OmegaRev(body) => loop {
                match walk_items(body, k, from_end, out) {
                    Stop::End => {}
                    other => break other,
                }
            },
        };
        if s != Stop::End {
            return s;
        }
    }
    Stop::End
}

pub fn nf_to_expr<L: Clone + Ord>(nf: &Nf<L>) -> Expr<L> {
    let mut parts: Vec<Expr<L>> = nf
        .iter()
        .map(|it| match it {
            Item::Letter(a) => Expr::Letter(a.clone()),
            Item::Omega(b) => Expr::omega(nf_to_expr(b)),
            Item::OmegaRev(b) => Expr::omega_rev(nf_to_expr(b)),
            Item::Shuffle(s) => Expr::Shuffle(s.iter().map(nf_to_expr).collect()),
        })
        .collect();
    let Some(mut acc) = parts.pop() else { return Expr::Empty };
    while let Some(x) = parts.pop() {
        acc = Expr::concat(x, acc);
    }
    acc
}

fn fmt_letter(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    let plain = !s.is_empty()
        && s.chars().all(|c| c.is_alphanumeric() || c == '_')
        && !matches!(s, "empty" | "sh" | "w")
        && !s.chars().next().unwrap().is_ascii_digit();
    if plain {
        write!(f, "{s}")
    } else {
        write!(f, "'{s}'")
    }
}

impl<L: fmt::Display> fmt::Display for Expr<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom<L: fmt::Display>(e: &Expr<L>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match e {
                Expr::Concat(..) => write!(f, "({e})"),
                _ => write!(f, "{e}"),
            }
        }
        match self {
            Expr::Empty => write!(f, "empty"),
            Expr::Letter(a) => fmt_letter(f, &a.to_string()),
            Expr::Concat(a, b) => {
                write!(f, "{a} . ")?;
                // right operand printed bare keeps right-nested chains flat
                write!(f, "{b}")
            }
            Expr::Omega(e) => {
                atom(e, f)?;
                write!(f, "^w")
            }
            Expr::OmegaRev(e) => {
                atom(e, f)?;
                write!(f, "^-w")
            }
            Expr::Shuffle(es) => {
                write!(f, "sh{{")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("arrangement expression: {0}")]
pub struct ExprParseError(pub String);

/// Parses `empty`, `'a'` or `a`, `e1 . e2`, `e^w`, `e^-w`, `sh{e1,...}`, parentheses.
pub fn parse_expr(s: &str) -> Result<Expr<String>, ExprParseError> {
    let cs: Vec<char> = s.chars().collect();
    let mut p = ExprParser { cs, i: 0 };
    let e = p.concat()?;
    p.ws();
    if p.i != p.cs.len() {
        return Err(ExprParseError(format!("trailing input at column {}", p.i + 1)));
    }
    Ok(e)
}

struct ExprParser {
    cs: Vec<char>,
    i: usize,
}

impl ExprParser {
    fn ws(&mut self) {
        while self.i < self.cs.len() && self.cs[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.cs.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn concat(&mut self) -> Result<Expr<String>, ExprParseError> {
        let mut parts = vec![self.postfix()?];
        while self.eat('.') || self.eat('•') {
            parts.push(self.postfix()?);
        }
        let mut acc = parts.pop().unwrap();
        while let Some(x) = parts.pop() {
            acc = Expr::concat(x, acc);
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Expr<String>, ExprParseError> {
        let mut e = self.atom()?;
        while self.eat('^') {
            let rev = self.eat('-');
            self.ws();
            match self.cs.get(self.i) {
                Some('w') | Some('ω') => self.i += 1,
                _ => return Err(ExprParseError("expected `w` after `^`".into())),
            }
            e = if rev { Expr::omega_rev(e) } else { Expr::omega(e) };
        }
        Ok(e)
    }

    fn ident(&mut self) -> String {
        let start = self.i;
        while self.i < self.cs.len() && (self.cs[self.i].is_alphanumeric() || matches!(self.cs[self.i], '_' | '\'')) {
            self.i += 1;
        }
        self.cs[start..self.i].iter().collect()
    }

    fn atom(&mut self) -> Result<Expr<String>, ExprParseError> {
        self.ws();
        match self.cs.get(self.i) {
            Some('(') => {
                self.i += 1;
                let e = self.concat()?;
                if !self.eat(')') {
                    return Err(ExprParseError("missing `)`".into()));
                }
                Ok(e)
            }
            Some('\'') => {
                self.i += 1;
                let start = self.i;
                while self.i < self.cs.len() && self.cs[self.i] != '\'' {
                    self.i += 1;
                }
                if self.i == self.cs.len() {
                    return Err(ExprParseError("unterminated quoted letter".into()));
                }
                let s: String = self.cs[start..self.i].iter().collect();
                self.i += 1;
                Ok(Expr::Letter(s))
            }
            Some(c) if c.is_alphanumeric() || *c == '_' => {
                let id = self.ident();
                match id.as_str() {
                    "empty" | "Omega" => Ok(Expr::Empty),
                    "sh" => {
                        if !self.eat('{') {
                            return Err(ExprParseError("expected `{` after sh".into()));
                        }
                        let mut es = vec![self.concat()?];
                        while self.eat(',') {
                            es.push(self.concat()?);
                        }
                        if !self.eat('}') {
                            return Err(ExprParseError("missing `}`".into()));
                        }
                        Ok(Expr::Shuffle(es))
                    }
                    _ => Ok(Expr::Letter(id)),
                }
            }
            other => Err(ExprParseError(format!("unexpected {other:?} at column {}", self.i + 1))),
        }
    }
}
