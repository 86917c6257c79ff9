//! The value of a term, queried point by point on Dewey positions.
//!
//! Nodes are the `ext` occurrences. Every predicate walks finitely many
//! positions, so the oracle works unchanged on regular (infinite) terms.

use std::collections::HashMap;

use crate::order::Poset;
use crate::structured::{StructError, Structured};
use crate::term::{pos_meet, Dewey, FiniteTerm, Symbol, TermAutomaton, TermError};

#[derive(Clone, Copy)]
pub struct TermValue<'a> {
    aut: &'a TermAutomaton,
}

impl<'a> TermValue<'a> {
    pub fn new(aut: &'a TermAutomaton) -> Self {
        TermValue { aut }
    }

    pub fn automaton(&self) -> &'a TermAutomaton {
        self.aut
    }

    fn sym(&self, u: &Dewey) -> Result<&'a Symbol, TermError> {
        let q = self.aut.walk(u)?;
        Ok(&self.aut.state(q).sym)
    }

    pub fn is_node(&self, u: &Dewey) -> Result<bool, TermError> {
        Ok(matches!(self.sym(u)?, Symbol::Ext))
    }

    fn require_node(&self, u: &Dewey) -> Result<(), TermError> {
        if self.is_node(u)? {
            Ok(())
        } else {
            Err(TermError::Invalid { state: u.to_string(), msg: "not an ext occurrence".into() })
        }
    }

    /// Node name: the `ext` label when present, otherwise the position.
    pub fn node_name(&self, u: &Dewey) -> Result<String, TermError> {
        let q = self.aut.walk(u)?;
        Ok(self.aut.state(q).name.clone().unwrap_or_else(|| u.to_string()))
    }

    /// True when all positions strictly above `u` up to length `upto` are `•`.
    fn dots_between(&self, u: &Dewey, upto: usize) -> Result<bool, TermError> {
        let path = self.aut.path(u)?;
        Ok((upto..u.len()).all(|l| matches!(self.aut.state(path[l]).sym, Symbol::Dot)))
    }

    /// `u ≈ v`
    pub fn equiv(&self, u: &Dewey, v: &Dewey) -> Result<bool, TermError> {
        if u == v {
            return Ok(true);
        }
        let (j, _, _) = pos_meet(u, v);
        Ok(self.dots_between(u, j.len())? && self.dots_between(v, j.len())?)
    }

    /// Highest position reachable from `u` through `•` ancestors; equal
    /// representatives identify the `≈` class.
    pub fn rep(&self, u: &Dewey) -> Result<Dewey, TermError> {
        let path = self.aut.path(u)?;
        let mut l = u.len();
        while l > 0 && matches!(self.aut.state(path[l - 1]).sym, Symbol::Dot) {
            l -= 1;
        }
        Ok(u.prefix(l))
    }

    /// Nearest `ext` strictly above `u`.
    pub fn ext_above(&self, u: &Dewey) -> Result<Option<Dewey>, TermError> {
        let path = self.aut.path(u)?;
        Ok((0..u.len()).rev().find(|&l| matches!(self.aut.state(path[l]).sym, Symbol::Ext)).map(|l| u.prefix(l)))
    }

    /// Top of the line of `u` (absent on the axis).
    pub fn top(&self, u: &Dewey) -> Result<Option<Dewey>, TermError> {
        self.ext_above(u)
    }

    /// Number of `ext` occurrences strictly above `u`.
    pub fn depth(&self, u: &Dewey) -> Result<usize, TermError> {
        let path = self.aut.path(u)?;
        Ok((0..u.len()).filter(|&l| matches!(self.aut.state(path[l]).sym, Symbol::Ext)).count())
    }

    /// `u ≤ v` through a witness: `u ≤_t w ≤_lex v` for an ext occurrence `w ≈ v`.
    pub fn leq(&self, u: &Dewey, v: &Dewey) -> Result<bool, TermError> {
        self.require_node(u)?;
        self.require_node(v)?;
        let path = self.aut.path(u)?;
        for l in 0..=u.len() {
            if !matches!(self.aut.state(path[l]).sym, Symbol::Ext) {
                continue;
            }
            let w = u.prefix(l);
            if w <= *v && self.equiv(&w, v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The same relation through the join: `u ≤_t v`, or `u` under the first
    /// son and `v` under the second son of `u ⊔_t v` with `v ≈ u ⊔_t v`.
    pub fn leq_alt(&self, u: &Dewey, v: &Dewey) -> Result<bool, TermError> {
        self.require_node(u)?;
        self.require_node(v)?;
        if v.is_prefix_of(u) {
            return Ok(true);
        }
        let (j, du, dv) = pos_meet(u, v);
        if du != Some(1) || dv != Some(2) {
            return Ok(false);
        }
        self.dots_between(v, j.len())
    }

    pub fn lt(&self, u: &Dewey, v: &Dewey) -> Result<bool, TermError> {
        Ok(u != v && self.leq(u, v)?)
    }

    pub fn incomparable(&self, u: &Dewey, v: &Dewey) -> Result<bool, TermError> {
        Ok(!self.leq(u, v)? && !self.leq(v, u)?)
    }

    /// `ext` occurrences of length below `max_len`, in breadth-first order.
    pub fn nodes(&self, max_len: usize) -> Vec<Dewey> {
        self.aut.positions_where(max_len, |s| matches!(s, Symbol::Ext))
    }

    /// Materializes the value restricted to the given ext occurrences.
    pub fn materialize(&self, nodes: &[Dewey]) -> Result<Structured, StructError> {
        let err = |e: TermError| StructError::Parse { line: 0, msg: e.to_string() };
        let mut names = nodes.iter().map(|u| self.node_name(u)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        // a label used by several occurrences gets the position appended
        let mut count: HashMap<&str, usize> = HashMap::new();
        for s in &names {
            *count.entry(s).or_default() += 1;
        }
        let shared: Vec<bool> = names.iter().map(|s| count[s.as_str()] > 1).collect();
        for ((s, u), dup) in names.iter_mut().zip(nodes).zip(shared) {
            if dup {
                *s = format!("{s}@{u}");
            }
        }
        let n = nodes.len();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                rel[i * n + j] = self.leq(&nodes[i], &nodes[j]).map_err(err)?;
            }
        }
        let poset = Poset::from_leq(names, |a, b| rel[a * n + b])?;
        let mut classes: Vec<(Dewey, Vec<usize>)> = Vec::new();
        for (i, u) in nodes.iter().enumerate() {
            let r = self.rep(u).map_err(err)?;
            match classes.iter_mut().find(|(c, _)| *c == r) {
                Some((_, v)) => v.push(i),
                None => classes.push((r, vec![i])),
            }
        }
        Structured::new_unchecked(poset, classes.into_iter().map(|(_, v)| v).collect())
    }
}

/// Value of a finite term, with lines given by `≈`.
pub fn val_finite(t: &FiniteTerm) -> Result<Structured, StructError> {
    let aut = TermAutomaton::from_finite(t);
    let v = TermValue::new(&aut);
    let nodes = v.nodes(usize::MAX);
    let s = v.materialize(&nodes)?;
    Structured::new(s.poset().clone(), s.lines().to_vec())
}

/// Value of the truncation of a regular term at depth `d`.
pub fn val_truncated(aut: &TermAutomaton, d: usize) -> Result<Structured, StructError> {
    val_finite(&aut.truncate(d))
}
