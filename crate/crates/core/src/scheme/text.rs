//! Scheme file format.
//!
//! ```text
//! kind sj            # optional: sbj, sj or soj; inferred otherwise
//! state a b c        # declares states (also declared by first use)
//! axis = (a . b)^-w . (a . b)^w
//! word a = c         # binary schemes
//! mset a = d1:3 d2:w # unbounded schemes
//! minus a = d1       # ordered schemes
//! plus a = d2 . d1
//! dir d1 = c . c
//! ```

use super::{Children, Kind, Scheme, SchemeError};
use crate::arrangement::{parse_expr, Arrangement, Count, Expr, LabelledSet};

fn names_expr(a: &Arrangement<usize>, names: &[String]) -> String {
    match a.expr() {
        Some(e) => e.normalized().relabel(&|&x| names[x].clone()).to_string(),
        None => a.relabel(|&x| names[x].clone()).to_string(),
    }
}

impl Scheme {
    pub fn to_text(&self) -> String {
        let mut out = format!("kind {}\n", self.kind);
        if !self.states.is_empty() {
            out.push_str(&format!("state {}\n", self.states.join(" ")));
        }
        out.push_str(&format!("axis = {}\n", names_expr(&self.axis, &self.states)));
        for (q, c) in self.children.iter().enumerate() {
            let name = &self.states[q];
            match c {
                Children::Word(w) => out.push_str(&format!("word {name} = {}\n", names_expr(w, &self.states))),
                Children::Mset(m) => {
                    let parts: Vec<String> = m.iter().map(|(d, c)| format!("{}:{c}", self.dirs[*d])).collect();
                    out.push_str(&format!("mset {name} = {}\n", parts.join(" ")));
                }
                Children::Sides(m, p) => {
                    out.push_str(&format!("minus {name} = {}\n", names_expr(m, &self.dirs)));
                    out.push_str(&format!("plus {name} = {}\n", names_expr(p, &self.dirs)));
                }
            }
        }
        for (d, w) in self.dir_words.iter().enumerate() {
            out.push_str(&format!("dir {} = {}\n", self.dirs[d], names_expr(w, &self.states)));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Scheme, SchemeError> {
        let mut kind: Option<Kind> = None;
        let mut states: Vec<String> = Vec::new();
        let mut dirs: Vec<String> = Vec::new();
        let mut axis: Option<Expr<String>> = None;
        // (line number, record kind, owner, body)
        let mut records: Vec<(usize, String, String, String)> = Vec::new();
        let intern = |v: &mut Vec<String>, n: &str| {
            if !v.iter().any(|x| x == n) {
                v.push(n.to_string());
            }
        };
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| SchemeError::Parse { line: ln, msg };
            let (head, body) = match line.split_once('=') {
                Some((h, b)) => (h.trim(), Some(b.trim())),
                None => (line, None),
            };
            let mut words = head.split_whitespace();
            let key = words.next().unwrap();
            let owner: Vec<&str> = words.collect();
            match (key, body) {
                ("kind", None) => {
                    kind = Some(match owner.as_slice() {
                        ["sbj"] => Kind::Sbj,
                        ["sj"] => Kind::Sj,
                        ["soj"] => Kind::Soj,
                        _ => return Err(err("kind must be sbj, sj or soj".into())),
                    })
                }
                ("state", None) => owner.iter().for_each(|n| intern(&mut states, n)),
                ("axis", Some(b)) if owner.is_empty() => {
                    if axis.is_some() {
                        return Err(err("axis given twice".into()));
                    }
                    axis = Some(parse_expr(b).map_err(|e| err(e.to_string()))?);
                }
                ("word" | "mset" | "minus" | "plus" | "dir", Some(b)) if owner.len() == 1 => {
                    if key == "dir" {
                        intern(&mut dirs, owner[0]);
                    } else {
                        intern(&mut states, owner[0]);
                    }
                    records.push((ln, key.to_string(), owner[0].to_string(), b.to_string()));
                }
                _ => return Err(err(format!("cannot read `{line}`"))),
            }
        }
        let kind = kind.unwrap_or_else(|| {
            if records.iter().any(|r| r.1 == "minus" || r.1 == "plus") {
                Kind::Soj
            } else if records.iter().any(|r| r.1 == "mset" || r.1 == "dir") {
                Kind::Sj
            } else {
                Kind::Sbj
            }
        });
        // letters of state-valued expressions declare states
        let mut exprs: Vec<(usize, String, String, Expr<String>)> = Vec::new();
        for (ln, key, owner, body) in &records {
            if key == "mset" {
                continue;
            }
            let e = parse_expr(body).map_err(|e| SchemeError::Parse { line: *ln, msg: e.to_string() })?;
            exprs.push((*ln, key.clone(), owner.clone(), e));
        }
        for (_, key, _, e) in &exprs {
            if key == "word" || key == "dir" {
                e.letters().iter().for_each(|n| intern(&mut states, n));
            }
        }
        if let Some(a) = &axis {
            a.letters().iter().for_each(|n| intern(&mut states, n));
        }
        for (_, key, _, e) in &exprs {
            if key == "minus" || key == "plus" {
                e.letters().iter().for_each(|n| intern(&mut dirs, n));
            }
        }
        for (ln, key, _, body) in &records {
            if key == "mset" {
                for part in body.split_whitespace() {
                    let Some((d, _)) = part.split_once(':') else {
                        return Err(SchemeError::Parse { line: *ln, msg: format!("expected `dir:count`, got `{part}`") });
                    };
                    intern(&mut dirs, d);
                }
            }
        }
        let sid = |n: &String| states.iter().position(|s| s == n).unwrap();
        let did = |n: &String| dirs.iter().position(|s| s == n).unwrap();
        let axis = Arrangement::from_expr(axis.unwrap_or(Expr::Empty).relabel(&sid));
        let nq = states.len();
        let mut words = vec![Arrangement::empty(); nq];
        let mut msets = vec![LabelledSet::new(); nq];
        let mut minus = vec![Arrangement::empty(); nq];
        let mut plus = vec![Arrangement::empty(); nq];
        let mut dir_words = vec![Arrangement::empty(); dirs.len()];
        let mut seen = std::collections::HashSet::new();
        for (ln, key, owner, body) in &records {
            if !seen.insert((key.clone(), owner.clone())) {
                return Err(SchemeError::Parse { line: *ln, msg: format!("`{key} {owner}` given twice") });
            }
            let allowed = match key.as_str() {
                "word" => kind == Kind::Sbj,
                "mset" => kind == Kind::Sj,
                "minus" | "plus" => kind == Kind::Soj,
                _ => kind != Kind::Sbj,
            };
            if !allowed {
                return Err(SchemeError::Parse { line: *ln, msg: format!("`{key}` records do not belong in a {kind} scheme") });
            }
            if key == "mset" {
                let q = sid(owner);
                for part in body.split_whitespace() {
                    let (d, c) = part.split_once(':').unwrap();
                    let c = match c {
                        "w" | "ω" => Count::Omega,
                        n => Count::Finite(
                            n.parse().map_err(|_| SchemeError::Parse { line: *ln, msg: format!("bad count `{n}`") })?,
                        ),
                    };
                    msets[q].add(did(&d.to_string()), c);
                }
            }
        }
        for (_, key, owner, e) in exprs {
            match key.as_str() {
                "word" => words[sid(&owner)] = Arrangement::from_expr(e.relabel(&sid)),
                "minus" => minus[sid(&owner)] = Arrangement::from_expr(e.relabel(&did)),
                "plus" => plus[sid(&owner)] = Arrangement::from_expr(e.relabel(&did)),
                _ => dir_words[did(&owner)] = Arrangement::from_expr(e.relabel(&sid)),
            }
        }
        match kind {
            Kind::Sbj => Scheme::sbj(states, axis, words),
            Kind::Sj => Scheme::sj(states, dirs, axis, msets, dir_words),
            Kind::Soj => Scheme::soj(states, dirs, axis, minus.into_iter().zip(plus).collect(), dir_words),
        }
    }
}
