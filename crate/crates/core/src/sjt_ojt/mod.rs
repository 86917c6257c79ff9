//! Structured join-trees of unbounded degree and forests (signature F′),
//! and their ordered counterparts (signature F″) in [`oj`].

pub mod oj;

use rand::Rng;

use crate::order::NodeId;
use crate::sbjt::{op_concat, op_ext};
use crate::structured::{StructError, Structured};
use crate::term::{Dewey, FiniteTerm, Sort, Symbol};

/// Renames both sides with `L:` / `R:` when their node names overlap.
pub(crate) fn disjoint(a: &Structured, b: &Structured) -> (Structured, Structured) {
    if a.poset().names().iter().any(|n| b.poset().id(n).is_ok()) {
        (a.rename(|n| format!("L:{n}")), b.rename(|n| format!("R:{n}")))
    } else {
        (a.clone(), b.clone())
    }
}

/// Disjoint union of two structured forests.
pub fn sj_union(a: &Structured, b: &Structured) -> Result<Structured, StructError> {
    let (a, b) = disjoint(a, b);
    let n1 = a.len();
    let mut names = a.poset().names().to_vec();
    names.extend(b.poset().names().iter().cloned());
    let mut lines = a.lines().to_vec();
    lines.extend(b.lines().iter().map(|l| l.iter().map(|&x| x + n1).collect::<Vec<NodeId>>()));
    Structured::from_parts(
        names,
        |x, y| match (x < n1, y < n1) {
            (true, true) => a.poset().leq(x, y),
            (false, false) => b.poset().leq(x - n1, y - n1),
            _ => false,
        },
        lines,
    )
}

/// Value of an F′ term computed with the operations; unnamed nodes get
/// their position as name.
pub fn eval_sj(t: &FiniteTerm) -> Result<Structured, StructError> {
    fn go(t: &FiniteTerm, at: &Dewey) -> Result<Structured, StructError> {
        let kid = |i: usize| go(&t.kids[i], &at.child(i as u8 + 1));
        match (&t.sym, t.kids.len()) {
            (Symbol::Omega(Sort::T | Sort::F), 0) => Ok(Structured::empty()),
            (Symbol::Dot, 2) => op_concat(&kid(0)?, &kid(1)?),
            (Symbol::Union, 2) => sj_union(&kid(0)?, &kid(1)?),
            (Symbol::Mkf, 1) => kid(0),
            (Symbol::Ext, 1) => op_ext(&kid(0)?, &t.name.clone().unwrap_or_else(|| at.to_string())),
            (s, k) => Err(StructError::Parse { line: 0, msg: format!("`{s}` with {k} arguments is not in F'") }),
        }
    }
    go(t, &Dewey::root())
}

/// Random well-sorted F′ term of sort `sort` with exactly `n` named ext nodes.
pub fn random_sj_term<R: Rng>(rng: &mut R, n: usize, sort: Sort) -> FiniteTerm {
    fn go<R: Rng>(rng: &mut R, n: usize, sort: Sort, next: &mut usize) -> FiniteTerm {
        match sort {
            Sort::T => {
                if n == 0 {
                    return FiniteTerm::omega();
                }
                if rng.gen_bool(0.5) {
                    let name = format!("x{next}");
                    *next += 1;
                    FiniteTerm::ext_named(&name, go(rng, n - 1, Sort::F, next))
                } else {
                    let k = rng.gen_range(0..=n);
                    let a = go(rng, k, Sort::T, next);
                    FiniteTerm::dot(a, go(rng, n - k, Sort::T, next))
                }
            }
            _ => {
                if n == 0 && rng.gen_bool(0.7) {
                    return FiniteTerm::omega_of(Sort::F);
                }
                if rng.gen_bool(0.5) {
                    FiniteTerm::new(Symbol::Mkf, vec![go(rng, n, Sort::T, next)])
                } else {
                    let k = rng.gen_range(0..=n);
                    let a = go(rng, k, Sort::F, next);
                    FiniteTerm::new(Symbol::Union, vec![a, go(rng, n - k, Sort::F, next)])
                }
            }
        }
    }
    go(rng, n, sort, &mut 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;
    use crate::value::val_finite;

    #[test]
    fn ext_of_forest() {
        let t = parse_term("ext_r(mkf(ext_a(Omega_f)) U+ mkf(ext_b(Omega_f)) U+ mkf(ext_c(Omega_f)))").unwrap();
        let s = eval_sj(&t).unwrap();
        let r = s.poset().id("r").unwrap();
        assert_eq!(s.poset().degree(r), 3);
        assert_eq!(s.lines_topped_by(r).len(), 3);
        assert!(s.same_as(&val_finite(&t).unwrap()));
        let single = eval_sj(&parse_term("ext_u(Omega_f)").unwrap()).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn mkf_keeps_the_triple() {
        let t = parse_term("ext_b(Omega_f) . ext_a(Omega_f)").unwrap();
        let m = FiniteTerm::new(Symbol::Mkf, vec![t.clone()]);
        assert!(eval_sj(&m).unwrap().same_as(&eval_sj(&t).unwrap()));
        let u = parse_term("mkf(ext_a(Omega_f)) U+ mkf(ext_b(Omega_f))").unwrap();
        assert_eq!(eval_sj(&u).unwrap().axes().len(), 2);
    }
}
