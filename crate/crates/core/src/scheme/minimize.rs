//! Minimal schemes by partition refinement, and isomorphism of regular
//! trees through them.

use std::collections::BTreeMap;

use super::{Children, Scheme, SchemeError};
use crate::arrangement::{Arrangement, IsoAnswer, LabelledSet, Nf};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Sig {
    Word(Nf<usize>),
    Mset(LabelledSet<usize>),
    Sides(Nf<usize>, Nf<usize>),
}

fn nf(a: &Arrangement<usize>, map: &[usize]) -> Nf<usize> {
    a.expr().expect("checked by minimize").relabel(&|&x| map[x]).normal_form()
}

/// Ranks of `keys` among their distinct values.
fn ranks<K: Ord + Clone>(keys: &[K]) -> (Vec<usize>, usize) {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    let index: BTreeMap<&K, usize> = sorted.iter().enumerate().map(|(i, k)| (k, i)).collect();
    (keys.iter().map(|k| index[k]).collect(), sorted.len())
}

impl Scheme {
    /// Restriction to the states and directions reachable from the axis.
    pub fn trim(&self) -> Scheme {
        let (sq, sd) = self.reachable();
        let renum = |keep: &[bool]| {
            let mut next = 0;
            keep.iter()
                .map(|&k| {
                    next += k as usize;
                    if k {
                        next - 1
                    } else {
                        usize::MAX
                    }
                })
                .collect::<Vec<usize>>()
        };
        let (mq, md) = (renum(&sq), renum(&sd));
        let kids = (0..self.states.len()).filter(|&q| sq[q]).map(|q| self.map_children(&self.children[q], &mq, &md));
        Scheme {
            kind: self.kind,
            states: (0..self.states.len()).filter(|&q| sq[q]).map(|q| self.states[q].clone()).collect(),
            dirs: (0..self.dirs.len()).filter(|&d| sd[d]).map(|d| self.dirs[d].clone()).collect(),
            axis: self.axis.relabel(|&q| mq[q]),
            children: kids.collect(),
            dir_words: (0..self.dirs.len()).filter(|&d| sd[d]).map(|d| self.dir_words[d].relabel(|&q| mq[q])).collect(),
        }
    }

    /// The canonical minimal scheme: trimmed, states merged when their
    /// unfoldings are isomorphic, states named `q0, q1, ...` and directions
    /// `d0, d1, ...` by the sorted refinement signatures. Requires every
    /// arrangement to have an expression.
    pub fn minimize(&self) -> Result<Scheme, SchemeError> {
        let t = self.trim();
        let mut arrs = vec![&t.axis];
        for c in &t.children {
            match c {
                Children::Word(w) => arrs.push(w),
                Children::Mset(_) => {}
                Children::Sides(m, p) => arrs.extend([m, p]),
            }
        }
        arrs.extend(&t.dir_words);
        if arrs.iter().any(|a| a.expr().is_none()) {
            return Err(SchemeError::Unsupported("an arrangement has no expression form".into()));
        }
        let (nq, nd) = (t.states.len(), t.dirs.len());
        let (mut bq, mut bd) = (vec![0usize; nq], vec![0usize; nd]);
        let (mut cq, mut cd) = (nq.min(1), nd.min(1));
        loop {
            let kq: Vec<(usize, Sig)> = (0..nq)
                .map(|q| {
                    let sig = match &t.children[q] {
                        Children::Word(w) => Sig::Word(nf(w, &bq)),
                        Children::Mset(m) => Sig::Mset(m.relabel(|&d| bd[d])),
                        Children::Sides(m, p) => Sig::Sides(nf(m, &bd), nf(p, &bd)),
                    };
                    (bq[q], sig)
                })
                .collect();
            let kd: Vec<(usize, Nf<usize>)> = (0..nd).map(|d| (bd[d], nf(&t.dir_words[d], &bq))).collect();
            let (nbq, ncq) = ranks(&kq);
            let (nbd, ncd) = ranks(&kd);
            let stable = ncq == cq && ncd == cd;
            (bq, bd, cq, cd) = (nbq, nbd, ncq, ncd);
            if stable {
                break;
            }
        }
        let mut m = t.quotient(&bq, &bd, 0)?;
        m.states = (0..cq).map(|i| format!("q{i}")).collect();
        m.dirs = (0..cd).map(|i| format!("d{i}")).collect();
        let norm = |a: &Arrangement<usize>| Arrangement::from_expr(a.expr().unwrap().normalized());
        m.axis = norm(&m.axis);
        for c in &mut m.children {
            match c {
                Children::Word(w) => *w = norm(w),
                Children::Mset(_) => {}
                Children::Sides(a, b) => {
                    *a = norm(a);
                    *b = norm(b);
                }
            }
        }
        for w in &mut m.dir_words {
            *w = norm(w);
        }
        Ok(m)
    }
}

/// Isomorphism of the trees described by two schemes, via their canonical
/// minimal schemes. Exact when all arrangements are finite words; otherwise
/// equal canonical forms still prove isomorphism and anything else is unknown.
pub fn iso(a: &Scheme, b: &Scheme) -> IsoAnswer {
    if a.kind != b.kind {
        return IsoAnswer::NotIso;
    }
    let (Ok(ma), Ok(mb)) = (a.minimize(), b.minimize()) else {
        return IsoAnswer::Unknown(0);
    };
    if ma.to_text() == mb.to_text() {
        IsoAnswer::Iso
    } else if ma.is_finite_word() && mb.is_finite_word() {
        IsoAnswer::NotIso
    } else {
        IsoAnswer::Unknown(0)
    }
}
