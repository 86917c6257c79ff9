//! Unfolding of a scheme: nodes are sequences of arrangement positions.

use std::cmp::Ordering;
use std::fmt;

use super::{Children, Kind, Run, Scheme, SchemeError};
use crate::arrangement::{Arrangement, Count};
use crate::sjt_ojt::oj::{Ordered, Side};
use crate::structured::Structured;
use crate::term::Dewey;

/// How a node is reached from its parent line's top.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// The unique line (binary schemes).
    Line,
    /// Copy `i` of direction `d` in the multiset of the top's state.
    Copy(usize, u64),
    /// Position in the minus or plus arrangement of the top's state.
    Side(Side, Dewey),
}

/// `(v0, s1, v1, ..., sk, vk)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seq {
    pub v0: Dewey,
    pub steps: Vec<(Slot, Dewey)>,
}

impl Seq {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    fn coord(&self, i: usize) -> &Dewey {
        if i == 0 {
            &self.v0
        } else {
            &self.steps[i - 1].1
        }
    }

    pub fn child(&self, s: Slot, v: Dewey) -> Seq {
        let mut steps = self.steps.clone();
        steps.push((s, v));
        Seq { v0: self.v0.clone(), steps }
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v0)?;
        for (s, v) in &self.steps {
            match s {
                Slot::Line => write!(f, "/{v}")?,
                Slot::Copy(d, i) => write!(f, "/d{d}#{i}:{v}")?,
                Slot::Side(Side::Minus, p) => write!(f, "/-{p}:{v}")?,
                Slot::Side(Side::Plus, p) => write!(f, "/+{p}:{v}")?,
            }
        }
        Ok(())
    }
}

/// A finite part of the unfolding with its run.
#[derive(Clone, Debug)]
pub struct Unfolding {
    pub seqs: Vec<Seq>,
    pub tree: Structured,
    /// Present for ordered schemes.
    pub ordered: Option<Ordered>,
    pub run: Run,
}

fn label(a: &Arrangement<usize>, v: &Dewey) -> Option<usize> {
    a.graph().label_at(v).copied()
}

impl Scheme {
    /// State of the node `x` under the constructed run, `None` when `x` is
    /// not a node of the unfolding.
    pub fn state_of(&self, x: &Seq) -> Option<usize> {
        let mut q = label(&self.axis, &x.v0)?;
        for (s, v) in &x.steps {
            let d = self.slot_dir(q, s)?;
            q = match d {
                None => match &self.children[q] {
                    Children::Word(w) => label(w, v)?,
                    _ => return None,
                },
                Some(d) => label(&self.dir_words[d], v)?,
            };
        }
        Some(q)
    }

    /// Direction chosen by slot `s` below a node in state `q`; `Some(None)`
    /// for the single line of a binary scheme.
    fn slot_dir(&self, q: usize, s: &Slot) -> Option<Option<usize>> {
        match (&self.children[q], s) {
            (Children::Word(_), Slot::Line) => Some(None),
            (Children::Mset(m), Slot::Copy(d, i)) => match m.count(d) {
                Count::Omega => Some(Some(*d)),
                Count::Finite(n) if *i < n => Some(Some(*d)),
                _ => None,
            },
            (Children::Sides(m, p), Slot::Side(side, pos)) => {
                let w = if *side == Side::Minus { m } else { p };
                label(w, pos).map(Some)
            }
            _ => None,
        }
    }

    pub fn is_node(&self, x: &Seq) -> bool {
        self.state_of(x).is_some()
    }

    /// Direction of the line containing `x` (its last slot), if any.
    fn line_dir(&self, x: &Seq) -> Option<usize> {
        let (last, _) = x.steps.last()?;
        let parent = Seq { v0: x.v0.clone(), steps: x.steps[..x.steps.len() - 1].to_vec() };
        self.slot_dir(self.state_of(&parent)?, last)?
    }

    /// Tree order of the unfolding on two nodes.
    pub fn leq(&self, x: &Seq, y: &Seq) -> bool {
        let (k, j) = (x.depth(), y.depth());
        k >= j && x.steps[..j].iter().map(|s| &s.0).eq(y.steps[..j].iter().map(|s| &s.0)) && {
            (0..j).all(|i| x.coord(i) == y.coord(i)) && x.coord(j) <= y.coord(j)
        }
    }

    /// The order `⊑` of an ordered unfolding.
    pub fn sq_leq(&self, x: &Seq, y: &Seq) -> bool {
        if self.leq(x, y) {
            return true;
        }
        let (k, j) = (x.depth(), y.depth());
        for l in 0..=k.min(j) {
            if x.coord(l) != y.coord(l) {
                // tops at level l lie on the same line, at different places
                let side_after = |z: &Seq| match z.steps.get(l) {
                    Some((Slot::Side(s, _), _)) => Some(*s),
                    _ => None,
                };
                return if x.coord(l) < y.coord(l) {
                    j == l || side_after(y) == Some(Side::Plus)
                } else {
                    k > l && side_after(x) == Some(Side::Minus)
                };
            }
            if l == k.min(j) {
                break;
            }
            let (sx, sy) = (&x.steps[l].0, &y.steps[l].0);
            if sx != sy {
                return slot_cmp(sx, sy) == Ordering::Less;
            }
        }
        // one is a prefix of the other; the longer one is below
        k > j
    }

    /// Materializes the nodes of depth at most `depth` whose coordinates are
    /// among the first `width` positions of each arrangement's enumerator
    /// (and the first `width` copies of an infinite multiplicity).
    pub fn unfold(&self, depth: usize, width: usize) -> Result<Unfolding, SchemeError> {
        if width == 0 {
            return Err(SchemeError::Bound);
        }
        let window = |a: &Arrangement<usize>| a.graph().window(None, width);
        let mut seqs: Vec<Seq> = window(&self.axis).into_iter().map(|v| Seq { v0: v, steps: vec![] }).collect();
        let mut lines: Vec<Vec<usize>> = Vec::new();
        if !seqs.is_empty() {
            lines.push((0..seqs.len()).collect());
        }
        let mut state = Vec::new();
        for x in &seqs {
            state.push(self.state_of(x).unwrap());
        }
        let mut i = 0;
        while i < seqs.len() {
            let (x, q) = (seqs[i].clone(), state[i]);
            i += 1;
            if x.depth() >= depth {
                continue;
            }
            let mut new_lines: Vec<(Slot, &Arrangement<usize>)> = Vec::new();
            match &self.children[q] {
                Children::Word(w) => new_lines.push((Slot::Line, w)),
                Children::Mset(m) => {
                    for (d, c) in m.iter() {
                        let n = match c {
                            Count::Finite(n) => n.min(width as u64),
                            Count::Omega => width as u64,
                        };
                        for c in 0..n {
                            new_lines.push((Slot::Copy(*d, c), &self.dir_words[*d]));
                        }
                    }
                }
                Children::Sides(m, p) => {
                    for (side, w) in [(Side::Minus, m), (Side::Plus, p)] {
                        for pos in window(w) {
                            let d = label(w, &pos).unwrap();
                            new_lines.push((Slot::Side(side, pos), &self.dir_words[d]));
                        }
                    }
                }
            }
            for (slot, w) in new_lines {
                let line: Vec<usize> = window(w)
                    .into_iter()
                    .map(|v| {
                        seqs.push(x.child(slot.clone(), v.clone()));
                        state.push(label(w, &v).unwrap());
                        seqs.len() - 1
                    })
                    .collect();
                if !line.is_empty() {
                    lines.push(line);
                }
            }
        }
        let names: Vec<String> = seqs.iter().map(|s| s.to_string()).collect();
        let tree = Structured::from_parts(names, |a, b| self.leq(&seqs[a], &seqs[b]), lines)?;
        let mut rt = vec![None; tree.lines().len()];
        let mut side = vec![None; tree.lines().len()];
        for (x, s) in seqs.iter().enumerate() {
            let l = tree.line_of(x);
            if self.kind != Kind::Sbj {
                rt[l] = self.line_dir(s);
            }
            if let Some((Slot::Side(sd, _), _)) = s.steps.last() {
                side[l] = Some(*sd);
            }
        }
        let ordered = if self.kind == Kind::Soj {
            let mut order: Vec<usize> = (0..seqs.len()).collect();
            order.sort_by(|&a, &b| {
                if a == b {
                    Ordering::Equal
                } else if self.sq_leq(&seqs[a], &seqs[b]) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            });
            Some(Ordered::new_tree(tree.clone(), order, side)?)
        } else {
            None
        };
        Ok(Unfolding { seqs, tree, ordered, run: Run { r: state, rt } })
    }
}

/// Order on slots below one node: minus before plus, then by position.
fn slot_cmp(a: &Slot, b: &Slot) -> Ordering {
    match (a, b) {
        (Slot::Side(s, p), Slot::Side(t, q)) => (s, p).cmp(&(t, q)),
        _ => a.cmp(b),
    }
}
