//! Structured binary join-trees: the algebra `•`, `ext`, `Ω`, greedy
//! structurings, the parity encoding `S(J)` and term synthesis.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::order::{Laminar, NodeId, OrderError, Poset};
use crate::structured::{StructError, Structured};
use crate::term::{Dewey, FiniteTerm, Symbol};

fn clash(a: &Structured, b: &Structured) -> bool {
    a.poset().names().iter().any(|n| b.poset().id(n).is_ok())
}

fn require_tree(j: &Structured) -> Result<(), StructError> {
    if j.is_empty() || j.is_join_tree() {
        Ok(())
    } else {
        Err(StructError::NotJoinTree)
    }
}

/// `J1 • J2`: everything of `J1` goes below the axis of `J2`, and the two
/// axes merge. Names are prefixed with `L:` / `R:` when they clash.
pub fn op_concat(j1: &Structured, j2: &Structured) -> Result<Structured, StructError> {
    require_tree(j1)?;
    require_tree(j2)?;
    if j1.is_empty() {
        return Ok(j2.clone());
    }
    if j2.is_empty() {
        return Ok(j1.clone());
    }
    let (j1, j2) = if clash(j1, j2) {
        (j1.rename(|n| format!("L:{n}")), j2.rename(|n| format!("R:{n}")))
    } else {
        (j1.clone(), j2.clone())
    };
    let n1 = j1.len();
    let a1 = j1.axis().unwrap();
    let a2 = j2.axis().unwrap();
    let mut in_a2 = vec![false; j2.len()];
    for &x in j2.line(a2) {
        in_a2[x] = true;
    }
    let mut names = j1.poset().names().to_vec();
    names.extend(j2.poset().names().iter().cloned());
    let leq = |x: NodeId, y: NodeId| match (x < n1, y < n1) {
        (true, true) => j1.poset().leq(x, y),
        (false, false) => j2.poset().leq(x - n1, y - n1),
        (true, false) => in_a2[y - n1],
        (false, true) => false,
    };
    let mut lines: Vec<Vec<NodeId>> = Vec::new();
    let mut axis: Vec<NodeId> = j1.line(a1).to_vec();
    axis.extend(j2.line(a2).iter().map(|&x| x + n1));
    lines.push(axis);
    for (l, line) in j1.lines().iter().enumerate() {
        if l != a1 {
            lines.push(line.clone());
        }
    }
    for (l, line) in j2.lines().iter().enumerate() {
        if l != a2 {
            lines.push(line.iter().map(|&x| x + n1).collect());
        }
    }
    Structured::from_parts(names, leq, lines)
}

/// `ext_u(J)`: a new root `u` forming the axis; every old axis gets top `u`.
/// Also used on forests.
pub fn op_ext(j: &Structured, u: &str) -> Result<Structured, StructError> {
    if j.poset().id(u).is_ok() {
        return Err(OrderError::DuplicateNode(u.to_string()).into());
    }
    let n = j.len();
    let mut names = j.poset().names().to_vec();
    names.push(u.to_string());
    let mut lines = j.lines().to_vec();
    lines.push(vec![n]);
    Structured::from_parts(names, |x, y| y == n || (x < n && y < n && j.poset().leq(x, y)), lines)
}

/// Splits a join-tree whose axis is `A ⊎ A'` with `|A| = k` into `J1 • J2`:
/// `J1` is everything below the `k`-th axis node.
pub fn split(j: &Structured, k: usize) -> Result<(Structured, Structured), StructError> {
    require_tree(j)?;
    let Some(a) = j.axis() else {
        return Ok((Structured::empty(), Structured::empty()));
    };
    let axis = j.line(a);
    let k = k.min(axis.len());
    let left: Vec<NodeId> = if k == 0 { vec![] } else { j.poset().down_set(&[axis[k - 1]]) };
    let mut in_left = vec![false; j.len()];
    for &x in &left {
        in_left[x] = true;
    }
    let right: Vec<NodeId> = j.poset().nodes().filter(|&x| !in_left[x]).collect();
    Ok((j.restrict(&left)?, j.restrict(&right)?))
}

/// Evaluates a finite term over `{•, ext, Ω}` with the algebra operations.
/// Unnamed `ext` nodes are named by their position, as in [`crate::value`].
pub fn eval(t: &FiniteTerm) -> Result<Structured, StructError> {
    fn go(t: &FiniteTerm, at: &Dewey) -> Result<Structured, StructError> {
        match (&t.sym, t.kids.as_slice()) {
            (Symbol::Omega(_), []) => Ok(Structured::empty()),
            (Symbol::Dot, [a, b]) => op_concat(&go(a, &at.child(1))?, &go(b, &at.child(2))?),
            (Symbol::Ext, [a]) => {
                let name = t.name.clone().unwrap_or_else(|| at.to_string());
                op_ext(&go(a, &at.child(1))?, &name)
            }
            (s, _) => Err(StructError::Parse { line: 0, msg: format!("symbol `{s}` is not in {{., ext, Omega}}") }),
        }
    }
    go(t, &Dewey::root())
}

/// Greedy structuring of a join-tree: each new line is a maximal line through
/// the first uncovered node, descending through the child that comes first
/// in `enumeration`.
pub fn structure_tree(p: &Poset, enumeration: &[NodeId]) -> Result<Structured, StructError> {
    if !p.is_empty() && !p.is_join_tree() {
        return Err(StructError::NotJoinTree);
    }
    let n = p.len();
    let mut rank = vec![usize::MAX; n];
    for (i, &x) in enumeration.iter().enumerate() {
        if x >= n || rank[x] != usize::MAX {
            return Err(StructError::Parse { line: 0, msg: format!("enumeration entry {x} invalid or repeated") });
        }
        rank[x] = i;
    }
    if let Some(x) = (0..n).find(|&x| rank[x] == usize::MAX) {
        return Err(StructError::Parse { line: 0, msg: format!("enumeration misses `{}`", p.name(x)) });
    }
    let mut covered = vec![false; n];
    let mut lines = Vec::new();
    for &x in enumeration {
        if covered[x] {
            continue;
        }
        let mut line = vec![x];
        let mut cur = x;
        while let Some(q) = p.parent(cur) {
            if covered[q] {
                break;
            }
            line.push(q);
            cur = q;
        }
        let mut cur = x;
        while let Some(&c) = p.lower_covers(cur).iter().min_by_key(|&&c| rank[c]) {
            line.push(c);
            cur = c;
        }
        for &y in &line {
            covered[y] = true;
        }
        lines.push(line);
    }
    Structured::new(p.clone(), lines)
}

/// Greedy structuring of a binary join-tree; the result is an SBJ-tree.
pub fn structure(p: &Poset, enumeration: &[NodeId]) -> Result<Structured, StructError> {
    if let Some(x) = p.nodes().find(|&x| p.degree(x) > 2) {
        return Err(StructError::NotBinary(p.name(x).into(), p.degree(x)));
    }
    let s = structure_tree(p, enumeration)?;
    s.check_sbj()?;
    Ok(s)
}

/// `S(J)`: the order plus the nodes at even and odd depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SEncoding {
    pub poset: Poset,
    pub n0: Vec<NodeId>,
    pub n1: Vec<NodeId>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SViolation {
    #[error("N0 and N1 do not partition the nodes (at `{0}`)")]
    NotPartition(String),
    #[error("N{set} is not laminar: `{x}` and `{y}` below `{z}`")]
    NotLaminar { set: u8, x: String, y: String, z: String },
    #[error("component {comp:?} of N{set} has no top in N{other}", other = 1 - set)]
    NoTop { set: u8, comp: Vec<String> },
    #[error("{0} components of N0 have no top (need exactly one per tree)")]
    AxisCount(usize),
    #[error(transparent)]
    Struct(#[from] StructError),
}

pub fn encode_s(j: &Structured) -> SEncoding {
    let (mut n0, mut n1) = (vec![], vec![]);
    for x in j.poset().nodes() {
        if j.depth(x) % 2 == 0 {
            n0.push(x)
        } else {
            n1.push(x)
        }
    }
    SEncoding { poset: j.fgs(), n0, n1 }
}

/// Checks the parity-encoding conditions directly and rebuilds the
/// structuring from the components of `N0` and `N1`.
pub fn validate_s(e: &SEncoding) -> Result<Structured, SViolation> {
    let p = &e.poset;
    if !p.is_empty() && !p.is_join_tree() {
        return Err(StructError::NotJoinTree.into());
    }
    let mut side = vec![2u8; p.len()];
    for (s, set) in [(0u8, &e.n0), (1u8, &e.n1)] {
        for &x in set.iter() {
            if x >= p.len() || side[x] != 2 {
                return Err(SViolation::NotPartition(p.names().get(x).cloned().unwrap_or_else(|| x.to_string())));
            }
            side[x] = s;
        }
    }
    if let Some(x) = side.iter().position(|&s| s == 2) {
        return Err(SViolation::NotPartition(p.name(x).into()));
    }
    let names = |c: &[NodeId]| c.iter().map(|&x| p.name(x).to_string()).collect::<Vec<_>>();
    let mut lines = Vec::new();
    let mut topless = 0;
    for (s, set) in [(0u8, &e.n0), (1u8, &e.n1)] {
        let comps = match p.laminar_components(set) {
            Laminar::Components(c) => c,
            Laminar::NotLaminar { x, y, z } => {
                return Err(SViolation::NotLaminar {
                    set: s,
                    x: p.name(x).into(),
                    y: p.name(y).into(),
                    z: p.name(z).into(),
                })
            }
        };
        for c in comps {
            match p.parent(*c.last().unwrap()) {
                Some(t) if side[t] != s => {}
                None if s == 0 => topless += 1,
                _ => return Err(SViolation::NoTop { set: s, comp: names(&c) }),
            }
            lines.push(c);
        }
    }
    // top-chains are finite here; one topless component per tree remains
    let trees = p.maximal().len();
    if topless != trees {
        return Err(SViolation::AxisCount(topless));
    }
    Ok(Structured::new(p.clone(), lines)?)
}

/// A term whose value is `J`: each line becomes a right comb of
/// `ext_x(t_x)` in increasing order, `t_x` being the term of the line topped by `x`.
pub fn synthesize(j: &Structured) -> FiniteTerm {
    fn line_term(j: &Structured, l: usize) -> FiniteTerm {
        let mut parts: Vec<FiniteTerm> = j
            .line(l)
            .iter()
            .map(|&x| {
                let sub = match j.lines_topped_by(x).first() {
                    Some(&m) => line_term(j, m),
                    None => FiniteTerm::omega(),
                };
                FiniteTerm::ext_named(j.name(x), sub)
            })
            .collect();
        let mut acc = parts.pop().unwrap();
        while let Some(p) = parts.pop() {
            acc = FiniteTerm::dot(p, acc);
        }
        acc
    }
    match j.axis() {
        Some(a) => line_term(j, a),
        None => FiniteTerm::omega(),
    }
}

/// Random term over `{•, ext, Ω}` with exactly `n` named `ext` nodes `x0, x1, …`.
pub fn random_term<R: Rng>(rng: &mut R, n: usize) -> FiniteTerm {
    fn go<R: Rng>(rng: &mut R, n: usize, next: &mut usize) -> FiniteTerm {
        if n == 0 {
            return if rng.gen_bool(0.8) {
                FiniteTerm::omega()
            } else {
                FiniteTerm::dot(FiniteTerm::omega(), FiniteTerm::omega())
            };
        }
        if rng.gen_bool(0.45) {
            let name = format!("x{next}");
            *next += 1;
            FiniteTerm::ext_named(&name, go(rng, n - 1, next))
        } else {
            let k = rng.gen_range(0..=n);
            let a = go(rng, k, next);
            FiniteTerm::dot(a, go(rng, n - k, next))
        }
    }
    go(rng, n, &mut 0)
}

/// Random SBJ-tree with `n` nodes (the value of a random term).
pub fn random_sbj<R: Rng>(rng: &mut R, n: usize) -> Structured {
    crate::value::val_finite(&random_term(rng, n)).expect("values of terms are valid")
}

/// Random binary join-tree with `n ≥ 1` nodes named `v0, v1, …` (`v0` the root).
pub fn random_binary_tree<R: Rng>(rng: &mut R, n: usize) -> Poset {
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut kids = vec![0usize];
    for i in 1..n {
        let open: Vec<usize> = (0..i).filter(|&p| kids[p] < 2).collect();
        let p = *open.choose(rng).unwrap();
        kids[p] += 1;
        parent.push(Some(p));
        kids.push(0);
    }
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i, parent[i].unwrap())).collect();
    Poset::from_pairs(names, &pairs).expect("a tree order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;
    use crate::value::val_finite;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(u: &str) -> Structured {
        op_ext(&Structured::empty(), u).unwrap()
    }

    #[test]
    fn neutral_and_chain() {
        let a = single("a");
        assert_eq!(op_concat(&a, &Structured::empty()).unwrap(), a);
        assert_eq!(op_concat(&Structured::empty(), &a).unwrap(), a);
        let ab = op_concat(&a, &single("b")).unwrap();
        let p = ab.poset();
        assert!(p.lt(p.id("a").unwrap(), p.id("b").unwrap()));
        assert_eq!(ab.lines().len(), 1);
        // clash gets namespaced
        let aa = op_concat(&a, &a).unwrap();
        assert!(aa.poset().id("L:a").is_ok() && aa.poset().id("R:a").is_ok());
    }

    #[test]
    fn ext_pushes_axis_down() {
        let ab = op_concat(&single("a"), &single("b")).unwrap();
        let u = op_ext(&ab, "u").unwrap();
        let id = |n| u.poset().id(n).unwrap();
        assert_eq!(u.lines().len(), 2);
        assert_eq!(u.top(u.line_of(id("a"))), Some(id("u")));
        assert_eq!(u.depth(id("a")), 1);
        assert!(op_ext(&u, "a").is_err());
        // unary chain with singleton lines
        let t = parse_term("ext_c(ext_b(ext_a(Omega)))").unwrap();
        let s = eval(&t).unwrap();
        assert_eq!(s.lines().len(), 3);
        assert!(s.poset().is_line(&[0, 1, 2]));
    }

    #[test]
    fn structure_examples() {
        let chain = Poset::parse("a < b < c").unwrap();
        let s = structure(&chain, &[2, 1, 0]).unwrap();
        assert_eq!(s.lines().len(), 1);
        // full binary tree of height 2, enumeration left first
        let p = Poset::parse("ll < l\nlr < l\nrl < r\nrr < r\nl < t\nr < t").unwrap();
        let order: Vec<NodeId> = ["t", "l", "ll", "lr", "r", "rl", "rr"].iter().map(|n| p.id(n).unwrap()).collect();
        let s = structure(&p, &order).unwrap();
        assert_eq!(s.lines().len(), 4);
        let axis: Vec<&str> = s.line(s.axis().unwrap()).iter().map(|&x| s.name(x)).collect();
        assert_eq!(axis, vec!["ll", "l", "t"]);
        assert!(validate_s(&encode_s(&s)).is_ok());
        // not binary
        let star = Poset::parse("a < r\nb < r\nc < r").unwrap();
        assert!(matches!(structure(&star, &[3, 0, 1, 2]), Err(StructError::NotBinary(..))));
    }

    #[test]
    fn s_encoding() {
        let chain = structure(&Poset::parse("a < b").unwrap(), &[0, 1]).unwrap();
        let e = encode_s(&chain);
        assert_eq!((e.n0.len(), e.n1.len()), (2, 0));
        let p = Poset::parse("a < b\nc < b").unwrap();
        let s = structure(&p, &[0, 1, 2]).unwrap();
        let e = encode_s(&s);
        assert_eq!(validate_s(&e).unwrap().canonical(), s.canonical());
        let swapped = SEncoding { poset: e.poset.clone(), n0: e.n1.clone(), n1: e.n0.clone() };
        assert!(validate_s(&swapped).is_err());
    }

    #[test]
    fn synthesize_axis_word() {
        let j0 = val_finite(&parse_term("((ext_f(Omega) . ext_e(Omega)) . ext_d(Omega)) . (ext_c(Omega) . ext_a(Omega))").unwrap())
            .unwrap();
        let t = synthesize(&j0);
        assert_eq!(t.to_string(), "(ext_f(Omega) . (ext_e(Omega) . (ext_d(Omega) . (ext_c(Omega) . ext_a(Omega)))))");
        assert_eq!(val_finite(&t).unwrap().canonical(), j0.canonical());
        assert_eq!(synthesize(&single("a")).to_string(), "ext_a(Omega)");
    }

    #[test]
    fn split_then_concat() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let j = random_sbj(&mut rng, 8);
            let k = j.axis().map(|a| j.line(a).len()).unwrap_or(0);
            for i in 0..=k {
                let (a, b) = split(&j, i).unwrap();
                assert_eq!(op_concat(&a, &b).unwrap().canonical(), j.canonical());
            }
        }
    }
}
