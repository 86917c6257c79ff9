#![allow(dead_code)]

use gentree::order::Poset;
use gentree::structured::Structured;
use gentree::term::{State, Symbol, TermAutomaton, Sort};
use gentree::rankwidth::Graph;
use gentree::scheme::Scheme;
use rand::Rng;
use std::collections::HashSet;

/// The term of the worked SBJ example, reconstructed from its positions.
pub const FIG4_TERM: &str = "(ext_f(Omega) . (ext_e(ext_h(Omega) . ext_g(ext_i(Omega))) . ext_d(ext_k(Omega) . ext_j(ext_m(Omega))))) . (ext_c(ext_b(Omega)) . ext_a(Omega))";

/// Cover relation of the binary join-tree that term denotes, written by hand.
pub const FIG3_COVERS: &str = "f < e < d < c < a\nb < c\nh < g < e\ni < g\nk < j < d\nm < j";

/// Structured isomorphism by backtracking over bijections.
pub fn brute_iso(a: &Structured, b: &Structured) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let pa = a.poset();
    let pb = b.poset();
    let sig = |s: &Structured, x: usize| {
        let p = s.poset();
        (s.depth(x), p.nodes().filter(|&y| p.leq(y, x)).count(), p.nodes().filter(|&y| p.leq(x, y)).count())
    };
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        n: usize,
        a: &Structured,
        b: &Structured,
        pa: &Poset,
        pb: &Poset,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sig: &dyn Fn(&Structured, usize) -> (usize, usize, usize),
    ) -> bool {
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] || sig(a, i) != sig(b, j) {
                continue;
            }
            let ok = (0..i).all(|k| {
                let m = map[k];
                pa.leq(i, k) == pb.leq(j, m)
                    && pa.leq(k, i) == pb.leq(m, j)
                    && (a.line_of(i) == a.line_of(k)) == (b.line_of(j) == b.line_of(m))
            });
            if ok {
                map[i] = j;
                used[j] = true;
                if go(i + 1, n, a, b, pa, pb, map, used, sig) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, n, a, b, pa, pb, &mut map, &mut used, &sig)
}

/// Random automaton over `{., ext, Omega}` with `k` states, rooted at 0.
pub fn random_f_automaton<R: Rng>(rng: &mut R, k: usize) -> TermAutomaton {
    let states = (0..k)
        .map(|_| {
            let roll = rng.gen_range(0..10);
            let (sym, arity) = match roll {
                0 => (Symbol::Omega(Sort::T), 0),
                1..=4 => (Symbol::Ext, 1),
                _ => (Symbol::Dot, 2),
            };
            State { sym, kids: (0..arity).map(|_| rng.gen_range(0..k)).collect(), name: None }
        })
        .collect();
    TermAutomaton::new(states, (0..k).map(|i| format!("q{i}")).collect(), 0)
}

/// Rank as log2 of the size of the row span.
pub fn span_rank(rows: &[u64]) -> usize {
    let mut span: HashSet<u64> = HashSet::from([0]);
    for &r in rows {
        let more: Vec<u64> = span.iter().map(|&s| s ^ r).collect();
        span.extend(more);
    }
    span.len().trailing_zeros() as usize
}

pub fn oracle_cut_rank(g: &Graph, x: u64) -> usize {
    let n = g.len();
    let rows: Vec<u64> = (0..n)
        .filter(|&u| x >> u & 1 == 1)
        .map(|u| (0..n).filter(|&v| x >> v & 1 == 0 && g.adjacent(u, v)).fold(0, |r, v| r | 1 << v))
        .collect();
    span_rank(&rows)
}

/// Trees on leaves `0..n` and inner nodes `n..2n-2` of degree 3, decoded
/// from Prüfer sequences where each inner label occurs twice and no leaf
/// occurs. Every unlabelled-inner layout appears `(n-2)!` times.
pub fn prufer_layouts(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n >= 3);
    let big = 2 * n - 2;
    let mut out = Vec::new();
    let mut seq = Vec::new();
    let mut left = vec![2usize; n - 2];
    fn fill(seq: &mut Vec<usize>, left: &mut Vec<usize>, n: usize, big: usize, out: &mut Vec<Vec<(usize, usize)>>) {
        if seq.len() == big - 2 {
            out.push(decode(seq, big));
            return;
        }
        for i in 0..left.len() {
            if left[i] > 0 {
                left[i] -= 1;
                seq.push(n + i);
                fill(seq, left, n, big, out);
                seq.pop();
                left[i] += 1;
            }
        }
    }
    fn decode(seq: &[usize], big: usize) -> Vec<(usize, usize)> {
        let mut degree = vec![1usize; big];
        for &s in seq {
            degree[s] += 1;
        }
        let mut edges = Vec::new();
        for &s in seq {
            let leaf = (0..big).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..big).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges
    }
    fill(&mut seq, &mut left, n, big, &mut out);
    out
}

pub fn oracle_rankwidth(g: &Graph) -> usize {
    let n = g.len();
    prufer_layouts(n)
        .into_iter()
        .map(|edges| {
            edges
                .iter()
                .map(|&(a, b)| {
                    // leaves reachable from a without crossing a - b
                    let mut seen = HashSet::from([a, b]);
                    let mut stack = vec![a];
                    let mut x = 0u64;
                    while let Some(p) = stack.pop() {
                        if p < n {
                            x |= 1 << p;
                        }
                        for &(c, d) in &edges {
                            for (from, to) in [(c, d), (d, c)] {
                                if from == p && seen.insert(to) {
                                    stack.push(to);
                                }
                            }
                        }
                    }
                    oracle_cut_rank(g, x)
                })
                .max()
                .unwrap()
        })
        .min()
        .unwrap()
}

/// The ordered example term with three choices for the right factor `B`.
pub fn example_term(b: &str) -> String {
    let a = "ext_x(Omega_h, Omega_h)";
    let e = "mkh(ext_y(Omega_h, Omega_h)) x mkh(ext_y'(Omega_h, Omega_h))";
    let f = "mkh(ext_w(Omega_h, Omega_h))";
    let g = "mkh(ext_z(Omega_h, Omega_h))";
    let d = "ext_z'(Omega_h, Omega_h)";
    format!("(({a} . ext_u({e}, {f})) . ext_v({g}, mkh({d}))) . {b}")
}

pub const X_ON_AXIS: &str = "ext_x'(Omega_h, Omega_h)";
pub const X_LEFT: &str = "ext_b(mkh(ext_x'(Omega_h, Omega_h)), Omega_h)";
pub const X_RIGHT: &str = "ext_b(Omega_h, mkh(ext_x'(Omega_h, Omega_h)))";

/// Random binary scheme with finite words.
pub fn random_scheme<R: Rng>(rng: &mut R, n: usize) -> Scheme {
    let mut text = String::from("state");
    for q in 0..n {
        text += &format!(" s{q}");
    }
    let word = |rng: &mut R, lo: usize, hi: usize| {
        let k = rng.gen_range(lo..=hi);
        if k == 0 {
            "empty".to_string()
        } else {
            (0..k).map(|_| format!("s{}", rng.gen_range(0..n))).collect::<Vec<_>>().join(" . ")
        }
    };
    text += &format!("\naxis = {}\n", word(rng, 1, 2));
    for q in 0..n {
        text += &format!("word s{q} = {}\n", word(rng, 0, 2));
    }
    Scheme::parse(&text).unwrap()
}
