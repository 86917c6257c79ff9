mod common;

use std::collections::BTreeSet;

use common::*;
use gentree::arrangement::{Arrangement, IsoAnswer};
use gentree::scheme::*;
use gentree::sjt_ojt::oj::{eval_soj, random_soj_term, Side};
use gentree::sjt_ojt::{eval_sj, random_sj_term};
use gentree::structured::Structured;
use gentree::term::{parse_equations, parse_term, Dewey, Sort, TermAutomaton};
use gentree::value::{val_finite, val_truncated, TermValue};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn d(s: &str) -> Dewey {
    Dewey::parse(s).unwrap()
}

fn ext_names(aut: &TermAutomaton, ps: &[Dewey]) -> String {
    let v = TermValue::new(aut);
    ps.iter().map(|p| v.node_name(p).unwrap()).collect()
}

fn axis_names(s: &Scheme) -> String {
    s.axis().finite_word().unwrap().iter().map(|&q| s.states()[q].as_str()).collect()
}

/// Position in the term of a node of the unfolding of `scheme_of_term`.
fn position(x: &Seq) -> Dewey {
    let mut u = x.v0.0.clone();
    for (_, v) in &x.steps {
        u.push(1);
        u.extend(&v.0);
    }
    Dewey(u)
}

/// `J_x`: the down-set of `U^x`, as a tree whose axis is `U^x`.
fn subtree_class(j: &Structured, x: usize) -> String {
    let p = j.poset();
    let below: Vec<usize> = j.lines_topped_by(x).iter().flat_map(|&l| j.line(l).to_vec()).collect();
    let keep: Vec<usize> = p.nodes().filter(|&y| below.iter().any(|&z| p.leq(y, z))).collect();
    if keep.is_empty() {
        return String::new();
    }
    j.restrict(&keep).unwrap().canonical()
}

#[test]
fn worked_example_standard_scheme() {
    let j = val_finite(&parse_term(FIG4_TERM).unwrap()).unwrap();
    let (s, run) = standard_scheme(&j, Kind::Sbj).unwrap();
    // one state per node
    assert_eq!(s.states().len(), 12);
    assert_eq!(axis_names(&s), "fedca");
    assert_eq!(s.describes(&j, &run, 8).unwrap(), Verdict::Holds);
    let e = s.state_id("e").unwrap();
    let Children::Word(w) = s.children(e) else { panic!() };
    let hg: String = w.finite_word().unwrap().iter().map(|&q| s.states()[q].as_str()).collect();
    assert_eq!(hg, "hg");
}

#[test]
fn maximal_ext_frontiers() {
    let aut = TermAutomaton::from_finite(&parse_term(FIG4_TERM).unwrap());
    assert_eq!(ext_names(&aut, &max_ext(&aut, &Dewey::root(), 100).unwrap()), "fedca");
    assert_eq!(ext_names(&aut, &max_ext(&aut, &d("1"), 100).unwrap()), "fed");
    assert_eq!(ext_names(&aut, &max_ext(&aut, &d("1211"), 100).unwrap()), "hg");
    let (s, _) = scheme_of_term(&aut).unwrap();
    assert_eq!(axis_names(&s), "fedca");

    let t1 = parse_equations("t1 = ext(ext(Omega)) . t1").unwrap();
    assert_eq!(max_ext(&t1, &Dewey::root(), 4).unwrap(), vec![d("1"), d("21"), d("221"), d("2221")]);
    assert_eq!(max_ext(&t1, &d("1"), 4).unwrap(), vec![d("1")]);
    assert_eq!(max_ext(&t1, &d("11"), 4).unwrap(), vec![d("11")]);
    assert!(max_ext(&t1, &d("111"), 4).unwrap().is_empty());
    let (s, h) = scheme_of_term(&t1).unwrap();
    assert_eq!(s.states().len(), 2);
    let outer = h[t1.walk(&d("1")).unwrap()].unwrap();
    let inner = h[t1.walk(&d("11")).unwrap()].unwrap();
    assert_eq!(s.axis().iso(&Arrangement::from_expr(gentree::arrangement::Expr::omega(gentree::arrangement::Expr::letter(outer))), 8), IsoAnswer::Iso);
    assert!(matches!(s.children(outer), Children::Word(w) if w.finite_word() == Some(vec![inner])));
    assert!(matches!(s.children(inner), Children::Word(w) if w.finite_word() == Some(vec![])));
    assert!(!s.describes_term(&t1, &h, 8).unwrap().is_violated());
}

const FIG2_TERM: &str = "t = l . r
l = l . p
p = ext_a(ext_c(Omega)) . ext_b(ext_c(Omega) . ext_c(Omega))
r = p . r";

const FIG2_SCHEME: &str = "axis = (a . b)^-w . (a . b)^w
word a = c
word b = c . c
word c = empty";

fn run_by_name(aut: &TermAutomaton, s: &Scheme, swap: Option<(&str, &str)>) -> Vec<Option<usize>> {
    aut.states()
        .iter()
        .map(|st| {
            let n = st.name.as_deref()?;
            let n = match swap {
                Some((a, b)) if n == a => b,
                Some((a, b)) if n == b => a,
                _ => n,
            };
            s.state_id(n).ok()
        })
        .collect()
}

#[test]
fn two_sided_axis_example() {
    let aut = parse_equations(FIG2_TERM).unwrap();
    let s = Scheme::parse(FIG2_SCHEME).unwrap();
    let v = s.describes_term(&aut, &run_by_name(&aut, &s, None), 20).unwrap();
    assert!(!v.is_violated(), "{v:?}");
    let bad = s.describes_term(&aut, &run_by_name(&aut, &s, Some(("a", "b"))), 20).unwrap();
    let Verdict::Violated(viol) = bad else { panic!("{bad:?}") };
    assert_eq!(viol.clause, Clause::Below);
    // the unfolding has the same local shape
    let u = s.unfold(2, 6).unwrap();
    assert_eq!(u.tree.axes().len(), 1);
    for x in u.tree.poset().nodes() {
        let below: usize = u.tree.lines_topped_by(x).iter().map(|&l| u.tree.line(l).len()).sum();
        let want = match s.states()[u.run.r[x]].as_str() {
            "a" => 1,
            "b" => 2,
            _ => 0,
        };
        if u.seqs[x].depth() < 2 {
            assert_eq!(below, want);
        }
    }
}

#[test]
fn ordered_unfolding_central_direction() {
    let s = Scheme::parse("axis = s . r\nminus r = d\nplus r = e\ndir d = x\ndir e = y").unwrap();
    let u = s.unfold(3, 4).unwrap();
    let o = u.ordered.as_ref().unwrap();
    let names: Vec<&str> = o.order().iter().map(|&x| s.states()[u.run.r[x]].as_str()).collect();
    assert_eq!(names, vec!["x", "s", "y", "r"]);
    let node = |st: &str| (0..u.seqs.len()).find(|&x| s.states()[u.run.r[x]] == st).unwrap();
    let (x, sn, y) = (&u.seqs[node("x")], &u.seqs[node("s")], &u.seqs[node("y")]);
    assert!(s.sq_leq(x, sn) && !s.sq_leq(sn, x));
    assert!(s.sq_leq(sn, y) && !s.sq_leq(y, sn));
    assert!(matches!(&x.steps[0].0, Slot::Side(Side::Minus, _)));
    assert_eq!(s.describes_ordered(o, &u.run, 8).unwrap(), Verdict::Holds);
    // a line whose run direction is wrong
    let mut run = u.run.clone();
    let l = u.tree.line_of(node("x"));
    run.rt[l] = Some(s.dir_id("e").unwrap());
    assert!(s.describes_ordered(o, &run, 8).unwrap().is_violated());
}

#[test]
fn quotient_merges_split_state() {
    let base = Scheme::parse("axis = a\nword a = b . c\nword b = c\nword c = empty").unwrap();
    let split = Scheme::parse("axis = a\nword a = b . c\nword b = c2\nword c = empty\nword c2 = empty").unwrap();
    let q = split.quotient(&[0, 1, 2, 2], &[], 4).unwrap();
    assert_eq!(q.to_text(), base.to_text());
    assert_eq!(iso(&base, &split), IsoAnswer::Iso);
    let illegal = Scheme::parse("axis = a\nword a = b\nword b = empty").unwrap();
    assert!(matches!(illegal.quotient(&[0, 0], &[], 4), Err(SchemeError::Merge(..))));
    assert_eq!(base.quotient(&[0, 1, 2], &[], 4).unwrap(), base);
}

#[test]
fn minimal_scheme_of_a_chain() {
    let t = parse_term("ext_v1(ext_v2(ext_v3(ext_v4(ext_v5(Omega)))))").unwrap();
    let j = val_finite(&t).unwrap();
    let classes: BTreeSet<String> = j.poset().nodes().map(|x| subtree_class(&j, x)).collect();
    assert_eq!(classes.len(), 5);
    let m = standard_scheme(&j, Kind::Sbj).unwrap().0.minimize().unwrap();
    assert_eq!(m.states().len(), 5);
    // two equal branches collapse
    let t = parse_term("ext_r(ext_a(ext_c(Omega)) . ext_b(ext_d(Omega)))").unwrap();
    let j = val_finite(&t).unwrap();
    let m = standard_scheme(&j, Kind::Sbj).unwrap().0.minimize().unwrap();
    assert_eq!(m.states().len(), 3);
    assert_eq!(m.minimize().unwrap(), m);
}

#[test]
fn minimize_needs_expressions() {
    let dense = parse_equations("t = ext_x(u)\nu = u . (ext_a(Omega) . u)").unwrap();
    let m = scheme_of_term(&dense).unwrap().0.minimize().unwrap();
    assert_eq!(m.to_text(), "kind sbj\nstate q0 q1\naxis = q1\nword q0 = empty\nword q1 = sh{q0}\n");
    let wild = parse_equations("t = ext_x(u)\nu = (ext_a(Omega) . u) . (ext_b(Omega) . u)").unwrap();
    let (s, h) = scheme_of_term(&wild).unwrap();
    assert!(matches!(s.minimize(), Err(SchemeError::Unsupported(_))));
    assert_eq!(iso(&s, &s), IsoAnswer::Unknown(0));
    assert!(!s.describes_term(&wild, &h, 8).unwrap().is_violated());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unfolding_of_standard_scheme_is_the_tree(seed in any::<u64>(), n in 1usize..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = gentree::sbjt::random_sbj(&mut rng, n);
        let (s, run) = standard_scheme(&j, Kind::Sbj).unwrap();
        prop_assert_eq!(s.describes(&j, &run, 8).unwrap(), Verdict::Holds);
        let u = s.unfold(n, n).unwrap();
        prop_assert_eq!(u.tree.canonical(), j.canonical());
        prop_assert_eq!(s.describes(&u.tree, &u.run, 8).unwrap(), Verdict::Holds);
    }

    #[test]
    fn unfolding_of_unbounded_and_ordered_standard_schemes(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = eval_sj(&random_sj_term(&mut rng, n, Sort::T)).unwrap();
        let (s, run) = standard_scheme(&j, Kind::Sj).unwrap();
        prop_assert_eq!(s.describes(&j, &run, 8).unwrap(), Verdict::Holds);
        let u = s.unfold(n, n).unwrap();
        prop_assert_eq!(u.tree.canonical(), j.canonical());
        prop_assert_eq!(s.describes(&u.tree, &u.run, 8).unwrap(), Verdict::Holds);

        let o = eval_soj(&random_soj_term(&mut rng, n, Sort::T)).unwrap();
        let (s, run) = standard_scheme_ordered(&o).unwrap();
        prop_assert_eq!(s.describes_ordered(&o, &run, 8).unwrap(), Verdict::Holds);
        let u = s.unfold(n, n).unwrap();
        let uo = u.ordered.unwrap();
        prop_assert_eq!(uo.canonical(), o.canonical());
        prop_assert_eq!(s.describes_ordered(&uo, &u.run, 8).unwrap(), Verdict::Holds);
    }

    #[test]
    fn term_scheme_describes_the_value(seed in any::<u64>(), n in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let aut = TermAutomaton::from_finite(&gentree::sbjt::random_term(&mut rng, n));
        let (s, h) = scheme_of_term(&aut).unwrap();
        let j = val_truncated(&aut, 64).unwrap();
        let run = run_on_positions(&aut, &h, &j).unwrap();
        prop_assert_eq!(s.describes(&j, &run, 8).unwrap(), Verdict::Holds);
        prop_assert_eq!(s.describes_term(&aut, &h, 8).unwrap(), Verdict::Holds);
    }

    #[test]
    fn unfolding_agrees_with_the_value(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let aut = random_f_automaton(&mut rng, k);
        let (s, _) = scheme_of_term(&aut).unwrap();
        prop_assert!(!s.describes_term(&aut, &scheme_of_term(&aut).unwrap().1, 8).unwrap().is_violated());
        let v = TermValue::new(&aut);
        let u = s.unfold(3, 5).unwrap();
        let pos: Vec<Dewey> = u.seqs.iter().map(position).collect();
        for p in &pos {
            prop_assert!(v.is_node(p).unwrap());
        }
        for (a, x) in u.seqs.iter().zip(&pos) {
            for (b, y) in u.seqs.iter().zip(&pos) {
                prop_assert_eq!(s.leq(a, b), v.leq(x, y).unwrap(), "{} {}", x, y);
            }
        }
    }

    #[test]
    fn minimal_states_are_subtree_classes(seed in any::<u64>(), n in 1usize..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = gentree::sbjt::random_sbj(&mut rng, n);
        let classes: BTreeSet<String> = j.poset().nodes().map(|x| subtree_class(&j, x)).collect();
        let m = standard_scheme(&j, Kind::Sbj).unwrap().0.minimize().unwrap();
        prop_assert_eq!(m.states().len(), classes.len());
        prop_assert_eq!(m.minimize().unwrap(), m.clone());
        let id: Vec<usize> = (0..m.states().len()).collect();
        prop_assert_eq!(m.quotient(&id, &[], 4).unwrap(), m);
    }

    #[test]
    fn scheme_iso_matches_tree_iso(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gentree::sbjt::random_sbj(&mut rng, 6);
        let b = gentree::sbjt::random_sbj(&mut rng, 6);
        let sa = standard_scheme(&a, Kind::Sbj).unwrap().0;
        let sb = standard_scheme(&b, Kind::Sbj).unwrap().0;
        prop_assert_eq!(iso(&sa, &sb) == IsoAnswer::Iso, brute_iso(&a, &b));
    }

    #[test]
    fn scheme_iso_matches_bounded_unfoldings(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (na, nb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let a = random_scheme(&mut rng, na);
        let b = if rng.gen_bool(0.3) {
            Scheme::parse(&a.to_text()).unwrap().minimize().unwrap()
        } else {
            random_scheme(&mut rng, nb)
        };
        let ans = iso(&a, &b);
        prop_assert!(ans != IsoAnswer::Unknown(0));
        let ua = a.unfold(4, 4).unwrap().tree.canonical();
        let ub = b.unfold(4, 4).unwrap().tree.canonical();
        prop_assert_eq!(ans == IsoAnswer::Iso, ua == ub, "{}\n{}", a.to_text(), b.to_text());
    }
}

