mod common;

use common::*;
use gentree::order::Poset;
use gentree::sbjt::*;
use gentree::structured::Structured;
use gentree::term::{parse_equations, parse_term, Dewey};
use gentree::value::{val_finite, val_truncated, TermValue};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn d(s: &str) -> Dewey {
    Dewey::parse(s).unwrap()
}

fn names(s: &Structured, line: &[usize]) -> String {
    line.iter().map(|&x| s.name(x)).collect()
}

#[test]
fn worked_example_lines_and_order() {
    let t = parse_term(FIG4_TERM).unwrap();
    let j = val_finite(&t).unwrap();
    j.check_sbj().unwrap();
    let axis = j.line(j.axis().unwrap());
    assert_eq!(names(&j, axis), "fedca");
    let mut others: Vec<String> = (0..j.lines().len()).filter(|&l| Some(l) != j.axis()).map(|l| names(&j, j.line(l))).collect();
    others.sort();
    // lines are listed bottom to top
    assert_eq!(others, vec!["b", "hg", "i", "kj", "m"]);
    let p = j.poset();
    let id = |n| p.id(n).unwrap();
    assert!(p.lt(id("i"), id("d")));
    assert!(p.incomparable(id("i"), id("j")));
    for (u, v) in [("i", "g"), ("g", "e"), ("m", "j"), ("j", "d"), ("f", "e"), ("e", "d"), ("d", "c")] {
        assert!(p.lt(id(u), id(v)), "{u} < {v}");
    }
    // the forgetful image is the hand-drawn binary join-tree
    let fig3 = Poset::parse(FIG3_COVERS).unwrap();
    assert_eq!(fig3.len(), p.len());
    for x in p.nodes() {
        for y in p.nodes() {
            assert_eq!(p.leq(x, y), fig3.leq(fig3.id(p.name(x)).unwrap(), fig3.id(p.name(y)).unwrap()));
        }
    }
    // positional view of the same term
    let aut = gentree::term::TermAutomaton::from_finite(&t);
    let v = TermValue::new(&aut);
    let class: Vec<Dewey> = ["", "1", "2", "12"].iter().map(|s| d(s)).collect();
    for u in &class {
        assert_eq!(v.rep(u).unwrap(), Dewey::root());
    }
    assert!(v.equiv(&d("11"), &d("22")).unwrap());
    assert!(v.equiv(&d("1221"), &d("12212")).unwrap());
    assert!(v.equiv(&d("12211"), &d("12212")).unwrap());
    assert_eq!(v.node_name(&d("211")).unwrap(), "b");
}

#[test]
fn infinite_comb_incomparable_pair() {
    let t1 = parse_equations("t1 = ext(ext(Omega)) . t1").unwrap();
    let v = TermValue::new(&t1);
    assert!(v.incomparable(&d("11"), &d("2211")).unwrap());
    assert!(v.is_node(&d("221")).unwrap());
    assert!(v.lt(&d("1"), &d("21")).unwrap());
    assert!(v.lt(&d("11"), &d("21")).unwrap());
}

#[test]
fn self_concatenation_is_empty() {
    let t0 = parse_equations("t0 = t0 . t0").unwrap();
    assert!(TermValue::new(&t0).nodes(12).is_empty());
}

#[test]
fn fgs_keeps_nodes() {
    let j = op_ext(&Structured::empty(), "u").unwrap();
    assert_eq!(j.fgs().len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn val_is_a_homomorphism(seed in any::<u64>(), n in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_term(&mut rng, n);
        let by_val = val_finite(&t).unwrap();
        let by_ops = eval(&t).unwrap();
        prop_assert!(by_val.same_as(&by_ops), "{}", t);
        by_val.check_sbj().unwrap();
    }

    #[test]
    fn two_leq_forms_agree(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let aut = random_f_automaton(&mut rng, k);
        let v = TermValue::new(&aut);
        let ns = v.nodes(7);
        for u in ns.iter().take(40) {
            for w in ns.iter().take(40) {
                prop_assert_eq!(v.leq(u, w).unwrap(), v.leq_alt(u, w).unwrap());
            }
        }
    }

    #[test]
    fn truncation_is_consistent(seed in any::<u64>(), k in 1usize..5, depth in 0usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let aut = random_f_automaton(&mut rng, k);
        let v = TermValue::new(&aut);
        let fin = val_truncated(&aut, depth).unwrap();
        let ns: Vec<Dewey> = v.nodes(depth).into_iter().filter(|u| u.len() < depth).collect();
        prop_assert_eq!(ns.len(), fin.len());
        for u in &ns {
            for w in &ns {
                let (x, y) = (fin.poset().id(&u.to_string()).unwrap(), fin.poset().id(&w.to_string()).unwrap());
                prop_assert_eq!(v.leq(u, w).unwrap(), fin.poset().leq(x, y));
                prop_assert_eq!(v.equiv(u, w).unwrap(), fin.line_of(x) == fin.line_of(y));
            }
        }
    }

    #[test]
    fn concat_associative_with_neutral(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_sbj(&mut rng, 3), random_sbj(&mut rng, 3), random_sbj(&mut rng, 3));
        let l = op_concat(&op_concat(&a, &b).unwrap(), &c).unwrap();
        let r = op_concat(&a, &op_concat(&b, &c).unwrap()).unwrap();
        prop_assert!(brute_iso(&l, &r));
        prop_assert_eq!(l.canonical(), r.canonical());
        prop_assert!(op_concat(&a, &Structured::empty()).unwrap().same_as(&a));
    }

    #[test]
    fn synthesize_round_trip(seed in any::<u64>(), n in 0usize..13) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = random_sbj(&mut rng, n);
        let back = val_finite(&synthesize(&j)).unwrap();
        prop_assert!(back.same_as(&j));
        prop_assert!(brute_iso(&back, &j));
    }

    #[test]
    fn structure_output_is_valid(seed in any::<u64>(), n in 1usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_binary_tree(&mut rng, n);
        let mut order: Vec<usize> = p.nodes().collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let s = structure(&p, &order).unwrap();
        s.check_sbj().unwrap();
        let back = validate_s(&encode_s(&s)).unwrap();
        prop_assert!(back.same_as(&s));
        for l in 0..s.lines().len() {
            if let Some(t) = s.top(l) {
                let x = s.line(l)[0];
                prop_assert_eq!(s.depth(t) + 1, s.depth(x));
            }
        }
    }

    #[test]
    fn canonical_form_matches_brute_iso(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sbj(&mut rng, 6);
        let b = random_sbj(&mut rng, 6);
        prop_assert_eq!(a.canonical() == b.canonical(), brute_iso(&a, &b));
    }
}
