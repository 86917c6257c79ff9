mod common;

use common::*;
use gentree::rankwidth::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn oracle_agrees_on_small_graphs() {
    let cases = [(Graph::complete(4), 1), (Graph::path(4), 1), (Graph::cycle(5), 2)];
    for (g, want) in cases {
        assert_eq!(oracle_rankwidth(&g), want);
        let (r, t) = discrete_rankwidth(&g, MAX_EXHAUSTIVE).unwrap();
        assert_eq!(r, want);
        assert_eq!(layout_rank(&g, &t).unwrap(), want);
    }
}

#[test]
fn layout_counts_match_prufer() {
    let fact = |k: usize| (1..=k).product::<usize>();
    for n in 3..=6 {
        assert_eq!(cubic_layouts(n).len() * fact(n - 2), prufer_layouts(n).len());
    }
    assert_eq!(cubic_layouts(7).len(), 945);
}

#[test]
fn cut_ranks() {
    let k4 = Graph::complete(4);
    for x in 1..15u64 {
        assert_eq!(k4.cut_rank(x, 15 & !x).unwrap(), 1);
    }
    let c5 = Graph::cycle(5);
    assert_eq!(c5.cut_rank(0b00011, 0b11100).unwrap(), 2);
    assert_eq!(c5.block(0b00011, 0b11100).rows, vec![0b100, 0b001]);
    assert_eq!(c5.cut_rank(0, 0b11111).unwrap(), 0);
    assert_eq!(c5.cut_rank(0b11111, 0).unwrap(), 0);
    assert_eq!(c5.cut_rank(0b011, 0b110), Err(RwError::Overlap));
}

#[test]
fn small_layouts() {
    let k2 = Graph::complete(2);
    let only = cubic_layouts(2);
    assert_eq!(only.len(), 1);
    assert_eq!(layout_rank(&k2, &only[0]).unwrap(), 1);
    let empty = Graph::new(6).unwrap();
    assert!(cubic_layouts(6).iter().all(|t| layout_rank(&empty, t).unwrap() == 0));
    // caterpillar: spine s0 - s1 with leaves 0,1 on s0 and 2,3 on s1
    let cat = Layout {
        adj: vec![vec![4], vec![4], vec![5], vec![5], vec![0, 1, 5], vec![2, 3, 4]],
        vertex: vec![Some(0), Some(1), Some(2), Some(3), None, None],
    };
    assert_eq!(layout_rank(&Graph::path(4), &cat).unwrap(), 1);
    assert_eq!(discrete_rankwidth(&Graph::new(10).unwrap(), 9).unwrap_err(), RwError::TooLarge { n: 10, max: 9 });
}

#[test]
fn invalid_layouts() {
    let g = Graph::path(3);
    let inner_vertex = Layout { adj: vec![vec![1], vec![0, 2], vec![1]], vertex: vec![Some(0), Some(1), Some(2)] };
    assert!(matches!(layout_rank(&g, &inner_vertex), Err(RwError::Layout(_))));
    let missing = Layout { adj: vec![vec![1], vec![0]], vertex: vec![Some(0), Some(1)] };
    assert!(matches!(layout_rank(&g, &missing), Err(RwError::Layout(_))));
    let mut wide = Layout { adj: vec![vec![1, 2, 3, 4]], vertex: vec![None] };
    for i in 0..4 {
        wide.adj.push(vec![0]);
        wide.vertex.push(Some(i));
    }
    assert!(matches!(layout_rank(&Graph::path(4), &wide), Err(RwError::Layout(_))));
}

#[test]
fn nine_vertices() {
    let (r, _) = discrete_rankwidth(&Graph::cycle(9), MAX_EXHAUSTIVE).unwrap();
    assert_eq!(r, 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn induced_subgraphs_do_not_increase_rankwidth(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Graph::random(&mut rng, n, 0.5);
        let (rg, t) = discrete_rankwidth(&g, MAX_EXHAUSTIVE).unwrap();
        if n >= 3 {
            prop_assert_eq!(rg, oracle_rankwidth(&g));
        }
        for t2 in cubic_layouts(n) {
            prop_assert!(layout_rank(&g, &t2).unwrap() >= rg);
        }
        prop_assert_eq!(layout_rank(&g, &t).unwrap(), rg);
        for keep in 0..(1u64 << n) {
            let h = g.induced(keep);
            prop_assert!(discrete_rankwidth(&h, MAX_EXHAUSTIVE).unwrap().0 <= rg);
        }
    }

    #[test]
    fn cut_rank_is_symmetric(seed in any::<u64>(), n in 1usize..=12, x in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Graph::random(&mut rng, n, 0.4);
        let x = x & g.all();
        let y = g.all() & !x;
        prop_assert_eq!(g.cut_rank(x, y).unwrap(), g.cut_rank(y, x).unwrap());
        prop_assert_eq!(g.cut_rank(x, y).unwrap(), oracle_cut_rank(&g, x));
    }

    #[test]
    fn gf2_rank_laws(rows in prop::collection::vec(0u64..256, 0..10), i in any::<usize>(), j in any::<usize>()) {
        let r = gf2_rank(&rows);
        prop_assert_eq!(r, span_rank(&rows));
        if rows.len() >= 2 {
            let (i, j) = (i % rows.len(), j % rows.len());
            let mut p = rows.clone();
            p.swap(i, j);
            prop_assert_eq!(gf2_rank(&p), r);
            if i != j {
                p[i] ^= p[j];
                prop_assert_eq!(gf2_rank(&p), r);
            }
        }
    }
}
