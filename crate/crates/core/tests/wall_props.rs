use std::collections::BTreeSet;

use proptest::prelude::*;
use rab_core::cocycle::{act_cochain, coboundary, Cochain1};
use rab_core::davis::{BlockComplex, CoxWord, CoxeterData, DEFAULT_BLOCK_CAP};
use rab_core::groups::FiniteAbelian;
use rab_core::polygonal::samples::{curvature_corpus, single_polygon, torus_grid, torus_translations};
use rab_core::polygonal::{Condition, PolygonalComplex, WallKind};

fn corpus() -> Vec<PolygonalComplex> {
    let mut out: Vec<PolygonalComplex> = curvature_corpus().into_iter().map(|(_, x)| x).collect();
    out.extend((3..10).map(single_polygon));
    out
}

fn cochain(coeffs: &FiniteAbelian, n: usize, raw: &[i64]) -> Cochain1 {
    let values = (0..n).map(|e| coeffs.reduce(&[raw[e % raw.len()]])).collect();
    Cochain1 { coeffs: coeffs.clone(), values }
}

#[test]
fn walls_partition_oriented_edges() {
    for x in corpus().into_iter().filter(|x| x.polygons().iter().all(|p| p.sides() >= 4)) {
        for walls in [x.compute_walls().unwrap(), x.compute_ewalls().unwrap()] {
            let mut seen = vec![0usize; 2 * x.num_edges()];
            for w in &walls {
                for &o in &w.members {
                    seen[o] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
            // The side-count rule is symmetric under reversal only when the
            // two arcs can have equal length.
            let modulus = if walls[0].kind == WallKind::Parallel { 2 } else { 4 };
            let classes: BTreeSet<Vec<usize>> = walls.iter().map(|w| w.members.clone()).collect();
            let closed = walls.iter().all(|w| classes.contains(&w.reversed()));
            if x.polygons().iter().all(|p| p.sides() % modulus == 0) {
                assert!(closed);
            }
        }
    }
}

#[test]
fn odd_polygons_pair_edges_one_way() {
    for k in [5, 6, 7] {
        let x = single_polygon(k);
        let walls = if k % 2 == 1 { x.compute_walls() } else { x.compute_ewalls() }.unwrap();
        let classes: BTreeSet<Vec<usize>> = walls.iter().map(|w| w.members.clone()).collect();
        assert!(walls.iter().any(|w| !classes.contains(&w.reversed())));
    }
}

#[test]
fn conditions_form_a_chain() {
    for x in corpus() {
        for strict in [false, true] {
            let passes = |c| x.check_condition(c, strict).passed();
            let (q, c4, c2, c) = (passes(Condition::Q), passes(Condition::C4), passes(Condition::C2), passes(Condition::C));
            assert!(!q || c4);
            assert!(!c4 || c2);
            assert!(!c2 || c);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn condition_terms_chain(sides in prop::collection::vec(3usize..12, 1..7), strict in any::<bool>()) {
        let ok = |c: Condition| c.evaluate(&sides, strict).0;
        prop_assert!(!ok(Condition::Q) || ok(Condition::C4));
        prop_assert!(!ok(Condition::C4) || ok(Condition::C2));
        prop_assert!(!ok(Condition::C2) || ok(Condition::C));
    }

    #[test]
    fn parallel_agrees_with_even_parallel(f in 1usize..4, extra in 0usize..2) {
        let k = 4 * f + extra;
        let x = single_polygon(k);
        prop_assert_eq!(x.parallel_pairs(0, WallKind::Parallel), x.parallel_pairs(0, WallKind::EvenParallel));
    }

    #[test]
    fn coboundary_is_linear(n in 2u64..7, a in prop::collection::vec(-20i64..20, 1..8), b in prop::collection::vec(-20i64..20, 1..8)) {
        let x = torus_grid(3, 2);
        let coeffs = FiniteAbelian::cyclic(n);
        let u = cochain(&coeffs, x.num_edges(), &a);
        let v = cochain(&coeffs, x.num_edges(), &b);
        prop_assert_eq!(coboundary(&x, &u.add(&v)), coboundary(&x, &u).add(&coboundary(&x, &v)));
    }

    #[test]
    fn action_composes(g in 0usize..9, h in 0usize..9, a in prop::collection::vec(-9i64..9, 1..18)) {
        let x = torus_grid(3, 3);
        let act = torus_translations(3, 3);
        let u = cochain(&FiniteAbelian::cyclic(5), x.num_edges(), &a);
        let gh = act.group.mul(g, h);
        prop_assert_eq!(act_cochain(&act, g, &act_cochain(&act, h, &u)), act_cochain(&act, gh, &u));
        prop_assert_eq!(
            coboundary(&x, &act_cochain(&act, g, &u)),
            rab_core::cocycle::act_cocycle(&act, g, &coboundary(&x, &u))
        );
    }

    #[test]
    fn coxeter_group_acts_simply_transitively(m in 3u32..6, letters in prop::collection::vec(0usize..4, 0..6)) {
        let d = CoxeterData::cycle(4, m);
        let ball = BlockComplex::ball(&d, 4, DEFAULT_BLOCK_CAP).unwrap();
        let words: BTreeSet<CoxWord> = (0..ball.num_blocks()).map(|b| ball.word(b).unwrap().clone()).collect();
        prop_assert_eq!(words.len(), ball.num_blocks());
        let w = d.cox_normalize(&letters).unwrap();
        prop_assert!(d.multiply(&w, &d.inverse(&w)).unwrap().is_empty());
        if let Some(b) = ball.block_of_word(&w) {
            prop_assert_eq!(ball.word(b), Some(&w));
            for s in 0..4 {
                let ws = d.multiply(&w, &d.generator(s)).unwrap();
                if let Some(n) = ball.neighbor(b, s) {
                    prop_assert_eq!(ball.word(n), Some(&ws));
                }
            }
        }
    }
}

#[test]
fn extracted_complexes_satisfy_c4() {
    for m in [4, 5] {
        let d = CoxeterData::cycle(4, m);
        let x = BlockComplex::ball(&d, 4, DEFAULT_BLOCK_CAP).unwrap().extract_x();
        assert!(x.complex.check_condition(Condition::C4, false).passed());
        assert!(x.complex.check_condition(Condition::C2, false).passed());
    }
    let d = CoxeterData::cycle(5, 3);
    let x = BlockComplex::ball(&d, 4, DEFAULT_BLOCK_CAP).unwrap().extract_x();
    assert!(x.complex.check_condition(Condition::C2, false).passed());
}
