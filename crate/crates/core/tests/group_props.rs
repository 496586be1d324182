use std::collections::BTreeSet;

use proptest::prelude::*;
use rab_core::groups::FiniteGroup;
use rab_core::graph_product::{syllable_length, ProductPresentation};

fn small_group(kind: usize, n: usize) -> FiniteGroup {
    match kind {
        0 => FiniteGroup::cyclic(n),
        1 => FiniteGroup::symmetric(3).0,
        2 => FiniteGroup::direct_product(&[&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(n)]),
        _ => FiniteGroup::symmetric(4).0,
    }
}

fn group_strategy() -> impl Strategy<Value = FiniteGroup> {
    (0usize..4, 1usize..7).prop_map(|(k, n)| small_group(k, n))
}

fn subset(g: &FiniteGroup, bits: u64) -> BTreeSet<usize> {
    (0..g.order()).filter(|&a| bits >> (a % 64) & 1 == 1 && a < 64).collect()
}

/// A graph on up to five vertices with cyclic vertex groups of order 2 or 3.
fn presentation_strategy() -> impl Strategy<Value = ProductPresentation> {
    (2usize..6, any::<u16>(), any::<u8>()).prop_map(|(n, edge_bits, group_bits)| {
        let mut edges = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if edge_bits >> k & 1 == 1 {
                    edges.push((a, b));
                }
                k += 1;
            }
        }
        let groups = (0..n).map(|v| FiniteGroup::cyclic(2 + (group_bits as usize >> v & 1))).collect();
        ProductPresentation::new((0..n).map(|v| format!("v{v}")).collect(), &edges, groups).unwrap()
    })
}

fn raw_word(p: &ProductPresentation, seeds: &[(usize, usize)]) -> Vec<(usize, usize)> {
    seeds
        .iter()
        .map(|&(v, g)| {
            let v = v % p.num_vertices();
            (v, g % p.group(v).order())
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tables_validate_and_associate(g in group_strategy(), a in 0usize..24, b in 0usize..24, c in 0usize..24) {
        prop_assert!(FiniteGroup::validate(g.table().to_vec()).is_ok());
        let (a, b, c) = (a % g.order(), b % g.order(), c % g.order());
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
    }

    #[test]
    fn broken_tables_are_rejected(g in group_strategy(), r in 0usize..24, c in 0usize..24) {
        prop_assume!(g.order() > 1);
        let mut t = g.table().to_vec();
        let (r, c) = (r % g.order(), c % g.order());
        let c2 = (c + 1) % g.order();
        t[r][c2] = t[r][c];
        prop_assert!(FiniteGroup::validate(t).is_err());
    }

    #[test]
    fn closure_is_idempotent_and_monotone(g in group_strategy(), s in any::<u64>(), extra in any::<u64>()) {
        let small = subset(&g, s & extra);
        let big = subset(&g, s);
        let cs = g.subgroup_closure(&small);
        let cb = g.subgroup_closure(&big);
        prop_assert_eq!(&g.subgroup_closure(&cs), &cs);
        prop_assert!(cs.is_subset(&cb));
        prop_assert!(g.is_subgroup(&cb));
    }

    #[test]
    fn double_cosets_partition(g in group_strategy(), l in any::<u64>(), r in any::<u64>()) {
        let left = g.subgroup_closure(&subset(&g, l));
        let right = g.subgroup_closure(&subset(&g, r));
        let reps = g.double_coset_reps(&left, &right).unwrap();
        let mut seen = BTreeSet::new();
        for &x in &reps {
            for y in g.double_coset(&left, x, &right) {
                prop_assert!(seen.insert(y), "double cosets overlap at {}", y);
            }
        }
        prop_assert_eq!(seen.len(), g.order());
    }

    #[test]
    fn normalize_is_idempotent_and_confluent(p in presentation_strategy(), w in prop::collection::vec((0usize..5, 0usize..3), 0..12), k in 0usize..12) {
        let raw = raw_word(&p, &w);
        let nf = p.normalize(&raw).unwrap();
        prop_assert_eq!(&p.normalize(nf.syllables()).unwrap(), &nf);
        // Swapping adjacent letters from commuting groups gives the same element.
        if raw.len() >= 2 {
            let k = k % (raw.len() - 1);
            let (a, b) = (raw[k].0, raw[k + 1].0);
            if a != b && p.adjacent(a, b) {
                let mut swapped = raw.clone();
                swapped.swap(k, k + 1);
                prop_assert_eq!(&p.normalize(&swapped).unwrap(), &nf);
            }
        }
        let split = k.min(raw.len());
        let left = p.normalize(&raw[..split]).unwrap();
        let right = p.normalize(&raw[split..]).unwrap();
        prop_assert_eq!(&p.multiply(&left, &right), &nf);
    }

    #[test]
    fn retract_is_idempotent(p in presentation_strategy(), w in prop::collection::vec((0usize..5, 0usize..3), 0..10), mask in any::<u8>()) {
        let a = p.normalize(&raw_word(&p, &w)).unwrap();
        let mask = mask as u64 & p.all_mask();
        let r = p.retract(mask, &a);
        prop_assert_eq!(&p.retract(mask, &r), &r);
        prop_assert_eq!(r.support() & !mask, 0);
    }

    #[test]
    fn syllable_length_is_subadditive(p in presentation_strategy(), a in prop::collection::vec((0usize..5, 0usize..3), 0..8), b in prop::collection::vec((0usize..5, 0usize..3), 0..8)) {
        let a = p.normalize(&raw_word(&p, &a)).unwrap();
        let b = p.normalize(&raw_word(&p, &b)).unwrap();
        prop_assert!(syllable_length(&p.multiply(&a, &b)) <= syllable_length(&a) + syllable_length(&b));
        prop_assert_eq!(syllable_length(&p.inverse(&a)), syllable_length(&a));
    }

    #[test]
    fn gamma0_is_injective_on_vertex_groups(p in presentation_strategy()) {
        let hom = p.gamma0_hom();
        for v in 0..p.num_vertices() {
            let images: BTreeSet<usize> = (0..p.group(v).order()).map(|g| hom.eval_syllable(v, g)).collect();
            prop_assert_eq!(images.len(), p.group(v).order());
        }
    }
}
