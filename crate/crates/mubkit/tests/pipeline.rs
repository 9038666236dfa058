//! Cross-module integration: exact/dense agreement, detector coverage, and
//! the correspondence between partitions, MUBs, and Cartan subalgebras on
//! inputs that cut across module boundaries.

use proptest::prelude::*;

use mubkit::classes::standard_partition;
use mubkit::error_bases::nice_bound;
use mubkit::finite::{character_table, is_character_table, prime_power, AbelianGroupSpec};
use mubkit::lie::{
    cartans_to_mubs, is_cartan, is_dagger_closed, killing, killing_ad, mubs_to_cartans,
};
use mubkit::linalg::SplitMix64;
use mubkit::monomial::{composite_pauli, MonomialMatrix, SNAP_ORDER_CAP};
use mubkit::mub::{matching_score, mubs_from_classes};

/// All abelian groups of order at most `cap`, one spec per isomorphism class.
fn abelian_groups_up_to(cap: u64) -> Vec<AbelianGroupSpec> {
    fn extend(prefix: Vec<u32>, min: u32, cap: u64, out: &mut Vec<Vec<u32>>) {
        let prod: u64 = prefix.iter().map(|&f| f as u64).product();
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        let mut f = min;
        while prod * f as u64 <= cap {
            let mut next = prefix.clone();
            next.push(f);
            extend(next, f, cap, out);
            f += 1;
        }
    }
    let mut raw = Vec::new();
    extend(Vec::new(), 2, cap, &mut raw);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for factors in raw {
        let g = AbelianGroupSpec::new(factors).unwrap();
        if seen.insert(g.canonical_factors()) {
            out.push(g);
        }
    }
    out
}

#[test]
fn character_table_detector_covers_all_groups_up_to_16() {
    for g in abelian_groups_up_to(16) {
        let h = character_table(&g);
        let found = is_character_table(&h, 1e-8)
            .unwrap()
            .unwrap_or_else(|| panic!("no group detected for {:?}", g.factors()));
        assert!(
            found.is_isomorphic_to(&g),
            "detected {:?} for table of {:?}",
            found.factors(),
            g.factors()
        );
    }
}

#[test]
fn killing_two_routes_agree_on_seeded_pairs() {
    let mut rng = SplitMix64::new(2024);
    for n in [2usize, 3, 4, 5] {
        for _ in 0..20 {
            let a = random_traceless(n, &mut rng);
            let b = random_traceless(n, &mut rng);
            let k1 = killing(&a, &b, 1e-6).unwrap();
            let k2 = killing_ad(&a, &b, 1e-6).unwrap();
            assert!(
                (k1 - k2).norm() <= 1e-8 * (1.0 + k1.norm()),
                "n={n}: {k1} vs {k2}"
            );
        }
    }
}

fn random_traceless(n: usize, rng: &mut SplitMix64) -> mubkit::DenseMatrix {
    let mut m = mubkit::DenseMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            m.set(
                r,
                c,
                mubkit::num_complex::Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
            );
        }
    }
    let shift = m.trace() / n as f64;
    for i in 0..n {
        m.set(i, i, m.get(i, i) - shift);
    }
    m
}

#[test]
fn partial_collections_convert_both_ways() {
    // Two commuting classes only (a partial collection at n = 4): the
    // correspondence does not need a complete set.
    let partition = standard_partition(2, 2).unwrap();
    let two = mubkit::classes::ClassPartition::new(
        4,
        partition.classes()[..2].to_vec(),
    );
    let mubs = mubs_from_classes(&two, 0, 1e-9).unwrap();
    assert_eq!(mubs.len(), 2);
    let cartans = mubs_to_cartans(&mubs, 1e-9).unwrap();
    for c in &cartans {
        assert!(is_cartan(c, 1e-9).unwrap().pass());
        assert!(is_dagger_closed(c, 1e-9).unwrap());
    }
    let back = cartans_to_mubs(&cartans, 1, 1e-9).unwrap();
    assert_eq!(matching_score(&mubs, &back, 1e-7), 1.0);
}

#[test]
fn composite_bases_recognized_densely() {
    // Dense realization and exact recognizer agree across the n = 6 basis.
    for x in 0..6u64 {
        for z in 0..6u64 {
            let exact = composite_pauli(6, x, z);
            let rec = MonomialMatrix::from_dense(&exact.to_dense(), 1e-9, SNAP_ORDER_CAP)
                .expect("dense Weyl-Heisenberg element must be recognized");
            assert!(rec.equal(&exact), "x={x} z={z}");
        }
    }
}

proptest! {
    #[test]
    fn monomial_json_roundtrip_bit_exact(
        n in 1usize..10,
        order in 1u64..120,
        seed in any::<u64>(),
    ) {
        let mut rng = SplitMix64::new(seed);
        // Random permutation by seeded shuffle.
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            perm.swap(i, j);
        }
        let exps: Vec<u64> = (0..n).map(|_| rng.next_u64() % order).collect();
        let m = MonomialMatrix::new(n, order, perm, exps).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        let back: MonomialMatrix = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(m, back);
    }

    #[test]
    fn monomial_product_matches_dense(
        n in 1usize..8,
        order_a in 1u64..12,
        order_b in 1u64..12,
        seed in any::<u64>(),
    ) {
        let mut rng = SplitMix64::new(seed);
        let mut make = |order: u64| {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                perm.swap(i, j);
            }
            let exps: Vec<u64> = (0..n).map(|_| rng.next_u64() % order).collect();
            MonomialMatrix::new(n, order, perm, exps).unwrap()
        };
        let a = make(order_a);
        let b = make(order_b);
        let exact = a.mul(&b).unwrap().to_dense();
        let dense = a.to_dense().mul(&b.to_dense()).unwrap();
        prop_assert!(exact.max_abs_diff(&dense) < 1e-12);
    }

    #[test]
    fn nice_bound_bounded_by_complete_count(n in 2u64..200) {
        let bound = nice_bound(n);
        prop_assert!(bound <= n + 1);
        match prime_power(n) {
            Some(_) => prop_assert_eq!(bound, n + 1),
            None => prop_assert!(bound < n + 1),
        }
    }

    #[test]
    fn adjoint_of_product_is_reversed_product(
        n in 1usize..6,
        seed in any::<u64>(),
    ) {
        let mut rng = SplitMix64::new(seed);
        let mut make = || {
            let order = 1 + rng.next_u64() % 24;
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                perm.swap(i, j);
            }
            let exps: Vec<u64> = (0..n).map(|_| rng.next_u64() % order).collect();
            MonomialMatrix::new(n, order, perm, exps).unwrap()
        };
        let a = make();
        let b = make();
        let lhs = a.mul(&b).unwrap().adjoint();
        let rhs = b.adjoint().mul(&a.adjoint()).unwrap();
        prop_assert!(lhs.equal(&rhs));
    }
}
