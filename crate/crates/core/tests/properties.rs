use proptest::collection::btree_set;
use proptest::prelude::*;

use qrdecomp_core::charsum::raw_char_sum;
use qrdecomp_core::{
    build_profile, char_sum, check_holder, check_kappa_one, check_kappa_two, check_lemma_ab_bound,
    check_lemma_p_ab, check_tau_bound, generate_residue_instance, residue_set, shift_reduced_sum,
    FpSet, KTuple, LegendreTable, Prime,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PANEL: [u64; 6] = [7, 11, 13, 31, 61, 101];

fn prime_strategy() -> impl Strategy<Value = Prime> {
    prop::sample::select(PANEL.to_vec()).prop_map(|n| Prime::new(n).unwrap())
}

fn pair_strategy() -> impl Strategy<Value = (FpSet, FpSet)> {
    prime_strategy().prop_flat_map(|p| {
        let n = p.get();
        (
            btree_set(0..n, 1..=(n as usize).min(20)),
            btree_set(0..n, 1..=(n as usize).min(20)),
        )
            .prop_map(move |(a, b)| {
                (
                    FpSet::from_elems(p, a.into_iter().map(i64::from)),
                    FpSet::from_elems(p, b.into_iter().map(i64::from)),
                )
            })
    })
}

fn quadruples(a: &FpSet, b: &FpSet) -> u64 {
    let p = a.modulus().get();
    let (av, bv) = (a.to_vec(), b.to_vec());
    let mut n = 0;
    for &a1 in &av {
        for &a2 in &av {
            for &b1 in &bv {
                for &b2 in &bv {
                    n += u64::from((a1 + b1) % p == (a2 + b2) % p);
                }
            }
        }
    }
    n
}

fn distinct_tuple(k: usize) -> impl Strategy<Value = (Prime, Vec<i64>)> {
    prime_strategy()
        .prop_filter("room for k distinct shifts", move |p| p.get() as usize > k)
        .prop_flat_map(move |p| {
            btree_set(0..p.get() as i64, k..=k)
                .prop_map(|s| s.into_iter().collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(move |v| (p, v))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn chain_and_moments((a, b) in pair_strategy()) {
        let prof = build_profile(&a, &b).unwrap();
        prop_assert!(prof.chain_holds());
        prop_assert_eq!(prof.m0 as usize, a.sumset(&b).len());
        prop_assert_eq!(prof.m1 as usize, a.len() * b.len());
        prop_assert_eq!(prof.energy, quadruples(&a, &b));
        prop_assert_eq!(prof.rep_counts.iter().map(|&r| r as u64).sum::<u64>(), prof.m1);
    }

    #[test]
    fn unconditional_lemmas((a, b) in pair_strategy()) {
        let prof = build_profile(&a, &b).unwrap();
        for theta in [0.5, 1.0, 2.0, 3.7] {
            prop_assert!(check_holder(&prof, theta));
            prop_assert!(check_kappa_one(&prof, theta));
        }
        prop_assert!(check_kappa_two(&prof));
        prop_assert!(check_tau_bound(&prof));
    }

    #[test]
    fn profile_is_translation_invariant((a, b) in pair_strategy(), s in 0i64..200, t in 0i64..200) {
        let p1 = build_profile(&a, &b).unwrap();
        let p2 = build_profile(&a.translate(s), &b.translate(t)).unwrap();
        prop_assert_eq!(p1.m0, p2.m0);
        prop_assert_eq!(p1.energy, p2.energy);
        prop_assert_eq!(p1.unique_count, p2.unique_count);
        prop_assert_eq!(p1.support.translate(s + t), p2.support);
    }

    #[test]
    fn weil_and_wan_hold((p, coords) in distinct_tuple(4)) {
        let table = LegendreTable::new(p);
        let rec = char_sum(&KTuple::new(p, &coords).unwrap(), &table);
        prop_assert_eq!(rec.weil_ok, Some(true));
        prop_assert_eq!(rec.wan_ok, Some(true));
    }

    #[test]
    fn char_sum_is_shift_and_order_invariant((p, coords) in distinct_tuple(4), t in 0i64..1000) {
        let table = LegendreTable::new(p);
        let base = char_sum(&KTuple::new(p, &coords).unwrap(), &table).value;
        let shifted: Vec<i64> = coords.iter().map(|c| c + t).collect();
        prop_assert_eq!(char_sum(&KTuple::new(p, &shifted).unwrap(), &table).value, base);
        let mut sorted = coords.clone();
        sorted.sort_unstable();
        prop_assert_eq!(char_sum(&KTuple::new(p, &sorted).unwrap(), &table).value, base);
    }

    #[test]
    fn even_shift_identity((p, coords) in distinct_tuple(4)) {
        let table = LegendreTable::new(p);
        let tuple = KTuple::new(p, &coords).unwrap();
        let s = char_sum(&tuple, &table).value;
        prop_assert_eq!(shift_reduced_sum(&tuple, &table).unwrap(), s + 1);
    }

    #[test]
    fn raw_sum_is_bounded_by_p((p, coords) in distinct_tuple(3)) {
        let table = LegendreTable::new(p);
        let c: Vec<u32> = coords.iter().map(|&x| x as u32).collect();
        let v = raw_char_sum(&table, &c);
        prop_assert!(v.unsigned_abs() < u64::from(p.get()));
        prop_assert_eq!(v.rem_euclid(2), (i64::from(p.get()) - 3).rem_euclid(2));
    }

    #[test]
    fn residue_instances_satisfy_conditional_lemmas(
        n in prop::sample::select(vec![31u64, 61, 101]),
        na in 2usize..5,
        nb in 2usize..5,
        seed in any::<u64>(),
    ) {
        let p = Prime::new(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Ok((a, b)) = generate_residue_instance(p, na, nb, &mut rng) {
            prop_assert_eq!((a.len(), b.len()), (na, nb));
            prop_assert!(a.sumset(&b).is_subset(&residue_set(p)));
            prop_assert!(check_lemma_ab_bound(&a, &b).unwrap().passed);
            prop_assert!(check_lemma_p_ab(&a, &b).unwrap().passed);
        }
    }
}
