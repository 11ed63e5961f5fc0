use qrdecomp_core::charsum::{semicircle_cdf, DEFAULT_BUDGET};
use qrdecomp_core::{horizontal_sweep, vertical_histogram, LegendreTable, Mode, Prime};

const SEED: u64 = 0x5eed;

fn table(n: u64) -> LegendreTable {
    LegendreTable::new(Prime::new(n).unwrap())
}

#[test]
fn exhaustive_support_at_101() {
    let t = table(101);
    let root = t.modulus().sqrt();
    let h = vertical_histogram(4, &t, 40, Mode::Exhaustive, DEFAULT_BUDGET).unwrap();
    assert!(h.sample_min().unwrap() >= -3.0 - 1.0 / root);
    assert!(h.sample_max().unwrap() <= 2.0 - 1.0 / root);
    assert_eq!(h.total, h.counts.iter().sum::<u64>());
}

#[test]
fn shifted_values_respect_hasse_interval() {
    // S + 1 is minus the trace of an elliptic curve, so |S + 1| <= 2 sqrt(p)
    for n in [11, 101, 499] {
        let t = table(n);
        let p = t.modulus().get() as i64;
        let h = vertical_histogram(
            4,
            &t,
            40,
            Mode::Sampled {
                n: 200_000,
                seed: SEED,
            },
            DEFAULT_BUDGET,
        )
        .unwrap();
        for &v in h.value_counts.keys() {
            assert!(v * v <= 4 * p, "p = {n}, S + 1 = {v}");
        }
    }
}

#[test]
fn semicircle_moments_at_499() {
    let t = table(499);
    let h = vertical_histogram(
        4,
        &t,
        40,
        Mode::Sampled {
            n: 200_000,
            seed: SEED,
        },
        DEFAULT_BUDGET,
    )
    .unwrap();
    assert!(h.statistic_mean.abs() < 0.1);
    assert!((h.statistic_variance - 1.0).abs() < 0.15);
}

#[test]
fn discrepancy_shrinks_along_panel() {
    let ks: Vec<f64> = [11, 101, 499]
        .iter()
        .map(|&n| {
            vertical_histogram(
                4,
                &table(n),
                40,
                Mode::Sampled {
                    n: 200_000,
                    seed: SEED,
                },
                DEFAULT_BUDGET,
            )
            .unwrap()
            .ks_distance(semicircle_cdf)
        })
        .collect();
    assert!(ks.windows(2).all(|w| w[1] < w[0]), "{ks:?}");
}

#[test]
fn horizontal_sweep_stays_in_range() {
    let rep = horizontal_sweep(&[0, 1, 2, 3], 5, 199, 20).unwrap();
    assert!(!rep.points.is_empty());
    for pt in &rep.points {
        assert!(
            (-3.0..=2.0).contains(&pt.value),
            "p = {}: {}",
            pt.p,
            pt.value
        );
    }
}
