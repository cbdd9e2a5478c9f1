use std::collections::BTreeSet;

use falconer_core::finite_field::{
    cover_check_distance, draw_set, expander_census, image_set, is_prime, trial_rng,
    CensusConfig, FFSet, PrimeField, SetFamily, DEFAULT_BUDGET,
};
use falconer_core::Quadratic3;
use proptest::prelude::*;

fn q(s: &str) -> Quadratic3 {
    Quadratic3::parse(s).unwrap()
}

fn subset(p: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..p, 1..12)
}

fn trial_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

proptest! {
    #[test]
    fn image_is_monotone(a in subset(31), extra in subset(31), b in subset(31), c in subset(31)) {
        let f = PrimeField::new(31).unwrap();
        let small = FFSet::new(a.clone(), &f).unwrap();
        let large = FFSet::new([a, extra].concat(), &f).unwrap();
        let (b, c) = (FFSet::new(b, &f).unwrap(), FFSet::new(c, &f).unwrap());
        for poly in ["x*y + z", "(x - y)^2 + z", "x*y + x*z"] {
            let lo = image_set(&q(poly), &small, &b, &c, &f, DEFAULT_BUDGET).unwrap();
            let hi = image_set(&q(poly), &large, &b, &c, &f, DEFAULT_BUDGET).unwrap();
            prop_assert!(lo.is_subset(&hi));
        }
    }

    #[test]
    fn swapping_a_and_b_preserves_xy_plus_z(a in subset(37), b in subset(37), c in subset(37)) {
        let f = PrimeField::new(37).unwrap();
        let (a, b, c) = (
            FFSet::new(a, &f).unwrap(),
            FFSet::new(b, &f).unwrap(),
            FFSet::new(c, &f).unwrap(),
        );
        let g = q("x*y + z");
        prop_assert_eq!(
            image_set(&g, &a, &b, &c, &f, DEFAULT_BUDGET).unwrap(),
            image_set(&g, &b, &a, &c, &f, DEFAULT_BUDGET).unwrap()
        );
    }

    #[test]
    fn degenerate_square_on_intervals_stays_below_3n_minus_2(
        n in 1u64..60, seed in any::<u64>(),
    ) {
        let f = PrimeField::new(1009).unwrap();
        let cfg = CensusConfig { n, trials: 3, family: SetFamily::Interval, seed, budget: DEFAULT_BUDGET };
        let rep = expander_census(&q("(x + y + z)^2"), &f, &cfg).unwrap();
        for row in &rep.rows {
            prop_assert!(row.image_size <= 3 * n - 2);
        }
    }

    #[test]
    fn primality_matches_trial_division(n in 0u64..200_000) {
        prop_assert_eq!(is_prime(n), trial_division(n));
    }

    #[test]
    fn drawn_sets_have_the_requested_size(n in 1u64..100, seed in any::<u64>(), trial in 0u64..5) {
        let f = PrimeField::new(101).unwrap();
        for family in [SetFamily::UniformRandom, SetFamily::Interval, SetFamily::Geometric] {
            let s = draw_set(family, &f, n, &mut trial_rng(seed, trial)).unwrap();
            prop_assert_eq!(s.len() as u64, n);
            prop_assert_eq!(s, draw_set(family, &f, n, &mut trial_rng(seed, trial)).unwrap());
        }
    }
}

#[test]
fn census_is_deterministic_and_thread_independent() {
    let f = PrimeField::new(211).unwrap();
    let cfg = CensusConfig {
        n: 25,
        trials: 12,
        family: SetFamily::UniformRandom,
        seed: 77,
        budget: DEFAULT_BUDGET,
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| expander_census(&q("x*y + x*z"), &f, &cfg).unwrap().to_csv())
    };
    let one = run(1);
    assert_eq!(one, run(1));
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
    let sizes: Vec<u64> = one
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "rows sorted by ratio");
}

#[test]
fn image_set_examples() {
    let f7 = PrimeField::new(7).unwrap();
    let all = FFSet::full(&f7);
    assert_eq!(
        image_set(&q("x*y + z"), &all, &all, &all, &f7, DEFAULT_BUDGET).unwrap().len(),
        7
    );
    let s = FFSet::new(vec![1, 2], &f7).unwrap();
    assert_eq!(
        image_set(&q("x*y + z"), &s, &s, &s, &f7, DEFAULT_BUDGET).unwrap().elements(),
        &[2, 3, 4, 5, 6]
    );
    let f101 = PrimeField::new(101).unwrap();
    let s = FFSet::new(vec![0, 1, 2], &f101).unwrap();
    let squares: BTreeSet<u64> = (0..=6u64).map(|t| t * t % 101).collect();
    assert_eq!(
        image_set(&q("(x+y+z)^2"), &s, &s, &s, &f101, DEFAULT_BUDGET).unwrap().elements(),
        squares.into_iter().collect::<Vec<_>>().as_slice()
    );
}

#[test]
fn distance_cover_examples() {
    let f = PrimeField::new(101).unwrap();
    assert!(cover_check_distance(&FFSet::full(&f), &f, DEFAULT_BUDGET).unwrap());
    assert!(!cover_check_distance(&FFSet::new(vec![0], &f).unwrap(), &f, DEFAULT_BUDGET).unwrap());
    let first65 = FFSet::range(0, 65, &f).unwrap();
    assert!(cover_check_distance(&first65, &f, DEFAULT_BUDGET).unwrap());
}

#[test]
fn invalid_inputs() {
    assert!(PrimeField::new(1).is_err());
    assert!(PrimeField::new(561).is_err());
    let f = PrimeField::new(13).unwrap();
    assert!(FFSet::new(vec![13], &f).is_err());
    let cfg = CensusConfig {
        n: 14,
        trials: 1,
        family: SetFamily::Interval,
        seed: 0,
        budget: DEFAULT_BUDGET,
    };
    assert!(expander_census(&q("x*y+z"), &f, &cfg).is_err());
    let zero_trials = CensusConfig { n: 3, trials: 0, ..cfg };
    assert!(expander_census(&q("x*y+z"), &f, &zero_trials).is_err());
    assert!("bogus".parse::<SetFamily>().is_err());
}
