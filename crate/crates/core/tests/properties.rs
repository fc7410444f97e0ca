mod common;

use common::*;
use diverse_medians::diameter::{approx_diameter_pair, exact_diameter_pair, min_diff_partition};
use diverse_medians::lpround::dependent_round;
use diverse_medians::metrics::{hamming, min_dispersion, sum_dispersion};
use diverse_medians::mindisp::{
    greedy_dispersion, min_disp_dp_approx, min_disp_dp_exact, min_dispersion_dispatch_approx,
    min_dispersion_dispatch_exact, sample_approx_medians, sample_exact_medians, tstar_upper_bound, SampleConfig,
};
use diverse_medians::oracle::EnumerationLimits;
use diverse_medians::sumdisp::{
    prefix_feasibility, sum_dispersion_approx_k, sum_dispersion_exact_distinct, sum_dispersion_exact_k, SearchMode,
};
use diverse_medians::{Budget, Error, MedianContext, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn r(p: u64, q: u64) -> Rational {
    Rational::new(p, q).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 128, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn offset_identity(ds in dataset(8, 6, 1..=4), seed in any::<u64>()) {
        let ctx = MedianContext::build(&ds);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let s: Vec<_> = (0..ds.d()).map(|_| rand::Rng::gen_range(&mut rng, 0..ds.sigma() as u32)).collect();
            prop_assert_eq!(ctx.median_cost(&s).unwrap(), direct_cost(&ds, &s));
        }
        prop_assert_eq!(direct_cost(&ds, ctx.w()), ctx.opt());
        prop_assert_eq!(ctx.opt(), brute_opt(&ds));
    }

    #[test]
    fn column_counts_match(ds in dataset(8, 6, 1..=4)) {
        let ctx = MedianContext::build(&ds);
        for i in 0..ds.d() {
            let counts = column_counts(&ds, i);
            prop_assert_eq!(counts.iter().sum::<usize>(), ds.n());
            for (a, &c) in counts.iter().enumerate() {
                prop_assert_eq!(ctx.freq().count(i, a as u32) as usize, c);
            }
            let majority: Vec<u32> = (0..ds.sigma() as u32)
                .filter(|&a| counts[a as usize] == *counts.iter().max().unwrap())
                .collect();
            prop_assert_eq!(ctx.freq().majority_set(i), majority.as_slice());
        }
    }

    #[test]
    fn budget_scaling_is_exact(p in 0u64..50, q in 1u64..50, m in 1u64..1000, opt in 0u64..10_000, w in 0u64..20_000) {
        let eps = r(p, q);
        let scaled = r(p * m, q * m);
        prop_assert_eq!(eps, scaled);
        let (a, b) = (Budget::new(eps, opt), Budget::new(scaled, opt));
        prop_assert_eq!(a.fits(w), b.fits(w));
        prop_assert_eq!(a.fits(w), q as u128 * w as u128 <= p as u128 * opt as u128);
        prop_assert_eq!(a.slack(), (p as u128 * opt as u128 / q as u128) as u64);
    }

    #[test]
    fn exact_pair_is_farthest(ds in dataset(6, 6, 2..=3)) {
        let ctx = MedianContext::build(&ds);
        let found = exact_diameter_pair(&ctx);
        let medians = pool(&ds, Rational::zero());
        for s in [&found.pair.0, &found.pair.1] {
            prop_assert!(is_exact_median(&ds, s));
        }
        let best = medians.iter().flat_map(|a| medians.iter().map(move |b| hamming(a, b))).max().unwrap();
        prop_assert_eq!(found.diameter, best);
    }

    #[test]
    fn approx_pair_is_farthest(ds in dataset(8, 6, 2..=3), eps in epsilon()) {
        let ctx = MedianContext::build(&ds);
        let budget = Budget::new(eps, ctx.opt());
        let found = approx_diameter_pair(&ctx, &budget);
        let (y, z) = &found.pair;
        let opt = ctx.opt();
        prop_assert!(admits(opt, eps, direct_cost(&ds, y)));
        prop_assert!(admits(opt, eps, direct_cost(&ds, z)));
        prop_assert_eq!(found.costs, (direct_cost(&ds, y), direct_cost(&ds, z)));
        for i in 0..ds.d() {
            prop_assert!(y[i] == ctx.w()[i] || z[i] == ctx.w()[i], "both endpoints deviate at {}", i);
        }
        let candidates = pool(&ds, eps);
        let best = candidates.iter().flat_map(|a| candidates.iter().map(move |b| hamming(a, b))).max().unwrap();
        prop_assert_eq!(found.diameter, best);
    }

    #[test]
    fn partition_is_optimal(weights in prop::collection::vec(0u64..40, 0..=14)) {
        let indices: Vec<usize> = (0..weights.len()).collect();
        let found = min_diff_partition(&indices, &weights);
        let total: u64 = weights.iter().sum();
        let (mut low, mut high) = (found.parts.0.clone(), found.parts.1.clone());
        prop_assert_eq!(found.sums.0, low.iter().map(|&i| weights[i]).sum::<u64>());
        prop_assert_eq!(found.sums.1, high.iter().map(|&i| weights[i]).sum::<u64>());
        low.append(&mut high);
        low.sort_unstable();
        prop_assert_eq!(low, indices);
        let best = (0u32..1 << weights.len())
            .map(|mask| {
                let s: u64 = (0..weights.len()).filter(|&i| mask >> i & 1 == 1).map(|i| weights[i]).sum();
                s.abs_diff(total - s)
            })
            .min()
            .unwrap();
        prop_assert_eq!(found.difference(), best);
    }

    #[test]
    fn exact_sum_dispersion_is_optimal(ds in dataset(6, 5, 2..=3), k in 1usize..=4) {
        let ctx = MedianContext::build(&ds);
        let set = sum_dispersion_exact_k(&ctx, k).unwrap();
        prop_assert_eq!(set.k(), k);
        for s in set.members() {
            prop_assert!(is_exact_median(&ds, s));
        }
        for i in 0..ds.d() {
            let counts: Vec<u32> = ctx.freq().majority_set(i).iter().map(|&a| set.char_count(i, a)).collect();
            let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
            prop_assert!(hi - lo <= 1, "index {}: counts {:?}", i, counts);
        }
        let medians = pool(&ds, Rational::zero());
        if medians.len() <= 40 {
            prop_assert_eq!(set.sum_dispersion(), naive_sumdp(&medians, k));
        }
        if let Ok(distinct) = sum_dispersion_exact_distinct(&ctx, k) {
            let mut m = distinct.members().to_vec();
            m.sort();
            m.dedup();
            prop_assert_eq!(m.len(), k);
            prop_assert_eq!(distinct.sum_dispersion(), set.sum_dispersion());
        }
    }

    #[test]
    fn density_search(ds in dataset(8, 6, 2..=3), eps in epsilon(), k in 1usize..=3) {
        let ctx = MedianContext::build(&ds);
        let budget = Budget::new(eps, ctx.opt());
        let feasible = prefix_feasibility(&ctx, &budget, k);
        prop_assert!(feasible[0]);
        prop_assert!(feasible.windows(2).all(|w| w[0] || !w[1]), "feasibility not monotone: {:?}", feasible);
        let binary = sum_dispersion_approx_k(&ctx, &budget, k, SearchMode::Binary).unwrap();
        let linear = sum_dispersion_approx_k(&ctx, &budget, k, SearchMode::Linear).unwrap();
        prop_assert_eq!(binary.prefix_len, linear.prefix_len);
        prop_assert_eq!(binary.prefix_len, feasible.iter().rposition(|&f| f).unwrap());
        prop_assert_eq!(binary.set.members(), linear.set.members());
        for s in binary.set.members() {
            prop_assert!(admits(ctx.opt(), eps, direct_cost(&ds, s)));
        }
        let candidates = pool(&ds, eps);
        prop_assume!(candidates.len() <= 60);
        let k64 = k as u64;
        let vstar = naive_sumdp(&candidates, k);
        let dstar = naive_sumdp(&candidates, 2);
        prop_assert_eq!(binary.value, sum_dispersion(binary.set.members()));
        prop_assert!(4 * vstar >= (k64 * k64 - 1) * dstar);
        prop_assert!(binary.value + k64 * k64 > vstar, "v = {}, v* = {}", binary.value, vstar);
    }

    #[test]
    fn samplers_respect_cost_classes(ds in dataset(8, 6, 2..=3), eps in epsilon(), k in 2usize..=4, seed in any::<u64>()) {
        let ctx = MedianContext::build(&ds);
        let budget = Budget::new(eps, ctx.opt());
        let cfg = SampleConfig::new(k, r(1, 2), r(1, 8), seed).unwrap();
        let exact = sample_exact_medians(&ctx, &cfg).unwrap();
        prop_assert_eq!(exact.set.k(), k);
        for s in exact.set.members() {
            prop_assert!(is_exact_median(&ds, s));
        }
        prop_assert_eq!(exact.min_dispersion, min_dispersion(exact.set.members()).unwrap());
        let approx = sample_approx_medians(&ctx, &budget, &cfg).unwrap();
        let doubled = eps.checked_add(&eps).unwrap();
        for s in approx.set.members() {
            prop_assert!(admits(ctx.opt(), doubled, direct_cost(&ds, s)));
        }
        prop_assert_eq!(approx.min_dispersion, min_dispersion(approx.set.members()).unwrap());
    }

    #[test]
    fn tstar_upper_dominates(ds in dataset(8, 5, 2..=3), eps in epsilon(), k in 2usize..=3) {
        let ctx = MedianContext::build(&ds);
        let budget = Budget::new(eps, ctx.opt());
        let candidates = pool(&ds, eps);
        prop_assume!(candidates.len() <= 60);
        let tstar = naive_mindp(&candidates, k) as u64;
        let upper = tstar_upper_bound(&ctx, &budget).unwrap();
        prop_assert!(upper.times_ge(1, tstar), "t* = {} above {}", tstar, upper);
    }

    #[test]
    fn dp_matches_brute_force(ds in dataset(6, 5, 2..=3), eps in epsilon(), k in 2usize..=3) {
        let ctx = MedianContext::build(&ds);
        let budget = Budget::new(eps, ctx.opt());
        let limits = EnumerationLimits { max_states: 1_000_000, ..EnumerationLimits::default() };
        let exact_pool = pool(&ds, Rational::zero());
        let approx_pool = pool(&ds, eps);
        prop_assume!(approx_pool.len() <= 60);
        for (found, candidates) in [
            (min_disp_dp_exact(ctx.freq(), ctx.w(), k, &limits), &exact_pool),
            (min_disp_dp_approx(&ctx, &budget, k, &limits), &approx_pool),
        ] {
            let found = match found {
                Err(Error::CapExceeded { .. }) => continue,
                other => other.unwrap(),
            };
            prop_assert_eq!(found.value, naive_mindp(candidates, k));
            prop_assert_eq!(found.members.len(), k);
            prop_assert_eq!(min_dispersion(&found.members).unwrap(), found.value);
            for s in &found.members {
                prop_assert!(candidates.binary_search(s).is_ok());
            }
        }
    }

    #[test]
    fn greedy_is_half_optimal(ds in dataset(8, 5, 2..=3), eps in epsilon(), k in 2usize..=3) {
        let candidates = pool(&ds, eps);
        prop_assume!(candidates.len() >= k && candidates.len() <= 60);
        let found = greedy_dispersion(&candidates, k, &EnumerationLimits::default()).unwrap();
        prop_assert!(!found.duplicated);
        prop_assert!(2 * found.min_dispersion >= naive_mindp(&candidates, k));
    }

    #[test]
    fn dispatchers_stay_below_diameter(ds in dataset(8, 6, 2..=3), eps in epsilon(), k in 2usize..=3, seed in 0u64..4) {
        let ctx = MedianContext::build(&ds);
        let budget = Budget::new(eps, ctx.opt());
        let limits = EnumerationLimits { max_states: 200_000, ..EnumerationLimits::default() };
        let exact = min_dispersion_dispatch_exact(&ctx, k, r(1, 2), r(1, 8), seed, &limits);
        let approx = min_dispersion_dispatch_approx(&ctx, &budget, k, r(1, 2), r(1, 8), seed, false, &limits);
        for report in [exact, approx] {
            let report = match report {
                Err(Error::CapExceeded { .. }) => continue,
                other => other.unwrap(),
            };
            prop_assert!(report.value <= report.d_star);
            prop_assert_eq!(report.value, report.set.min_dispersion());
            for s in report.set.members() {
                prop_assert!(report.cost_class.admits(ctx.opt(), direct_cost(&ds, s)));
            }
        }
    }

    #[test]
    fn rounding_picks_one_column_per_row(
        rows in prop::collection::vec(prop::collection::vec(1u32..20, 3), 1..6),
        seed in any::<u64>(),
    ) {
        let frac: Vec<Vec<f64>> = rows
            .iter()
            .map(|row| {
                let total: u32 = row.iter().sum();
                row.iter().map(|&v| v as f64 / total as f64).collect()
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let choice = dependent_round(&frac, &mut rng).unwrap();
        prop_assert_eq!(choice.len(), frac.len());
        prop_assert!(choice.iter().all(|&c| c < 3));
        let column_sums: Vec<f64> = (0..3).map(|j| frac.iter().map(|row| row[j]).sum()).collect();
        for (j, &sum) in column_sums.iter().enumerate() {
            let hits = choice.iter().filter(|&&c| c == j).count() as f64;
            prop_assert!(hits >= sum.floor() - 1e-9 && hits <= sum.ceil() + 1e-9, "column {}: {} picks, sum {}", j, hits, sum);
        }
    }
}
