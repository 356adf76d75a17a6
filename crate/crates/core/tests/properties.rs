use num_traits::{One, Signed};
use proptest::prelude::*;

use ordstat_core::joint_dist::{
    cond_cdf_between, cond_cdf_given_eq, cond_cdf_given_leq, joint_cdf_single, order_stat_window_prob,
};
use ordstat_core::mc_oracle::exhaustive_inspection_pmf;
use ordstat_core::special_fns::{binom_tail, reg_inc_beta, BetaParams};
use ordstat_core::{inspection_pmf, LifetimeModel, SystemConfig, Window};

fn model_strategy() -> impl Strategy<Value = LifetimeModel> {
    prop_oneof![
        (0.1f64..4.0).prop_map(|rate| LifetimeModel::exponential(rate).unwrap()),
        (0.5f64..4.0, 0.3f64..3.0).prop_map(|(k, s)| LifetimeModel::weibull(k, s).unwrap()),
        (0.0f64..2.0, 0.2f64..4.0).prop_map(|(lo, w)| LifetimeModel::uniform(lo, lo + w).unwrap()),
    ]
}

fn config_strategy(max_n: usize) -> impl Strategy<Value = SystemConfig> {
    (1..=max_n).prop_flat_map(|n| (Just(n), 1..=n)).prop_map(|(n, r)| SystemConfig::new(n, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn difference_identity(cfg in config_strategy(20), model in model_strategy(),
                           u1 in 0.02f64..0.9, du in 0.05f64..0.5, ux in 0.0f64..0.999) {
        let u2 = (u1 + du).min(0.98);
        let w = Window::new(model.quantile(u1).unwrap(), model.quantile(u2).unwrap()).unwrap();
        let x = model.quantile(ux.max(1e-6)).unwrap();
        let lhs = cond_cdf_between(&cfg, &model, x, &w).unwrap() * order_stat_window_prob(&cfg, &model, &w);
        let rhs = joint_cdf_single(&cfg, &model, x, w.t2()).unwrap() - joint_cdf_single(&cfg, &model, x, w.t1()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn conditional_laws_are_cdfs(cfg in config_strategy(20), model in model_strategy(),
                                 ut in 0.05f64..0.95, ua in 0.0f64..0.999, ub in 0.0f64..0.999) {
        let t = model.quantile(ut).unwrap();
        let (lo, hi) = if ua <= ub { (ua, ub) } else { (ub, ua) };
        let (xa, xb) = (model.quantile(lo.max(1e-9)).unwrap(), model.quantile(hi.max(1e-9)).unwrap());
        for law in [
            |c: &SystemConfig, m: &LifetimeModel, x: f64, t: f64| cond_cdf_given_leq(c, m, x, t),
            |c: &SystemConfig, m: &LifetimeModel, x: f64, t: f64| cond_cdf_given_eq(c, m, x, t),
        ] {
            let a = law(&cfg, &model, xa, t).unwrap();
            let b = law(&cfg, &model, xb, t).unwrap();
            prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
            prop_assert!(a <= b + 1e-14);
        }
    }

    #[test]
    fn beta_equals_binomial_tail(a in 1usize..40, b in 1usize..40, p in 0.0f64..=1.0) {
        let beta = reg_inc_beta(BetaParams::new(a, b, p).unwrap());
        let tail = binom_tail(a + b - 1, a, p).unwrap();
        prop_assert!((beta - tail).abs() <= 1e-12);
    }

    #[test]
    fn inspection_pmf_is_a_distribution(n in 2usize..40, r_seed in 0usize..1000, k_seed in 0usize..1000) {
        let r = 2 + r_seed % (n - 1);
        let k = 1 + k_seed % (r - 1);
        let pmf = inspection_pmf(&SystemConfig::new(n, r).unwrap(), k).unwrap();
        prop_assert!(pmf.probs().iter().all(|p| !p.is_negative()));
        prop_assert!(pmf.probs().iter().sum::<ordstat_core::Rational>().is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_matches_closed_form(n in 2usize..=9, r_seed in 0usize..100, k_seed in 0usize..100) {
        let r = 2 + r_seed % (n - 1);
        let k = 1 + k_seed % (r - 1);
        let cfg = SystemConfig::new(n, r).unwrap();
        prop_assert_eq!(exhaustive_inspection_pmf(&cfg, k).unwrap(), inspection_pmf(&cfg, k).unwrap());
    }
}
