use ordstat_core::joint_dist::{cond_cdf_between, cond_cdf_given_leq, joint_cdf_multi, joint_cdf_single};
use ordstat_core::mc_oracle::{mc_conditional_prob, mc_event_prob, Draw};
use ordstat_core::{LifetimeModel, McEstimate, RngSeed, SystemConfig, Window};

const REPS: u64 = 1_000_000;

fn assert_close(est: &McEstimate, exact: f64, sigmas: f64) {
    assert!(est.effective_samples() >= 1e4, "only {} effective samples", est.effective_samples());
    let z = est.z_score(exact);
    assert!(z <= sigmas, "estimate {} vs exact {exact}: z = {z:.2}", est.estimate);
}

#[test]
fn joint_cdf_single_against_simulation() {
    let c = SystemConfig::new(15, 7).unwrap();
    let m = LifetimeModel::exponential(1.0).unwrap();
    let est = mc_event_prob(&c, &m, |d: &Draw<'_>| d.component(1) <= 1.0 && d.order_stat(7) <= 2.0, REPS, RngSeed(1))
        .unwrap();
    assert_close(&est, joint_cdf_single(&c, &m, 1.0, 2.0).unwrap(), 3.0);
}

#[test]
fn first_component_fails_before_system() {
    let c = SystemConfig::new(12, 5).unwrap();
    for (seed, m) in [
        LifetimeModel::exponential(2.0).unwrap(),
        LifetimeModel::weibull(0.7, 3.0).unwrap(),
        LifetimeModel::uniform(1.0, 2.0).unwrap(),
    ]
    .into_iter()
    .enumerate()
    {
        let est = mc_event_prob(&c, &m, |d: &Draw<'_>| d.component(1) < d.order_stat(5), REPS, RngSeed(seed as u64))
            .unwrap();
        assert_close(&est, 4.0 / 12.0, 3.0);
    }
}

#[test]
fn window_conditional_against_simulation() {
    let c = SystemConfig::new(10, 4).unwrap();
    let m = LifetimeModel::exponential(1.0).unwrap();
    let w = Window::new(1.0, 2.0).unwrap();
    for (i, x) in [0.5, 1.5, 2.5].into_iter().enumerate() {
        let est = mc_conditional_prob(
            &c,
            &m,
            |d: &Draw<'_>| d.component(1) <= x,
            |d: &Draw<'_>| (1.0..=2.0).contains(&d.order_stat(4)),
            REPS,
            RngSeed(40 + i as u64),
        )
        .unwrap();
        assert_close(&est, cond_cdf_between(&c, &m, x, &w).unwrap(), 4.0);
    }
}

#[test]
fn given_leq_against_simulation() {
    let c = SystemConfig::new(8, 3).unwrap();
    let m = LifetimeModel::weibull(2.0, 1.0).unwrap();
    for (i, x) in [0.3, 0.6, 1.2].into_iter().enumerate() {
        let est = mc_conditional_prob(
            &c,
            &m,
            |d: &Draw<'_>| d.component(1) <= x,
            |d: &Draw<'_>| d.order_stat(3) <= 0.6,
            REPS,
            RngSeed(70 + i as u64),
        )
        .unwrap();
        assert_close(&est, cond_cdf_given_leq(&c, &m, x, 0.6).unwrap(), 4.0);
    }
}

#[test]
fn multi_observation_joint_against_simulation() {
    let c = SystemConfig::new(6, 4).unwrap();
    let m = LifetimeModel::exponential(1.0).unwrap();
    let xs = [0.4, 0.9, 0.7];
    let t = 1.1;
    let est = mc_event_prob(
        &c,
        &m,
        |d: &Draw<'_>| xs.iter().enumerate().all(|(i, &x)| d.component(i + 1) <= x) && d.order_stat(4) <= t,
        REPS,
        RngSeed(9),
    )
    .unwrap();
    assert_close(&est, joint_cdf_multi(&c, &m, &xs, t).unwrap(), 4.0);
}

#[test]
fn failure_indicators_are_exchangeable() {
    let c = SystemConfig::new(9, 4).unwrap();
    let m = LifetimeModel::exponential(1.0).unwrap();
    let flags = |d: &Draw<'_>| {
        let f: Vec<bool> = d.failed_before(4).take(2).collect();
        (f[0], f[1])
    };
    let first = mc_event_prob(&c, &m, |d: &Draw<'_>| flags(d) == (true, false), REPS, RngSeed(100)).unwrap();
    let second = mc_event_prob(&c, &m, |d: &Draw<'_>| flags(d) == (false, true), REPS, RngSeed(101)).unwrap();
    let sigma = first.std_error.hypot(second.std_error);
    assert!((first.estimate - second.estimate).abs() <= 4.0 * sigma);
    // Both equal lambda_1 - lambda_2 = 3/9 - (3/9)(2/8).
    assert_close(&first, 3.0 / 9.0 - 1.0 / 12.0, 4.0);
}
