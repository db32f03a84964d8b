mod common;

use butterfly_core::distinct::{inv_pow2, kmv_estimate};
use butterfly_core::{BucketSampler, Edge, FmState, HashConfig, PqSampler, Priority, StreamEstimator};
use proptest::prelude::*;
use rayon::prelude::*;

use common::{matching, mean, sprinkle_repeats, variance};

const M: usize = 256;
const N: u64 = 10_000;

fn fm_and_kmv(seed: u64, stream: &[Edge]) -> (f64, f64) {
    let cfg = HashConfig::from_trial_seed(seed, M).unwrap();
    let mut bucket = BucketSampler::new(cfg);
    let mut pq = PqSampler::fable(cfg);
    for &e in stream {
        bucket.process(e);
        pq.process(e);
    }
    (bucket.fm().m_hat(), pq.kmv_distinct().unwrap())
}

#[test]
fn both_estimators_centre_on_distinct_count() {
    let stream = matching(N);
    let runs: Vec<(f64, f64)> = (0..500u64).into_par_iter().map(|s| fm_and_kmv(s, &stream)).collect();
    let fm: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let kmv: Vec<f64> = runs.iter().map(|r| r.1).collect();
    let n = N as f64;
    for (name, xs) in [("fm", &fm), ("kmv", &kmv)] {
        let rel = (mean(xs) - n).abs() / n;
        assert!(rel < 0.02, "{name} mean off by {:.2}%", rel * 100.0);
    }
    let fm_bound = 1.5 * n * n / (std::f64::consts::LOG2_E * M as f64);
    assert!(variance(&fm) <= fm_bound, "fm variance {} above {fm_bound}", variance(&fm));
    let kmv_sd_bound = 1.5 * n / ((M - 2) as f64).sqrt();
    assert!(variance(&kmv).sqrt() <= kmv_sd_bound);
}

#[test]
fn observe_trace() {
    let mut s = FmState::new(4);
    s.observe(2, 0);
    assert_eq!(s.m_hat(), 1.0);
    assert_eq!(s.q(), 0.8125);
    // The next increment uses the q left by the previous step.
    s.observe(1, 0);
    assert_eq!(s.m_hat(), 1.0 + 1.0 / 0.8125);
    assert_eq!(s.q(), 0.8125 - 0.125);
    let before = s;
    s.observe(3, 3);
    assert_eq!(s, before);
}

#[test]
fn kmv_formula() {
    assert_eq!(kmv_estimate(Priority::new(0.5).unwrap(), 101), 200.0);
    let nearly_one = Priority::new(1.0 - f64::EPSILON).unwrap();
    assert!(kmv_estimate(nearly_one, 5) > 4.0);
}

#[test]
fn inverse_powers_are_exact() {
    for n in 0..60 {
        assert_eq!(inv_pow2(n), 0.5f64.powi(n as i32));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn running_sum_matches_registers(
        pairs in prop::collection::vec((0u64..60, 0u64..60), 1..600),
        seed in any::<u64>(),
    ) {
        let mut s = BucketSampler::new(HashConfig::from_trial_seed(seed, 16).unwrap());
        let mut last = 0.0;
        for (u, v) in pairs {
            s.process(Edge::new(u, v));
            let q = FmState::q_from_registers(&s.registers());
            prop_assert!((s.fm().q() - q).abs() <= 1e-9 * q);
            prop_assert!(s.fm().q() > 0.0 && s.fm().q() <= 1.0);
            prop_assert!(s.fm().m_hat() >= last);
            last = s.fm().m_hat();
        }
    }

    #[test]
    fn repeats_leave_both_counters_alone(n in 20u64..400, extra in 0usize..400, seed in any::<u64>()) {
        let base = matching(n);
        let noisy = sprinkle_repeats(&base, extra, seed);
        let cfg = HashConfig::from_trial_seed(seed, 16).unwrap();
        let (mut b1, mut b2) = (BucketSampler::new(cfg), BucketSampler::new(cfg));
        let (mut p1, mut p2) = (PqSampler::fable(cfg), PqSampler::fable(cfg));
        b1.process_all(base.iter().copied());
        b2.process_all(noisy.iter().copied());
        p1.process_all(base.iter().copied());
        p2.process_all(noisy.iter().copied());
        prop_assert_eq!(b1.fm(), b2.fm());
        prop_assert_eq!(p1.kmv_distinct().map(f64::to_bits), p2.kmv_distinct().map(f64::to_bits));
    }
}
