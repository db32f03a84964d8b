mod common;

use std::collections::HashMap;

use butterfly_core::{
    exact_butterfly_count, BucketSampler, Edge, ExactCounter, HashConfig, OpCounters, PqRule, PqSampler,
    StreamEstimator,
};
use proptest::prelude::*;
use rayon::prelude::*;

use common::{bernoulli_graph, brute_bottom_m, brute_butterflies, first_occurrences, matching, sprinkle_repeats};

fn stream_strategy(max_id: u64, max_len: usize) -> impl Strategy<Value = Vec<Edge>> {
    prop::collection::vec((0..max_id, 0..max_id), 1..max_len)
        .prop_map(|v| v.into_iter().map(|(u, w)| Edge::new(u, w)).collect())
}

fn counters_grow(a: &OpCounters, b: &OpCounters) -> bool {
    b.elements_processed >= a.elements_processed
        && b.distinct_samples_admitted >= a.distinct_samples_admitted
        && b.evictions >= a.evictions
        && b.butterfly_probe_work >= a.butterfly_probe_work
        && b.peak_edge_slots >= a.peak_edge_slots
        && b.peak_aux_slots >= a.peak_aux_slots
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn repeats_do_not_change_state(base in stream_strategy(14, 300), extra in 0usize..300, seed in any::<u64>()) {
        let noisy = sprinkle_repeats(&base, extra, seed);
        let cfg = HashConfig::from_trial_seed(seed, 16).unwrap();
        for rule in [PqRule::Deabc, PqRule::Fable] {
            let (mut a, mut b) = (PqSampler::new(rule, cfg), PqSampler::new(rule, cfg));
            a.process_all(base.iter().copied());
            b.process_all(noisy.iter().copied());
            prop_assert!(a == b, "{rule:?} diverged");
        }
        let (mut a, mut b) = (BucketSampler::new(cfg), BucketSampler::new(cfg));
        a.process_all(base.iter().copied());
        b.process_all(noisy.iter().copied());
        prop_assert!(a == b, "bucket sampler diverged");
    }

    #[test]
    fn structural_invariants_hold_throughout(stream in stream_strategy(12, 400), seed in any::<u64>()) {
        let cfg = HashConfig::from_trial_seed(seed, 16).unwrap();
        let mut pq = PqSampler::deabc(cfg);
        let mut fable = PqSampler::fable(cfg);
        let mut bucket = BucketSampler::new(cfg);
        let mut last = [0.0f64; 3];
        let mut last_counters = [OpCounters::default(); 3];
        for e in stream {
            pq.process(e);
            fable.process(e);
            bucket.process(e);
            pq.check_invariants().map_err(TestCaseError::fail)?;
            fable.check_invariants().map_err(TestCaseError::fail)?;
            bucket.check_invariants().map_err(TestCaseError::fail)?;
            let ests: [&dyn StreamEstimator; 3] = [&pq, &fable, &bucket];
            for (i, est) in ests.iter().enumerate() {
                prop_assert!(est.estimate() >= last[i]);
                prop_assert!(est.counters().peak_edge_slots <= 16);
                prop_assert!(counters_grow(&last_counters[i], &est.counters()));
                last[i] = est.estimate();
                last_counters[i] = est.counters();
            }
        }
    }

    #[test]
    fn queue_holds_bottom_m(stream in stream_strategy(40, 1500), seed in any::<u64>(), m in 16usize..64) {
        let cfg = HashConfig::from_trial_seed(seed, m).unwrap();
        let mut s = PqSampler::fable(cfg);
        s.process_all(stream.iter().copied());
        let mut got: Vec<Edge> = s.sample().edges().collect();
        got.sort();
        prop_assert_eq!(got, brute_bottom_m(&stream, |e| cfg.priority_of(e).value(), m));
    }

    #[test]
    fn buckets_keep_their_minimum(stream in stream_strategy(30, 800), seed in any::<u64>()) {
        let cfg = HashConfig::from_trial_seed(seed, 16).unwrap();
        let mut s = BucketSampler::new(cfg);
        s.process_all(stream.iter().copied());
        let mut best: HashMap<usize, Edge> = HashMap::new();
        for &e in &stream {
            let b = cfg.bucket_of(e);
            let keep = best.get(&b).is_some_and(|o| cfg.priority_of(*o) <= cfg.priority_of(e));
            if !keep {
                best.insert(b, e);
            }
        }
        for i in 0..16 {
            prop_assert_eq!(s.occupant(i).map(|(e, _)| e), best.get(&i).copied());
        }
        prop_assert_eq!(s.nonempty(), best.len());
    }
}

#[test]
fn bottom_m_on_large_stream() {
    let stream = bernoulli_graph(100, 100, 0.45, 8);
    assert!(stream.len() <= 5000);
    let dup = sprinkle_repeats(&stream, 2000, 1);
    for seed in 0..5 {
        let cfg = HashConfig::from_trial_seed(seed, 500).unwrap();
        let mut s = PqSampler::deabc(cfg);
        s.process_all(dup.iter().copied());
        let mut got: Vec<Edge> = s.sample().edges().collect();
        got.sort();
        assert_eq!(got, brute_bottom_m(&stream, |e| cfg.priority_of(e).value(), 500));
    }
}

#[test]
fn exact_mode_matches_oracle_on_every_prefix() {
    let base = bernoulli_graph(30, 30, 0.4, 2);
    let stream = sprinkle_repeats(&base, 300, 4);
    let cfg = HashConfig::from_trial_seed(6, base.len()).unwrap();
    for rule in [PqRule::Deabc, PqRule::Fable] {
        let mut s = PqSampler::new(rule, cfg);
        let mut exact = ExactCounter::new();
        for (i, &e) in stream.iter().enumerate() {
            s.process(e);
            exact.process(e);
            assert_eq!(s.estimate(), exact.estimate(), "{rule:?} at element {i}");
        }
        assert_eq!(s.estimate() as u64, brute_butterflies(&base));
    }
}

#[test]
fn empty_estimators_report_zero() {
    let cfg = HashConfig::from_trial_seed(0, 16).unwrap();
    assert_eq!(PqSampler::deabc(cfg).estimate(), 0.0);
    assert_eq!(PqSampler::fable(cfg).estimate(), 0.0);
    assert_eq!(BucketSampler::new(cfg).estimate(), 0.0);
    assert_eq!(ExactCounter::new().estimate(), 0.0);
}

#[test]
fn exact_counter_ignores_repeats() {
    let base = bernoulli_graph(15, 15, 0.5, 12);
    let stream = sprinkle_repeats(&base, 500, 3);
    let mut c = ExactCounter::new();
    c.process_all(stream.iter().copied());
    assert_eq!(c.count(), exact_butterfly_count(first_occurrences(&stream)));
    assert_eq!(c.counters().elements_processed, stream.len() as u64);
}

/// `h_max` after the whole stream is the `M`-th smallest of `m_d` uniforms,
/// whose mean is `M / (m_d + 1)`.
#[test]
fn threshold_mean_matches_order_statistic() {
    let (m, m_d) = (64usize, 1000u64);
    let stream = matching(m_d);
    let hs: Vec<f64> = (0..2000u64)
        .into_par_iter()
        .map(|seed| {
            let mut s = PqSampler::deabc(HashConfig::from_trial_seed(seed, m).unwrap());
            s.process_all(stream.iter().copied());
            s.h_max()
        })
        .collect();
    let mean = common::mean(&hs);
    let se = (common::variance(&hs) / hs.len() as f64).sqrt();
    let target = m as f64 / (m_d + 1) as f64;
    assert!((mean - target).abs() <= 4.0 * se, "mean {mean}, target {target}, se {se}");
}
