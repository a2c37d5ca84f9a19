use std::collections::BTreeMap;

use boson_core::bench::trace_sample;
use boson_core::haar_unitary;
use boson_core::permanent::reduced_state_count;
use boson_core::rng::stream_rng;
use boson_core::sampler::{draw_sample, sample_batch};
use proptest::prelude::*;

#[test]
fn first_port_marginal_averages_input_rows() {
    let (n, modes, count) = (3usize, 5usize, 60_000u64);
    let u = haar_unitary(modes, 404).unwrap();
    let mut hits = vec![0u64; modes];
    let mut rng = stream_rng(1, 0);
    for _ in 0..count {
        hits[draw_sample(&u, n, &mut rng).unwrap().ports[0]] += 1;
    }
    for (l, &h) in hits.iter().enumerate() {
        let p: f64 = (0..n).map(|k| u.matrix()[(k, l)].norm_sqr()).sum::<f64>() / n as f64;
        let se = (p * (1.0 - p) / count as f64).sqrt();
        let f = h as f64 / count as f64;
        assert!((f - p).abs() < 4.0 * se, "port {l}: {f} vs {p}");
    }
}

#[test]
fn reordered_sequences_are_equally_likely() {
    let (n, modes, count) = (2usize, 4usize, 80_000u64);
    let u = haar_unitary(modes, 505).unwrap();
    let mut seqs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rng = stream_rng(2, 0);
    for _ in 0..count {
        let s = draw_sample(&u, n, &mut rng).unwrap();
        *seqs.entry((s.ports[0], s.ports[1])).or_default() += 1;
    }
    for a in 0..modes {
        for b in (a + 1)..modes {
            let x = seqs.get(&(a, b)).copied().unwrap_or(0) as f64;
            let y = seqs.get(&(b, a)).copied().unwrap_or(0) as f64;
            // Equal means: the difference of two counts has variance about x + y.
            assert!(
                (x - y).abs() < 4.0 * (x + y).sqrt().max(1.0),
                "({a},{b}): {x} vs {y}"
            );
        }
    }
}

#[test]
fn batches_are_determined_by_seed_and_index() {
    let u = haar_unitary(6, 8).unwrap();
    let batch = sample_batch(&u, 4, 64, 1234).unwrap();
    for (i, s) in batch.samples.iter().enumerate() {
        let again = sample_batch(&u, 4, i + 1, 1234).unwrap();
        assert_eq!(&again.samples[i], s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn step_costs_follow_prefix_products(seed in any::<u64>(), n in 1usize..7, extra in 0usize..4) {
        let modes = n + extra;
        let u = haar_unitary(modes, seed).unwrap();
        let t = trace_sample(&u, n, &mut stream_rng(seed, 9)).unwrap();
        for step in &t.steps {
            let mult: Vec<usize> = step.occupations.iter().copied().filter(|&k| k > 0).collect();
            let expect = if mult.is_empty() { 1 } else { reduced_state_count(&mult) };
            prop_assert_eq!(u128::from(step.states), expect);
        }
        prop_assert!(t.envelope.contains(t.total.states));
    }
}
