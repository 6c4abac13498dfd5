use knapdc_core::randmodel::*;

#[test]
fn shape_of_a_sample() {
    let r = sample(ModelParams::new(12, 2024));
    assert_eq!(r.instance.len(), 13);
    assert!(r.instance.weights().iter().all(|&w| (1..=12).contains(&w)));
    let g = r.efficiencies();
    assert!(g.windows(2).all(|w| w[0] >= w[1]));
    for (i, (&w, &p)) in r
        .instance
        .weights()
        .iter()
        .zip(r.instance.profits())
        .enumerate()
    {
        assert_eq!(p, g[i] * w as f64);
    }
    assert_eq!(sample(ModelParams::new(12, 2024)), r);
}

#[test]
fn stream_count_and_sub_seeds() {
    let p = ModelParams::new(63, 1);
    let all: Vec<_> = sample_stream(p, 1127).collect();
    assert_eq!(all.len(), 1127);
    assert_eq!(all[0], sample_trial(p, 1));
    assert_ne!(all[0].instance, all[1].instance);
    assert_ne!(sample_trial(p, 1), sample_trial(ModelParams::new(63, 2), 1));
}

#[test]
fn weights_are_uniform() {
    let delta = 10u64;
    let p = ModelParams::new(delta, 31);
    let mut counts = vec![0u64; delta as usize + 1];
    let mut draws = 0u64;
    let mut inc_sum = 0.0;
    let mut inc_n = 0u64;
    for r in sample_stream(p, 100_000 / (delta + 1) + 1) {
        for &w in r.instance.weights() {
            counts[w as usize] += 1;
            draws += 1;
        }
        inc_sum += r.increments.iter().sum::<f64>();
        inc_n += r.increments.len() as u64;
    }
    let expect = draws as f64 / delta as f64;
    let sd = (expect * (1.0 - 1.0 / delta as f64)).sqrt();
    for &c in &counts[1..] {
        assert!((c as f64 - expect).abs() < 3.0 * sd, "{counts:?}");
    }
    let mean = inc_sum / inc_n as f64;
    let se = (1.0 / 12.0 / inc_n as f64).sqrt();
    assert!((mean - 0.5).abs() < 3.0 * se);
}
