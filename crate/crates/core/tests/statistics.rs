use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use propgraph::graph::{compute_ad_matrix, estimate_threshold, gaussian_kde, KdeConfig};
use propgraph::preprocess::{central_derivative, mean_sd, standardize};
use propgraph::synth::{gen_binary, gen_real_valued, BinaryParams};
use propgraph::CostModel;

const SPLIT_SEED: u64 = 2;

fn mixture(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = Vec::new();
    for mu in [10.0, 40.0] {
        let d = Normal::new(mu, 1.0).unwrap();
        v.extend((0..200).map(|_| d.sample(&mut rng)));
    }
    v
}

#[test]
fn kde_splits_two_clusters() {
    // Equal clusters: which mode is higher depends on the draw. This seed
    // puts the highest peak on the lower cluster.
    let v = mixture(SPLIT_SEED);
    let th = estimate_threshold(&v, &KdeConfig::default()).unwrap();
    assert!(th.grid[th.peak] < 25.0);
    assert!(th.theta >= 15.0 && th.theta <= 35.0, "theta {}", th.theta);

    let xs: Vec<f64> = (0..=35_000).map(|k| 12.0 + k as f64 * 0.001).collect();
    let dense = gaussian_kde(&v, 3.0, &xs);
    let k = (1..dense.len() - 1)
        .find(|&k| dense[k - 1] > dense[k] && dense[k] < dense[k + 1])
        .unwrap();
    let step = th.grid[1];
    assert!((th.theta - xs[k]).abs() <= step, "{} vs {}", th.theta, xs[k]);
}

#[test]
fn kde_higher_upper_mode_has_no_valley_above() {
    let v = (0..50)
        .map(mixture)
        .find(|v| {
            let th = estimate_threshold(v, &KdeConfig::default()).unwrap();
            th.grid[th.peak] > 25.0
        })
        .unwrap();
    let th = estimate_threshold(&v, &KdeConfig::default()).unwrap();
    assert_eq!(th.valley, None);
    assert_eq!(th.theta, v.iter().copied().fold(f64::MIN, f64::max));
}

#[test]
fn kde_unimodal_falls_back_to_max() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let d = Normal::new(20.0, 1.0).unwrap();
    let v: Vec<f64> = (0..300).map(|_| d.sample(&mut rng)).collect();
    let max = v.iter().copied().fold(f64::MIN, f64::max);
    let th = estimate_threshold(&v, &KdeConfig::default()).unwrap();
    assert_eq!(th.valley, None);
    assert_eq!(th.theta, max);
}

#[test]
fn kde_integrates_to_one() {
    let v = [3.0, 9.0, 30.0];
    let xs: Vec<f64> = (0..8000).map(|k| -20.0 + k as f64 * 0.01).collect();
    let mass: f64 = gaussian_kde(&v, 3.0, &xs).iter().sum::<f64>() * 0.01;
    assert!((mass - 1.0).abs() < 1e-6);
}

#[test]
fn valley_stable_under_finer_grid() {
    for seed in 0..5 {
        let b = gen_real_valued(seed);
        let ad = compute_ad_matrix(&b.sequences, &CostModel::warping_abs()).unwrap();
        let v = ad.oriented_magnitudes();
        let coarse = estimate_threshold(&v, &KdeConfig::default()).unwrap();
        let fine = estimate_threshold(
            &v,
            &KdeConfig {
                grid_points: 5120,
                ..KdeConfig::default()
            },
        )
        .unwrap();
        let max = v.iter().copied().fold(0.0, f64::max);
        let step = max / 511.0;
        assert!(
            (coarse.theta - fine.theta).abs() <= step,
            "seed {seed}: {} vs {}",
            coarse.theta,
            fine.theta
        );
    }
}

#[test]
fn delay_keeps_value_three_quarters_of_the_time() {
    let (mut stay, mut total) = (0u64, 0u64);
    let mut seed = 0;
    while total < 1_000_000 {
        for trace in gen_real_valued(seed).true_delays.values() {
            for w in trace.values.windows(2) {
                stay += u64::from(w[0] == w[1]);
                total += 1;
            }
        }
        seed += 1;
    }
    let rate = stay as f64 / total as f64;
    assert!((rate - 0.75).abs() <= 0.01, "stay rate {rate}");
}

#[test]
fn firing_rate_per_opportunity() {
    let params = BinaryParams::new(0.5);
    let (mut fired, mut chances) = (0u64, 0u64);
    for seed in 0..20 {
        let b = gen_binary(&params, seed).unwrap();
        let n = b.sequences.len();
        let s: Vec<Vec<bool>> = (0..n).map(|i| b.states(i).collect()).collect();
        for i in 1..n {
            let mut last: Option<usize> = None;
            for t in 2..=params.length {
                let triggered = (0..n).any(|j| j != i && b.distance(i, j) <= params.radius && s[j][t - 2]);
                let rested = last.is_none_or(|l| t - l > params.refractory);
                if triggered && rested {
                    chances += 1;
                    fired += u64::from(s[i][t - 1]);
                }
                if s[i][t - 1] {
                    assert!(triggered && rested, "firing outside an opportunity");
                    last = Some(t);
                }
            }
        }
    }
    let rate = fired as f64 / chances as f64;
    assert!((rate - 0.5).abs() <= 0.02, "rate {rate} over {chances}");
}

#[test]
fn source_fires_on_schedule() {
    let b = gen_binary(&BinaryParams::new(1.0), 9).unwrap();
    let s: Vec<bool> = b.states(0).collect();
    for (k, &on) in s.iter().enumerate() {
        assert_eq!(on, (k + 1) % 10 == 1);
    }
}

#[test]
fn generators_are_deterministic() {
    let p = BinaryParams::new(0.8);
    assert_eq!(gen_binary(&p, 4).unwrap().sequences, gen_binary(&p, 4).unwrap().sequences);
    assert!(gen_binary(&BinaryParams::new(0.0), 1).is_err());
}

#[test]
fn derivative_is_linear() {
    let x: Vec<f64> = (0..40).map(|t| (t as f64 * 0.3).sin()).collect();
    let y: Vec<f64> = (0..40).map(|t| (t as f64 * 0.11).cos() * 2.0 + t as f64).collect();
    let (a, c) = (2.5, -0.75);
    let mix: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + c * q).collect();
    let (dx, dy, dm) = (
        central_derivative(&x).unwrap(),
        central_derivative(&y).unwrap(),
        central_derivative(&mix).unwrap(),
    );
    for k in 0..dm.len() {
        assert!((dm[k] - (a * dx[k] + c * dy[k])).abs() < 1e-12);
    }
}

#[test]
fn standardize_inverts() {
    let x = [3.0, 8.5, -1.0, 4.25, 10.0, 0.5];
    let (m, sd) = mean_sd(&x).unwrap();
    let z = standardize(&x).unwrap();
    for (orig, zi) in x.iter().zip(z) {
        assert!((zi * sd + m - orig).abs() < 1e-12);
    }
}
