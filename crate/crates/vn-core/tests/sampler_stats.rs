//! Statistical calibration of the samplers against binomial bands, under
//! fixed seeds.

use vn_core::graph::Namespace;
use vn_core::models::{
    sample_correlated_er, sample_er, sample_er_matrix, sample_rdpg, sample_sbm,
    CorrelatedErParams, LatentPositions, SbmParams,
};
use vn_core::RngState;

#[test]
fn er_mean_edge_count_in_band() {
    let mut rng = RngState::new(101).rng();
    let draws = 10_000usize;
    let mut total = 0usize;
    for _ in 0..draws {
        total += sample_er(30, 0.5, Namespace::V1, &mut rng).unwrap().edge_count();
    }
    let mean = total as f64 / draws as f64;
    // C(30,2) * 0.5 = 217.5; the 3-sigma band of the mean of 10^4 draws.
    let sigma_mean = (435.0 * 0.25 / draws as f64).sqrt();
    assert!(
        (mean - 217.5).abs() <= 3.0 * sigma_mean,
        "mean {mean} outside 217.5 +- {}",
        3.0 * sigma_mean
    );
}

#[test]
fn block_constant_matrix_reproduces_sbm_frequencies() {
    let n = 40usize;
    let (p_in, p_out) = (0.6, 0.2);
    let p: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if (i < n / 2) == (j < n / 2) { p_in } else { p_out })
                .collect()
        })
        .collect();
    let mut rng = RngState::new(102).rng();
    let draws = 400usize;
    let (mut within, mut between) = (0usize, 0usize);
    for _ in 0..draws {
        let g = sample_er_matrix(&p, Namespace::V1, &mut rng).unwrap();
        for (i, j) in g.adjacency().edges() {
            if (i < n / 2) == (j < n / 2) {
                within += 1;
            } else {
                between += 1;
            }
        }
    }
    let within_pairs = (2 * (n / 2) * (n / 2 - 1) / 2 * draws) as f64;
    let between_pairs = ((n / 2) * (n / 2) * draws) as f64;
    let f_in = within as f64 / within_pairs;
    let f_out = between as f64 / between_pairs;
    let band = |p: f64, pairs: f64| 3.0 * (p * (1.0 - p) / pairs).sqrt();
    assert!((f_in - p_in).abs() <= band(p_in, within_pairs), "within {f_in}");
    assert!((f_out - p_out).abs() <= band(p_out, between_pairs), "between {f_out}");
}

#[test]
fn sbm_two_block_densities() {
    let n = 200usize;
    let b = vec![vec![0.7, 0.1], vec![0.1, 0.3]];
    let memberships: Vec<usize> = (0..n).map(|i| if i < n / 2 { 1 } else { 2 }).collect();
    let params = SbmParams::new(2, b, memberships).unwrap();
    let mut rng = RngState::new(103).rng();
    let g = sample_sbm(&params, Namespace::V1, &mut rng);
    let mut counts = [[0usize; 2]; 2];
    for (i, j) in g.adjacency().edges() {
        let (bi, bj) = ((i >= n / 2) as usize, (j >= n / 2) as usize);
        counts[bi.min(bj)][bi.max(bj)] += 1;
    }
    let half_pairs = (n / 2 * (n / 2 - 1) / 2) as f64;
    let cross_pairs = (n / 2 * n / 2) as f64;
    let checks = [
        (counts[0][0] as f64 / half_pairs, 0.7, half_pairs),
        (counts[1][1] as f64 / half_pairs, 0.3, half_pairs),
        (counts[0][1] as f64 / cross_pairs, 0.1, cross_pairs),
    ];
    for (observed, expected, pairs) in checks {
        let band = 3.0 * (expected * (1.0 - expected) / pairs).sqrt();
        assert!(
            (observed - expected).abs() <= band,
            "density {observed} expected {expected} +- {band}"
        );
    }
}

#[test]
fn rdpg_rank_one_matches_er_density() {
    let n = 60usize;
    let x = LatentPositions::new(vec![vec![0.4f64.sqrt()]; n]).unwrap();
    let mut rng = RngState::new(104).rng();
    let draws = 200usize;
    let mut edges = 0usize;
    for _ in 0..draws {
        edges += sample_rdpg(&x, Namespace::V1, &mut rng).edge_count();
    }
    let pairs = (n * (n - 1) / 2 * draws) as f64;
    let density = edges as f64 / pairs;
    let band = 3.0 * (0.4 * 0.6 / pairs).sqrt();
    assert!((density - 0.4).abs() <= band, "density {density}");
}

#[test]
fn correlated_joint_moment_and_marginals() {
    // E[A B] = p^2 + rho p (1 - p) = 0.4 at p = 0.5, rho = 0.6.
    let params = CorrelatedErParams::constant(2, 0.5, 0.6).unwrap();
    let mut rng = RngState::new(105).rng();
    let draws = 100_000usize;
    let (mut joint, mut first, mut second) = (0usize, 0usize, 0usize);
    for _ in 0..draws {
        let (a, b) = sample_correlated_er(&params, &mut rng);
        let ea = a.edge_count();
        let eb = b.edge_count();
        first += ea;
        second += eb;
        joint += ea * eb;
    }
    let n = draws as f64;
    let jm = joint as f64 / n;
    let sigma_joint = (0.4 * 0.6 / n).sqrt();
    assert!((jm - 0.4).abs() <= 4.0 * sigma_joint, "joint moment {jm}");
    let sigma_marginal = (0.25 / n).sqrt();
    assert!((first as f64 / n - 0.5).abs() <= 4.0 * sigma_marginal);
    assert!((second as f64 / n - 0.5).abs() <= 4.0 * sigma_marginal);
}

#[test]
fn independent_pairs_have_vanishing_covariance() {
    let params = CorrelatedErParams::constant(2, 0.5, 0.0).unwrap();
    let mut rng = RngState::new(106).rng();
    let draws = 50_000usize;
    let (mut joint, mut first, mut second) = (0usize, 0usize, 0usize);
    for _ in 0..draws {
        let (a, b) = sample_correlated_er(&params, &mut rng);
        first += a.edge_count();
        second += b.edge_count();
        joint += a.edge_count() * b.edge_count();
    }
    let n = draws as f64;
    let cov = joint as f64 / n - (first as f64 / n) * (second as f64 / n);
    assert!(cov.abs() <= 3.0 * (0.25 * 0.25f64 / n).sqrt() + 3.0 / n, "cov {cov}");
}

#[test]
fn negative_correlation_is_sampled_correctly() {
    // rho = -0.5 at p = 0.5: E[AB] = 0.25 - 0.5 * 0.25 = 0.125.
    let params = CorrelatedErParams::constant(2, 0.5, -0.5).unwrap();
    let mut rng = RngState::new(107).rng();
    let draws = 50_000usize;
    let mut joint = 0usize;
    for _ in 0..draws {
        let (a, b) = sample_correlated_er(&params, &mut rng);
        joint += a.edge_count() * b.edge_count();
    }
    let jm = joint as f64 / draws as f64;
    let sigma = (0.125 * 0.875 / draws as f64).sqrt();
    assert!((jm - 0.125).abs() <= 4.0 * sigma, "joint moment {jm}");
}

#[test]
fn boundary_correlation_samples_without_error() {
    // The lower feasibility edge at p = 0.5 is rho = -1 (perfect anti-correlation).
    let params = CorrelatedErParams::constant(2, 0.5, -1.0).unwrap();
    let mut rng = RngState::new(108).rng();
    for _ in 0..2_000 {
        let (a, b) = sample_correlated_er(&params, &mut rng);
        assert_eq!(a.edge_count() + b.edge_count(), 1, "anti-correlated pair must disagree");
    }
}
