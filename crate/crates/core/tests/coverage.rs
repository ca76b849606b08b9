use pareto_tail::coverage_sim::{run_coverage, CoverageConfig};
use pareto_tail::variance_ci::{sigma_hat_bootstrap, sigma_hat_jackknife, sigma_hat_plugin, VarianceMethod};
use pareto_tail::{DistributionSpec, RngStream};

const PARETO_1: DistributionSpec = DistributionSpec::ParetoI { x_m: 1.0, alpha: 1.0 };

fn plugin_cell(n_eff: f64, level: f64, reps: usize) -> CoverageConfig {
    CoverageConfig {
        dist: PARETO_1,
        u: 2.0,
        n_eff,
        level,
        reps,
        methods: vec![VarianceMethod::Unbiased],
        seed: 31,
    }
}

#[test]
fn variance_estimators_agree_at_large_effective_size() {
    // n_eff = 160 at u = 2 means n = 640.
    for seed in 0..3 {
        let x = PARETO_1.sample(640, RngStream::new(seed, 0)).unwrap();
        let s = [
            sigma_hat_plugin(&x, 2.0).unwrap(),
            sigma_hat_jackknife(&x, 2.0).unwrap(),
            sigma_hat_bootstrap(&x, 2.0, 999, seed).unwrap(),
        ];
        for i in 0..3 {
            for j in i + 1..3 {
                let rel = (s[i] - s[j]).abs() / s[i].max(s[j]);
                assert!(rel < 0.2, "seed {seed}: {s:?}");
            }
        }
    }
}

#[test]
fn coverage_improves_with_effective_size() {
    let small = run_coverage(&plugin_cell(10.0, 0.95, 4000)).unwrap().methods[0].clone();
    let large = run_coverage(&plugin_cell(160.0, 0.95, 4000)).unwrap().methods[0].clone();
    let se = (small.std_error.powi(2) + large.std_error.powi(2)).sqrt();
    assert!(large.coverage >= small.coverage - 3.0 * se, "{} vs {}", small.coverage, large.coverage);
    assert!(large.coverage > small.coverage);
}

#[test]
fn high_level_covers_almost_always() {
    let r = run_coverage(&plugin_cell(500.0, 0.999, 2000)).unwrap();
    let m = &r.methods[0];
    assert_eq!(m.evaluated + m.dropped, 2000);
    // Binomial standard error at p = 0.999 with 2000 replicates is 0.07 pp.
    let se = 100.0 * (0.999f64 * 0.001 / 2000.0).sqrt();
    assert!((m.coverage - 99.9).abs() <= 3.0 * se + 0.1, "{}", m.coverage);
}
