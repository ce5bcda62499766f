use symplectic_ginibre::sampler::{radial_chi_square, sample, EigenvalueSample};

#[test]
fn no_real_eigenvalues() {
    for seed in 0..50 {
        let s = sample(200, 0.3, seed).unwrap();
        assert_eq!(s.eigenvalues.len(), 200);
        assert!(s.min_imaginary() > 0.0, "seed {seed}");
    }
}

#[test]
fn droplet_fraction_grows_with_n() {
    let tau = 0.5;
    let mut prev: Option<(f64, f64)> = None;
    for n in [100, 400, 1000] {
        let reps = if n == 1000 { 2 } else { 6 };
        let fr: Vec<f64> = (0..reps).map(|k| sample(n, tau, 40 + k).unwrap().droplet_fraction(0.0)).collect();
        let m = fr.iter().sum::<f64>() / reps as f64;
        // binomial standard error of the pooled fraction
        let se = (m * (1.0 - m) / (n * reps as usize) as f64).sqrt().max(1e-3);
        if let Some((pm, pse)) = prev {
            assert!(m >= pm - 3.0 * (se * se + pse * pse).sqrt(), "N {n}: {m} after {pm}");
        }
        prev = Some((m, se));
    }
}

#[test]
fn ginibre_radial_law() {
    let pooled: Vec<EigenvalueSample> = (0..20).map(|k| sample(200, 0.0, 100 + k).unwrap()).collect();
    let (stat, pvalue) = radial_chi_square(&pooled, 0.9 * 2f64.sqrt(), 10).unwrap();
    assert!(pvalue > 1e-3, "chi2 {stat}, p {pvalue}");
}
