//! Floating-point statistics around the exact core results.

use nalgebra::{DMatrix, SymmetricEigen};
use rds_core::chain::KernelReport;
use rds_core::oracle::UniformityReport;
use rds_core::Prob;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn to_f64(p: &Prob) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

/// Eigenvalues of a symmetric kernel, largest first.
pub fn kernel_eigenvalues(k: &KernelReport) -> Vec<f64> {
    let n = k.states.len();
    if n == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_fn(n, n, |i, j| to_f64(&k.matrix[i][j]));
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Largest eigenvalue modulus after the leading 1.
pub fn second_eigenvalue(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().skip(1).map(|e| e.abs()).fold(0.0, f64::max)
}

/// Upper bound on the TV distance between the empirical end-state
/// distribution of `samples` chains of length `steps` and the uniform one:
/// the spectral mixing bound plus three standard deviations of sampling noise.
pub fn tv_threshold(eigenvalues: &[f64], steps: u64, samples: usize) -> f64 {
    let k = eigenvalues.len() as f64;
    let pi = 1.0 / k;
    let lambda = second_eigenvalue(eigenvalues);
    let mixing = 0.5 * ((1.0 - pi) / pi).sqrt() * lambda.powf(steps as f64);
    let noise = 0.5 * k * 3.0 * (pi * (1.0 - pi) / samples as f64).sqrt();
    mixing + noise
}

/// Upper tail probability of the chi-square statistic.
pub fn chi_square_p_value(u: &UniformityReport) -> f64 {
    if u.degrees_of_freedom == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(u.degrees_of_freedom as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(u.chi_square)
}
