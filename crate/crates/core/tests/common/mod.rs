#![allow(dead_code)]

use nalgebra::DMatrix;

/// Symplectic eigenvalues from the eigenvalues `±iν` of the real matrix ΩV,
/// via a general (Schur) eigensolve. Ascending.
pub fn schur_spectrum(v: &DMatrix<f64>) -> Vec<f64> {
    let n = v.nrows() / 2;
    let w = cvgauss::gaussian::symplectic_form(n).unwrap().into_matrix();
    let eig = (&w * v).complex_eigenvalues();
    let mut nus: Vec<f64> = eig.iter().map(|z| z.im).filter(|&im| im > 0.0).collect();
    nus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(nus.len(), n, "expected {n} conjugate pairs, got {eig:?}");
    nus
}

/// `e^A` by a plain Taylor series with scaling and squaring; independent of nalgebra's Padé.
pub fn expm_taylor(a: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = a.abs().max() * a.nrows() as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(squarings);
    let n = a.nrows();
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..40 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Interior grid: excludes both end points.
pub fn open_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    grid(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect()
}
