//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `exp(A)` by scaling and squaring with a truncated Taylor series.
pub fn expm_taylor(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.5 {
        squarings += 1;
    }
    let scaled = a.map(|z| z / 2f64.powi(squarings));
    let mut term = DMatrix::<Complex64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..40 {
        term = &term * &scaled / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-iHt)` through the series oracle.
pub fn propagator_oracle(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    expm_taylor(&h.map(|z| z * c(0.0, -t)))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (&a + a.adjoint()).map(|z| z * 0.5)
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `c_{μν} = (-1)^{j+μ} δ_{μ,-ν}` evaluated directly over half-integer
/// labels, rows/columns ascending in `μ`, `ν`.
pub fn c_matrix_oracle(twice_j: u32) -> Vec<Vec<f64>> {
    let j = twice_j as f64 / 2.0;
    let labels: Vec<f64> = (0..=twice_j).map(|k| -j + k as f64).collect();
    labels
        .iter()
        .map(|&mu| {
            labels
                .iter()
                .map(|&nu| {
                    if (mu + nu).abs() < 1e-9 {
                        (-1f64).powf(j + mu)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Composite trapezoid rule.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}
