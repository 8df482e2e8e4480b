//! Seeded, platform-independent random source.
//!
//! ChaCha8 supplies the uniform stream; normals come from Box–Muller on that
//! stream, so a given seed reproduces the same matrices on every platform.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frame::IndexSubset;
use crate::numkit::{inner, norm, CMat, C64};

/// Multiplier of the trial sub-seed rule `seed ^ (trial · GOLDEN)`.
pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Sub-seed for trial `index` of a campaign seeded with `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(GOLDEN)
}

pub struct SeededRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { inner: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.uniform() < 0.5
    }

    /// Standard normal via Box–Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        self.spare = Some(r * (TAU * u2).sin());
        r * (TAU * u2).cos()
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        let re = self.gaussian();
        let im = self.gaussian();
        C64::new(re, im)
    }

    pub fn gaussian_vector(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.complex_gaussian()).collect()
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMat {
        CMat::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }

    /// Random Hermitian matrix `(G + Gᴴ)/2`.
    pub fn hermitian(&mut self, n: usize) -> CMat {
        self.gaussian_matrix(n, n).hermitian_part()
    }

    /// `rows × cols` matrix with orthonormal columns (`rows ≥ cols`), Haar
    /// distributed: Gram–Schmidt with reorthogonalization on a Gaussian matrix
    /// keeps the diagonal of R positive.
    pub fn orthonormal_columns(&mut self, rows: usize, cols: usize) -> CMat {
        assert!(rows >= cols, "cannot fit {cols} orthonormal columns in dimension {rows}");
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
        while basis.len() < cols {
            let mut x = self.gaussian_vector(rows);
            for _ in 0..2 {
                for b in &basis {
                    let p = inner(&x, b);
                    for (xi, &bi) in x.iter_mut().zip(b) {
                        *xi -= p * bi;
                    }
                }
            }
            let nx = norm(&x);
            if nx > 1e-8 {
                basis.push(x.iter().map(|&z| z / nx).collect());
            }
        }
        CMat::from_columns(rows, &basis).expect("columns have the declared length")
    }

    pub fn haar_unitary(&mut self, n: usize) -> CMat {
        self.orthonormal_columns(n, n)
    }

    /// Each index joins the subset with probability 1/2.
    pub fn subset(&mut self, n: usize) -> IndexSubset {
        let idx: Vec<usize> = (0..n).filter(|_| self.coin()).collect();
        IndexSubset::new(idx, n).expect("increasing indices below n")
    }
}
