use serde::{Deserialize, Serialize};

use super::rng::SeededRng;
use crate::error::{Error, Result};
use crate::frame::{KFrame, OperatorK, FRAME_RANK_TOL};
use crate::numkit::{svd, CMat, C64};

const FRAME_SALT: u64 = 0x6b66_7261_6d65_7331;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetPolicy {
    Random,
    /// Every subset when `count ≤ 10`, otherwise falls back to random draws.
    ExhaustiveSmall,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub dim: usize,
    pub count: usize,
    pub k_rank: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_policy")]
    pub subset_policy: SubsetPolicy,
}

fn default_trials() -> usize {
    1
}

fn default_tol() -> f64 {
    crate::DEFAULT_TOL
}

fn default_policy() -> SubsetPolicy {
    SubsetPolicy::Random
}

impl GenConfig {
    pub fn new(seed: u64, dim: usize, count: usize, k_rank: usize) -> Self {
        GenConfig { seed, dim, count, k_rank, trials: 1, tol: crate::DEFAULT_TOL, subset_policy: SubsetPolicy::Random }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.count == 0 {
            return Err(Error::BadConfig("dim and count must be positive".into()));
        }
        if self.k_rank == 0 || self.k_rank > self.dim {
            return Err(Error::BadConfig(format!("k_rank must lie in 1..={}, got {}", self.dim, self.k_rank)));
        }
        if self.trials == 0 {
            return Err(Error::BadConfig("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::BadConfig(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// `K = U·diag(s)·Vᴴ` with Haar `U`, `V` and `s` log-uniform on `[0.1, 10]`.
pub fn gen_operator(cfg: &GenConfig) -> Result<OperatorK> {
    cfg.validate()?;
    random_operator(&mut SeededRng::new(cfg.seed), cfg.dim, cfg.k_rank)
}

pub fn random_operator(rng: &mut SeededRng, dim: usize, rank: usize) -> Result<OperatorK> {
    if rank == 0 || rank > dim {
        return Err(Error::BadConfig(format!("rank must lie in 1..={dim}, got {rank}")));
    }
    let s: Vec<f64> = (0..rank).map(|_| 10f64.powf(rng.uniform_in(-1.0, 1.0))).collect();
    operator_with_singular_values(rng, dim, &s)
}

/// `K = U·diag(s, 0, …)·Vᴴ` for Haar unitaries `U`, `V`.
pub fn operator_with_singular_values(rng: &mut SeededRng, dim: usize, s: &[f64]) -> Result<OperatorK> {
    if s.len() > dim {
        return Err(Error::BadConfig(format!("{} singular values in dimension {dim}", s.len())));
    }
    let u = rng.haar_unitary(dim);
    let v = rng.haar_unitary(dim);
    let mut us = CMat::zeros(dim, dim);
    for (j, &sj) in s.iter().enumerate() {
        for i in 0..dim {
            us[(i, j)] = u[(i, j)] * sj;
        }
    }
    OperatorK::new(&us * &v.adjoint())
}

/// A K-frame whose span contains `R(K)`: a basis of `R(K)` plus Gaussian
/// vectors, mixed by a Haar unitary on the index side.
pub fn gen_kframe(cfg: &GenConfig, k: &OperatorK) -> Result<KFrame> {
    cfg.validate()?;
    if k.dim() != cfg.dim {
        return Err(Error::BadConfig(format!("K acts on dimension {}, config says {}", k.dim(), cfg.dim)));
    }
    random_kframe(&mut SeededRng::new(cfg.seed ^ FRAME_SALT), k, cfg.count)
}

pub fn random_kframe(rng: &mut SeededRng, k: &OperatorK, count: usize) -> Result<KFrame> {
    let d = k.dim();
    let s = svd(k.matrix())?;
    let r = s.rank(FRAME_RANK_TOL);
    if count < r.max(1) {
        return Err(Error::BadConfig(format!("{count} vectors cannot span the rank-{r} range of K")));
    }
    let mut m = CMat::zeros(d, count);
    for j in 0..count {
        if j < r {
            let w = rng.uniform_in(0.5, 2.0);
            for i in 0..d {
                m[(i, j)] = s.u[(i, j)] * w;
            }
        } else {
            let g = rng.gaussian_vector(d);
            m.set_col(j, &g);
        }
    }
    let mix = rng.haar_unitary(count);
    KFrame::new(&m * &mix)
}

/// `T_F = K·W` with `W` the first `d` rows of a Haar `n×n` unitary, so `S_F = KK*`.
pub fn gen_parseval_kframe(k: &OperatorK, n: usize, seed: u64) -> Result<KFrame> {
    random_parseval_kframe(&mut SeededRng::new(seed), k, n)
}

pub fn random_parseval_kframe(rng: &mut SeededRng, k: &OperatorK, n: usize) -> Result<KFrame> {
    let d = k.dim();
    if n < d {
        return Err(Error::BadConfig(format!("no {d}x{n} co-isometry exists for n < d")));
    }
    let u = rng.haar_unitary(n);
    let w = CMat::from_fn(d, n, |i, j| u[(i, j)]);
    KFrame::new(k.matrix() * &w)
}

/// Uniformly random vector on the unit sphere of `ℂ^d`.
pub fn random_unit_vector(rng: &mut SeededRng, d: usize) -> Vec<C64> {
    let g = rng.gaussian_vector(d);
    let n = crate::numkit::norm(&g);
    g.into_iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{is_parseval_kframe, kframe_bounds};
    use crate::numkit::{op_norm, svd};

    #[test]
    fn rank_zero_is_rejected() {
        let cfg = GenConfig::new(1, 3, 4, 0);
        assert!(matches!(gen_operator(&cfg), Err(Error::BadConfig(_))));
        assert!(matches!(gen_operator(&GenConfig::new(1, 3, 4, 4)), Err(Error::BadConfig(_))));
    }

    #[test]
    fn unit_singular_values_give_a_unitary() {
        let mut rng = SeededRng::new(3);
        let k = operator_with_singular_values(&mut rng, 4, &[1.0; 4]).unwrap();
        let kkh = &k.matrix().adjoint() * k.matrix();
        assert!((&kkh - &CMat::identity(4)).max_abs() < 1e-13);
    }

    #[test]
    fn operator_rank_and_spectrum() {
        let k = gen_operator(&GenConfig::new(11, 6, 8, 3)).unwrap();
        let s = svd(k.matrix()).unwrap();
        assert_eq!(s.rank(1e-11), 3);
        assert!(s.sigma[0] <= 10.0 + 1e-9 && s.sigma[2] >= 0.1 - 1e-9);
    }

    #[test]
    fn same_seed_same_operator() {
        let cfg = GenConfig::new(99, 5, 7, 4);
        assert_eq!(gen_operator(&cfg).unwrap(), gen_operator(&cfg).unwrap());
        let k = gen_operator(&cfg).unwrap();
        assert_eq!(gen_kframe(&cfg, &k).unwrap(), gen_kframe(&cfg, &k).unwrap());
        assert_eq!(gen_parseval_kframe(&k, 7, 5).unwrap(), gen_parseval_kframe(&k, 7, 5).unwrap());
    }

    #[test]
    fn ordinary_frame_when_square_and_k_is_identity() {
        let cfg = GenConfig::new(4, 3, 3, 3);
        let f = gen_kframe(&cfg, &OperatorK::identity(3)).unwrap();
        let s = svd(f.synthesis_matrix()).unwrap();
        assert_eq!(s.rank(1e-11), 3);
        assert!(kframe_bounds(&f, &OperatorK::identity(3), 1e-9).unwrap().is_kframe);
    }

    #[test]
    fn single_vector_kframe_for_rank_one_k() {
        let k = gen_operator(&GenConfig::new(8, 4, 1, 1)).unwrap();
        let f = gen_kframe(&GenConfig::new(8, 4, 1, 1), &k).unwrap();
        assert_eq!(f.count(), 1);
        assert!(kframe_bounds(&f, &k, 1e-9).unwrap().is_kframe);
        assert!(matches!(
            gen_kframe(&GenConfig::new(8, 4, 1, 2), &gen_operator(&GenConfig::new(8, 4, 1, 2)).unwrap()),
            Err(Error::BadConfig(_))
        ));
    }

    #[test]
    fn parseval_generator_contract() {
        let k = gen_operator(&GenConfig::new(21, 5, 9, 3)).unwrap();
        let f = gen_parseval_kframe(&k, 9, 2).unwrap();
        let check = is_parseval_kframe(&f, &k, 1e-10).unwrap();
        assert!(check.is_parseval);
        let kk = op_norm(&k.gram()).unwrap();
        assert!(check.residual <= 1e-12 * kk.max(1.0) * 10.0, "residual {}", check.residual);
        assert!(matches!(gen_parseval_kframe(&k, 4, 2), Err(Error::BadConfig(_))));
    }

    #[test]
    fn identity_parseval_is_an_onb_image() {
        let f = gen_parseval_kframe(&OperatorK::identity(3), 3, 6).unwrap();
        let t = f.synthesis_matrix();
        assert!((&(&t.adjoint() * t) - &CMat::identity(3)).max_abs() < 1e-13);
    }
}
