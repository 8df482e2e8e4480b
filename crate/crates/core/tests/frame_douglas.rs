mod common;

use kframes_core::douglas::{canonical_kdual, canonical_xf, douglas_infimum_check, douglas_solve, parametrized_kdual};
use kframes_core::frame::{
    frame_operator, is_parseval_kframe, kframe_bounds, DualPair, IndexSubset, KFrame, LowerBound, OperatorK,
};
use kframes_core::genlab::{random_kframe, random_operator, random_parseval_kframe, SeededRng};
use kframes_core::numkit::{herm_eig, op_norm, CMat, C64};
use kframes_core::Error;

use common::{gauss_jordan_inverse, max_abs_diff};

const TOL: f64 = 1e-9;

/// Cholesky succeeds iff the Hermitian matrix is positive definite.
fn is_positive_definite(a: &CMat) -> bool {
    let n = a.rows();
    let mut l = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[(i, j)];
            s -= (0..j).map(|k| l[i][k] * l[j][k].conj()).sum::<C64>();
            if i == j {
                if s.re <= 0.0 {
                    return false;
                }
                l[i][i] = C64::new(s.re.sqrt(), 0.0);
            } else {
                l[i][j] = s / l[j][j].re;
            }
        }
    }
    true
}

/// `inf{α : L₁L₁ᴴ ≼ αL₂L₂ᴴ}` for invertible `L₂` by bisection on Cholesky.
fn bisect_infimum(l1: &CMat, l2: &CMat) -> f64 {
    let a = (l1 * &l1.adjoint()).hermitian_part();
    let b = (l2 * &l2.adjoint()).hermitian_part();
    let (mut lo, mut hi) = (0.0, 1.0);
    while !is_positive_definite(&(&b.scale(hi) - &a)) {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if is_positive_definite(&(&b.scale(mid) - &a)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[test]
fn douglas_norm_is_the_bisected_infimum() {
    let mut rng = SeededRng::new(11);
    for _ in 0..100 {
        let d = 1 + rng.below(6);
        let p = 1 + rng.below(6);
        let l2 = rng.gaussian_matrix(d, d);
        let l1 = rng.gaussian_matrix(d, p);
        let sol = douglas_solve(&l1, &l2, TOL).unwrap();
        let alpha = bisect_infimum(&l1, &l2);
        assert!((sol.norm_sq - alpha).abs() <= 1e-8 * alpha, "{} vs {alpha}", sol.norm_sq);
        // Invertible L₂ leaves one solution.
        let direct = &gauss_jordan_inverse(&l2) * &l1;
        assert!(max_abs_diff(&sol.x, &direct) <= 1e-8 * (1.0 + direct.max_abs()));
        assert!(douglas_infimum_check(&l1, &l2, &sol.x, TOL).unwrap().pass);
    }
}

#[test]
fn reduced_solution_has_minimal_norm_among_solutions() {
    let mut rng = SeededRng::new(12);
    for _ in 0..100 {
        let d = 2 + rng.below(5);
        let rank = 1 + rng.below(d);
        let k = random_operator(&mut rng, d, rank).unwrap();
        let n = d + rng.below(6);
        let f = random_kframe(&mut rng, &k, n).unwrap();
        let xf = canonical_xf(&f, &k, TOL).unwrap();
        let z = rng.gaussian_matrix(n, d);
        let other = parametrized_kdual(&f, &k, &z, TOL).unwrap();
        let x_other = other.dual_vectors.adjoint();
        assert!(op_norm(&xf).unwrap() <= op_norm(&x_other).unwrap() * (1.0 + 1e-12));
        assert!(xf.frobenius_norm() <= x_other.frobenius_norm() * (1.0 + 1e-12));
    }
}

#[test]
fn every_parametrized_dual_reconstructs_k() {
    let mut rng = SeededRng::new(13);
    for _ in 0..100 {
        let d = 1 + rng.below(8);
        let rank = 1 + rng.below(d);
        let k = random_operator(&mut rng, d, rank).unwrap();
        let n = 1 + rng.below(16);
        let Ok(f) = random_kframe(&mut rng, &k, n.max(k_rank(&k))) else { continue };
        let z = rng.gaussian_matrix(f.count(), d);
        let pair = parametrized_kdual(&f, &k, &z, TOL).unwrap();
        let recon = f.synthesis_matrix() * &pair.dual_vectors.adjoint();
        assert!(max_abs_diff(&recon, k.matrix()) < 1e-9 * (1.0 + k.matrix().max_abs()));
    }
}

fn k_rank(k: &OperatorK) -> usize {
    herm_eig(&k.gram()).unwrap().values.iter().filter(|&&x| x > 1e-12).count()
}

#[test]
fn parseval_frames_have_frame_operator_kk_star_and_bounds_one() {
    let mut rng = SeededRng::new(14);
    for _ in 0..100 {
        let d = 1 + rng.below(8);
        let rank = 1 + rng.below(d);
        let k = random_operator(&mut rng, d, rank).unwrap();
        let n = d + rng.below(9);
        let f = random_parseval_kframe(&mut rng, &k, n).unwrap();
        assert!(max_abs_diff(&frame_operator(&f), &k.gram()) < 1e-12 * (1.0 + k.gram().max_abs()));
        assert!(is_parseval_kframe(&f, &k, TOL).unwrap().is_parseval);
        // S_F = KK* gives A = B = 1 relative to K.
        let b = kframe_bounds(&f, &k, TOL).unwrap();
        let a = b.lower_opt.finite().unwrap();
        assert!((a - 1.0).abs() < 1e-9, "lower bound {a}");
    }
}

#[test]
fn k_frame_inequality_holds_at_the_optimal_bounds() {
    let mut rng = SeededRng::new(15);
    for _ in 0..100 {
        let d = 1 + rng.below(8);
        let rank = 1 + rng.below(d);
        let k = random_operator(&mut rng, d, rank).unwrap();
        let count = d + rng.below(8);
        let f = random_kframe(&mut rng, &k, count).unwrap();
        let b = kframe_bounds(&f, &k, TOL).unwrap();
        assert!(b.is_kframe);
        let a = b.lower_opt.finite().unwrap();
        for _ in 0..20 {
            let x = rng.gaussian_vector(d);
            let energy: f64 = f.synthesis_matrix().adjoint_mul_vec(&x).unwrap().iter().map(|z| z.norm_sqr()).sum();
            let kstar: f64 = k.apply_adjoint(&x).unwrap().iter().map(|z| z.norm_sqr()).sum();
            let xx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            assert!(a * kstar <= energy * (1.0 + 1e-9) + 1e-12);
            assert!(energy <= b.upper_opt * xx * (1.0 + 1e-9));
        }
    }
}

#[test]
fn frames_missing_the_range_of_k_are_rejected() {
    let f = KFrame::new(CMat::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap();
    let k = OperatorK::identity(2);
    assert!(matches!(canonical_xf(&f, &k, TOL), Err(Error::NotKFrame { .. })));
    assert!(!kframe_bounds(&f, &k, TOL).unwrap().is_kframe);
}

#[test]
fn zero_operator_has_unbounded_lower_bound() {
    let f = KFrame::standard_basis(3);
    let k = OperatorK::new(CMat::zeros(3, 3)).unwrap();
    assert_eq!(kframe_bounds(&f, &k, TOL).unwrap().lower_opt, LowerBound::Unbounded);
}

#[test]
fn perturbed_dual_is_rejected_by_the_checked_constructor() {
    let mut rng = SeededRng::new(16);
    let k = random_operator(&mut rng, 4, 3).unwrap();
    let f = random_kframe(&mut rng, &k, 7).unwrap();
    let pair = canonical_kdual(&f, &k, TOL).unwrap();
    let mut g = pair.dual_vectors.clone();
    g[(0, 0)] += C64::new(1e-3, 0.0);
    assert!(matches!(DualPair::new(f.clone(), g.clone(), k.clone(), TOL), Err(Error::NotKDual { .. })));
    assert!(DualPair::from_parts_unchecked(f, g, k).is_ok());
}

#[test]
fn subsets_parse_and_complement() {
    let j = IndexSubset::parse("0,2,5", 6).unwrap();
    assert_eq!(j.complement().indices(), &[1, 3, 4]);
    assert_eq!(IndexSubset::parse("all", 3).unwrap().len(), 3);
    assert!(IndexSubset::parse("empty", 3).unwrap().is_empty());
    assert!(IndexSubset::parse("7", 3).is_err());
}
