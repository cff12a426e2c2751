use nalgebra::DMatrix;
use num_complex::Complex64;
use tl_entangle::diagram::enumerate_planar_matchings;
use tl_entangle::state_space::*;
use tl_entangle::{Algebra, EvalPoint, Mode};

fn alg(theta: f64) -> tl_entangle::ring::NumericAlgebra {
    Algebra::numeric(Mode::Kauffman, &EvalPoint::from_theta(theta))
}

fn close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, tol: f64) -> bool {
    (a - b).iter().all(|z| z.norm() < tol)
}

const THETAS: [f64; 5] = [0.05, 0.11, 0.47, 1.31, 2.9];
// qutrit frames need |d| above the golden ratio
const QUTRIT_THETAS: [f64; 5] = [0.03, 0.09, 0.15, 1.50, 3.05];

#[test]
fn qubit_frame_coefficients() {
    for th in THETAS {
        let a = alg(th);
        let d = a.d.re;
        let s = build_qudit_space(2, &a).unwrap();
        let r = (d * d - 1.0).sqrt();
        let expect =
            DMatrix::from_row_slice(2, 2, &[1.0 / d, 0.0, -1.0 / (d * r), 1.0 / r]).map(|x| Complex64::new(x, 0.0));
        assert!(close(&s.ortho, &expect, 1e-10), "theta {th}: {}", s.ortho);
        assert!(s.orthonormality_defect() < 1e-10);
    }
}

#[test]
fn qutrit_frame_coefficients() {
    for th in QUTRIT_THETAS {
        let a = alg(th);
        let d = a.d.re;
        let d2 = d * d - 1.0;
        let s = build_qudit_space(3, &a).unwrap();
        let c1 = d / ((d2 - 1.0) * d2.sqrt());
        let x = (d2 * d2 - d2 - 1.0).sqrt();
        let row0 = [1.0 / d2, 0.0, 0.0];
        let row1 = [-c1 / d, c1, 0.0];
        let row2: Vec<f64> = (0..3).map(|i| ((i == 2) as i32 as f64 - row0[i] - d2.sqrt() * row1[i]) / x).collect();
        let mut v = row0.to_vec();
        v.extend(row1);
        v.extend(row2);
        let expect = DMatrix::from_row_slice(3, 3, &v).map(|x| Complex64::new(x, 0.0));
        assert!(close(&s.ortho, &expect, 1e-8), "theta {th}: {} vs {}", s.ortho, expect);
    }
}

#[test]
fn dims_and_killed_pairings() {
    let a = alg(0.07);
    for n in 1..=5 {
        let s = build_qudit_space(n, &a).unwrap();
        assert_eq!(s.dim, n);
        assert!(s.orthonormality_defect() < 1e-8, "n = {n}");
        let w = n - 1;
        if w == 0 {
            continue;
        }
        let survivors: Vec<_> = enumerate_planar_matchings(0, 4 * w)
            .unwrap()
            .into_iter()
            .filter(|m| {
                let inv = m.bottom_involution();
                (0..4 * w).all(|p| p / w != inv[p] / w)
            })
            .collect();
        let mut ours = puncture_pairings(w);
        ours.sort();
        let mut theirs = survivors;
        theirs.sort();
        assert_eq!(ours, theirs);
    }
}

#[test]
fn signed_frame_agrees_with_positive_gram_schmidt_up_to_row_signs() {
    for th in QUTRIT_THETAS {
        let a = alg(th);
        for n in 2..=4 {
            let s = build_qudit_space(n, &a).unwrap();
            let t = orthonormalize(&s.gram).unwrap();
            for j in 0..n {
                let sign = if (s.ortho[(j, j)].re > 0.0) == (t[(j, j)].re > 0.0) { 1.0 } else { -1.0 };
                for i in 0..n {
                    assert!((s.ortho[(j, i)] - t[(j, i)] * sign).norm() < 1e-8);
                }
            }
        }
    }
}

#[test]
fn qubit_gram_is_not_positive_between_the_degenerate_angles() {
    assert!(matches!(build_qudit_space(2, &alg(0.6)), Err(tl_entangle::Error::Degenerate(_))));
}

#[test]
fn crossed_pairing_is_null_at_minus_two() {
    assert!(crossed_residual_norm_sqr(-2.0).unwrap().abs() < 1e-12);
    for d in [-1.7, -3.0, 2.5] {
        let expect = d * (d - 1.0) * (d + 2.0) / (d + 1.0);
        assert!((crossed_residual_norm_sqr(d).unwrap() - expect).abs() < 1e-10);
    }
}
