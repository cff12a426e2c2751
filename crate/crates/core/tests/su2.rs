use proptest::prelude::*;
use tl_entangle::entanglement::TripartiteClass;
use tl_entangle::su2::*;

fn spin(s: &str) -> Spin {
    s.parse().unwrap()
}

/// `(total 2J, vector)` with entries as `(digits, value)`.
type Table<'a> = [(u32, Vec<(&'a [usize], f64)>)];

fn check(sys: &SpinSystem, want: &Table) {
    let hw = highest_weight_vectors(sys);
    assert_eq!(hw.len(), want.len());
    let dims = sys.dims();
    for (h, (twice, entries)) in hw.iter().zip(want) {
        assert_eq!(h.total.twice, *twice);
        let mut v = vec![0.0; sys.dim()];
        for (digits, x) in entries {
            let idx = digits.iter().zip(&dims).fold(0, |acc, (d, n)| acc * n + d);
            v[idx] = *x;
        }
        // equal up to a sign
        let dot: f64 = h.vector.iter().zip(&v).map(|(a, b)| a * b).sum();
        let sign = dot.signum();
        assert!(h.vector.iter().zip(&v).all(|(a, b)| (a - sign * b).abs() < 1e-10), "{:?} vs {:?}", h.vector, v);
    }
}

#[test]
fn doublet_pair_table() {
    let r2 = 0.5f64.sqrt();
    let sys = SpinSystem::new(vec![spin("1/2"); 2]).unwrap();
    check(&sys, &[(0, vec![(&[0, 1], r2), (&[1, 0], -r2)]), (2, vec![(&[0, 0], 1.0)])]);
}

#[test]
fn triplet_pair_table() {
    let sys = SpinSystem::new(vec![spin("1"); 2]).unwrap();
    let r3 = 1.0 / 3f64.sqrt();
    let r2 = 0.5f64.sqrt();
    check(
        &sys,
        &[
            (0, vec![(&[0, 2], r3), (&[1, 1], -r3), (&[2, 0], r3)]),
            (2, vec![(&[0, 1], r2), (&[1, 0], -r2)]),
            (4, vec![(&[0, 0], 1.0)]),
        ],
    );
}

#[test]
fn doublet_triple_table() {
    let sys = SpinSystem::new(vec![spin("1/2"); 3]).unwrap();
    let r2 = 0.5f64.sqrt();
    let r6 = 1.0 / 6f64.sqrt();
    check(
        &sys,
        &[
            (1, vec![(&[0, 0, 1], r2), (&[1, 0, 0], -r2)]),
            (1, vec![(&[0, 0, 1], r6), (&[0, 1, 0], -2.0 * r6), (&[1, 0, 0], r6)]),
            (3, vec![(&[0, 0, 0], 1.0)]),
        ],
    );
    // the symmetric combination |001⟩ + |100⟩ is not a highest weight
    let raise = sys.raising();
    let mut sym = nalgebra::DVector::zeros(8);
    sym[1] = 1.0;
    sym[4] = 1.0;
    assert!((raise * sym).norm() > 1.0);
}

#[test]
fn highest_weight_ranks() {
    let ranks = |a: &str, b: &str| -> Vec<usize> {
        hw_rank_table(spin(a), spin(b)).unwrap().into_iter().map(|x| x.1).collect()
    };
    assert_eq!(ranks("1/2", "1/2"), vec![2, 1]);
    assert_eq!(ranks("1", "1"), vec![3, 2, 1]);
}

#[test]
fn tripartite_highest_weights_include_w_but_not_ghz() {
    let classes: Vec<TripartiteClass> = classify_hw_tripartite().unwrap().into_iter().map(|x| x.1).collect();
    assert!(classes.contains(&TripartiteClass::W));
    assert!(!classes.contains(&TripartiteClass::Ghz));
    assert!(classes.contains(&TripartiteClass::Separable));
}

proptest! {
    #[test]
    fn highest_weights_are_orthonormal_and_annihilated(t1 in 0u32..=4, t2 in 0u32..=4) {
        let sys = SpinSystem::new(vec![Spin::from_twice(t1), Spin::from_twice(t2)]).unwrap();
        let hw = highest_weight_vectors(&sys);
        prop_assert_eq!(hw.len() as u32, t1.min(t2) + 1);
        let raise = sys.raising();
        for (i, h) in hw.iter().enumerate() {
            let v = nalgebra::DVector::from_column_slice(&h.vector);
            prop_assert!((&raise * &v).norm() < 1e-10);
            prop_assert!((v.norm() - 1.0).abs() < 1e-12);
            for (k, &x) in h.vector.iter().enumerate() {
                if x != 0.0 {
                    prop_assert_eq!(sys.twice_weight(k), h.total.twice as i64);
                }
            }
            for g in &hw[..i] {
                let dot: f64 = g.vector.iter().zip(&h.vector).map(|(a, b)| a * b).sum();
                prop_assert!(dot.abs() < 1e-10);
            }
        }
        // rank falls by one per step in total spin
        let ranks: Vec<usize> = hw_rank_table(Spin::from_twice(t1), Spin::from_twice(t2)).unwrap().into_iter().map(|x| x.1).collect();
        let top = t1.min(t2) as usize + 1;
        prop_assert_eq!(ranks, (1..=top).rev().collect::<Vec<_>>());
    }
}
