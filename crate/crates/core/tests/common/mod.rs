//! Shared helpers for the integration tests, including an independent
//! state-sum evaluator for slice words.
#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tl_entangle::ring::NumericAlgebra;
use tl_entangle::state_space::{DiagramState, PartyLayout};
use tl_entangle::tangle::{reduce, Slice, SliceWord};
use tl_entangle::tensor::Tensor;
use tl_entangle::{Algebra, EvalPoint, Mode};

pub fn alg(theta: f64) -> NumericAlgebra {
    Algebra::numeric(Mode::Kauffman, &EvalPoint::from_theta(theta))
}

/// `n` angles with `|d| ≥ 1.2`, where every qubit frame is well defined.
pub fn qubit_thetas(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let th: f64 = rng.gen_range(0.0..PI);
            if (2.0 * (2.0 * th).cos()).abs() >= 1.2 {
                break th;
            }
        })
        .collect()
}

pub fn state(word: &SliceWord, layout: &PartyLayout, alg: &NumericAlgebra) -> DiagramState {
    DiagramState::new(reduce(word, alg).expect("word reduces"), layout.clone()).expect("state fits layout")
}

/// Tensor from `(row-major digits, value)` entries.
pub fn tensor(dims: &[usize], entries: &[(&[usize], Complex64)]) -> Tensor {
    let mut t = Tensor::zeros(dims.to_vec());
    for (idx, v) in entries {
        t.set(idx, *v);
    }
    t
}

pub fn max_diff(a: &Tensor, b: &Tensor) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra] = rb;
    }
}

/// Expansion of a word without projectors by summing over all smoothings
/// of its crossings: each smoothing is a set of arcs whose components are
/// found by union–find. Returns the map from the boundary pairing (top
/// endpoints first, then bottom, as a partner list) to its coefficient.
///
/// An over crossing at `i` contributes `A` for the vertical smoothing and
/// `A⁻¹` for the horizontal one; under crossings swap the two weights.
pub fn state_sum(word: &SliceWord, a: Complex64) -> HashMap<Vec<usize>, Complex64> {
    let d = -a * a - 1.0 / (a * a);
    let crossings: Vec<usize> = word
        .slices
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, Slice::Over(_) | Slice::Under(_)))
        .map(|(k, _)| k)
        .collect();
    assert!(crossings.len() <= 20, "too many crossings for the oracle");
    assert!(!word.slices.iter().any(|s| matches!(s, Slice::Jw(..))), "the oracle has no projectors");
    let mut out: HashMap<Vec<usize>, Complex64> = HashMap::new();
    for mask in 0u32..(1u32 << crossings.len()) {
        // segment ids: each level boundary carries `width` fresh segment ends
        let mut next = 0usize;
        let mut fresh = |k: usize| {
            let v: Vec<usize> = (next..next + k).collect();
            next += k;
            v
        };
        let top = fresh(word.top_width);
        let mut cur = top.clone();
        let mut joins: Vec<(usize, usize)> = Vec::new();
        let mut weight = Complex64::new(1.0, 0.0);
        for (k, s) in word.slices.iter().enumerate() {
            let w = cur.len();
            let below = fresh(s.apply_width(w).expect("valid word"));
            let keep = |joins: &mut Vec<(usize, usize)>, from: std::ops::Range<usize>, shift: isize| {
                for i in from {
                    joins.push((cur[i], below[(i as isize + shift) as usize]));
                }
            };
            match *s {
                Slice::Cup(i) => {
                    keep(&mut joins, 0..i - 1, 0);
                    keep(&mut joins, i - 1..w, 2);
                    joins.push((below[i - 1], below[i]));
                }
                Slice::Cap(i) => {
                    keep(&mut joins, 0..i - 1, 0);
                    keep(&mut joins, i + 1..w, -2);
                    joins.push((cur[i - 1], cur[i]));
                }
                Slice::E(i) | Slice::Over(i) | Slice::Under(i) => {
                    keep(&mut joins, 0..i - 1, 0);
                    keep(&mut joins, i + 1..w, 0);
                    let horizontal = match *s {
                        Slice::E(_) => true,
                        _ => {
                            let bit = crossings.iter().position(|&c| c == k).unwrap();
                            mask >> bit & 1 == 1
                        }
                    };
                    if horizontal {
                        joins.push((cur[i - 1], cur[i]));
                        joins.push((below[i - 1], below[i]));
                    } else {
                        keep(&mut joins, i - 1..i + 1, 0);
                    }
                    match *s {
                        Slice::Over(_) => weight *= if horizontal { 1.0 / a } else { a },
                        Slice::Under(_) => weight *= if horizontal { a } else { 1.0 / a },
                        _ => {}
                    }
                }
                Slice::Jw(..) => unreachable!(),
            }
            cur = below;
        }
        let mut parent: Vec<usize> = (0..next).collect();
        for &(x, y) in &joins {
            union(&mut parent, x, y);
        }
        let boundary: Vec<usize> = top.iter().chain(cur.iter()).copied().collect();
        let roots: Vec<usize> = boundary.iter().map(|&x| find(&mut parent, x)).collect();
        let partner: Vec<usize> = (0..boundary.len())
            .map(|i| (0..boundary.len()).find(|&j| j != i && roots[j] == roots[i]).expect("boundary ends pair up"))
            .collect();
        // components not touching the boundary are closed loops
        let mut all: Vec<usize> = (0..next).map(|x| find(&mut parent, x)).collect();
        all.sort_unstable();
        all.dedup();
        let loops = all.len() - boundary.len() / 2;
        *out.entry(partner).or_insert(Complex64::new(0.0, 0.0)) += weight * d.powu(loops as u32);
    }
    out
}
