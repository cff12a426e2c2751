//! Entanglement measures on amplitude tensors.
//!
//! Every measure normalises its input; amplitude tensors themselves keep the
//! raw diagram normalisation.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::NumericAlgebra;
use crate::state_space::{amplitudes, raw_amplitudes, DiagramState, QuditSpace};
use crate::tensor::Tensor;

/// Default relative threshold on singular values.
pub const RANK_TOL: f64 = 1e-9;
/// Default threshold below which a 3-tangle counts as zero.
pub const TANGLE_TOL: f64 = 1e-8;
/// Eigenvalues below this are dropped from entropies.
pub const EIGEN_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(pub DMatrix<Complex64>);

impl DensityMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.0 + self.0.adjoint()).scale(0.5);
        let mut ev: Vec<f64> = herm.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn rank(&self, tol: f64) -> usize {
        let ev = self.eigenvalues();
        let top = ev.iter().copied().fold(0.0, f64::max);
        ev.iter().filter(|&&x| x > tol * top).count()
    }

    /// `Tr ρⁿ`.
    pub fn power_trace(&self, n: u32) -> f64 {
        self.eigenvalues().iter().map(|&x| x.max(0.0).powi(n as i32)).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `ρ_keep = Tr_rest |ψ⟩⟨ψ|` for the normalised tensor.
pub fn reduced_density(t: &Tensor, keep: &[usize]) -> Result<DensityMatrix> {
    check_axes(t, keep)?;
    let m = t.normalized()?.unfold(keep);
    Ok(DensityMatrix(&m * m.adjoint()))
}

fn check_axes(t: &Tensor, axes: &[usize]) -> Result<()> {
    for (i, &a) in axes.iter().enumerate() {
        if a >= t.rank() || axes[..i].contains(&a) {
            return Err(Error::Domain(format!("bad party index {} for {} parties", a, t.rank())));
        }
    }
    Ok(())
}

/// Singular values of the `keep | rest` unfolding, descending.
pub fn schmidt_coefficients(t: &Tensor, keep: &[usize]) -> Result<Vec<f64>> {
    check_axes(t, keep)?;
    let m = t.unfold(keep);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(s)
}

/// Number of singular values above `tol` times the largest.
pub fn schmidt_rank(t: &Tensor, keep: &[usize], tol: f64) -> Result<usize> {
    let s = schmidt_coefficients(t, keep)?;
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Err(Error::ZeroTensor);
    }
    Ok(s.iter().filter(|&&x| x > tol * top).count())
}

/// Rank of every single-party reduced density.
pub fn local_ranks(t: &Tensor, tol: f64) -> Result<Vec<usize>> {
    (0..t.rank()).map(|a| schmidt_rank(t, &[a], tol)).collect()
}

/// `−Σ λ log λ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let tr = rho.trace();
    rho.eigenvalues().iter().map(|&x| x / tr).filter(|&x| x > EIGEN_FLOOR).map(|x| -x * x.ln()).sum()
}

pub fn entanglement_entropy(t: &Tensor, keep: &[usize]) -> Result<f64> {
    Ok(von_neumann_entropy(&reduced_density(t, keep)?))
}

fn kron_all(mats: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    mats.iter().fold(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |acc, m| acc.kronecker(m))
}

/// `Tr ρⁿ` computed two ways: from the eigenvalues of the reduced density of
/// the orthonormal amplitudes, and by gluing `n` copies of the raw state and
/// `n` of its mirror through the party Gram metrics (no orthonormal frame,
/// no diagonalisation).
pub fn replica_check(
    s: &DiagramState,
    spaces: &[QuditSpace],
    alg: &NumericAlgebra,
    keep: &[usize],
    n: u32,
) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Domain("replica index must be positive".into()));
    }
    let t = amplitudes(s, spaces, alg)?;
    let numeric = reduced_density(&t, keep)?.power_trace(n);
    let g = raw_amplitudes(s, spaces, alg)?;
    check_axes(&g, keep)?;
    // |s⟩ = Σ x_i |b_i⟩ with x = (⊗G⁻¹) g
    let mut x = g.clone();
    for (axis, sp) in spaces.iter().enumerate() {
        x = x.apply_matrix(axis, &sp.gram_inverse()?)?;
    }
    let rest: Vec<usize> = (0..g.rank()).filter(|a| !keep.contains(a)).collect();
    let gk = kron_all(&keep.iter().map(|&a| spaces[a].gram.clone()).collect::<Vec<_>>());
    let gr = kron_all(&rest.iter().map(|&a| spaces[a].gram.clone()).collect::<Vec<_>>());
    let xm = x.unfold(keep);
    let y = &xm * gr.transpose() * xm.adjoint();
    let m = &y * &gk;
    let norm = m.trace();
    if norm.norm() == 0.0 {
        return Err(Error::ZeroTensor);
    }
    let mut p = m.clone();
    for _ in 1..n {
        p = &p * &m;
    }
    let diagrammatic = (p.trace() / norm.powu(n)).re;
    Ok((numeric, diagrammatic))
}

/// `2·min(p₀, p₁)` over the normalised squared Schmidt coefficients of a
/// two-qubit tensor.
pub fn conversion_probability(t: &Tensor) -> Result<f64> {
    if t.shape() != [2, 2] {
        return Err(Error::Width(format!("expected a 2×2 tensor, got {:?}", t.shape())));
    }
    let s = schmidt_coefficients(t, &[0])?;
    let total: f64 = s.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return Err(Error::ZeroTensor);
    }
    Ok(2.0 * s.iter().map(|x| x * x / total).fold(f64::INFINITY, f64::min))
}

fn check_qubits3(t: &Tensor) -> Result<()> {
    if t.shape() != [2, 2, 2] {
        return Err(Error::Width(format!("expected a 2×2×2 tensor, got {:?}", t.shape())));
    }
    Ok(())
}

/// Coffman–Kundu–Wootters 3-tangle, `4·|hyperdeterminant|` of the normalised
/// tensor.
pub fn three_tangle(t: &Tensor) -> Result<f64> {
    check_qubits3(t)?;
    let u = t.normalized()?;
    let p = |i: usize, j: usize, k: usize| u.get(&[i, j, k]);
    let sq = |z: Complex64| z * z;
    let d1 = sq(p(0, 0, 0)) * sq(p(1, 1, 1))
        + sq(p(0, 0, 1)) * sq(p(1, 1, 0))
        + sq(p(0, 1, 0)) * sq(p(1, 0, 1))
        + sq(p(1, 0, 0)) * sq(p(0, 1, 1));
    let d2 = p(0, 0, 0) * p(1, 1, 1) * (p(0, 1, 1) * p(1, 0, 0) + p(1, 0, 1) * p(0, 1, 0) + p(1, 1, 0) * p(0, 0, 1))
        + p(0, 1, 1) * p(1, 0, 0) * p(1, 0, 1) * p(0, 1, 0)
        + p(0, 1, 1) * p(1, 0, 0) * p(1, 1, 0) * p(0, 0, 1)
        + p(1, 0, 1) * p(0, 1, 0) * p(1, 1, 0) * p(0, 0, 1);
    let d3 = p(0, 0, 0) * p(1, 1, 0) * p(1, 0, 1) * p(0, 1, 1) + p(1, 1, 1) * p(0, 0, 1) * p(0, 1, 0) * p(1, 0, 0);
    Ok(4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TripartiteClass {
    Separable,
    /// The given party (0, 1, 2) factors off the other two.
    Biseparable(usize),
    W,
    Ghz,
}

impl fmt::Display for TripartiteClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripartiteClass::Separable => write!(f, "separable"),
            TripartiteClass::Biseparable(0) => write!(f, "biseparable(A|BC)"),
            TripartiteClass::Biseparable(1) => write!(f, "biseparable(B|AC)"),
            TripartiteClass::Biseparable(_) => write!(f, "biseparable(C|AB)"),
            TripartiteClass::W => write!(f, "W"),
            TripartiteClass::Ghz => write!(f, "GHZ"),
        }
    }
}

/// SLOCC class of three qubits from local ranks and the 3-tangle.
pub fn slocc_tripartite_class(t: &Tensor, rank_tol: f64, tangle_tol: f64) -> Result<TripartiteClass> {
    check_qubits3(t)?;
    let ranks = local_ranks(t, rank_tol)?;
    let ones: Vec<usize> = (0..3).filter(|&a| ranks[a] == 1).collect();
    Ok(match ones.len() {
        0 => {
            if three_tangle(t)? > tangle_tol {
                TripartiteClass::Ghz
            } else {
                TripartiteClass::W
            }
        }
        1 => TripartiteClass::Biseparable(ones[0]),
        _ => TripartiteClass::Separable,
    })
}

#[derive(Clone, Debug)]
pub struct LadderIndicator {
    /// `−Σ λ log λ` over eigenvalues of `L` with positive real part.
    pub tau: f64,
    /// Normalised ladder operator `L = L̂ / Tr L̂` on the doubled party space.
    pub operator: DMatrix<Complex64>,
    /// `‖L − Lᴴ‖_F`.
    pub asymmetry: f64,
    /// Largest `|Im λ|` among the eigenvalues of `L`.
    pub max_imag: f64,
}

/// Ladder operator for the party on axis `party` of a three-party tensor.
///
/// Copies 1, 3, 5 are `ψ` and 2, 4, 6 are `ψ̄`, with the focus party first:
/// `L̂[(a₃a₂),(a₆a₅)] = Σ ψ(a₁b₁c₁) ψ̄(a₂b₁c₃) ψ(a₃b₃c₃) ψ̄(a₁b₃c₅) ψ(a₅b₅c₅) ψ̄(a₆b₅c₁)`,
/// summed over `a₁` and all `b`, `c`. The second and third parties are only
/// ever contracted against a conjugate copy, so `L̂` is invariant under local
/// unitaries on them.
pub fn ladder_operator(t: &Tensor, party: usize) -> Result<DMatrix<Complex64>> {
    if t.rank() != 3 || party > 2 {
        return Err(Error::Width(format!("ladder needs a three-party tensor, got shape {:?}", t.shape())));
    }
    let perm: Vec<usize> = std::iter::once(party).chain((0..3).filter(|&a| a != party)).collect();
    let u = t.normalized()?.permute(&perm);
    let (na, nb, nc) = (u.shape()[0], u.shape()[1], u.shape()[2]);
    let p = |a: usize, b: usize, c: usize| u.get(&[a, b, c]);
    let q = |a: usize, b: usize, c: usize| u.get(&[a, b, c]).conj();
    let mut l = DMatrix::<Complex64>::zeros(na * na, na * na);
    for a2 in 0..na {
        for a3 in 0..na {
            for a5 in 0..na {
                for a6 in 0..na {
                    let mut acc = Complex64::zero();
                    for a1 in 0..na {
                        for b1 in 0..nb {
                            for b3 in 0..nb {
                                for b5 in 0..nb {
                                    for c1 in 0..nc {
                                        for c3 in 0..nc {
                                            for c5 in 0..nc {
                                                acc += p(a1, b1, c1)
                                                    * q(a2, b1, c3)
                                                    * p(a3, b3, c3)
                                                    * q(a1, b3, c5)
                                                    * p(a5, b5, c5)
                                                    * q(a6, b5, c1);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                    l[(a3 * na + a2, a6 * na + a5)] = acc;
                }
            }
        }
    }
    Ok(l)
}

/// `τ₃` for the party on axis `party`.
pub fn ladder_indicator(t: &Tensor, party: usize) -> Result<LadderIndicator> {
    let lhat = ladder_operator(t, party)?;
    let tr = lhat.trace();
    let scale = lhat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if tr.norm() <= 1e-14 * scale.max(1e-300) || tr.norm() == 0.0 {
        return Err(Error::Undefined("ladder operator has vanishing trace".into()));
    }
    let l = lhat.map(|z| z / tr);
    let asymmetry = (&l - l.adjoint()).norm();
    let ev = l
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Internal("Schur decomposition did not converge".into()))?;
    let max_imag = ev.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let tau = ev.iter().map(|z| z.re).filter(|&x| x > EIGEN_FLOOR).map(|x| -x * x.ln()).sum();
    Ok(LadderIndicator { tau, operator: l, asymmetry, max_imag })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3(entries: &[((usize, usize, usize), f64)]) -> Tensor {
        let mut t = Tensor::zeros(vec![2, 2, 2]);
        for &((i, j, k), v) in entries {
            t.set(&[i, j, k], Complex64::new(v, 0.0));
        }
        t
    }

    #[test]
    fn tangle_reference_states() {
        let ghz = t3(&[((0, 0, 0), 1.0), ((1, 1, 1), 1.0)]);
        let w = t3(&[((0, 0, 1), 1.0), ((0, 1, 0), 1.0), ((1, 0, 0), 1.0)]);
        assert!((three_tangle(&ghz).unwrap() - 1.0).abs() < 1e-12);
        assert!(three_tangle(&w).unwrap() < 1e-12);
        assert_eq!(slocc_tripartite_class(&ghz, RANK_TOL, TANGLE_TOL).unwrap(), TripartiteClass::Ghz);
        assert_eq!(slocc_tripartite_class(&w, RANK_TOL, TANGLE_TOL).unwrap(), TripartiteClass::W);
    }

    #[test]
    fn ghz_ladder_is_two_halves() {
        let ghz = t3(&[((0, 0, 0), 1.0), ((1, 1, 1), 1.0)]);
        let l = ladder_indicator(&ghz, 0).unwrap();
        assert!((l.tau - 2f64.ln()).abs() < 1e-12);
    }
}
