//! Dense complex amplitude tensors, row-major.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<Complex64>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<Complex64>) -> Result<Self> {
        if shape.iter().product::<usize>() != data.len() {
            return Err(Error::Width(format!("shape {:?} does not hold {} entries", shape, data.len())));
        }
        Ok(Tensor { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Tensor { shape, data: vec![Complex64::zero(); n] }
    }

    /// Real entries, handy for literals.
    pub fn from_real(shape: Vec<usize>, data: &[f64]) -> Result<Self> {
        Self::new(shape, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (i, n)| acc * n + i)
    }

    pub fn index_of(&self, mut off: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for k in (0..self.shape.len()).rev() {
            idx[k] = off % self.shape[k];
            off /= self.shape[k];
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Complex64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Tensor> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroTensor);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Tensor {
        Tensor { shape: self.shape.clone(), data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn conj(&self) -> Tensor {
        Tensor { shape: self.shape.clone(), data: self.data.iter().map(|z| z.conj()).collect() }
    }

    /// `out[.., j, ..] = Σ_i m[j, i] · self[.., i, ..]` along `axis`.
    pub fn apply_matrix(&self, axis: usize, m: &DMatrix<Complex64>) -> Result<Tensor> {
        if m.ncols() != self.shape[axis] {
            return Err(Error::Width(format!(
                "matrix has {} columns, axis {} has {}",
                m.ncols(),
                axis,
                self.shape[axis]
            )));
        }
        let mut shape = self.shape.clone();
        shape[axis] = m.nrows();
        let mut out = Tensor::zeros(shape);
        for off in 0..out.data.len() {
            let mut idx = out.index_of(off);
            let j = idx[axis];
            let mut acc = Complex64::zero();
            for i in 0..self.shape[axis] {
                idx[axis] = i;
                acc += m[(j, i)] * self.get(&idx);
            }
            out.data[off] = acc;
        }
        Ok(out)
    }

    /// Reorder axes: output axis `k` is input axis `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let mut out = Tensor::zeros(shape);
        for off in 0..out.data.len() {
            let idx = out.index_of(off);
            let mut src = vec![0; idx.len()];
            for (k, &p) in perm.iter().enumerate() {
                src[p] = idx[k];
            }
            out.data[off] = self.get(&src);
        }
        out
    }

    /// Matrix with rows indexed by `rows` (in order) and columns by the rest.
    pub fn unfold(&self, rows: &[usize]) -> DMatrix<Complex64> {
        let rest: Vec<usize> = (0..self.rank()).filter(|a| !rows.contains(a)).collect();
        let mut perm = rows.to_vec();
        perm.extend(&rest);
        let t = self.permute(&perm);
        let nr: usize = rows.iter().map(|&a| self.shape[a]).product();
        let nc = self.data.len() / nr.max(1);
        DMatrix::from_fn(nr, nc, |r, c| t.data[r * nc + c])
    }

    /// Outer product `self ⊗ other`.
    pub fn outer(&self, other: &Tensor) -> Tensor {
        let mut shape = self.shape.clone();
        shape.extend(&other.shape);
        let data = self.data.iter().flat_map(|a| other.data.iter().map(move |b| a * b)).collect();
        Tensor { shape, data }
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}
