//! Highest-weight vectors of tensor products of SU(2) irreps.
//!
//! Spins are stored doubled (`2j`). In each factor the basis runs from
//! `m = j` down to `m = −j`, so index 0 is the top weight; for spin 1 that is
//! the labelling `+1 → 0, 0 → 1, −1 → 2`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::entanglement::{schmidt_rank, slocc_tripartite_class, TripartiteClass, RANK_TOL, TANGLE_TOL};
use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Tolerance for null singular values of the raising operator.
pub const NULL_TOL: f64 = 1e-10;

/// A spin `j = twice / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    pub twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Self {
        Spin { twice }
    }

    pub fn dim(&self) -> usize {
        self.twice as usize + 1
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl std::str::FromStr for Spin {
    type Err = Error;
    /// Accepts `1/2`, `3/2`, `1`, `0.5`, `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("'{}' is not a non-negative half-integer", s));
        if let Some((n, d)) = s.split_once('/') {
            let n: u32 = n.trim().parse().map_err(|_| bad())?;
            return match d.trim() {
                "2" => Ok(Spin { twice: n }),
                "1" => Ok(Spin { twice: 2 * n }),
                _ => Err(bad()),
            };
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let t = 2.0 * x;
        if x < 0.0 || (t - t.round()).abs() > 1e-12 {
            return Err(bad());
        }
        Ok(Spin { twice: t.round() as u32 })
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Product of irreps with the product basis in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinSystem {
    pub spins: Vec<Spin>,
}

impl SpinSystem {
    pub fn new(spins: Vec<Spin>) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::Domain("need at least one spin".into()));
        }
        Ok(SpinSystem { spins })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spins.iter().map(Spin::dim).collect()
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    fn digits(&self, mut idx: usize) -> Vec<usize> {
        let dims = self.dims();
        let mut out = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            out[k] = idx % dims[k];
            idx /= dims[k];
        }
        out
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(self.dims()).fold(0, |acc, (d, n)| acc * n + d)
    }

    /// `2M` of a product basis state.
    pub fn twice_weight(&self, idx: usize) -> i64 {
        self.digits(idx).iter().zip(&self.spins).map(|(&k, s)| s.twice as i64 - 2 * k as i64).sum()
    }

    /// Total raising operator `J₊ = Σ J₊⁽ⁱ⁾` on the product space.
    pub fn raising(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut r = DMatrix::zeros(n, n);
        for idx in 0..n {
            let dg = self.digits(idx);
            for (f, s) in self.spins.iter().enumerate() {
                let k = dg[f];
                if k == 0 {
                    continue;
                }
                let j = s.value();
                let m = j - k as f64;
                let c = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
                let mut up = dg.clone();
                up[f] -= 1;
                r[(self.index(&up), idx)] += c;
            }
        }
        r
    }
}

#[derive(Clone, Debug)]
pub struct HighestWeight {
    pub total: Spin,
    /// 0-based index among vectors of the same total spin.
    pub multiplicity: usize,
    /// Unit vector in the product basis; first non-zero entry positive.
    pub vector: Vec<f64>,
}

/// Orthonormal basis (rows) of the null space of `m`, made canonical: the
/// reduced row-echelon form of the null space is orthonormalised in order.
#[allow(clippy::needless_range_loop)]
fn canonical_null_space(m: &DMatrix<f64>, ncols: usize) -> Vec<Vec<f64>> {
    if ncols == 0 {
        return Vec::new();
    }
    let basis: Vec<Vec<f64>> = if m.nrows() == 0 {
        (0..ncols).map(|i| (0..ncols).map(|k| if k == i { 1.0 } else { 0.0 }).collect()).collect()
    } else {
        // pad to square so the SVD exposes every right singular vector
        let rows = m.nrows().max(ncols);
        let mut a = DMatrix::<f64>::zeros(rows, ncols);
        a.view_mut((0, 0), (m.nrows(), ncols)).copy_from(m);
        let svd = a.svd(false, true);
        let vt = svd.v_t.expect("requested");
        let top = svd.singular_values.iter().copied().fold(0.0, f64::max).max(1.0);
        (0..ncols)
            .filter(|&i| svd.singular_values[i] <= NULL_TOL * top)
            .map(|i| vt.row(i).iter().copied().collect())
            .collect()
    };
    // row-reduce
    let mut rows = basis;
    let mut lead = 0;
    for r in 0..rows.len() {
        while lead < ncols {
            let piv = (r..rows.len()).max_by(|&a, &b| rows[a][lead].abs().partial_cmp(&rows[b][lead].abs()).unwrap());
            match piv {
                Some(p) if rows[p][lead].abs() > 1e-9 => {
                    rows.swap(r, p);
                    let pv = rows[r][lead];
                    for x in rows[r].iter_mut() {
                        *x /= pv;
                    }
                    for q in 0..rows.len() {
                        if q != r {
                            let f = rows[q][lead];
                            for c in 0..ncols {
                                rows[q][c] -= f * rows[r][c];
                            }
                        }
                    }
                    lead += 1;
                    break;
                }
                _ => lead += 1,
            }
        }
    }
    // Gram–Schmidt, then fix the sign of the first significant entry
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in rows {
        for q in &out {
            let c: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 1e-9 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= n;
        }
        if let Some(f) = v.iter().find(|x| x.abs() > 1e-12) {
            if *f < 0.0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
        }
        for x in v.iter_mut() {
            if x.abs() < 1e-15 {
                *x = 0.0;
            }
        }
        out.push(v);
    }
    out
}

/// Highest-weight vectors of every irrep in the product, by ascending total
/// spin and multiplicity index.
pub fn highest_weight_vectors(sys: &SpinSystem) -> Vec<HighestWeight> {
    let n = sys.dim();
    let raise = sys.raising();
    let top: i64 = sys.spins.iter().map(|s| s.twice as i64).sum();
    let mut out = Vec::new();
    let mut tw = top.rem_euclid(2);
    while tw <= top {
        let cols: Vec<usize> = (0..n).filter(|&i| sys.twice_weight(i) == tw).collect();
        let rows: Vec<usize> = (0..n).filter(|&i| sys.twice_weight(i) == tw + 2).collect();
        let block = DMatrix::from_fn(rows.len(), cols.len(), |r, c| raise[(rows[r], cols[c])]);
        for (mult, v) in canonical_null_space(&block, cols.len()).into_iter().enumerate() {
            let mut full = vec![0.0; n];
            for (k, &c) in cols.iter().enumerate() {
                full[c] = v[k];
            }
            out.push(HighestWeight { total: Spin::from_twice(tw as u32), multiplicity: mult, vector: full });
        }
        tw += 2;
    }
    out
}

impl HighestWeight {
    pub fn tensor(&self, sys: &SpinSystem) -> Tensor {
        Tensor::new(sys.dims(), self.vector.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .expect("vector length matches the spin system")
    }
}

/// `(J, rank of ρ_A)` for each highest weight of `j₁ ⊗ j₂`.
pub fn hw_rank_table(j1: Spin, j2: Spin) -> Result<Vec<(Spin, usize)>> {
    let sys = SpinSystem::new(vec![j1, j2])?;
    highest_weight_vectors(&sys).iter().map(|h| Ok((h.total, schmidt_rank(&h.tensor(&sys), &[0], RANK_TOL)?))).collect()
}

/// SLOCC classes of the highest weights of `½ ⊗ ½ ⊗ ½`.
pub fn classify_hw_tripartite() -> Result<Vec<(HighestWeight, TripartiteClass)>> {
    let half = Spin::from_twice(1);
    let sys = SpinSystem::new(vec![half; 3])?;
    highest_weight_vectors(&sys)
        .into_iter()
        .map(|h| {
            let c = slocc_tripartite_class(&h.tensor(&sys), RANK_TOL, TANGLE_TOL)?;
            Ok((h, c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_spins() {
        assert_eq!("1/2".parse::<Spin>().unwrap().twice, 1);
        assert_eq!("1".parse::<Spin>().unwrap().twice, 2);
        assert_eq!("1.5".parse::<Spin>().unwrap().twice, 3);
        assert!("0.3".parse::<Spin>().is_err());
        assert!("-1".parse::<Spin>().is_err());
        assert_eq!(Spin::from_twice(3).to_string(), "3/2");
    }

    #[test]
    fn two_doublets() {
        let sys = SpinSystem::new(vec![Spin::from_twice(1); 2]).unwrap();
        let hw = highest_weight_vectors(&sys);
        assert_eq!(hw.len(), 2);
        let r = 0.5f64.sqrt();
        assert_eq!(hw[0].total.twice, 0);
        assert!(hw[0].vector.iter().zip([0.0, r, -r, 0.0]).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(hw[1].vector.iter().zip([1.0, 0.0, 0.0, 0.0]).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}
