//! Coefficient rings for diagram combinations.
//!
//! Diagram algebra is written once over [`Coeff`]; an [`Algebra`] carries the
//! loop value and crossing weights for a concrete backend.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{d_param, EvalPoint, RationalFn, DEGENERATE_EPS};

pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Coefficient map used by [`crate::diagram::TLElement::adjoint`].
    fn adjoint(&self) -> Self;
    fn try_div(&self, rhs: &Self) -> Result<Self>;
    fn from_i64(n: i64) -> Self;
}

impl Coeff for RationalFn {
    fn adjoint(&self) -> Self {
        self.invert_var()
    }
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.checked_div(rhs)
    }
    fn from_i64(n: i64) -> Self {
        RationalFn::from_int(n)
    }
}

impl Coeff for Complex64 {
    fn adjoint(&self) -> Self {
        self.conj()
    }
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.norm() < DEGENERATE_EPS {
            return Err(Error::Degenerate(format!("division by {}", rhs)));
        }
        Ok(self / rhs)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

/// How crossings resolve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `over = A·id + A⁻¹·e`, `under = A⁻¹·id + A·e`.
    Kauffman,
    /// Both crossings are `id + e`, and the loop value is pinned to `−2`.
    Permutation,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kauffman" => Ok(Mode::Kauffman),
            "permutation" => Ok(Mode::Permutation),
            _ => Err(Error::Domain(format!("unknown mode '{}'", s))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Kauffman => "kauffman",
            Mode::Permutation => "permutation",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Algebra<C> {
    pub mode: Mode,
    /// Value of a closed loop.
    pub d: C,
    /// Coefficients `(id, e)` of the resolved over-crossing.
    pub over: (C, C),
    /// Coefficients `(id, e)` of the resolved under-crossing.
    pub under: (C, C),
}

pub type ExactAlgebra = Algebra<RationalFn>;
pub type NumericAlgebra = Algebra<Complex64>;

impl Algebra<RationalFn> {
    pub fn exact(mode: Mode) -> Self {
        match mode {
            Mode::Kauffman => {
                let a = RationalFn::a_pow(1);
                let ai = RationalFn::a_pow(-1);
                Algebra { mode, d: RationalFn::from_poly(d_param()), over: (a.clone(), ai.clone()), under: (ai, a) }
            }
            Mode::Permutation => Algebra {
                mode,
                d: RationalFn::from_int(-2),
                over: (RationalFn::one(), RationalFn::one()),
                under: (RationalFn::one(), RationalFn::one()),
            },
        }
    }
}

impl Algebra<RationalFn> {
    /// Crossing-free algebra over `Q(d)`: the indeterminate of [`RationalFn`]
    /// stands for the loop value itself. Crossings resolve to zero here, so only
    /// use it on planar input.
    pub fn loop_variable() -> Self {
        let z = RationalFn::zero();
        Algebra { mode: Mode::Kauffman, d: RationalFn::a_pow(1), over: (z.clone(), z.clone()), under: (z.clone(), z) }
    }
}

impl Algebra<Complex64> {
    pub fn numeric(mode: Mode, p: &EvalPoint) -> Self {
        match mode {
            Mode::Kauffman => {
                let a = p.a();
                let ai = a.inv();
                Algebra { mode, d: Complex64::new(p.d(), 0.0), over: (a, ai), under: (ai, a) }
            }
            Mode::Permutation => {
                let one = Complex64::one();
                Algebra { mode, d: Complex64::new(-2.0, 0.0), over: (one, one), under: (one, one) }
            }
        }
    }
}

impl<C: Coeff> Algebra<C> {
    /// `Δ_n` from the recursion, in this ring.
    pub fn delta(&self, n: i64) -> C {
        if n < 0 {
            return C::zero();
        }
        let (mut prev, mut cur) = (C::zero(), C::one());
        for _ in 0..n {
            let next = self.d.clone() * cur.clone() - prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn d_pow(&self, k: usize) -> C {
        let mut r = C::one();
        for _ in 0..k {
            r = r * self.d.clone();
        }
        r
    }
}
