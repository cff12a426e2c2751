//! Scalars in the Kauffman variable `A`.
//!
//! [`LaurentPoly`] and [`RationalFn`] are exact (arbitrary-precision rational
//! coefficients); [`EvalPoint`] specialises them to `A = exp(iθ)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Numeric backend scalar.
pub type NumericScalar = Complex64;

/// Absolute threshold under which a denominator is treated as vanishing.
pub const DEGENERATE_EPS: f64 = 1e-12;

/// Finite sum `Σ c_k A^k` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigRational>,
}

impl LaurentPoly {
    pub fn monomial(c: BigRational, k: i32) -> Self {
        let mut p = LaurentPoly::default();
        if !c.is_zero() {
            p.terms.insert(k, c);
        }
        p
    }

    /// `A^k`
    pub fn a_pow(k: i32) -> Self {
        Self::monomial(BigRational::one(), k)
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(BigRational::from_integer(BigInt::from(n)), 0)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(it: I) -> Self {
        let mut p = LaurentPoly::default();
        for (k, c) in it {
            p.add_term(k, BigRational::from_integer(BigInt::from(c)));
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i32) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, k: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.values().next_back()
    }

    /// `p(A) ↦ p(A⁻¹)`.
    pub fn invert_var(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect() }
    }

    pub fn shift(&self, by: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (k + by, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::default();
        }
        LaurentPoly { terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = LaurentPoly::from_int(1);
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    pub fn eval(&self, a: Complex64) -> Complex64 {
        self.terms.iter().map(|(k, c)| a.powi(*k) * c.to_f64().unwrap_or(f64::NAN)).sum()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Dense ascending coefficients of `A^{-min} · p`.
    fn dense(&self) -> (i32, Vec<BigRational>) {
        let lo = match self.min_exp() {
            Some(lo) => lo,
            None => return (0, Vec::new()),
        };
        let hi = self.max_exp().unwrap();
        let mut v = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (k, c) in &self.terms {
            v[(k - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(lo: i32, v: &[BigRational]) -> Self {
        let mut p = LaurentPoly::default();
        for (i, c) in v.iter().enumerate() {
            p.add_term(lo + i as i32, c.clone());
        }
        p
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::from_int(1)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, -c.clone());
        }
        r
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::default();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                r.add_term(a + b, x * y);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(LaurentPoly, Add, add);
forward_owned!(LaurentPoly, Sub, sub);
forward_owned!(LaurentPoly, Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn fmt_rat(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentPoly {
    /// Highest power first, e.g. `-A^2 - A^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let unit = mag.is_one();
            match (*k, unit) {
                (0, _) => write!(f, "{}", fmt_rat(&mag))?,
                (1, true) => write!(f, "A")?,
                (1, false) => write!(f, "{}*A", fmt_rat(&mag))?,
                (k, true) => write!(f, "A^{}", k)?,
                (k, false) => write!(f, "{}*A^{}", fmt_rat(&mag), k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// ---- dense polynomial helpers (ascending coefficients) ----

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Remainder and quotient of `a / b`; `b` non-zero.
fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            let t = &r[i + shift] - &c * bi;
            r[i + shift] = t;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn monic(mut v: Vec<BigRational>) -> Vec<BigRational> {
    trim(&mut v);
    if let Some(l) = v.last().cloned() {
        for c in v.iter_mut() {
            *c = &*c / &l;
        }
    }
    v
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = monic(r);
    }
    monic(x)
}

/// Quotient `num / den` in the field of rational functions of `A`, kept in
/// lowest terms. The denominator is monic with lowest exponent 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFn { num: p, den: LaurentPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(n))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::monomial(c, 0))
    }

    pub fn a_pow(k: i32) -> Self {
        Self::from_poly(LaurentPoly::a_pow(k))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return RationalFn { num, den: LaurentPoly::one() };
        }
        let (nlo, nd) = num.dense();
        let (dlo, dd) = den.dense();
        let g = poly_gcd(&nd, &dd);
        let (nq, dq) = if g.len() > 1 { (divrem(&nd, &g).0, divrem(&dd, &g).0) } else { (nd, dd) };
        let lead = dq.last().unwrap().clone();
        let num = LaurentPoly::from_dense(nlo - dlo, &nq).scale(&(BigRational::one() / &lead));
        let den = LaurentPoly::from_dense(0, &dq).scale(&(BigRational::one() / &lead));
        RationalFn { num, den }
    }

    /// Re-run the canonical reduction (idempotent).
    pub fn reduce(&self) -> Self {
        Self::normalize(self.num.clone(), self.den.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.recip()?)
    }

    /// `A ↦ A⁻¹`.
    pub fn invert_var(&self) -> Self {
        Self::normalize(self.num.invert_var(), self.den.invert_var())
    }

    pub fn evaluate(&self, p: &EvalPoint) -> Result<Complex64> {
        self.evaluate_at(p.a())
    }

    pub fn evaluate_at(&self, a: Complex64) -> Result<Complex64> {
        let dv = self.den.eval(a);
        if dv.norm() < DEGENERATE_EPS {
            return Err(Error::Degenerate(format!("denominator {} vanishes at A = {}", self.den, a)));
        }
        Ok(self.num.eval(a) / dv)
    }
}

impl Zero for RationalFn {
    fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFn {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl<'a> Add<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn add(self, o: &RationalFn) -> RationalFn {
        if self.den == o.den {
            let num = &self.num + &o.num;
            if self.den.is_one() {
                return RationalFn { num, den: self.den.clone() };
            }
            return RationalFn::normalize(num, self.den.clone());
        }
        RationalFn::normalize(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> Sub<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn sub(self, o: &RationalFn) -> RationalFn {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn mul(self, o: &RationalFn) -> RationalFn {
        if self.den.is_one() && o.den.is_one() {
            return RationalFn { num: &self.num * &o.num, den: LaurentPoly::one() };
        }
        if self.num.is_zero() || o.num.is_zero() {
            return RationalFn::zero();
        }
        RationalFn::normalize(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

forward_owned!(RationalFn, Add, add);
forward_owned!(RationalFn, Sub, sub);
forward_owned!(RationalFn, Mul, mul);

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `d = −A² − A⁻²`.
pub fn d_param() -> LaurentPoly {
    LaurentPoly::from_terms([(2, -1), (-2, -1)])
}

/// `Δ_n` as a polynomial in `A`: `Δ₋₁ = 0`, `Δ₀ = 1`, `Δ_{n+1} = dΔ_n − Δ_{n−1}`.
pub fn delta_poly(n: i64) -> Result<LaurentPoly> {
    if n < -1 {
        return Err(Error::Domain(format!("delta({}) undefined for n < -1", n)));
    }
    let d = d_param();
    let (mut prev, mut cur) = (LaurentPoly::zero(), LaurentPoly::one());
    if n == -1 {
        return Ok(prev);
    }
    for _ in 0..n {
        let next = &(&d * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

pub fn delta(n: i64) -> Result<RationalFn> {
    delta_poly(n).map(RationalFn::from_poly)
}

/// Same recursion driven by a numeric loop value.
pub fn delta_numeric(n: i64, d: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..n {
        let next = d * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Numeric specialisation `A = exp(iθ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint {
    pub theta: f64,
    pub level: Option<i64>,
}

impl EvalPoint {
    pub fn from_theta(theta: f64) -> Self {
        EvalPoint { theta, level: None }
    }

    /// Level `k`: `A = exp(−πi/(2(k+2)))`, so that `q = A⁻⁴ = exp(2πi/(k+2))`.
    pub fn from_level(k: i64) -> Result<Self> {
        if k + 2 == 0 {
            return Err(Error::Domain("level k = -2 has no evaluation point".into()));
        }
        let theta = -std::f64::consts::PI / (2.0 * (k + 2) as f64);
        Ok(EvalPoint { theta, level: Some(k) })
    }

    pub fn a(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    pub fn q(&self) -> Complex64 {
        self.a().powi(-4)
    }

    /// `d = −2 cos 2θ`.
    pub fn d(&self) -> f64 {
        -2.0 * (2.0 * self.theta).cos()
    }
}

/// Numeric value of an exact scalar.
pub fn evaluate(x: &RationalFn, p: &EvalPoint) -> Result<Complex64> {
    x.evaluate(p)
}

// ---- square-free splitting ----

fn derivative(v: &[BigRational]) -> Vec<BigRational> {
    let mut out: Vec<BigRational> =
        v.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect();
    trim(&mut out);
    out
}

/// Yun's algorithm: `out[i]` is the product of the monic irreducible factors
/// of multiplicity `i + 1` in the monic, non-constant `f`.
fn yun(f: &[BigRational]) -> Vec<Vec<BigRational>> {
    let df = derivative(f);
    let a0 = poly_gcd(f, &df);
    let mut b = divrem(f, &a0).0;
    let mut c = divrem(&df, &a0).0;
    trim(&mut c);
    let mut out = Vec::new();
    while b.len() > 1 {
        let mut dd = c.clone();
        let db = derivative(&b);
        dd.resize(dd.len().max(db.len()), BigRational::zero());
        for (i, x) in db.iter().enumerate() {
            dd[i] = &dd[i] - x;
        }
        trim(&mut dd);
        let a = if dd.is_empty() { monic(b.clone()) } else { poly_gcd(&b, &dd) };
        b = divrem(&b, &a).0;
        c = if dd.is_empty() { Vec::new() } else { divrem(&dd, &a).0 };
        out.push(a);
    }
    out
}

fn dense_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    out
}

impl LaurentPoly {
    /// Write `self = r²·s` with `s` square-free and `r` a product of monic
    /// factors (so `r` is fixed, sign included). Zero maps to `(0, 1)`.
    pub fn square_split(&self) -> (LaurentPoly, LaurentPoly) {
        let (lo, v) = self.dense();
        if v.is_empty() {
            return (LaurentPoly::zero(), LaurentPoly::one());
        }
        let lead = v.last().unwrap().clone();
        let f = monic(v);
        let one = vec![BigRational::one()];
        let (mut r, mut s) = (one.clone(), one);
        if f.len() > 1 {
            for (i, a) in yun(&f).iter().enumerate() {
                let mult = i + 1;
                for _ in 0..mult / 2 {
                    r = dense_mul(&r, a);
                }
                if mult % 2 == 1 {
                    s = dense_mul(&s, a);
                }
            }
        }
        let q = lo.div_euclid(2);
        let e = lo.rem_euclid(2);
        (LaurentPoly::from_dense(q, &r), LaurentPoly::from_dense(e, &s).scale(&lead))
    }
}

impl RationalFn {
    /// `self = r²·s` with square-free numerator and denominator in `s`.
    pub fn square_split(&self) -> (RationalFn, RationalFn) {
        let (rn, sn) = self.num.square_split();
        let (rd, sd) = self.den.square_split();
        (Self::normalize(rn, rd), Self::normalize(sn, sd))
    }
}
