//! Jones-Wenzl projectors.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::diagram::{closure_loops, End, PlanarDiagram, TLElement};
use crate::error::{Error, Result};
use crate::ring::{Algebra, Coeff, Mode};
use crate::scalar::RationalFn;

#[derive(Clone, Debug)]
pub struct JWProjector<C> {
    pub n: usize,
    pub element: TLElement<C>,
}

/// `jw(m+1) = jw(m)⊗1 − (Δ_{m−1}/Δ_m)·(jw(m)⊗1)·e_m·(jw(m)⊗1)`, in any ring.
///
/// Fails with [`Error::Degenerate`] when some `Δ_m`, `m < n`, vanishes.
pub fn jw_in<C: Coeff>(n: usize, alg: &Algebra<C>) -> Result<TLElement<C>> {
    if n == 0 {
        return Err(Error::Domain("jw(0) is undefined".into()));
    }
    let mut p = TLElement::identity(1);
    for m in 1..n {
        let lifted = p.tensor(&TLElement::identity(1));
        let em = TLElement::generator(m + 1, m)?;
        let sandwich = lifted.compose(&em, alg)?.compose(&lifted, alg)?;
        let ratio = alg
            .delta(m as i64 - 1)
            .try_div(&alg.delta(m as i64))
            .map_err(|_| Error::Degenerate(format!("Delta_{} vanishes; jw({}) does not exist here", m, n)))?;
        p = lifted.sub(&sandwich.scale(&ratio))?;
    }
    Ok(p)
}

type ExactCache = Mutex<HashMap<(Mode, usize), Arc<TLElement<RationalFn>>>>;

fn exact_cache() -> &'static ExactCache {
    static CACHE: OnceLock<ExactCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoised exact projector.
pub fn jw_exact(n: usize, mode: Mode) -> Result<Arc<TLElement<RationalFn>>> {
    if let Some(p) = exact_cache().lock().unwrap().get(&(mode, n)) {
        return Ok(p.clone());
    }
    let p = Arc::new(jw_in(n, &Algebra::exact(mode))?);
    exact_cache().lock().unwrap().insert((mode, n), p.clone());
    Ok(p)
}

pub fn jw(n: usize) -> Result<JWProjector<RationalFn>> {
    Ok(JWProjector { n, element: (*jw_exact(n, Mode::Kauffman)?).clone() })
}

/// Close strand `i` on top to strand `i` on the bottom for every `i`.
pub fn markov_trace<C: Coeff>(x: &TLElement<C>, alg: &Algebra<C>) -> Result<C> {
    if x.n_top() != x.n_bottom() {
        return Err(Error::Width("trace needs a square element".into()));
    }
    let n = x.n_top();
    let mut total = C::zero();
    for (d, c) in x.terms() {
        let len = d.len();
        let inv: Vec<usize> = (0..len).map(|l| d.label(d.partner(d.end(l)))).collect();
        let glue: Vec<usize> = (0..len)
            .map(|l| match d.end(l) {
                End::Top(i) => d.label(End::Bot(i)),
                End::Bot(j) => d.label(End::Top(j)),
            })
            .collect();
        let loops = if n == 0 { 0 } else { closure_loops(&inv, &glue) };
        total = total + c.clone() * alg.d_pow(loops);
    }
    Ok(total)
}

impl<C: Coeff> JWProjector<C> {
    pub fn in_ring(n: usize, alg: &Algebra<C>) -> Result<Self> {
        Ok(JWProjector { n, element: jw_in(n, alg)? })
    }

    pub fn trace_closure(&self, alg: &Algebra<C>) -> Result<C> {
        markov_trace(&self.element, alg)
    }

    /// Cap strands `i, i+1` (1-based) on the top and, separately, on the bottom;
    /// true iff both results vanish identically.
    pub fn plat_closure_is_zero(&self, i: usize, alg: &Algebra<C>) -> Result<bool> {
        let n = self.n;
        if n < 2 {
            return Ok(true);
        }
        if i == 0 || i >= n {
            return Err(Error::Domain(format!("no cappable pair at {} for width {}", i, n)));
        }
        let cup = TLElement::from_diagram(PlanarDiagram::cup(n - 2, i)?);
        let cap = TLElement::from_diagram(PlanarDiagram::cap(n, i)?);
        let top = cup.compose(&self.element, alg)?;
        let bottom = self.element.compose(&cap, alg)?;
        Ok(top.is_zero() && bottom.is_zero())
    }

    pub fn identity_coeff(&self) -> C {
        self.element.coeff(&PlanarDiagram::identity(self.n))
    }
}

impl JWProjector<RationalFn> {
    pub fn trace_exact(&self) -> Result<RationalFn> {
        self.trace_closure(&Algebra::exact(Mode::Kauffman))
    }

    pub fn plat_zero_exact(&self, i: usize) -> Result<bool> {
        self.plat_closure_is_zero(i, &Algebra::exact(Mode::Kauffman))
    }
}

/// `true` iff `x·x == x` exactly.
pub fn is_idempotent(x: &TLElement<RationalFn>, alg: &Algebra<RationalFn>) -> Result<bool> {
    Ok(x.compose(x, alg)? == *x)
}
