//! Party-local Hilbert spaces and amplitude extraction.
//!
//! A party owns `4w` consecutive boundary points, grouped into four punctures
//! of `w` strands each; every puncture is dressed with `jw(w)`, so the party
//! space has dimension `w + 1`. A plain party instead keeps every planar
//! matching of its endpoints as a basis vector. Amplitudes of a multiparty
//! state are obtained by gluing product basis pairings onto it and passing
//! each axis through the party's orthonormal frame.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::diagram::{closure_loops, enumerate_planar_matchings, PlanarDiagram, TLElement};
use crate::error::{Error, Result};
use crate::jones_wenzl::jw_in;
use crate::ring::{Algebra, Coeff, NumericAlgebra};
use crate::scalar::RationalFn;
use crate::tensor::Tensor;
use crate::NumericElement;

/// Threshold on squared norms (and their square-free parts) below which a
/// frame vector counts as null.
pub const NULL_NORM_EPS: f64 = 1e-12;

/// How a party's endpoints are turned into a Hilbert space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartyKind {
    /// Four punctures of `width` strands, each dressed with `jw(width)`;
    /// dimension `width + 1`.
    Punctured { width: usize },
    /// `points` bare endpoints with every planar matching as a basis
    /// vector; dimension the Catalan number `C_{points/2}`.
    Plain { points: usize },
}

impl PartyKind {
    pub fn len(&self) -> usize {
        match *self {
            PartyKind::Punctured { width } => 4 * width,
            PartyKind::Plain { points } => points,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match *self {
            PartyKind::Punctured { width } => width + 1,
            PartyKind::Plain { points } => catalan(points / 2),
        }
    }
}

fn catalan(n: usize) -> usize {
    (0..n).fold(1usize, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Party {
    pub name: String,
    /// First endpoint, 0-based.
    pub start: usize,
    pub kind: PartyKind,
}

impl Party {
    pub fn punctured(name: &str, start: usize, width: usize) -> Self {
        Party { name: name.to_string(), start, kind: PartyKind::Punctured { width } }
    }

    pub fn plain(name: &str, start: usize, points: usize) -> Self {
        Party { name: name.to_string(), start, kind: PartyKind::Plain { points } }
    }

    pub fn len(&self) -> usize {
        self.kind.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kind.is_empty()
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len()
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// Puncture width, for punctured parties.
    pub fn width(&self) -> Option<usize> {
        match self.kind {
            PartyKind::Punctured { width } => Some(width),
            PartyKind::Plain { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyLayout {
    n_points: usize,
    parties: Vec<Party>,
}

impl PartyLayout {
    pub fn new(n_points: usize, parties: Vec<Party>) -> Result<Self> {
        let mut owner: Vec<Option<usize>> = vec![None; n_points];
        for (k, p) in parties.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::Width(format!("party {} has no endpoints", p.name)));
            }
            if p.len() % 2 != 0 {
                return Err(Error::Width(format!("party {} has an odd number of endpoints", p.name)));
            }
            if parties[..k].iter().any(|q| q.name == p.name) {
                return Err(Error::Domain(format!("party {} declared twice", p.name)));
            }
            if p.range().end > n_points {
                return Err(Error::Width(format!(
                    "party {} reaches endpoint {} of {}",
                    p.name,
                    p.range().end,
                    n_points
                )));
            }
            for i in p.range() {
                if let Some(o) = owner[i] {
                    return Err(Error::Domain(format!(
                        "endpoint {} belongs to both {} and {}",
                        i + 1,
                        parties[o].name,
                        p.name
                    )));
                }
                owner[i] = Some(k);
            }
        }
        if let Some(i) = owner.iter().position(|o| o.is_none()) {
            return Err(Error::Domain(format!("endpoint {} belongs to no party", i + 1)));
        }
        Ok(PartyLayout { n_points, parties })
    }

    /// From 1-based inclusive ranges; each range must hold a multiple of four.
    pub fn from_ranges(n_points: usize, ranges: &[(&str, usize, usize)]) -> Result<Self> {
        let mut parties = Vec::with_capacity(ranges.len());
        for &(name, first, last) in ranges {
            if first == 0 || last < first {
                return Err(Error::Domain(format!("bad range {}..{} for party {}", first, last, name)));
            }
            let len = last - first + 1;
            if len % 4 != 0 {
                return Err(Error::Width(format!("party {} has {} endpoints, not a multiple of 4", name, len)));
            }
            parties.push(Party::punctured(name, first - 1, len / 4));
        }
        Self::new(n_points, parties)
    }

    /// `m` consecutive parties `A, B, C, …` of equal width.
    pub fn uniform(m: usize, width: usize) -> Self {
        let parties = (0..m).map(|k| Party::punctured(&party_name(k), 4 * width * k, width)).collect();
        PartyLayout::new(4 * width * m, parties).expect("uniform layout is valid")
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn len(&self) -> usize {
        self.parties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parties.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.parties.iter().position(|p| p.name == name)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parties.iter().map(Party::dim).collect()
    }
}

/// `A, B, …, Z, P26, P27, …`.
pub fn party_name(k: usize) -> String {
    if k < 26 {
        ((b'A' + k as u8) as char).to_string()
    } else {
        format!("P{}", k)
    }
}

/// The `w + 1` pairings of four width-`w` punctures with no arc inside a
/// puncture. Entry `j` has `w − j` lines between punctures 1–2 and 3–4, and
/// `j` lines between 2–3 and 1–4.
pub fn puncture_pairings(w: usize) -> Vec<PlanarDiagram> {
    (0..=w)
        .rev()
        .map(|a| {
            let mut pairs = Vec::with_capacity(2 * w);
            for t in 0..a {
                pairs.push((w - 1 - t, w + t));
                pairs.push((3 * w - 1 - t, 3 * w + t));
            }
            for t in 0..w - a {
                pairs.push((2 * w - 1 - t, 2 * w + t));
                pairs.push((t, 4 * w - 1 - t));
            }
            PlanarDiagram::state(4 * w, &pairs).expect("puncture pairing is planar")
        })
        .collect()
}

fn embed<C: Coeff>(x: &TLElement<C>, left: usize, right: usize) -> TLElement<C> {
    TLElement::identity(left).tensor(x).tensor(&TLElement::identity(right))
}

/// Apply `proj` (width `w`) below a state at every start in `starts`.
fn dress<C: Coeff>(
    x: &TLElement<C>,
    starts: &[usize],
    w: usize,
    proj: &TLElement<C>,
    alg: &Algebra<C>,
) -> Result<TLElement<C>> {
    let n = x.n_bottom();
    let mut cur = x.clone();
    if w < 2 {
        return Ok(cur);
    }
    for &p in starts {
        cur = cur.compose(&embed(proj, p, n - p - w), alg)?;
    }
    Ok(cur)
}

/// Point-to-point gluing of a plain pairing onto a state.
fn glue_value<C: Coeff>(pairing: &[usize], state: &[(Vec<usize>, C)], alg: &Algebra<C>) -> C {
    let mut total = C::zero();
    for (inv, c) in state {
        total = total + c.clone() * alg.d_pow(closure_loops(pairing, inv));
    }
    total
}

fn state_terms<C: Coeff>(x: &TLElement<C>) -> Vec<(Vec<usize>, C)> {
    x.terms().map(|(d, c)| (d.bottom_involution(), c.clone())).collect()
}

/// Gram matrix of states (all endpoints on the bottom) under the gluing
/// inner product.
pub fn gram_matrix<C: Coeff>(basis: &[TLElement<C>], alg: &Algebra<C>) -> Result<Vec<Vec<C>>> {
    let mut g = Vec::with_capacity(basis.len());
    for x in basis {
        let mut row = Vec::with_capacity(basis.len());
        for y in basis {
            row.push(TLElement::inner_product(x, y, alg)?);
        }
        g.push(row);
    }
    Ok(g)
}

/// Unnormalised Gram–Schmidt data for one width, over `Q(d)`.
#[derive(Clone, Debug)]
pub struct ExactFrame {
    pub width: usize,
    /// `gram[a][b] = ⟨b_a | P b_b⟩` with `P` the puncture projectors.
    pub gram: Vec<Vec<RationalFn>>,
    /// Orthogonal vectors `u_j = b_j − Σ_{k<j} c_jk u_k`, as coordinates.
    pub orthogonal: Vec<Vec<RationalFn>>,
    /// `⟨u_j|u_j⟩ = root_j² · radicand_j`, radicand square-free.
    pub root: Vec<RationalFn>,
    pub radicand: Vec<RationalFn>,
}

fn frame_cache() -> &'static Mutex<HashMap<usize, Arc<ExactFrame>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ExactFrame>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Exact frame for four width-`w` punctures; the indeterminate is `d`.
pub fn exact_frame(w: usize) -> Result<Arc<ExactFrame>> {
    if let Some(f) = frame_cache().lock().unwrap().get(&w) {
        return Ok(f.clone());
    }
    let f = Arc::new(build_exact_frame(w)?);
    frame_cache().lock().unwrap().insert(w, f.clone());
    Ok(f)
}

fn build_exact_frame(w: usize) -> Result<ExactFrame> {
    let alg = Algebra::loop_variable();
    let gram = if w == 0 {
        vec![vec![RationalFn::one()]]
    } else {
        // Dress with `D·jw(w)`, whose coefficients are polynomials, and divide
        // by `D⁴` at the end: polynomial arithmetic skips the gcd work.
        let (proj, den) = clear_denominators(&jw_in(w, &alg)?)?;
        let den4 = {
            let d2 = &den * &den;
            &d2 * &d2
        };
        let starts: Vec<usize> = (0..4).map(|k| k * w).collect();
        let pairings = puncture_pairings(w);
        let dressed: Vec<Vec<(Vec<usize>, RationalFn)>> = pairings
            .iter()
            .map(|b| Ok(state_terms(&dress(&TLElement::from_diagram(b.clone()), &starts, w, &proj, &alg)?)))
            .collect::<Result<_>>()?;
        pairings
            .iter()
            .map(|a| {
                let inv = a.bottom_involution();
                dressed.iter().map(|pb| glue_value(&inv, pb, &alg).checked_div(&den4)).collect::<Result<_>>()
            })
            .collect::<Result<_>>()?
    };
    let n = gram.len();
    let form = |x: &[RationalFn], y: &[RationalFn]| -> RationalFn {
        let mut s = RationalFn::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for l in 0..n {
                if !y[l].is_zero() {
                    s = &s + &(&(&x[i] * &gram[i][l]) * &y[l]);
                }
            }
        }
        s
    };
    let mut orthogonal: Vec<Vec<RationalFn>> = Vec::with_capacity(n);
    let mut norms: Vec<RationalFn> = Vec::with_capacity(n);
    for j in 0..n {
        let mut u: Vec<RationalFn> =
            (0..n).map(|i| if i == j { RationalFn::one() } else { RationalFn::zero() }).collect();
        for k in 0..j {
            let c = form(&orthogonal[k], &u).checked_div(&norms[k])?;
            for i in 0..n {
                u[i] = &u[i] - &(&c * &orthogonal[k][i]);
            }
        }
        let nj = form(&u, &u);
        if nj.is_zero() {
            return Err(Error::Degenerate(format!("pairing {} is dependent for width {}", j + 1, w)));
        }
        orthogonal.push(u);
        norms.push(nj);
    }
    let (root, radicand) = norms.iter().map(RationalFn::square_split).unzip();
    Ok(ExactFrame { width: w, gram, orthogonal, root, radicand })
}

/// `(D·x, D)` with `D` the least common denominator of the coefficients.
fn clear_denominators(x: &TLElement<RationalFn>) -> Result<(TLElement<RationalFn>, RationalFn)> {
    let mut lcm = RationalFn::one();
    for (_, c) in x.terms() {
        let den = RationalFn::from_poly(c.den().clone());
        let extra = RationalFn::from_poly(lcm.checked_div(&den)?.den().clone());
        lcm = &lcm * &extra;
    }
    Ok((x.scale(&lcm), lcm))
}

fn real_at(x: &RationalFn, d: f64) -> Result<f64> {
    Ok(x.evaluate_at(Complex64::new(d, 0.0))?.re)
}

impl ExactFrame {
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram_at(&self, d: f64) -> Result<DMatrix<Complex64>> {
        let n = self.dim();
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = Complex64::new(real_at(&self.gram[i][j], d)?, 0.0);
            }
        }
        Ok(g)
    }

    /// Orthonormal frame at loop value `d`: row `j` holds the coordinates of
    /// `u_j / (root_j · √radicand_j)`. The sign of each row follows its
    /// (monic) root, so the frame is a fixed function of `d`.
    pub fn transform_at(&self, d: f64) -> Result<DMatrix<Complex64>> {
        let n = self.dim();
        let mut t = DMatrix::zeros(n, n);
        for j in 0..n {
            let s = real_at(&self.radicand[j], d)?;
            let r = real_at(&self.root[j], d)?;
            if s <= NULL_NORM_EPS || r.abs() <= NULL_NORM_EPS {
                return Err(Error::Degenerate(format!(
                    "frame vector {} of width {} has squared norm {:.3e} at d = {}",
                    j + 1,
                    self.width,
                    r * r * s,
                    d
                )));
            }
            let scale = 1.0 / (r * s.sqrt());
            for i in 0..=j {
                t[(j, i)] = Complex64::new(real_at(&self.orthogonal[j][i], d)? * scale, 0.0);
            }
        }
        Ok(t)
    }
}

/// Modified Gram–Schmidt in the metric `gram`, in basis order. Returns the
/// lower-triangular `T` with positive diagonal and `T·G·Tᴴ = 1`.
pub fn orthonormalize(gram: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = gram.nrows();
    let scale = (0..n).map(|i| gram[(i, i)].norm()).fold(0.0, f64::max).max(1.0);
    let form = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        let mut s = Complex64::zero();
        for i in 0..n {
            for l in 0..n {
                s += x[i].conj() * gram[(i, l)] * y[l];
            }
        }
        s
    };
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut u = vec![Complex64::zero(); n];
        u[j] = Complex64::one();
        for q in &rows {
            let c = form(q, &u);
            for i in 0..n {
                u[i] -= c * q[i];
            }
        }
        let nn = form(&u, &u);
        if nn.re <= NULL_NORM_EPS * scale || nn.im.abs() > 1e-8 * scale {
            return Err(Error::Degenerate(format!(
                "gram is not positive definite (vector {} has squared norm {:.3e})",
                j + 1,
                nn.re
            )));
        }
        let inv = 1.0 / nn.re.sqrt();
        rows.push(u.into_iter().map(|z| z * inv).collect());
    }
    // u_j has unit coefficient on b_j, so the diagonal is already positive
    Ok(DMatrix::from_fn(n, n, |j, i| rows[j][i].conj()))
}

/// One party's space at a fixed loop value.
#[derive(Clone, Debug)]
pub struct QuditSpace {
    pub dim: usize,
    pub kind: PartyKind,
    /// Undressed pairings on the party's endpoints.
    pub basis: Vec<PlanarDiagram>,
    pub gram: DMatrix<Complex64>,
    /// Row `j` = coordinates of `|j⟩` in the dressed basis.
    pub ortho: DMatrix<Complex64>,
    /// `±1`; the party's inner product is `sign × gluing`, chosen so that
    /// it is positive. Always `+1` for punctured parties.
    pub sign: f64,
    pub d: f64,
}

/// `dim = n`; punctures of width `n − 1` dressed with `jw(n − 1)`.
pub fn build_qudit_space(n: usize, alg: &NumericAlgebra) -> Result<QuditSpace> {
    if n == 0 {
        return Err(Error::Domain("qudit dimension must be at least 1".into()));
    }
    let w = n - 1;
    let d = alg.d.re;
    for k in 1..w {
        if alg.delta(k as i64).norm() < crate::scalar::DEGENERATE_EPS {
            return Err(Error::Degenerate(format!("Delta_{} vanishes at d = {}", k, d)));
        }
    }
    let frame = exact_frame(w)?;
    let basis = if w == 0 { vec![PlanarDiagram::state(0, &[])?] } else { puncture_pairings(w) };
    Ok(QuditSpace {
        dim: n,
        kind: PartyKind::Punctured { width: w },
        basis,
        gram: frame.gram_at(d)?,
        ortho: frame.transform_at(d)?,
        sign: 1.0,
        d,
    })
}

/// Every planar matching of `points` endpoints, orthonormalised in the
/// order of [`enumerate_planar_matchings`] with positive diagonal.
///
/// Flipping the sign of `d` multiplies the gluing form on `n` arcs by
/// `(−1)ⁿ` up to a diagonal change of signs, so for `d < 0` and an odd
/// number of arcs the form is negated to make it positive.
pub fn build_plain_space(points: usize, alg: &NumericAlgebra) -> Result<QuditSpace> {
    if points == 0 || !points.is_multiple_of(2) {
        return Err(Error::Width(format!("a plain party needs a positive even number of endpoints, not {}", points)));
    }
    let basis = enumerate_planar_matchings(0, points)?;
    let inv: Vec<Vec<usize>> = basis.iter().map(PlanarDiagram::bottom_involution).collect();
    let sign = if alg.d.re < 0.0 && (points / 2) % 2 == 1 { -1.0 } else { 1.0 };
    let gram = DMatrix::from_fn(basis.len(), basis.len(), |i, j| alg.d_pow(closure_loops(&inv[i], &inv[j])) * sign);
    let ortho = orthonormalize(&gram)?;
    Ok(QuditSpace { dim: basis.len(), kind: PartyKind::Plain { points }, basis, gram, ortho, sign, d: alg.d.re })
}

/// The space for one kind of party.
pub fn build_space(kind: PartyKind, alg: &NumericAlgebra) -> Result<QuditSpace> {
    match kind {
        PartyKind::Punctured { width } => build_qudit_space(width + 1, alg),
        PartyKind::Plain { points } => build_plain_space(points, alg),
    }
}

impl QuditSpace {
    /// Largest entry of `|T·G·Tᴴ − 1|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let m = &self.ortho * &self.gram * self.ortho.adjoint();
        let id = DMatrix::<Complex64>::identity(self.dim, self.dim);
        (m - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn gram_inverse(&self) -> Result<DMatrix<Complex64>> {
        self.gram
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate(format!("singular gram for {:?} at d = {}", self.kind, self.d)))
    }
}

/// A crossing-free state whose endpoints are shared out among parties.
#[derive(Clone, Debug)]
pub struct DiagramState {
    pub element: NumericElement,
    pub layout: PartyLayout,
}

impl DiagramState {
    pub fn new(element: NumericElement, layout: PartyLayout) -> Result<Self> {
        if element.n_top() != 0 {
            return Err(Error::Signature("a state has all endpoints on one side".into()));
        }
        if element.n_bottom() != layout.n_points() {
            return Err(Error::Width(format!(
                "state has {} endpoints, layout has {}",
                element.n_bottom(),
                layout.n_points()
            )));
        }
        Ok(DiagramState { element, layout })
    }
}

/// One space per party.
pub fn spaces_for(layout: &PartyLayout, alg: &NumericAlgebra) -> Result<Vec<QuditSpace>> {
    let mut by_kind: HashMap<PartyKind, QuditSpace> = HashMap::new();
    layout
        .parties()
        .iter()
        .map(|p| {
            if let Some(s) = by_kind.get(&p.kind) {
                return Ok(s.clone());
            }
            let s = build_space(p.kind, alg)?;
            by_kind.insert(p.kind, s.clone());
            Ok(s)
        })
        .collect()
}

fn check_spaces(layout: &PartyLayout, spaces: &[QuditSpace]) -> Result<()> {
    if spaces.len() != layout.len() {
        return Err(Error::Width(format!("{} spaces for {} parties", spaces.len(), layout.len())));
    }
    for (p, s) in layout.parties().iter().zip(spaces) {
        if p.kind != s.kind {
            return Err(Error::Width(format!("party {} is {:?}, space is {:?}", p.name, p.kind, s.kind)));
        }
    }
    Ok(())
}

/// `g[i₁…i_m] = ⟨b_{i₁}⊗…⊗b_{i_m} | s⟩` in the dressed, non-orthogonal bases
/// (including the parties' metric signs).
pub fn raw_amplitudes(s: &DiagramState, spaces: &[QuditSpace], alg: &NumericAlgebra) -> Result<Tensor> {
    let layout = &s.layout;
    check_spaces(layout, spaces)?;
    let mut projected = s.element.clone();
    let mut projectors: HashMap<usize, TLElement<Complex64>> = HashMap::new();
    for p in layout.parties() {
        let w = match p.width() {
            Some(w) if w >= 2 => w,
            _ => continue,
        };
        if let std::collections::hash_map::Entry::Vacant(e) = projectors.entry(w) {
            e.insert(jw_in(w, alg)?);
        }
        let starts: Vec<usize> = (0..4).map(|k| p.start + k * w).collect();
        projected = dress(&projected, &starts, w, &projectors[&w], alg)?;
    }
    let terms = state_terms(&projected);
    let local: Vec<Vec<Vec<usize>>> =
        spaces.iter().map(|sp| sp.basis.iter().map(PlanarDiagram::bottom_involution).collect()).collect();
    let sign: f64 = spaces.iter().map(|sp| sp.sign).product();
    let mut g = Tensor::zeros(layout.dims());
    let mut pairing = vec![0usize; layout.n_points()];
    for off in 0..g.data().len() {
        let idx = g.index_of(off);
        for (k, p) in layout.parties().iter().enumerate() {
            for (l, &q) in local[k][idx[k]].iter().enumerate() {
                pairing[p.start + l] = p.start + q;
            }
        }
        g.set(&idx, glue_value(&pairing, &terms, alg) * sign);
    }
    Ok(g)
}

/// Coefficients of `s` in the product of the parties' orthonormal frames.
pub fn amplitudes(s: &DiagramState, spaces: &[QuditSpace], alg: &NumericAlgebra) -> Result<Tensor> {
    let g = raw_amplitudes(s, spaces, alg)?;
    to_orthonormal(&g, spaces)
}

/// `c_j = Σ_i conj(T_ji) g_i` on every axis.
pub fn to_orthonormal(g: &Tensor, spaces: &[QuditSpace]) -> Result<Tensor> {
    let mut c = g.clone();
    for (axis, sp) in spaces.iter().enumerate() {
        c = c.apply_matrix(axis, &sp.ortho.map(|z| z.conj()))?;
    }
    Ok(c)
}

/// Gluing-based squared norm: each party is closed through the inverse of
/// its Gram matrix, `⟨s|s⟩ = Σ ḡ·(G₁⁻¹⊗…⊗G_m⁻¹)·g`.
pub fn metric_norm_sqr(g: &Tensor, spaces: &[QuditSpace]) -> Result<f64> {
    let mut x = g.clone();
    for (axis, sp) in spaces.iter().enumerate() {
        x = x.apply_matrix(axis, &sp.gram_inverse()?)?;
    }
    let v: Complex64 = g.data().iter().zip(x.data()).map(|(a, b)| a.conj() * b).sum();
    Ok(v.re)
}

/// Squared norm of the crossed four-point pairing after projecting out the
/// two planar ones, with the loop value `d` and no skein resolution (points
/// only; lines may cross).
pub fn crossed_residual_norm_sqr(d: f64) -> Result<f64> {
    let caps = vec![1, 0, 3, 2];
    let nested = vec![3, 2, 1, 0];
    let crossed = vec![2, 3, 0, 1];
    let vecs = [caps, nested, crossed];
    let gram = DMatrix::from_fn(3, 3, |i, j| d.powi(closure_loops(&vecs[i], &vecs[j]) as i32));
    let planar = gram.view((0, 0), (2, 2)).clone_owned();
    let inv =
        planar.try_inverse().ok_or_else(|| Error::Degenerate(format!("planar pairings are dependent at d = {}", d)))?;
    let v = gram.view((0, 2), (2, 1)).clone_owned();
    Ok(gram[(2, 2)] - (v.transpose() * inv * v)[(0, 0)])
}
