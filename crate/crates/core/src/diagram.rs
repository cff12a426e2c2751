//! Non-crossing matchings and their linear combinations.
//!
//! Boundary points carry canonical labels: top points left-to-right, then
//! bottom points right-to-left, so walking the labels goes once around the
//! rectangle. Most callers think in positions instead and use [`End`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Algebra, Coeff};

/// A boundary point by side and 0-based left-to-right position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Top(usize),
    Bot(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarDiagram {
    n_top: usize,
    n_bottom: usize,
    /// `m[label] = partner label`
    m: Vec<u16>,
}

impl PlanarDiagram {
    /// Build from pairs of ends; fails on parity, missing/duplicate ends or
    /// crossing chords.
    pub fn new(n_top: usize, n_bottom: usize, pairs: &[(End, End)]) -> Result<Self> {
        let d = Self::new_unchecked(n_top, n_bottom, pairs)?;
        if !d.is_noncrossing() {
            return Err(Error::Domain(format!("matching {:?} is not planar", d)));
        }
        Ok(d)
    }

    fn new_unchecked(n_top: usize, n_bottom: usize, pairs: &[(End, End)]) -> Result<Self> {
        let n = n_top + n_bottom;
        if !n.is_multiple_of(2) {
            return Err(Error::Parity(n));
        }
        let mut m = vec![u16::MAX; n];
        let lab = |e: End| -> Result<usize> {
            match e {
                End::Top(i) if i < n_top => Ok(i),
                End::Bot(j) if j < n_bottom => Ok(n_top + n_bottom - 1 - j),
                _ => Err(Error::Domain(format!("end {:?} out of range", e))),
            }
        };
        for &(a, b) in pairs {
            let (x, y) = (lab(a)?, lab(b)?);
            if x == y || m[x] != u16::MAX || m[y] != u16::MAX {
                return Err(Error::Domain(format!("end used twice in {:?}", pairs)));
            }
            m[x] = y as u16;
            m[y] = x as u16;
        }
        if m.contains(&u16::MAX) {
            return Err(Error::Domain("unmatched boundary point".into()));
        }
        Ok(PlanarDiagram { n_top, n_bottom, m })
    }

    /// State (no top points) from 0-based bottom position pairs.
    pub fn state(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let p: Vec<_> = pairs.iter().map(|&(a, b)| (End::Bot(a), End::Bot(b))).collect();
        Self::new(0, n, &p)
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn label(&self, e: End) -> usize {
        match e {
            End::Top(i) => i,
            End::Bot(j) => self.n_top + self.n_bottom - 1 - j,
        }
    }

    pub fn end(&self, label: usize) -> End {
        if label < self.n_top {
            End::Top(label)
        } else {
            End::Bot(self.n_top + self.n_bottom - 1 - label)
        }
    }

    pub fn partner(&self, e: End) -> End {
        self.end(self.m[self.label(e)] as usize)
    }

    /// Each pair once, the smaller end first.
    pub fn pairs(&self) -> Vec<(End, End)> {
        let mut v = Vec::new();
        for (x, &y) in self.m.iter().enumerate() {
            let (a, b) = (self.end(x), self.end(y as usize));
            if a < b {
                v.push((a, b));
            }
        }
        v.sort();
        v
    }

    /// Bottom partner map for states: `out[p] = q`.
    pub fn bottom_involution(&self) -> Vec<usize> {
        (0..self.n_bottom)
            .map(|p| match self.partner(End::Bot(p)) {
                End::Bot(q) => q,
                End::Top(_) => usize::MAX,
            })
            .collect()
    }

    pub fn is_noncrossing(&self) -> bool {
        let chords: Vec<(usize, usize)> =
            self.m.iter().enumerate().filter(|(x, &y)| *x < y as usize).map(|(x, &y)| (x, y as usize)).collect();
        for (i, &(a, b)) in chords.iter().enumerate() {
            for &(c, d) in &chords[i + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return false;
                }
            }
        }
        true
    }

    pub fn identity(n: usize) -> Self {
        let p: Vec<_> = (0..n).map(|i| (End::Top(i), End::Bot(i))).collect();
        Self::new_unchecked(n, n, &p).unwrap()
    }

    /// Generator `e_i` (1-based) on `n` strands.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::Domain(format!("e_{} needs 1 <= i < {}", i, n)));
        }
        let mut p = vec![(End::Top(i - 1), End::Top(i)), (End::Bot(i - 1), End::Bot(i))];
        for k in (0..n).filter(|&k| k != i - 1 && k != i) {
            p.push((End::Top(k), End::Bot(k)));
        }
        Self::new_unchecked(n, n, &p)
    }

    /// Cup creating new strands at 1-based positions `i, i+1`: `n → n+2`.
    pub fn cup(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n + 1 {
            return Err(Error::Domain(format!("cup {} out of range for width {}", i, n)));
        }
        let mut p = vec![(End::Bot(i - 1), End::Bot(i))];
        for k in 0..n {
            let b = if k < i - 1 { k } else { k + 2 };
            p.push((End::Top(k), End::Bot(b)));
        }
        Self::new_unchecked(n, n + 2, &p)
    }

    /// Cap joining strands `i, i+1` (1-based): `n → n−2`.
    pub fn cap(n: usize, i: usize) -> Result<Self> {
        if n < 2 || i == 0 || i >= n {
            return Err(Error::Domain(format!("cap {} out of range for width {}", i, n)));
        }
        Ok(Self::cup(n - 2, i)?.reflect())
    }

    /// Mirror top ↔ bottom.
    pub fn reflect(&self) -> Self {
        let flip = |e: End| match e {
            End::Top(i) => End::Bot(i),
            End::Bot(j) => End::Top(j),
        };
        let p: Vec<_> = self.pairs().into_iter().map(|(a, b)| (flip(a), flip(b))).collect();
        Self::new_unchecked(self.n_bottom, self.n_top, &p).unwrap()
    }

    /// Stack `self` above `lower`; returns the glued diagram and the number of
    /// closed loops formed.
    pub fn compose(&self, lower: &PlanarDiagram) -> Result<(PlanarDiagram, usize)> {
        let k = self.n_bottom;
        if lower.n_top != k {
            return Err(Error::Width(format!("cannot stack {} bottom points on {} top points", k, lower.n_top)));
        }
        let mut seen = vec![false; k];
        let mut pairs: Vec<(End, End)> = Vec::with_capacity((self.n_top + lower.n_bottom) / 2);
        // walk from an outer end until the path leaves through another one
        let walk = |start_upper: bool, e: End, seen: &mut Vec<bool>| -> End {
            let mut in_upper = start_upper;
            let mut cur = e;
            loop {
                if in_upper {
                    match self.partner(cur) {
                        End::Top(j) => return End::Top(j),
                        End::Bot(j) => {
                            seen[j] = true;
                            in_upper = false;
                            cur = End::Top(j);
                        }
                    }
                } else {
                    match lower.partner(cur) {
                        End::Bot(j) => return End::Bot(j),
                        End::Top(j) => {
                            seen[j] = true;
                            in_upper = true;
                            cur = End::Bot(j);
                        }
                    }
                }
            }
        };
        let mut done_top = vec![false; self.n_top];
        let mut done_bot = vec![false; lower.n_bottom];
        for i in 0..self.n_top {
            if done_top[i] {
                continue;
            }
            let f = walk(true, End::Top(i), &mut seen);
            done_top[i] = true;
            match f {
                End::Top(j) => done_top[j] = true,
                End::Bot(j) => done_bot[j] = true,
            }
            pairs.push((End::Top(i), f));
        }
        for i in 0..lower.n_bottom {
            if done_bot[i] {
                continue;
            }
            let f = walk(false, End::Bot(i), &mut seen);
            done_bot[i] = true;
            if let End::Bot(j) = f {
                done_bot[j] = true;
            }
            pairs.push((End::Bot(i), f));
        }
        let mut loops = 0;
        for j in 0..k {
            if seen[j] {
                continue;
            }
            loops += 1;
            // alternate: lower top → lower partner (top) → upper bottom → ...
            let mut cur = j;
            loop {
                seen[cur] = true;
                let t = match lower.partner(End::Top(cur)) {
                    End::Top(t) => t,
                    End::Bot(_) => unreachable!("unvisited middle point reaches the boundary"),
                };
                seen[t] = true;
                let u = match self.partner(End::Bot(t)) {
                    End::Bot(u) => u,
                    End::Top(_) => unreachable!("unvisited middle point reaches the boundary"),
                };
                if u == j {
                    break;
                }
                cur = u;
            }
        }
        Ok((Self::new_unchecked(self.n_top, lower.n_bottom, &pairs)?, loops))
    }

    /// Side-by-side juxtaposition, `self` on the left.
    pub fn tensor(&self, right: &PlanarDiagram) -> PlanarDiagram {
        let sh = |e: End| match e {
            End::Top(i) => End::Top(i + self.n_top),
            End::Bot(j) => End::Bot(j + self.n_bottom),
        };
        let mut p = self.pairs();
        p.extend(right.pairs().into_iter().map(|(a, b)| (sh(a), sh(b))));
        Self::new_unchecked(self.n_top + right.n_top, self.n_bottom + right.n_bottom, &p).unwrap()
    }
}

impl fmt::Debug for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PlanarDiagram {
    /// Pairs with 1-based positions, `t` for top and `b` for bottom.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |e: End| match e {
            End::Top(i) => format!("t{}", i + 1),
            End::Bot(j) => format!("b{}", j + 1),
        };
        let parts: Vec<String> = self.pairs().into_iter().map(|(a, b)| format!("{}-{}", s(a), s(b))).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn catalan_matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in (1..points.len()).step_by(2) {
        let inner = catalan_matchings(&points[1..k]);
        let outer = catalan_matchings(&points[k + 1..]);
        for a in &inner {
            for b in &outer {
                let mut v = vec![(points[0], points[k])];
                v.extend_from_slice(a);
                v.extend_from_slice(b);
                out.push(v);
            }
        }
    }
    out
}

/// All non-crossing matchings with the given boundary, in a fixed order.
pub fn enumerate_planar_matchings(n_top: usize, n_bottom: usize) -> Result<Vec<PlanarDiagram>> {
    let n = n_top + n_bottom;
    if !n.is_multiple_of(2) {
        return Err(Error::Parity(n));
    }
    let labels: Vec<usize> = (0..n).collect();
    let proto = PlanarDiagram { n_top, n_bottom, m: vec![0; n] };
    Ok(catalan_matchings(&labels)
        .into_iter()
        .map(|ch| {
            let p: Vec<_> = ch.iter().map(|&(a, b)| (proto.end(a), proto.end(b))).collect();
            PlanarDiagram::new_unchecked(n_top, n_bottom, &p).unwrap()
        })
        .collect())
}

/// Number of cycles in the union of two perfect matchings on the same points
/// (`a[i]`, `b[i]` are partners of `i`). No planarity is assumed.
pub fn closure_loops(a: &[usize], b: &[usize]) -> usize {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut loops = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        loops += 1;
        let mut cur = s;
        loop {
            seen[cur] = true;
            let x = a[cur];
            seen[x] = true;
            cur = b[x];
            if cur == s {
                break;
            }
        }
    }
    loops
}

/// Formal linear combination of diagrams sharing one boundary signature.
#[derive(Clone, PartialEq)]
pub struct TLElement<C> {
    n_top: usize,
    n_bottom: usize,
    terms: BTreeMap<PlanarDiagram, C>,
}

impl<C: Coeff> TLElement<C> {
    pub fn zero(n_top: usize, n_bottom: usize) -> Self {
        TLElement { n_top, n_bottom, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: PlanarDiagram) -> Self {
        Self::term(d, C::one())
    }

    pub fn term(d: PlanarDiagram, c: C) -> Self {
        let mut x = Self::zero(d.n_top, d.n_bottom);
        x.add_term(d, c);
        x
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagram(PlanarDiagram::identity(n))
    }

    pub fn generator(n: usize, i: usize) -> Result<Self> {
        Ok(Self::from_diagram(PlanarDiagram::generator(n, i)?))
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlanarDiagram, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: &PlanarDiagram) -> C {
        self.terms.get(d).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, d: PlanarDiagram, c: C) {
        debug_assert!(d.n_top == self.n_top && d.n_bottom == self.n_bottom);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&d);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.n_top != o.n_top || self.n_bottom != o.n_bottom {
            return Err(Error::Signature(format!(
                "({}, {}) vs ({}, {})",
                self.n_top, self.n_bottom, o.n_top, o.n_bottom
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut r = self.clone();
        for (d, c) in &o.terms {
            r.add_term(d.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-C::one()))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut r = Self::zero(self.n_top, self.n_bottom);
        for (d, x) in &self.terms {
            r.add_term(d.clone(), x.clone() * c.clone());
        }
        r
    }

    /// `self` stacked above `lower`; every closed loop contributes `alg.d`.
    pub fn compose(&self, lower: &Self, alg: &Algebra<C>) -> Result<Self> {
        if self.n_bottom != lower.n_top {
            return Err(Error::Width(format!("cannot stack width {} on width {}", self.n_bottom, lower.n_top)));
        }
        let mut r = Self::zero(self.n_top, lower.n_bottom);
        let mut dpow: Vec<C> = vec![C::one()];
        for (du, cu) in &self.terms {
            for (dl, cl) in &lower.terms {
                let (g, loops) = du.compose(dl)?;
                while dpow.len() <= loops {
                    let next = dpow.last().unwrap().clone() * alg.d.clone();
                    dpow.push(next);
                }
                r.add_term(g, cu.clone() * cl.clone() * dpow[loops].clone());
            }
        }
        Ok(r)
    }

    pub fn tensor(&self, right: &Self) -> Self {
        let mut r = Self::zero(self.n_top + right.n_top, self.n_bottom + right.n_bottom);
        for (a, x) in &self.terms {
            for (b, y) in &right.terms {
                r.add_term(a.tensor(b), x.clone() * y.clone());
            }
        }
        r
    }

    /// Reflect every diagram and apply the coefficient adjoint.
    pub fn adjoint(&self) -> Self {
        let mut r = Self::zero(self.n_bottom, self.n_top);
        for (d, c) in &self.terms {
            r.add_term(d.reflect(), c.adjoint());
        }
        r
    }

    /// `⟨x|y⟩`: glue the mirror of `x` onto `y` and close all loops.
    pub fn inner_product(x: &Self, y: &Self, alg: &Algebra<C>) -> Result<C> {
        x.check_same(y)?;
        if x.n_top != 0 && x.n_bottom != 0 {
            return Err(Error::Signature("inner product needs all endpoints on one side".into()));
        }
        let closed = if x.n_top == 0 { y.compose(&x.adjoint(), alg)? } else { x.adjoint().compose(y, alg)? };
        Ok(closed.scalar_part())
    }

    /// Coefficient of the empty diagram (the value of a closed element).
    pub fn scalar_part(&self) -> C {
        self.terms.iter().find(|(d, _)| d.is_empty()).map(|(_, c)| c.clone()).unwrap_or_else(C::zero)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<TLElement<D>> {
        let mut r = TLElement::<D>::zero(self.n_top, self.n_bottom);
        for (d, c) in &self.terms {
            r.add_term(d.clone(), f(c)?);
        }
        Ok(r)
    }

    /// Drop terms for which `small` holds (numeric round-off clean-up).
    pub fn prune(&mut self, small: impl Fn(&C) -> bool) {
        self.terms.retain(|_, c| !small(c));
    }
}

impl<C: fmt::Debug> fmt::Debug for TLElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(d, c)| format!("({:?})·{}", c, d)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
