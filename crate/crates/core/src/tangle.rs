//! Slice words: tangles written as a top-to-bottom sequence of elementary
//! pieces, reduced to crossing-free combinations by the skein relation.

use std::fmt;

use crate::diagram::{PlanarDiagram, TLElement};
use crate::error::{Error, Result};
use crate::jones_wenzl::jw_in;
pub use crate::ring::Mode;
use crate::ring::{Algebra, Coeff};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Crossing {
    /// The strand from bottom position `i` to top position `i+1` passes over.
    Over,
    Under,
}

/// One horizontal slice; positions are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slice {
    Cup(usize),
    Cap(usize),
    E(usize),
    Over(usize),
    Under(usize),
    /// Projector of width `w` on strands `i..i+w-1`.
    Jw(usize, usize),
}

impl Slice {
    /// Width after this slice, or `None` if it does not fit width `w`.
    pub fn apply_width(&self, w: usize) -> Option<usize> {
        match *self {
            Slice::Cup(i) if i >= 1 && i <= w + 1 => Some(w + 2),
            Slice::Cap(i) if i >= 1 && i < w => Some(w - 2),
            Slice::E(i) | Slice::Over(i) | Slice::Under(i) if i >= 1 && i < w => Some(w),
            Slice::Jw(i, k) if i >= 1 && k >= 1 && i + k - 1 <= w => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Slice::Cup(i) => write!(f, "cup {}", i),
            Slice::Cap(i) => write!(f, "cap {}", i),
            Slice::E(i) => write!(f, "e {}", i),
            Slice::Over(i) => write!(f, "over {}", i),
            Slice::Under(i) => write!(f, "under {}", i),
            Slice::Jw(i, w) => write!(f, "jw {} {}", i, w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SliceWord {
    pub top_width: usize,
    pub slices: Vec<Slice>,
}

impl SliceWord {
    pub fn new(top_width: usize, slices: Vec<Slice>) -> Result<Self> {
        let w = SliceWord { top_width, slices };
        w.bottom_width()?;
        Ok(w)
    }

    /// Widths after each slice; errors name the offending slice (1-based).
    pub fn widths(&self) -> Result<Vec<usize>> {
        let mut w = self.top_width;
        let mut out = Vec::with_capacity(self.slices.len());
        for (k, s) in self.slices.iter().enumerate() {
            w = s
                .apply_width(w)
                .ok_or_else(|| Error::Width(format!("slice {} ({}) does not fit width {}", k + 1, s, w)))?;
            out.push(w);
        }
        Ok(out)
    }

    pub fn bottom_width(&self) -> Result<usize> {
        Ok(self.widths()?.last().copied().unwrap_or(self.top_width))
    }

    /// `self` followed by `lower`.
    pub fn then(&self, lower: &SliceWord) -> Result<SliceWord> {
        if self.bottom_width()? != lower.top_width {
            return Err(Error::Width("words do not stack".into()));
        }
        let mut s = self.slices.clone();
        s.extend_from_slice(&lower.slices);
        Ok(SliceWord { top_width: self.top_width, slices: s })
    }

    /// Swap every over/under.
    pub fn mirror(&self) -> SliceWord {
        let slices = self
            .slices
            .iter()
            .map(|s| match *s {
                Slice::Over(i) => Slice::Under(i),
                Slice::Under(i) => Slice::Over(i),
                other => other,
            })
            .collect();
        SliceWord { top_width: self.top_width, slices }
    }

    pub fn crossing_count(&self) -> usize {
        self.slices.iter().filter(|s| matches!(s, Slice::Over(_) | Slice::Under(_))).count()
    }
}

/// A word realising an arbitrary pairing of `n` endpoints (0-based pairs) as a
/// state. Arcs are layered by their left endpoint: an arc starting further
/// left lies entirely above every arc starting further right. Planar pairings
/// come out crossing-free after reduction, with coefficient one.
pub fn layered_state_word(n: usize, pairs: &[(usize, usize)]) -> Result<SliceWord> {
    let mut arcs: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    arcs.sort();
    let mut seen = vec![false; n];
    for &(a, b) in &arcs {
        if b >= n || a == b || seen[a] || seen[b] {
            return Err(Error::Domain(format!("pairs {:?} are not a perfect matching of {} points", pairs, n)));
        }
        seen[a] = true;
        seen[b] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Domain(format!("pairs {:?} leave points of {} unmatched", pairs, n)));
    }
    let mut slices = Vec::new();
    // strands as (target position, layer); cups side by side in layer order
    let mut strands: Vec<(usize, usize)> = Vec::with_capacity(n);
    for (layer, &(a, b)) in arcs.iter().enumerate() {
        slices.push(Slice::Cup(strands.len() + 1));
        strands.push((a, layer));
        strands.push((b, layer));
    }
    // bubble sort; the strand moving left is over iff its arc is higher
    let mut sorted = false;
    while !sorted {
        sorted = true;
        for i in 0..strands.len().saturating_sub(1) {
            if strands[i].0 > strands[i + 1].0 {
                let moving_left = strands[i + 1];
                slices.push(if moving_left.1 < strands[i].1 { Slice::Over(i + 1) } else { Slice::Under(i + 1) });
                strands.swap(i, i + 1);
                sorted = false;
            }
        }
    }
    SliceWord::new(0, slices)
}

/// A crossing-free word of cups realising a planar pairing (0-based pairs);
/// crossing pairings are a domain error. Arcs are peeled innermost first and
/// the word lists their cups outermost first, so each cup lands between
/// strands that already exist.
pub fn planar_state_word(n: usize, pairs: &[(usize, usize)]) -> Result<SliceWord> {
    let partner = PlanarDiagram::state(n, pairs)?.bottom_involution();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut cups = Vec::with_capacity(n / 2);
    while !alive.is_empty() {
        let k = (0..alive.len() - 1)
            .find(|&k| partner[alive[k]] == alive[k + 1])
            .ok_or_else(|| Error::Internal("planar matching without an innermost arc".into()))?;
        cups.push(Slice::Cup(k + 1));
        alive.drain(k..k + 2);
    }
    cups.reverse();
    SliceWord::new(0, cups)
}

/// [`planar_state_word`] when the pairing is planar, otherwise
/// [`layered_state_word`].
pub fn state_word(n: usize, pairs: &[(usize, usize)]) -> Result<SliceWord> {
    planar_state_word(n, pairs).or_else(|_| layered_state_word(n, pairs))
}

/// Width-2 element for one crossing.
pub fn resolve_crossing<C: Coeff>(kind: Crossing, alg: &Algebra<C>) -> TLElement<C> {
    let (ci, ce) = match kind {
        Crossing::Over => alg.over.clone(),
        Crossing::Under => alg.under.clone(),
    };
    let mut x = TLElement::term(PlanarDiagram::identity(2), ci);
    x.add_term(PlanarDiagram::generator(2, 1).unwrap(), ce);
    x
}

fn embed<C: Coeff>(x: &TLElement<C>, left: usize, right: usize) -> TLElement<C> {
    TLElement::identity(left).tensor(x).tensor(&TLElement::identity(right))
}

/// The slice as an element from width `w` to its output width.
pub fn slice_element<C: Coeff>(s: &Slice, w: usize, alg: &Algebra<C>) -> Result<TLElement<C>> {
    if s.apply_width(w).is_none() {
        return Err(Error::Width(format!("{} does not fit width {}", s, w)));
    }
    Ok(match *s {
        Slice::Cup(i) => TLElement::from_diagram(PlanarDiagram::cup(w, i)?),
        Slice::Cap(i) => TLElement::from_diagram(PlanarDiagram::cap(w, i)?),
        Slice::E(i) => TLElement::generator(w, i)?,
        Slice::Over(i) => embed(&resolve_crossing(Crossing::Over, alg), i - 1, w - i - 1),
        Slice::Under(i) => embed(&resolve_crossing(Crossing::Under, alg), i - 1, w - i - 1),
        Slice::Jw(i, k) => embed(&jw_in(k, alg)?, i - 1, w + 1 - i - k),
    })
}

/// Fold the slices top to bottom into a crossing-free element.
pub fn reduce<C: Coeff>(t: &SliceWord, alg: &Algebra<C>) -> Result<TLElement<C>> {
    let widths = t.widths()?;
    let mut cur = TLElement::identity(t.top_width);
    let mut w = t.top_width;
    for (s, &next) in t.slices.iter().zip(&widths) {
        cur = cur.compose(&slice_element(s, w, alg)?, alg)?;
        w = next;
    }
    Ok(cur)
}

/// Bracket of a closed word (unknot ↦ d).
pub fn kauffman_bracket<C: Coeff>(t: &SliceWord, alg: &Algebra<C>) -> Result<C> {
    let bottom = t.bottom_width()?;
    if t.top_width != 0 || bottom != 0 {
        return Err(Error::NotClosed(t.top_width + bottom));
    }
    Ok(reduce(t, alg)?.scalar_part())
}
