//! Connectomes: party-level adjacency matrices of multiparty diagram states.
//!
//! Diagonal entries count endpoints used by arcs internal to a party (so they
//! are even); off-diagonal entries count lines between two parties.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::diagram::{PlanarDiagram, TLElement};
use crate::error::{Error, Result};
use crate::ring::{Algebra, Coeff};
use crate::state_space::{party_name, Party, PartyLayout};
use crate::tangle::{layered_state_word, reduce, SliceWord};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Connectome {
    adj: Vec<Vec<usize>>,
}

impl Connectome {
    pub fn new(adj: Vec<Vec<usize>>) -> Result<Self> {
        let m = adj.len();
        for (i, row) in adj.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Width(format!("row {} has {} entries, expected {}", i + 1, row.len(), m)));
            }
            if row[i] % 2 != 0 {
                return Err(Error::Parity(row[i]));
            }
            for j in 0..m {
                if adj[j].get(i) != Some(&row[j]) {
                    return Err(Error::Domain(format!("adjacency is not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(Connectome { adj })
    }

    /// Every party with `punctures` endpoints, all on internal arcs.
    pub fn separable(m: usize, punctures: usize) -> Result<Self> {
        Self::new((0..m).map(|i| (0..m).map(|j| if i == j { punctures } else { 0 }).collect()).collect())
    }

    /// Line counts of a pairing (`partner[i]` is the endpoint joined to `i`)
    /// whose endpoints are shared out by `layout`. Crossings are ignored.
    pub fn from_pairing(partner: &[usize], layout: &PartyLayout) -> Result<Self> {
        if partner.len() != layout.n_points() {
            return Err(Error::Width(format!(
                "pairing has {} endpoints, layout has {}",
                partner.len(),
                layout.n_points()
            )));
        }
        let mut owner = vec![0; partner.len()];
        for (k, p) in layout.parties().iter().enumerate() {
            for i in p.range() {
                owner[i] = k;
            }
        }
        let m = layout.len();
        let mut adj = vec![vec![0; m]; m];
        for (i, &j) in partner.iter().enumerate() {
            if partner.get(j) != Some(&i) || i == j {
                return Err(Error::Domain(format!("endpoint {} is not matched consistently", i + 1)));
            }
            adj[owner[i]][owner[j]] += 1;
        }
        Self::new(adj)
    }

    pub fn parties(&self) -> usize {
        self.adj.len()
    }

    pub fn adj(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn entry(&self, i: usize, j: usize) -> usize {
        self.adj[i][j]
    }

    /// Endpoints of each party (row sums).
    pub fn punctures(&self) -> Vec<usize> {
        self.adj.iter().map(|r| r.iter().sum()).collect()
    }

    /// Uniform endpoint count, if all parties agree.
    pub fn uniform_punctures(&self) -> Option<usize> {
        let p = self.punctures();
        if p.iter().all_equal() {
            p.first().copied()
        } else {
            None
        }
    }

    /// Lines crossing from `side` to its complement.
    pub fn cut_size(&self, side: &[usize]) -> usize {
        let m = self.parties();
        side.iter().map(|&i| (0..m).filter(|j| !side.contains(j)).map(|j| self.adj[i][j]).sum::<usize>()).sum()
    }

    pub fn permuted(&self, perm: &[usize]) -> Connectome {
        let m = self.parties();
        Connectome { adj: (0..m).map(|i| (0..m).map(|j| self.adj[perm[i]][perm[j]]).collect()).collect() }
    }

    /// Lexicographically least relabelling of the parties.
    pub fn canonical(&self) -> Connectome {
        let m = self.parties();
        (0..m).permutations(m).map(|p| self.permuted(&p)).min().unwrap_or_else(|| self.clone())
    }

    /// Connected components of the off-diagonal graph, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let m = self.parties();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for v in 0..m {
            if seen[v] {
                continue;
            }
            let mut stack = vec![v];
            let mut comp = Vec::new();
            while let Some(x) = stack.pop() {
                if seen[x] {
                    continue;
                }
                seen[x] = true;
                comp.push(x);
                stack.extend((0..m).filter(|&y| y != x && self.adj[x][y] > 0 && !seen[y]));
            }
            comp.sort();
            out.push(comp);
        }
        out
    }
}

impl fmt::Display for Connectome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.adj.iter().map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).join(","))).collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// All connectomes of `m` parties with `punctures` endpoints each, up to
/// relabelling the parties, in canonical form and ascending order.
pub fn enumerate_connectomes(m: usize, punctures: usize) -> Result<Vec<Connectome>> {
    if m == 0 {
        return Err(Error::Domain("need at least one party".into()));
    }
    if !punctures.is_multiple_of(2) {
        return Err(Error::Parity(punctures));
    }
    let pairs: Vec<(usize, usize)> = (0..m).tuple_combinations().collect();
    let mut out = BTreeSet::new();
    let mut adj = vec![vec![0usize; m]; m];
    let mut used = vec![0usize; m];
    fn go(
        k: usize,
        pairs: &[(usize, usize)],
        punctures: usize,
        adj: &mut Vec<Vec<usize>>,
        used: &mut Vec<usize>,
        out: &mut BTreeSet<Connectome>,
    ) {
        if k == pairs.len() {
            if used.iter().all(|&u| (punctures - u).is_multiple_of(2)) {
                let mut a = adj.clone();
                for (i, row) in a.iter_mut().enumerate() {
                    row[i] = punctures - used[i];
                }
                out.insert(Connectome { adj: a }.canonical());
            }
            return;
        }
        let (i, j) = pairs[k];
        let room = (punctures - used[i]).min(punctures - used[j]);
        for v in 0..=room {
            adj[i][j] = v;
            adj[j][i] = v;
            used[i] += v;
            used[j] += v;
            go(k + 1, pairs, punctures, adj, used, out);
            used[i] -= v;
            used[j] -= v;
        }
        adj[i][j] = 0;
        adj[j][i] = 0;
    }
    go(0, &pairs, punctures, &mut adj, &mut used, &mut out);
    Ok(out.into_iter().collect())
}

/// Cut every bipartition crossed by exactly two lines and rejoin the loose
/// ends on each side (an internal arc when both ends sit at one party, a new
/// line otherwise); repeat until no such bipartition is left.
pub fn reduce_connectome(c: &Connectome) -> Connectome {
    let m = c.parties();
    let mut adj = c.adj.clone();
    'outer: loop {
        // subsets containing party 0, excluding the full set
        for mask in 1usize..(1 << m) - 1 {
            if mask & 1 == 0 {
                continue;
            }
            let inside = |i: usize| mask >> i & 1 == 1;
            let mut lines = Vec::new();
            for i in (0..m).filter(|&i| inside(i)) {
                for j in (0..m).filter(|&j| !inside(j)) {
                    lines.extend(std::iter::repeat_n((i, j), adj[i][j]));
                }
            }
            if lines.len() != 2 {
                continue;
            }
            for &(i, j) in &lines {
                adj[i][j] -= 1;
                adj[j][i] -= 1;
            }
            let ((i1, j1), (i2, j2)) = (lines[0], lines[1]);
            for (x, y) in [(i1, i2), (j1, j2)] {
                if x == y {
                    adj[x][x] += 2;
                } else {
                    adj[x][y] += 1;
                    adj[y][x] += 1;
                }
            }
            continue 'outer;
        }
        break;
    }
    Connectome { adj }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    Unentangled,
    Bell,
    Ghz,
    /// Genuinely entangled block of this many parties.
    Multi(usize),
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockKind::Unentangled => write!(f, "unentangled"),
            BlockKind::Bell => write!(f, "Bell"),
            BlockKind::Ghz => write!(f, "GHZ"),
            BlockKind::Multi(k) => write!(f, "{}-party", k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Reduced connectome (parties keep their labels).
    pub reduced: Connectome,
    pub blocks: Vec<(Vec<usize>, BlockKind)>,
}

impl Classification {
    /// `separable`, `genuine` (one block holds every party, m ≥ 2) or
    /// `biseparable`.
    pub fn summary(&self) -> &'static str {
        if self.blocks.iter().all(|(b, _)| b.len() == 1) {
            "separable"
        } else if self.blocks.len() == 1 {
            "genuine"
        } else {
            "biseparable"
        }
    }

    /// Block sizes, descending.
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(|(b, _)| b.len()).collect();
        s.sort_by(|a, b| b.cmp(a));
        s
    }
}

pub fn classify(c: &Connectome) -> Classification {
    let reduced = reduce_connectome(c);
    let blocks = reduced
        .blocks()
        .into_iter()
        .map(|b| {
            let kind = match b.len() {
                1 => BlockKind::Unentangled,
                2 => BlockKind::Bell,
                3 => BlockKind::Ghz,
                k => BlockKind::Multi(k),
            };
            (b, kind)
        })
        .collect();
    Classification { reduced, blocks }
}

/// Distinct classes among `list`: canonical reduced connectomes, ascending.
pub fn distinct_classes(list: &[Connectome]) -> Vec<Connectome> {
    list.iter().map(|c| reduce_connectome(c).canonical()).collect::<BTreeSet<_>>().into_iter().collect()
}

/// Canonical wiring of a connectome as a pairing of its endpoints.
///
/// Parties sit left to right in label order. Within a party, endpoints run:
/// lines to lower-labelled parties (nearest first), internal arcs as adjacent
/// caps, then lines to higher-labelled parties (farthest first). Each bundle
/// is a nested parallel family, so the pairing is planar unless two bundles
/// interleave (`i < k < j < l` with lines `i–j` and `k–l`).
#[allow(clippy::needless_range_loop)]
pub fn representative_pairing(c: &Connectome) -> Result<(Vec<(usize, usize)>, PartyLayout)> {
    let m = c.parties();
    let punct = c.punctures();
    if punct.iter().any(|p| p % 4 != 0 || *p == 0) {
        return Err(Error::Width(format!(
            "connectome {} has parties whose endpoints are not a positive multiple of 4",
            c
        )));
    }
    let starts: Vec<usize> = punct
        .iter()
        .scan(0, |acc, &p| {
            let s = *acc;
            *acc += p;
            Some(s)
        })
        .collect();
    let n: usize = punct.iter().sum();
    // slot[i][j] = endpoints of party i reserved for party j, left to right
    let mut slots: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); m]; m];
    let mut pairs = Vec::with_capacity(n / 2);
    for i in 0..m {
        let mut pos = starts[i];
        for j in (0..i).rev() {
            for _ in 0..c.adj[i][j] {
                slots[i][j].push(pos);
                pos += 1;
            }
        }
        for _ in 0..c.adj[i][i] / 2 {
            pairs.push((pos, pos + 1));
            pos += 2;
        }
        for j in (i + 1..m).rev() {
            for _ in 0..c.adj[i][j] {
                slots[i][j].push(pos);
                pos += 1;
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            // leftmost of i's bundle meets rightmost of j's
            for (a, b) in slots[i][j].iter().zip(slots[j][i].iter().rev()) {
                pairs.push((*a, *b));
            }
        }
    }
    pairs.sort();
    let parties: Vec<Party> = (0..m).map(|i| Party::punctured(&party_name(i), starts[i], punct[i] / 4)).collect();
    Ok((pairs, PartyLayout::new(n, parties)?))
}

/// Word for the canonical wiring (crossings layered, see
/// [`layered_state_word`]).
pub fn representative_word(c: &Connectome) -> Result<(SliceWord, PartyLayout)> {
    let (pairs, layout) = representative_pairing(c)?;
    Ok((layered_state_word(layout.n_points(), &pairs)?, layout))
}

/// Reduced representative state in any ring.
pub fn representative_state<C: Coeff>(c: &Connectome, alg: &Algebra<C>) -> Result<(TLElement<C>, PartyLayout)> {
    let (pairs, layout) = representative_pairing(c)?;
    if let Ok(d) = PlanarDiagram::state(layout.n_points(), &pairs) {
        return Ok((TLElement::from_diagram(d), layout));
    }
    let word = layered_state_word(layout.n_points(), &pairs)?;
    Ok((reduce(&word, alg)?, layout))
}
