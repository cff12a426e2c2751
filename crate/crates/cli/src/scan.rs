//! Angle scans of a non-negative quantity: a parallel grid pass, then
//! golden-section refinement of every grid-local minimum.

use rayon::prelude::*;

/// Environment variable capping scan parallelism.
pub const THREADS_VAR: &str = "TL_ENTANGLE_THREADS";

/// Bracket width at which refinement stops.
const REFINE_WIDTH: f64 = 1e-13;
const MAX_REFINE_STEPS: usize = 200;
/// Refinements that improve on the grid value by less than this are
/// rounding noise; the grid angle is kept.
const ROUNDOFF: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub theta: f64,
    /// `None` where the quantity is undefined (degenerate point).
    pub value: Option<f64>,
}

/// `steps + 1` equally spaced angles from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| if i == steps { hi } else { lo + (hi - lo) * i as f64 / steps as f64 }).collect()
}

/// Pool honouring [`THREADS_VAR`]; unset means rayon's default.
pub fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize =
            v.trim().parse().map_err(|_| format!("{} must be a positive integer, got '{}'", THREADS_VAR, v))?;
        if n == 0 {
            return Err(format!("{} must be a positive integer, got '0'", THREADS_VAR));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| e.to_string())
}

/// Evaluate `f` on the grid in parallel; order follows the grid.
pub fn sample<F>(f: &F, thetas: &[f64]) -> Vec<Sample>
where
    F: Fn(f64) -> Option<f64> + Sync,
{
    thetas.par_iter().map(|&theta| Sample { theta, value: f(theta).filter(|v| v.is_finite()) }).collect()
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`; undefined
/// values count as `+∞`. Returns the best point seen.
pub fn golden_section<F>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64)
where
    F: Fn(f64) -> Option<f64>,
{
    let g = |x: f64| f(x).filter(|v| v.is_finite()).unwrap_or(f64::INFINITY);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..MAX_REFINE_STEPS {
        if hi - lo < REFINE_WIDTH {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = g(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = g(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// Indices of grid-local minima among the defined samples.
pub fn local_minima(samples: &[Sample]) -> Vec<usize> {
    let at = |i: Option<usize>| i.and_then(|i| samples.get(i)).and_then(|s| s.value).unwrap_or(f64::INFINITY);
    (0..samples.len())
        .filter(|&i| {
            let v = match samples[i].value {
                Some(v) => v,
                None => return false,
            };
            let (l, r) = (at(i.checked_sub(1)), at(Some(i + 1)));
            (v <= l && v < r) || (v < l && v <= r)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub theta: f64,
    pub value: f64,
    /// A neighbouring grid point is undefined: the minimum may be the limit
    /// of the quantity at the edge of its domain.
    pub at_domain_edge: bool,
}

/// Refine every grid-local minimum inside its neighbouring grid cells, in
/// parallel. Results are sorted by angle, merged when two refinements land
/// within `merge` of each other.
pub fn refine_minima<F>(f: &F, samples: &[Sample], merge: f64) -> Vec<Minimum>
where
    F: Fn(f64) -> Option<f64> + Sync,
{
    let idx = local_minima(samples);
    let mut found: Vec<Minimum> = idx
        .par_iter()
        .map(|&i| {
            let (l, r) = (i.saturating_sub(1), (i + 1).min(samples.len() - 1));
            let at_domain_edge = samples[l].value.is_none() || samples[r].value.is_none();
            let grid_value = samples[i].value.unwrap_or(f64::INFINITY);
            let (theta, value) = match golden_section(f, samples[l].theta, samples[r].theta) {
                (x, v) if v < grid_value - ROUNDOFF => (x, v),
                _ => (samples[i].theta, grid_value),
            };
            Minimum { theta, value, at_domain_edge }
        })
        .collect();
    found.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let mut out: Vec<Minimum> = Vec::with_capacity(found.len());
    for m in found {
        match out.last_mut() {
            Some(last) if (m.theta - last.theta).abs() <= merge => {
                if m.value < last.value {
                    *last = Minimum { at_domain_edge: last.at_domain_edge || m.at_domain_edge, ..m };
                }
            }
            _ => out.push(m),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_ends_exactly() {
        let g = grid(0.0, 1.0, 3);
        assert_eq!(g.len(), 4);
        assert_eq!((g[0], g[3]), (0.0, 1.0));
    }

    #[test]
    fn finds_kinked_zeros() {
        let f = |x: f64| Some(((x - 0.3).abs() * (x - 0.71).abs()).min(1.0));
        let s = sample(&f, &grid(0.0, 1.0, 50));
        let m = refine_minima(&f, &s, 1e-9);
        let zeros: Vec<f64> = m.iter().filter(|z| z.value < 1e-10).map(|z| z.theta).collect();
        assert!(m.iter().all(|z| !z.at_domain_edge));
        assert_eq!(zeros.len(), 2);
        assert!((zeros[0] - 0.3).abs() < 1e-9 && (zeros[1] - 0.71).abs() < 1e-9);
    }

    #[test]
    fn undefined_points_are_skipped() {
        let f = |x: f64| if (0.4..0.6).contains(&x) { None } else { Some((x - 0.2).powi(2)) };
        let s = sample(&f, &grid(0.0, 1.0, 20));
        assert!(s.iter().any(|p| p.value.is_none()));
        let m = refine_minima(&f, &s, 1e-9);
        assert!(m.iter().any(|z| (z.theta - 0.2).abs() < 1e-6 && z.value < 1e-12 && !z.at_domain_edge));
        // the quantity is smallest just before the gap
        let f = |x: f64| if x > 0.5 { None } else { Some(1.0 - x) };
        let s = sample(&f, &grid(0.0, 1.0, 20));
        assert!(refine_minima(&f, &s, 1e-9).iter().any(|z| z.at_domain_edge));
    }

    #[test]
    fn exact_grid_zeros_keep_their_angle() {
        let f = |x: f64| Some(if x == 0.25 { 0.0 } else { 1e-16 + (x - 0.25).abs() * 1e-3 });
        let s = sample(&f, &grid(0.0, 1.0, 4));
        let m = refine_minima(&f, &s, 1e-9);
        assert_eq!(m[0].theta, 0.25);
    }
}
