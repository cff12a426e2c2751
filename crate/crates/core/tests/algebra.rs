mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use tl_entangle::diagram::{enumerate_planar_matchings, PlanarDiagram, TLElement};
use tl_entangle::jones_wenzl::{is_idempotent, jw};
use tl_entangle::scalar::{delta, LaurentPoly, RationalFn};
use tl_entangle::tangle::{kauffman_bracket, reduce, Slice, SliceWord};
use tl_entangle::{Algebra, Mode};

fn exact() -> Algebra<RationalFn> {
    Algebra::exact(Mode::Kauffman)
}

fn e(n: usize, i: usize) -> TLElement<RationalFn> {
    TLElement::generator(n, i).unwrap()
}

#[test]
fn temperley_lieb_relations_exact() {
    let alg = exact();
    for n in 2..=5 {
        for i in 1..n {
            let ei = e(n, i);
            assert_eq!(ei.compose(&ei, &alg).unwrap(), ei.scale(&alg.d), "e_{i}² in TL_{n}");
            for j in 1..n {
                let ej = e(n, j);
                if i.abs_diff(j) == 1 {
                    assert_eq!(ei.compose(&ej, &alg).unwrap().compose(&ei, &alg).unwrap(), ei);
                }
                if i.abs_diff(j) >= 2 {
                    assert_eq!(ei.compose(&ej, &alg).unwrap(), ej.compose(&ei, &alg).unwrap());
                }
            }
        }
    }
}

fn word(top: usize, slices: Vec<Slice>) -> SliceWord {
    SliceWord::new(top, slices).unwrap()
}

#[test]
fn crossing_is_inverted_by_its_mirror() {
    for mode in [Mode::Kauffman, Mode::Permutation] {
        let alg = Algebra::exact(mode);
        for n in 2..=4 {
            for i in 1..n {
                let w = word(n, vec![Slice::Over(i), Slice::Under(i)]);
                assert_eq!(reduce(&w, &alg).unwrap(), TLElement::identity(n), "{mode:?}, n = {n}, i = {i}");
            }
        }
    }
}

#[test]
fn kinks_multiply_by_minus_a_cubed() {
    let alg = exact();
    let a3 = RationalFn::from_poly(LaurentPoly::from_terms([(3, -1)]));
    let a_3 = RationalFn::from_poly(LaurentPoly::from_terms([(-3, -1)]));
    // positive kink: the under pattern on one strand
    let pos = word(1, vec![Slice::Cup(2), Slice::Under(1), Slice::Cap(1)]);
    assert_eq!(reduce(&pos, &alg).unwrap(), TLElement::identity(1).scale(&a3));
    let neg = word(1, vec![Slice::Cup(2), Slice::Over(1), Slice::Cap(1)]);
    assert_eq!(reduce(&neg, &alg).unwrap(), TLElement::identity(1).scale(&a_3));
    // the kink on the other side of the strand agrees
    let pos_left = word(1, vec![Slice::Cup(1), Slice::Under(2), Slice::Cap(2)]);
    assert_eq!(reduce(&pos_left, &alg).unwrap(), TLElement::identity(1).scale(&a3));
}

#[test]
fn jones_wenzl_identities_exact() {
    let alg = exact();
    for n in 1..=5 {
        let p = jw(n).unwrap();
        assert!(is_idempotent(&p.element, &alg).unwrap(), "jw({n})² = jw({n})");
        for i in 1..n {
            let ei = e(n, i);
            assert!(p.element.compose(&ei, &alg).unwrap().is_zero(), "jw({n})·e_{i}");
            assert!(ei.compose(&p.element, &alg).unwrap().is_zero(), "e_{i}·jw({n})");
            assert!(p.plat_zero_exact(i).unwrap());
        }
        assert_eq!(p.trace_exact().unwrap(), delta(n as i64).unwrap(), "trace of jw({n})");
        assert!(p.identity_coeff() == RationalFn::from_int(1));
    }
}

#[test]
fn catalan_dimensions() {
    let counts: Vec<usize> = (1..=5).map(|n| enumerate_planar_matchings(n, n).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 2, 5, 14, 42]);
    // the same numbers count states on 2n points
    let states: Vec<usize> = (1..=5).map(|n| enumerate_planar_matchings(0, 2 * n).unwrap().len()).collect();
    assert_eq!(states, vec![1, 2, 5, 14, 42]);
}

#[test]
fn links_against_the_state_sum() {
    use Slice::*;
    let hopf = word(0, vec![Cup(1), Cup(3), Over(2), Over(2), Cap(1), Cap(1)]);
    let trefoil = word(0, vec![Cup(1), Cup(3), Over(2), Over(2), Over(2), Cap(1), Cap(1)]);
    let th = 0.413;
    let a = Complex64::from_polar(1.0, th);
    let num = alg(th);
    for w in [&hopf, &trefoil] {
        let got = kauffman_bracket(w, &num).unwrap();
        let want = state_sum(w, a)[&Vec::<usize>::new()];
        assert!((got - want).norm() < 1e-12);
    }
    // the unknot evaluates to d, so the Hopf link is d·(−A⁴ − A⁻⁴)
    let d = -a.powi(2) - a.powi(-2);
    let want = d * (-a.powi(4) - a.powi(-4));
    assert!((kauffman_bracket(&hopf, &num).unwrap() - want).norm() < 1e-12);
}

/// Random words of bounded width; `closed` words end at width 0.
fn words(top: usize, closed: bool) -> impl Strategy<Value = SliceWord> {
    prop::collection::vec((0u8..6, 1usize..8), 0..14).prop_map(move |ops| {
        let mut w = top;
        let mut slices = Vec::new();
        for (kind, pos) in ops {
            let s = match kind {
                0 if w < 6 => Slice::Cup(1 + pos % (w + 1)),
                1 if w >= 2 && (!closed || w > 2 || top == 0) => Slice::Cap(1 + pos % (w - 1)),
                2 if w >= 2 => Slice::Over(1 + pos % (w - 1)),
                3 if w >= 2 => Slice::Under(1 + pos % (w - 1)),
                4 if w >= 2 => Slice::E(1 + pos % (w - 1)),
                _ => continue,
            };
            w = s.apply_width(w).unwrap();
            slices.push(s);
        }
        if closed {
            while w >= 2 {
                slices.push(Slice::Cap(1));
                w -= 2;
            }
        }
        SliceWord::new(top, slices).unwrap()
    })
}

fn expansion(el: &TLElement<Complex64>) -> std::collections::HashMap<Vec<usize>, Complex64> {
    el.terms()
        .map(|(d, c)| {
            let n = d.n_top() + d.n_bottom();
            let to_index = |x: tl_entangle::diagram::End| match x {
                tl_entangle::diagram::End::Top(i) => i,
                tl_entangle::diagram::End::Bot(j) => d.n_top() + j,
            };
            let ends: Vec<tl_entangle::diagram::End> = (0..n).map(|k| d.end(k)).collect();
            let mut partner = vec![0; n];
            for &x in &ends {
                partner[to_index(x)] = to_index(d.partner(x));
            }
            (partner, *c)
        })
        .collect()
}

fn same(x: &TLElement<Complex64>, y: &TLElement<Complex64>) -> bool {
    let (a, b) = (expansion(x), expansion(y));
    let keys: std::collections::HashSet<_> = a.keys().chain(b.keys()).collect();
    let zero = Complex64::new(0.0, 0.0);
    keys.into_iter().all(|k| (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).norm() < 1e-9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_matches_state_sum(w in (0usize..4).prop_flat_map(|t| words(2 * t, false)), th in 0.05f64..3.0) {
        let el = reduce(&w, &alg(th)).unwrap();
        let oracle = state_sum(&w, Complex64::from_polar(1.0, th));
        let got = expansion(&el);
        for (k, v) in &oracle {
            let g = got.get(k).copied().unwrap_or_default();
            prop_assert!((g - v).norm() < 1e-9, "{:?}: {} vs {}", k, g, v);
        }
        for (k, v) in &got {
            prop_assert!(oracle.contains_key(k) || v.norm() < 1e-9);
        }
    }

    #[test]
    fn bracket_of_mirror_inverts_the_variable(w in words(0, true), th in 0.05f64..3.0) {
        let x = kauffman_bracket(&w, &alg(th)).unwrap();
        let y = kauffman_bracket(&w.mirror(), &alg(-th)).unwrap();
        prop_assert!((x - y).norm() < 1e-9 * (1.0 + x.norm()));
    }

    #[test]
    fn reidemeister_moves(n in 2usize..6, i in 1usize..5, th in 0.05f64..3.0) {
        prop_assume!(i < n);
        let a = alg(th);
        let id = TLElement::identity(n);
        let r2 = word(n, vec![Slice::Under(i), Slice::Over(i)]);
        prop_assert!(same(&reduce(&r2, &a).unwrap(), &id));
        if i + 1 < n {
            for (x, y) in [(Slice::Over(i), Slice::Over(i + 1)), (Slice::Under(i), Slice::Under(i + 1))] {
                let y_of = |s: Slice, k: usize| match s { Slice::Over(_) => Slice::Over(k), _ => Slice::Under(k) };
                let l = word(n, vec![x, y, y_of(x, i)]);
                let r = word(n, vec![y_of(x, i + 1), y_of(x, i), y]);
                prop_assert!(same(&reduce(&l, &a).unwrap(), &reduce(&r, &a).unwrap()));
            }
        }
    }

    #[test]
    fn composition_is_associative(n in 1usize..5, i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let alg = exact();
        let all = enumerate_planar_matchings(n, n).unwrap();
        let pick = |x: usize| TLElement::from_diagram(all[x % all.len()].clone());
        let (x, y, z) = (pick(i), pick(j), pick(k));
        let l = x.compose(&y, &alg).unwrap().compose(&z, &alg).unwrap();
        let r = x.compose(&y.compose(&z, &alg).unwrap(), &alg).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn reflection_reverses_composition(n in 1usize..5, i in 0usize..1000, j in 0usize..1000) {
        let all = enumerate_planar_matchings(n, n).unwrap();
        let (x, y) = (&all[i % all.len()], &all[j % all.len()]);
        let (xy, lx) = x.compose(y).unwrap();
        let (yx, ly) = y.reflect().compose(&x.reflect()).unwrap();
        prop_assert_eq!(lx, ly);
        prop_assert_eq!(xy.reflect(), yx);
    }
}

#[test]
fn state_diagrams_have_no_top() {
    let d = PlanarDiagram::state(4, &[(0, 1), (2, 3)]).unwrap();
    assert_eq!((d.n_top(), d.n_bottom()), (0, 4));
}
