//! The shipped tangle documents as golden tests.

use std::path::PathBuf;

use num_complex::Complex64;
use tl_entangle::entanglement::{
    local_ranks, replica_check, schmidt_rank, slocc_tripartite_class, TripartiteClass, RANK_TOL,
};
use tl_entangle::EvalPoint;
use tl_entangle_cli::commands::{evaluate_document, Evaluated};
use tl_entangle_cli::{parse_tangle, TangleDocument};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tangles")
}

fn corpus() -> Vec<(String, TangleDocument)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "tl"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let doc = parse_tangle(&text).unwrap_or_else(|e| panic!("{}: {}", p.display(), e));
            (p.file_stem().unwrap().to_string_lossy().into_owned(), doc)
        })
        .collect()
}

fn doc(name: &str) -> TangleDocument {
    corpus().into_iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no document {name}")).1
}

fn eval(name: &str, theta: f64) -> Evaluated {
    evaluate_document(&doc(name), &EvalPoint::from_theta(theta)).unwrap()
}

fn close(t: &tl_entangle::Tensor, want: &[Complex64], tol: f64) -> bool {
    t.data().len() == want.len() && t.data().iter().zip(want).all(|(a, b)| (a - b).norm() < tol)
}

fn re(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Angles where every party kind in the corpus has a frame.
const THETAS: [f64; 3] = [0.1, 0.3, 1.45];

#[test]
fn every_document_parses_names_itself_and_round_trips() {
    let all = corpus();
    assert!(all.len() >= 25);
    for (file, d) in &all {
        assert_eq!(d.name.as_deref(), Some(file.as_str()));
        let again = parse_tangle(&d.to_string()).unwrap();
        assert_eq!(&again, d, "{file}");
    }
}

#[test]
fn four_point_vectors() {
    for th in THETAS {
        let p = EvalPoint::from_theta(th);
        let (d, a) = (p.d(), p.a());
        let r = (d * d - 1.0).sqrt();
        assert!(close(&eval("4pointbasis_e1", th).amplitudes, &re(&[d, 0.0]), 1e-10));
        assert!(close(&eval("4pointbasis_e2", th).amplitudes, &re(&[1.0, r]), 1e-10));
        let crossed = [a * d + a.inv(), a.inv() * r];
        assert!(close(&eval("4pointbasis_e3", th).amplitudes, &crossed, 1e-10));
    }
}

#[test]
fn bipartite_ranks() {
    let rank = |name: &str, th: f64| schmidt_rank(&eval(name, th).amplitudes, &[0], RANK_TOL).unwrap();
    for th in THETAS {
        assert_eq!((1..=3).map(|i| rank(&format!("2quadruples_{i}"), th)).collect::<Vec<_>>(), vec![1, 1, 2]);
        assert_eq!((1..=4).map(|i| rank(&format!("6pointdiags_{i}"), th)).collect::<Vec<_>>(), vec![1, 1, 2, 5]);
        assert_eq!((1..=3).map(|i| rank(&format!("8pointdiags_{i}"), th)).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(close(&eval("maxent", th).amplitudes, &re(&[1.0, 0.0, 0.0, 1.0]), 1e-10));
        assert_eq!(rank("chained", th), 2);
    }
}

#[test]
fn tripartite_classes() {
    use TripartiteClass::*;
    let want = [Separable, Separable, Separable, Separable, Biseparable(0), Biseparable(1), Ghz];
    for th in THETAS {
        for (i, w) in want.iter().enumerate() {
            let t = eval(&format!("3partydiags_{}", i + 1), th).amplitudes;
            assert_eq!(slocc_tripartite_class(&t, RANK_TOL, 1e-8).unwrap(), *w, "diagram {}, theta {th}", i + 1);
        }
        let ghz = eval("ghz", th).amplitudes;
        assert_eq!(slocc_tripartite_class(&ghz, RANK_TOL, 1e-8).unwrap(), Ghz);
        assert_eq!(local_ranks(&eval("quasiw", th).amplitudes, RANK_TOL).unwrap(), vec![2, 2, 2]);
    }
}

#[test]
fn replica_traces_agree_on_every_state() {
    let mut checked = 0;
    for (name, d) in corpus() {
        let layout = match d.layout() {
            Some(l) => l,
            None => continue,
        };
        for th in THETAS {
            let ev = evaluate_document(&d, &EvalPoint::from_theta(th)).unwrap();
            for keep in 0..layout.len() {
                for n in [2, 3] {
                    let (num, dia) = replica_check(&ev.state, &ev.spaces, &ev.alg, &[keep], n).unwrap();
                    assert!((num - dia).abs() < 1e-8, "{name}, theta {th}, party {keep}, n = {n}: {num} vs {dia}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn closed_documents_have_no_parties() {
    for name in ["hopf", "trefoil"] {
        let d = doc(name);
        assert_eq!((d.top, d.bottom), (0, 0));
        assert!(d.layout().is_none());
    }
}
