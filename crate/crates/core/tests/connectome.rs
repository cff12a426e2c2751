mod common;

use common::*;
use proptest::prelude::*;
use tl_entangle::connectome::*;
use tl_entangle::entanglement::{local_ranks, schmidt_rank, RANK_TOL};
use tl_entangle::state_space::{amplitudes, spaces_for, DiagramState};

#[test]
fn counts_and_classes() {
    for (m, total, classes) in [(2, 3, 2), (3, 7, 3)] {
        let list = enumerate_connectomes(m, 4).unwrap();
        assert_eq!(list.len(), total, "m = {m}");
        assert_eq!(distinct_classes(&list).len(), classes, "m = {m}");
    }
    let four = enumerate_connectomes(4, 4).unwrap();
    let classes = distinct_classes(&four);
    assert_eq!(classes.len(), 6);
    let genuine = classes.iter().filter(|c| classify(c).summary() == "genuine").count();
    assert_eq!(genuine, 2);
}

#[test]
fn tripartite_list_matches_the_drawn_diagrams() {
    let list = enumerate_connectomes(3, 4).unwrap();
    let mut summaries: Vec<&str> = list.iter().map(|c| classify(c).summary()).collect();
    summaries.sort();
    assert_eq!(
        summaries,
        ["biseparable", "biseparable", "genuine", "separable", "separable", "separable", "separable"]
    );
}

/// Representatives of every class are states whose local ranks follow the
/// block structure: a party alone in its block has rank 1, any other rank 2.
#[test]
fn representatives_have_the_predicted_local_ranks() {
    for m in 2..=4 {
        for th in [0.07, 0.31] {
            let a = alg(th);
            for c in enumerate_connectomes(m, 4).unwrap() {
                let (el, layout) = representative_state(&c, &a).unwrap();
                let spaces = spaces_for(&layout, &a).unwrap();
                let t = amplitudes(&DiagramState::new(el, layout).unwrap(), &spaces, &a).unwrap();
                let cls = classify(&c);
                let want: Vec<usize> =
                    (0..m).map(|p| if cls.blocks.iter().any(|(b, _)| b == &vec![p]) { 1 } else { 2 }).collect();
                assert_eq!(local_ranks(&t, RANK_TOL).unwrap(), want, "{c} at theta {th}");
                // a cut between blocks carries no entanglement
                for (b, _) in &cls.blocks {
                    assert_eq!(schmidt_rank(&t, b, RANK_TOL).unwrap(), 1, "{c}: block {b:?}");
                }
            }
        }
    }
}

#[test]
fn representative_pairings_realise_their_connectome() {
    for m in 2..=4 {
        for c in enumerate_connectomes(m, 4).unwrap() {
            let (pairs, layout) = representative_pairing(&c).unwrap();
            let mut partner = vec![0; layout.n_points()];
            for (x, y) in pairs {
                partner[x] = y;
                partner[y] = x;
            }
            assert_eq!(Connectome::from_pairing(&partner, &layout).unwrap(), c);
        }
    }
}

fn connectome_strategy() -> impl Strategy<Value = Connectome> {
    (2usize..=4).prop_flat_map(|m| {
        let list = enumerate_connectomes(m, 4).unwrap();
        let n = list.len();
        (Just(list), 0..n, Just(m).prop_flat_map(|m| Just((0..m).collect::<Vec<_>>()).prop_shuffle()))
            .prop_map(|(list, i, perm)| list[i].permuted(&perm))
    })
}

proptest! {
    #[test]
    fn canonical_form_ignores_labels(c in connectome_strategy()) {
        let m = c.parties();
        let rev: Vec<usize> = (0..m).rev().collect();
        prop_assert_eq!(c.permuted(&rev).canonical(), c.canonical());
        prop_assert!(c.punctures().iter().all(|&p| p == 4));
    }

    #[test]
    fn reduction_is_idempotent_and_keeps_punctures(c in connectome_strategy()) {
        let r = reduce_connectome(&c);
        prop_assert_eq!(reduce_connectome(&r), r.clone());
        prop_assert_eq!(r.punctures(), c.punctures());
        // no bipartition of the result is cut by exactly two lines
        let m = c.parties();
        for mask in 1usize..(1 << m) - 1 {
            let side: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            prop_assert_ne!(r.cut_size(&side), 2);
        }
    }
}
