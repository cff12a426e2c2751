//! Canonical text is a fixed point of parse ∘ print on arbitrary documents.

use proptest::prelude::*;
use tl_entangle::tangle::Slice;
use tl_entangle::Mode;
use tl_entangle_cli::dsl::PartyDecl;
use tl_entangle_cli::{parse_tangle, TangleDocument};

/// Slices fitting the running width, from raw choices.
fn fit(top: usize, picks: &[(u8, usize, usize)]) -> (Vec<Slice>, usize) {
    let mut w = top;
    let mut out = Vec::new();
    for &(kind, a, b) in picks {
        let s = match kind % 6 {
            0 => Slice::Cup(1 + a % (w + 1)),
            1 if w >= 2 => Slice::Cap(1 + a % (w - 1)),
            2 if w >= 2 => Slice::E(1 + a % (w - 1)),
            3 if w >= 2 => Slice::Over(1 + a % (w - 1)),
            4 if w >= 2 => Slice::Under(1 + a % (w - 1)),
            5 if w >= 1 => {
                let i = 1 + a % w;
                Slice::Jw(i, 1 + b % (w - i + 1))
            }
            _ => Slice::Cup(1 + a % (w + 1)),
        };
        w = s.apply_width(w).expect("constructed to fit");
        out.push(s);
    }
    (out, w)
}

/// Consecutive parties covering `1..=width`, sized from `sizes`.
fn cover(width: usize, sizes: &[bool]) -> Vec<PartyDecl> {
    let mut parties = Vec::new();
    let mut at = 1;
    let mut k = 0;
    while at <= width {
        let left = width - at + 1;
        let punctured = sizes.get(k).copied().unwrap_or(false) && left >= 4;
        let len = if punctured { 4 } else { 2 };
        parties.push(PartyDecl { name: format!("P{}", k), first: at, last: at + len - 1, plain: !punctured });
        at += len;
        k += 1;
    }
    parties
}

fn documents() -> impl Strategy<Value = TangleDocument> {
    (
        proptest::option::of("[a-z0-9_-]{0,8}"),
        proptest::collection::vec("[ a-z:.]{0,12}", 0..3),
        any::<bool>(),
        0usize..5,
        proptest::collection::vec((any::<u8>(), 0usize..16, 0usize..16), 0..10),
        proptest::collection::vec(any::<bool>(), 0..8),
    )
        .prop_map(|(name, comments, perm, top, picks, sizes)| {
            let start = if sizes.first().copied().unwrap_or(false) { 0 } else { top };
            let (slices, bottom) = fit(start, &picks);
            let parties = if start == 0 && bottom > 0 { cover(bottom, &sizes) } else { Vec::new() };
            TangleDocument {
                name,
                comments,
                mode: if perm { Mode::Permutation } else { Mode::Kauffman },
                top: start,
                bottom,
                slices,
                parties,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_documents_parse_back(doc in documents()) {
        let text = doc.to_string();
        let back = parse_tangle(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_string(), text);
    }
}
