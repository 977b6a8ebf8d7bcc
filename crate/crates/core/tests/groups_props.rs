use proptest::prelude::*;
use warpcone_core::groups::{ball_size, enumerate_ball, reduce};
use warpcone_core::{Automorphism, Letter, Word};

fn letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect())
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    letters(rank, max_len).prop_map(Word::reduce)
}

fn automorphism(rank: usize) -> impl Strategy<Value = Automorphism> {
    prop::collection::vec(word(rank, 3), rank).prop_map(Automorphism::new)
}

/// Reference reduction with an explicit stack.
fn stack_reduce(raw: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in raw {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

proptest! {
    #[test]
    fn reduction_matches_stack_and_is_idempotent(raw in letters(3, 30)) {
        let w = reduce(&raw);
        let expected = stack_reduce(&raw);
        prop_assert_eq!(w.letters(), expected.as_slice());
        prop_assert_eq!(reduce(w.letters()), w.clone());
        for pair in w.letters().windows(2) {
            prop_assert_ne!(pair[0], pair[1].inverse());
        }
    }

    #[test]
    fn length_is_subadditive(u in word(2, 12), v in word(2, 12)) {
        prop_assert!(u.mul(&v).len() <= u.len() + v.len());
    }

    #[test]
    fn cyclic_reduction_reconstructs(w in word(2, 14)) {
        let (core, c) = w.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(c.mul(&core).mul(&c.inverse()), w);
    }

    #[test]
    fn stable_norm_is_conjugation_invariant(w in word(2, 10), c in word(2, 6)) {
        prop_assert_eq!(w.conjugate_by(&c).stable_norm(), w.stable_norm());
    }

    #[test]
    fn stable_norm_is_homogeneous(w in word(2, 10), k in 1u32..=8) {
        prop_assert_eq!(w.pow(k).stable_norm(), k as usize * w.stable_norm());
    }

    #[test]
    fn stable_norm_bounded_by_length(w in word(3, 16)) {
        prop_assert!(w.stable_norm() <= w.len());
    }

    #[test]
    fn automorphisms_compose_letterwise(phi in automorphism(2), psi in automorphism(2), w in word(2, 6)) {
        prop_assert_eq!(phi.compose(&psi).apply(&w), phi.apply(&psi.apply(&w)));
    }

    #[test]
    fn words_round_trip_as_strings(w in word(4, 20)) {
        prop_assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }
}

#[test]
fn ball_sizes_match_closed_form() {
    for n in 2..=3usize {
        for radius in 0..=5usize {
            let ball = enumerate_ball(n, radius).unwrap();
            let q = (2 * n - 1) as u128;
            let closed = 1 + (2 * n as u128) * (q.pow(radius as u32) - 1) / (q - 1);
            assert_eq!(ball.elements.len() as u128, closed);
            assert_eq!(ball_size(n, radius), closed);
            let mut seen = std::collections::HashSet::new();
            for w in &ball.elements {
                assert!(w.len() <= radius);
                assert!(seen.insert(w.clone()));
            }
        }
    }
}
