use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpcone_core::check::{canonical_form_violation, cocycle_violation, random_loop, random_move, random_path, refine_path};
use warpcone_core::groups::random_word;
use warpcone_core::{make_action, q_map, Action, ActionSpec, CoarseContext, CoarsePath, Point, Space};

fn su2() -> Action {
    make_action(&ActionSpec::GenericSu2 { count: 2, seed: 1 }).unwrap()
}

/// Loop on `T²` based at `base` winding `k` times, in steps of at most 1/20.
fn winding_loop(ctx: &CoarseContext<'_>, base: [f64; 2], k: [i64; 2]) -> CoarsePath {
    let n = 20 * (k[0].abs().max(k[1].abs()) as usize).max(1);
    let pts = (0..=n)
        .map(|i| {
            let s = i as f64 / n as f64;
            let c = [0, 1].map(|j| (base[j] + s * k[j] as f64).rem_euclid(1.0));
            Point::torus(&c).unwrap()
        })
        .collect();
    ctx.validate(pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn q_inverts_j(seed in any::<u64>(), len in 0usize..=8) {
        let action = su2();
        let ctx = CoarseContext::with_probes(&action, 100.0, 2.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, 2, len);
        let base = action.space.sample_uniform(&mut rng);
        let lp = ctx.j_gamma(&w, &base).unwrap();
        prop_assert!(lp.is_loop());
        prop_assert_eq!(q_map(&lp), w);
    }

    #[test]
    fn moves_preserve_q(seed in any::<u64>()) {
        let action = su2();
        let ctx = CoarseContext::with_probes(&action, 100.0, 2.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lp = refine_path(&ctx, &random_loop(&ctx, 4, &mut rng).unwrap(), 4).unwrap();
        let q0 = q_map(&lp);
        for _ in 0..5 {
            let (mv, next) = random_move(&ctx, &lp, &mut rng).unwrap();
            prop_assert_eq!(q_map(&next), q0.clone(), "{:?}", mv);
            lp = next;
        }
    }

    #[test]
    fn canonical_forms_and_cocycle(seed in any::<u64>()) {
        let action = su2();
        let ctx = CoarseContext::with_probes(&action, 100.0, 2.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = action.space.sample_uniform(&mut rng);
        let a = random_path(&ctx, &start, rng.random_range(0..10), &mut rng).unwrap();
        let b = random_path(&ctx, a.end(), rng.random_range(0..10), &mut rng).unwrap();
        prop_assert_eq!(canonical_form_violation(&ctx, &a), None);
        prop_assert_eq!(cocycle_violation(&ctx, &a, &b), None);
    }

    #[test]
    fn winding_is_additive_and_odd(
        base in (0.0..1.0f64, 0.0..1.0f64),
        k in (-2i64..=2, -2i64..=2),
        m in (-2i64..=2, -2i64..=2),
    ) {
        let action = Action::trivial(Space::Torus { dim: 2 });
        let ctx = CoarseContext::with_probes(&action, 10.0, 1.0).unwrap();
        let base = [base.0, base.1];
        let (a, b) = (winding_loop(&ctx, base, [k.0, k.1]), winding_loop(&ctx, base, [m.0, m.1]));
        let wa = ctx.winding_vector(&a).unwrap().vector;
        let wb = ctx.winding_vector(&b).unwrap().vector;
        prop_assert_eq!(&wa, &vec![k.0, k.1]);
        let ab = ctx.winding_vector(&ctx.concat(&a, &b).unwrap()).unwrap().vector;
        prop_assert_eq!(ab, vec![wa[0] + wb[0], wa[1] + wb[1]]);
        let rev = ctx.winding_vector(&ctx.reverse(&a).unwrap()).unwrap().vector;
        prop_assert_eq!(rev, vec![-wa[0], -wa[1]]);
    }
}
