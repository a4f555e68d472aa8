use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sesqui::arith;
use sesqui::attacks::generate::{family_context, Family};
use sesqui::attacks::norm::{candidate_lower_bound, candidate_upper_bound, norm_fiber};
use sesqui::attacks::*;
use sesqui::orientation::Orientation;
use sesqui::pairings::{sesqui_t, ReducedPairValue};
use sesqui::qorder::{pair_pow, OrderDesc};

fn f541() -> Orientation {
    family_context(&Family::F541, None, &mut ChaCha8Rng::seed_from_u64(0)).unwrap().orientation().unwrap()
}

fn odd_levels(disc: i64) -> Vec<u64> {
    (3..=100u64).filter(|m| m % 2 == 1 && arith::gcd(*m as i128, disc as i128) == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fiber_size_is_bounded(
        (t, n) in prop::sample::select(vec![(0i64, 1i64), (1, 1), (0, 2), (1, 2)]),
        pick in any::<prop::sample::Index>(),
        u in 1u64..100,
    ) {
        let order = OrderDesc::new(t, n).unwrap();
        let levels = odd_levels(order.disc());
        let m = levels[pick.index(levels.len())];
        let nval = u % m;
        prop_assume!(arith::gcd(nval as i128, m as i128) == 1);
        let fiber = norm_fiber(order, m, nval).unwrap();
        let size = fiber.len() as u64;
        prop_assert!(candidate_lower_bound(m) <= size && size <= candidate_upper_bound(m), "m={m} size={size}");
        for mu in &fiber {
            prop_assert_eq!(arith::modp(mu.norm() as i128, m), nval);
            prop_assert_eq!(arith::gcd(mu.norm() as i128, m as i128), 1);
        }
    }

    #[test]
    fn sesquilinear_in_both_slots(a1 in 0i64..5, b1 in 0i64..5, a2 in 0i64..5, b2 in 0i64..5, cp in prop::array::uniform2(0i64..5), cq in prop::array::uniform2(0i64..5)) {
        let o = f541();
        let (p, q) = (o.point(cp), o.point(cq));
        let ord = o.order();
        let (alpha, beta) = (ord.elem(a1, b1), ord.elem(a2, b2));
        let ap = o.point(o.apply_coords(&alpha, o.coords(&p).unwrap()));
        let bq = o.point(o.apply_coords(&beta, o.coords(&q).unwrap()));
        let lhs = sesqui_t(&ap, &bq, 5, &o).unwrap();
        let base = sesqui_t(&p, &q, 5, &o).unwrap();
        let rhs = ReducedPairValue::new(pair_pow(&base.value, &alpha.conj().mul(&beta)).unwrap(), 5).unwrap();
        prop_assert_eq!(lhs.logs_at(5).unwrap(), rhs.logs_at(5).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn norm_attack_is_sound(seed in 0u64..10_000, d in prop::sample::select(vec![2u64, 3, 4])) {
        let spec = GenSpec { family: "gaussian(541)".parse().unwrap(), degree: d, variant: Variant::Norm, m: None };
        let b = gen_instance(&spec, seed).unwrap();
        let sealed = b.sealed.as_ref().unwrap();
        let (nval, cands, rec) = class_group_attack(&b.instance).unwrap();
        let lam = sealed.lambda(&b.instance).unwrap();
        prop_assert_eq!(nval as i64, lam.norm().rem_euclid(5));
        prop_assert!(cands.points.contains(&sealed.image(&b.instance, &b.instance.gen).unwrap()));
        prop_assert!(rec.isogeny.same_kernel_chain(&sealed.isogeny));
    }
}
