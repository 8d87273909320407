use kron_core::blowup::{BlowupSection, SectionClass};
use kron_core::bundles::{evaluate_h0_list, generic_section_splitting, recursion_values, RecursionVariant};
use kron_core::form::check_divrem_identity;
use kron_core::kronecker::KroneckerModule;
use kron_core::quadric::{
    dot, fibration, h_action, random_quaternion, random_tuple, sample_pair, sample_real_line, sigma,
    tau_point, LineClass, ProjPoint,
};
use kron_core::{BinaryForm, ExactMatrix, Gq, QuaternionValue};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gq() -> impl Strategy<Value = Gq> {
    (-6i64..=6, -6i64..=6).prop_map(|(a, b)| Gq::from_ints(a, b))
}

fn nonzero_gq() -> impl Strategy<Value = Gq> {
    gq().prop_filter("nonzero", |z| !z.is_zero())
}

fn form(max_degree: i64) -> impl Strategy<Value = BinaryForm> {
    (0..=max_degree).prop_flat_map(|d| {
        prop::collection::vec(gq(), (d + 1) as usize).prop_map(move |c| BinaryForm::new(d, c).unwrap())
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(prop::collection::vec(gq(), cols), rows)
        .prop_map(|r| ExactMatrix::from_rows(r).unwrap())
}

fn int_matrix(n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(prop::collection::vec((-4i64..=4).prop_map(Gq::from_int), n), n)
        .prop_map(|r| ExactMatrix::from_rows(r).unwrap())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_plus_nullity(m in (1usize..5, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Gq::is_zero));
        }
    }

    #[test]
    fn signature_is_a_congruence_invariant(
        diag in prop::collection::vec(-3i64..=3, 4),
        p in int_matrix(4).prop_filter("invertible", |p| p.rank() == 4),
    ) {
        let mut d = ExactMatrix::zeros(4, 4);
        for (i, v) in diag.iter().enumerate() {
            d.set(i, i, Gq::from_int(*v));
        }
        let moved = p.transpose().mul(&d).unwrap().mul(&p).unwrap();
        let pos = diag.iter().filter(|v| **v > 0).count();
        let neg = diag.iter().filter(|v| **v < 0).count();
        prop_assert_eq!(moved.signature().unwrap(), (pos, neg));
    }

    #[test]
    fn divrem_reconstructs_dividend(f in form(6), g in form(3).prop_filter("nonzero", |g| !g.is_zero())) {
        if let Ok(dr) = f.divrem(&g) {
            prop_assert!(check_divrem_identity(&f, &g, &dr));
        }
    }

    #[test]
    fn form_product_evaluates_pointwise(f in form(4), g in form(4), x0 in gq(), x1 in gq()) {
        let lhs = f.multiply(&g).evaluate(&x0, &x1);
        prop_assert_eq!(lhs, &f.evaluate(&x0, &x1) * &g.evaluate(&x0, &x1));
    }

    #[test]
    fn recursion_inverts_evaluation(r in prop::collection::btree_map(0usize..5, 1usize..6, 0..5)) {
        let len = 6;
        let h = evaluate_h0_list(&r, len);
        let raw = recursion_values(&h, RecursionVariant::Corrected);
        let want: Vec<i64> = (0..len).map(|i| *r.get(&i).unwrap_or(&0) as i64).collect();
        prop_assert_eq!(raw, want);
        let rank: usize = r.values().sum();
        prop_assert_eq!(generic_section_splitting(&h, rank, RecursionVariant::Corrected).unwrap(), r);
    }

    #[test]
    fn kronecker_evaluation_is_bilinear(
        maps in prop::collection::vec(matrix(3, 2), 3),
        v in prop::collection::vec(gq(), 2),
        w in prop::collection::vec(gq(), 2),
        z in prop::collection::vec(gq(), 3),
        y in prop::collection::vec(gq(), 3),
        c in gq(),
    ) {
        let km = KroneckerModule::new(maps).unwrap();
        let add = |a: &[Gq], b: &[Gq]| -> Vec<Gq> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        let scale = |a: &[Gq]| -> Vec<Gq> { a.iter().map(|x| x * &c).collect() };
        let lhs = km.evaluate(&add(&v, &scale(&w)), &z).unwrap();
        let rhs = add(&km.evaluate(&v, &z).unwrap(), &scale(&km.evaluate(&w, &z).unwrap()));
        prop_assert_eq!(lhs, rhs);
        let lhs = km.evaluate(&v, &add(&z, &scale(&y))).unwrap();
        let rhs = add(&km.evaluate(&v, &z).unwrap(), &scale(&km.evaluate(&v, &y).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn slice_rank_ignores_scaling(
        maps in prop::collection::vec(matrix(4, 3), 2),
        z in prop::collection::vec(gq(), 2).prop_filter("nonzero", |z| z.iter().any(|x| !x.is_zero())),
        c in nonzero_gq(),
    ) {
        let km = KroneckerModule::new(maps).unwrap();
        let scaled: Vec<Gq> = z.iter().map(|x| x * &c).collect();
        prop_assert_eq!(km.slice_rank(&z).unwrap(), km.slice_rank(&scaled).unwrap());
    }

    #[test]
    fn real_lines_are_valid_and_classified_by_x_sigma_y(seed in any::<u64>(), x_inf in any::<bool>()) {
        let data = sample_real_line(&mut rng(seed), x_inf);
        prop_assert!(data.is_real_line());
        let line = data.line().unwrap();
        prop_assert!(line.validate().valid());
        let degenerate = dot(&data.x, &sigma(&data.y)).is_zero();
        prop_assert_eq!(line.classify().unwrap() == LineClass::Degenerate, degenerate);
    }

    #[test]
    fn tau_is_an_involution_on_the_quadric(seed in any::<u64>()) {
        let data = sample_pair(&mut rng(seed));
        let p = ProjPoint { x: data.x.clone(), y: data.y.clone() };
        let twice = tau_point(&tau_point(&p));
        prop_assert!(twice.same_as(&p));
        prop_assert_eq!(tau_point(&p).on_quadric(), p.on_quadric());
    }

    #[test]
    fn action_composes_and_preserves_fibres(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_tuple(&mut r);
        let u = random_quaternion(&mut r, 5);
        let v = random_quaternion(&mut r, 5);
        prop_assume!(!u.is_zero() && !v.is_zero());
        let step = h_action(&u, &h_action(&v, &t).unwrap()).unwrap();
        prop_assert_eq!(&step, &h_action(&u.mul_ref(&v), &t).unwrap());
        let uv = u.mul_ref(&v);
        let conjugated = uv.mul_ref(&t.product()).mul_ref(&uv.inv().unwrap());
        prop_assert_eq!(step.product(), conjugated);
        if let Ok(f) = fibration(&t) {
            prop_assert_eq!(fibration(&step).unwrap(), f);
        }
    }

    #[test]
    fn real_normal_form_round_trips(a in gq(), b in gq()) {
        let q = QuaternionValue::new(a, b);
        let s = BlowupSection::from_quaternion(&q);
        prop_assert!(s.is_real());
        prop_assert_eq!(s.real_normal_form().unwrap(), q);
    }

    #[test]
    fn section_invariants_survive_scaling(coords in prop::collection::vec(gq(), 5), lambda in nonzero_gq()) {
        let Ok(s) = BlowupSection::new(coords.clone()) else { return Ok(()) };
        let scaled = BlowupSection::new(coords.iter().map(|z| z * &lambda).collect()).unwrap();
        prop_assert!(scaled.same_as(&s));
        prop_assert_eq!(scaled.classify(), s.classify());
        prop_assert_eq!(scaled.classify() == SectionClass::OnDivisor, s.c().is_zero());
    }
}

#[test]
fn split_bundle_cohomology_matches_line_bundle_count() {
    use kron_core::bundles::{h0_of_split, split_bundle};
    let degrees = [-1, 0, 2, 5];
    let v = split_bundle(&degrees).validated().unwrap();
    for k in -8..4 {
        let direct: usize = degrees.iter().map(|d| (d + k + 1).max(0) as usize).sum();
        assert_eq!(v.h0_twist(k), direct);
        assert_eq!(h0_of_split(&degrees, k), direct);
    }
    let mut sorted = v.splitting_type().unwrap();
    sorted.sort();
    assert_eq!(sorted, degrees.to_vec());
}
