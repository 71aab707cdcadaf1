use clifwave::cft::{cft_forward, cft_inverse};
use clifwave::field::{GridSpec, MultivectorField};
use clifwave::io::{decode, encode, Payload};
use clifwave::simgroup::{GroupGrid, Rotation, RotationSampling};
use clifwave::wavelet::{transform_spectral, MotherWavelet};
use clifwave::{AlgebraDim, Multivector};
use proptest::prelude::*;

fn dim_strategy() -> impl Strategy<Value = AlgebraDim> {
    prop_oneof![Just(AlgebraDim::TWO), Just(AlgebraDim::THREE)]
}

fn mv(dim: AlgebraDim) -> impl Strategy<Value = Multivector> {
    prop::collection::vec(-10.0..10.0f64, dim.blade_count())
        .prop_map(move |c| Multivector::from_coeffs(dim, &c).unwrap())
}

fn mv_pair() -> impl Strategy<Value = (Multivector, Multivector)> {
    dim_strategy().prop_flat_map(|d| (mv(d), mv(d)))
}

fn mv_triple() -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    dim_strategy().prop_flat_map(|d| (mv(d), mv(d), mv(d)))
}

fn close(a: &Multivector, b: &Multivector, tol: f64) -> bool {
    (*a - *b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

fn field(dim: AlgebraDim, samples: usize) -> impl Strategy<Value = MultivectorField> {
    let n = dim.n();
    let count = samples.pow(n as u32) * dim.blade_count();
    prop::collection::vec(-1.0..1.0f64, count).prop_map(move |c| {
        let grid = GridSpec::new(vec![-1.0; n], vec![2.0; n], vec![samples; n]).unwrap();
        let bc = dim.blade_count();
        let data = c.chunks(bc).map(|ch| Multivector::from_coeffs(dim, ch).unwrap()).collect();
        MultivectorField::new(dim, grid, data).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative_and_distributive((a, b, c) in mv_triple()) {
        prop_assert!(close(&((a * b) * c), &(a * (b * c)), 1e-12));
        prop_assert!(close(&(a * (b + c)), &(a * b + a * c), 1e-12));
        prop_assert!(close(&((a + b) * c), &(a * c + b * c), 1e-12));
    }

    #[test]
    fn reverse_is_an_involutive_anti_automorphism((a, b) in mv_pair()) {
        prop_assert_eq!(a.reverse().reverse(), a);
        prop_assert!(close(&(a * b).reverse(), &(b.reverse() * a.reverse()), 1e-12));
    }

    #[test]
    fn scalar_product_is_coefficient_dot((a, b) in mv_pair()) {
        let dot: f64 = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y).sum();
        let sp = a.scalar_product(&b).unwrap();
        prop_assert!((sp - dot).abs() <= 1e-12 * (1.0 + dot.abs()));
        prop_assert!((sp - (a * b.reverse()).scalar_part()).abs() <= 1e-12 * (1.0 + dot.abs()));
        prop_assert!((a.modulus_squared() - a.scalar_product(&a).unwrap()).abs() <= 1e-12 * (1.0 + dot.abs()));
    }

    #[test]
    fn pseudoscalar_is_an_isometry(a in dim_strategy().prop_flat_map(mv), lambda in -10.0..10.0f64) {
        let dim = a.dim();
        let i = Multivector::pseudoscalar(dim);
        prop_assert!(((i * a).modulus() - a.modulus()).abs() <= 1e-12 * (1.0 + a.modulus()));
        prop_assert!((Multivector::exp_pseudoscalar(dim, lambda).modulus() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn n2_exponential_commutes_with_even_and_conjugates_odd(a in mv(AlgebraDim::TWO), lambda in -10.0..10.0f64) {
        let d = AlgebraDim::TWO;
        let e = Multivector::exp_pseudoscalar(d, lambda);
        let e_neg = Multivector::exp_pseudoscalar(d, -lambda);
        prop_assert!(close(&(e * a.even()), &(a.even() * e), 1e-12));
        prop_assert!(close(&(e * a.odd()), &(a.odd() * e_neg), 1e-12));
    }

    #[test]
    fn grade01_inverse_is_two_sided(d in dim_strategy(), s in -5.0..5.0f64, v in prop::array::uniform3(-5.0..5.0f64)) {
        let m = Multivector::scalar(d, s) + Multivector::vector(d, &v[..d.n()]);
        let den = s * s - v[..d.n()].iter().map(|x| x * x).sum::<f64>();
        prop_assume!(den.abs() > 1e-3);
        let inv = m.invert_grade01().unwrap();
        prop_assert!(close(&(m * inv), &Multivector::one(d), 1e-10));
        prop_assert!(close(&(inv * m), &Multivector::one(d), 1e-10));
    }

    #[test]
    fn cft_is_left_linear_and_invertible(
        (f, g, lambda) in dim_strategy().prop_flat_map(|d| (field(d, 4), field(d, 4), mv(d)))
    ) {
        let combo = f.scale_left(&lambda).add(&g).unwrap();
        let lhs = cft_forward(&combo).unwrap();
        let rhs_f = cft_forward(&f).unwrap();
        let rhs_g = cft_forward(&g).unwrap();
        for ((l, a), b) in lhs.data().iter().zip(rhs_f.data()).zip(rhs_g.data()) {
            prop_assert!(close(l, &(lambda * *a + *b), 1e-11));
        }
        let back = cft_inverse(&rhs_f).unwrap();
        prop_assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn so3_compose_is_matrix_product(q1 in prop::array::uniform4(-1.0..1.0f64), q2 in prop::array::uniform4(-1.0..1.0f64)) {
        prop_assume!(q1.iter().map(|x| x * x).sum::<f64>() > 1e-2);
        prop_assume!(q2.iter().map(|x| x * x).sum::<f64>() > 1e-2);
        let r1 = Rotation::from_quaternion(q1).unwrap();
        let r2 = Rotation::from_quaternion(q2).unwrap();
        let m1 = r1.matrix();
        let m2 = r2.matrix();
        let m = r1.compose(&r2).unwrap().matrix();
        for i in 0..3 {
            for j in 0..3 {
                let want: f64 = (0..3).map(|k| m1[i][k] * m2[k][j]).sum();
                prop_assert!((m[i][j] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn so2_compose_adds_angles(a in -7.0..7.0f64, b in -7.0..7.0f64) {
        let r = Rotation::planar(a).compose(&Rotation::planar(b)).unwrap();
        prop_assert!(r.approx_eq(&Rotation::planar(a + b), 1e-12));
    }

    #[test]
    fn clwf_round_trip(f in dim_strategy().prop_flat_map(|d| field(d, 3)), tag in "[a-z]{0,12}") {
        let meta = serde_json::json!({ "tag": tag });
        let bytes = encode(&Payload::Field(f.clone()), &meta).unwrap();
        let back = decode(&bytes).unwrap();
        prop_assert_eq!(back.payload, Payload::Field(f));
        prop_assert_eq!(back.meta, meta);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn transform_is_left_linear(
        (f, g, l1, l2) in field(AlgebraDim::TWO, 8).prop_flat_map(|f| {
            let d = AlgebraDim::TWO;
            (Just(f), field(d, 8), mv(d), mv(d))
        })
    ) {
        let psi = MotherWavelet::gabor(AlgebraDim::TWO, &[0.5, 0.5], &[3.0, 0.0], Multivector::one(AlgebraDim::TWO)).unwrap();
        let grid = GroupGrid::new(AlgebraDim::TWO, (0.5, 1.0, 2), RotationSampling::Uniform { count: 2 }, f.grid().clone()).unwrap();
        let combo = f.scale_left(&l1).add(&g.scale_left(&l2)).unwrap();
        let lhs = transform_spectral(&psi, &combo, &grid).unwrap();
        let tf = transform_spectral(&psi, &f, &grid).unwrap();
        let tg = transform_spectral(&psi, &g, &grid).unwrap();
        let rhs = tf.scale_left(&l1).add(&tg.scale_left(&l2)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-11 * (1.0 + lhs.max_abs()));
    }
}
