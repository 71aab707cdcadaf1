mod common;

use clifwave::field::{GridSpec, MultivectorField};
use clifwave::signals::{band_limited_signal, grid_center};
use clifwave::simgroup::{l2g_norm_squared, GroupGrid, GroupPoint, Rotation, RotationSampling};
use clifwave::verify::{cross_path_error, rotation_covariance_error, translation_covariance_error};
use clifwave::wavelet::{
    admissibility, inverse_transform, reproducing_kernel, transform_at, transform_direct, transform_spectral,
    MotherWavelet, WaveletCoefficients,
};
use clifwave::{AlgebraDim, Error, Multivector};
use common::{random_field, rng};

const D2: AlgebraDim = AlgebraDim::TWO;
const D3: AlgebraDim = AlgebraDim::THREE;

fn gabor2(amplitude: Multivector) -> MotherWavelet {
    MotherWavelet::gabor(D2, &[1.0, 1.0], &[3.0, 0.0], amplitude).unwrap()
}

fn gabor3(amplitude: Multivector) -> MotherWavelet {
    MotherWavelet::gabor(D3, &[1.0, 1.0, 1.0], &[2.0, 0.0, 0.0], amplitude).unwrap()
}

fn small3() -> (GridSpec, GroupGrid) {
    let grid = GridSpec::cube(3, 16.0, 20).unwrap();
    let group = GroupGrid::new(D3, (0.8, 1.2, 2), RotationSampling::Octahedral, grid.clone()).unwrap();
    (grid, group)
}

#[test]
fn direct_and_spectral_agree_n2_and_n3() {
    let mut r = rng(10);
    let grid = GridSpec::cube(2, 12.0, 16).unwrap();
    let group = GroupGrid::new(D2, (0.5, 2.0, 4), RotationSampling::Uniform { count: 4 }, grid.clone()).unwrap();
    let f = random_field(&mut r, D2, &grid);
    for psi in [gabor2(Multivector::one(D2)), gabor2(Multivector::blade(D2, "e1").unwrap())] {
        assert!(cross_path_error(&psi, &f, &group).unwrap() < 1e-8);
    }

    let grid = GridSpec::cube(3, 8.0, 8).unwrap();
    let group = GroupGrid::new(D3, (0.8, 1.6, 2), RotationSampling::SuperFibonacci { count: 3 }, grid.clone()).unwrap();
    let f = random_field(&mut r, D3, &grid);
    let psi = gabor3(Multivector::parse(D3, "1 + 0.5e1 + 0.2e123").unwrap());
    assert!(cross_path_error(&psi, &f, &group).unwrap() < 1e-8);
}

#[test]
fn single_point_matches_grid() {
    let mut r = rng(11);
    let grid = GridSpec::cube(2, 12.0, 16).unwrap();
    let group = GroupGrid::new(D2, (0.5, 2.0, 2), RotationSampling::Uniform { count: 3 }, grid.clone()).unwrap();
    let psi = gabor2(Multivector::one(D2));
    let f = random_field(&mut r, D2, &grid);
    let coeffs = transform_direct(&psi, &f, &group).unwrap();
    for node in [0, 17, group.len() / 2, group.len() - 1] {
        let v = transform_at(&psi, &f, &group.point(node)).unwrap();
        assert!((v - coeffs.get(node)).max_abs() < 1e-12);
    }
}

#[test]
fn zero_in_zero_out() {
    let grid = GridSpec::cube(2, 24.0, 64).unwrap();
    let group = GroupGrid::new(D2, (0.5, 2.0, 3), RotationSampling::Uniform { count: 4 }, grid.clone()).unwrap();
    let psi = gabor2(Multivector::one(D2));
    let c = admissibility(&psi, &grid).unwrap();
    let zero = MultivectorField::zeros(D2, grid.clone()).unwrap();
    assert_eq!(transform_spectral(&psi, &zero, &group).unwrap().max_abs(), 0.0);
    assert_eq!(transform_direct(&psi, &zero, &group).unwrap().max_abs(), 0.0);
    let back = inverse_transform(&WaveletCoefficients::zeros(group), &psi, &c).unwrap();
    assert_eq!(back.max_abs(), 0.0);
}

#[test]
fn translation_covariance_n2() {
    let grid = GridSpec::cube(2, 24.0, 32).unwrap();
    let group = GroupGrid::new(D2, (0.75, 2.0, 3), RotationSampling::Uniform { count: 4 }, grid.clone()).unwrap();
    let f = band_limited_signal(D2, &grid, (1.3, 1.7), 3).unwrap();
    let err = translation_covariance_error(&gabor2(Multivector::one(D2)), &f, &group, &[5, -3]).unwrap();
    assert!(err < 1e-8, "{err:e}");
}

#[test]
fn octahedral_rotation_covariance_n3() {
    let (grid, group) = small3();
    let f = band_limited_signal(D3, &grid, (1.2, 1.8), 4).unwrap();
    let psi = gabor3(Multivector::one(D3));
    for axis in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] {
        let r0 = Rotation::axis_angle(axis, std::f64::consts::FRAC_PI_2).unwrap();
        let err = rotation_covariance_error(&psi, &f, &group, &r0, &[0, 1]).unwrap();
        assert!(err < 1e-8, "{axis:?}: {err:e}");
    }
}

#[test]
fn n3_vector_amplitude_gives_vector_constant() {
    let grid = GridSpec::cube(3, 12.0, 24).unwrap();
    let psi = gabor3(Multivector::parse(D3, "1 + 0.5e1").unwrap());
    let c = admissibility(&psi, &grid).unwrap();
    assert!(!c.is_scalar());
    assert!(c.value.vector_part()[0].abs() > 0.1 * c.value.scalar_part());
    assert!(c.value.filter_grades(|k| k > 1).max_abs() < 1e-10 * c.value.max_abs());
    assert!((c.value * c.inverse - Multivector::one(D3)).max_abs() < 1e-12);
    assert_eq!(c.value, c.value.reverse());
}

/// With `C' = (-ε)^n C` the norm relation for n = 3 would predict a negative
/// squared norm; `C' = C` has the right sign and magnitude order.
#[test]
fn n3_sign_of_c_prime() {
    let (grid, group) = small3();
    let psi = gabor3(Multivector::one(D3));
    let c = admissibility(&psi, &grid).unwrap();
    assert_eq!(c.c_prime, c.value);
    let f = band_limited_signal(D3, &grid, (1.2, 1.8), 5).unwrap();
    let lhs = l2g_norm_squared(&transform_spectral(&psi, &f, &group).unwrap());
    let flipped = c.value * (-psi.epsilon()).powi(3);
    let rhs_flipped = f.scale_right(&flipped).inner_product(&f).unwrap().scalar_part();
    let rhs = f.scale_right(&c.c_prime).inner_product(&f).unwrap().scalar_part();
    assert!(lhs > 0.0);
    assert!(rhs_flipped < 0.0);
    assert!(rhs > 0.0);
}

#[test]
fn admissibility_scales_quadratically_with_amplitude() {
    let grid = GridSpec::cube(2, 24.0, 64).unwrap();
    let c1 = admissibility(&gabor2(Multivector::one(D2)), &grid).unwrap();
    let c3 = admissibility(&gabor2(Multivector::scalar(D2, 3.0)), &grid).unwrap();
    assert!((c3.value - c1.value * 9.0).max_abs() < 1e-12 * c3.value.max_abs());
}

#[test]
fn plain_gaussian_is_rejected() {
    let grid = GridSpec::cube(2, 24.0, 64).unwrap();
    let gauss = MultivectorField::from_fn(D2, grid.clone(), |x| {
        Multivector::one(D2) * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp()
    })
    .unwrap();
    let psi = MotherWavelet::from_field(gauss).unwrap();
    assert!(matches!(admissibility(&psi, &grid), Err(Error::NotAdmissible(_))));
}

#[test]
fn kernel_symmetry_and_positive_diagonal() {
    let grid = GridSpec::cube(2, 24.0, 64).unwrap();
    let center = grid_center(&grid);
    let psi = gabor2(Multivector::one(D2));
    let c = admissibility(&psi, &grid).unwrap();
    let g = GroupPoint::new(1.0, Rotation::planar(0.3), center).unwrap();
    let h = GroupPoint::new(1.4, Rotation::planar(-0.5), [center[0] + 0.8, center[1] - 0.4, 0.0]).unwrap();
    let kgh = reproducing_kernel(&psi, &c, &g, &h, &grid).unwrap();
    let khg = reproducing_kernel(&psi, &c, &h, &g, &grid).unwrap();
    assert!((khg - kgh.reverse()).max_abs() < 1e-12 * kgh.max_abs());
    let kgg = reproducing_kernel(&psi, &c, &g, &g, &grid).unwrap();
    assert!(kgg.scalar_part() > 0.0);

    // Vector-valued C (n = 3): C K(g'; g) = reverse(K(g; g')) C.
    let grid3 = GridSpec::cube(3, 12.0, 24).unwrap();
    let c3 = grid_center(&grid3);
    let psi3 = gabor3(Multivector::parse(D3, "1 + 0.5e2").unwrap());
    let k = admissibility(&psi3, &grid3).unwrap();
    let g = GroupPoint::new(1.0, Rotation::axis_angle([0.0, 0.0, 1.0], 0.4).unwrap(), c3).unwrap();
    let h = GroupPoint::new(1.2, Rotation::identity(D3), [c3[0] + 0.5, c3[1], c3[2] - 0.5]).unwrap();
    let kgh = reproducing_kernel(&psi3, &k, &g, &h, &grid3).unwrap();
    let khg = reproducing_kernel(&psi3, &k, &h, &g, &grid3).unwrap();
    let lhs = k.value * khg;
    let rhs = kgh.reverse() * k.value;
    assert!((lhs - rhs).max_abs() < 1e-12 * lhs.max_abs());
}
