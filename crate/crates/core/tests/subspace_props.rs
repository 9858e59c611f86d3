use proptest::prelude::*;
use spectral_spread::ensemble::{gaussian_hermitian, haar_isometry, haar_unitary, stream_rng, TrialRng};
use spectral_spread::linalg::{eigenvalues, max_abs_entry, unitary_exp, CMatrix, HermitianMatrix};
use spectral_spread::subspaces::{
    angle_spread_check, angle_triangle_check, direct_rotation, dk_minimality_check, principal_angles,
    principal_angles_cos_form, principal_angles_sin_form, rotation_bound_check, Isometry,
};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// `||X|| = t * pi/2` with `t` in `[0.05, 0.95]`.
fn generator(n: usize, t: f64, rng: &mut TrialRng) -> HermitianMatrix {
    let g = gaussian_hermitian(n, 1.0, rng);
    g.scale_by(t * std::f64::consts::FRAC_PI_2 / g.spectral_norm().max(1e-300))
}

fn setup() -> impl Strategy<Value = (u64, usize, usize)> {
    (1usize..8).prop_flat_map(|n| (any::<u64>(), Just(n), 1..=n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn angles_symmetric_and_unitarily_invariant((seed, n, k) in setup()) {
        let mut rng = stream_rng(seed, 0);
        let s = haar_isometry(n, k, &mut rng);
        let t = haar_isometry(n, k, &mut rng);
        let st = principal_angles(&s, &t).unwrap();
        prop_assert!(st.values().iter().all(|&a| (0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&a)));
        prop_assert!(close(st.values(), principal_angles(&t, &s).unwrap().values(), 1e-8));
        let w = haar_unitary(n, &mut rng);
        let moved = principal_angles(&s.moved_by(&w).unwrap(), &t.moved_by(&w).unwrap()).unwrap();
        prop_assert!(close(st.values(), moved.values(), 1e-8));
    }

    #[test]
    fn cos_and_sin_forms_agree((seed, n, k) in setup()) {
        let mut rng = stream_rng(seed, 0);
        let s = haar_isometry(n, k, &mut rng);
        let t = haar_isometry(n, k, &mut rng);
        // both forms lose accuracy near one end of [0, pi/2]
        prop_assert!(close(&principal_angles_cos_form(&s, &t).unwrap(), &principal_angles_sin_form(&s, &t).unwrap(), 1e-6));
    }

    #[test]
    fn direct_rotation_maps_onto_target((seed, n, k) in setup(), t in 0.05f64..0.95) {
        let mut rng = stream_rng(seed, 0);
        let s = haar_isometry(n, k, &mut rng);
        let x = generator(n, t, &mut rng);
        let target = s.moved_by(&unitary_exp(&x).unwrap()).unwrap();
        let rot = direct_rotation(&s, &target).unwrap();
        let image = &rot.u * s.columns();
        let proj = target.columns() * target.columns().adjoint();
        prop_assert!(max_abs_entry(&(&image - &proj * &image)) <= 1e-8);
        let exp = unitary_exp(&rot.z).unwrap();
        prop_assert!(max_abs_entry(&(exp - &rot.u)) <= 1e-8);
        // the logarithm has eigenvalues ±θ and zeros
        let angles = principal_angles(&s, &target).unwrap();
        let lz = eigenvalues(&rot.z).unwrap();
        let positive: Vec<f64> = lz.values().iter().copied().filter(|v| *v > 1e-9).collect();
        let nonzero: Vec<f64> = angles.values().iter().copied().filter(|v| *v > 1e-9).collect();
        prop_assert!(close(&positive, &nonzero, 1e-7), "{:?} vs {:?}", positive, nonzero);
    }

    #[test]
    fn angle_and_rotation_bounds((seed, n, k) in setup(), t in 0.05f64..0.95) {
        let mut rng = stream_rng(seed, 0);
        let s = haar_isometry(n, k, &mut rng);
        let x = generator(n, t, &mut rng);
        prop_assert!(angle_spread_check(&s, &x).unwrap().verdict);
        let out = rotation_bound_check(&s, &x).unwrap();
        prop_assert!(out.passed(), "{:?}", out.failures());
    }

    #[test]
    fn direct_rotation_is_minimal((seed, n, k) in setup(), t in 0.05f64..0.95) {
        let mut rng = stream_rng(seed, 0);
        let s = haar_isometry(n, k, &mut rng);
        let target = s.moved_by(&unitary_exp(&generator(n, t, &mut rng)).unwrap()).unwrap();
        let out = dk_minimality_check(&s, &target, 6, &mut rng).unwrap();
        prop_assert!(out.passed(), "{:?}", out);
    }

    #[test]
    fn angle_triangle((seed, n, k) in setup()) {
        let mut rng = stream_rng(seed, 0);
        let s1 = haar_isometry(n, k, &mut rng);
        let s2 = haar_isometry(n, k, &mut rng);
        let s3 = haar_isometry(n, k, &mut rng);
        prop_assert!(angle_triangle_check(&s1, &s2, &s3).unwrap().verdict);
    }
}

#[test]
fn spanning_set_orthonormalizes() {
    let m = CMatrix::from_fn(4, 2, |i, j| spectral_spread::linalg::c((i + j) as f64, (i * j) as f64));
    assert!(Isometry::new(m.clone()).is_err());
    let s = Isometry::orthonormalize(&m).unwrap();
    assert_eq!(s.rank(), 2);
    assert!(spectral_spread::linalg::orthonormality_defect(s.columns()) <= 1e-12);
}
