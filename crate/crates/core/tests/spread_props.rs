use proptest::prelude::*;
use spectral_spread::ensemble::{gaussian_hermitian, haar_unitary, random_psd, stream_rng};
use spectral_spread::linalg::{direct_sum, eigenvalues, hat, svd_values, unitary_exp, CMatrix, HermitianMatrix};
use spectral_spread::majorization::{entrywise_leq, majorizes, pinch, submajorizes, UinDescriptor};
use spectral_spread::spread::{
    centered_singular_check, half_spread_vs_singular_check, orbit_diameter, orbit_distance, spread,
    spread_kyfan_witness,
};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn instance() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 1usize..9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_similarity_keeps_spectrum((seed, n) in instance()) {
        let mut rng = stream_rng(seed, 0);
        let a = gaussian_hermitian(n, 2.0, &mut rng);
        let u = haar_unitary(n, &mut rng);
        let b = a.congruence(&u);
        let tol = 1e-9 * a.tol_scale();
        prop_assert!(close(eigenvalues(&a).unwrap().values(), eigenvalues(&b).unwrap().values(), tol));
        prop_assert!(close(&spread(&a).unwrap().full, &spread(&b).unwrap().full, tol));
    }

    #[test]
    fn translation_invariance((seed, n) in instance(), t in -50.0f64..50.0) {
        let a = gaussian_hermitian(n, 1.0, &mut stream_rng(seed, 0));
        let shifted = a.shifted(t);
        prop_assert!(close(&spread(&a).unwrap().full, &spread(&shifted).unwrap().full, 1e-10 * shifted.tol_scale()));
    }

    #[test]
    fn antisymmetric_and_nonnegative((seed, n) in instance()) {
        let sv = spread(&gaussian_hermitian(n, 1.0, &mut stream_rng(seed, 0))).unwrap();
        for i in 0..n {
            prop_assert!((sv.full[i] + sv.full[n - 1 - i]).abs() <= 1e-12);
        }
        prop_assert_eq!(sv.plus.len(), n / 2);
        prop_assert!(sv.plus.iter().all(|&v| v >= 0.0));
        prop_assert!(sv.plus.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn spread_against_singular_values((seed, n) in instance()) {
        let mut rng = stream_rng(seed, 0);
        let a = gaussian_hermitian(n, 1.0, &mut rng);
        let s: Vec<f64> = svd_values(a.matrix()).0.iter().map(|v| 2.0 * v).collect();
        prop_assert!(entrywise_leq(&spread(&a).unwrap().plus, &s, 1e-9 * a.tol_scale()).holds);
        let p = random_psd(n, 1.0, &mut rng);
        let sv = spread(&p).unwrap();
        let l = eigenvalues(&p).unwrap();
        prop_assert!(entrywise_leq(&sv.full, l.values(), 1e-9 * p.tol_scale()).holds);
    }

    #[test]
    fn pinching_is_monotone((seed, n) in instance(), cut in 0usize..8) {
        let b = gaussian_hermitian(n, 1.0, &mut stream_rng(seed, 0));
        let cut = cut.min(n - 1);
        let blocks: Vec<usize> = if cut == 0 { vec![n] } else { vec![cut, n - cut] };
        let a = pinch(&b, &blocks).unwrap();
        prop_assert!(majorizes(eigenvalues(&a).unwrap().values(), eigenvalues(&b).unwrap().values(), None).unwrap().verdict);
        let (sa, sb) = (spread(&a).unwrap(), spread(&b).unwrap());
        prop_assert!(majorizes(&sa.full, &sb.full, None).unwrap().verdict);
        prop_assert!(submajorizes(&sa.plus, &sb.plus, None).unwrap().verdict);
    }

    #[test]
    fn abs_spread_is_double_spread((seed, n) in instance()) {
        let a = gaussian_hermitian(n, 1.0, &mut stream_rng(seed, 0));
        let mut abs = spread(&a).unwrap().abs_desc();
        let double = spread(&direct_sum(&a, &a)).unwrap().plus;
        prop_assert_eq!(double.len(), n);
        abs.truncate(n);
        prop_assert!(close(&abs, &double, 1e-10 * a.tol_scale()));
    }

    #[test]
    fn kyfan_witness_attains_partial_sums((seed, n) in (any::<u64>(), 2usize..9)) {
        let a = gaussian_hermitian(n, 1.0, &mut stream_rng(seed, 0));
        let plus = spread(&a).unwrap().plus;
        for r in 1..=n / 2 {
            let w = spread_kyfan_witness(&a, r).unwrap();
            let want: f64 = plus[..r].iter().sum();
            prop_assert!((w.value - want).abs() <= 1e-9 * a.tol_scale());
        }
    }

    #[test]
    fn orbit_diameter_bounds_distances((seed, n) in instance()) {
        let mut rng = stream_rng(seed, 0);
        let a = gaussian_hermitian(n, 1.0, &mut rng);
        for norm in UinDescriptor::standard_family(n) {
            let d = orbit_diameter(&a, &norm).unwrap();
            prop_assert!((orbit_distance(&a, &d.witness, &norm) - d.value).abs() <= 1e-8 * a.tol_scale());
            let u = haar_unitary(n, &mut rng);
            prop_assert!(orbit_distance(&a, &u, &norm) <= d.value + 1e-8 * a.tol_scale());
        }
    }

    #[test]
    fn centered_and_half_spread((seed, n) in instance()) {
        let a = gaussian_hermitian(n, 1.0, &mut stream_rng(seed, 0));
        prop_assert!(centered_singular_check(&a).unwrap().verdict);
        let out = half_spread_vs_singular_check(&a).unwrap();
        prop_assert!(out.passed(), "{:?}", out.failures());
    }

    #[test]
    fn hat_spectrum((seed, k, r) in (any::<u64>(), 1usize..5, 1usize..5)) {
        let e = spectral_spread::ensemble::gaussian_matrix(k, r, &mut stream_rng(seed, 0));
        let l = eigenvalues(&hat(&e)).unwrap();
        let m = k.min(r);
        let s = svd_values(&e).0;
        let mut want: Vec<f64> = s[..m].to_vec();
        want.extend(std::iter::repeat_n(0.0, k + r - 2 * m));
        want.extend(s[..m].iter().rev().map(|v| -v));
        prop_assert!(close(l.values(), &want, 1e-10));
    }

    #[test]
    fn singular_values_of_adjoint((seed, k, r) in (any::<u64>(), 1usize..6, 1usize..6)) {
        let b = spectral_spread::ensemble::gaussian_matrix(k, r, &mut stream_rng(seed, 0));
        let (mut s1, mut s2) = (svd_values(&b).0, svd_values(&b.adjoint()).0);
        let m = k.min(r);
        s1.truncate(m);
        s2.truncate(m);
        prop_assert!(close(&s1, &s2, 1e-12 * s1.first().copied().unwrap_or(1.0).max(1.0)));
    }

    #[test]
    fn exponential_inverse((seed, n) in instance()) {
        let x = gaussian_hermitian(n, 3.0, &mut stream_rng(seed, 0));
        let prod = unitary_exp(&x).unwrap() * unitary_exp(&x.scale_by(-1.0)).unwrap();
        let err = spectral_spread::linalg::max_abs_entry(&(prod - CMatrix::identity(n, n)));
        prop_assert!(err <= 1e-10);
    }

    #[test]
    fn direct_sum_spectrum_is_merge((seed, n, m) in (any::<u64>(), 1usize..6, 1usize..6)) {
        let mut rng = stream_rng(seed, 0);
        let a = gaussian_hermitian(n, 1.0, &mut rng);
        let b = gaussian_hermitian(m, 1.0, &mut rng);
        let mut want = eigenvalues(&a).unwrap().0;
        want.extend(eigenvalues(&b).unwrap().0);
        want.sort_by(|x, y| y.total_cmp(x));
        prop_assert!(close(eigenvalues(&direct_sum(&a, &b)).unwrap().values(), &want, 1e-10));
    }
}

#[test]
fn single_entry_has_empty_spread() {
    let sv = spread(&HermitianMatrix::diagonal(&[4.0])).unwrap();
    assert!(sv.plus.is_empty());
    assert_eq!(sv.full, vec![0.0]);
    assert!(centered_singular_check(&HermitianMatrix::diagonal(&[4.0])).unwrap().verdict);
}
