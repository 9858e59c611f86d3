use proptest::prelude::*;
use spectral_spread::majorization::{
    add, asc, desc, entrywise_leq, majorizes, mul, submajorizes, uin_norm, UinDescriptor,
};

fn signed(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n)
}

fn nonneg(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..10.0, n)
}

fn pair(f: fn(usize) -> BoxedStrategy<Vec<f64>>) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..8).prop_flat_map(move |n| (f(n), f(n)))
}

fn signed_boxed(n: usize) -> BoxedStrategy<Vec<f64>> {
    signed(n).boxed()
}

fn nonneg_boxed(n: usize) -> BoxedStrategy<Vec<f64>> {
    nonneg(n).boxed()
}

/// Averaging `y` by a random doubly stochastic matrix gives `x ≺ y`.
fn averaged(y: &[f64], weights: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut x = y.to_vec();
    for (i, &w) in weights.iter().enumerate() {
        let (a, b) = (i % n, (i * 7 + 3) % n);
        let (xa, xb) = (x[a], x[b]);
        x[a] = w * xa + (1.0 - w) * xb;
        x[b] = (1.0 - w) * xa + w * xb;
    }
    x
}

proptest! {
    #[test]
    fn reflexive(x in (1usize..10).prop_flat_map(signed)) {
        prop_assert!(majorizes(&x, &x, None).unwrap().verdict);
        prop_assert!(submajorizes(&x, &x, None).unwrap().verdict);
    }

    #[test]
    fn transitive((y, w) in (1usize..8).prop_flat_map(|n| (nonneg(n), prop::collection::vec(0.0f64..1.0, 0..12)))) {
        let x = averaged(&y, &w);
        let z = averaged(&x, &w);
        prop_assert!(majorizes(&x, &y, None).unwrap().verdict);
        prop_assert!(majorizes(&z, &x, None).unwrap().verdict);
        prop_assert!(majorizes(&z, &y, None).unwrap().verdict);
    }

    #[test]
    fn permutation_does_not_matter(x in (1usize..10).prop_flat_map(signed), y in (1usize..10).prop_flat_map(signed)) {
        if x.len() == y.len() {
            let a = submajorizes(&x, &y, None).unwrap();
            let b = submajorizes(&asc(&x), &desc(&y), None).unwrap();
            prop_assert_eq!(a.verdict, b.verdict);
            prop_assert_eq!(a.margins, b.margins);
        }
    }

    #[test]
    fn sums_of_rearrangements((x, y) in pair(signed_boxed)) {
        let lo = add(&desc(&x), &asc(&y));
        let mid = add(&x, &y);
        let hi = add(&desc(&x), &desc(&y));
        prop_assert!(majorizes(&lo, &mid, None).unwrap().verdict);
        prop_assert!(majorizes(&mid, &hi, None).unwrap().verdict);
    }

    #[test]
    fn products_of_rearrangements((x, y) in pair(nonneg_boxed)) {
        let lo = mul(&desc(&x), &asc(&y));
        let mid = mul(&x, &y);
        let hi = mul(&desc(&x), &desc(&y));
        prop_assert!(submajorizes(&lo, &mid, None).unwrap().verdict);
        prop_assert!(submajorizes(&mid, &hi, None).unwrap().verdict);
    }

    #[test]
    fn entrywise_implies_weak((x, d) in pair(nonneg_boxed)) {
        let y = add(&x, &d);
        prop_assert!(entrywise_leq(&desc(&x), &desc(&y), 1e-12).holds);
        prop_assert!(submajorizes(&x, &y, None).unwrap().verdict);
    }

    #[test]
    fn convex_increasing_preserves_weak((x, d) in pair(nonneg_boxed)) {
        let y = add(&x, &d);
        for f in [|t: f64| t * t, |t: f64| t.exp()] {
            let fx: Vec<f64> = x.iter().map(|&t| f(t)).collect();
            let fy: Vec<f64> = y.iter().map(|&t| f(t)).collect();
            prop_assert!(submajorizes(&fx, &fy, Some(1e-9 * fy.iter().sum::<f64>().max(1.0))).unwrap().verdict);
        }
    }

    #[test]
    fn convex_maps_majorization_to_weak((y, w) in (1usize..8).prop_flat_map(|n| (signed(n), prop::collection::vec(0.0f64..1.0, 0..12)))) {
        let x = averaged(&y, &w);
        let sq = |v: &[f64]| v.iter().map(|t| t * t).collect::<Vec<_>>();
        prop_assert!(submajorizes(&sq(&x), &sq(&y), None).unwrap().verdict);
    }

    #[test]
    fn weak_implies_norm_order((x, d) in pair(nonneg_boxed), w in prop::collection::vec(0.0f64..1.0, 0..12)) {
        let y = add(&x, &d);
        let x = averaged(&x, &w);
        prop_assert!(submajorizes(&x, &y, None).unwrap().verdict);
        for norm in UinDescriptor::standard_family(x.len()) {
            prop_assert!(uin_norm(&x, &norm) <= uin_norm(&y, &norm) + 1e-9 * uin_norm(&y, &norm).max(1.0), "{}", norm.label());
        }
    }
}

#[test]
fn unequal_signed_lengths_are_rejected() {
    assert!(submajorizes(&[1.0, -1.0], &[1.0], None).is_err());
    assert!(submajorizes(&[1.0, 1.0], &[3.0], None).unwrap().verdict);
}
