//! Shared generators for integration tests.

#![allow(dead_code)]

use kwalg::graded_ring::{int, rat};
use kwalg::kw::{generating_family, MultiBracket, PreCourant};
use kwalg::{Bundle, BundleSpec, GradedElement, Monomial};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bundles with identity, split and non-diagonal metrics.
pub fn bundles() -> Vec<Bundle> {
    let skew = BundleSpec::new(
        2,
        3,
        vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), rat(1, 3), int(0)],
            vec![int(0), int(0), int(-1)],
        ],
    )
    .unwrap();
    vec![
        BundleSpec::identity(2, 3).into_bundle(),
        BundleSpec::split(1).into_bundle(),
        skew.into_bundle(),
    ]
}

fn random_exponents(rng: &mut ChaCha8Rng, d: usize, total: u32) -> Vec<u32> {
    let mut e = vec![0; d];
    if d > 0 {
        for _ in 0..total {
            e[rng.gen_range(0..d)] += 1;
        }
    }
    e
}

/// A random homogeneous element of `degree` with x-degree at most `max_x`
/// and p-degree at most `max_p`.
pub fn random_element(
    rng: &mut ChaCha8Rng,
    bundle: &Bundle,
    degree: usize,
    max_x: u32,
    max_p: u32,
    terms: usize,
) -> GradedElement {
    let (d, r) = (bundle.d(), bundle.r());
    let mut out = GradedElement::zero(bundle);
    for _ in 0..terms {
        let top = if d == 0 { 0 } else { max_p.min(degree as u32 / 2) };
        let pdeg = rng.gen_range(0..=top);
        let k = degree - 2 * pdeg as usize;
        if k > r {
            continue;
        }
        let mut odd: Vec<usize> = (0..r).collect();
        odd.shuffle(rng);
        odd.truncate(k);
        let xdeg = if d == 0 { 0 } else { rng.gen_range(0..=max_x) };
        let (neg, m) = Monomial::from_parts(
            random_exponents(rng, d, xdeg),
            &odd,
            random_exponents(rng, d, pdeg),
        )
        .unwrap();
        let c = int(rng.gen_range(-3..=3));
        out.add_term(m, if neg { -c } else { c });
    }
    out
}

pub fn random_bracket(rng: &mut ChaCha8Rng, bundle: &Bundle, degree: usize) -> MultiBracket {
    MultiBracket::new(random_element(rng, bundle, degree, 1, 1, 3), degree).unwrap()
}

/// A nonzero random section.
pub fn random_section(rng: &mut ChaCha8Rng, bundle: &Bundle) -> GradedElement {
    loop {
        let e = random_element(rng, bundle, 1, 1, 0, 2);
        if !e.is_zero() {
            return e;
        }
    }
}

/// Argument tuples for comparing two brackets: random family tuples.
pub fn sample_args(rng: &mut ChaCha8Rng, bundle: &Bundle, len: usize, count: usize) -> Vec<Vec<GradedElement>> {
    let family = generating_family(bundle, 1);
    (0..count)
        .map(|_| (0..len).map(|_| family.choose(rng).unwrap().clone()).collect())
        .collect()
}

/// Asserts that `eval`, `tilde` and `symbol` agree on sampled arguments.
pub fn assert_same_bracket(
    rng: &mut ChaCha8Rng,
    a: &dyn PreCourant,
    b: &dyn PreCourant,
    what: &str,
) {
    assert_eq!(a.degree(), b.degree(), "{what}: degree");
    let n = a.degree();
    let bundle = a.bundle().clone();
    for args in sample_args(rng, &bundle, n.saturating_sub(1), 12) {
        assert_eq!(a.eval(&args).unwrap(), b.eval(&args).unwrap(), "{what}: eval at {args:?}");
    }
    for args in sample_args(rng, &bundle, n, 12) {
        assert_eq!(a.tilde(&args).unwrap(), b.tilde(&args).unwrap(), "{what}: tilde at {args:?}");
    }
    for args in sample_args(rng, &bundle, n.saturating_sub(2), 8) {
        assert_eq!(a.symbol(&args).unwrap(), b.symbol(&args).unwrap(), "{what}: symbol at {args:?}");
    }
}

/// A random multivector whose terms all have exterior degree in `1..=max_deg`.
pub fn random_multivector(rng: &mut ChaCha8Rng, bundle: &Bundle, max_deg: usize) -> kwalg::higher::Multivector {
    loop {
        let mut v = GradedElement::zero(bundle);
        for _ in 0..rng.gen_range(1..=2) {
            let k = rng.gen_range(1..=max_deg.min(bundle.r()));
            v += random_element(rng, bundle, k, 1, 0, 1);
        }
        if !v.is_zero() {
            return kwalg::higher::Multivector::new(v).unwrap();
        }
    }
}

/// A random homogeneous multivector of exterior degree `k`.
pub fn random_homogeneous_multivector(rng: &mut ChaCha8Rng, bundle: &Bundle, k: usize) -> kwalg::higher::Multivector {
    kwalg::higher::Multivector::new(random_element(rng, bundle, k, 1, 0, 3)).unwrap()
}

/// A random homogeneous multivector of exterior degree `k` with constant coefficients.
pub fn constant_multivector(rng: &mut ChaCha8Rng, bundle: &Bundle, k: usize) -> kwalg::higher::Multivector {
    kwalg::higher::Multivector::new(random_element(rng, bundle, k, 0, 0, 3)).unwrap()
}

/// A random bracket without momenta, so with vanishing symbol.
pub fn tensorial_bracket(rng: &mut ChaCha8Rng, bundle: &Bundle, degree: usize) -> MultiBracket {
    MultiBracket::new(random_element(rng, bundle, degree, 1, 0, 3), degree).unwrap()
}
