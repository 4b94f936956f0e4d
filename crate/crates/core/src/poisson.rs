//! The bundle data and the canonical degree -2 Poisson bracket.
//!
//! Generator table: `{p_i, x^j} = delta_i^j`, `{xi^a, xi^b} = g^{ab}`, every
//! other pair of coordinates brackets to zero. On monomials the bracket is
//!
//! ```text
//! {F, G} = (F d/dp_i)(d/dx^i G) - (F d/dx^i)(d/dp_i G) + g^{ab} (F <d/dxi^a)(d/dxi^b> G)
//! ```
//!
//! with right derivatives on `F` and left derivatives on `G`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded_ring::{int, same_bundle, Bundle, GradedElement, Rational, MAX_RANK};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleSpec {
    d: usize,
    r: usize,
    metric: Vec<Vec<Rational>>,
    metric_inverse: Vec<Vec<Rational>>,
}

impl BundleSpec {
    pub fn new(d: usize, r: usize, metric: Vec<Vec<Rational>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidBundle("fibre rank must be at least 1".into()));
        }
        if r > MAX_RANK {
            return Err(Error::InvalidBundle(format!("fibre rank above {MAX_RANK}")));
        }
        if metric.len() != r || metric.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidBundle(format!("metric must be {r}x{r}")));
        }
        for a in 0..r {
            for b in 0..a {
                if metric[a][b] != metric[b][a] {
                    return Err(Error::InvalidBundle(format!(
                        "metric not symmetric at ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        let metric_inverse = invert(&metric)
            .ok_or_else(|| Error::InvalidBundle("metric is degenerate".into()))?;
        Ok(BundleSpec {
            d,
            r,
            metric,
            metric_inverse,
        })
    }

    pub fn identity(d: usize, r: usize) -> Self {
        let metric = (0..r)
            .map(|a| (0..r).map(|b| if a == b { int(1) } else { int(0) }).collect())
            .collect();
        Self::new(d, r, metric).expect("identity metric")
    }

    /// `E = TM + T*M` over a `d`-dimensional base, `r = 2d`, with the split
    /// metric pairing `xi^i` with `xi^{d+i}`.
    pub fn split(d: usize) -> Self {
        let r = 2 * d;
        let metric = (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| if a + d == b || b + d == a { int(1) } else { int(0) })
                    .collect()
            })
            .collect();
        Self::new(d, r, metric).expect("split metric")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn metric(&self) -> &[Vec<Rational>] {
        &self.metric
    }

    pub fn metric_inverse(&self) -> &[Vec<Rational>] {
        &self.metric_inverse
    }

    pub fn into_bundle(self) -> Bundle {
        Arc::new(self)
    }
}

/// Gauss-Jordan inverse over the rationals, first nonzero pivot.
pub(crate) fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// The canonical Poisson bracket `{a, b}`.
pub fn pbracket(a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
    if !same_bundle(a.bundle(), b.bundle()) {
        return Err(Error::BundleMismatch);
    }
    Ok(pbracket_unchecked(a, b))
}

pub(crate) fn pbracket_unchecked(a: &GradedElement, b: &GradedElement) -> GradedElement {
    let bundle = a.bundle();
    let ginv = bundle.metric_inverse();
    let d = bundle.d();
    let mut out = GradedElement::zero(bundle);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let c = ca * cb;
            for i in 0..d {
                if let (Some((ea, da)), Some((eb, db))) = (ma.deriv_p(i), mb.deriv_x(i)) {
                    if let Some((neg, m)) = da.mul(&db) {
                        let v = &c * int((ea * eb) as i64);
                        out.add_term(m, if neg { -v } else { v });
                    }
                }
                if let (Some((ea, da)), Some((eb, db))) = (ma.deriv_x(i), mb.deriv_p(i)) {
                    if let Some((neg, m)) = da.mul(&db) {
                        let v = &c * int((ea * eb) as i64);
                        out.add_term(m, if neg { v } else { -v });
                    }
                }
            }
            for ia in crate::graded_ring::bits(ma.xi_mask()) {
                for ib in crate::graded_ring::bits(mb.xi_mask()) {
                    let g = &ginv[ia][ib];
                    if g.is_zero() {
                        continue;
                    }
                    let (na, da) = ma.right_deriv_xi(ia).expect("bit set");
                    let (nb, db) = mb.left_deriv_xi(ib).expect("bit set");
                    if let Some((nm, m)) = da.mul(&db) {
                        let v = &c * g;
                        out.add_term(m, if na ^ nb ^ nm { -v } else { v });
                    }
                }
            }
        }
    }
    out
}

impl GradedElement {
    pub fn pbracket(&self, other: &GradedElement) -> Result<GradedElement> {
        pbracket(self, other)
    }
}

/// `X_theta(a) = {theta, a}`.
pub fn hamiltonian(theta: &GradedElement, a: &GradedElement) -> Result<GradedElement> {
    pbracket(theta, a)
}

/// `{e_k, ... {e_2, {e_1, seed}} ...}`.
pub(crate) fn iterated(seed: &GradedElement, args: &[GradedElement]) -> GradedElement {
    args.iter()
        .fold(seed.clone(), |acc, e| pbracket_unchecked(e, &acc))
}

/// Anchor and Dorfman bracket of a degree-3 generator, as derived brackets.
#[derive(Debug, Clone)]
pub struct CourantData {
    theta: GradedElement,
}

/// Derived anchor `rho(e) f = {f, {e, theta}}` and Dorfman bracket
/// `[e, e'] = {e', {e, theta}}` of a degree-3 `theta`.
pub fn derived_courant(theta: &GradedElement) -> Result<CourantData> {
    if !theta.is_homogeneous_of(3) {
        return match theta.homogeneous_degree() {
            Some(got) => Err(Error::WrongDegree { expected: 3, got }),
            None => Err(Error::NotHomogeneous(theta.to_string())),
        };
    }
    Ok(CourantData {
        theta: theta.clone(),
    })
}

impl CourantData {
    pub fn theta(&self) -> &GradedElement {
        &self.theta
    }

    pub fn bundle(&self) -> &Bundle {
        self.theta.bundle()
    }

    pub fn anchor(&self, e: &GradedElement, f: &GradedElement) -> Result<GradedElement> {
        check_section(0, e)?;
        if !f.is_function() {
            return Err(Error::WrongDegree {
                expected: 0,
                got: f.homogeneous_degree().unwrap_or(0),
            });
        }
        pbracket(f, &pbracket(e, &self.theta)?)
    }

    /// `rho(xi^a) f` for a basis section (1-based index).
    pub fn anchor_basis(&self, a: usize, f: &GradedElement) -> Result<GradedElement> {
        let e = GradedElement::coord(self.bundle(), crate::graded_ring::Coord::Xi(a))?;
        self.anchor(&e, f)
    }

    pub fn dorfman(&self, e1: &GradedElement, e2: &GradedElement) -> Result<GradedElement> {
        check_section(0, e1)?;
        check_section(1, e2)?;
        pbracket(e2, &pbracket(e1, &self.theta)?)
    }

    pub fn pairing(&self, e1: &GradedElement, e2: &GradedElement) -> Result<GradedElement> {
        pbracket(e1, e2)
    }
}

pub(crate) fn check_section(index: usize, e: &GradedElement) -> Result<()> {
    if e.is_section() {
        Ok(())
    } else {
        Err(Error::NotSection {
            index,
            element: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_ring::rat;

    fn b(d: usize, r: usize) -> Bundle {
        BundleSpec::identity(d, r).into()
    }

    #[test]
    fn functions_and_sections_bracket_as_stated() {
        let b = b(2, 2);
        let f = &GradedElement::x(&b, 1) * &GradedElement::x(&b, 2);
        let g = GradedElement::x(&b, 2);
        let e = &GradedElement::x(&b, 1) * &GradedElement::xi(&b, 2);
        assert!(pbracket(&f, &g).unwrap().is_zero());
        assert!(pbracket(&f, &e).unwrap().is_zero());
        let xi1 = GradedElement::xi(&b, 1);
        assert_eq!(pbracket(&xi1, &xi1).unwrap().to_string(), "1");
    }

    #[test]
    fn p_acts_as_partial_derivative() {
        let b = b(1, 1);
        let x = GradedElement::x(&b, 1);
        let p = GradedElement::p(&b, 1);
        assert_eq!(pbracket(&p, &(&x * &x)).unwrap().to_string(), "2*x1");
        assert_eq!(pbracket(&x, &p).unwrap().to_string(), "-1");
    }

    #[test]
    fn metric_inverse_enters_pairing() {
        let metric = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let b: Bundle = BundleSpec::new(0, 2, metric).unwrap().into();
        // inverse of [[2,1],[1,1]] is [[1,-1],[-1,2]]
        let (x1, x2) = (GradedElement::xi(&b, 1), GradedElement::xi(&b, 2));
        assert_eq!(pbracket(&x1, &x2).unwrap().to_string(), "-1");
        assert_eq!(pbracket(&x2, &x2).unwrap().to_string(), "2");
        assert_eq!(b.metric_inverse()[0][0], rat(1, 1));
    }

    #[test]
    fn degenerate_or_asymmetric_metric_is_rejected() {
        let sing = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert!(matches!(BundleSpec::new(0, 2, sing), Err(Error::InvalidBundle(_))));
        let asym = vec![vec![int(1), int(2)], vec![int(0), int(1)]];
        assert!(matches!(BundleSpec::new(0, 2, asym), Err(Error::InvalidBundle(_))));
        assert!(matches!(BundleSpec::new(1, 0, vec![]), Err(Error::InvalidBundle(_))));
    }

    #[test]
    fn hamiltonian_of_standard_generator_on_x() {
        let b: Bundle = BundleSpec::split(2).into();
        let theta = &(&GradedElement::xi(&b, 1) * &GradedElement::p(&b, 1))
            + &(&GradedElement::xi(&b, 2) * &GradedElement::p(&b, 2));
        let out = hamiltonian(&theta, &GradedElement::x(&b, 1)).unwrap();
        assert_eq!(out, GradedElement::xi(&b, 1));
        assert!(hamiltonian(&theta, &GradedElement::one(&b)).unwrap().is_zero());
    }

    #[test]
    fn degree_four_hamiltonian_on_function_has_degree_two() {
        let b = b(1, 2);
        let theta = &GradedElement::p(&b, 1) * &(&GradedElement::xi(&b, 1) * &GradedElement::xi(&b, 2));
        let out = hamiltonian(&theta, &(&GradedElement::x(&b, 1) * &GradedElement::x(&b, 1))).unwrap();
        assert_eq!(out.homogeneous_degree(), Some(2));
    }

    #[test]
    fn derived_courant_requires_degree_three() {
        let b = b(1, 2);
        assert!(matches!(
            derived_courant(&GradedElement::xi(&b, 1)),
            Err(Error::WrongDegree { expected: 3, got: 1 })
        ));
        let mixed = &GradedElement::xi(&b, 1) + &GradedElement::p(&b, 1);
        assert!(matches!(derived_courant(&mixed), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn anchor_of_p_free_generator_vanishes() {
        let b = b(2, 3);
        let theta = &(&GradedElement::xi(&b, 1) * &GradedElement::xi(&b, 2)) * &GradedElement::xi(&b, 3);
        let theta = &theta * &GradedElement::x(&b, 1);
        let data = derived_courant(&theta).unwrap();
        for a in 1..=3 {
            for i in 1..=2 {
                assert!(data.anchor_basis(a, &GradedElement::x(&b, i)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn dorfman_of_constant_sections_vanishes_for_standard_generator() {
        let b: Bundle = BundleSpec::split(2).into();
        let theta = &(&GradedElement::xi(&b, 1) * &GradedElement::p(&b, 1))
            + &(&GradedElement::xi(&b, 2) * &GradedElement::p(&b, 2));
        let data = derived_courant(&theta).unwrap();
        for a in 1..=4 {
            for c in 1..=4 {
                let v = data
                    .dorfman(&GradedElement::xi(&b, a), &GradedElement::xi(&b, c))
                    .unwrap();
                assert!(v.is_zero());
            }
        }
    }
}
