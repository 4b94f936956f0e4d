//! Multi-Courant brackets and the Keller-Waldmann algebra.
//!
//! A bracket of degree `n` is an `(n-1)`-ary map on sections. The canonical
//! representation is its generator `theta` of degree `n` ([`MultiBracket`]);
//! the extensional formulas for products, interior products and brackets
//! are evaluators over the [`PreCourant`] trait so that they can be compared
//! pointwise with the generator route.

mod bracket;
mod interior;
mod table;
mod wedge;

use std::fmt;

use crate::error::{Error, Result};
use crate::graded_ring::{Bundle, GradedElement};
use num_traits::Zero;

use crate::poisson::{check_section, iterated, pbracket_unchecked};

pub use bracket::{combinatorial_bracket, kw_bracket, ClauseBracket, ExplicitBracket};
pub use interior::{
    explicit_bracket_expansion, insertion_terms, interior_product, render_expansion,
    InsertionTerm, InteriorForm, InteriorProduct,
};
pub use table::{generating_family, theta_from_table, BracketTable};
pub use wedge::{kw_wedge, TildeWedge, Wedge};

/// A pre-multi-Courant structure of degree `n`, seen through its values.
///
/// `tilde` takes `n` sections and returns a function, `eval` takes `n - 1`
/// sections and returns a section, `symbol` takes `n - 2` sections. Degree 0
/// is a function (both `eval` and `tilde` take no arguments) and degree 1 is
/// a section (`eval` takes none).
pub trait PreCourant {
    fn bundle(&self) -> &Bundle;

    fn degree(&self) -> usize;

    fn tilde(&self, args: &[GradedElement]) -> Result<GradedElement>;

    fn eval(&self, args: &[GradedElement]) -> Result<GradedElement> {
        eval_from_tilde(self, args)
    }

    fn symbol(&self, args: &[GradedElement]) -> Result<SymbolValue> {
        symbol_from_tilde(self, args)
    }
}

pub(crate) fn eval_arity(degree: usize) -> usize {
    degree.saturating_sub(1)
}

pub(crate) fn symbol_arity(degree: usize) -> usize {
    degree.saturating_sub(2)
}

pub(crate) fn check_args(args: &[GradedElement], expected: usize) -> Result<()> {
    if args.len() != expected {
        return Err(Error::Arity {
            expected,
            got: args.len(),
        });
    }
    for (i, e) in args.iter().enumerate() {
        check_section(i, e)?;
    }
    Ok(())
}

/// Recovers `C(e_1..e_{n-1})` from `C~` by pairing against the basis:
/// `s_a = sum_b g_ab C~(.., xi^b)`.
pub fn eval_from_tilde<C: PreCourant + ?Sized>(c: &C, args: &[GradedElement]) -> Result<GradedElement> {
    let n = c.degree();
    if n == 0 {
        check_args(args, 0)?;
        return c.tilde(&[]);
    }
    check_args(args, n - 1)?;
    let bundle = c.bundle();
    let r = bundle.r();
    let mut buf = args.to_vec();
    buf.push(GradedElement::zero(bundle));
    let mut t = Vec::with_capacity(r);
    for b in 0..r {
        buf[n - 1] = GradedElement::xi(bundle, b + 1);
        t.push(c.tilde(&buf)?);
    }
    let g = bundle.metric();
    let mut out = GradedElement::zero(bundle);
    for a in 0..r {
        let mut s = GradedElement::zero(bundle);
        for b in 0..r {
            if !g[a][b].is_zero() {
                s += t[b].scale(&g[a][b]);
            }
        }
        out += s.mul_unchecked(&GradedElement::xi(bundle, a + 1));
    }
    Ok(out)
}

/// Recovers the symbol from the symmetric part of `C~` in its last two
/// slots: `sigma(..) x^i = C~(.., x^i xi^1, eps) + C~(.., eps, x^i xi^1)` with
/// `eps = sum_b g_1b xi^b`, so that `<x^i xi^1, eps> = x^i`.
pub fn symbol_from_tilde<C: PreCourant + ?Sized>(c: &C, args: &[GradedElement]) -> Result<SymbolValue> {
    let n = c.degree();
    let bundle = c.bundle();
    check_args(args, symbol_arity(n))?;
    if n < 2 {
        return Ok(SymbolValue::zero(bundle));
    }
    let g = bundle.metric();
    let mut eps = GradedElement::zero(bundle);
    for b in 0..bundle.r() {
        if !g[0][b].is_zero() {
            eps += GradedElement::xi(bundle, b + 1).scale(&g[0][b]);
        }
    }
    let mut images = Vec::with_capacity(bundle.d());
    let mut buf = args.to_vec();
    buf.push(GradedElement::zero(bundle));
    buf.push(GradedElement::zero(bundle));
    for i in 0..bundle.d() {
        let e = GradedElement::x(bundle, i + 1).mul_unchecked(&GradedElement::xi(bundle, 1));
        buf[n - 2] = e.clone();
        buf[n - 1] = eps.clone();
        let mut v = c.tilde(&buf)?;
        buf[n - 2] = eps.clone();
        buf[n - 1] = e;
        v += c.tilde(&buf)?;
        images.push(v);
    }
    Ok(SymbolValue::new(bundle, images))
}

/// A derivation of polynomial functions, stored by its images on `x1..xd`.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolValue {
    bundle: Bundle,
    images: Vec<GradedElement>,
}

impl SymbolValue {
    pub fn new(bundle: &Bundle, images: Vec<GradedElement>) -> Self {
        assert_eq!(images.len(), bundle.d(), "one image per base coordinate");
        SymbolValue {
            bundle: bundle.clone(),
            images,
        }
    }

    pub fn zero(bundle: &Bundle) -> Self {
        SymbolValue::new(bundle, vec![GradedElement::zero(bundle); bundle.d()])
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn images(&self) -> &[GradedElement] {
        &self.images
    }

    /// Image of `x_i`, 1-based.
    pub fn image(&self, i: usize) -> &GradedElement {
        &self.images[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(GradedElement::is_zero)
    }

    /// `sigma . f = sum_i (d f / d x^i) * sigma(x^i)`.
    pub fn apply(&self, f: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero(&self.bundle);
        for (i, image) in self.images.iter().enumerate() {
            if image.is_zero() {
                continue;
            }
            let df = f.deriv_x(i);
            if !df.is_zero() {
                out += df.mul_unchecked(image);
            }
        }
        out
    }

    pub fn scale(&self, c: &crate::graded_ring::Rational) -> Self {
        self.map(|v| v.scale(c))
    }

    /// `P * sigma`, multiplying every image on the left.
    pub fn left_mul(&self, p: &GradedElement) -> Self {
        self.map(|v| p.mul_unchecked(v))
    }

    pub fn map(&self, f: impl Fn(&GradedElement) -> GradedElement) -> Self {
        SymbolValue {
            bundle: self.bundle.clone(),
            images: self.images.iter().map(f).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &SymbolValue) {
        for (a, b) in self.images.iter_mut().zip(&other.images) {
            *a += b.clone();
        }
    }

    pub fn sub_assign(&mut self, other: &SymbolValue) {
        for (a, b) in self.images.iter_mut().zip(&other.images) {
            *a -= b.clone();
        }
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.is_empty() {
            return f.write_str("(no base coordinates)");
        }
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{} -> {}", i + 1, v)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolValue[{self}]")
    }
}

/// The bracket `Upsilon(theta)` of degree `n` generated by `theta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiBracket {
    theta: GradedElement,
    degree: usize,
}

impl MultiBracket {
    /// `theta` must be homogeneous of the given degree (zero is allowed).
    pub fn new(theta: GradedElement, degree: usize) -> Result<Self> {
        if !theta.is_homogeneous_of(degree as u32) {
            return match theta.homogeneous_degree() {
                Some(got) => Err(Error::WrongDegree {
                    expected: degree as u32,
                    got,
                }),
                None => Err(Error::NotHomogeneous(theta.to_string())),
            };
        }
        Ok(MultiBracket { theta, degree })
    }

    /// Takes the degree from `theta`, which must be nonzero and homogeneous.
    pub fn from_theta(theta: GradedElement) -> Result<Self> {
        match theta.homogeneous_degree() {
            Some(n) => Ok(MultiBracket {
                theta,
                degree: n as usize,
            }),
            None => Err(Error::NotHomogeneous(theta.to_string())),
        }
    }

    pub fn zero(bundle: &Bundle, degree: usize) -> Self {
        MultiBracket {
            theta: GradedElement::zero(bundle),
            degree,
        }
    }

    pub fn theta(&self) -> &GradedElement {
        &self.theta
    }

    pub fn into_theta(self) -> GradedElement {
        self.theta
    }

    /// Number of section arguments of `kw_eval`.
    pub fn arity(&self) -> usize {
        eval_arity(self.degree)
    }
}

impl PreCourant for MultiBracket {
    fn bundle(&self) -> &Bundle {
        self.theta.bundle()
    }

    fn degree(&self) -> usize {
        self.degree
    }

    fn tilde(&self, args: &[GradedElement]) -> Result<GradedElement> {
        check_args(args, self.degree)?;
        Ok(iterated(&self.theta, args))
    }

    fn eval(&self, args: &[GradedElement]) -> Result<GradedElement> {
        check_args(args, eval_arity(self.degree))?;
        Ok(iterated(&self.theta, args))
    }

    fn symbol(&self, args: &[GradedElement]) -> Result<SymbolValue> {
        check_args(args, symbol_arity(self.degree))?;
        let bundle = self.bundle();
        if self.degree < 2 {
            return Ok(SymbolValue::zero(bundle));
        }
        let inner = iterated(&self.theta, args);
        let images = (1..=bundle.d())
            .map(|i| pbracket_unchecked(&GradedElement::x(bundle, i), &inner))
            .collect();
        Ok(SymbolValue::new(bundle, images))
    }
}

/// `Upsilon(theta)(e_1, ..., e_{n-1}) = {e_{n-1}, ... {e_1, theta}}`.
pub fn kw_eval(c: &MultiBracket, args: &[GradedElement]) -> Result<GradedElement> {
    c.eval(args)
}

/// `C~(e_1, ..., e_n) = <C(e_1, ..., e_{n-1}), e_n>`.
pub fn kw_eval_tilde(c: &MultiBracket, args: &[GradedElement]) -> Result<GradedElement> {
    c.tilde(args)
}

/// `sigma(e_1, ..., e_{n-2}) f = {f, {e_{n-2}, ... {e_1, theta}}}`.
pub fn kw_symbol(c: &MultiBracket, args: &[GradedElement]) -> Result<SymbolValue> {
    c.symbol(args)
}

/// Evaluates `C` with one function among its `n - 1` arguments as
/// `sigma_C(sections) . f`; two or more functions give zero. Without a
/// function argument this is plain evaluation.
pub fn extend_to_functions<C: PreCourant + ?Sized>(c: &C, args: &[GradedElement]) -> Result<GradedElement> {
    let n = c.degree();
    let expected = eval_arity(n);
    if args.len() != expected {
        return Err(Error::Arity {
            expected,
            got: args.len(),
        });
    }
    let is_fn = |e: &GradedElement| !e.is_zero() && e.is_function();
    let functions: Vec<usize> = (0..args.len()).filter(|&i| is_fn(&args[i])).collect();
    match functions.len() {
        0 => c.eval(args),
        1 => {
            let k = functions[0];
            let sections: Vec<GradedElement> = args
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, e)| e.clone())
                .collect();
            Ok(c.symbol(&sections)?.apply(&args[k]))
        }
        _ => {
            for (i, e) in args.iter().enumerate() {
                if !e.is_function() {
                    check_section(i, e)?;
                }
            }
            Ok(GradedElement::zero(c.bundle()))
        }
    }
}

/// `<a, b>` for sections, computed as the Poisson bracket.
pub(crate) fn pairing(a: &GradedElement, b: &GradedElement) -> GradedElement {
    pbracket_unchecked(a, b)
}

/// Checks that two brackets share a bundle.
pub(crate) fn same_bundle_of(a: &dyn PreCourant, b: &dyn PreCourant) -> Result<()> {
    if crate::graded_ring::same_bundle(a.bundle(), b.bundle()) {
        Ok(())
    } else {
        Err(Error::BundleMismatch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_ring::{int, rat};
    use crate::poisson::BundleSpec;

    fn split(d: usize) -> Bundle {
        BundleSpec::split(d).into_bundle()
    }

    fn standard(bundle: &Bundle) -> MultiBracket {
        let d = bundle.d();
        let mut theta = GradedElement::zero(bundle);
        for i in 1..=d {
            theta += GradedElement::xi(bundle, i) * GradedElement::p(bundle, i);
        }
        MultiBracket::new(theta, 3).unwrap()
    }

    #[test]
    fn section_as_degree_one_bracket() {
        let b = BundleSpec::identity(1, 2).into_bundle();
        let s = GradedElement::xi(&b, 1) + GradedElement::xi(&b, 2).scale(&int(3));
        let c = MultiBracket::new(s.clone(), 1).unwrap();
        assert_eq!(c.eval(&[]).unwrap(), s);
        let e = GradedElement::xi(&b, 2);
        assert_eq!(c.tilde(&[e]).unwrap(), GradedElement::constant(&b, int(3)));
    }

    #[test]
    fn standard_bracket_of_constants_vanishes() {
        let b = split(2);
        let c = standard(&b);
        let v = c
            .eval(&[GradedElement::xi(&b, 1), GradedElement::xi(&b, 3)])
            .unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn four_form_contracts_to_remaining_generator() {
        let b = BundleSpec::identity(0, 4).into_bundle();
        let theta = GradedElement::xi(&b, 1)
            * GradedElement::xi(&b, 2)
            * GradedElement::xi(&b, 3)
            * GradedElement::xi(&b, 4);
        let c = MultiBracket::new(theta, 4).unwrap();
        let args: Vec<_> = (1..=3).map(|a| GradedElement::xi(&b, a)).collect();
        // {xi1, xi1 xi2 xi3 xi4} = xi2 xi3 xi4, then xi3 xi4, then xi4.
        assert_eq!(c.eval(&args).unwrap(), GradedElement::xi(&b, 4));
    }

    #[test]
    fn symbol_of_standard_bracket_is_minus_coordinate_field() {
        let b = split(2);
        let c = standard(&b);
        let s = c.symbol(&[GradedElement::xi(&b, 3)]).unwrap();
        assert_eq!(s.image(1), &GradedElement::constant(&b, int(-1)));
        assert!(s.image(2).is_zero());
        assert!(c.symbol(&[GradedElement::xi(&b, 1)]).unwrap().is_zero());
    }

    #[test]
    fn multivector_symbol_is_zero() {
        let b = BundleSpec::identity(2, 3).into_bundle();
        let theta = GradedElement::x(&b, 1) * GradedElement::xi(&b, 1) * GradedElement::xi(&b, 2);
        let c = MultiBracket::new(theta, 2).unwrap();
        assert!(c.symbol(&[]).unwrap().is_zero());
    }

    #[test]
    fn default_eval_and_symbol_match_generator_route() {
        struct TildeOnly<'a>(&'a MultiBracket);
        impl PreCourant for TildeOnly<'_> {
            fn bundle(&self) -> &Bundle {
                self.0.bundle()
            }
            fn degree(&self) -> usize {
                self.0.degree()
            }
            fn tilde(&self, args: &[GradedElement]) -> Result<GradedElement> {
                self.0.tilde(args)
            }
        }
        let spec = BundleSpec::new(
            2,
            2,
            vec![vec![int(2), int(1)], vec![int(1), rat(1, 3)]],
        )
        .unwrap();
        let b = spec.into_bundle();
        let theta = GradedElement::x(&b, 1) * GradedElement::xi(&b, 1) * GradedElement::p(&b, 2)
            + GradedElement::xi(&b, 2) * GradedElement::p(&b, 1);
        let c = MultiBracket::new(theta, 3).unwrap();
        let w = TildeOnly(&c);
        let e1 = GradedElement::x(&b, 2) * GradedElement::xi(&b, 1);
        let e2 = GradedElement::x(&b, 1) * GradedElement::xi(&b, 2) + GradedElement::xi(&b, 1);
        assert_eq!(w.eval(&[e1.clone(), e2.clone()]).unwrap(), c.eval(&[e1.clone(), e2]).unwrap());
        assert_eq!(w.symbol(std::slice::from_ref(&e1)).unwrap(), c.symbol(&[e1]).unwrap());
    }

    #[test]
    fn function_argument_goes_through_symbol_in_any_slot() {
        let b = split(2);
        let c = standard(&b);
        let e = GradedElement::x(&b, 2) * GradedElement::xi(&b, 3);
        let f = GradedElement::x(&b, 1) * GradedElement::x(&b, 1);
        let v1 = extend_to_functions(&c, &[e.clone(), f.clone()]).unwrap();
        let v2 = extend_to_functions(&c, &[f.clone(), e.clone()]).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(v1, iterated(c.theta(), &[e, f.clone()]));
        assert_eq!(v1, (GradedElement::x(&b, 1) * GradedElement::x(&b, 2)).scale(&int(-2)));
        assert!(extend_to_functions(&c, &[f.clone(), f]).unwrap().is_zero());
    }

    #[test]
    fn wrong_argument_count_and_non_sections_are_rejected() {
        let b = split(1);
        let c = standard(&b);
        assert_eq!(
            c.eval(&[GradedElement::xi(&b, 1)]),
            Err(Error::Arity {
                expected: 2,
                got: 1
            })
        );
        assert!(matches!(
            c.eval(&[GradedElement::xi(&b, 1), GradedElement::p(&b, 1)]),
            Err(Error::NotSection { index: 1, .. })
        ));
    }
}
