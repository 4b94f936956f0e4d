//! The extended pairing on multivectors and the extension of brackets by
//! derivation to `Gamma(wedge^{>=1} E)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded_ring::{same_bundle, Bundle, GradedElement, Monomial, Rational};
use crate::kw::{kw_bracket, kw_wedge, MultiBracket, PreCourant, SymbolValue};
use crate::poisson::pbracket_unchecked;

/// An element of `Gamma(wedge E)`: a graded element without momenta.
#[derive(Clone, PartialEq, Eq)]
pub struct Multivector(GradedElement);

impl Multivector {
    pub fn new(value: GradedElement) -> Result<Self> {
        if value.is_multivector() {
            Ok(Multivector(value))
        } else {
            Err(Error::NotMultivector(value.to_string()))
        }
    }

    pub fn zero(bundle: &Bundle) -> Self {
        Multivector(GradedElement::zero(bundle))
    }

    pub fn value(&self) -> &GradedElement {
        &self.0
    }

    pub fn into_value(self) -> GradedElement {
        self.0
    }

    pub fn bundle(&self) -> &Bundle {
        self.0.bundle()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        Ok(Multivector(self.0.try_mul(&other.0)?))
    }

    /// Homogeneous components by exterior degree.
    pub fn components(&self) -> impl Iterator<Item = (u32, GradedElement)> {
        self.0.degree_decompose().into_iter()
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector({})", self.0)
    }
}

fn x_part(bundle: &Bundle, m: &Monomial, c: &Rational) -> GradedElement {
    let (_, stripped) = Monomial::from_parts(m.x_exponents().to_vec(), &[], vec![0; bundle.d()]).expect("no odd factors");
    GradedElement::from_monomial(bundle, stripped, c.clone())
}

fn wedge_of(bundle: &Bundle, odd: &[usize], skip: usize) -> GradedElement {
    let rest: Vec<usize> = odd.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &a)| a).collect();
    let (neg, m) = Monomial::from_parts(vec![0; bundle.d()], &rest, vec![0; bundle.d()]).expect("distinct");
    let c = if neg { -Rational::one() } else { Rational::one() };
    GradedElement::from_monomial(bundle, m, c)
}

/// The pairing extended to multivectors as a biderivation:
/// `<P, Q> = sum_{s,k} (-1)^{k-s+p+1} <e_k, e'_s> P^k ^ Q^s` on decomposables,
/// extended bilinearly over the functions. Functions pair to zero.
pub fn pair(p: &Multivector, q: &Multivector) -> Result<Multivector> {
    if !same_bundle(p.bundle(), q.bundle()) {
        return Err(Error::BundleMismatch);
    }
    let bundle = p.bundle();
    let g = bundle.metric_inverse();
    let mut out = GradedElement::zero(bundle);
    for (mp, cp) in p.0.terms() {
        let a = mp.xi_indices();
        if a.is_empty() {
            continue;
        }
        let fp = x_part(bundle, mp, cp);
        for (mq, cq) in q.0.terms() {
            let b = mq.xi_indices();
            if b.is_empty() {
                continue;
            }
            let f = fp.mul_unchecked(&x_part(bundle, mq, cq));
            let deg_p = a.len();
            for (s, &bs) in b.iter().enumerate() {
                let q_hat = wedge_of(bundle, &b, s);
                for (k, &ak) in a.iter().enumerate() {
                    let metric = &g[ak][bs];
                    if metric.is_zero() {
                        continue;
                    }
                    // (-1)^{k-s+p+1} with 1-based k and s.
                    let exponent = (k + 1) + (s + 1) + deg_p + 1;
                    let sign = if exponent % 2 == 0 { metric.clone() } else { -metric.clone() };
                    let term = wedge_of(bundle, &a, k).mul_unchecked(&q_hat).mul_unchecked(&f);
                    out += term.scale(&sign);
                }
            }
        }
    }
    Ok(Multivector(out))
}

/// How a monomial argument `f xi_{a1} ^ .. ^ xi_{ak}` of exterior degree >= 2
/// is split for the derivation recursion.
///
/// The base bracket is function-linear only in its last entry, so the
/// derivation rule cannot hold for every factorization over functions: the
/// value depends on which factor carries `f`. The two peelings are the two
/// extreme choices. They agree when the coefficients are constant or the
/// bracket has no symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Peel {
    /// Peel the top generator first; `f` ends on the lowest factor. This is
    /// the convention used by [`HigherBracket`].
    Highest,
    /// Peel the bottom generator first; `f` ends on the highest factor.
    Lowest,
}

/// One peeling step: `term = hat ^ e` with `e` a section.
fn peel(bundle: &Bundle, m: &Monomial, c: &Rational, how: Peel) -> (GradedElement, GradedElement) {
    match how {
        Peel::Highest => {
            let (rest, a) = m.split_highest_xi().expect("degree >= 2");
            let hat = GradedElement::from_monomial(bundle, rest, c.clone());
            (hat, GradedElement::xi(bundle, a + 1))
        }
        Peel::Lowest => {
            let (negative, rest, a) = m.split_lowest_xi().expect("degree >= 2");
            let sign = if negative { -c.clone() } else { c.clone() };
            let hat = GradedElement::from_monomial(bundle, rest, sign);
            (hat, GradedElement::xi(bundle, a + 1))
        }
    }
}

fn exterior_degree(e: &GradedElement) -> usize {
    e.homogeneous_degree().expect("monomial") as usize
}

fn check_arguments(bundle: &Bundle, args: &[Multivector]) -> Result<()> {
    for (index, p) in args.iter().enumerate() {
        if !same_bundle(bundle, p.bundle()) {
            return Err(Error::BundleMismatch);
        }
        if p.0.terms().any(|(m, _)| m.xi_count() == 0) {
            return Err(Error::DegreeZeroArgument { index });
        }
    }
    Ok(())
}

/// Signed sum used by both recursions: `first(..e..)` and `second(..P^..)`.
fn derivation_step<T>(
    args: &[GradedElement],
    i: usize,
    hat: &GradedElement,
    e: &GradedElement,
    eval: &mut impl FnMut(&[GradedElement]) -> Result<T>,
    wedge_left: impl Fn(&GradedElement, T) -> T,
    add: impl Fn(T, T) -> T,
) -> Result<T> {
    let h = exterior_degree(hat);
    let later: usize = args[i + 1..].iter().map(exterior_degree).sum();
    let mut with_e = args.to_vec();
    with_e[i] = e.clone();
    let first = eval(&with_e)?;
    let first_sign = if (h * later).is_multiple_of(2) { hat.clone() } else { -hat.clone() };
    let mut with_hat = args.to_vec();
    with_hat[i] = hat.clone();
    let second = eval(&with_hat)?;
    let second_sign = if (h + later).is_multiple_of(2) { e.clone() } else { -e.clone() };
    Ok(add(wedge_left(&first_sign, first), wedge_left(&second_sign, second)))
}

/// Extends a function of section tuples by derivation in every entry.
/// Arguments are expanded into monomials; monomials of degree >= 2 are
/// peeled one section at a time.
fn extend<T>(
    bundle: &Bundle,
    args: &[Multivector],
    how: Peel,
    base: &dyn Fn(&[GradedElement]) -> Result<T>,
    zero: &dyn Fn() -> T,
    wedge_left: &dyn Fn(&GradedElement, T) -> T,
    add: &dyn Fn(T, T) -> T,
) -> Result<T> {
    check_arguments(bundle, args)?;
    let expanded: Vec<Vec<GradedElement>> = args.iter().map(|p| p.0.monomial_terms().collect()).collect();
    let mut acc = zero();
    if expanded.iter().any(Vec::is_empty) {
        return Ok(acc);
    }
    let mut pos = vec![0usize; args.len()];
    loop {
        let tuple: Vec<GradedElement> = pos.iter().zip(&expanded).map(|(&p, ex)| ex[p].clone()).collect();
        acc = add(acc, extend_monomials(bundle, &tuple, how, base, wedge_left, add)?);
        let mut k = args.len();
        loop {
            if k == 0 {
                return Ok(acc);
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < expanded[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}

fn extend_monomials<T>(
    bundle: &Bundle,
    args: &[GradedElement],
    how: Peel,
    base: &dyn Fn(&[GradedElement]) -> Result<T>,
    wedge_left: &dyn Fn(&GradedElement, T) -> T,
    add: &dyn Fn(T, T) -> T,
) -> Result<T> {
    let Some(i) = args.iter().position(|a| exterior_degree(a) >= 2) else {
        return base(args);
    };
    let (m, c) = args[i].terms().next().expect("nonzero monomial");
    let (hat, e) = peel(bundle, m, c, how);
    let mut recurse = |t: &[GradedElement]| extend_monomials(bundle, t, how, base, wedge_left, add);
    derivation_step(args, i, &hat, &e, &mut recurse, wedge_left, add)
}

/// Extension by derivation of a bracket given through its values on
/// sections, `tilde` of degree `n`.
pub fn bar_eval_of(c: &dyn PreCourant, args: &[Multivector], how: Peel) -> Result<Multivector> {
    let bundle = c.bundle();
    if args.len() != c.degree() {
        return Err(Error::Arity {
            expected: c.degree(),
            got: args.len(),
        });
    }
    let v = extend(
        bundle,
        args,
        how,
        &|t| c.tilde(t),
        &|| GradedElement::zero(bundle),
        &|w, v| w.mul_unchecked(&v),
        &|a, b| a + b,
    )?;
    Ok(Multivector(v))
}

/// Extension by derivation of the symbol.
pub fn bar_symbol_of(c: &dyn PreCourant, args: &[Multivector], how: Peel) -> Result<SymbolValue> {
    let bundle = c.bundle();
    let expected = c.degree().saturating_sub(2);
    if args.len() != expected {
        return Err(Error::Arity {
            expected,
            got: args.len(),
        });
    }
    extend(
        bundle,
        args,
        how,
        &|t| c.symbol(t),
        &|| SymbolValue::zero(bundle),
        &|w, s| s.left_mul(w),
        &|mut a, b| {
            a.add_assign(&b);
            a
        },
    )
}

/// The higher bracket `bar(C~)` of a generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HigherBracket {
    base: MultiBracket,
}

impl HigherBracket {
    pub fn new(base: MultiBracket) -> Self {
        HigherBracket { base }
    }

    /// The extension of a multivector seen as a bracket of its degree.
    pub fn of_multivector(p: &Multivector) -> Result<Self> {
        Ok(HigherBracket::new(MultiBracket::from_theta(p.value().clone())?))
    }

    pub fn base(&self) -> &MultiBracket {
        &self.base
    }

    pub fn bundle(&self) -> &Bundle {
        self.base.bundle()
    }

    pub fn arity(&self) -> usize {
        self.base.degree()
    }

    pub fn eval(&self, args: &[Multivector]) -> Result<Multivector> {
        bar_eval_of(&self.base, args, Peel::Highest)
    }

    pub fn symbol(&self, args: &[Multivector]) -> Result<SymbolValue> {
        bar_symbol_of(&self.base, args, Peel::Highest)
    }
}

pub fn bar_eval(b: &HigherBracket, args: &[Multivector]) -> Result<Multivector> {
    b.eval(args)
}

pub fn bar_symbol(b: &HigherBracket, args: &[Multivector]) -> Result<SymbolValue> {
    b.symbol(args)
}

pub fn higher_wedge(b1: &HigherBracket, b2: &HigherBracket) -> Result<HigherBracket> {
    Ok(HigherBracket::new(kw_wedge(&b1.base, &b2.base)?))
}

pub fn higher_bracket(b1: &HigherBracket, b2: &HigherBracket) -> Result<HigherBracket> {
    Ok(HigherBracket::new(kw_bracket(&b1.base, &b2.base)?))
}

/// `{P_n, .. {P_1, theta}..}`, which agrees with the extension on sections
/// but not in general.
pub fn iterated_pbracket(theta: &GradedElement, args: &[Multivector]) -> Result<GradedElement> {
    let mut acc = theta.clone();
    for p in args {
        if !same_bundle(theta.bundle(), p.bundle()) {
            return Err(Error::BundleMismatch);
        }
        acc = pbracket_unchecked(p.value(), &acc);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_ring::int;
    use crate::poisson::BundleSpec;

    fn mv(e: GradedElement) -> Multivector {
        Multivector::new(e).unwrap()
    }

    #[test]
    fn pairing_drops_one_factor() {
        let b = BundleSpec::identity(0, 3).into_bundle();
        let xi = |a| GradedElement::xi(&b, a);
        let got = pair(&mv(xi(1) * xi(2)), &mv(xi(1))).unwrap();
        assert_eq!(got.value(), &-xi(2));
        let f = mv(GradedElement::one(&b));
        assert!(pair(&f, &mv(xi(1))).unwrap().is_zero());
        assert!(pair(&mv(xi(1)), &f).unwrap().is_zero());
    }

    #[test]
    fn momenta_are_rejected() {
        let b = BundleSpec::identity(1, 1).into_bundle();
        assert!(Multivector::new(GradedElement::p(&b, 1)).is_err());
    }

    #[test]
    fn sections_reduce_to_the_base() {
        let b = BundleSpec::split(1).into_bundle();
        let theta = GradedElement::xi(&b, 1) * GradedElement::p(&b, 1);
        let h = HigherBracket::new(MultiBracket::from_theta(theta).unwrap());
        let e = GradedElement::x(&b, 1) * GradedElement::xi(&b, 2);
        let args = [mv(e.clone()), mv(e.clone()), mv(GradedElement::xi(&b, 1))];
        let got = h.eval(&args).unwrap();
        assert_eq!(got.value(), &h.base().tilde(&[e.clone(), e, GradedElement::xi(&b, 1)]).unwrap());
    }

    #[test]
    fn degree_zero_argument_is_rejected() {
        let b = BundleSpec::identity(1, 2).into_bundle();
        let h = HigherBracket::new(MultiBracket::from_theta(GradedElement::xi(&b, 1) * GradedElement::xi(&b, 2)).unwrap());
        let f = mv(GradedElement::x(&b, 1));
        assert!(matches!(h.eval(&[f.clone(), f]), Err(Error::DegreeZeroArgument { index: 0 })));
    }

    #[test]
    fn standard_symbol_on_a_bivector() {
        let b = BundleSpec::split(1).into_bundle();
        let theta = GradedElement::xi(&b, 1) * GradedElement::p(&b, 1);
        let h = HigherBracket::new(MultiBracket::from_theta(theta).unwrap());
        let p = mv(GradedElement::xi(&b, 1) * GradedElement::xi(&b, 2));
        let s = h.symbol(&[p]).unwrap();
        // sigma(xi2) = -d/dx and sigma(xi1) = 0, so only xi1 ^ sigma(xi2) survives.
        assert_eq!(s.image(1), &GradedElement::xi(&b, 1).scale(&int(-1)));
    }
}
