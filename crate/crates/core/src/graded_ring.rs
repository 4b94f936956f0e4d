//! Polynomial functions on the degree-2 graded manifold.
//!
//! Coordinates are `x1..xd` (degree 0), `xi1..xir` (degree 1, odd) and
//! `p1..pd` (degree 2). Coefficients are exact rationals. Odd variables are
//! kept sorted inside each monomial and every reordering sign is pushed into
//! the coefficient, so each element has a unique normal form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poisson::BundleSpec;

pub type Rational = num_rational::BigRational;

pub type Bundle = Arc<BundleSpec>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A coordinate with its 1-based index, as written in expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    X(usize),
    Xi(usize),
    P(usize),
}

impl Coord {
    pub fn degree(self) -> u32 {
        match self {
            Coord::X(_) => 0,
            Coord::Xi(_) => 1,
            Coord::P(_) => 2,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::X(i) => write!(f, "x{i}"),
            Coord::Xi(a) => write!(f, "xi{a}"),
            Coord::P(i) => write!(f, "p{i}"),
        }
    }
}

/// `x^alpha * xi^{a_1} ... xi^{a_k} * p^beta` with `a_1 < ... < a_k`.
///
/// Odd indices are stored as a bitmask (bit `a` for the 0-based index `a`),
/// which caps the fibre rank at 64.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    x: Box<[u32]>,
    xi: u64,
    p: Box<[u32]>,
}

pub const MAX_RANK: usize = 64;

fn below(a: usize) -> u64 {
    (1u64 << a) - 1
}

fn above(a: usize) -> u64 {
    if a + 1 >= 64 {
        0
    } else {
        !0u64 << (a + 1)
    }
}

impl Monomial {
    pub fn one(d: usize) -> Self {
        Monomial {
            x: vec![0; d].into_boxed_slice(),
            xi: 0,
            p: vec![0; d].into_boxed_slice(),
        }
    }

    /// Builds a monomial from exponent vectors and 0-based odd indices.
    /// Returns the Koszul sign of sorting the odd indices, or `None` when an
    /// odd index repeats.
    pub fn from_parts(x: Vec<u32>, xi: &[usize], p: Vec<u32>) -> Option<(bool, Self)> {
        let mut mask = 0u64;
        let mut negative = false;
        for &a in xi {
            if mask & (1 << a) != 0 {
                return None;
            }
            negative ^= (mask & above(a)).count_ones() % 2 == 1;
            mask |= 1 << a;
        }
        Some((
            negative,
            Monomial {
                x: x.into_boxed_slice(),
                xi: mask,
                p: p.into_boxed_slice(),
            },
        ))
    }

    pub fn x_exponents(&self) -> &[u32] {
        &self.x
    }

    pub fn p_exponents(&self) -> &[u32] {
        &self.p
    }

    /// 0-based odd indices in increasing order.
    pub fn xi_indices(&self) -> Vec<usize> {
        bits(self.xi).collect()
    }

    pub fn xi_mask(&self) -> u64 {
        self.xi
    }

    pub fn xi_count(&self) -> u32 {
        self.xi.count_ones()
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().sum()
    }

    pub fn p_degree(&self) -> u32 {
        self.p.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        2 * self.p_degree() + self.xi_count()
    }

    pub fn is_odd(&self) -> bool {
        self.xi_count() % 2 == 1
    }

    /// Product with the sign of merging the odd factors, `None` if it vanishes.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.xi & other.xi != 0 {
            return None;
        }
        let mut negative = false;
        for b in bits(other.xi) {
            negative ^= (self.xi & above(b)).count_ones() % 2 == 1;
        }
        let x = self.x.iter().zip(other.x.iter()).map(|(a, b)| a + b).collect();
        let p = self.p.iter().zip(other.p.iter()).map(|(a, b)| a + b).collect();
        Some((
            negative,
            Monomial {
                x,
                xi: self.xi | other.xi,
                p,
            },
        ))
    }

    /// Left derivative by `xi_a`: move the factor to the front, then drop it.
    pub fn left_deriv_xi(&self, a: usize) -> Option<(bool, Monomial)> {
        if self.xi & (1 << a) == 0 {
            return None;
        }
        let negative = (self.xi & below(a)).count_ones() % 2 == 1;
        let mut m = self.clone();
        m.xi &= !(1 << a);
        Some((negative, m))
    }

    /// Right derivative by `xi_a`: move the factor to the back, then drop it.
    pub fn right_deriv_xi(&self, a: usize) -> Option<(bool, Monomial)> {
        if self.xi & (1 << a) == 0 {
            return None;
        }
        let negative = (self.xi & above(a)).count_ones() % 2 == 1;
        let mut m = self.clone();
        m.xi &= !(1 << a);
        Some((negative, m))
    }

    pub fn deriv_x(&self, i: usize) -> Option<(u32, Monomial)> {
        let e = self.x[i];
        if e == 0 {
            return None;
        }
        let mut m = self.clone();
        m.x[i] -= 1;
        Some((e, m))
    }

    pub fn deriv_p(&self, i: usize) -> Option<(u32, Monomial)> {
        let e = self.p[i];
        if e == 0 {
            return None;
        }
        let mut m = self.clone();
        m.p[i] -= 1;
        Some((e, m))
    }

    /// Splits off the largest odd factor: `self = rest * xi_a`, no sign needed.
    pub fn split_highest_xi(&self) -> Option<(Monomial, usize)> {
        if self.xi == 0 {
            return None;
        }
        let a = 63 - self.xi.leading_zeros() as usize;
        let mut rest = self.clone();
        rest.xi &= !(1 << a);
        Some((rest, a))
    }

    /// Splits off the smallest odd factor: `self = sign * rest * xi_a`.
    pub fn split_lowest_xi(&self) -> Option<(bool, Monomial, usize)> {
        if self.xi == 0 {
            return None;
        }
        let a = self.xi.trailing_zeros() as usize;
        let mut rest = self.clone();
        rest.xi &= !(1 << a);
        let negative = rest.xi.count_ones() % 2 == 1;
        Some((negative, rest, a))
    }

    fn xi_cmp(&self, other: &Monomial) -> Ordering {
        bits(self.xi).cmp(bits(other.xi))
    }

    fn write_factors(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            Ok(())
        };
        for (i, &e) in self.x.iter().enumerate() {
            if e > 0 {
                sep(f)?;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        for a in bits(self.xi) {
            sep(f)?;
            write!(f, "xi{}", a + 1)?;
        }
        for (i, &e) in self.p.iter().enumerate() {
            if e > 0 {
                sep(f)?;
                write!(f, "p{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }

    pub fn is_one(&self) -> bool {
        self.xi == 0 && self.x.iter().all(|&e| e == 0) && self.p.iter().all(|&e| e == 0)
    }
}

/// Graded first, then p-exponents, odd index lists and x-exponents, all lex.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.p.cmp(&other.p))
            .then_with(|| self.xi_cmp(other))
            .then_with(|| self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            f.write_str("1")
        } else {
            self.write_factors(f)
        }
    }
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> + Clone {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let a = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(a)
        }
    })
}

/// An element of the graded algebra: a finite map from monomials to nonzero
/// rational coefficients.
#[derive(Clone)]
pub struct GradedElement {
    bundle: Bundle,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        same_bundle(&self.bundle, &other.bundle) && self.terms == other.terms
    }
}

impl Eq for GradedElement {}

pub fn same_bundle(a: &Bundle, b: &Bundle) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GradedElement {
    pub fn zero(bundle: &Bundle) -> Self {
        GradedElement {
            bundle: bundle.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(bundle: &Bundle, c: Rational) -> Self {
        let mut e = Self::zero(bundle);
        e.add_term(Monomial::one(bundle.d()), c);
        e
    }

    pub fn one(bundle: &Bundle) -> Self {
        Self::constant(bundle, Rational::one())
    }

    pub fn coord(bundle: &Bundle, c: Coord) -> Result<Self> {
        let d = bundle.d();
        let r = bundle.r();
        let mut x = vec![0; d];
        let mut p = vec![0; d];
        let mut xi = vec![];
        match c {
            Coord::X(i) if (1..=d).contains(&i) => x[i - 1] = 1,
            Coord::P(i) if (1..=d).contains(&i) => p[i - 1] = 1,
            Coord::Xi(a) if (1..=r).contains(&a) => xi.push(a - 1),
            _ => return Err(Error::UnknownCoordinate(c.to_string())),
        }
        let (_, m) = Monomial::from_parts(x, &xi, p).expect("single factor");
        let mut e = Self::zero(bundle);
        e.add_term(m, Rational::one());
        Ok(e)
    }

    /// Shorthand for `coord(bundle, Coord::X(i))`, 1-based; panics when out of range.
    pub fn x(bundle: &Bundle, i: usize) -> Self {
        Self::coord(bundle, Coord::X(i)).expect("x index in range")
    }

    pub fn xi(bundle: &Bundle, a: usize) -> Self {
        Self::coord(bundle, Coord::Xi(a)).expect("xi index in range")
    }

    pub fn p(bundle: &Bundle, i: usize) -> Self {
        Self::coord(bundle, Coord::P(i)).expect("p index in range")
    }

    pub fn from_monomial(bundle: &Bundle, m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero(bundle);
        e.add_term(m, c);
        e
    }

    /// Canonical form of a sum of coefficient-weighted products of
    /// coordinates given in arbitrary order.
    pub fn normalize(bundle: &Bundle, raw: &[(Rational, Vec<Coord>)]) -> Result<Self> {
        let mut out = Self::zero(bundle);
        for (c, factors) in raw {
            let mut term = Self::constant(bundle, c.clone());
            for &f in factors {
                term = term.mul_unchecked(&Self::coord(bundle, f)?);
            }
            out += &term;
        }
        Ok(out)
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.bundle);
        }
        GradedElement {
            bundle: self.bundle.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Checked product; `a * b` panics on mismatched bundles instead.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if !same_bundle(&self.bundle, &other.bundle) {
            return Err(Error::BundleMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.bundle);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Components by total degree; they sum back to `self`.
    pub fn degree_decompose(&self) -> BTreeMap<u32, GradedElement> {
        let mut out: BTreeMap<u32, GradedElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(&self.bundle))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn component(&self, degree: u32) -> Self {
        GradedElement {
            bundle: self.bundle.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn is_function(&self) -> bool {
        self.is_homogeneous_of(0)
    }

    pub fn is_section(&self) -> bool {
        self.is_homogeneous_of(1)
    }

    pub fn is_multivector(&self) -> bool {
        self.terms.keys().all(|m| m.p_degree() == 0)
    }

    pub fn max_x_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::x_degree).max().unwrap_or(0)
    }

    pub fn max_p_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::p_degree).max().unwrap_or(0)
    }

    /// Ordinary partial derivative by `x_i` (0-based).
    pub fn deriv_x(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.bundle);
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.deriv_x(i) {
                out.add_term(dm, c * int(e as i64));
            }
        }
        out
    }

    pub fn deriv_p(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.bundle);
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.deriv_p(i) {
                out.add_term(dm, c * int(e as i64));
            }
        }
        out
    }

    pub fn left_deriv_xi(&self, a: usize) -> Self {
        let mut out = Self::zero(&self.bundle);
        for (m, c) in &self.terms {
            if let Some((neg, dm)) = m.left_deriv_xi(a) {
                out.add_term(dm, if neg { -c } else { c.clone() });
            }
        }
        out
    }

    pub fn right_deriv_xi(&self, a: usize) -> Self {
        let mut out = Self::zero(&self.bundle);
        for (m, c) in &self.terms {
            if let Some((neg, dm)) = m.right_deriv_xi(a) {
                out.add_term(dm, if neg { -c } else { c.clone() });
            }
        }
        out
    }

    /// Splits into single-term elements, in term order.
    pub fn monomial_terms(&self) -> impl Iterator<Item = GradedElement> + '_ {
        self.terms
            .iter()
            .map(|(m, c)| Self::from_monomial(&self.bundle, m.clone(), c.clone()))
    }

    /// Substitutes a constant rational value for every `x` coordinate.
    pub fn evaluate_x(&self, point: &[Rational]) -> Self {
        let mut out = Self::zero(&self.bundle);
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (e, x) in m.x.iter().zip(point) {
                for _ in 0..*e {
                    v *= x;
                }
            }
            let mut stripped = m.clone();
            stripped.x.iter_mut().for_each(|e| *e = 0);
            out.add_term(stripped, v);
        }
        out
    }
}

/// Graded-commutative product of two elements of the same bundle.
pub fn mul(a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
    a.try_mul(b)
}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedElement({self})")
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text: `-1/2*x1*xi1*xi2 + p1`.
impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write_rational(f, &abs)?;
            } else {
                if !abs.is_one() {
                    write_rational(f, &abs)?;
                    f.write_str("*")?;
                }
                m.write_factors(f)?;
            }
        }
        Ok(())
    }
}

fn assert_same(a: &GradedElement, b: &GradedElement) {
    assert!(
        same_bundle(&a.bundle, &b.bundle),
        "arithmetic on elements of different bundles"
    );
}

impl AddAssign<&GradedElement> for GradedElement {
    fn add_assign(&mut self, rhs: &GradedElement) {
        assert_same(self, rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&GradedElement> for GradedElement {
    fn sub_assign(&mut self, rhs: &GradedElement) {
        assert_same(self, rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl AddAssign for GradedElement {
    fn add_assign(&mut self, rhs: GradedElement) {
        *self += &rhs;
    }
}

impl SubAssign for GradedElement {
    fn sub_assign(&mut self, rhs: GradedElement) {
        *self -= &rhs;
    }
}

impl Add for &GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for GradedElement {
    type Output = GradedElement;
    fn add(mut self, rhs: GradedElement) -> GradedElement {
        self += &rhs;
        self
    }
}

impl Sub for GradedElement {
    type Output = GradedElement;
    fn sub(mut self, rhs: GradedElement) -> GradedElement {
        self -= &rhs;
        self
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        GradedElement {
            bundle: self.bundle.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        -&self
    }
}

/// Panics when the bundles differ; use [`mul`] for a checked product.
impl Mul for &GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: &GradedElement) -> GradedElement {
        assert_same(self, rhs);
        self.mul_unchecked(rhs)
    }
}

impl Mul for GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: GradedElement) -> GradedElement {
        &self * &rhs
    }
}
