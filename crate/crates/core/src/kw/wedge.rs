//! The graded commutative product of brackets.

use crate::combinatorics::unshuffles;
use crate::error::Result;
use crate::graded_ring::{int, Bundle, GradedElement};

use super::{
    check_args, eval_arity, pairing, same_bundle_of, symbol_arity, MultiBracket, PreCourant,
    SymbolValue,
};

/// Product on generators: `Upsilon(theta1 * theta2)`.
pub fn kw_wedge(c1: &MultiBracket, c2: &MultiBracket) -> Result<MultiBracket> {
    let theta = c1.theta().try_mul(c2.theta())?;
    MultiBracket::new(theta, c1.degree() + c2.degree())
}

fn pick(args: &[GradedElement], idx: &[usize]) -> Vec<GradedElement> {
    idx.iter().map(|&i| args[i].clone()).collect()
}

fn signed(v: GradedElement, sign: i32) -> GradedElement {
    if sign < 0 {
        -v
    } else {
        v
    }
}

/// `C1 ^ C2` evaluated by the section-valued unshuffle formula
///
/// `sum_{Sh(n, m-1)} sgn <C1(..), e> C2(..)
///  + (-1)^{nm} sum_{Sh(m, n-1)} sgn <C2(..), e> C1(..)`,
///
/// with functions acting by multiplication.
pub struct Wedge<'a> {
    c1: &'a dyn PreCourant,
    c2: &'a dyn PreCourant,
}

impl<'a> Wedge<'a> {
    pub fn new(c1: &'a dyn PreCourant, c2: &'a dyn PreCourant) -> Result<Self> {
        same_bundle_of(c1, c2)?;
        Ok(Wedge { c1, c2 })
    }

    fn half(
        first: &dyn PreCourant,
        second: &dyn PreCourant,
        args: &[GradedElement],
    ) -> Result<GradedElement> {
        let n = first.degree();
        let m = second.degree();
        let mut out = GradedElement::zero(first.bundle());
        for tau in unshuffles(n, m - 1) {
            let t = first.tilde(&pick(args, &tau.images[..n]))?;
            if t.is_zero() {
                continue;
            }
            let v = second.eval(&pick(args, &tau.images[n..]))?;
            out += signed(t.mul_unchecked(&v), tau.sign);
        }
        Ok(out)
    }
}

impl PreCourant for Wedge<'_> {
    fn bundle(&self) -> &Bundle {
        self.c1.bundle()
    }

    fn degree(&self) -> usize {
        self.c1.degree() + self.c2.degree()
    }

    fn eval(&self, args: &[GradedElement]) -> Result<GradedElement> {
        check_args(args, eval_arity(self.degree()))?;
        let (n, m) = (self.c1.degree(), self.c2.degree());
        if n == 0 {
            return Ok(self.c1.tilde(&[])?.mul_unchecked(&self.c2.eval(args)?));
        }
        if m == 0 {
            return Ok(self.c2.tilde(&[])?.mul_unchecked(&self.c1.eval(args)?));
        }
        let mut out = Self::half(self.c1, self.c2, args)?;
        let second = Self::half(self.c2, self.c1, args)?;
        if (n * m) % 2 == 1 {
            out -= second;
        } else {
            out += second;
        }
        Ok(out)
    }

    fn tilde(&self, args: &[GradedElement]) -> Result<GradedElement> {
        let k = self.degree();
        check_args(args, k)?;
        let (n, m) = (self.c1.degree(), self.c2.degree());
        if n == 0 {
            return Ok(self.c1.tilde(&[])?.mul_unchecked(&self.c2.tilde(args)?));
        }
        if m == 0 {
            return Ok(self.c2.tilde(&[])?.mul_unchecked(&self.c1.tilde(args)?));
        }
        let v = self.eval(&args[..k - 1])?;
        Ok(pairing(&v, &args[k - 1]))
    }

    /// `sum_{Sh(n, m-2)} sgn C1~(..) sigma_C2(..) f
    ///  + sum_{Sh(n-2, m)} sgn (sigma_C1(..) f) C2~(..)`.
    fn symbol(&self, args: &[GradedElement]) -> Result<SymbolValue> {
        check_args(args, symbol_arity(self.degree()))?;
        let bundle = self.bundle();
        let (n, m) = (self.c1.degree(), self.c2.degree());
        if n == 0 {
            return Ok(self.c2.symbol(args)?.left_mul(&self.c1.tilde(&[])?));
        }
        if m == 0 {
            return Ok(self.c1.symbol(args)?.left_mul(&self.c2.tilde(&[])?));
        }
        let mut out = SymbolValue::zero(bundle);
        if m >= 2 {
            for tau in unshuffles(n, m - 2) {
                let t = self.c1.tilde(&pick(args, &tau.images[..n]))?;
                if t.is_zero() {
                    continue;
                }
                let s = self.c2.symbol(&pick(args, &tau.images[n..]))?.left_mul(&t);
                out.add_assign(&s.scale(&int(tau.sign as i64)));
            }
        }
        if n >= 2 {
            for tau in unshuffles(n - 2, m) {
                let t = self.c2.tilde(&pick(args, &tau.images[n - 2..]))?;
                if t.is_zero() {
                    continue;
                }
                let s = self.c1.symbol(&pick(args, &tau.images[..n - 2]))?.left_mul(&t);
                out.add_assign(&s.scale(&int(tau.sign as i64)));
            }
        }
        Ok(out)
    }
}

/// `C1~ ^ C2~ (e_1..e_{n+m}) = sum_{Sh(n, m)} sgn C1~(..) C2~(..)`.
pub struct TildeWedge<'a> {
    c1: &'a dyn PreCourant,
    c2: &'a dyn PreCourant,
}

impl<'a> TildeWedge<'a> {
    pub fn new(c1: &'a dyn PreCourant, c2: &'a dyn PreCourant) -> Result<Self> {
        same_bundle_of(c1, c2)?;
        Ok(TildeWedge { c1, c2 })
    }
}

impl PreCourant for TildeWedge<'_> {
    fn bundle(&self) -> &Bundle {
        self.c1.bundle()
    }

    fn degree(&self) -> usize {
        self.c1.degree() + self.c2.degree()
    }

    fn tilde(&self, args: &[GradedElement]) -> Result<GradedElement> {
        check_args(args, self.degree())?;
        let (n, m) = (self.c1.degree(), self.c2.degree());
        let mut out = GradedElement::zero(self.bundle());
        for tau in unshuffles(n, m) {
            let t = self.c1.tilde(&pick(args, &tau.images[..n]))?;
            if t.is_zero() {
                continue;
            }
            let u = self.c2.tilde(&pick(args, &tau.images[n..]))?;
            out += signed(t.mul_unchecked(&u), tau.sign);
        }
        Ok(out)
    }
}
