//! The degree -2 bracket of the Keller-Waldmann algebra, by three routes.

use crate::error::{Error, Result};
use crate::graded_ring::{Bundle, GradedElement};
use crate::poisson::pbracket;

use super::{
    check_args, eval_arity, pairing, same_bundle_of, symbol_arity, InteriorForm,
    InteriorProduct, MultiBracket, PreCourant, SymbolValue,
};

/// Bracket on generators: `Upsilon({theta1, theta2})`. Brackets landing in
/// negative degree are zero and are returned as the zero function.
pub fn kw_bracket(c1: &MultiBracket, c2: &MultiBracket) -> Result<MultiBracket> {
    let theta = pbracket(c1.theta(), c2.theta())?;
    MultiBracket::new(theta, (c1.degree() + c2.degree()).saturating_sub(2))
}

fn odd(k: usize) -> bool {
    k % 2 == 1
}

/// `[C1, C2] = i_{C1} C2 - (-1)^{nm} i_{C2} C1`, evaluated pointwise.
///
/// Functions enter through `i_f C = sigma_C(..) f`. For two sections the
/// formula yields `2 <e, e'>`, twice the value fixed by the generator clauses;
/// it is kept as written and [`combinatorial_bracket`] routes that case to
/// [`ClauseBracket`].
pub struct ExplicitBracket<'a> {
    into_c2: InteriorProduct<'a>,
    into_c1: InteriorProduct<'a>,
    negate_second: bool,
}

impl<'a> ExplicitBracket<'a> {
    pub fn new(c1: &'a dyn PreCourant, c2: &'a dyn PreCourant, form: InteriorForm) -> Result<Self> {
        same_bundle_of(c1, c2)?;
        let (n, m) = (c1.degree(), c2.degree());
        if n + m < 2 {
            return Err(Error::Domain(format!(
                "bracket of degrees {n} and {m} has negative degree"
            )));
        }
        Ok(ExplicitBracket {
            into_c2: InteriorProduct::new(c2, c1, form)?,
            into_c1: InteriorProduct::new(c1, c2, form)?,
            negate_second: !odd(n * m),
        })
    }

    fn combine(&self, a: GradedElement, b: GradedElement) -> GradedElement {
        if self.negate_second {
            a - b
        } else {
            a + b
        }
    }
}

impl PreCourant for ExplicitBracket<'_> {
    fn bundle(&self) -> &Bundle {
        self.into_c2.bundle()
    }

    fn degree(&self) -> usize {
        self.into_c2.degree()
    }

    fn eval(&self, args: &[GradedElement]) -> Result<GradedElement> {
        Ok(self.combine(self.into_c2.eval(args)?, self.into_c1.eval(args)?))
    }

    fn tilde(&self, args: &[GradedElement]) -> Result<GradedElement> {
        Ok(self.combine(self.into_c2.tilde(args)?, self.into_c1.tilde(args)?))
    }

    fn symbol(&self, args: &[GradedElement]) -> Result<SymbolValue> {
        let mut s = self.into_c2.symbol(args)?;
        let t = self.into_c1.symbol(args)?;
        if self.negate_second {
            s.sub_assign(&t);
        } else {
            s.add_assign(&t);
        }
        Ok(s)
    }
}

/// The low-degree clauses that fix the bracket on generators:
/// `[e, e'] = <e, e'>`, `[f, D] = sigma_D f = -[D, f]` for `D` of degree 2,
/// and `[e, C] = (-1)^{n+1} [C, e] = i_e C`.
pub struct ClauseBracket<'a> {
    c1: &'a dyn PreCourant,
    c2: &'a dyn PreCourant,
}

impl<'a> ClauseBracket<'a> {
    /// Whether a clause covers degrees `(n, m)` with a result of degree >= 0.
    pub fn applies(n: usize, m: usize) -> bool {
        n + m >= 2 && (n == 1 || m == 1 || (n, m) == (0, 2) || (n, m) == (2, 0))
    }

    pub fn new(c1: &'a dyn PreCourant, c2: &'a dyn PreCourant) -> Result<Self> {
        same_bundle_of(c1, c2)?;
        let (n, m) = (c1.degree(), c2.degree());
        if !Self::applies(n, m) {
            return Err(Error::Domain(format!(
                "no generator clause covers degrees {n} and {m}"
            )));
        }
        Ok(ClauseBracket { c1, c2 })
    }

    /// `(host, inserted section, sign)` for the `[e, C]` clauses.
    fn insertion(&self) -> Option<(&'a dyn PreCourant, &'a dyn PreCourant, bool)> {
        let (n, m) = (self.c1.degree(), self.c2.degree());
        if n == 1 {
            Some((self.c2, self.c1, false))
        } else if m == 1 {
            Some((self.c1, self.c2, !odd(n)))
        } else {
            None
        }
    }
}

impl PreCourant for ClauseBracket<'_> {
    fn bundle(&self) -> &Bundle {
        self.c1.bundle()
    }

    fn degree(&self) -> usize {
        self.c1.degree() + self.c2.degree() - 2
    }

    fn eval(&self, args: &[GradedElement]) -> Result<GradedElement> {
        check_args(args, eval_arity(self.degree()))?;
        match (self.c1.degree(), self.c2.degree()) {
            (1, 1) => Ok(pairing(&self.c1.eval(&[])?, &self.c2.eval(&[])?)),
            (0, 2) => Ok(self.c2.symbol(&[])?.apply(&self.c1.tilde(&[])?)),
            (2, 0) => Ok(-self.c1.symbol(&[])?.apply(&self.c2.tilde(&[])?)),
            _ => {
                let (host, e, negate) = self.insertion().expect("checked in new");
                let v = InteriorProduct::new(host, e, InteriorForm::Unshuffle)?.eval(args)?;
                Ok(if negate { -v } else { v })
            }
        }
    }

    fn tilde(&self, args: &[GradedElement]) -> Result<GradedElement> {
        let k = self.degree();
        check_args(args, k)?;
        if k == 0 {
            return self.eval(&[]);
        }
        let v = self.eval(&args[..k - 1])?;
        Ok(pairing(&v, &args[k - 1]))
    }

    fn symbol(&self, args: &[GradedElement]) -> Result<SymbolValue> {
        check_args(args, symbol_arity(self.degree()))?;
        match self.insertion() {
            Some((host, e, negate)) => {
                let s = InteriorProduct::new(host, e, InteriorForm::Unshuffle)?.symbol(args)?;
                Ok(if negate { s.map(|v| -v.clone()) } else { s })
            }
            None => Ok(SymbolValue::zero(self.bundle())),
        }
    }
}

/// The bracket computed from values alone: the explicit interior-product
/// formula, except for two sections where the pairing clause is used.
pub fn combinatorial_bracket<'a>(
    c1: &'a dyn PreCourant,
    c2: &'a dyn PreCourant,
    form: InteriorForm,
) -> Result<Box<dyn PreCourant + 'a>> {
    if c1.degree() == 1 && c2.degree() == 1 {
        Ok(Box::new(ClauseBracket::new(c1, c2)?))
    } else {
        Ok(Box::new(ExplicitBracket::new(c1, c2, form)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_ring::int;
    use crate::poisson::BundleSpec;

    #[test]
    fn sections_bracket_to_pairing() {
        let b = BundleSpec::identity(1, 2).into_bundle();
        let e = MultiBracket::from_theta(GradedElement::x(&b, 1) * GradedElement::xi(&b, 1)).unwrap();
        let f = MultiBracket::from_theta(GradedElement::xi(&b, 1) + GradedElement::xi(&b, 2)).unwrap();
        let a = kw_bracket(&e, &f).unwrap();
        assert_eq!(a.degree(), 0);
        assert_eq!(a.theta(), &GradedElement::x(&b, 1));
        let c = ClauseBracket::new(&e, &f).unwrap();
        assert_eq!(c.tilde(&[]).unwrap(), GradedElement::x(&b, 1));
        let raw = ExplicitBracket::new(&e, &f, InteriorForm::Shuffle).unwrap();
        assert_eq!(raw.tilde(&[]).unwrap(), GradedElement::x(&b, 1).scale(&int(2)));
    }

    #[test]
    fn function_against_degree_two_is_symbol() {
        let b = BundleSpec::split(1).into_bundle();
        let theta = GradedElement::xi(&b, 1) * GradedElement::p(&b, 1);
        let d = MultiBracket::from_theta(theta).unwrap();
        assert_eq!(d.degree(), 3);
        let dd = MultiBracket::from_theta(GradedElement::p(&b, 1)).unwrap();
        let f = MultiBracket::new(GradedElement::x(&b, 1) * GradedElement::x(&b, 1), 0).unwrap();
        let a = kw_bracket(&f, &dd).unwrap();
        let c = ClauseBracket::new(&f, &dd).unwrap();
        assert_eq!(a.theta(), &c.tilde(&[]).unwrap());
        let back = ClauseBracket::new(&dd, &f).unwrap();
        assert_eq!(back.tilde(&[]).unwrap(), -a.theta().clone());
    }

    #[test]
    fn uncovered_degrees_have_no_clause() {
        let b = BundleSpec::identity(0, 3).into_bundle();
        let c = MultiBracket::zero(&b, 3);
        assert!(ClauseBracket::new(&c, &c).is_err());
        assert!(!ClauseBracket::applies(0, 1));
    }
}
