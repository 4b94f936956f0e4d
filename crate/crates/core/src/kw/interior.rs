//! Interior products `i_{C2} C1`.

use crate::combinatorics::{sign_of, subsets, unshuffles};
use crate::error::{Error, Result};
use crate::graded_ring::{int, Bundle, GradedElement};
use crate::poisson::pbracket_unchecked;

use super::{
    check_args, eval_arity, eval_from_tilde, pairing, same_bundle_of, symbol_arity,
    symbol_from_tilde, theta_from_table, BracketTable, MultiBracket, PreCourant, SymbolValue,
};

/// Which of the two equivalent sums evaluates `i_{C2} C1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteriorForm {
    /// Sum over subsets `I` with the sign `sgn(J, I) (-1)^t`.
    Shuffle,
    /// Double sum over `k` and `Sh(k-m+1, m-2)` with the sign `sgn(tau) (-1)^{mk}`.
    Unshuffle,
}

/// `i_{C2} C1` for `C1` of degree `n` and `C2` of degree `m`, a bracket of
/// degree `n + m - 2`.
///
/// A section `C2 = e` inserts itself in the first slot, a function
/// `C2 = f` gives `sigma_C1(..) f`, and inserting anything into a function
/// gives zero.
pub struct InteriorProduct<'a> {
    c1: &'a dyn PreCourant,
    c2: &'a dyn PreCourant,
    form: InteriorForm,
}

/// One term `sign C1(e_before.., C2(e_inner..), e_after..)` of an interior
/// product, with 0-based argument positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionTerm {
    pub sign: i32,
    pub before: Vec<usize>,
    pub inner: Vec<usize>,
    pub after: Vec<usize>,
}

fn parity(k: usize) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Terms of the sum over subsets `I` of size `n - 2` of `total` arguments.
fn shuffle_terms(n: usize, total: usize) -> Vec<InsertionTerm> {
    subsets(total, n - 2)
        .into_iter()
        .map(|i_set| {
            let j_set: Vec<usize> = (0..total).filter(|k| !i_set.contains(k)).collect();
            let t = match j_set.last() {
                None => 0,
                Some(&last) if last == total - 1 => n - 2,
                Some(&last) => i_set.iter().filter(|&&i| i < last).count(),
            };
            let mut perm = j_set.clone();
            perm.extend(&i_set);
            InsertionTerm {
                sign: sign_of(&perm) * parity(t),
                before: i_set[..t].to_vec(),
                inner: j_set,
                after: i_set[t..].to_vec(),
            }
        })
        .collect()
}

/// Terms of the double sum over `k` and `Sh(k-m+1, m-2)` on `total`
/// arguments, with sign `sgn(tau) (-1)^{mk}`; the symbol formula's
/// `(-1)^{m(k-m+1)}` is the same sign since `m(m-1)` is even.
fn unshuffle_terms(m: usize, total: usize) -> Vec<InsertionTerm> {
    if m == 1 {
        return vec![InsertionTerm {
            sign: 1,
            before: vec![],
            inner: vec![],
            after: (0..total).collect(),
        }];
    }
    let mut out = Vec::new();
    for k in m - 1..=total {
        let head = k + 1 - m;
        for tau in unshuffles(head, m - 2) {
            let mut inner = tau.images[head..].to_vec();
            inner.push(k - 1);
            out.push(InsertionTerm {
                sign: tau.sign * parity(m * k),
                before: tau.images[..head].to_vec(),
                inner,
                after: (k..total).collect(),
            });
        }
    }
    out
}

/// The terms of `i_{C2} C1` for `n >= 2`, `m >= 1` on `n + m - 3` arguments.
pub fn insertion_terms(n: usize, m: usize, form: InteriorForm) -> Vec<InsertionTerm> {
    assert!(n >= 2 && m >= 1, "insertion terms need n >= 2 and m >= 1");
    match form {
        InteriorForm::Shuffle => shuffle_terms(n, n + m - 3),
        InteriorForm::Unshuffle => unshuffle_terms(m, n + m - 3),
    }
}

fn render_term(outer: &str, inner: &str, t: &InsertionTerm) -> String {
    let arg = |i: &usize| format!("e{}", i + 1);
    let inner_args: Vec<String> = t.inner.iter().map(arg).collect();
    let mut parts: Vec<String> = t.before.iter().map(arg).collect();
    parts.push(format!("{inner}({})", inner_args.join(",")));
    parts.extend(t.after.iter().map(arg));
    format!("{outer}({})", parts.join(", "))
}

/// `[C1, C2] = i_{C1} C2 - (-1)^{nm} i_{C2} C1` expanded on generic
/// arguments `e1, e2, ..` as signed terms, `i_{C2} C1` first.
pub fn explicit_bracket_expansion(n: usize, m: usize, form: InteriorForm) -> Vec<(i32, String)> {
    let mut out: Vec<(i32, String)> = Vec::new();
    let outer_sign = -parity(n * m);
    for t in insertion_terms(n, m, form) {
        out.push((outer_sign * t.sign, render_term("C1", "C2", &t)));
    }
    for t in insertion_terms(m, n, form) {
        out.push((t.sign, render_term("C2", "C1", &t)));
    }
    out
}

/// Renders signed terms as `a - b + c`.
pub fn render_expansion(terms: &[(i32, String)]) -> String {
    let mut s = String::new();
    for (i, (sign, term)) in terms.iter().enumerate() {
        match (i, *sign < 0) {
            (0, false) => {}
            (0, true) => s.push('-'),
            (_, false) => s.push_str(" + "),
            (_, true) => s.push_str(" - "),
        }
        s.push_str(term);
    }
    s
}

fn pick(args: &[GradedElement], idx: &[usize]) -> Vec<GradedElement> {
    idx.iter().map(|&i| args[i].clone()).collect()
}

impl<'a> InteriorProduct<'a> {
    pub fn new(c1: &'a dyn PreCourant, c2: &'a dyn PreCourant, form: InteriorForm) -> Result<Self> {
        same_bundle_of(c1, c2)?;
        if c1.degree() + c2.degree() < 2 {
            return Err(Error::Domain(format!(
                "interior product of degrees {} and {} has negative degree",
                c2.degree(),
                c1.degree()
            )));
        }
        Ok(InteriorProduct { c1, c2, form })
    }

    pub fn form(&self) -> InteriorForm {
        self.form
    }

    /// Evaluates `C1(.., C2(..), ..)` for one term, or `None` if the inner
    /// value vanishes.
    fn outer_args(&self, args: &[GradedElement], t: &InsertionTerm) -> Result<Option<Vec<GradedElement>>> {
        let inner = self.c2.eval(&pick(args, &t.inner))?;
        if inner.is_zero() {
            return Ok(None);
        }
        let mut outer = pick(args, &t.before);
        outer.push(inner);
        outer.extend(pick(args, &t.after));
        Ok(Some(outer))
    }

    fn insertion_sum(&self, args: &[GradedElement]) -> Result<GradedElement> {
        let (n, m) = (self.c1.degree(), self.c2.degree());
        let mut out = GradedElement::zero(self.bundle());
        for t in insertion_terms(n, m, self.form) {
            if let Some(outer) = self.outer_args(args, &t)? {
                let v = self.c1.eval(&outer)?;
                if t.sign < 0 {
                    out -= v;
                } else {
                    out += v;
                }
            }
        }
        Ok(out)
    }

    /// The symbol by the explicit two-sum formula (`m >= 2`).
    fn symbol_sum(&self, args: &[GradedElement]) -> Result<SymbolValue> {
        let (n, m) = (self.c1.degree(), self.c2.degree());
        let mut out = SymbolValue::zero(self.bundle());
        for t in unshuffle_terms(m, args.len()) {
            if let Some(outer) = self.outer_args(args, &t)? {
                out.add_assign(&self.c1.symbol(&outer)?.scale(&int(t.sign as i64)));
            }
        }
        for tau in unshuffles(n - 2, m - 2) {
            let s1 = self.c1.symbol(&pick(args, &tau.images[..n - 2]))?;
            if s1.is_zero() {
                continue;
            }
            let s2 = self.c2.symbol(&pick(args, &tau.images[n - 2..]))?;
            let sign = tau.sign * parity(m * (n - 2));
            let composed = s2.map(|image| s1.apply(image));
            out.add_assign(&composed.scale(&int(sign as i64)));
        }
        Ok(out)
    }
}

impl PreCourant for InteriorProduct<'_> {
    fn bundle(&self) -> &Bundle {
        self.c1.bundle()
    }

    fn degree(&self) -> usize {
        self.c1.degree() + self.c2.degree() - 2
    }

    fn eval(&self, args: &[GradedElement]) -> Result<GradedElement> {
        check_args(args, eval_arity(self.degree()))?;
        let (n, m) = (self.c1.degree(), self.c2.degree());
        if m == 0 {
            return eval_from_tilde(self, args);
        }
        if n == 0 || (n == 1 && m >= 2) {
            return Ok(GradedElement::zero(self.bundle()));
        }
        if n == 1 {
            return Ok(pairing(&self.c2.eval(&[])?, &self.c1.eval(&[])?));
        }
        self.insertion_sum(args)
    }

    fn tilde(&self, args: &[GradedElement]) -> Result<GradedElement> {
        let k = self.degree();
        check_args(args, k)?;
        if self.c2.degree() == 0 {
            let f = self.c2.tilde(&[])?;
            return Ok(self.c1.symbol(args)?.apply(&f));
        }
        if k == 0 {
            return self.eval(&[]);
        }
        let v = self.eval(&args[..k - 1])?;
        Ok(pairing(&v, &args[k - 1]))
    }

    fn symbol(&self, args: &[GradedElement]) -> Result<SymbolValue> {
        let k = self.degree();
        check_args(args, symbol_arity(k))?;
        let (n, m) = (self.c1.degree(), self.c2.degree());
        if m == 0 {
            return symbol_from_tilde(self, args);
        }
        if k < 2 || n <= 1 {
            return Ok(SymbolValue::zero(self.bundle()));
        }
        if m == 1 {
            let mut full = vec![self.c2.eval(&[])?];
            full.extend_from_slice(args);
            return self.c1.symbol(&full);
        }
        self.symbol_sum(args)
    }
}

/// `i_{C2} C1` as a generator.
///
/// Inserting a function or a section is a Poisson bracket with its
/// generator. For `n, m >= 2` the insertion is in general a higher-order
/// operator (for `n = m = 2` it is a composition of derivations) and only the
/// antisymmetrized combination in the bracket is a pre-multi-Courant
/// structure; the generator is then recovered from a table whose bound covers
/// the x-degree and the differential order of the operands, and an error
/// carrying the violated relation is returned when none exists.
pub fn interior_product(c1: &MultiBracket, c2: &MultiBracket) -> Result<MultiBracket> {
    let ip = InteriorProduct::new(c1, c2, InteriorForm::Unshuffle)?;
    let (n, m) = (c1.degree(), c2.degree());
    let k = ip.degree();
    if m <= 1 {
        return MultiBracket::new(pbracket_unchecked(c2.theta(), c1.theta()), k);
    }
    if n <= 1 {
        return Ok(MultiBracket::zero(c1.bundle(), k));
    }
    let (t1, t2) = (c1.theta(), c2.theta());
    let bound = (t1.max_x_degree() + t2.max_x_degree())
        .max(t1.max_p_degree() + t2.max_p_degree())
        .max(1);
    let table = BracketTable::from_evaluator(&ip, bound)?;
    theta_from_table(&table).map_err(|err| match err {
        Error::InconsistentTable { relation, residual } => Error::Domain(format!(
            "interior product of degrees {m} into {n} is not a pre-multi-Courant structure: \
             {relation} leaves residual {residual}"
        )),
        other => other,
    })
}
