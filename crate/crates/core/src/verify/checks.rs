//! The individual checks.

use crate::combinatorics::unshuffles;
use crate::error::{Error, Result};
use crate::graded_ring::GradedElement;
use crate::kw::{BracketTable, MultiBracket, PreCourant};
use crate::poisson::{derived_courant, pbracket, pbracket_unchecked};

use super::{run_check, Bound, CheckResult, TupleSpace, VerificationReport, TUPLE_BUDGET};

/// The tuple space for a residual of total order `order`: exact when the
/// bound covers it, otherwise the requested degree.
fn space_for(c_bundle: &crate::graded_ring::Bundle, len: usize, bound: Bound, order: u32) -> Result<(TupleSpace, Bound)> {
    match bound {
        Bound::Exact => {
            let space = TupleSpace::within_budget(c_bundle, len, order)?;
            let got = if space.cap() == order {
                Bound::Exact
            } else {
                Bound::Degree(space.cap())
            };
            Ok((space, got))
        }
        Bound::Degree(k) => {
            let space = TupleSpace::new(c_bundle, len, k);
            if space.count() > TUPLE_BUDGET {
                return Err(Error::Domain(format!(
                    "{} tuples of {len} sections at D={k} exceed the budget of {TUPLE_BUDGET}",
                    space.count()
                )));
            }
            Ok((space, bound))
        }
    }
}

fn swap_adjacent(t: &[GradedElement], i: usize) -> Vec<GradedElement> {
    let mut s = t.to_vec();
    s.swap(i, i + 1);
    s
}

fn without_pair(t: &[GradedElement], i: usize) -> Vec<GradedElement> {
    t.iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != i + 1)
        .map(|(_, e)| e.clone())
        .collect()
}

/// The symmetry relations in adjacent slots of `C~`. The last pair is the
/// compatibility with the pairing, the others the symmetry conditions.
fn pre_courant_checks(c: &dyn PreCourant, space: &TupleSpace, bound: Bound) -> Result<VerificationReport> {
    let n = c.degree();
    let mut report = VerificationReport::default();
    if n < 2 {
        report
            .notes
            .push(format!("degree {n}: no symmetry relations to check"));
        return Ok(report);
    }
    for i in 0..n - 1 {
        let (name, law) = if i == n - 2 {
            (
                "pre-courant-1".to_string(),
                "sigma(e_1..e_{n-1}) <e, e'> = <C(.., e), e'> + <e, C(.., e')>".to_string(),
            )
        } else {
            (
                format!("pre-courant-2.{}", i + 1),
                format!(
                    "<C(.., e_{0}, e_{1}, ..) + C(.., e_{1}, e_{0}, ..), e> = sigma(.., ^e_{0}, ^e_{1}, .., e) <e_{0}, e_{1}>",
                    i + 1,
                    i + 2
                ),
            )
        };
        let result = run_check(name, law, space, bound, |t| {
            let lhs = c.tilde(t)? + c.tilde(&swap_adjacent(t, i))?;
            let rhs = c.symbol(&without_pair(t, i))?.apply(&pbracket_unchecked(&t[i], &t[i + 1]));
            Ok(lhs - rhs)
        })?;
        report.checks.push(result);
    }
    Ok(report)
}

/// Symmetry relations of a generated bracket, exact.
pub fn check_pre_courant(c: &MultiBracket) -> Result<VerificationReport> {
    let (space, bound) = space_for(c.bundle(), c.degree(), Bound::Exact, c.theta().max_p_degree())?;
    pre_courant_checks(c, &space, bound)
}

/// Symmetry relations of a table on tuples of total x-degree at most `d`
/// (capped at the table's own bound).
pub fn check_pre_courant_table(t: &BracketTable, d: u32) -> Result<VerificationReport> {
    let k = d.min(t.bound());
    let (space, bound) = space_for(t.bundle(), t.degree(), Bound::Degree(k), k)?;
    pre_courant_checks(t, &space, bound)
}

/// The axioms of a Courant algebroid for the derived anchor and Dorfman
/// bracket of a degree-3 generator.
pub fn check_courant(theta: &GradedElement, bound: Bound) -> Result<VerificationReport> {
    let cd = derived_courant(theta)?;
    let bundle = cd.bundle();
    let q = theta.max_p_degree();
    let mut report = VerificationReport::default();
    let (space, b) = space_for(bundle, 3, bound, q)?;
    report.checks.push(run_check(
        "courant-compat",
        "rho(u) <v, w> = <[u, v], w> + <v, [u, w]>",
        &space,
        b,
        |t| {
            let (u, v, w) = (&t[0], &t[1], &t[2]);
            let lhs = cd.anchor(u, &cd.pairing(v, w)?)?;
            Ok(lhs - cd.pairing(&cd.dorfman(u, v)?, w)? - cd.pairing(v, &cd.dorfman(u, w)?)?)
        },
    )?);
    report.checks.push(run_check(
        "courant-symmetric",
        "rho(u) <v, w> = <u, [v, w] + [w, v]>",
        &space,
        b,
        |t| {
            let (u, v, w) = (&t[0], &t[1], &t[2]);
            let lhs = cd.anchor(u, &cd.pairing(v, w)?)?;
            Ok(lhs - cd.pairing(u, &(cd.dorfman(v, w)? + cd.dorfman(w, v)?))?)
        },
    )?);
    let (space, b) = space_for(bundle, 3, bound, 2 * q)?;
    report.checks.push(run_check(
        "leibniz",
        "[u, [v, w]] = [[u, v], w] + [v, [u, w]]",
        &space,
        b,
        |t| {
            let (u, v, w) = (&t[0], &t[1], &t[2]);
            let lhs = cd.dorfman(u, &cd.dorfman(v, w)?)?;
            Ok(lhs - cd.dorfman(&cd.dorfman(u, v)?, w)? - cd.dorfman(v, &cd.dorfman(u, w)?)?)
        },
    )?);
    Ok(report)
}

/// `sum_{k=n-1}^{2n-3} sum_{tau in Sh(k-n+1, n-2)} sgn(tau) (-1)^{nk}
///   C(e_tau(1..k-n+1), C(e_tau(k-n+2..k-1), e_k), e_{k+1}, .., e_{2n-3})`
/// for `C` of odd degree `n >= 3`. It vanishes for all sections iff `C` is
/// closed.
pub fn explicit_closure_sum(c: &dyn PreCourant, args: &[GradedElement]) -> Result<GradedElement> {
    let n = c.degree();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "the explicit closure identity needs odd degree at least 3, got {n}"
        )));
    }
    if args.len() != 2 * n - 3 {
        return Err(Error::Arity {
            expected: 2 * n - 3,
            got: args.len(),
        });
    }
    let mut out = GradedElement::zero(c.bundle());
    for k in n - 1..=2 * n - 3 {
        let outer = k - (n - 1);
        let sign = if (n * k).is_multiple_of(2) { 1 } else { -1 };
        for tau in unshuffles(outer, n - 2) {
            let pick = |r: std::ops::Range<usize>| r.map(|j| args[tau.images[j]].clone());
            let mut inner: Vec<GradedElement> = pick(outer..k - 1).collect();
            inner.push(args[k - 1].clone());
            let mut full: Vec<GradedElement> = pick(0..outer).collect();
            full.push(c.eval(&inner)?);
            full.extend(args[k..].iter().cloned());
            let v = c.eval(&full)?;
            if sign * tau.sign > 0 {
                out += v;
            } else {
                out -= v;
            }
        }
    }
    Ok(out)
}

/// `{theta, theta} = 0`, and for odd degree the explicit identity on
/// section tuples.
pub fn check_closure(c: &MultiBracket, bound: Bound) -> Result<VerificationReport> {
    let n = c.degree();
    let mut report = VerificationReport::default();
    let square = pbracket(c.theta(), c.theta())?;
    let witness = (!square.is_zero()).then(|| super::Witness {
        args: vec![],
        residual: square,
    });
    report.checks.push(CheckResult {
        name: "closure".into(),
        law: "[C, C] = 0, i.e. {theta, theta} = 0".into(),
        witness,
        bound: Bound::Exact,
        cases: 1,
    });
    if n.is_multiple_of(2) {
        report
            .notes
            .push(format!("degree {n} is even: the self-bracket vanishes by graded symmetry"));
    } else if n >= 3 {
        let (space, b) = space_for(c.bundle(), 2 * n - 3, bound, 2 * c.theta().max_p_degree())?;
        report.checks.push(run_check(
            "closure-explicit",
            "sum over k and Sh(k-n+1, n-2) of signed C(.., C(.., e_k), ..) = 0",
            &space,
            b,
            |t| explicit_closure_sum(c, t),
        )?);
    }
    Ok(report)
}

/// `C(e_1..e_{a-1}, C(e'_1..e'_a)) = sum_i C(e'_1.., C(e_1..e_{a-1}, e'_i), ..e'_a)`
/// for a bracket of arity `a >= 2`, reported together with closure.
pub fn check_filippov(c: &MultiBracket, bound: Bound) -> Result<VerificationReport> {
    let a = c.arity();
    if a < 2 {
        return Err(Error::Domain(format!(
            "the Filippov identity needs arity at least 2, got {a}"
        )));
    }
    let (space, b) = space_for(c.bundle(), 2 * a - 1, bound, 2 * c.theta().max_p_degree())?;
    let mut report = VerificationReport::default();
    report.checks.push(run_check(
        "filippov",
        "C(e_1..e_{a-1}, C(f_1..f_a)) = sum_i C(f_1.., C(e_1..e_{a-1}, f_i), ..f_a)",
        &space,
        b,
        |t| {
            let (es, fs) = t.split_at(a - 1);
            let lhs = {
                let mut args = es.to_vec();
                args.push(c.eval(fs)?);
                c.eval(&args)?
            };
            let mut rhs = GradedElement::zero(c.bundle());
            for i in 0..a {
                let mut inner = es.to_vec();
                inner.push(fs[i].clone());
                let mut args = fs.to_vec();
                args[i] = c.eval(&inner)?;
                rhs += c.eval(&args)?;
            }
            Ok(lhs - rhs)
        },
    )?);
    report.merge(check_closure(c, bound)?);
    report.notes.push(if a == 2 {
        "arity 2: the Filippov identity is the Leibniz identity and is equivalent to closure".into()
    } else {
        format!("arity {a}: the Filippov identity and closure are independent conditions")
    });
    Ok(report)
}
