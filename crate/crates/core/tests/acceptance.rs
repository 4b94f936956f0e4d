//! The twelve acceptance criteria, each at exact equality. Prints one
//! `PASS`/`FAIL` line per criterion.

mod common;

use std::io::Write;
use std::time::Instant;

use common::{bundles, constant_multivector, random_bracket, random_element, random_homogeneous_multivector, rng, tensorial_bracket};
use kwalg::cli::run;
use kwalg::expr::parse_element;
use kwalg::graded_ring::{int, rat};
use kwalg::higher::{iterated_pbracket, pair, HigherBracket, Multivector};
use kwalg::kw::{
    explicit_bracket_expansion, generating_family, kw_bracket, kw_wedge, render_expansion, theta_from_table,
    BracketTable, ExplicitBracket, InteriorForm, InteriorProduct, MultiBracket, PreCourant, SymbolValue,
    TildeWedge, Wedge,
};
use kwalg::verify::{
    builtin_example, check_closure, check_courant, exterior_derivative, explicit_closure_sum, standard_courant,
    twisted_courant, Bound, Form,
};
use kwalg::{pbracket, Bundle, BundleSpec, Error, GradedElement};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Tuples of family members with total x-degree at most `d`, in lex order.
fn bounded_tuples(family: &[GradedElement], len: usize, d: u32) -> Vec<Vec<GradedElement>> {
    fn go(family: &[GradedElement], len: usize, left: u32, cur: &mut Vec<GradedElement>, out: &mut Vec<Vec<GradedElement>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for e in family {
            let x = e.max_x_degree();
            if x <= left {
                cur.push(e.clone());
                go(family, len, left - x, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(family, len, d, &mut Vec::new(), &mut out);
    out
}

/// `eval` and `symbol` agree on every generating tuple of total x-degree at most `d`.
fn agree_on_family(a: &dyn PreCourant, b: &dyn PreCourant, d: u32) -> Result<usize, String> {
    ensure(a.degree() == b.degree(), || format!("degrees {} and {}", a.degree(), b.degree()))?;
    let n = a.degree();
    let family = generating_family(a.bundle(), d);
    let mut cases = 0;
    for args in bounded_tuples(&family, n.saturating_sub(1), d) {
        let (x, y) = (a.eval(&args).unwrap(), b.eval(&args).unwrap());
        ensure(x == y, || format!("eval at {args:?}: {x} vs {y}"))?;
        cases += 1;
    }
    for args in bounded_tuples(&family, n.saturating_sub(2), d) {
        let (x, y) = (a.symbol(&args).unwrap(), b.symbol(&args).unwrap());
        ensure(x == y, || format!("symbol at {args:?}"))?;
        cases += 1;
    }
    Ok(cases)
}

fn poisson_algebra() -> Outcome {
    let mut r = rng(101);
    let mut triples = 0;
    for b in bundles() {
        for _ in 0..80 {
            let pick = |r: &mut ChaCha8Rng| {
                let k = r.gen_range(0..=4);
                (random_element(r, &b, k, 2, 1, 3), k)
            };
            let ((x, i), (y, j), (z, _)) = (pick(&mut r), pick(&mut r), pick(&mut r));
            let br = |u: &GradedElement, v: &GradedElement| pbracket(u, v).unwrap();
            let s = int(sign(i * j));
            ensure(br(&x, &y) == -br(&y, &x).scale(&s), || format!("graded symmetry at {x}, {y}"))?;
            let leibniz = br(&x, &y) * z.clone() + y.clone().scale(&s) * br(&x, &z);
            ensure(br(&x, &(&y * &z)) == leibniz, || format!("Leibniz at {x}, {y}, {z}"))?;
            let jacobi = br(&br(&x, &y), &z) + br(&y, &br(&x, &z)).scale(&s);
            ensure(br(&x, &br(&y, &z)) == jacobi, || format!("Jacobi at {x}, {y}, {z}"))?;
            let v = br(&x, &y);
            ensure(v.is_zero() || (i + j >= 2 && v.is_homogeneous_of((i + j - 2) as u32)), || {
                format!("degree of {{{x}, {y}}} = {v}")
            })?;
            triples += 1;
        }
    }
    Ok(format!("{triples} triples"))
}

fn upsilon_morphism() -> Outcome {
    let mut r = rng(102);
    let (mut pairs, mut cases) = (0, 0);
    for b in bundles() {
        for _ in 0..17 {
            let (n, m) = (r.gen_range(1..=3), r.gen_range(1..=3));
            let (c1, c2) = (random_bracket(&mut r, &b, n), random_bracket(&mut r, &b, m));
            let w = kw_wedge(&c1, &c2).map_err(|e| e.to_string())?;
            cases += agree_on_family(&w, &Wedge::new(&c1, &c2).unwrap(), 1).map_err(|e| format!("wedge: {e}"))?;
            cases += agree_on_family(&w, &TildeWedge::new(&c1, &c2).unwrap(), 1).map_err(|e| format!("wedge: {e}"))?;
            if n + m > 2 {
                let a = kw_bracket(&c1, &c2).map_err(|e| e.to_string())?;
                let e = ExplicitBracket::new(&c1, &c2, InteriorForm::Unshuffle).unwrap();
                cases += agree_on_family(&a, &e, 1).map_err(|e| format!("bracket: {e}"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs, {cases} tuples at D=1"))
}

fn interior_product() -> Outcome {
    let mut r = rng(103);
    let mut pairs = 0;
    let b = &bundles()[0];
    for n in 1..=4 {
        for m in 1..=4 {
            for _ in 0..2 {
                let (c1, c2) = (random_bracket(&mut r, b, n), random_bracket(&mut r, b, m));
                let s = InteriorProduct::new(&c1, &c2, InteriorForm::Shuffle).unwrap();
                let u = InteriorProduct::new(&c1, &c2, InteriorForm::Unshuffle).unwrap();
                let len = s.degree();
                let family = generating_family(b, 1);
                let mut tuples = bounded_tuples(&generating_family(b, 0), len, 0);
                tuples.extend((0..20).map(|_| (0..len).map(|_| family[r.gen_range(0..family.len())].clone()).collect()));
                for args in tuples {
                    let (x, y) = (s.tilde(&args).unwrap(), u.tilde(&args).unwrap());
                    ensure(x == y, || format!("n={n} m={m} at {args:?}: {x} vs {y}"))?;
                }
                pairs += 1;
            }
        }
    }
    let display = render_expansion(&explicit_bracket_expansion(3, 3, InteriorForm::Unshuffle));
    let expected = "C1(C2(e1,e2), e3) - C1(e1, C2(e2,e3)) + C1(e2, C2(e1,e3)) \
                    + C2(C1(e1,e2), e3) - C2(e1, C1(e2,e3)) + C2(e2, C1(e1,e3))";
    ensure(display == expected, || format!("expansion: {display}"))?;
    Ok(format!("{pairs} pairs over n, m <= 4; six-term expansion matches"))
}

fn courant_recovery() -> Outcome {
    let report = check_courant(&standard_courant(2), Bound::Degree(2)).map_err(|e| e.to_string())?;
    ensure(report.passed(), || report.render_machine())?;
    ensure(report.checks.iter().all(|c| c.bound == Bound::Degree(2)), || report.render_machine())?;
    let cases: Vec<String> = report.checks.iter().map(|c| format!("{} {}", c.name, c.cases)).collect();
    Ok(format!("D=2: {}", cases.join(", ")))
}

fn random_three_form(r: &mut ChaCha8Rng, b: &Bundle) -> Form {
    let mut comps = vec![];
    for idx in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]] {
        if r.gen_bool(0.5) {
            let mut f = GradedElement::constant(b, rat(r.gen_range(-2..=2), 1));
            for i in 1..=4 {
                if r.gen_bool(0.3) {
                    f += GradedElement::x(b, i).scale(&rat(r.gen_range(-2..=2), 1));
                }
            }
            if r.gen_bool(0.4) {
                f += GradedElement::x(b, r.gen_range(1..=4)) * GradedElement::x(b, r.gen_range(1..=4));
            }
            comps.push((idx.to_vec(), f));
        }
    }
    Form::from_components(b, 3, comps).unwrap()
}

fn twist_equivalence() -> Outcome {
    let mut r = rng(105);
    let b = BundleSpec::split(4).into_bundle();
    let (mut closed, mut open) = (0, 0);
    let exact = Form::from_components(&b, 2, [(vec![1, 2], GradedElement::x(&b, 3) * GradedElement::x(&b, 4))]).unwrap();
    let mut forms = vec![exterior_derivative(&exact)];
    forms.extend((0..15).map(|_| random_three_form(&mut r, &b)));
    for h in forms {
        let theta = twisted_courant(&h).unwrap();
        let c = MultiBracket::from_theta(theta.clone()).unwrap();
        let report = check_closure(&c, Bound::Degree(0)).map_err(|e| e.to_string())?;
        let is_closed = exterior_derivative(&h).is_zero();
        ensure(report.passed() == is_closed, || format!("H = {h}: closure {} but dH = 0 is {is_closed}", report.passed()))?;
        for check in &report.checks {
            let Some(w) = &check.witness else { continue };
            let recomputed = if w.args.is_empty() {
                pbracket(&theta, &theta).unwrap()
            } else {
                explicit_closure_sum(&c, &w.args).unwrap()
            };
            ensure(!w.residual.is_zero() && recomputed == w.residual, || format!("H = {h}: witness of {} does not replay", check.name))?;
        }
        if is_closed {
            closed += 1;
        } else {
            open += 1;
        }
    }
    ensure(closed >= 3 && open >= 3, || format!("closed {closed}, open {open}"))?;
    Ok(format!("{closed} closed, {open} open forms"))
}

fn parity_auto_closure() -> Outcome {
    let mut r = rng(106);
    let mut count = 0;
    for b in bundles().into_iter().chain([BundleSpec::identity(1, 4).into_bundle()]) {
        for _ in 0..6 {
            let theta = random_element(&mut r, &b, 4, 2, 2, 4);
            let sq = pbracket(&theta, &theta).unwrap();
            ensure(sq.is_zero(), || format!("{{{theta}, {theta}}} = {sq}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} generators of degree 4"))
}

fn pairing_triple_equality() -> Outcome {
    let mut r = rng(107);
    let mut count = 0;
    let bs: Vec<Bundle> = bundles().into_iter().chain([BundleSpec::identity(1, 4).into_bundle()]).collect();
    for b in &bs {
        for _ in 0..26 {
            let (k, l) = (r.gen_range(1..=3.min(b.r())), r.gen_range(1..=3.min(b.r())));
            let p = random_homogeneous_multivector(&mut r, b, k);
            let q = random_homogeneous_multivector(&mut r, b, l);
            let explicit = pair(&p, &q).unwrap().into_value();
            let poisson = pbracket(p.value(), q.value()).unwrap();
            ensure(explicit == poisson, || format!("pair vs pbracket at {p:?}, {q:?}"))?;
            if p.is_zero() || q.is_zero() {
                count += 1;
                continue;
            }
            let (cp, cq) = (MultiBracket::new(p.value().clone(), k).unwrap(), MultiBracket::new(q.value().clone(), l).unwrap());
            let kw = kw_bracket(&cp, &cq).unwrap();
            ensure(kw.theta() == &explicit, || format!("bracket vs pair at {p:?}, {q:?}"))?;
            if k + l > 2 {
                let e = ExplicitBracket::new(&cp, &cq, InteriorForm::Unshuffle).unwrap();
                let family = generating_family(b, 1);
                for args in bounded_tuples(&family, k + l - 3, 1) {
                    ensure(e.eval(&args).unwrap() == kw.eval(&args).unwrap(), || format!("evaluation at {args:?}"))?;
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} multivector pairs"))
}

fn factor(r: &mut ChaCha8Rng, b: &Bundle, k: usize, constant: bool) -> Multivector {
    if constant {
        constant_multivector(r, b, k)
    } else {
        random_homogeneous_multivector(r, b, k)
    }
}

/// One instance of the derivation law in a random slot; `None` when degenerate.
fn derivation_law_holds(r: &mut ChaCha8Rng, h: &HigherBracket, constant: bool) -> Option<bool> {
    let b = h.bundle().clone();
    let n = h.arity();
    let mut args: Vec<Multivector> = (0..n)
        .map(|_| {
            let k = r.gen_range(1..=2);
            random_homogeneous_multivector(r, &b, k)
        })
        .collect();
    let i = r.gen_range(0..n);
    let (pd, rd) = (r.gen_range(1..=2), r.gen_range(1..=2));
    let (p, q) = (factor(r, &b, pd, constant), factor(r, &b, rd, constant));
    if args.iter().any(Multivector::is_zero) || p.wedge(&q).unwrap().is_zero() {
        return None;
    }
    let deg = |m: &Multivector| m.value().homogeneous_degree().unwrap() as usize;
    let later: usize = args[i + 1..].iter().map(deg).sum();
    args[i] = p.wedge(&q).unwrap();
    let lhs = h.eval(&args).unwrap().into_value();
    args[i] = q.clone();
    let first = p.value().scale(&int(sign(pd * later))) * h.eval(&args).unwrap().into_value();
    args[i] = p.clone();
    let second = q.value().scale(&int(sign(rd * (pd + later)))) * h.eval(&args).unwrap().into_value();
    Some(lhs == first + second)
}

/// Tally of the derivation law over random tuples.
fn derivation_tally(r: &mut ChaCha8Rng, tuples: usize, make: impl Fn(&mut ChaCha8Rng, &Bundle, usize) -> (MultiBracket, bool)) -> (usize, usize) {
    let (mut run, mut failed) = (0, 0);
    let bs = bundles();
    while run < tuples {
        let b = &bs[run % bs.len()];
        let n = 1 + run % 3;
        let (c, constant) = make(r, b, n);
        if let Some(ok) = derivation_law_holds(r, &HigherBracket::new(c), constant) {
            run += 1;
            failed += usize::from(!ok);
        }
    }
    (run, failed)
}

/// The restriction of an extension to sections, as a bracket.
struct Restriction<'a>(&'a HigherBracket);

impl PreCourant for Restriction<'_> {
    fn bundle(&self) -> &Bundle {
        self.0.bundle()
    }

    fn degree(&self) -> usize {
        self.0.arity()
    }

    fn tilde(&self, args: &[GradedElement]) -> kwalg::Result<GradedElement> {
        let mv: Vec<Multivector> = args.iter().map(|e| Multivector::new(e.clone()).unwrap()).collect();
        Ok(self.0.eval(&mv)?.into_value())
    }
}

/// Sub-results of the extension suite, in order: derivation law on general
/// tuples, derivation law where it is well posed, symmetric part law,
/// restriction then extension, and the iterated-bracket counterexample.
fn extension_parts() -> Vec<(&'static str, Outcome)> {
    let mut r = rng(108);
    let mut parts = Vec::new();

    let (run, failed) = derivation_tally(&mut r, 120, |r, b, n| (random_bracket(r, b, n), false));
    parts.push((
        "derivation law, general tuples",
        if failed == 0 {
            Ok(format!("{run} tuples"))
        } else {
            Err(format!("{failed}/{run} tuples violate it"))
        },
    ));

    let (run, failed) = derivation_tally(&mut r, 120, |r, b, n| {
        if r.gen_bool(0.5) {
            (random_bracket(r, b, n), true)
        } else {
            (tensorial_bracket(r, b, n), false)
        }
    });
    parts.push((
        "derivation law, constant coefficients or no symbol",
        if failed == 0 { Ok(format!("{run} tuples")) } else { Err(format!("{failed}/{run} tuples violate it")) },
    ));

    let symmetric = (|| {
        let mut count = 0;
        for b in bundles() {
            for n in 2..=4 {
                let h = HigherBracket::new(random_bracket(&mut r, &b, n));
                for _ in 0..12 {
                    let outer: Vec<Multivector> =
                        (0..n - 2).map(|_| common::random_multivector(&mut r, &b, 2)).collect();
                    let (e, f) = (common::random_section(&mut r, &b), common::random_section(&mut r, &b));
                    let i = r.gen_range(0..=n - 2);
                    let with = |x: &GradedElement, y: &GradedElement| {
                        let mut a = outer.clone();
                        a.insert(i, Multivector::new(y.clone()).unwrap());
                        a.insert(i, Multivector::new(x.clone()).unwrap());
                        h.eval(&a).unwrap().into_value()
                    };
                    let sigma: SymbolValue = h.symbol(&outer).unwrap();
                    ensure(with(&e, &f) + with(&f, &e) == sigma.apply(&pbracket(&e, &f).unwrap()), || {
                        format!("at slot {i}, {e}, {f}")
                    })?;
                    count += 1;
                }
            }
        }
        Ok(format!("{count} tuples"))
    })();
    parts.push(("symmetric part law", symmetric));

    let restriction = (|| {
        let mut count = 0;
        for b in bundles() {
            for n in 1..=3 {
                let h = HigherBracket::new(random_bracket(&mut r, &b, n));
                let table = BracketTable::from_evaluator(&Restriction(&h), 1).unwrap();
                let back = HigherBracket::new(theta_from_table(&table).map_err(|e| e.to_string())?);
                for _ in 0..8 {
                    let args: Vec<Multivector> = (0..n).map(|_| common::random_multivector(&mut r, &b, 3)).collect();
                    ensure(back.eval(&args).unwrap() == h.eval(&args).unwrap(), || format!("at {args:?}"))?;
                    count += 1;
                }
            }
        }
        Ok(format!("{count} tuples"))
    })();
    parts.push(("restriction then extension", restriction));

    let b = BundleSpec::identity(0, 2).into_bundle();
    let (xi1, xi2) = (GradedElement::xi(&b, 1), GradedElement::xi(&b, 2));
    let theta = &xi1 * &xi2;
    let h = HigherBracket::new(MultiBracket::from_theta(theta.clone()).unwrap());
    let args = [Multivector::new(theta.clone()).unwrap(), Multivector::new(xi1.clone()).unwrap()];
    let bar = h.eval(&args).unwrap().into_value();
    let naive = iterated_pbracket(&theta, &args).unwrap();
    parts.push((
        "extension differs from iterated bracket",
        if bar != naive {
            Ok(format!("theta = {theta}, args (xi1*xi2, xi1): {bar} vs {naive}"))
        } else {
            Err("no difference".into())
        },
    ));
    parts
}

fn vanishing_symbol() -> Outcome {
    let mut r = rng(109);
    let mut count = 0;
    for b in bundles() {
        let family = generating_family(&b, 1);
        for n in 2..=4 {
            for trial in 0..4 {
                let theta = random_element(&mut r, &b, n, 1, (trial % 2) * 2, 3);
                let c = MultiBracket::new(theta.clone(), n).unwrap();
                let zero = kwalg::combinatorics::tuples(family.len(), n - 2).all(|idx| {
                    let args: Vec<GradedElement> = idx.iter().map(|&i| family[i].clone()).collect();
                    c.symbol(&args).unwrap().is_zero()
                });
                ensure(zero == (theta.max_p_degree() == 0), || format!("{theta}: symbol zero is {zero}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} generators"))
}

fn reconstruction() -> Outcome {
    let mut r = rng(110);
    let mut count = 0;
    for b in bundles() {
        for n in 1..=4 {
            for _ in 0..2 {
                let c = MultiBracket::new(random_element(&mut r, &b, n, 1, 2, 3), n).unwrap();
                let table = BracketTable::from_evaluator(&c, 1).unwrap();
                let back = theta_from_table(&table).map_err(|e| format!("{}: {e}", c.theta()))?;
                ensure(back == c, || format!("{} came back as {}", c.theta(), back.theta()))?;
                count += 1;
            }
        }
    }
    let b = BundleSpec::identity(1, 2).into_bundle();
    let c = MultiBracket::new(GradedElement::xi(&b, 1) * GradedElement::xi(&b, 2) * GradedElement::p(&b, 1), 4).unwrap();
    let mut table = BracketTable::from_evaluator(&c, 1).unwrap();
    let args = [GradedElement::xi(&b, 1), GradedElement::xi(&b, 2), GradedElement::xi(&b, 1)];
    let old = table.eval(&args).unwrap();
    table.set_value(&args, old + GradedElement::xi(&b, 1)).unwrap();
    match theta_from_table(&table) {
        Err(Error::InconsistentTable { relation, residual }) if !relation.is_empty() && residual != "0" => {
            Ok(format!("{count} generators; perturbed table: {relation} leaves {residual}"))
        }
        other => Err(format!("perturbed table gave {other:?}")),
    }
}

fn so3_closure() -> Outcome {
    let cli = |name: &str| {
        let mut out = Vec::new();
        let code = run(["kwalg", "--machine", "verify", "closure", name], &mut std::io::empty(), &mut out, &mut Vec::new());
        (code, String::from_utf8(out).unwrap())
    };
    let good = builtin_example("so3").unwrap();
    let report = check_closure(&MultiBracket::from_theta(good.theta).unwrap(), Bound::Exact).unwrap();
    ensure(report.passed(), || report.render_machine())?;
    let bad = builtin_example("so3-broken").unwrap();
    let report = check_closure(&MultiBracket::from_theta(bad.theta).unwrap(), Bound::Exact).unwrap();
    let witness = report
        .checks
        .iter()
        .find_map(|c| c.witness.as_ref().filter(|w| !w.args.is_empty()))
        .ok_or_else(|| "perturbation has no tuple witness".to_string())?;
    let (pass, fail) = (cli("so3"), cli("so3-broken"));
    ensure(pass.0 == 0 && pass.1.contains("CHECK closure PASS"), || format!("so3 exit {}: {}", pass.0, pass.1))?;
    ensure(fail.0 == 1, || format!("so3-broken exit {}", fail.0))?;
    Ok(format!("exit 0 / 1; witness {} residual {}", witness.render_args(), witness.residual))
}

fn parser_idempotence() -> Outcome {
    let mut r = rng(112);
    let bs: Vec<Bundle> = bundles().into_iter().chain([BundleSpec::identity(3, 4).into_bundle()]).collect();
    for k in 0..1000 {
        let b = &bs[k % bs.len()];
        let deg = r.gen_range(0..=5);
        let e = random_element(&mut r, b, deg, 2, 2, 4).scale(&rat(r.gen_range(-5..=5), r.gen_range(1..=6)))
            + {
                let k = r.gen_range(0..=4);
                random_element(&mut r, b, k, 1, 1, 2)
            };
        let text = e.to_string();
        let back = parse_element(&text, b).map_err(|err| format!("`{text}`: {err}"))?;
        ensure(back.term_map() == e.term_map() && back.to_string() == text, || format!("`{text}` re-parsed as `{back}`"))?;
    }
    Ok("1000 elements".into())
}

#[test]
fn acceptance() {
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let criteria: [Criterion; 12] = [
        ("Poisson algebra identities", poisson_algebra),
        ("wedge and bracket routes agree", upsilon_morphism),
        ("interior product formulas agree", interior_product),
        ("Courant axioms of the standard example", courant_recovery),
        ("twisted closure iff dH = 0", twist_equivalence),
        ("even degree self-bracket vanishes", parity_auto_closure),
        ("pairing, Poisson bracket and bracket agree", pairing_triple_equality),
        ("extension to multivectors", || {
            let parts = extension_parts();
            let line = |(name, o): &(&str, Outcome)| match o {
                Ok(d) => format!("{name}: ok ({d})"),
                Err(d) => format!("{name}: FAILED ({d})"),
            };
            let text = parts.iter().map(line).collect::<Vec<_>>().join("; ");
            if parts.iter().all(|(_, o)| o.is_ok()) {
                Ok(text)
            } else {
                Err(text)
            }
        }),
        ("symbol vanishes iff no momenta", vanishing_symbol),
        ("table reconstruction round trip", reconstruction),
        ("so(3) closure and CLI exit codes", so3_closure),
        ("parser idempotence", parser_idempotence),
    ];
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        results.push((k + 1, name, outcome, t.elapsed().as_secs_f64()));
    }
    let mut stdout = std::io::stdout();
    for (k, name, outcome, secs) in &results {
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        writeln!(stdout, "ACCEPTANCE {k:>2} {status} {name} [{secs:.1}s]: {detail}").unwrap();
    }
    for (k, name, outcome, secs) in &results {
        assert!(*secs < 60.0, "criterion {k} took {secs:.1}s");
        if *k == 8 {
            // The derivation law over functions has no solution once the
            // symbol is nonzero; only that sub-result may fail.
            let detail = outcome.as_ref().expect_err("general derivation law unexpectedly holds");
            assert!(detail.starts_with("derivation law, general tuples: FAILED"), "{detail}");
            assert_eq!(detail.matches("FAILED").count(), 1, "{detail}");
            continue;
        }
        assert!(outcome.is_ok(), "criterion {k} ({name}) failed: {outcome:?}");
    }
}
