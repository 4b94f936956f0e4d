//! Built-in example structures.

use crate::error::{Error, Result};
use crate::graded_ring::{Bundle, GradedElement};
use crate::poisson::BundleSpec;

use super::forms::Form;

#[derive(Debug, Clone)]
pub struct ExampleStructure {
    pub name: &'static str,
    pub spec: BundleSpec,
    pub theta: GradedElement,
    pub expected_closed: bool,
    /// Why `expected_closed` holds.
    pub note: &'static str,
}

impl ExampleStructure {
    pub fn bundle(&self) -> &Bundle {
        self.theta.bundle()
    }
}

/// `sum_i xi^i p_i` on the split metric of rank `2d`: the anchor sends
/// `xi^{d+j}` to a multiple of `d/dx_j` and the Dorfman bracket is the
/// Lie-derivative bracket of `T + T*`.
pub fn standard_courant(d: usize) -> GradedElement {
    let b = BundleSpec::split(d).into_bundle();
    let mut theta = GradedElement::zero(&b);
    for i in 1..=d {
        theta += GradedElement::xi(&b, i) * GradedElement::p(&b, i);
    }
    theta
}

/// `sum_i xi^i p_i + (1/6) H_{ijk} xi^i xi^j xi^k`, with the cotangent
/// directions `xi^1..xi^d`. `h` must live on a split bundle of rank `2d`.
pub fn twisted_courant(h: &Form) -> Result<GradedElement> {
    let b = h.bundle();
    if h.degree() != 3 {
        return Err(Error::Domain(format!("the twist must be a 3-form, got degree {}", h.degree())));
    }
    if **b != BundleSpec::split(b.d()) {
        return Err(Error::Domain("the twist needs the split bundle of rank 2d".into()));
    }
    let mut theta = GradedElement::zero(b);
    for i in 1..=b.d() {
        theta += GradedElement::xi(b, i) * GradedElement::p(b, i);
    }
    Ok(theta + h.to_odd(|i| i))
}

/// `xi1 xi2 xi3` on the identity metric over a point: `so(3)` with its
/// Killing form.
pub fn so3() -> GradedElement {
    let b = BundleSpec::identity(0, 3).into_bundle();
    GradedElement::xi(&b, 1) * GradedElement::xi(&b, 2) * GradedElement::xi(&b, 3)
}

fn example(name: &'static str, theta: GradedElement, expected_closed: bool, note: &'static str) -> ExampleStructure {
    ExampleStructure {
        name,
        spec: (**theta.bundle()).clone(),
        theta,
        expected_closed,
        note,
    }
}

fn twist(h: impl Fn(&Bundle) -> Vec<(Vec<usize>, GradedElement)>) -> GradedElement {
    let b = BundleSpec::split(4).into_bundle();
    let form = Form::from_components(&b, 3, h(&b)).expect("valid components");
    twisted_courant(&form).expect("split bundle")
}

pub fn builtin_examples() -> Vec<ExampleStructure> {
    let b5 = BundleSpec::identity(0, 5).into_bundle();
    let xi5 = |a| GradedElement::xi(&b5, a);
    let b14 = BundleSpec::identity(1, 4).into_bundle();
    let xi14 = |a| GradedElement::xi(&b14, a);
    vec![
        example(
            "standard-courant",
            standard_courant(2),
            true,
            "the Dorfman bracket of T + T* satisfies the Leibniz identity",
        ),
        example(
            "twisted-closed",
            twist(|b| {
                vec![
                    (vec![1, 2, 3], GradedElement::x(b, 1)),
                    (vec![2, 3, 4], GradedElement::one(b)),
                ]
            }),
            true,
            "H = x1 dx1^dx2^dx3 + dx2^dx3^dx4 is closed",
        ),
        example(
            "twisted-open",
            twist(|b| vec![(vec![2, 3, 4], GradedElement::x(b, 1))]),
            false,
            "H = x1 dx2^dx3^dx4 has dH = dx1^dx2^dx3^dx4",
        ),
        example("so3", so3(), true, "the structure constants of so(3) satisfy the Jacobi identity"),
        example(
            "so3-broken",
            xi5(1) * xi5(2) * xi5(3) + xi5(3) * xi5(4) * xi5(5),
            false,
            "the two cubic terms share xi3, so their bracket is a nonzero 4-vector",
        ),
        example(
            "degree4",
            xi14(1) * xi14(2) * GradedElement::p(&b14, 1)
                + GradedElement::x(&b14, 1) * xi14(1) * xi14(2) * xi14(3) * xi14(4),
            true,
            "even degree: the self-bracket vanishes by graded symmetry",
        ),
    ]
}

pub fn builtin_example(name: &str) -> Option<ExampleStructure> {
    builtin_examples().into_iter().find(|e| e.name == name)
}
