//! Differential forms with polynomial coefficients on the base.

use std::collections::BTreeMap;
use std::fmt;

use crate::combinatorics::sign_of;
use crate::error::{Error, Result};
use crate::graded_ring::{Bundle, GradedElement};

/// A `k`-form `sum_{i_1 < .. < i_k} H_I dx^{i_1} ^ .. ^ dx^{i_k}` with
/// 1-based indices and polynomial coefficients in `x`.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    bundle: Bundle,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, GradedElement>,
}

fn sort_with_sign(idx: &[usize]) -> Option<(i32, Vec<usize>)> {
    let mut order: Vec<usize> = (0..idx.len()).collect();
    order.sort_by_key(|&k| idx[k]);
    let sorted: Vec<usize> = order.iter().map(|&k| idx[k]).collect();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign_of(&order), sorted))
}

impl Form {
    pub fn zero(bundle: &Bundle, degree: usize) -> Self {
        Form {
            bundle: bundle.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    fn check_entry(&self, idx: &[usize], value: &GradedElement) -> Result<()> {
        if idx.len() != self.degree {
            return Err(Error::Domain(format!(
                "form index {idx:?} does not have {} entries",
                self.degree
            )));
        }
        if let Some(&i) = idx.iter().find(|&&i| i == 0 || i > self.bundle.d()) {
            return Err(Error::IndexOutOfRange {
                token: format!("dx{i}"),
                position: 0,
            });
        }
        if !value.is_function() && !value.is_zero() {
            return Err(Error::WrongDegree {
                expected: 0,
                got: value.homogeneous_degree().unwrap_or(0),
            });
        }
        Ok(())
    }

    /// Builds a form from the components with increasing indices.
    pub fn from_components(
        bundle: &Bundle,
        degree: usize,
        components: impl IntoIterator<Item = (Vec<usize>, GradedElement)>,
    ) -> Result<Self> {
        let mut f = Form::zero(bundle, degree);
        for (idx, v) in components {
            f.check_entry(&idx, &v)?;
            if sort_with_sign(&idx).map(|(_, sorted)| sorted == idx) != Some(true) {
                return Err(Error::Domain(format!(
                    "component index {idx:?} is not strictly increasing"
                )));
            }
            f.add(idx, v);
        }
        Ok(f)
    }

    /// Builds a form from a full antisymmetric tensor. Entries not listed
    /// are zero; every permutation of a nonzero entry must be listed with
    /// the matching sign.
    pub fn from_tensor(
        bundle: &Bundle,
        degree: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, GradedElement)>,
    ) -> Result<Self> {
        let mut f = Form::zero(bundle, degree);
        let mut all: BTreeMap<Vec<usize>, GradedElement> = BTreeMap::new();
        for (idx, v) in entries {
            f.check_entry(&idx, &v)?;
            if !v.is_zero() {
                all.insert(idx, v);
            }
        }
        for (idx, v) in &all {
            let Some((s, sorted)) = sort_with_sign(idx) else {
                return Err(Error::NotAntisymmetric(idx.clone()));
            };
            let expected = if s > 0 { v.clone() } else { -v.clone() };
            match f.coeffs.get(&sorted) {
                Some(c) if *c != expected => return Err(Error::NotAntisymmetric(idx.clone())),
                _ => {
                    f.coeffs.insert(sorted, expected);
                }
            }
        }
        for idx in f.to_tensor().keys() {
            if !all.contains_key(idx) {
                return Err(Error::NotAntisymmetric(idx.clone()));
            }
        }
        Ok(f)
    }

    fn add(&mut self, idx: Vec<usize>, v: GradedElement) {
        let entry = self.coeffs.entry(idx.clone()).or_insert_with(|| GradedElement::zero(&v.bundle().clone()));
        *entry += v;
        if entry.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero components with increasing indices.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &GradedElement)> {
        self.coeffs.iter()
    }

    /// The component at any index order, with the permutation sign.
    pub fn component(&self, idx: &[usize]) -> GradedElement {
        match sort_with_sign(idx) {
            Some((s, sorted)) => match self.coeffs.get(&sorted) {
                Some(v) if s > 0 => v.clone(),
                Some(v) => -v.clone(),
                None => GradedElement::zero(&self.bundle),
            },
            None => GradedElement::zero(&self.bundle),
        }
    }

    /// Every nonzero entry of the antisymmetric tensor.
    pub fn to_tensor(&self) -> BTreeMap<Vec<usize>, GradedElement> {
        let mut out = BTreeMap::new();
        for idx in self.coeffs.keys() {
            for perm in permutations(idx) {
                let v = self.component(&perm);
                out.insert(perm, v);
            }
        }
        out
    }

    /// `sum_I H_I xi^{odd(i_1)} .. xi^{odd(i_k)}` with `odd` giving 1-based
    /// odd indices.
    pub fn to_odd(&self, odd: impl Fn(usize) -> usize) -> GradedElement {
        let mut out = GradedElement::zero(&self.bundle);
        for (idx, c) in &self.coeffs {
            let mut term = c.clone();
            for &i in idx {
                term = term * GradedElement::xi(&self.bundle, odd(i));
            }
            out += term;
        }
        out
    }
}

fn permutations(idx: &[usize]) -> Vec<Vec<usize>> {
    if idx.len() <= 1 {
        return vec![idx.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..idx.len() {
        let mut rest = idx.to_vec();
        let head = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// `(dH)_{i_0..i_k} = sum_j (-1)^j d_{i_j} H_{i_0..^i_j..i_k}`.
pub fn exterior_derivative(h: &Form) -> Form {
    let mut out = Form::zero(&h.bundle, h.degree + 1);
    for (idx, c) in &h.coeffs {
        for i in 1..=h.bundle.d() {
            if idx.contains(&i) {
                continue;
            }
            let dc = c.deriv_x(i - 1);
            if dc.is_zero() {
                continue;
            }
            // dx^i ^ dx^I, sorted
            let mut full = vec![i];
            full.extend(idx);
            let (s, sorted) = sort_with_sign(&full).expect("distinct");
            out.add(sorted, if s > 0 { dc } else { -dc });
        }
    }
    out
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (idx, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let dx: Vec<String> = idx.iter().map(|i| format!("dx{i}")).collect();
            write!(f, "({c}) {}", dx.join("^"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
