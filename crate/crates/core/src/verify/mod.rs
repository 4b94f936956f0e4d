//! Certification of bracket axioms, closure and the Filippov identity, plus a
//! library of example structures.
//!
//! Every check runs over tuples of monomial sections `x^alpha xi_a` whose
//! total x-degree is at most a bound `D`, in a fixed lexicographic order, and
//! reports the first failing tuple. A residual that is a multilinear
//! differential operator of total order `<= k` in the coefficients of its
//! arguments vanishes identically iff it vanishes on these tuples for
//! `D = k`; intensional checks use that order and are reported as exact.

mod checks;
mod examples;
mod forms;

use std::fmt;

use crate::error::{Error, Result};
use crate::graded_ring::GradedElement;
use crate::kw::generating_family;
use crate::graded_ring::Bundle;

pub use checks::{
    check_closure, check_courant, check_filippov, check_pre_courant, check_pre_courant_table,
    explicit_closure_sum,
};
pub use examples::{builtin_example, builtin_examples, so3, standard_courant, twisted_courant, ExampleStructure};
pub use forms::{exterior_derivative, Form};

/// Largest number of argument tuples a single check will evaluate.
pub const TUPLE_BUDGET: usize = 250_000;

/// The range over which a check was discharged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Holds identically: the tuples covered the order of the residual.
    Exact,
    /// Holds on tuples of total x-degree at most `D`.
    Degree(u32),
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact => f.write_str("exact"),
            Bound::Degree(k) => write!(f, "D={k}"),
        }
    }
}

/// A failing argument tuple with its nonzero residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub args: Vec<GradedElement>,
    pub residual: GradedElement,
}

impl Witness {
    pub fn render_args(&self) -> String {
        let parts: Vec<String> = self.args.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    /// The identity being checked, in words.
    pub law: String,
    pub witness: Option<Witness>,
    pub bound: Bound,
    /// Number of tuples evaluated.
    pub cases: usize,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    /// `CHECK <name> PASS|FAIL [witness: ..] [residual: ..] bound: ..`
    pub fn machine_line(&self) -> String {
        let mut s = format!("CHECK {} {}", self.name, if self.passed() { "PASS" } else { "FAIL" });
        if let Some(w) = &self.witness {
            s += &format!(" witness: {} residual: {}", w.render_args(), w.residual);
        }
        s += &format!(" bound: {}", self.bound);
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out += &c.machine_line();
            out.push('\n');
        }
        out
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "CHECK {} {status} ({}, {} cases)", c.name, c.bound, c.cases)?;
            writeln!(f, "  law: {}", c.law)?;
            if let Some(w) = &c.witness {
                writeln!(f, "  witness: {}", w.render_args())?;
                writeln!(f, "  residual: {}", w.residual)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Tuples of generating sections with total x-degree at most `cap`, in
/// lexicographic order of family positions.
pub(crate) struct TupleSpace {
    family: Vec<GradedElement>,
    degrees: Vec<u32>,
    len: usize,
    cap: u32,
}

impl TupleSpace {
    pub(crate) fn new(bundle: &Bundle, len: usize, cap: u32) -> Self {
        let family = generating_family(bundle, cap);
        let degrees = family.iter().map(GradedElement::max_x_degree).collect();
        TupleSpace { family, degrees, len, cap }
    }

    /// The largest cap `<= wanted` whose space fits the budget.
    pub(crate) fn within_budget(bundle: &Bundle, len: usize, wanted: u32) -> Result<Self> {
        let mut cap = wanted;
        loop {
            let space = TupleSpace::new(bundle, len, cap);
            if space.count() <= TUPLE_BUDGET {
                return Ok(space);
            }
            if cap == 0 {
                return Err(Error::Domain(format!(
                    "{} tuples of {len} sections exceed the budget of {TUPLE_BUDGET}",
                    space.count()
                )));
            }
            cap -= 1;
        }
    }

    pub(crate) fn cap(&self) -> u32 {
        self.cap
    }

    pub(crate) fn count(&self) -> usize {
        // ways[t] = number of prefixes with total degree t
        let mut ways = vec![0usize; self.cap as usize + 1];
        ways[0] = 1;
        for _ in 0..self.len {
            let mut next = vec![0usize; ways.len()];
            for (t, &w) in ways.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for &d in &self.degrees {
                    let s = t + d as usize;
                    if s < next.len() {
                        next[s] = next[s].saturating_add(w);
                    }
                }
            }
            ways = next;
        }
        ways.iter().fold(0usize, |a, &b| a.saturating_add(b))
    }

    /// Calls `visit` on each tuple in order until it returns `false`.
    pub(crate) fn for_each(&self, mut visit: impl FnMut(&[GradedElement]) -> Result<bool>) -> Result<()> {
        let mut tuple = Vec::with_capacity(self.len);
        self.walk(&mut tuple, 0, &mut visit).map(|_| ())
    }

    fn walk(
        &self,
        tuple: &mut Vec<GradedElement>,
        used: u32,
        visit: &mut impl FnMut(&[GradedElement]) -> Result<bool>,
    ) -> Result<bool> {
        if tuple.len() == self.len {
            return visit(tuple);
        }
        for (e, &d) in self.family.iter().zip(&self.degrees) {
            if used + d > self.cap {
                continue;
            }
            tuple.push(e.clone());
            let go_on = self.walk(tuple, used + d, visit)?;
            tuple.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Evaluates `residual` on every tuple and records the first nonzero value.
pub(crate) fn run_check(
    name: impl Into<String>,
    law: impl Into<String>,
    space: &TupleSpace,
    bound: Bound,
    mut residual: impl FnMut(&[GradedElement]) -> Result<GradedElement>,
) -> Result<CheckResult> {
    let mut cases = 0;
    let mut witness = None;
    space.for_each(|t| {
        cases += 1;
        let r = residual(t)?;
        if r.is_zero() {
            Ok(true)
        } else {
            witness = Some(Witness {
                args: t.to_vec(),
                residual: r,
            });
            Ok(false)
        }
    })?;
    Ok(CheckResult {
        name: name.into(),
        law: law.into(),
        witness,
        bound,
        cases,
    })
}
