//! Brackets given by their values on a finite generating family, and the
//! reconstruction of a generator from such a table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::combinatorics::tuples;
use crate::error::{Error, Result};
use crate::graded_ring::{Bundle, GradedElement, Monomial, Rational};
use crate::poisson::pbracket_unchecked;

use super::{check_args, eval_arity, pairing, symbol_arity, MultiBracket, PreCourant, SymbolValue};

/// Exponent vectors of total degree `t` in `d` variables, `x1` heaviest first.
fn exponents(d: usize, t: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return if t == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=t).rev() {
        for mut rest in exponents(d - 1, t - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Monomial sections `x^alpha xi^a` with `|alpha| <= bound`, ordered by
/// x-degree, then odd index, then exponents with `x1` heaviest first.
pub fn generating_family(bundle: &Bundle, bound: u32) -> Vec<GradedElement> {
    let d = bundle.d();
    let mut out = Vec::new();
    for t in 0..=bound {
        let alphas = exponents(d, t);
        for a in 0..bundle.r() {
            for alpha in &alphas {
                let (_, m) = Monomial::from_parts(alpha.clone(), &[a], vec![0; d]).expect("single odd index");
                out.push(GradedElement::from_monomial(bundle, m, Rational::one()));
            }
        }
    }
    out
}

fn render_args(args: &[GradedElement]) -> String {
    args.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Values of a bracket of degree `n` on all `(n-1)`-tuples of the generating
/// family, and of its symbol on all `(n-2)`-tuples. Omitted entries are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BracketTable {
    bundle: Bundle,
    degree: usize,
    bound: u32,
    family: Vec<GradedElement>,
    index: HashMap<Monomial, usize>,
    values: BTreeMap<Vec<usize>, GradedElement>,
    symbols: BTreeMap<Vec<usize>, SymbolValue>,
}

impl BracketTable {
    /// The zero table of a bracket of degree `n >= 1`.
    pub fn new(bundle: &Bundle, degree: usize, bound: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::MalformedTable(
                "arity must be at least 1 (a degree-0 bracket is a function)".into(),
            ));
        }
        let family = generating_family(bundle, bound);
        let index = family
            .iter()
            .enumerate()
            .map(|(i, e)| (e.terms().next().expect("nonzero").0.clone(), i))
            .collect();
        Ok(BracketTable {
            bundle: bundle.clone(),
            degree,
            bound,
            family,
            index,
            values: BTreeMap::new(),
            symbols: BTreeMap::new(),
        })
    }

    /// Tabulates any bracket on the family with x-degree at most `bound`.
    pub fn from_evaluator<C: PreCourant + ?Sized>(c: &C, bound: u32) -> Result<Self> {
        let mut table = BracketTable::new(c.bundle(), c.degree(), bound)?;
        let n = table.degree;
        let size = table.family.len();
        for idx in tuples(size, n - 1) {
            let v = c.eval(&table.members(&idx))?;
            if !v.is_zero() {
                table.values.insert(idx, v);
            }
        }
        if n >= 2 {
            for idx in tuples(size, n - 2) {
                let s = c.symbol(&table.members(&idx))?;
                if !s.is_zero() {
                    table.symbols.insert(idx, s);
                }
            }
        }
        Ok(table)
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn family(&self) -> &[GradedElement] {
        &self.family
    }

    pub fn members(&self, idx: &[usize]) -> Vec<GradedElement> {
        idx.iter().map(|&i| self.family[i].clone()).collect()
    }

    /// Position of a family member given as an expression.
    pub fn family_index(&self, e: &GradedElement) -> Option<usize> {
        if e.len() != 1 {
            return None;
        }
        let (m, c) = e.terms().next()?;
        if !c.is_one() {
            return None;
        }
        self.index.get(m).copied()
    }

    fn indices_of(&self, args: &[GradedElement]) -> Result<Vec<usize>> {
        args.iter()
            .map(|e| {
                self.family_index(e).ok_or_else(|| {
                    Error::MalformedTable(format!(
                        "`{e}` is not a monomial section of x-degree at most {}",
                        self.bound
                    ))
                })
            })
            .collect()
    }

    pub fn set_value(&mut self, args: &[GradedElement], value: GradedElement) -> Result<()> {
        if args.len() != eval_arity(self.degree) {
            return Err(Error::MalformedTable(format!(
                "C takes {} arguments, got {}",
                eval_arity(self.degree),
                args.len()
            )));
        }
        if !value.is_section() {
            return Err(Error::MalformedTable(format!("value `{value}` is not a section")));
        }
        let idx = self.indices_of(args)?;
        if value.is_zero() {
            self.values.remove(&idx);
        } else {
            self.values.insert(idx, value);
        }
        Ok(())
    }

    /// Sets `sigma(args) x_i` (1-based `i`).
    pub fn set_symbol(&mut self, args: &[GradedElement], i: usize, value: GradedElement) -> Result<()> {
        if self.degree < 2 || args.len() != symbol_arity(self.degree) {
            return Err(Error::MalformedTable(format!(
                "sigma takes {} arguments, got {}",
                symbol_arity(self.degree),
                args.len()
            )));
        }
        if i == 0 || i > self.bundle.d() {
            return Err(Error::MalformedTable(format!("no base coordinate x{i}")));
        }
        if !value.is_function() {
            return Err(Error::MalformedTable(format!("symbol value `{value}` is not a function")));
        }
        let idx = self.indices_of(args)?;
        let entry = self
            .symbols
            .entry(idx.clone())
            .or_insert_with(|| SymbolValue::zero(&self.bundle));
        let mut images = entry.images().to_vec();
        images[i - 1] = value;
        *entry = SymbolValue::new(&self.bundle, images);
        if entry.is_zero() {
            self.symbols.remove(&idx);
        }
        Ok(())
    }

    pub fn value_at(&self, idx: &[usize]) -> GradedElement {
        self.values
            .get(idx)
            .cloned()
            .unwrap_or_else(|| GradedElement::zero(&self.bundle))
    }

    pub fn symbol_at(&self, idx: &[usize]) -> SymbolValue {
        self.symbols
            .get(idx)
            .cloned()
            .unwrap_or_else(|| SymbolValue::zero(&self.bundle))
    }

    /// Entries `(tuple, value)` that are nonzero, in canonical order.
    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &GradedElement)> {
        self.values.iter()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Vec<usize>, &SymbolValue)> {
        self.symbols.iter()
    }

    /// Expands a section into family members.
    fn expand(&self, e: &GradedElement) -> Result<Vec<(usize, Rational)>> {
        let mut out = Vec::with_capacity(e.len());
        for (m, c) in e.terms() {
            match self.index.get(m) {
                Some(&i) => out.push((i, c.clone())),
                None => {
                    return Err(Error::Domain(format!(
                        "argument `{e}` exceeds the table degree bound D={}",
                        self.bound
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Visits every combination of expanded arguments with its coefficient.
    fn multilinear(&self, args: &[GradedElement], mut visit: impl FnMut(&[usize], &Rational)) -> Result<()> {
        let expanded: Vec<_> = args.iter().map(|e| self.expand(e)).collect::<Result<_>>()?;
        let sizes: Vec<usize> = expanded.iter().map(Vec::len).collect();
        if sizes.contains(&0) {
            return Ok(());
        }
        let mut pos = vec![0usize; args.len()];
        loop {
            let idx: Vec<usize> = pos.iter().zip(&expanded).map(|(&p, ex)| ex[p].0).collect();
            let coeff = pos
                .iter()
                .zip(&expanded)
                .fold(Rational::one(), |acc, (&p, ex)| acc * &ex[p].1);
            visit(&idx, &coeff);
            let mut k = args.len();
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < sizes[k] {
                    break;
                }
                pos[k] = 0;
            }
        }
    }
}

impl PreCourant for BracketTable {
    fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    fn degree(&self) -> usize {
        self.degree
    }

    fn eval(&self, args: &[GradedElement]) -> Result<GradedElement> {
        check_args(args, eval_arity(self.degree))?;
        let mut out = GradedElement::zero(&self.bundle);
        self.multilinear(args, |idx, c| {
            if let Some(v) = self.values.get(idx) {
                out += v.scale(c);
            }
        })?;
        Ok(out)
    }

    fn tilde(&self, args: &[GradedElement]) -> Result<GradedElement> {
        check_args(args, self.degree)?;
        let v = self.eval(&args[..self.degree - 1])?;
        Ok(pairing(&v, &args[self.degree - 1]))
    }

    fn symbol(&self, args: &[GradedElement]) -> Result<SymbolValue> {
        check_args(args, symbol_arity(self.degree))?;
        let mut out = SymbolValue::zero(&self.bundle);
        if self.degree < 2 {
            return Ok(out);
        }
        self.multilinear(args, |idx, c| {
            if let Some(s) = self.symbols.get(idx) {
                out.add_assign(&s.scale(c));
            }
        })?;
        Ok(out)
    }
}

impl fmt::Display for BracketTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arity = {}", self.degree)?;
        writeln!(f, "D = {}", self.bound)?;
        for (idx, v) in &self.values {
            writeln!(f, "C({}) = {}", render_args(&self.members(idx)), v)?;
        }
        for (idx, s) in &self.symbols {
            for (i, v) in s.images().iter().enumerate() {
                if !v.is_zero() {
                    writeln!(f, "sigma({}; x{}) = {}", render_args(&self.members(idx)), i + 1, v)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BracketTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BracketTable(\n{self})")
    }
}

/// Degree-`n` monomials with x-degree at most `bound`, in term order.
fn unknown_monomials(bundle: &Bundle, n: usize, bound: u32) -> Vec<Monomial> {
    let d = bundle.d();
    let r = bundle.r();
    let mut out = Vec::new();
    for pdeg in 0..=(n / 2) as u32 {
        let k = n - 2 * pdeg as usize;
        if k > r {
            continue;
        }
        for beta in exponents(d, pdeg) {
            for xi in crate::combinatorics::subsets(r, k) {
                for t in 0..=bound {
                    for alpha in exponents(d, t) {
                        let (_, m) = Monomial::from_parts(alpha, &xi, beta.clone()).expect("distinct");
                        out.push(m);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

type Row = BTreeMap<usize, Rational>;

/// Incremental exact elimination; each stored row has pivot coefficient 1
/// and no entries in the pivot columns of earlier rows.
struct Eliminator {
    unknowns: usize,
    rows: Vec<(usize, Row, Rational)>,
    solution: Option<Vec<Rational>>,
}

impl Eliminator {
    fn new(unknowns: usize) -> Self {
        let mut e = Eliminator {
            unknowns,
            rows: Vec::new(),
            solution: None,
        };
        if unknowns == 0 {
            e.solution = Some(Vec::new());
        }
        e
    }

    /// Adds `row . c = rhs`; returns the nonzero residual when inconsistent.
    fn add(&mut self, mut row: Row, mut rhs: Rational) -> Option<Rational> {
        if let Some(sol) = &self.solution {
            let lhs = row
                .iter()
                .fold(Rational::zero(), |acc, (&j, c)| acc + c * &sol[j]);
            let residual = rhs - lhs;
            return (!residual.is_zero()).then_some(residual);
        }
        for (pivot, prow, prhs) in &self.rows {
            let Some(factor) = row.get(pivot).cloned() else {
                continue;
            };
            for (&j, c) in prow {
                let entry = row.entry(j).or_insert_with(Rational::zero);
                *entry -= &factor * c;
                if entry.is_zero() {
                    row.remove(&j);
                }
            }
            rhs -= &factor * prhs;
        }
        let Some((&pivot, lead)) = row.iter().next() else {
            return (!rhs.is_zero()).then_some(rhs);
        };
        let inv = lead.recip();
        for c in row.values_mut() {
            *c *= &inv;
        }
        rhs *= &inv;
        self.rows.push((pivot, row, rhs));
        if self.rows.len() == self.unknowns {
            self.solution = Some(self.back_substitute());
        }
        None
    }

    fn back_substitute(&self) -> Vec<Rational> {
        let mut sol = vec![Rational::zero(); self.unknowns];
        for (pivot, row, rhs) in self.rows.iter().rev() {
            let mut v = rhs.clone();
            for (&j, c) in row {
                if j != *pivot {
                    v -= c * &sol[j];
                }
            }
            sol[*pivot] = v;
        }
        sol
    }

    fn first_free(&self) -> Option<usize> {
        let pivots: std::collections::HashSet<usize> = self.rows.iter().map(|r| r.0).collect();
        (0..self.unknowns).find(|j| !pivots.contains(j))
    }
}

/// Equations from one output: for each monomial, sum_j coeff(v_j) c_j = coeff(target).
fn emit(
    elim: &mut Eliminator,
    basis_values: &[GradedElement],
    target: &GradedElement,
    label: impl Fn(&Monomial) -> String,
) -> Result<()> {
    let mut rows: BTreeMap<Monomial, Row> = BTreeMap::new();
    for (j, v) in basis_values.iter().enumerate() {
        for (m, c) in v.terms() {
            rows.entry(m.clone()).or_default().insert(j, c.clone());
        }
    }
    for m in target.term_map().keys() {
        rows.entry(m.clone()).or_default();
    }
    for (m, row) in rows {
        let rhs = target.coefficient(&m);
        if let Some(residual) = elim.add(row, rhs) {
            return Err(Error::InconsistentTable {
                relation: label(&m),
                residual: residual.to_string(),
            });
        }
    }
    Ok(())
}

/// Solves for the generator of degree `n` with x-degree at most `D` whose
/// bracket and symbol reproduce the table.
pub fn theta_from_table(table: &BracketTable) -> Result<MultiBracket> {
    let bundle = &table.bundle;
    let n = table.degree;
    let unknowns = unknown_monomials(bundle, n, table.bound);
    let basis: Vec<GradedElement> = unknowns
        .iter()
        .map(|m| GradedElement::from_monomial(bundle, m.clone(), Rational::one()))
        .collect();
    let mut elim = Eliminator::new(unknowns.len());
    let mut idx = Vec::with_capacity(n);
    walk(table, &mut elim, &basis, &mut idx)?;
    let Some(solution) = elim.solution.clone() else {
        let free = elim.first_free().expect("rank deficient");
        return Err(Error::Underdetermined {
            free: unknowns[free].to_string(),
        });
    };
    let mut theta = GradedElement::zero(bundle);
    for (m, c) in unknowns.into_iter().zip(solution) {
        theta.add_term(m, c);
    }
    MultiBracket::new(theta, n)
}

/// Depth-first over argument tuples, reusing the partial brackets of each
/// basis monomial along the prefix.
fn walk(
    table: &BracketTable,
    elim: &mut Eliminator,
    partial: &[GradedElement],
    idx: &mut Vec<usize>,
) -> Result<()> {
    let n = table.degree;
    let bundle = &table.bundle;
    if n >= 2 && idx.len() == n - 2 {
        let sym = table.symbol_at(idx);
        for i in 1..=bundle.d() {
            let x = GradedElement::x(bundle, i);
            let values: Vec<GradedElement> = partial.iter().map(|v| pbracket_unchecked(&x, v)).collect();
            let args = render_args(&table.members(idx));
            emit(elim, &values, sym.image(i), |m| format!("sigma({args}; x{i}) at {m}"))?;
        }
    }
    if idx.len() == n - 1 {
        let target = table.value_at(idx);
        let args = render_args(&table.members(idx));
        return emit(elim, partial, &target, |m| format!("C({args}) at {m}"));
    }
    for k in 0..table.family.len() {
        let e = &table.family[k];
        let next: Vec<GradedElement> = partial.iter().map(|v| pbracket_unchecked(e, v)).collect();
        idx.push(k);
        let res = walk(table, elim, &next, idx);
        idx.pop();
        res?;
    }
    Ok(())
}
