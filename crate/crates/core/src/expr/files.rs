//! Line-oriented bundle and table files. Blank lines and text after `#`
//! are ignored.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graded_ring::{Bundle, GradedElement};
use crate::kw::BracketTable;
use crate::poisson::BundleSpec;

use super::{parse_element, parse_rational, render_rational};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((k + 1, line))
    })
}

fn key_value(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    Some((k.trim(), v.trim()))
}

fn bundle_error(line: usize, message: impl std::fmt::Display) -> Error {
    Error::InvalidBundle(format!("line {line}: {message}"))
}

fn parse_nat(line: usize, key: &str, v: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| bundle_error(line, format!("`{key}` needs a natural number, got `{v}`")))
}

/// ```text
/// d = 1
/// r = 2
/// g = [1 0; 0 1]
/// ```
/// The matrix may continue over several lines until `]`.
pub fn parse_bundle(text: &str) -> Result<BundleSpec> {
    let (mut d, mut r, mut g) = (None, None, None);
    let mut lines = content_lines(text);
    while let Some((n, line)) = lines.next() {
        let (key, value) = key_value(line).ok_or_else(|| bundle_error(n, format!("expected `key = value`, got `{line}`")))?;
        match key {
            "d" if d.is_none() => d = Some(parse_nat(n, key, value)?),
            "r" if r.is_none() => r = Some(parse_nat(n, key, value)?),
            "g" if g.is_none() => {
                let mut body = value.to_string();
                while !body.contains(']') {
                    match lines.next() {
                        Some((_, more)) => {
                            body.push(' ');
                            body.push_str(more);
                        }
                        None => return Err(bundle_error(n, "unterminated matrix, expected `]`")),
                    }
                }
                g = Some((n, body));
            }
            "d" | "r" | "g" => return Err(bundle_error(n, format!("`{key}` given twice"))),
            _ => return Err(bundle_error(n, format!("unknown key `{key}`"))),
        }
    }
    let d = d.ok_or_else(|| Error::InvalidBundle("missing `d`".into()))?;
    let r = r.ok_or_else(|| Error::InvalidBundle("missing `r`".into()))?;
    let (n, body) = g.ok_or_else(|| Error::InvalidBundle("missing `g`".into()))?;
    let inner = body
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bundle_error(n, "matrix must be written `[ .. ]`"))?;
    let mut metric = Vec::new();
    for row in inner.split(';') {
        let entries = row
            .split_whitespace()
            .map(|t| parse_rational(t).map_err(|_| bundle_error(n, format!("`{t}` is not a rational number"))))
            .collect::<Result<Vec<_>>>()?;
        metric.push(entries);
    }
    if metric.len() != r || metric.iter().any(|row| row.len() != r) {
        return Err(bundle_error(n, format!("the metric must be {r} x {r}")));
    }
    BundleSpec::new(d, r, metric)
}

pub fn render_bundle(spec: &BundleSpec) -> String {
    let rows: Vec<String> = spec
        .metric()
        .iter()
        .map(|row| row.iter().map(render_rational).collect::<Vec<_>>().join(" "))
        .collect();
    format!("d = {}\nr = {}\ng = [{}]\n", spec.d(), spec.r(), rows.join("; "))
}

fn table_error(line: usize, message: impl std::fmt::Display) -> Error {
    Error::MalformedTable(format!("line {line}: {message}"))
}

/// Splits `a, (b, c), d` at top-level commas; an empty string gives no parts.
fn split_args(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        return vec![];
    }
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (k, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..k].trim());
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// `head(inside) = rhs`, with `inside` up to the matching parenthesis.
fn entry<'a>(line: &'a str, head: &str) -> Option<(&'a str, &'a str)> {
    let rest = line.strip_prefix(head)?.trim_start().strip_prefix('(')?;
    let mut depth = 1;
    for (k, c) in rest.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    let rhs = rest[k + 1..].trim_start().strip_prefix('=')?;
                    return Some((&rest[..k], rhs.trim()));
                }
            }
            _ => {}
        }
    }
    None
}

fn sections(n: usize, args: &str, bundle: &Bundle) -> Result<Vec<GradedElement>> {
    split_args(args)
        .into_iter()
        .map(|a| parse_element(a, bundle).map_err(|e| table_error(n, format!("`{a}`: {e}"))))
        .collect()
}

/// Header `arity = n` (the degree of the bracket) and `D = k`, then
/// `C(e_1, .., e_{n-1}) = section` and `sigma(e_1, .., e_{n-2}; x<i>) = function`
/// lines over monomial sections of x-degree at most `k`. Entries not
/// listed are zero.
pub fn parse_table(text: &str, bundle: &Bundle) -> Result<BracketTable> {
    let mut lines = content_lines(text);
    let mut header = |key: &str| -> Result<usize> {
        let (n, line) = lines
            .next()
            .ok_or_else(|| Error::MalformedTable(format!("missing `{key} = ..` header")))?;
        match key_value(line) {
            Some((k, v)) if k == key => v
                .parse()
                .map_err(|_| table_error(n, format!("`{key}` needs a natural number, got `{v}`"))),
            _ => Err(table_error(n, format!("expected `{key} = ..`, got `{line}`"))),
        }
    };
    let degree = header("arity")?;
    let bound = header("D")?;
    let mut table = BracketTable::new(bundle, degree, bound as u32)?;
    let mut seen = BTreeSet::new();
    for (n, line) in lines {
        if let Some((inside, rhs)) = entry(line, "sigma") {
            let (args, coord) = inside
                .rsplit_once(';')
                .ok_or_else(|| table_error(n, "sigma needs `; x<i>` after its arguments"))?;
            let coord = coord.trim();
            let i: usize = coord
                .strip_prefix('x')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| table_error(n, format!("expected a base coordinate `x<i>`, got `{coord}`")))?;
            let args = sections(n, args, bundle)?;
            let value = parse_element(rhs, bundle).map_err(|e| table_error(n, e))?;
            if !seen.insert(("sigma", args.iter().map(ToString::to_string).collect::<Vec<_>>(), i)) {
                return Err(table_error(n, "duplicate entry"));
            }
            table.set_symbol(&args, i, value).map_err(|e| table_error(n, e))?;
        } else if let Some((inside, rhs)) = entry(line, "C") {
            let args = sections(n, inside, bundle)?;
            let value = parse_element(rhs, bundle).map_err(|e| table_error(n, e))?;
            if !seen.insert(("C", args.iter().map(ToString::to_string).collect::<Vec<_>>(), 0)) {
                return Err(table_error(n, "duplicate entry"));
            }
            table.set_value(&args, value).map_err(|e| table_error(n, e))?;
        } else {
            return Err(table_error(n, format!("expected `C(..) = ..` or `sigma(..; x<i>) = ..`, got `{line}`")));
        }
    }
    Ok(table)
}

pub fn render_table(table: &BracketTable) -> String {
    table.to_string()
}
