//! Emitters (JSON, plain text, LaTeX) and parsers for products, tables,
//! series and pairing matrices.
//!
//! JSON conventions: partitions are comma strings (`"0"` for the empty
//! partition), `q`-exponents are decimal strings, coefficients are JSON
//! integers (or decimal strings beyond `i64`). The LaTeX parser reads the
//! `align*`/`array` layout used for published multiplication tables, so a
//! stored table can be compared semantically with a computed one.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::combinatorics::{parse_int_list, Partition};
use crate::error::{Error, Result};
use crate::exact_poly::TailSeries;
use crate::qk_ring::{ExactElement, PairingMatrix, QCoeffs, QKElement, QkTable};
use crate::quot_invariants::Series;

/// A parsed multiplication table: `(λ, μ) ↦ O_λ • O_μ`.
pub type ParsedTable = BTreeMap<(Partition, Partition), ExactElement>;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

// ---------------------------------------------------------------------------
// Keys and integers
// ---------------------------------------------------------------------------

/// Comma string of a partition, `"0"` for the empty partition.
pub fn partition_key(p: &Partition) -> String {
    p.to_string()
}

/// Inverse of [`partition_key`] (also accepts the empty string).
pub fn parse_partition_key(s: &str) -> Result<Partition> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Partition::empty());
    }
    Partition::new(parse_int_list(s)?)
}

fn int_value(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => Value::String(c.to_string()),
    }
}

fn parse_int_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| perr(format!("non-integer coefficient {n}"))),
        Value::String(s) => s.parse().map_err(|_| perr(format!("bad integer {s:?}"))),
        other => Err(perr(format!("expected an integer, got {other}"))),
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

/// `{"e": c, ...}` over nonzero coefficients.
pub fn poly_to_json(p: &[BigInt]) -> Value {
    let mut m = Map::new();
    for (e, c) in p.iter().enumerate() {
        if !c.is_zero() {
            m.insert(e.to_string(), int_value(c));
        }
    }
    Value::Object(m)
}

pub fn poly_from_json(v: &Value) -> Result<QCoeffs> {
    let obj = v.as_object().ok_or_else(|| perr("expected a q-polynomial object"))?;
    let mut p = QCoeffs::new();
    for (k, c) in obj {
        let e: usize = k.parse().map_err(|_| perr(format!("bad q-exponent {k:?}")))?;
        if p.len() <= e {
            p.resize(e + 1, BigInt::zero());
        }
        p[e] += parse_int_value(c)?;
    }
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    Ok(p)
}

/// `{"ν": {"e": c}}` for an exact element.
pub fn exact_to_json(x: &ExactElement) -> Value {
    Value::Object(
        x.iter()
            .filter(|(_, p)| p.iter().any(|c| !c.is_zero()))
            .map(|(nu, p)| (partition_key(nu), poly_to_json(p)))
            .collect(),
    )
}

pub fn exact_from_json(v: &Value) -> Result<ExactElement> {
    let obj = v.as_object().ok_or_else(|| perr("expected an element object"))?;
    let mut x = ExactElement::new();
    for (k, p) in obj {
        let p = poly_from_json(p)?;
        if !p.is_empty() {
            x.insert(parse_partition_key(k)?, p);
        }
    }
    Ok(x)
}

pub fn element_to_json(x: &QKElement) -> Value {
    exact_to_json(&x.exact())
}

pub fn element_from_json(v: &Value, n: usize, r: usize, q_max: usize) -> Result<QKElement> {
    QKElement::from_exact(&exact_from_json(v)?, n, r, q_max)
}

/// `{"basis": [...], "entries": {"λ|μ": {...}}}`.
pub fn table_to_json(t: &QkTable) -> Value {
    let entries: Map<String, Value> = t
        .entries
        .iter()
        .map(|((a, b), x)| (format!("{}|{}", partition_key(a), partition_key(b)), element_to_json(x)))
        .collect();
    json!({
        "basis": t.basis.iter().map(partition_key).collect::<Vec<_>>(),
        "entries": entries,
    })
}

/// Parse a table document into its basis and entries.
pub fn table_from_json(v: &Value) -> Result<(Vec<Partition>, ParsedTable)> {
    let basis = v
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("table without a basis"))?
        .iter()
        .map(|b| parse_partition_key(b.as_str().ok_or_else(|| perr("basis entries must be strings"))?))
        .collect::<Result<Vec<_>>>()?;
    let obj = v
        .get("entries")
        .and_then(Value::as_object)
        .ok_or_else(|| perr("table without entries"))?;
    let mut out = ParsedTable::new();
    for (k, x) in obj {
        let (a, b) = k.split_once('|').ok_or_else(|| perr(format!("bad pair key {k:?}")))?;
        out.insert(
            (parse_partition_key(a)?, parse_partition_key(b)?),
            exact_from_json(x)?,
        );
    }
    Ok((basis, out))
}

/// `{"poly": {...}}`, plus `"tail_degree"`/`"tail_coeff"` for `c q^D/(1-q)`.
pub fn tail_series_to_json(s: &TailSeries) -> Value {
    let (p, c, d) = s.decompose();
    let mut m = Map::new();
    m.insert("poly".into(), poly_to_json(&p));
    if !c.is_zero() {
        m.insert("tail_degree".into(), json!(d));
        m.insert("tail_coeff".into(), int_value(&c));
    }
    Value::Object(m)
}

pub fn tail_series_from_json(v: &Value) -> Result<TailSeries> {
    let p = poly_from_json(v.get("poly").ok_or_else(|| perr("series without \"poly\""))?)?;
    if v.get("truncated_at").is_some() {
        return Err(perr("truncated series has no closed form"));
    }
    match v.get("tail_degree") {
        None => Ok(TailSeries::polynomial(&p)),
        Some(d) => {
            let d = d.as_u64().ok_or_else(|| perr("bad tail_degree"))? as usize;
            let c = match v.get("tail_coeff") {
                Some(c) => parse_int_value(c)?,
                None => BigInt::one(),
            };
            Ok(TailSeries::with_tail(&p, &c, d))
        }
    }
}

/// Closed series as [`tail_series_to_json`]; truncated ones carry `"truncated_at"`.
pub fn series_to_json(s: &Series) -> Value {
    match s {
        Series::Closed(t) => tail_series_to_json(t),
        Series::Truncated { coeffs, truncated_at } => {
            json!({ "poly": poly_to_json(coeffs), "truncated_at": truncated_at })
        }
    }
}

pub fn series_from_json(v: &Value) -> Result<Series> {
    match v.get("truncated_at") {
        Some(t) => {
            let truncated_at = t.as_u64().ok_or_else(|| perr("bad truncated_at"))? as usize;
            let mut coeffs = poly_from_json(v.get("poly").ok_or_else(|| perr("series without \"poly\""))?)?;
            if coeffs.len() > truncated_at + 1 {
                return Err(perr("coefficient beyond truncated_at"));
            }
            coeffs.resize(truncated_at + 1, BigInt::zero());
            Ok(Series::Truncated { coeffs, truncated_at })
        }
        None => Ok(Series::Closed(tail_series_from_json(v)?)),
    }
}

/// `{"basis": [...], "entries": [[series, ...], ...]}`.
pub fn matrix_to_json(m: &PairingMatrix) -> Value {
    json!({
        "basis": m.basis.iter().map(partition_key).collect::<Vec<_>>(),
        "entries": m.entries.iter()
            .map(|row| row.iter().map(tail_series_to_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json(v: &Value) -> Result<PairingMatrix> {
    let basis = v
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("matrix without a basis"))?
        .iter()
        .map(|b| parse_partition_key(b.as_str().ok_or_else(|| perr("basis entries must be strings"))?))
        .collect::<Result<Vec<_>>>()?;
    let rows = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("matrix without entries"))?;
    let entries = rows
        .iter()
        .map(|row| {
            let row = row.as_array().ok_or_else(|| perr("matrix row must be an array"))?;
            if row.len() != basis.len() {
                return Err(perr("matrix row length differs from the basis size"));
            }
            row.iter().map(tail_series_from_json).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if entries.len() != basis.len() {
        return Err(perr("matrix is not square"));
    }
    Ok(PairingMatrix { basis, entries })
}

// ---------------------------------------------------------------------------
// Plain text
// ---------------------------------------------------------------------------

fn q_power(e: usize) -> String {
    match e {
        0 => String::new(),
        1 => "q".into(),
        _ => format!("q^{e}"),
    }
}

/// A polynomial such as `1 - 2q + q^3` (`0` when empty).
pub fn poly_plain(p: &[BigInt]) -> String {
    let mut s = String::new();
    for (e, c) in p.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let mag = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let qp = q_power(e);
        if qp.is_empty() || !mag.is_one() {
            s.push_str(&mag.to_string());
        }
        s.push_str(&qp);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// `P(q) + c q^D/(1-q)`, e.g. `1/(1-q)` or `-3q + q/(1-q)`.
pub fn tail_series_plain(s: &TailSeries) -> String {
    let (p, c, d) = s.decompose();
    if c.is_zero() {
        return poly_plain(&p);
    }
    let mut tail = String::new();
    let qp = q_power(d);
    let mag = c.abs();
    if !mag.is_one() || qp.is_empty() {
        tail.push_str(&mag.to_string());
    }
    tail.push_str(&qp);
    tail.push_str("/(1-q)");
    if p.is_empty() {
        if c.is_negative() {
            format!("-{tail}")
        } else {
            tail
        }
    } else {
        format!("{} {} {tail}", poly_plain(&p), if c.is_negative() { "-" } else { "+" })
    }
}

pub fn series_plain(s: &Series) -> String {
    match s {
        Series::Closed(t) => tail_series_plain(t),
        Series::Truncated { coeffs, truncated_at } => {
            format!("{} + O(q^{})", poly_plain(coeffs), truncated_at + 1)
        }
    }
}

/// One line per product, `O_λ * O_μ = ...`.
pub fn table_plain(t: &QkTable) -> String {
    let mut out = String::new();
    for ((a, b), x) in &t.entries {
        out.push_str(&format!("O_{a} * O_{b} = {x}\n"));
    }
    out
}

/// Rows of whitespace-separated entries.
pub fn matrix_plain(m: &PairingMatrix) -> String {
    let mut out = format!(
        "basis: {}\n",
        m.basis.iter().map(partition_key).collect::<Vec<_>>().join(" ")
    );
    for row in &m.entries {
        out.push_str(
            &row.iter()
                .map(|s| format!("[{}]", tail_series_plain(s)))
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// LaTeX
// ---------------------------------------------------------------------------

fn latex_class(p: &Partition) -> String {
    if p.is_empty() {
        "\\O".into()
    } else {
        format!("\\O_{{{p}}}")
    }
}

fn latex_q(e: usize) -> String {
    match e {
        0 => String::new(),
        1 => "q".into(),
        _ => format!("q^{e}"),
    }
}

/// Sum of `c O_ν` at a fixed `q`-power, as LaTeX (signed terms).
fn latex_linear(terms: &[(Partition, BigInt)]) -> String {
    let mut s = String::new();
    for (nu, c) in terms {
        let mag = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if nu.is_empty() {
            s.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                s.push_str(&mag.to_string());
            }
            s.push_str(&latex_class(nu));
        }
    }
    s
}

/// Right-hand side grouped by `q`-power, e.g. `\O_{4,3} + q(1 - \O_{1})`.
pub fn latex_exact(x: &ExactElement) -> String {
    let mut by_power: BTreeMap<usize, Vec<(Partition, BigInt)>> = BTreeMap::new();
    for (nu, p) in x {
        for (e, c) in p.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            by_power.entry(e).or_default().push((nu.clone(), c.clone()));
        }
    }
    let mut s = String::new();
    for (e, terms) in by_power {
        let q = latex_q(e);
        let (chunk, negative) = if e == 0 {
            let body = latex_linear(&terms);
            let neg = body.starts_with('-');
            (body.trim_start_matches('-').to_string(), neg)
        } else if terms.len() == 1 {
            let (nu, c) = &terms[0];
            let mag = c.abs();
            let coef = if mag.is_one() { String::new() } else { mag.to_string() };
            let class = if nu.is_empty() { String::new() } else { latex_class(nu) };
            (format!("{coef}{q}{class}"), c.is_negative())
        } else {
            (format!("{q}({})", latex_linear(&terms)), false)
        };
        if s.is_empty() {
            if negative {
                s.push('-');
            }
        } else {
            s.push_str(if negative { " - " } else { " + " });
        }
        s.push_str(&chunk);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// The table as an `align*` block, two products per row.
pub fn table_latex(t: &QkTable) -> String {
    let mut out = String::from("\\begin{align*}\n");
    let cells: Vec<String> = t
        .entries
        .iter()
        .filter(|((a, b), _)| !a.is_empty() && !b.is_empty())
        .map(|((a, b), x)| format!("{} \\bullet {} & = {}", latex_class(a), latex_class(b), latex_exact(&x.exact())))
        .collect();
    for (i, pair) in cells.chunks(2).enumerate() {
        if i > 0 {
            out.push_str(" \\\\\n");
        }
        out.push('\t');
        out.push_str(&pair.join(" &\n\t"));
    }
    out.push_str("\n\\end{align*}\n");
    out
}

/// LaTeX for a polynomial entry (`0`, `1`, `-q`, `q^2`, `1 - q`, ...).
pub fn poly_latex(p: &[BigInt]) -> String {
    poly_plain(p).replace(' ', "")
}

/// `array` rendering. For a pairing with tails the `(1-q)` numerators are
/// printed under a `\frac{1}{1-q}` prefactor; polynomial matrices are printed
/// directly.
pub fn matrix_latex(m: &PairingMatrix) -> String {
    let (prefix, rows): (&str, Vec<Vec<QCoeffs>>) = match m.polynomials() {
        Some(p) => ("", p),
        None => ("\\frac{1}{1-q}\n", m.numerators()),
    };
    let mut out = format!(
        "{prefix}\\left[\\begin{{array}}{{{}}}\n",
        "r".repeat(m.basis.len())
    );
    let lines: Vec<String> = rows
        .iter()
        .map(|row| format!("\t{}", row.iter().map(|p| poly_latex(p)).collect::<Vec<_>>().join(" & ")))
        .collect();
    out.push_str(&lines.join(" \\\\\n"));
    out.push_str("\n\\end{array}\\right]\n");
    out
}

// ---------------------------------------------------------------------------
// LaTeX parsing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Int(BigInt),
    Q(usize),
    Class(Partition),
    Open,
    Close,
}

fn braced_or_digit(chars: &[char], i: &mut usize) -> Result<String> {
    if chars.get(*i) == Some(&'{') {
        let start = *i + 1;
        let end = chars[start..]
            .iter()
            .position(|&c| c == '}')
            .ok_or_else(|| perr("unbalanced brace"))?
            + start;
        *i = end + 1;
        Ok(chars[start..end].iter().collect())
    } else {
        let start = *i;
        while chars.get(*i).is_some_and(char::is_ascii_digit) {
            *i += 1;
        }
        if start == *i {
            return Err(perr("expected a subscript or exponent"));
        }
        Ok(chars[start..*i].iter().collect())
    }
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' | '.' | ',' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '(' => {
                out.push(Tok::Open);
                i += 1;
            }
            ')' => {
                out.push(Tok::Close);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while chars.get(i).is_some_and(char::is_ascii_digit) {
                    i += 1;
                }
                let v: String = chars[start..i].iter().collect();
                out.push(Tok::Int(v.parse().map_err(|_| perr("bad integer"))?));
            }
            'q' => {
                i += 1;
                let mut e = 1;
                if chars.get(i) == Some(&'^') {
                    i += 1;
                    let v = braced_or_digit(&chars, &mut i)?;
                    e = v.trim().parse().map_err(|_| perr(format!("bad exponent {v:?}")))?;
                }
                out.push(Tok::Q(e));
            }
            '\\' => {
                let start = i + 1;
                let mut j = start;
                while chars.get(j).is_some_and(char::is_ascii_alphabetic) {
                    j += 1;
                }
                let name: String = chars[start..j].iter().collect();
                i = j;
                match name.as_str() {
                    "O" => {
                        if chars.get(i) == Some(&'_') {
                            i += 1;
                            let v = braced_or_digit(&chars, &mut i)?;
                            out.push(Tok::Class(parse_partition_key(&v)?));
                        } else {
                            out.push(Tok::Class(Partition::empty()));
                        }
                    }
                    // Spacing commands (`\quad`, `\ `, `\,`) carry no content.
                    "quad" | "qquad" | "" => {
                        if name.is_empty() {
                            i += 1;
                        }
                    }
                    other => return Err(perr(format!("unexpected command \\{other}"))),
                }
            }
            other => return Err(perr(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// A parsed value: `(ν, e) ↦ c` for `c q^e O_ν`.
type Value2 = BTreeMap<(Partition, usize), BigInt>;

fn v_scalar(c: BigInt, e: usize) -> Value2 {
    BTreeMap::from([((Partition::empty(), e), c)])
}

fn v_add(a: &mut Value2, b: &Value2, sign: i64) {
    for (k, c) in b {
        let e = a.entry(k.clone()).or_insert_with(BigInt::zero);
        *e += c * sign;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

fn v_mul(a: &Value2, b: &Value2) -> Result<Value2> {
    let mut out = Value2::new();
    for ((pa, ea), ca) in a {
        for ((pb, eb), cb) in b {
            let nu = match (pa.is_empty(), pb.is_empty()) {
                (true, _) => pb.clone(),
                (_, true) => pa.clone(),
                _ => return Err(perr("product of two Schubert classes inside an entry")),
            };
            v_add(&mut out, &BTreeMap::from([((nu, ea + eb), ca * cb)]), 1);
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Value2> {
        let mut acc = Value2::new();
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    1
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    -1
                }
                None | Some(Tok::Close) => return Ok(acc),
                _ if acc.is_empty() => 1,
                Some(t) => return Err(perr(format!("expected a sign, got {t:?}"))),
            };
            let t = self.term()?;
            v_add(&mut acc, &t, sign);
        }
    }

    fn term(&mut self) -> Result<Value2> {
        let mut acc = v_scalar(BigInt::one(), 0);
        let mut factors = 0;
        while let Some(t) = self.peek().cloned() {
            let f = match t {
                Tok::Int(c) => v_scalar(c, 0),
                Tok::Q(e) => v_scalar(BigInt::one(), e),
                Tok::Class(p) => BTreeMap::from([((p, 0), BigInt::one())]),
                Tok::Open => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    if self.peek() != Some(&Tok::Close) {
                        return Err(perr("missing ')'"));
                    }
                    inner
                }
                _ => break,
            };
            self.pos += 1;
            factors += 1;
            acc = v_mul(&acc, &f)?;
        }
        if factors == 0 {
            return Err(perr("empty term"));
        }
        Ok(acc)
    }
}

/// Parse a right-hand side such as `q(\O_{3} + \O_{2,1} - \O_{3,1})`.
pub fn parse_latex_expression(s: &str) -> Result<ExactElement> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr(format!("trailing input in {s:?}")));
    }
    let mut x = ExactElement::new();
    for ((nu, e), c) in v {
        let poly = x.entry(nu).or_default();
        if poly.len() <= e {
            poly.resize(e + 1, BigInt::zero());
        }
        poly[e] += c;
    }
    x.retain(|_, p| p.iter().any(|c| !c.is_zero()));
    Ok(x)
}

fn parse_lhs(s: &str) -> Result<(Partition, Partition)> {
    let (a, b) = s.split_once("\\bullet").ok_or_else(|| perr("missing \\bullet"))?;
    let one = |t: &str| -> Result<Partition> {
        match tokenize(t)?.as_slice() {
            [Tok::Class(p)] => Ok(p.clone()),
            _ => Err(perr(format!("bad factor {t:?}"))),
        }
    };
    Ok((one(a)?, one(b)?))
}

fn strip_env(s: &str) -> String {
    let mut t = s.to_string();
    for pat in ["\\begin{align*}", "\\end{align*}", "\\footnotesize", "{\\allowdisplaybreaks"] {
        t = t.replace(pat, "");
    }
    t
}

/// Parse an `align*` multiplication table with two products per row.
///
/// A row is split on `\\`, cells on `&`; cells `2s, 2s+1` form slot `s`.
/// A slot containing `\bullet` starts a product `lhs & = rhs`; any other
/// nonempty slot continues the most recent product in that slot. Products
/// are keyed with `λ ≤ μ`.
pub fn parse_latex_table(text: &str) -> Result<ParsedTable> {
    let text = strip_env(text);
    let mut raw: Vec<(Partition, Partition, String)> = Vec::new();
    let mut last_in_slot: BTreeMap<usize, usize> = BTreeMap::new();
    for row in text.split("\\\\") {
        let cells: Vec<&str> = row.split('&').collect();
        for (slot, chunk) in cells.chunks(2).enumerate() {
            let joined = chunk.join(" ");
            let trimmed = joined.trim();
            if trimmed.is_empty() || trimmed == "}" {
                continue;
            }
            if trimmed.contains("\\bullet") {
                let lhs = chunk[0];
                let rhs = chunk.get(1).copied().unwrap_or("").trim();
                let rhs = rhs
                    .strip_prefix('=')
                    .ok_or_else(|| perr(format!("product without '=': {trimmed:?}")))?;
                let (a, b) = parse_lhs(lhs)?;
                raw.push((a, b, rhs.to_string()));
                last_in_slot.insert(slot, raw.len() - 1);
            } else {
                let idx = *last_in_slot
                    .get(&slot)
                    .ok_or_else(|| perr(format!("continuation without a product: {trimmed:?}")))?;
                raw[idx].2.push(' ');
                raw[idx].2.push_str(trimmed);
            }
        }
    }
    let mut out = ParsedTable::new();
    for (a, b, rhs) in raw {
        let key = if a <= b { (a, b) } else { (b, a) };
        let value = parse_latex_expression(&rhs)?;
        if out.insert(key.clone(), value).is_some() {
            return Err(perr(format!("duplicate product O_{} * O_{}", key.0, key.1)));
        }
    }
    Ok(out)
}

/// Parse an `array` matrix of `q`-polynomials (an optional `\frac{1}{1-q}`
/// prefactor is ignored; callers decide how to interpret it).
pub fn parse_latex_matrix(text: &str) -> Result<Vec<Vec<QCoeffs>>> {
    let start = text
        .find("\\begin{array}")
        .ok_or_else(|| perr("no array environment"))?;
    let body = &text[start + "\\begin{array}".len()..];
    let body = body.trim_start();
    let body = match body.strip_prefix('{') {
        Some(rest) => &rest[rest.find('}').ok_or_else(|| perr("bad column spec"))? + 1..],
        None => body,
    };
    let end = body.find("\\end{array}").ok_or_else(|| perr("unterminated array"))?;
    let mut rows = Vec::new();
    for row in body[..end].split("\\\\") {
        if row.trim().is_empty() {
            continue;
        }
        let entries = row
            .split('&')
            .map(|cell| {
                let x = parse_latex_expression(cell)?;
                match x.len() {
                    0 => Ok(QCoeffs::new()),
                    1 => x
                        .get(&Partition::empty())
                        .cloned()
                        .ok_or_else(|| perr("matrix entries must be scalars")),
                    _ => Err(perr("matrix entries must be scalars")),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(entries);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(perr("matrix is not square"));
    }
    Ok(rows)
}
