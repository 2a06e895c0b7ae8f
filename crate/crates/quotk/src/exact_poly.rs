//! Exact arithmetic substrate: dense polynomials in `t` over the rationals,
//! truncated polynomials in `q`, exact rational series of the form
//! `N(q)/(1-q)`, and fraction-free determinants.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always normalized with positive denominator.
pub type BigRat = BigRational;

/// Rational from an integer.
pub fn rat(n: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(n.into())
}

/// Integer value of a rational, or an inconsistency error if it is not integral.
pub fn to_integer(x: &BigRat) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::InternalInconsistency(format!(
            "expected an integer, found {x}"
        )))
    }
}

/// Parse a comma-separated list of rationals such as `"2,3/2,-5"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRat>> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<BigRat>()
                .map_err(|_| Error::Parse(format!("{x:?} is not a rational number")))
        })
        .collect()
}

/// Dense univariate polynomial in `t` with rational coefficients; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    coeffs: Vec<BigRat>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Self::from_coeffs(vec![BigRat::zero(), BigRat::one()])
    }

    pub fn constant(c: BigRat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Build from coefficients indexed by exponent; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    /// Build from integer coefficients indexed by exponent.
    pub fn from_ints<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(rat).collect())
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^d` (zero beyond the degree).
    pub fn coeff(&self, d: usize) -> BigRat {
        self.coeffs.get(d).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Constant polynomial value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRat> {
        match self.coeffs.len() {
            0 => Some(BigRat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / den`; errors if the division leaves a remainder.
    pub fn exact_div(&self, den: &TPoly) -> Result<TPoly> {
        let (q, r) = self.div_rem(den)?;
        if !r.is_zero() {
            return Err(Error::InternalInconsistency(
                "inexact polynomial division".into(),
            ));
        }
        Ok(q)
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, den: &TPoly) -> Result<(TPoly, TPoly)> {
        let dd = den
            .degree()
            .ok_or_else(|| Error::InternalInconsistency("division by zero polynomial".into()))?;
        let lead = den.coeffs[dd].clone();
        if dd == 0 {
            return Ok((self.scale(&lead.recip()), TPoly::zero()));
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((TPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigRat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dj) in den.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dj;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((TPoly::from_coeffs(quot), TPoly::from_coeffs(rem)))
    }

    /// Truncated power-series product, keeping exponents `<= order`.
    pub fn mul_trunc(&self, other: &TPoly, order: usize) -> TPoly {
        let mut out = vec![BigRat::zero(); (order + 1).min(self.coeffs.len() + other.coeffs.len())];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        TPoly::from_coeffs(out)
    }

    /// Power-series inverse modulo `t^(order+1)`; needs a nonzero constant term.
    pub fn inverse_series(&self, order: usize) -> Result<TPoly> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::InternalInconsistency(
                "series inverse of a non-unit".into(),
            ));
        }
        let inv0 = c0.recip();
        let mut out = vec![inv0.clone()];
        for n in 1..=order {
            let mut s = BigRat::zero();
            for k in 1..=n {
                let a = self.coeff(k);
                if !a.is_zero() {
                    s += a * &out[n - k];
                }
            }
            out.push(-s * &inv0);
        }
        Ok(TPoly::from_coeffs(out))
    }
}

/// Coefficient of `t^d`.
pub fn t_coeff(p: &TPoly, d: usize) -> BigRat {
    p.coeff(d)
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if e == 1 {
                        write!(f, "t")?
                    } else {
                        write!(f, "t^{e}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        TPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        TPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TPoly::from_coeffs(out)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Product of two polynomials.
pub fn tpoly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    a * b
}

/// Determinant by fraction-free (Bareiss) elimination over `Q[t]`.
///
/// The pivot in each column is the first row (at or below the diagonal) with a
/// nonzero entry. The empty matrix has determinant 1.
pub fn tpoly_det(m: &[Vec<TPoly>]) -> Result<TPoly> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParams("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(TPoly::one());
    }
    let mut a: Vec<Vec<TPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = TPoly::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(TPoly::zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = if num.is_zero() {
                    TPoly::zero()
                } else {
                    num.exact_div(&prev)?
                };
            }
            a[i][k] = TPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Truncated polynomial in `q` with integer coefficients, exponents `0..=q_max`.
///
/// `overflow` is set whenever an operation discarded a nonzero term beyond `q_max`
/// (or an operand already carried the flag).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
    q_max: usize,
    overflow: bool,
}

impl QPoly {
    pub fn zero(q_max: usize) -> Self {
        QPoly {
            coeffs: vec![BigInt::zero(); q_max + 1],
            q_max,
            overflow: false,
        }
    }

    pub fn one(q_max: usize) -> Self {
        Self::monomial(BigInt::one(), 0, q_max)
    }

    /// `c q^e`, flagged as overflow if `e > q_max` and `c != 0`.
    pub fn monomial(c: BigInt, e: usize, q_max: usize) -> Self {
        let mut p = Self::zero(q_max);
        if e <= q_max {
            p.coeffs[e] = c;
        } else if !c.is_zero() {
            p.overflow = true;
        }
        p
    }

    /// Truncate an exact coefficient list at `q_max`.
    pub fn from_coeffs(coeffs: &[BigInt], q_max: usize) -> Self {
        let mut p = Self::zero(q_max);
        for (e, c) in coeffs.iter().enumerate() {
            if e <= q_max {
                p.coeffs[e] = c.clone();
            } else if !c.is_zero() {
                p.overflow = true;
            }
        }
        p
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    pub fn overflow(&self) -> bool {
        self.overflow
    }

    pub fn coeff(&self, e: usize) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Coefficients with trailing zeros removed.
    pub fn trimmed(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let q_max = self.q_max.min(o.q_max);
        let mut p = Self::zero(q_max);
        for e in 0..=q_max {
            p.coeffs[e] = self.coeff(e) + o.coeff(e);
        }
        p.overflow = self.overflow || o.overflow;
        p
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scalar_mul(&-BigInt::one()))
    }

    pub fn scalar_mul(&self, c: &BigInt) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            q_max: self.q_max,
            overflow: self.overflow,
        }
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        let q_max = self.q_max.min(o.q_max);
        let mut p = Self::zero(q_max);
        p.overflow = self.overflow || o.overflow;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if i + j <= q_max {
                    p.coeffs[i + j] += a * b;
                } else {
                    p.overflow = true;
                }
            }
        }
        p
    }
}

/// Exact inverse of an integer matrix with determinant ±1.
pub fn integer_matrix_inverse(m: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRat>> = m
        .iter()
        .map(|row| {
            let mut r: Vec<BigRat> = row.iter().cloned().map(BigRat::from_integer).collect();
            r.resize(2 * n, BigRat::zero());
            r
        })
        .collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[n + i] = BigRat::one();
    }
    for col in 0..n {
        let p = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .ok_or_else(|| Error::SingularPairing("constant-term matrix is singular".into()))?;
        a.swap(p, col);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(Error::SingularPairing(
                            "constant-term matrix is not unimodular".into(),
                        ))
                    }
                })
                .collect()
        })
        .collect()
}

/// Truncated inverse of a square `QPoly` matrix whose constant term is
/// invertible over the integers.
pub fn qpoly_matrix_inverse(m: &[Vec<QPoly>]) -> Result<Vec<Vec<QPoly>>> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let q_max = m.iter().flatten().map(QPoly::q_max).min().unwrap_or(0);
    let overflow = m.iter().flatten().any(QPoly::overflow);
    let layer = |k: usize| -> Vec<Vec<BigInt>> {
        m.iter()
            .map(|row| row.iter().map(|p| p.coeff(k)).collect())
            .collect()
    };
    let a0_inv = integer_matrix_inverse(&layer(0))?;
    let layers: Vec<Vec<Vec<BigInt>>> = (0..=q_max).map(layer).collect();
    let matmul = |x: &[Vec<BigInt>], y: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &x[i][k] * &y[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    // B_0 = A_0^{-1};  B_k = -A_0^{-1} * sum_{i=1..k} A_i B_{k-i}.
    let mut b: Vec<Vec<Vec<BigInt>>> = vec![a0_inv.clone()];
    for k in 1..=q_max {
        let mut acc = vec![vec![BigInt::zero(); n]; n];
        for i in 1..=k {
            let prod = matmul(&layers[i], &b[k - i]);
            for (r, row) in acc.iter_mut().enumerate() {
                for (c, x) in row.iter_mut().enumerate() {
                    *x += &prod[r][c];
                }
            }
        }
        let mut bk = matmul(&a0_inv, &acc);
        for row in bk.iter_mut() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        b.push(bk);
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let coeffs: Vec<BigInt> = b.iter().map(|bk| bk[i][j].clone()).collect();
                    let mut p = QPoly::from_coeffs(&coeffs, q_max);
                    p.overflow = overflow;
                    p
                })
                .collect()
        })
        .collect())
}

/// Exact rational `q`-series `N(q) / (1 - q)` with integer numerator.
///
/// Every quantity of the form `P(q) + c q^D/(1-q)` is represented exactly; the
/// value is a polynomial precisely when `N(1) = 0`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TailSeries {
    num: Vec<BigInt>,
}

impl TailSeries {
    pub fn zero() -> Self {
        TailSeries { num: Vec::new() }
    }

    fn from_num(mut num: Vec<BigInt>) -> Self {
        while num.last().is_some_and(Zero::is_zero) {
            num.pop();
        }
        TailSeries { num }
    }

    /// The polynomial `P(q)`.
    pub fn polynomial(p: &[BigInt]) -> Self {
        // P = P (1-q) / (1-q)
        let mut num = vec![BigInt::zero(); p.len() + 1];
        for (e, c) in p.iter().enumerate() {
            num[e] += c;
            num[e + 1] -= c;
        }
        Self::from_num(num)
    }

    /// `P(q) + c q^D / (1-q)`.
    pub fn with_tail(p: &[BigInt], c: &BigInt, d: usize) -> Self {
        let mut s = Self::polynomial(p);
        if s.num.len() <= d {
            s.num.resize(d + 1, BigInt::zero());
        }
        s.num[d] += c;
        Self::from_num(s.num)
    }

    /// Numerator `N(q)` of `N(q)/(1-q)`.
    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    /// Coefficient of `q^e` in the expansion: partial sum of the numerator.
    pub fn coeff(&self, e: usize) -> BigInt {
        self.num.iter().take(e + 1).sum()
    }

    /// Eventual constant value of the coefficients (`N(1)`).
    pub fn tail_coeff(&self) -> BigInt {
        self.num.iter().sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail_coeff().is_zero()
    }

    /// Canonical decomposition `P(q) + c q^D/(1-q)`.
    ///
    /// `c` is the eventual coefficient; `D` is the smaller of the first degree
    /// with a nonzero coefficient and the degree from which all coefficients
    /// equal `c`. For `c = 0` the value is the polynomial `P` and `D = 0`.
    pub fn decompose(&self) -> (Vec<BigInt>, BigInt, usize) {
        let c = self.tail_coeff();
        let coeffs: Vec<BigInt> = (0..self.num.len()).map(|e| self.coeff(e)).collect();
        if c.is_zero() {
            let mut p = coeffs;
            while p.last().is_some_and(Zero::is_zero) {
                p.pop();
            }
            return (p, c, 0);
        }
        let d_const = coeffs.iter().rposition(|a| *a != c).map_or(0, |i| i + 1);
        let d_nonzero = coeffs.iter().position(|a| !a.is_zero()).unwrap_or(d_const);
        let d = d_const.min(d_nonzero);
        let mut p: Vec<BigInt> = coeffs[..d_const]
            .iter()
            .enumerate()
            .map(|(e, a)| if e < d { a.clone() } else { a - &c })
            .collect();
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        (p, c, d)
    }

    /// Polynomial value if the tail vanishes.
    pub fn as_polynomial(&self) -> Option<Vec<BigInt>> {
        if !self.is_polynomial() {
            return None;
        }
        let mut p: Vec<BigInt> = (0..self.num.len()).map(|e| self.coeff(e)).collect();
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        Some(p)
    }

    /// Numerator of `(1-q) * self`, i.e. the polynomial `N(q)`.
    pub fn times_one_minus_q(&self) -> Vec<BigInt> {
        self.num.clone()
    }

    pub fn add(&self, o: &TailSeries) -> TailSeries {
        let n = self.num.len().max(o.num.len());
        Self::from_num(
            (0..n)
                .map(|i| {
                    self.num.get(i).cloned().unwrap_or_default()
                        + o.num.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> TailSeries {
        Self::from_num(self.num.iter().map(|a| a * c).collect())
    }

    /// Product with a polynomial in `q`.
    pub fn mul_poly(&self, p: &[BigInt]) -> TailSeries {
        if self.num.is_empty() || p.is_empty() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.num.len() + p.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            for (j, b) in p.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_num(out)
    }

    /// Truncate the expansion to `q_max`; the overflow flag records whether any
    /// coefficient beyond `q_max` is nonzero.
    pub fn truncate(&self, q_max: usize) -> QPoly {
        let coeffs: Vec<BigInt> = (0..=q_max).map(|e| self.coeff(e)).collect();
        let mut p = QPoly::from_coeffs(&coeffs, q_max);
        let beyond_nonzero =
            !self.tail_coeff().is_zero() || (q_max + 1..self.num.len()).any(|e| !self.coeff(e).is_zero());
        if beyond_nonzero {
            p.overflow = true;
        }
        p
    }
}
