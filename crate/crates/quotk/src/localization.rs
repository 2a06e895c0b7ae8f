//! Independent torus-localization oracle for equivariant Euler characteristics
//! on `Quot_d(P^1, N, r)`.
//!
//! Fixed loci are products `P^{d_1} × … × P^{d_r}` labelled by an `r`-subset
//! `I ⊂ [N]` and a composition `d_1 + … + d_r = d`. On each locus the
//! holomorphic Lefschetz formula is evaluated exactly in the K-theory ring
//! `Q[L_1..L_r] / ((1 - L_i)^{d_i+1})`, then pushed to a number with
//! `χ(P^d, L^k) = C(k+d, d)`.
//!
//! Weight convention (calibrated so that degree 0 reproduces the equivariant
//! Borel–Weil character `s_λ(α^{-1})` of the root table): the `i`-th summand of
//! `S_p^∨` and of `π_* S^∨` carries torus character `α_{I_i}^{-1}`, and the
//! moving summands carry `α_j / α_i` exactly as in the normal-bundle formula.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{binom, schur_monomials, IntSeq, Partition};
use crate::error::{Error, Result};
use crate::exact_poly::{rat, BigRat};
use crate::exec::{self, Parallelism};

/// A torus-fixed locus: subset `I` (0-based, increasing) and degree splitting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedLocus {
    pub subset: Vec<usize>,
    pub dvec: Vec<usize>,
}

/// All fixed loci of `Quot_d(P^1, N, r)`.
pub fn enumerate_fixed_loci(n: usize, r: usize, d: usize) -> Vec<FixedLocus> {
    fn subsets(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            subsets(n, r, i + 1, cur, out);
            cur.pop();
        }
    }
    fn compositions(d: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == parts {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=d {
            cur.push(a);
            compositions(d - a, parts, cur, out);
            cur.pop();
        }
    }
    if r == 0 || r > n {
        return Vec::new();
    }
    let mut ss = Vec::new();
    subsets(n, r, 0, &mut Vec::new(), &mut ss);
    let mut cs = Vec::new();
    compositions(d, r, &mut Vec::new(), &mut cs);
    let mut out = Vec::new();
    for s in &ss {
        for c in &cs {
            out.push(FixedLocus {
                subset: s.clone(),
                dvec: c.clone(),
            });
        }
    }
    out
}

/// Element of `Q[L_1..L_r]/((1-L_i)^{d_i+1})`, stored densely in the nilpotent
/// coordinates `x_i = L_i - 1` (so `x_i^{d_i+1} = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixRingElem {
    dims: Vec<usize>,
    coeffs: Vec<BigRat>,
}

impl FixRingElem {
    fn len_for(dims: &[usize]) -> usize {
        dims.iter().map(|d| d + 1).product()
    }

    fn index(&self, mono: &[usize]) -> usize {
        let mut idx = 0;
        for (i, &m) in mono.iter().enumerate() {
            idx = idx * (self.dims[i] + 1) + m;
        }
        idx
    }

    fn monomial_of(&self, mut idx: usize) -> Vec<usize> {
        let mut mono = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            mono[i] = idx % (self.dims[i] + 1);
            idx /= self.dims[i] + 1;
        }
        mono
    }

    pub fn zero(dims: &[usize]) -> Self {
        FixRingElem {
            dims: dims.to_vec(),
            coeffs: vec![BigRat::zero(); Self::len_for(dims)],
        }
    }

    pub fn constant(dims: &[usize], c: BigRat) -> Self {
        let mut e = Self::zero(dims);
        e.coeffs[0] = c;
        e
    }

    /// `x^mono` with `x_i = L_i - 1`.
    pub fn nilpotent_monomial(dims: &[usize], mono: &[usize]) -> Self {
        let mut e = Self::zero(dims);
        if mono.iter().zip(dims).all(|(m, d)| m <= d) {
            let i = e.index(mono);
            e.coeffs[i] = BigRat::one();
        }
        e
    }

    /// The line-bundle class `c · Π L_i^{m_i}` for integer (possibly negative)
    /// exponents, via `L^m = Σ_j C(m, j) x^j`.
    pub fn line(dims: &[usize], exps: &[i64], c: BigRat) -> Self {
        let mut e = Self::constant(dims, c);
        for (i, &m) in exps.iter().enumerate() {
            let mut f = Self::zero(dims);
            for j in 0..=dims[i] {
                let mut mono = vec![0; dims.len()];
                mono[i] = j;
                let k = f.index(&mono);
                f.coeffs[k] = rat(binom(m, j as i64));
            }
            e = e.mul(&f);
        }
        e
    }

    pub fn coeff(&self, mono: &[usize]) -> BigRat {
        self.coeffs[self.index(mono)].clone()
    }

    pub fn add(&self, o: &Self) -> Self {
        FixRingElem {
            dims: self.dims.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        FixRingElem {
            dims: self.dims.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.dims);
        for (ia, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ma = self.monomial_of(ia);
            for (ib, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mb = self.monomial_of(ib);
                let m: Vec<usize> = ma.iter().zip(&mb).map(|(x, y)| x + y).collect();
                if m.iter().zip(&self.dims).all(|(x, d)| x <= d) {
                    let k = out.index(&m);
                    out.coeffs[k] += a * b;
                }
            }
        }
        out
    }

    /// Inverse of a unit (nonzero constant term), by the finite geometric series.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::DegenerateWeights(
                "localization denominator has zero constant term".into(),
            ));
        }
        let inv0 = c0.recip();
        // self = c0 (1 + n) with n nilpotent
        let mut n = self.scale(&inv0);
        n.coeffs[0] = BigRat::zero();
        let neg_n = n.scale(&-BigRat::one());
        let total: usize = self.dims.iter().sum();
        let mut acc = Self::constant(&self.dims, BigRat::one());
        let mut pw = Self::constant(&self.dims, BigRat::one());
        for _ in 0..total {
            pw = pw.mul(&neg_n);
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&inv0))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::constant(&self.dims, BigRat::one());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Euler characteristic over `Π P^{d_i}`: `χ(x^j) = Π C(d_i, j_i)`, which is
    /// the functional `χ(P^d, L^k) = C(k+d, d)` written in nilpotent coordinates.
    pub fn chi(&self) -> BigRat {
        let mut total = BigRat::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = self.monomial_of(i);
            let mut w = BigInt::one();
            for (j, &m) in mono.iter().enumerate() {
                w *= binom(self.dims[j] as i64, m as i64);
            }
            total += c * BigRat::from_integer(w);
        }
        total
    }
}

/// One summand of the moving part of the tangent space at a fixed locus:
/// `mult` copies of the line `Π L_i^{line_i}` twisted by the character `weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSummand {
    pub mult: i64,
    pub line: Vec<i64>,
    pub weight: BigRat,
}

/// Moving part of `T Quot` restricted to a fixed locus:
/// `⊕_{i∈I, j≠i} π_*(K_i^∨)_{α_j/α_i} ⊖ ⊕_{i≠j∈I} π_*(K_i^∨ ⊗ K_j)_{α_j/α_i}`.
pub fn normal_bundle_kclass(loc: &FixedLocus, alpha: &[BigRat]) -> Vec<NormalSummand> {
    let r = loc.subset.len();
    let n = alpha.len();
    let mut out = Vec::new();
    for (i, &ai) in loc.subset.iter().enumerate() {
        for (j, aj) in alpha.iter().enumerate().take(n) {
            if j == ai {
                continue;
            }
            let mut line = vec![0; r];
            line[i] = 1;
            out.push(NormalSummand {
                mult: loc.dvec[i] as i64 + 1,
                line,
                weight: aj / &alpha[ai],
            });
        }
    }
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let mut line = vec![0; r];
            line[i] = 1;
            line[j] = -1;
            out.push(NormalSummand {
                mult: -(loc.dvec[i] as i64 - loc.dvec[j] as i64 + 1),
                line,
                weight: &alpha[loc.subset[j]] / &alpha[loc.subset[i]],
            });
        }
    }
    out
}

/// Contribution of one fixed locus to `χ^T(Quot, det(π_*S^∨)^{-ℓ} ⊗ S^λ(S_p^∨))`.
pub fn lefschetz_chi(loc: &FixedLocus, lambda: &[i64], level: i64, alpha: &[BigRat]) -> Result<BigRat> {
    let r = loc.subset.len();
    if lambda.len() != r || lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidParams(format!(
            "insertion {lambda:?} must be a weakly decreasing {r}-tuple"
        )));
    }
    let dims = &loc.dvec;
    let w: Vec<BigRat> = loc.subset.iter().map(|&a| alpha[a].recip()).collect();

    // S^λ(S_p^∨) = (det)^{λ_r} s_{λ - λ_r}(w_1 L_1, …, w_r L_r)
    let shift = lambda[r - 1];
    let base = Partition::new(lambda.iter().map(|x| x - shift).collect())?;
    let mut insertion = FixRingElem::zero(dims);
    for (e, mult) in schur_monomials(&base, r) {
        let exps: IntSeq = e.iter().map(|x| x + shift).collect();
        let mut c = BigRat::from_integer(BigInt::from(mult));
        for (wi, &k) in w.iter().zip(&exps) {
            c *= pow_signed(wi, k);
        }
        insertion = insertion.add(&FixRingElem::line(dims, &exps, c));
    }

    // det(π_*S^∨)^{-ℓ} = Π (w_i L_i)^{-ℓ(d_i+1)}
    let exps: IntSeq = dims.iter().map(|&d| -level * (d as i64 + 1)).collect();
    let mut c = BigRat::one();
    for (wi, &k) in w.iter().zip(&exps) {
        c *= pow_signed(wi, k);
    }
    let level_factor = FixRingElem::line(dims, &exps, c);

    // 1 / λ_{-1}(N^∨) with factors (1 - weight^{-1} M^{-1})^{mult}
    let mut denom_inv = FixRingElem::constant(dims, BigRat::one());
    for s in normal_bundle_kclass(loc, alpha) {
        if s.weight.is_one() {
            return Err(Error::DegenerateWeights(format!(
                "moving summand with trivial weight at locus {loc:?}"
            )));
        }
        let inv_line: IntSeq = s.line.iter().map(|x| -x).collect();
        let m = FixRingElem::line(dims, &inv_line, s.weight.recip());
        let factor = FixRingElem::constant(dims, BigRat::one()).add(&m.scale(&-BigRat::one()));
        denom_inv = denom_inv.mul(&factor.pow(-s.mult)?);
    }
    Ok(insertion.mul(&level_factor).mul(&denom_inv).chi())
}

fn pow_signed(x: &BigRat, e: i64) -> BigRat {
    let b = if e < 0 { x.recip() } else { x.clone() };
    let mut acc = BigRat::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &b;
    }
    acc
}

/// Sum of [`lefschetz_chi`] over all fixed loci.
pub fn oracle_total(
    lambda: &[i64],
    level: i64,
    d: usize,
    n: usize,
    r: usize,
    alpha: &[BigRat],
    mode: Parallelism,
) -> Result<BigRat> {
    if alpha.len() != n {
        return Err(Error::InvalidParams(format!("expected {n} weights")));
    }
    for i in 0..n {
        if alpha[i].is_zero() {
            return Err(Error::InvalidParams("weights must be nonzero".into()));
        }
        for j in i + 1..n {
            if alpha[i] == alpha[j] {
                return Err(Error::DegenerateWeights(format!(
                    "alpha_{} = alpha_{}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let loci = enumerate_fixed_loci(n, r, d);
    let parts = exec::try_map(mode, &loci, |loc| lefschetz_chi(loc, lambda, level, alpha))?;
    Ok(parts.into_iter().fold(BigRat::zero(), |a, b| a + b))
}
