//! Schur and generalized Schur functions evaluated at the `N` roots of
//! `P(z) = Π(z - α_i^{-1}) + (-1)^r z^{N-r-ℓ} t`, as exact polynomials in `t`.
//!
//! The only evaluation route is the dual Jacobi–Trudi determinant over the table
//! of elementary symmetric functions of the roots, which Vieta's formulas give
//! directly: every `e_j` is a constant except `e_{r+ℓ}`, which is linear in `t`.

use std::collections::BTreeMap;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{binom, straighten, IntSeq, Partition};
use crate::error::{Error, Result};
use crate::exact_poly::{rat, tpoly_det, BigRat, TPoly};

/// Problem instance: `N`, `r`, level `ℓ` and optional equivariant weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootParams {
    pub n: usize,
    pub r: usize,
    pub level: i64,
    /// `None` is the non-equivariant specialization (all weights equal to 1).
    pub alpha: Option<Vec<BigRat>>,
}

impl RootParams {
    /// Non-equivariant instance, validated.
    pub fn new(n: usize, r: usize, level: i64) -> Result<Self> {
        let p = RootParams {
            n,
            r,
            level,
            alpha: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Equivariant instance with pairwise distinct nonzero weights, validated.
    pub fn equivariant(n: usize, r: usize, level: i64, alpha: Vec<BigRat>) -> Result<Self> {
        let p = RootParams {
            n,
            r,
            level,
            alpha: Some(alpha),
        };
        p.validate()?;
        Ok(p)
    }

    /// Equivariant instance without the distinctness check (used to force the
    /// equivariant code path at special weights such as all ones).
    pub fn equivariant_unchecked(n: usize, r: usize, level: i64, alpha: Vec<BigRat>) -> Result<Self> {
        let p = RootParams {
            n,
            r,
            level,
            alpha: Some(alpha),
        };
        p.validate_window()?;
        if p.alpha.as_ref().is_some_and(|a| a.len() != n || a.iter().any(Zero::is_zero)) {
            return Err(Error::InvalidParams("weights must be N nonzero rationals".into()));
        }
        Ok(p)
    }

    fn validate_window(&self) -> Result<()> {
        if self.n == 0 || self.r == 0 || self.r > self.n {
            return Err(Error::InvalidParams(format!(
                "need 1 <= r <= N, got N={}, r={}",
                self.n, self.r
            )));
        }
        let (n, r) = (self.n as i64, self.r as i64);
        if !(-r < self.level && self.level <= n - r) {
            return Err(Error::InvalidParams(format!(
                "level {} outside the window ({}, {}]",
                self.level,
                -r,
                n - r
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_window()?;
        if let Some(a) = &self.alpha {
            if a.len() != self.n {
                return Err(Error::InvalidParams(format!(
                    "expected {} weights, got {}",
                    self.n,
                    a.len()
                )));
            }
            if a.iter().any(Zero::is_zero) {
                return Err(Error::InvalidParams("weights must be nonzero".into()));
            }
            for i in 0..a.len() {
                for j in i + 1..a.len() {
                    if a[i] == a[j] {
                        return Err(Error::DegenerateWeights(format!(
                            "alpha_{} = alpha_{} = {}",
                            i + 1,
                            j + 1,
                            a[i]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `k = N - r`.
    pub fn k(&self) -> i64 {
        (self.n - self.r) as i64
    }

    /// Same instance at another level.
    pub fn at_level(&self, level: i64) -> Result<Self> {
        let mut p = self.clone();
        p.level = level;
        p.validate_window()?;
        Ok(p)
    }
}

/// Default generic weights: the first `N` primes.
pub fn default_alpha(n: usize) -> Vec<BigRat> {
    let mut primes = Vec::new();
    let mut c = 2i64;
    while primes.len() < n {
        if (2..c).take_while(|p| p * p <= c).all(|p| c % p != 0) {
            primes.push(rat(c));
        }
        c += 1;
    }
    primes
}

/// `e_0, …, e_N` of the roots as polynomials in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ETable {
    pub e: Vec<TPoly>,
}

impl ETable {
    /// `e_j`, zero outside `0..=N`.
    pub fn get(&self, j: i64) -> TPoly {
        if j < 0 || j as usize >= self.e.len() {
            TPoly::zero()
        } else {
            self.e[j as usize].clone()
        }
    }
}

/// Vieta table: `e_j = e_j(α^{-1})` for `j != r+ℓ` and
/// `e_{r+ℓ} = e_{r+ℓ}(α^{-1}) + (-1)^ℓ t`.
pub fn e_table(p: &RootParams) -> ETable {
    let n = p.n;
    let base: Vec<BigRat> = match &p.alpha {
        None => (0..=n).map(|j| rat(binom(n as i64, j as i64))).collect(),
        Some(alpha) => {
            // coefficients of Π (1 + x / α_i)
            let mut c = vec![BigRat::one()];
            for a in alpha {
                let inv = a.recip();
                let mut next = vec![BigRat::zero(); c.len() + 1];
                for (j, cj) in c.iter().enumerate() {
                    next[j] += cj;
                    next[j + 1] += cj * &inv;
                }
                c = next;
            }
            c
        }
    };
    let slot = (p.r as i64 + p.level) as usize;
    let sign = if p.level.rem_euclid(2) == 0 {
        BigRat::one()
    } else {
        -BigRat::one()
    };
    let e = base
        .into_iter()
        .enumerate()
        .map(|(j, c)| {
            if j == slot {
                TPoly::from_coeffs(vec![c, sign.clone()])
            } else {
                TPoly::constant(c)
            }
        })
        .collect();
    ETable { e }
}

/// Laurent polynomial in one variable `z`: exponent → coefficient.
pub type LaurentPoly = BTreeMap<i64, BigRat>;

/// `z^d (1 - 1/z)^m` as a Laurent polynomial.
pub fn shifted_one_minus_inverse(d: i64, m: i64) -> LaurentPoly {
    let mut f = LaurentPoly::new();
    for j in 0..=m {
        let c = binom(m, j);
        let c = if j % 2 == 0 { c } else { -c };
        f.insert(d - j, rat(c));
    }
    f
}

/// Cached evaluator for one [`RootParams`].
///
/// Determinants are memoized by the normalized (last part zero) partition; the
/// cache is concurrent so sweeps may share one engine across threads.
pub struct SchurEngine {
    params: RootParams,
    etable: ETable,
    cache: DashMap<IntSeq, TPoly>,
}

/// A straightened index reduced to a cached determinant key.
enum Reduced {
    Zero,
    /// `sign * e_N^shift * det(key)`
    Term { sign: i8, shift: i64, key: IntSeq },
}

impl SchurEngine {
    pub fn new(params: RootParams) -> Result<Self> {
        params.validate_window()?;
        let etable = e_table(&params);
        Ok(SchurEngine {
            params,
            etable,
            cache: DashMap::new(),
        })
    }

    pub fn params(&self) -> &RootParams {
        &self.params
    }

    pub fn etable(&self) -> &ETable {
        &self.etable
    }

    fn reduce(&self, idx: &[i64]) -> Result<Reduced> {
        if idx.len() != self.params.n {
            return Err(Error::InvalidParams(format!(
                "index {idx:?} must have length N = {}",
                self.params.n
            )));
        }
        let st = straighten(idx);
        let Some(parts) = st.parts else {
            return Ok(Reduced::Zero);
        };
        let shift = *parts.last().expect("N >= 1");
        let key: IntSeq = parts.iter().map(|x| x - shift).collect();
        Ok(Reduced::Term {
            sign: st.sign,
            shift,
            key,
        })
    }

    /// Dual Jacobi–Trudi determinant `det(e_{λ'_i - i + j})` for a partition.
    fn jt_det(&self, key: &[i64]) -> Result<TPoly> {
        if let Some(v) = self.cache.get(key) {
            return Ok(v.clone());
        }
        let lam = Partition::new(key.to_vec())?;
        let conj = lam.conjugate();
        let m = lam.part(1) as usize;
        let mat: Vec<Vec<TPoly>> = (1..=m)
            .map(|i| {
                (1..=m)
                    .map(|j| self.etable.get(conj.part(i) - i as i64 + j as i64))
                    .collect()
            })
            .collect();
        let det = tpoly_det(&mat)?;
        self.cache.insert(key.to_vec(), det.clone());
        Ok(det)
    }

    fn e_n(&self) -> TPoly {
        self.etable.e[self.params.n].clone()
    }

    /// `s_idx(z_1, …, z_N)` as a polynomial in `t`.
    ///
    /// Fails only when the index needs a negative power of `e_N` while `e_N`
    /// depends on `t` (level `ℓ = N - r`); use [`SchurEngine::schur_coeff`] there.
    pub fn schur_at_roots(&self, idx: &[i64]) -> Result<TPoly> {
        match self.reduce(idx)? {
            Reduced::Zero => Ok(TPoly::zero()),
            Reduced::Term { sign, shift, key } => {
                let det = self.jt_det(&key)?;
                let en = self.e_n();
                let scaled = if shift >= 0 {
                    &det * &en.pow(shift as u32)
                } else {
                    let c = en.as_constant().ok_or_else(|| {
                        Error::InvalidParams(format!(
                            "s_{idx:?} is a power series, not a polynomial, in t at level N-r"
                        ))
                    })?;
                    det.scale(&pow_rat(&c.recip(), (-shift) as u32))
                };
                Ok(if sign < 0 { -&scaled } else { scaled })
            }
        }
    }

    /// `[t^d] s_idx(z_1, …, z_N)`, expanding negative powers of a non-constant
    /// `e_N` as power series in `t`.
    pub fn schur_coeff(&self, idx: &[i64], d: usize) -> Result<BigRat> {
        match self.reduce(idx)? {
            Reduced::Zero => Ok(BigRat::zero()),
            Reduced::Term { sign, shift, key } => {
                let det = self.jt_det(&key)?;
                let en = self.e_n();
                let v = match en.as_constant() {
                    Some(c) => det.coeff(d) * pow_rat_signed(&c, shift),
                    None => {
                        let factor = if shift >= 0 {
                            en.pow(shift as u32)
                        } else {
                            let inv = en.inverse_series(d)?;
                            let mut acc = TPoly::one();
                            for _ in 0..(-shift) {
                                acc = acc.mul_trunc(&inv, d);
                            }
                            acc
                        };
                        det.mul_trunc(&factor, d).coeff(d)
                    }
                };
                Ok(if sign < 0 { -v } else { v })
            }
        }
    }

    /// Group the multilinear expansion of `s_{(f_1,…,f_r)}` by determinant key.
    fn expand_generalized(&self, f: &[LaurentPoly]) -> Result<BTreeMap<IntSeq, BigRat>> {
        if f.len() != self.params.r {
            return Err(Error::InvalidParams(format!(
                "expected {} Laurent polynomials, got {}",
                self.params.r,
                f.len()
            )));
        }
        let n = self.params.n;
        let mut acc: BTreeMap<IntSeq, BigRat> = BTreeMap::new();
        let mut idx = vec![0i64; n];
        fn rec(
            i: usize,
            coeff: BigRat,
            f: &[LaurentPoly],
            idx: &mut Vec<i64>,
            acc: &mut BTreeMap<IntSeq, BigRat>,
        ) {
            if i == f.len() {
                *acc.entry(idx.clone()).or_insert_with(BigRat::zero) += coeff;
                return;
            }
            for (&e, c) in &f[i] {
                if c.is_zero() {
                    continue;
                }
                idx[i] = e;
                rec(i + 1, &coeff * c, f, idx, acc);
            }
        }
        rec(0, BigRat::one(), f, &mut idx, &mut acc);
        acc.retain(|_, c| !c.is_zero());
        Ok(acc)
    }

    /// `s_{(f_1,…,f_r)}(z_1, …, z_N)` as a polynomial in `t`.
    pub fn generalized_schur_at_roots(&self, f: &[LaurentPoly]) -> Result<TPoly> {
        let mut total = TPoly::zero();
        for (idx, c) in self.expand_generalized(f)? {
            total = &total + &self.schur_at_roots(&idx)?.scale(&c);
        }
        Ok(total)
    }

    /// `[t^d] s_{(f_1,…,f_r)}(z_1, …, z_N)`.
    pub fn generalized_schur_coeff(&self, f: &[LaurentPoly], d: usize) -> Result<BigRat> {
        let mut total = BigRat::zero();
        for (idx, c) in self.expand_generalized(f)? {
            total += self.schur_coeff(&idx, d)? * c;
        }
        Ok(total)
    }

    /// Upper bound on the `t`-degree of `s_idx`: the Jacobi–Trudi matrix size
    /// plus the `e_N` power when `e_N` carries `t`.
    pub fn t_degree_bound(&self, idx: &[i64]) -> Result<Option<usize>> {
        match self.reduce(idx)? {
            Reduced::Zero => Ok(Some(0)),
            Reduced::Term { shift, key, .. } => {
                let base = key.first().copied().unwrap_or(0).max(0) as usize;
                if self.e_n().as_constant().is_some() {
                    Ok(Some(base))
                } else if shift >= 0 {
                    Ok(Some(base + shift as usize))
                } else {
                    Ok(None)
                }
            }
        }
    }
}

fn pow_rat(x: &BigRat, e: u32) -> BigRat {
    let mut acc = BigRat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn pow_rat_signed(x: &BigRat, e: i64) -> BigRat {
    if e >= 0 {
        pow_rat(x, e as u32)
    } else {
        pow_rat(&x.recip(), (-e) as u32)
    }
}

/// `s_idx(z)` for a one-off evaluation (no shared cache).
pub fn schur_at_roots(idx: &[i64], p: &RootParams) -> Result<TPoly> {
    SchurEngine::new(p.clone())?.schur_at_roots(idx)
}

/// `s_{(f_1,…,f_r)}(z)` for a one-off evaluation (no shared cache).
pub fn generalized_schur_at_roots(f: &[LaurentPoly], p: &RootParams) -> Result<TPoly> {
    SchurEngine::new(p.clone())?.generalized_schur_at_roots(f)
}

/// Integer coefficient helper for non-equivariant callers.
pub fn integral(x: BigRat) -> Result<BigInt> {
    crate::exact_poly::to_integer(&x)
}
