//! High-precision numerical validator: the subset-sum residue formula over the
//! roots of `P(z) = Π(z - α_i^{-1}) + (-1)^r z^{N-r-ℓ} t`, evaluated at sample
//! values of `t`, interpolated, and rationalized.
//!
//! This is deliberately independent of the Jacobi–Trudi engine: it finds the
//! roots numerically (Durand–Kerner), evaluates the insertion by a complex
//! bialternant, and only consults the engine for an upper bound on the
//! `t`-degree, which decides how many samples are needed.

use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_poly::BigRat;
use crate::grothendieck::SchurVector;
use crate::schur_eval::{RootParams, SchurEngine};

type F = FBig<HalfEven, 2>;
type C = Complex<F>;

/// Tunables of the validator.
#[derive(Clone, Debug)]
pub struct NumericConfig {
    /// Working precision in bits.
    pub precision: usize,
    /// `t`-samples are `k / sample_denominator` for `k = 1, 2, …`.
    pub sample_denominator: i64,
    /// Extra samples beyond the degree bound (their high coefficients must vanish).
    pub margin: usize,
    /// Largest admissible denominator of the rationalized result.
    pub max_denominator: i64,
    /// Acceptance threshold is `10^{-tolerance_digits}`.
    pub tolerance_digits: u32,
    pub max_iterations: usize,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            precision: 200,
            sample_denominator: 1000,
            margin: 2,
            max_denominator: 1_000_000,
            tolerance_digits: 30,
            max_iterations: 5000,
        }
    }
}

struct Num {
    prec: usize,
}

impl Num {
    fn int(&self, x: &BigInt) -> F {
        let i = IBig::from_str(&x.to_string()).expect("decimal integer");
        F::from(i).with_precision(self.prec).value()
    }

    fn small(&self, x: i64) -> F {
        self.int(&BigInt::from(x))
    }

    fn rat(&self, x: &BigRat) -> F {
        self.int(x.numer()) / self.int(x.denom())
    }

    fn re(&self, x: F) -> C {
        Complex::new(x, self.small(0))
    }

    fn abs1(&self, z: &C) -> F {
        z.re.abs() + z.im.abs()
    }

    fn pow10_neg(&self, k: u32) -> F {
        let mut x = self.small(1);
        let ten = self.small(10);
        for _ in 0..k {
            x = x / &ten;
        }
        x
    }

    fn powi(&self, z: &C, e: i64) -> C {
        let base = if e < 0 { self.re(self.small(1)) / z } else { z.clone() };
        let mut acc = self.re(self.small(1));
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

/// Monic polynomial coefficients (ascending) of `P(z)` at a real `t`.
fn p_coeffs(num: &Num, p: &RootParams, alpha: &[BigRat], t: &F) -> Vec<F> {
    let mut c = vec![num.small(1)];
    for a in alpha {
        let root = num.rat(&a.recip());
        let mut next = vec![num.small(0); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = &next[i + 1] + ci;
            next[i] = &next[i] - &(ci * &root);
        }
        c = next;
    }
    let e = (p.n as i64 - p.r as i64 - p.level) as usize;
    let sign = if p.r % 2 == 0 { num.small(1) } else { num.small(-1) };
    c[e] = &c[e] + &(sign * t);
    c
}

fn horner(num: &Num, coeffs: &[F], z: &C) -> C {
    let mut acc = num.re(num.small(0));
    for c in coeffs.iter().rev() {
        acc = &(&acc * z) + &num.re(c.clone());
    }
    acc
}

fn derivative(num: &Num, coeffs: &[F]) -> Vec<F> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * &num.small(i as i64))
        .collect()
}

/// All roots of a monic polynomial by Durand–Kerner iteration.
fn roots(num: &Num, coeffs: &[F], start: &[C], cfg: &NumericConfig) -> Result<Vec<C>> {
    let mut z = start.to_vec();
    let eps = {
        let mut e = num.small(1);
        let two = num.small(2);
        for _ in 0..cfg.precision.saturating_sub(16) {
            e = e / &two;
        }
        e
    };
    for _ in 0..cfg.max_iterations {
        let mut worst = num.small(0);
        for i in 0..z.len() {
            let mut denom = num.re(num.small(1));
            for j in 0..z.len() {
                if i != j {
                    denom = &denom * &(&z[i] - &z[j]);
                }
            }
            let step = horner(num, coeffs, &z[i]) / denom;
            let size = num.abs1(&step);
            if size > worst {
                worst = size;
            }
            z[i] = &z[i] - &step;
        }
        if worst < eps {
            return Ok(z);
        }
    }
    Err(Error::NumericFailure("root iteration did not converge".into()))
}

fn det(num: &Num, mut m: Vec<Vec<C>>) -> C {
    let n = m.len();
    let mut acc = num.re(num.small(1));
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| {
                num.abs1(&m[a][col])
                    .partial_cmp(&num.abs1(&m[b][col]))
                    .expect("finite")
            })
            .expect("nonempty");
        if num.abs1(&m[piv][col]).is_zero() {
            return num.re(num.small(0));
        }
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        acc = &acc * &m[col][col];
        for row in col + 1..n {
            let f = &m[row][col] / &m[col][col];
            for k in col..n {
                let v = &m[col][k] * &f;
                m[row][k] = &m[row][k] - &v;
            }
        }
    }
    acc
}

/// The residue sum at one `t`.
fn residue_sum(num: &Num, p: &RootParams, v: &SchurVector, d: usize, z: &[C], dp: &[F]) -> C {
    let (n, r) = (p.n, p.r);
    let extra = n as i64 - r as i64 + d as i64 - p.level;
    let sign_rr = if (r * (r - 1) / 2) % 2 == 0 { 1 } else { -1 };
    let weights: Vec<C> = z
        .iter()
        .map(|zi| num.powi(zi, extra) / horner(num, dp, zi))
        .collect();
    let mut total = num.re(num.small(0));
    let mut subset: Vec<usize> = (0..r).collect();
    loop {
        let zs: Vec<&C> = subset.iter().map(|&i| &z[i]).collect();
        // Π_{i≠j}(z_i - z_j) = (-1)^{r(r-1)/2} Δ², and s_μ Δ = a_{μ+δ}
        let vandermonde = det(
            num,
            zs.iter()
                .map(|zi| (0..r).map(|j| num.powi(zi, (r - 1 - j) as i64)).collect())
                .collect(),
        );
        let mut numer = num.re(num.small(0));
        for (key, c) in v.terms() {
            let a = det(
                num,
                zs.iter()
                    .map(|zi| {
                        (0..r)
                            .map(|j| num.powi(zi, key[j] + (r - 1 - j) as i64))
                            .collect()
                    })
                    .collect(),
            );
            numer = &numer + &(&a * &num.re(num.int(c)));
        }
        let mut term = &numer * &vandermonde;
        if sign_rr < 0 {
            term = -term;
        }
        for &i in &subset {
            term = &term * &weights[i];
        }
        total = &total + &term;

        // next r-subset in lexicographic order
        let mut i = r;
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            if subset[i] < n - r + i {
                subset[i] += 1;
                for j in i + 1..r {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Continued-fraction rationalization with a bounded denominator.
fn rationalize(num: &Num, x: &F, max_den: i64, tol: &F) -> Option<BigRat> {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x.clone();
    for _ in 0..200 {
        let a_f = y.floor();
        let a = BigInt::from_str(&a_f.to_int().value().to_string()).ok()?;
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            return None;
        }
        let cand = BigRat::new(h2.clone(), k2.clone());
        if (&num.rat(&cand) - x).abs() < *tol {
            return Some(cand);
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = &y - &a_f;
        if frac.is_zero() {
            return None;
        }
        y = num.small(1) / frac;
    }
    None
}

/// `[t^d]` of the subset-sum residue formula, computed numerically and
/// rationalized; must agree with the exact one-point invariant.
pub fn vafa_intriligator_numeric(v: &SchurVector, d: usize, p: &RootParams) -> Result<BigRat> {
    vafa_intriligator_numeric_with(v, d, p, &NumericConfig::default())
}

/// [`vafa_intriligator_numeric`] with explicit tunables.
pub fn vafa_intriligator_numeric_with(
    v: &SchurVector,
    d: usize,
    p: &RootParams,
    cfg: &NumericConfig,
) -> Result<BigRat> {
    if v.rank() != p.r {
        return Err(Error::RankMismatch(v.rank(), p.r));
    }
    let num = Num {
        prec: cfg.precision,
    };
    let alpha: Vec<BigRat> = p
        .alpha
        .clone()
        .unwrap_or_else(|| vec![BigRat::one(); p.n]);

    // degree bound from the exact engine's Jacobi–Trudi sizes
    let engine = SchurEngine::new(p.clone())?;
    let mut bound = d;
    for key in v.terms().keys() {
        let mut idx: Vec<i64> = key.iter().map(|x| x + d as i64 - p.level).collect();
        idx.resize(p.n, 0);
        let b = engine.t_degree_bound(&idx)?.ok_or_else(|| {
            Error::NumericFailure("insertion is a power series in t at this level".into())
        })?;
        bound = bound.max(b);
    }
    let samples = bound + 1 + cfg.margin;

    let ts: Vec<F> = (1..=samples as i64)
        .map(|k| num.small(k) / num.small(cfg.sample_denominator))
        .collect();
    let spiral = Complex::new(num.small(4) / num.small(10), num.small(9) / num.small(10));
    let mut start: Vec<C> = Vec::with_capacity(p.n);
    let mut w = spiral.clone();
    for a in &alpha {
        let scale = num.small(1) / num.small(100);
        start.push(&num.re(num.rat(&a.recip())) + &(&w * &num.re(scale)));
        w = &w * &spiral;
    }

    let mut values: Vec<F> = Vec::with_capacity(samples);
    let mut prev = start;
    for t in &ts {
        let coeffs = p_coeffs(&num, p, &alpha, t);
        let z = roots(&num, &coeffs, &prev, cfg)?;
        let dp = derivative(&num, &coeffs);
        let s = residue_sum(&num, p, v, d, &z, &dp);
        values.push(s.re);
        prev = z;
    }

    // Interpolate through the first `bound + 1` samples (Newton form); the
    // margin samples measure the interpolation residual.
    let m = bound + 1;
    let mut dd = values[..m].to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&ts[i] - &ts[i - j]);
        }
    }
    let tol = num.pow10_neg(cfg.tolerance_digits);
    for (t, val) in ts.iter().zip(&values).skip(m) {
        let mut acc = dd[m - 1].clone();
        for i in (0..m - 1).rev() {
            acc = &(&acc * &(t - &ts[i])) + &dd[i];
        }
        if (&acc - val).abs() > tol {
            return Err(Error::NumericFailure(
                "interpolation residual exceeds tolerance".into(),
            ));
        }
    }
    let mut poly = vec![num.small(0); m];
    for i in (0..m).rev() {
        // poly = poly * (t - ts[i]) + dd[i]
        let mut next = vec![num.small(0); m];
        for k in 0..m {
            if k + 1 < m {
                next[k + 1] = &next[k + 1] + &poly[k];
            }
            next[k] = &next[k] - &(&poly[k] * &ts[i]);
        }
        next[0] = &next[0] + &dd[i];
        poly = next;
    }
    rationalize(&num, &poly[d], cfg.max_denominator, &tol).ok_or_else(|| {
        Error::NumericFailure(format!(
            "[t^{d}] is not within tolerance of a rational with denominator <= {}",
            cfg.max_denominator
        ))
    })
}
