//! One-pointed K-theoretic Quot-scheme invariants at any level, their
//! `q`-correlation series, higher-genus invariants through the Euler
//! representation, vanishing predicates and the tautological determinant.
//!
//! For an insertion `V = Σ c_μ s_μ` the degree-`d` invariant is
//! `Σ c_μ [t^d] s_{μ + (d-ℓ)^r}(z_1, …, z_N)` with the index padded to length `N`.

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::{IntSeq, Partition};
use crate::error::{Error, Result};
use crate::exact_poly::{to_integer, BigRat, TailSeries};
use crate::grothendieck::{dual_key, euler_representation, grothendieck_char, SchurVector};
use crate::schur_eval::{shifted_one_minus_inverse, LaurentPoly, RootParams, SchurEngine};

/// A requested invariant `⟨V⟩_{g,d}` at the given parameters.
#[derive(Clone, Debug)]
pub struct InvariantRequest {
    pub v: SchurVector,
    pub d: usize,
    pub params: RootParams,
    pub genus: usize,
}

impl InvariantRequest {
    /// Evaluate; positive genus requires level 0 and no weights.
    pub fn evaluate(&self) -> Result<BigRat> {
        if self.v.rank() != self.params.r {
            return Err(Error::RankMismatch(self.v.rank(), self.params.r));
        }
        if self.genus == 0 {
            return one_point(&self.v, self.d, &self.params);
        }
        if self.params.level != 0 || self.params.alpha.is_some() {
            return Err(Error::InvalidParams(
                "higher genus is supported at level 0 without weights only".into(),
            ));
        }
        genus_invariant(&self.v, self.genus, self.d, self.params.n, self.params.r)
            .map(BigRat::from_integer)
    }
}

/// Which route evaluates `⟨O_λ⟩_{0,d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Route {
    /// Generalized Schur function with rows `z^d (1 - 1/z)^{λ_i + r - i}`.
    #[default]
    GeneralizedSchur,
    /// Character of `O_λ` expanded in Schur functions, then evaluated termwise.
    Character,
}

/// A correlation series `Σ_d ⟨V⟩_{0,d} q^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Series {
    /// Exact closed form `P(q) + c q^D/(1-q)`.
    Closed(TailSeries),
    /// Coefficients `0..=truncated_at` with no closed-form claim.
    Truncated { coeffs: Vec<BigInt>, truncated_at: usize },
}

impl Series {
    /// Coefficient of `q^e` (errors past a truncation).
    pub fn coeff(&self, e: usize) -> Result<BigInt> {
        match self {
            Series::Closed(s) => Ok(s.coeff(e)),
            Series::Truncated { coeffs, truncated_at } => {
                if e > *truncated_at {
                    Err(Error::QDegreeOverflow(format!(
                        "coefficient q^{e} requested beyond truncation q^{truncated_at}"
                    )))
                } else {
                    Ok(coeffs[e].clone())
                }
            }
        }
    }

    pub fn closed(&self) -> Option<&TailSeries> {
        match self {
            Series::Closed(s) => Some(s),
            Series::Truncated { .. } => None,
        }
    }
}

/// Number of extra degrees evaluated past a predicted stabilization point to
/// confirm it.
fn guard(r: usize) -> usize {
    r + 1
}

/// Cached evaluator of invariants for one [`RootParams`].
pub struct Invariants {
    engine: SchurEngine,
    key_series: DashMap<IntSeq, TailSeries>,
}

impl Invariants {
    pub fn new(params: RootParams) -> Result<Self> {
        Ok(Invariants {
            engine: SchurEngine::new(params)?,
            key_series: DashMap::new(),
        })
    }

    pub fn params(&self) -> &RootParams {
        self.engine.params()
    }

    pub fn engine(&self) -> &SchurEngine {
        &self.engine
    }

    fn padded_index(&self, key: &[i64], shift: i64) -> IntSeq {
        let n = self.params().n;
        let mut idx: IntSeq = key.iter().map(|x| x + shift).collect();
        idx.resize(n, 0);
        idx
    }

    /// `[t^d] s_{key + (d-ℓ)^r}(z)` for one Schur key.
    pub fn schur_key(&self, key: &[i64], d: usize) -> Result<BigRat> {
        if key.len() != self.params().r {
            return Err(Error::RankMismatch(key.len(), self.params().r));
        }
        let idx = self.padded_index(key, d as i64 - self.params().level);
        self.engine.schur_coeff(&idx, d)
    }

    /// `⟨V⟩_{0,d}` at level `ℓ`.
    pub fn one_point(&self, v: &SchurVector, d: usize) -> Result<BigRat> {
        if v.rank() != self.params().r {
            return Err(Error::RankMismatch(v.rank(), self.params().r));
        }
        let mut total = BigRat::zero();
        for (key, c) in v.terms() {
            total += self.schur_key(key, d)? * BigRat::from_integer(c.clone());
        }
        Ok(total)
    }

    /// Invariant of `S^λ((C^r)^∨)`-dual insertion: `[t^d] s_{λ̃ + (d-ℓ)^r}` with
    /// `λ̃ = (-λ_r, …, -λ_1)`.
    pub fn one_point_dual(&self, lambda: &[i64], d: usize) -> Result<BigRat> {
        let mut l = lambda.to_vec();
        l.resize(self.params().r, 0);
        self.schur_key(&dual_key(&l), d)
    }

    /// `⟨O_λ⟩_{0,d}` by the chosen route.
    pub fn grothendieck_one_point(&self, lambda: &Partition, d: usize, route: Route) -> Result<BigRat> {
        let r = self.params().r;
        if lambda.len() > r {
            return Err(Error::InvalidParams(format!(
                "{lambda:?} has more than {r} parts"
            )));
        }
        match route {
            Route::GeneralizedSchur => {
                if self.params().level != 0 {
                    return Err(Error::InvalidParams(
                        "the generalized-Schur route is stated at level 0".into(),
                    ));
                }
                let lam = lambda.padded(r);
                let f: Vec<LaurentPoly> = (0..r)
                    .map(|i| shifted_one_minus_inverse(d as i64, lam[i] + (r - 1 - i) as i64))
                    .collect();
                self.engine.generalized_schur_coeff(&f, d)
            }
            Route::Character => self.one_point(&grothendieck_char(lambda, r)?, d),
        }
    }

    fn require_plain(&self) -> Result<()> {
        if self.params().level != 0 || self.params().alpha.is_some() {
            return Err(Error::InvalidParams(
                "closed-form series need level 0 without weights".into(),
            ));
        }
        Ok(())
    }

    /// Evaluate `a_d` for `d < stable + guard`, check that `a_d` is constant for
    /// `d >= stable`, and return the closed form.
    fn closed_from<F>(&self, stable: usize, what: &str, f: F) -> Result<TailSeries>
    where
        F: Fn(usize) -> Result<BigRat>,
    {
        let total = stable + guard(self.params().r);
        let a: Vec<BigInt> = (0..total)
            .map(|d| f(d).and_then(|x| to_integer(&x)))
            .collect::<Result<_>>()?;
        let c = a[total - 1].clone();
        if a[stable..].iter().any(|x| *x != c) {
            return Err(Error::InternalInconsistency(format!(
                "correlator of {what} does not stabilize from degree {stable}: {a:?}"
            )));
        }
        Ok(TailSeries::with_tail(&a[..stable], &c, stable))
    }

    /// Closed-form series `Σ_d ⟨s_key⟩_{0,d} q^d` for a nonpositive key
    /// (level 0, no weights). The key's dual partition `ν` gives the predicted
    /// stabilization degree `max(0, ν_1 - (N-r))`, which is then verified.
    pub fn key_series(&self, key: &[i64]) -> Result<TailSeries> {
        if let Some(s) = self.key_series.get(key) {
            return Ok(s.clone());
        }
        self.require_plain()?;
        if key.first().is_some_and(|&x| x > 0) {
            return Err(Error::InvalidParams(format!(
                "key {key:?} has positive parts; no closed form is claimed"
            )));
        }
        let nu1 = key.last().map_or(0, |&x| -x);
        let stable = (nu1 - self.params().k()).max(0) as usize;
        let s = self.closed_from(stable, &format!("s{key:?}"), |d| self.schur_key(key, d))?;
        self.key_series.insert(key.to_vec(), s.clone());
        Ok(s)
    }

    /// Correlation series of an arbitrary insertion: exact when every key is
    /// nonpositive (level 0, no weights), otherwise truncated at `q_max`.
    pub fn correlator(&self, v: &SchurVector, q_max: usize) -> Result<Series> {
        if v.rank() != self.params().r {
            return Err(Error::RankMismatch(v.rank(), self.params().r));
        }
        if self.require_plain().is_ok() && v.all_keys_nonpositive() {
            let mut total = TailSeries::zero();
            for (key, c) in v.terms() {
                total = total.add(&self.key_series(key)?.scale(c));
            }
            return Ok(Series::Closed(total));
        }
        let coeffs = (0..=q_max)
            .map(|d| self.one_point(v, d).and_then(|x| to_integer(&x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Series::Truncated {
            coeffs,
            truncated_at: q_max,
        })
    }

    /// Exact correlator of a nonpositive-key insertion.
    pub fn closed_correlator(&self, v: &SchurVector) -> Result<TailSeries> {
        match self.correlator(v, 0)? {
            Series::Closed(s) => Ok(s),
            Series::Truncated { .. } => Err(Error::InvalidParams(
                "insertion has no closed-form correlator".into(),
            )),
        }
    }

    /// `⟨⟨O_λ⟩⟩ = P_λ(q) + q^{d_λ}/(1-q)` with `d_λ = max(0, λ_1 - (N-r))`,
    /// evaluated degree by degree along the chosen route and verified to
    /// stabilize.
    pub fn grothendieck_series(&self, lambda: &Partition, route: Route) -> Result<TailSeries> {
        self.require_plain()?;
        let stable = (lambda.part(1) - self.params().k()).max(0) as usize;
        self.closed_from(stable, &format!("O{lambda:?}"), |d| {
            self.grothendieck_one_point(lambda, d, route)
        })
    }

    /// `[t^d] s_{((m+1)ℓ + d)^r}`: Euler characteristic of `(det M^{[d]})^ℓ`.
    pub fn tautological_det(&self, m: i64, d: usize) -> Result<BigRat> {
        let p = self.params();
        let key = vec![(m + 1) * p.level + d as i64; p.r];
        let mut idx = key;
        idx.resize(p.n, 0);
        self.engine.schur_coeff(&idx, d)
    }
}

/// `⟨V⟩^{ℓ}_{0,d}` (one-off).
pub fn one_point(v: &SchurVector, d: usize, p: &RootParams) -> Result<BigRat> {
    Invariants::new(p.clone())?.one_point(v, d)
}

/// Invariant of `S^λ(S_p)`: `[t^d] s_{λ̃ + (d-ℓ)^r}` (one-off).
pub fn one_point_dual(lambda: &[i64], d: usize, p: &RootParams) -> Result<BigRat> {
    Invariants::new(p.clone())?.one_point_dual(lambda, d)
}

/// `⟨O_λ⟩_{0,d}` through the generalized Schur function (one-off).
pub fn grothendieck_one_point(lambda: &Partition, d: usize, p: &RootParams) -> Result<BigRat> {
    Invariants::new(p.clone())?.grothendieck_one_point(lambda, d, Route::GeneralizedSchur)
}

/// Correlation series of `V` (one-off); see [`Invariants::correlator`].
pub fn correlation_series(v: &SchurVector, p: &RootParams, q_max: usize) -> Result<Series> {
    Invariants::new(p.clone())?.correlator(v, q_max)
}

/// `⟨⟨O_λ⟩⟩` in closed form (one-off).
pub fn grothendieck_series(lambda: &Partition, p: &RootParams) -> Result<TailSeries> {
    Invariants::new(p.clone())?.grothendieck_series(lambda, Route::GeneralizedSchur)
}

/// `⟨V⟩_{g,d} = ⟨V · H^g⟩_{0,d}` at level 0 without weights.
pub fn genus_invariant(v: &SchurVector, g: usize, d: usize, n: usize, r: usize) -> Result<BigInt> {
    let p = RootParams::new(n, r, 0)?;
    let mut w = v.clone();
    if g > 0 {
        let h = euler_representation(n, r)?;
        for _ in 0..g {
            w = w.mul(&h)?;
        }
    }
    to_integer(&one_point(&w, d, &p)?)
}

/// Euler characteristic of the `ℓ`-th power of the tautological determinant
/// attached to a line bundle of degree `m` (one-off).
pub fn tautological_det(m: i64, d: usize, p: &RootParams) -> Result<BigRat> {
    Invariants::new(p.clone())?.tautological_det(m, d)
}

/// Which vanishing statement (if any) forces `⟨S^λ(S_p)⟩_{0,d} = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VanishingClass {
    /// `λ ≠ ∅` and `d ≥ λ_1 - (N-r)`.
    ForcedZeroWide,
    /// `r < N`, `d > 0`, `λ ≠ ∅`, `d ≥ λ_1 - 2(N-r)` and `λ_r > 0`.
    ForcedZeroFullRank,
    /// `r < N`, `d > 0`, `λ ≠ ∅`, `d ≥ λ_1 - 2(N-r)` and `d ≥ r`.
    ForcedZeroHighDegree,
    NotForced,
}

impl VanishingClass {
    pub fn forced(self) -> bool {
        self != VanishingClass::NotForced
    }
}

/// Classify `(λ, d)` by the vanishing statements; `λ = ∅` is never forced
/// (its invariant is 1).
pub fn vanishing_class(lambda: &Partition, d: usize, n: usize, r: usize) -> VanishingClass {
    if lambda.is_empty() || lambda.len() > r {
        return VanishingClass::NotForced;
    }
    let d = d as i64;
    let k = n as i64 - r as i64;
    if d >= lambda.part(1) - k {
        return VanishingClass::ForcedZeroWide;
    }
    if r < n && d > 0 && d >= lambda.part(1) - 2 * k {
        if lambda.part(r) > 0 {
            return VanishingClass::ForcedZeroFullRank;
        }
        if d >= r as i64 {
            return VanishingClass::ForcedZeroHighDegree;
        }
    }
    VanishingClass::NotForced
}

/// Non-equivariant helper: `⟨V⟩_{0,d}` at level 0 as an integer.
pub fn plain_one_point(v: &SchurVector, d: usize, n: usize, r: usize) -> Result<BigInt> {
    to_integer(&one_point(v, d, &RootParams::new(n, r, 0)?)?)
}
