//! The `GL_r` character ring in the Schur basis: characters of the Schubert
//! structure sheaves `O_λ`, quantized duals, the Euler representation `H`, and
//! classical and K-theoretic Littlewood–Richardson multiplication.
//!
//! Keys are `GL_r` highest weights in the character variables `x_1..x_r`
//! (weakly decreasing, negative parts allowed). `O_λ` has character
//! `G_λ(1 - x_1^{-1}, …, 1 - x_r^{-1})`, so its keys are all nonpositive.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binom, lr_classical, straighten, IntSeq, Partition};
use crate::error::{Error, Result};

/// Sparse integer combination of irreducible `GL_r` characters `s_μ`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SchurVector {
    rank: usize,
    terms: BTreeMap<IntSeq, BigInt>,
}

impl SchurVector {
    pub fn zero(rank: usize) -> Self {
        SchurVector {
            rank,
            terms: BTreeMap::new(),
        }
    }

    /// The trivial character `1 = s_{(0,…,0)}`.
    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], BigInt::one())
    }

    /// `c · s_key`; the key must be weakly decreasing.
    pub fn monomial(key: IntSeq, c: BigInt) -> Self {
        let mut v = Self::zero(key.len());
        v.add_term(key, c);
        v
    }

    /// `s_μ` for a partition with at most `rank` parts (the Schur functor of `S^∨`).
    pub fn schur(mu: &Partition, rank: usize) -> Result<Self> {
        if mu.len() > rank {
            return Err(Error::InvalidParams(format!(
                "{mu:?} has more than {rank} parts"
            )));
        }
        Ok(Self::monomial(mu.padded(rank), BigInt::one()))
    }

    /// `det(S) = s_{(-1)^r}`.
    pub fn det_s(rank: usize) -> Self {
        Self::monomial(vec![-1; rank], BigInt::one())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<IntSeq, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[i64]) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Add `c · s_key`, dropping zero coefficients.
    pub fn add_term(&mut self, key: IntSeq, c: BigInt) {
        debug_assert_eq!(key.len(), self.rank);
        debug_assert!(key.windows(2).all(|w| w[0] >= w[1]), "{key:?}");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &SchurVector) -> Result<SchurVector> {
        check_rank(self, o)?;
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &SchurVector) -> Result<SchurVector> {
        self.add(&o.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> SchurVector {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        SchurVector {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Multiply by `det^c`, i.e. shift every key by `c`.
    pub fn shift(&self, c: i64) -> SchurVector {
        SchurVector {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.iter().map(|x| x + c).collect(), v.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, o: &SchurVector) -> Result<SchurVector> {
        schur_multiply(self, o)
    }

    pub fn pow(&self, e: u32) -> Result<SchurVector> {
        let mut acc = Self::one(self.rank);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Whether every key has only nonpositive parts.
    pub fn all_keys_nonpositive(&self) -> bool {
        self.terms.keys().all(|k| k.first().map_or(true, |&x| x <= 0))
    }

    /// Re-express in the inverse variables `x^{-1}`: key `ν ↦ (-ν_r, …, -ν_1)`.
    pub fn dualized(&self) -> SchurVector {
        SchurVector {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (dual_key(k), v.clone()))
                .collect(),
        }
    }
}

/// `(ν_1, …, ν_r) ↦ (-ν_r, …, -ν_1)`.
pub fn dual_key(k: &[i64]) -> IntSeq {
    k.iter().rev().map(|x| -x).collect()
}

impl fmt::Debug for SchurVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SchurVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let key: Vec<String> = k.iter().map(i64::to_string).collect();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "s({})", key.join(","))?;
        }
        Ok(())
    }
}

fn check_rank(a: &SchurVector, b: &SchurVector) -> Result<()> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch(a.rank, b.rank));
    }
    Ok(())
}

type LrKey = (IntSeq, IntSeq, usize);

fn lr_cache() -> &'static DashMap<LrKey, Vec<(IntSeq, BigInt)>> {
    static CACHE: OnceLock<DashMap<LrKey, Vec<(IntSeq, BigInt)>>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// Memoized classical LR product of two partitions, padded to `rows`.
fn lr_padded(a: &[i64], b: &[i64], rows: usize) -> Vec<(IntSeq, BigInt)> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let key = (a.to_vec(), b.to_vec(), rows);
    if let Some(v) = lr_cache().get(&key) {
        return v.clone();
    }
    let pa = Partition::new(a.to_vec()).expect("partition key");
    let pb = Partition::new(b.to_vec()).expect("partition key");
    let v: Vec<(IntSeq, BigInt)> = lr_classical(&pa, &pb, rows)
        .into_iter()
        .map(|(nu, c)| (nu.padded(rows), BigInt::from(c)))
        .collect();
    lr_cache().insert(key, v.clone());
    v
}

/// Product of characters: keys are shifted to have last part zero (a power of
/// `det`), multiplied by the classical LR rule with `r` rows, then shifted back.
pub fn schur_multiply(a: &SchurVector, b: &SchurVector) -> Result<SchurVector> {
    check_rank(a, b)?;
    let r = a.rank;
    let mut out = SchurVector::zero(r);
    if r == 0 {
        let c: BigInt = a.coeff(&[]) * b.coeff(&[]);
        out.add_term(Vec::new(), c);
        return Ok(out);
    }
    let mut acc: BTreeMap<IntSeq, BigInt> = BTreeMap::new();
    for (ka, ca) in &a.terms {
        let sa = ka[r - 1];
        let na: IntSeq = ka.iter().map(|x| x - sa).collect();
        for (kb, cb) in &b.terms {
            let sb = kb[r - 1];
            let nb: IntSeq = kb.iter().map(|x| x - sb).collect();
            let c = ca * cb;
            for (nu, m) in lr_padded(&na, &nb, r) {
                let key: IntSeq = nu.iter().map(|x| x + sa + sb).collect();
                *acc.entry(key).or_default() += &c * m;
            }
        }
    }
    acc.retain(|_, c| !c.is_zero());
    out.terms = acc;
    Ok(out)
}

fn char_cache() -> &'static DashMap<(Partition, usize), SchurVector> {
    static CACHE: OnceLock<DashMap<(Partition, usize), SchurVector>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// Character of `O_λ`: `G_λ(1 - x^{-1})` expanded in Schur functions.
///
/// With `y = x^{-1}` the bialternant numerator has rows `(1-y)^{λ_i+r-i} y^{i-1}`;
/// each row is expanded binomially into exponent vectors, each alternant is
/// straightened into a Schur function of `y`, and keys are finally rewritten
/// in the `x` variables.
pub fn grothendieck_char(lambda: &Partition, r: usize) -> Result<SchurVector> {
    if lambda.len() > r {
        return Err(Error::InvalidParams(format!(
            "{lambda:?} has more than {r} parts"
        )));
    }
    let ck = (lambda.clone(), r);
    if let Some(v) = char_cache().get(&ck) {
        return Ok(v.clone());
    }
    let lam = lambda.padded(r);
    let a: Vec<i64> = (0..r).map(|i| lam[i] + (r - 1 - i) as i64).collect();
    // Vandermonde in u = 1 - y equals (-1)^{r(r-1)/2} times the Vandermonde in y.
    let base_sign: i64 = if (r * (r.saturating_sub(1)) / 2) % 2 == 0 { 1 } else { -1 };
    let mut acc: BTreeMap<IntSeq, BigInt> = BTreeMap::new();
    let mut k = vec![0i64; r];
    loop {
        // s-index in y: e_i - (r - i) with e_i = k_i + (i - 1), 1-based i
        let idx: IntSeq = (0..r)
            .map(|i| k[i] + 2 * i as i64 + 1 - r as i64)
            .collect();
        let st = straighten(&idx);
        if let Some(mu) = st.parts {
            let mut c = BigInt::from(base_sign * st.sign as i64);
            for i in 0..r {
                let b = binom(a[i], k[i]);
                c *= if k[i] % 2 == 0 { b } else { -b };
            }
            *acc.entry(dual_key(&mu)).or_default() += c;
        }
        // odometer over 0..=a_i
        let mut i = 0;
        loop {
            if i == r {
                let mut v = SchurVector::zero(r);
                acc.retain(|_, c| !c.is_zero());
                v.terms = acc;
                char_cache().insert(ck, v.clone());
                return Ok(v);
            }
            k[i] += 1;
            if k[i] <= a[i] {
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

fn gu_cache() -> &'static DashMap<(Partition, usize), Vec<(Partition, BigInt)>> {
    static CACHE: OnceLock<DashMap<(Partition, usize), Vec<(Partition, BigInt)>>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// `G_λ(u_1, …, u_r)` in the Schur basis of the `u` variables, from the
/// bialternant with rows `u^{λ_i+r-i}(1-u)^{i-1}`. Its lowest-degree part is
/// `s_λ(u)`, which makes the Grothendieck basis unitriangular.
pub fn grothendieck_in_u(lambda: &Partition, r: usize) -> Result<Vec<(Partition, BigInt)>> {
    if lambda.len() > r {
        return Err(Error::InvalidParams(format!(
            "{lambda:?} has more than {r} parts"
        )));
    }
    let ck = (lambda.clone(), r);
    if let Some(v) = gu_cache().get(&ck) {
        return Ok(v.clone());
    }
    let lam = lambda.padded(r);
    let mut acc: BTreeMap<Partition, BigInt> = BTreeMap::new();
    let mut k = vec![0i64; r];
    loop {
        let idx: IntSeq = (0..r).map(|i| lam[i] + k[i]).collect();
        let st = straighten(&idx);
        if let Some(mu) = st.parts {
            let mut c = BigInt::from(st.sign as i64);
            for (i, &ki) in k.iter().enumerate() {
                let b = binom(i as i64, ki);
                c *= if ki % 2 == 0 { b } else { -b };
            }
            *acc.entry(Partition::new(mu)?).or_default() += c;
        }
        let mut i = 0;
        loop {
            if i == r {
                let v: Vec<(Partition, BigInt)> =
                    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                gu_cache().insert(ck, v.clone());
                return Ok(v);
            }
            k[i] += 1;
            if k[i] <= i as i64 {
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

/// `g_{λμ}`: number of increasing tableaux of shape `μ/λ` whose entries in row
/// `i` lie in `1..=i-1`.
pub fn g_transition(lambda: &Partition, mu: &Partition) -> BigInt {
    if !lambda.contained_in(mu) {
        return BigInt::zero();
    }
    let rows = mu.len();
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (lambda.part(i + 1) as usize..mu.part(i + 1) as usize).map(move |j| (i, j)))
        .collect();
    let mut grid: Vec<Vec<i64>> = (0..rows).map(|i| vec![0; mu.part(i + 1) as usize]).collect();
    fn rec(
        n: usize,
        cells: &[(usize, usize)],
        lambda: &Partition,
        grid: &mut Vec<Vec<i64>>,
    ) -> u64 {
        if n == cells.len() {
            return 1;
        }
        let (i, j) = cells[n];
        let mut lo = 1;
        if j as i64 > lambda.part(i + 1) {
            lo = lo.max(grid[i][j - 1] + 1);
        }
        if i > 0 && j as i64 >= lambda.part(i) {
            lo = lo.max(grid[i - 1][j] + 1);
        }
        let hi = i as i64; // row i (0-based) allows entries up to its 1-based index minus one
        let mut total = 0;
        for v in lo..=hi {
            grid[i][j] = v;
            total += rec(n + 1, cells, lambda, grid);
        }
        grid[i][j] = 0;
        total
    }
    BigInt::from(rec(0, &cells, lambda, &mut grid))
}

/// K-theoretic LR coefficients: `O_λ · O_μ = Σ_ν c^ν_{λμ} O_ν` over `ν` with at
/// most `r` parts.
///
/// The product `G_λ G_μ` is formed in the Schur basis of `u = 1 - x^{-1}` and
/// Grothendieck classes are peeled off from the lowest degree upwards, using
/// `G_ν = s_ν + (higher degree)`.
pub fn k_lr(lambda: &Partition, mu: &Partition, r: usize) -> Result<BTreeMap<Partition, BigInt>> {
    let ga = grothendieck_in_u(lambda, r)?;
    let gb = grothendieck_in_u(mu, r)?;
    let mut residual: BTreeMap<Partition, BigInt> = BTreeMap::new();
    for (pa, ca) in &ga {
        for (pb, cb) in &gb {
            for (nu, m) in lr_padded(&pa.padded(r), &pb.padded(r), r) {
                *residual.entry(Partition::new(nu)?).or_default() += ca * cb * m;
            }
        }
    }
    residual.retain(|_, c| !c.is_zero());
    let max_size = residual.keys().map(Partition::size).max().unwrap_or(0);
    let mut out = BTreeMap::new();
    while let Some(nu) = residual
        .keys()
        .min_by_key(|p| (p.size(), (*p).clone()))
        .cloned()
    {
        if nu.size() > max_size {
            return Err(Error::InternalInconsistency(format!(
                "K-theoretic LR peeling of {lambda:?}*{mu:?} did not terminate"
            )));
        }
        let c = residual[&nu].clone();
        for (p, g) in grothendieck_in_u(&nu, r)? {
            let e = residual.entry(p.clone()).or_default();
            *e -= &c * g;
            if e.is_zero() {
                residual.remove(&p);
            }
        }
        out.insert(nu, c);
    }
    Ok(out)
}

/// `λ* = (k - λ_r, …, k - λ_1)`, the complement in the `r × k` box.
pub fn box_complement(lambda: &Partition, n: usize, r: usize) -> Result<Partition> {
    let k = (n - r) as i64;
    if !lambda.fits_box(r, k) {
        return Err(Error::InvalidParams(format!(
            "{lambda:?} is not in the {r}x{k} box"
        )));
    }
    let p = lambda.padded(r);
    Partition::new(p.iter().rev().map(|x| k - x).collect())
}

/// Character of the quantized dual `O*_λ = O_{λ*} · det(S)`.
pub fn dual_class(lambda: &Partition, n: usize, r: usize) -> Result<SchurVector> {
    let star = box_complement(lambda, n, r)?;
    Ok(grothendieck_char(&star, r)?.shift(-1))
}

/// Euler representation `H = Σ_{α ∈ P_{r,N-r}} O_α · O*_α`.
pub fn euler_representation(n: usize, r: usize) -> Result<SchurVector> {
    if r >= n {
        return Err(Error::InvalidParams("need r < N".into()));
    }
    let mut h = SchurVector::zero(r);
    for alpha in Partition::in_box(r, (n - r) as i64) {
        let term = schur_multiply(&grothendieck_char(&alpha, r)?, &dual_class(&alpha, n, r)?)?;
        h = h.add(&term)?;
    }
    Ok(h)
}
