//! The quantum K-ring of `Gr(r, N)` in the Schubert basis `{O_λ}`, `λ` in the
//! `r × (N-r)` box.
//!
//! Production route: `O_λ • O_μ = Σ_ν c^ν_{λμ} κ(O_ν)`, with `c^ν_{λμ}` the
//! K-theoretic Littlewood–Richardson coefficients and
//! `κ(V) = Σ_α ⟨⟨V · O*_α⟩⟩ O_α` the quantum reduction map. The quantized
//! pairing `F_{λμ} = ⟨⟨O_λ · O_μ⟩⟩` and its inverse give an independent route
//! `F^ν_{λμ} = Σ_α F^{να} ⟨⟨O_α · O_λ · O_μ⟩⟩`. Closed forms for rank 2 are
//! provided as separate reference implementations.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{lr_classical, Partition};
use crate::error::{Error, Result};
use crate::exact_poly::{qpoly_matrix_inverse, QPoly, TailSeries};
use crate::exec::{self, Parallelism};
use crate::grothendieck::{dual_class, grothendieck_char, k_lr, schur_multiply, SchurVector};
use crate::quot_invariants::{Invariants, Route};
use crate::schur_eval::RootParams;

/// Exact polynomial in `q` (ascending coefficients, no trailing zeros).
pub type QCoeffs = Vec<BigInt>;

fn trim(mut p: QCoeffs) -> QCoeffs {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_add_into(acc: &mut QCoeffs, p: &[BigInt], c: &BigInt, shift: usize) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, BigInt::zero());
    }
    for (e, a) in p.iter().enumerate() {
        acc[e + shift] += a * c;
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> QCoeffs {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Sparse exact element `Σ_ν p_ν(q) O_ν`.
pub type ExactElement = BTreeMap<Partition, QCoeffs>;

fn add_scaled(acc: &mut ExactElement, x: &ExactElement, c: &BigInt, shift: usize) {
    for (nu, p) in x {
        let e = acc.entry(nu.clone()).or_default();
        poly_add_into(e, p, c, shift);
        let t = trim(std::mem::take(e));
        if t.is_empty() {
            acc.remove(nu);
        } else {
            *e = t;
        }
    }
}

/// An element of `QK(Gr(r, N))`: a map from box partitions to truncated
/// `q`-polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QKElement {
    pub n: usize,
    pub r: usize,
    pub q_max: usize,
    pub coeffs: BTreeMap<Partition, QPoly>,
}

impl QKElement {
    pub fn zero(n: usize, r: usize, q_max: usize) -> Self {
        QKElement {
            n,
            r,
            q_max,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis element `O_λ`.
    pub fn basis(lambda: &Partition, n: usize, r: usize, q_max: usize) -> Self {
        let mut e = Self::zero(n, r, q_max);
        e.coeffs.insert(lambda.clone(), QPoly::one(q_max));
        e
    }

    /// Truncate an exact element; any nonzero coefficient at `q^{q_max}` or
    /// beyond is a [`Error::QDegreeOverflow`], and classes outside the box are
    /// rejected.
    pub fn from_exact(x: &ExactElement, n: usize, r: usize, q_max: usize) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (nu, p) in x {
            if !nu.fits_box(r, (n - r) as i64) {
                return Err(Error::InvalidParams(format!("O_{nu} is not a basis class of Gr({r},{n})")));
            }
            if p.len() > q_max {
                return Err(Error::QDegreeOverflow(format!(
                    "coefficient of O_{nu} has q-degree {} >= q_max = {q_max}",
                    p.len() - 1
                )));
            }
            let qp = QPoly::from_coeffs(p, q_max);
            if !qp.is_zero() {
                coeffs.insert(nu.clone(), qp);
            }
        }
        Ok(QKElement { n, r, q_max, coeffs })
    }

    /// Exact coefficients (trailing zeros removed).
    pub fn exact(&self) -> ExactElement {
        self.coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v.trimmed()))
            .filter(|(_, v)| !v.is_empty())
            .collect()
    }

    pub fn coeff(&self, nu: &Partition) -> QPoly {
        self.coeffs
            .get(nu)
            .cloned()
            .unwrap_or_else(|| QPoly::zero(self.q_max))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(QPoly::is_zero)
    }

    /// Highest `q`-power present.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.values().filter_map(QPoly::degree).max()
    }

    pub fn add(&self, o: &QKElement) -> QKElement {
        let mut x = self.exact();
        add_scaled(&mut x, &o.exact(), &BigInt::one(), 0);
        let q_max = self.q_max.min(o.q_max);
        let coeffs = x
            .into_iter()
            .map(|(k, p)| (k, QPoly::from_coeffs(&p, q_max)))
            .collect();
        QKElement {
            n: self.n,
            r: self.r,
            q_max,
            coeffs,
        }
    }
}

/// `c q^e O_ν` with `O_∅` shown as `1`.
impl fmt::Display for QKElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, nu, c) in self
            .coeffs
            .iter()
            .flat_map(|(nu, p)| {
                p.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(move |(e, c)| (e, nu, c))
            })
            .collect::<std::collections::BTreeSet<_>>()
        {
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut parts = Vec::new();
            if !mag.is_one() {
                parts.push(mag.to_string());
            }
            match e {
                0 => {}
                1 => parts.push("q".into()),
                _ => parts.push(format!("q^{e}")),
            }
            if !nu.parts().is_empty() {
                parts.push(format!("O_{nu}"));
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join(" "))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A square matrix of exact `q`-series indexed by the Schubert basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMatrix {
    pub basis: Vec<Partition>,
    pub entries: Vec<Vec<TailSeries>>,
}

impl PairingMatrix {
    /// Entry indexed by partitions.
    pub fn get(&self, a: &Partition, b: &Partition) -> Option<&TailSeries> {
        let i = self.basis.iter().position(|x| x == a)?;
        let j = self.basis.iter().position(|x| x == b)?;
        Some(&self.entries[i][j])
    }

    /// The integer polynomial matrix `(1 - q) F`.
    pub fn numerators(&self) -> Vec<Vec<QCoeffs>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|s| s.times_one_minus_q()).collect())
            .collect()
    }

    /// Polynomial entries, if every entry is a polynomial.
    pub fn polynomials(&self) -> Option<Vec<Vec<QCoeffs>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(TailSeries::as_polynomial).collect())
            .collect()
    }
}

/// Full multiplication table over unordered pairs `λ ≤ μ` (basis order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QkTable {
    pub n: usize,
    pub r: usize,
    pub basis: Vec<Partition>,
    pub entries: BTreeMap<(Partition, Partition), QKElement>,
}

/// Quantum K-ring engine for one Grassmannian, with concurrent memo tables.
pub struct QkRing {
    n: usize,
    r: usize,
    q_max: usize,
    inv: Invariants,
    basis: Vec<Partition>,
    kappa_cache: DashMap<Partition, ExactElement>,
    product_cache: DashMap<(Partition, Partition), ExactElement>,
    series_cache: DashMap<Partition, TailSeries>,
    pair_cache: DashMap<(Partition, Partition), TailSeries>,
    pairing: OnceLock<PairingMatrix>,
    inverse: OnceLock<PairingMatrix>,
}

impl QkRing {
    /// Engine for `Gr(r, N)` with the default truncation `q_max = r + 1`.
    pub fn new(n: usize, r: usize) -> Result<Self> {
        Self::with_q_max(n, r, r + 1)
    }

    pub fn with_q_max(n: usize, r: usize, q_max: usize) -> Result<Self> {
        if r == 0 || r >= n {
            return Err(Error::InvalidParams(format!(
                "quantum K-ring needs 0 < r < N, got r = {r}, N = {n}"
            )));
        }
        Ok(QkRing {
            n,
            r,
            q_max,
            inv: Invariants::new(RootParams::new(n, r, 0)?)?,
            basis: Partition::in_box(r, (n - r) as i64),
            kappa_cache: DashMap::new(),
            product_cache: DashMap::new(),
            series_cache: DashMap::new(),
            pair_cache: DashMap::new(),
            pairing: OnceLock::new(),
            inverse: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> i64 {
        (self.n - self.r) as i64
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    /// The Schubert basis in its canonical (lexicographic) order.
    pub fn basis(&self) -> &[Partition] {
        &self.basis
    }

    pub fn invariants(&self) -> &Invariants {
        &self.inv
    }

    fn check_in_box(&self, lambda: &Partition) -> Result<()> {
        if !lambda.fits_box(self.r, self.k()) {
            return Err(Error::InvalidParams(format!(
                "{lambda:?} is not in the {}x{} box",
                self.r,
                self.k()
            )));
        }
        Ok(())
    }

    /// `⟨⟨V · O*_α⟩⟩` for every basis `α`, as exact series (nonzero entries only).
    pub fn kappa_exact(&self, v: &SchurVector) -> Result<BTreeMap<Partition, TailSeries>> {
        let mut out = BTreeMap::new();
        for alpha in &self.basis {
            let prod = schur_multiply(v, &dual_class(alpha, self.n, self.r)?)?;
            let s = self.inv.closed_correlator(&prod)?;
            if s != TailSeries::zero() {
                out.insert(alpha.clone(), s);
            }
        }
        Ok(out)
    }

    /// `κ(V)` truncated at `q_max`; a nonzero coefficient at `q^{q_max}` or
    /// beyond (including an infinite tail) is a [`Error::QDegreeOverflow`].
    pub fn kappa(&self, v: &SchurVector) -> Result<QKElement> {
        let mut x = ExactElement::new();
        for (alpha, s) in self.kappa_exact(v)? {
            let p = s.as_polynomial().ok_or_else(|| {
                Error::QDegreeOverflow(format!(
                    "coefficient of O_{alpha} has an infinite q-tail"
                ))
            })?;
            x.insert(alpha, p);
        }
        QKElement::from_exact(&x, self.n, self.r, self.q_max)
    }

    /// `κ(O_ν)` for any partition `ν` with at most `r` parts, exactly.
    pub fn kappa_of_class(&self, nu: &Partition) -> Result<ExactElement> {
        if let Some(v) = self.kappa_cache.get(nu) {
            return Ok(v.clone());
        }
        let ch = grothendieck_char(nu, self.r)?;
        let mut x = ExactElement::new();
        for (alpha, s) in self.kappa_exact(&ch)? {
            let p = s.as_polynomial().ok_or_else(|| {
                Error::InternalInconsistency(format!(
                    "<<O_{nu} O*_{alpha}>> is not a polynomial in q"
                ))
            })?;
            x.insert(alpha, p);
        }
        self.kappa_cache.insert(nu.clone(), x.clone());
        Ok(x)
    }

    /// `O_λ • O_μ` exactly, via K-theoretic LR and `κ`.
    pub fn quantum_product_exact(&self, lambda: &Partition, mu: &Partition) -> Result<ExactElement> {
        self.check_in_box(lambda)?;
        self.check_in_box(mu)?;
        let key = if lambda <= mu {
            (lambda.clone(), mu.clone())
        } else {
            (mu.clone(), lambda.clone())
        };
        if let Some(v) = self.product_cache.get(&key) {
            return Ok(v.clone());
        }
        let mut acc = ExactElement::new();
        for (nu, c) in k_lr(lambda, mu, self.r)? {
            add_scaled(&mut acc, &self.kappa_of_class(&nu)?, &c, 0);
        }
        self.product_cache.insert(key, acc.clone());
        Ok(acc)
    }

    /// `O_λ • O_μ` truncated at `q_max`.
    pub fn quantum_product(&self, lambda: &Partition, mu: &Partition) -> Result<QKElement> {
        QKElement::from_exact(
            &self.quantum_product_exact(lambda, mu)?,
            self.n,
            self.r,
            self.q_max,
        )
    }

    /// Bilinear extension of `•` to arbitrary elements.
    pub fn multiply(&self, a: &QKElement, b: &QKElement) -> Result<QKElement> {
        let mut acc = ExactElement::new();
        for (la, pa) in a.exact() {
            for (lb, pb) in b.exact() {
                let coef = poly_mul(&pa, &pb);
                let prod = self.quantum_product_exact(&la, &lb)?;
                for (e, c) in coef.iter().enumerate() {
                    if !c.is_zero() {
                        add_scaled(&mut acc, &prod, c, e);
                    }
                }
            }
        }
        QKElement::from_exact(&acc, self.n, self.r, self.q_max)
    }

    /// `⟨⟨O_γ⟩⟩` for any partition with at most `r` parts (memoized).
    pub fn class_series(&self, gamma: &Partition) -> Result<TailSeries> {
        if let Some(s) = self.series_cache.get(gamma) {
            return Ok(s.clone());
        }
        let s = self.inv.grothendieck_series(gamma, Route::GeneralizedSchur)?;
        self.series_cache.insert(gamma.clone(), s.clone());
        Ok(s)
    }

    /// `⟨⟨O_a · O_b⟩⟩` for any partitions with at most `r` parts.
    pub fn pair_series(&self, a: &Partition, b: &Partition) -> Result<TailSeries> {
        let key = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        if let Some(s) = self.pair_cache.get(&key) {
            return Ok(s.clone());
        }
        let mut acc = TailSeries::zero();
        for (gamma, c) in k_lr(a, b, self.r)? {
            acc = acc.add(&self.class_series(&gamma)?.scale(&c));
        }
        self.pair_cache.insert(key, acc.clone());
        Ok(acc)
    }

    /// The quantized pairing `F_{λμ} = ⟨⟨O_λ · O_μ⟩⟩` on the basis.
    pub fn quantized_pairing(&self) -> Result<&PairingMatrix> {
        if let Some(p) = self.pairing.get() {
            return Ok(p);
        }
        let mut entries = Vec::with_capacity(self.basis.len());
        for a in &self.basis {
            let row = self
                .basis
                .iter()
                .map(|b| self.pair_series(a, b))
                .collect::<Result<Vec<_>>>()?;
            entries.push(row);
        }
        let _ = self.pairing.set(PairingMatrix {
            basis: self.basis.clone(),
            entries,
        });
        Ok(self.pairing.get().expect("just set"))
    }

    /// Exact inverse `F^{λμ}` of the quantized pairing.
    ///
    /// With `P = (1-q) F` (an integer polynomial matrix), `F^{-1} = (1-q) P^{-1}`.
    /// The power series `P^{-1}` is computed to increasing order until
    /// `(1-q) P^{-1}` truncates to a polynomial matrix `G` with `P G = (1-q) I`
    /// exactly.
    pub fn pairing_inverse(&self) -> Result<&PairingMatrix> {
        if let Some(p) = self.inverse.get() {
            return Ok(p);
        }
        let f = self.quantized_pairing()?;
        let p = f.numerators();
        let dim = p.len();
        let mut order = self.q_max.max(2);
        loop {
            let m: Vec<Vec<QPoly>> = p
                .iter()
                .map(|row| row.iter().map(|x| QPoly::from_coeffs(x, order)).collect())
                .collect();
            let pinv = qpoly_matrix_inverse(&m)?;
            let g: Vec<Vec<QCoeffs>> = pinv
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            let c = x.coeffs();
                            trim(
                                (0..=order)
                                    .map(|e| {
                                        c[e].clone()
                                            - if e > 0 { c[e - 1].clone() } else { BigInt::zero() }
                                    })
                                    .collect(),
                            )
                        })
                        .collect()
                })
                .collect();
            if self.is_exact_inverse(&p, &g) {
                let entries = g
                    .iter()
                    .map(|row| row.iter().map(|x| TailSeries::polynomial(x)).collect())
                    .collect();
                let _ = self.inverse.set(PairingMatrix {
                    basis: self.basis.clone(),
                    entries,
                });
                return Ok(self.inverse.get().expect("just set"));
            }
            if order > 8 * (self.q_max + dim) {
                return Err(Error::SingularPairing(
                    "inverse pairing is not a polynomial matrix".into(),
                ));
            }
            order *= 2;
        }
    }

    fn is_exact_inverse(&self, p: &[Vec<QCoeffs>], g: &[Vec<QCoeffs>]) -> bool {
        let dim = p.len();
        let one_minus_q = vec![BigInt::one(), -BigInt::one()];
        (0..dim).all(|i| {
            (0..dim).all(|j| {
                let mut acc = QCoeffs::new();
                for k in 0..dim {
                    poly_add_into(&mut acc, &poly_mul(&p[i][k], &g[k][j]), &BigInt::one(), 0);
                }
                let want = if i == j { one_minus_q.clone() } else { Vec::new() };
                trim(acc) == want
            })
        })
    }

    /// `⟨⟨O_α · O_λ · O_μ⟩⟩` (same-point triple product).
    pub fn triple_series(&self, alpha: &Partition, lambda: &Partition, mu: &Partition) -> Result<TailSeries> {
        let mut acc = TailSeries::zero();
        for (beta, c) in k_lr(lambda, mu, self.r)? {
            acc = acc.add(&self.pair_series(alpha, &beta)?.scale(&c));
        }
        Ok(acc)
    }

    /// `O_λ • O_μ` through `F^ν_{λμ} = Σ_α F^{να} ⟨⟨O_α O_λ O_μ⟩⟩`.
    pub fn structure_constants_via_pairing(&self, lambda: &Partition, mu: &Partition) -> Result<QKElement> {
        self.check_in_box(lambda)?;
        self.check_in_box(mu)?;
        let inv = self.pairing_inverse()?;
        let triples: Vec<TailSeries> = self
            .basis
            .iter()
            .map(|a| self.triple_series(a, lambda, mu))
            .collect::<Result<_>>()?;
        let mut x = ExactElement::new();
        for (i, nu) in self.basis.iter().enumerate() {
            let mut acc = TailSeries::zero();
            for (j, t) in triples.iter().enumerate() {
                let g = inv.entries[i][j].as_polynomial().expect("polynomial inverse");
                acc = acc.add(&t.mul_poly(&g));
            }
            let p = acc.as_polynomial().ok_or_else(|| {
                Error::InternalInconsistency(format!(
                    "structure constant of O_{nu} in O_{lambda} * O_{mu} has an infinite tail"
                ))
            })?;
            if !p.is_empty() {
                x.insert(nu.clone(), p);
            }
        }
        QKElement::from_exact(&x, self.n, self.r, self.q_max)
    }

    /// Associated-graded piece of `O_λ • O_μ`: terms `q^d O_ν` with
    /// `|ν| + N d = |λ| + |μ|`.
    pub fn quantum_cohomology_product(&self, lambda: &Partition, mu: &Partition) -> Result<QKElement> {
        let full = self.quantum_product(lambda, mu)?;
        Ok(graded_part(&full, lambda.size() + mu.size()))
    }

    /// All products `O_λ • O_μ`, `λ ≤ μ`, evaluated with the given parallelism.
    pub fn table(&self, mode: Parallelism) -> Result<QkTable> {
        let pairs: Vec<(Partition, Partition)> = self
            .basis
            .iter()
            .enumerate()
            .flat_map(|(i, a)| self.basis[i..].iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let values = exec::try_map(mode, &pairs, |(a, b)| self.quantum_product(a, b))?;
        Ok(QkTable {
            n: self.n,
            r: self.r,
            basis: self.basis.clone(),
            entries: pairs.into_iter().zip(values).collect(),
        })
    }
}

/// Keep the terms `q^d O_ν` of `x` with `|ν| + N d = degree`.
pub fn graded_part(x: &QKElement, degree: i64) -> QKElement {
    let mut out = QKElement::zero(x.n, x.r, x.q_max);
    for (nu, p) in &x.coeffs {
        let coeffs: Vec<BigInt> = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(d, c)| {
                if nu.size() + (x.n * d) as i64 == degree {
                    c.clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        let qp = QPoly::from_coeffs(&coeffs, x.q_max);
        if !qp.is_zero() {
            out.coeffs.insert(nu.clone(), qp);
        }
    }
    out
}

/// Classical cohomological LR product `σ_λ σ_μ` truncated to the box.
pub fn classical_cohomology_product(lambda: &Partition, mu: &Partition, n: usize, r: usize) -> BTreeMap<Partition, u64> {
    lr_classical(lambda, mu, r)
        .into_iter()
        .filter(|(nu, _)| nu.fits_box(r, (n - r) as i64))
        .collect()
}

// ---------------------------------------------------------------------------
// Rank-2 closed forms
// ---------------------------------------------------------------------------

fn rank2_box(nu: (i64, i64), k: i64) -> Option<Partition> {
    (nu.0 >= nu.1 && nu.1 >= 0 && nu.0 <= k).then(|| Partition::new(vec![nu.0, nu.1]).expect("partition"))
}

fn pair_of(p: &Partition) -> (i64, i64) {
    (p.part(1), p.part(2))
}

fn add_term(x: &mut ExactElement, nu: (i64, i64), k: i64, c: i64, e: usize) {
    if let Some(p) = rank2_box(nu, k) {
        let mut unit = vec![BigInt::zero(); e + 1];
        unit[e] = BigInt::one();
        add_scaled(x, &BTreeMap::from([(p, unit)]), &BigInt::from(c), 0);
    }
}

/// `G_{α,β} q^e` with `m = min(β_1-β_2, α_1-α_2)` correction terms; the flag
/// `graded` drops the negative corrections (cohomological version).
fn rank2_g(x: &mut ExactElement, a: (i64, i64), b: (i64, i64), k: i64, e: usize, graded: bool) {
    let s = (a.0 + b.0, a.1 + b.1);
    add_term(x, s, k, 1, e);
    let m = (b.0 - b.1).min(a.0 - a.1);
    for i in 1..=m {
        add_term(x, (s.0 - i, s.1 + i), k, 1, e);
        if !graded {
            add_term(x, (s.0 - i + 1, s.1 + i), k, -1, e);
        }
    }
}

fn rank2_product_impl(lambda: &Partition, mu: &Partition, n: usize, graded: bool) -> Result<QKElement> {
    let k = n as i64 - 2;
    for p in [lambda, mu] {
        if !p.fits_box(2, k) {
            return Err(Error::InvalidParams(format!("{p:?} is not in the 2x{k} box")));
        }
    }
    let (mut l, mut m) = (pair_of(lambda), pair_of(mu));
    if m.0 - m.1 > l.0 - l.1 {
        std::mem::swap(&mut l, &mut m);
    }
    let tilde = (l.1 - 1, l.0 - k - 1);
    let shifted = (l.0 - n as i64, l.1 - n as i64);
    let mut x = ExactElement::new();
    rank2_g(&mut x, l, m, k, 0, graded);
    rank2_g(&mut x, tilde, m, k, 1, graded);
    rank2_g(&mut x, shifted, m, k, 2, graded);
    let mut out = QKElement::from_exact(&x, n, 2, 3)?;
    if graded {
        out = graded_part(&out, lambda.size() + mu.size());
    }
    Ok(out)
}

/// Closed-form quantum K product on `Gr(2, N)`:
/// `O_λ • O_μ = G_{λ,μ} + G_{λ̃,μ} q + G_{λ-(N,N),μ} q²`, `λ̃ = (λ_2-1, λ_1-k-1)`.
pub fn rank2_quantum_product(lambda: &Partition, mu: &Partition, n: usize) -> Result<QKElement> {
    rank2_product_impl(lambda, mu, n, false)
}

/// Closed-form quantum cohomology product on `Gr(2, N)` (corrections dropped,
/// restricted to the graded piece).
pub fn rank2_quantum_cohomology_product(lambda: &Partition, mu: &Partition, n: usize) -> Result<QKElement> {
    rank2_product_impl(lambda, mu, n, true)
}

/// Closed-form `⟨⟨O_λ⟩⟩` on `Gr(2, N)` for `λ_1 ≤ 3k + 1`.
pub fn rank2_class_series(lambda: &Partition, n: usize) -> Result<TailSeries> {
    let k = n as i64 - 2;
    let (l1, l2) = pair_of(lambda);
    let n_i = n as i64;
    let one = BigInt::one();
    let s = if l1 <= k {
        TailSeries::with_tail(&[], &one, 0)
    } else if l1 <= 2 * k + 2 && l2 >= n_i {
        TailSeries::with_tail(&[], &one, 2)
    } else if l1 <= 2 * k + 1 {
        TailSeries::with_tail(&[], &one, 1)
    } else if l1 == 2 * k + 2 {
        TailSeries::with_tail(&[BigInt::zero(), BigInt::from(l2 - n_i)], &one, 1)
    } else if l1 <= 3 * k + 1 && l2 < 2 * n_i {
        TailSeries::with_tail(&[], &one, 3)
    } else if l1 <= 3 * k + 1 {
        TailSeries::with_tail(&[], &one, 4)
    } else {
        return Err(Error::InvalidParams(format!(
            "no closed form for {lambda:?} beyond the 2x{} box",
            3 * k + 1
        )));
    };
    Ok(s)
}

/// Closed-form `κ(O_ν)` on `Gr(2, N)` for `ν` in the `2 × 2k` box.
pub fn rank2_kappa(nu: &Partition, n: usize) -> Result<QKElement> {
    let k = n as i64 - 2;
    if !nu.fits_box(2, 2 * k) {
        return Err(Error::InvalidParams(format!("{nu:?} is not in the 2x{} box", 2 * k)));
    }
    let (a, b) = pair_of(nu);
    let mut x = ExactElement::new();
    add_term(&mut x, (a, b), k, 1, 0);
    add_term(&mut x, (a - n as i64, b - n as i64), k, 1, 2);
    add_term(&mut x, (b - 1, a - k - 1), k, 1, 1);
    for i in b..=(a - k - 1) {
        add_term(&mut x, (a - k - 1, i), k, 1, 1);
    }
    for i in b..=(a - k - 2) {
        add_term(&mut x, (a - k - 2, i), k, -1, 1);
    }
    QKElement::from_exact(&x, n, 2, 3)
}

/// Closed-form quantized pairing entry on `Gr(2, N)`:
/// `F_{λμ} = ⟨⟨O_{λ+μ}⟩⟩ + [λ_1 + μ_2 ≤ k < λ_1 + μ_1]` after ordering so that
/// `μ_1 - μ_2 ≤ λ_1 - λ_2`.
pub fn rank2_pairing(lambda: &Partition, mu: &Partition, n: usize) -> Result<TailSeries> {
    let k = n as i64 - 2;
    let (mut l, mut m) = (pair_of(lambda), pair_of(mu));
    if m.0 - m.1 > l.0 - l.1 {
        std::mem::swap(&mut l, &mut m);
    }
    let sum = Partition::new(vec![l.0 + m.0, l.1 + m.1])?;
    let mut s = rank2_class_series(&sum, n)?;
    if l.0 + m.1 <= k && k < l.0 + m.0 {
        s = s.add(&TailSeries::polynomial(&[BigInt::one()]));
    }
    Ok(s)
}

/// Closed-form inverse pairing entry `F^{λμ}` on `Gr(2, N)`, read with the
/// conditions on the column index: `1` at `μ = λ*`, `-1` at `μ = λ* + (1,0)`
/// or `λ = μ* + (1,0)`, `1` at `μ = λ* + (1,1)` with `λ_1 ≠ λ_2`, `q` when
/// `λ + μ = (k, 0)` with `1 ≤ λ_1 ≤ k-1`, and `-q` when `λ + μ = (k-1, 0)`.
pub fn rank2_pairing_inverse(lambda: &Partition, mu: &Partition, n: usize) -> Result<QCoeffs> {
    let k = n as i64 - 2;
    let (l, m) = (pair_of(lambda), pair_of(mu));
    let star = |p: (i64, i64)| (k - p.1, k - p.0);
    let ls = star(l);
    let ms = star(m);
    let mut c0 = 0i64;
    let mut c1 = 0i64;
    if m == ls {
        c0 += 1;
    }
    if m == (ls.0 + 1, ls.1) {
        c0 -= 1;
    }
    if l == (ms.0 + 1, ms.1) {
        c0 -= 1;
    }
    if m == (ls.0 + 1, ls.1 + 1) && l.0 != l.1 {
        c0 += 1;
    }
    let s = (l.0 + m.0, l.1 + m.1);
    if s == (k, 0) && (1..=k - 1).contains(&l.0) {
        c1 += 1;
    }
    if s == (k - 1, 0) {
        c1 -= 1;
    }
    Ok(trim(vec![BigInt::from(c0), BigInt::from(c1)]))
}
