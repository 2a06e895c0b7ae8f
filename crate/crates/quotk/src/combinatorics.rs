//! Partitions, integer sequences, straightening, classical Littlewood–Richardson
//! coefficients, dimensions and binomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Weakly decreasing integer sequence of fixed length (negative parts allowed).
pub type IntSeq = Vec<i64>;

/// Partition: weakly decreasing nonnegative parts, trailing zeros trimmed.
///
/// The derived order is lexicographic on the parts, which puts `∅ < (1) < (1,1)
/// < (2) < (2,1) < …`; this is the canonical basis order used for tables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<i64>);

impl Partition {
    /// Validate and trim.
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.iter().any(|&p| p < 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParams(format!(
                "{parts:?} is not a partition"
            )));
        }
        Ok(Self::trimmed(parts))
    }

    fn trimmed(mut parts: Vec<i64>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `λ_i` with 1-based `i`, zero beyond the length.
    pub fn part(&self, i: usize) -> i64 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `n` (`n >= len`).
    pub fn padded(&self, n: usize) -> IntSeq {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    pub fn conjugate(&self) -> Partition {
        conjugate(self)
    }

    /// Diagram containment `self ⊆ other`.
    pub fn contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Whether the partition fits in the `rows × cols` box.
    pub fn fits_box(&self, rows: usize, cols: i64) -> bool {
        self.len() <= rows && self.part(1) <= cols
    }

    /// All partitions inside the `rows × cols` box, in canonical order.
    pub fn in_box(rows: usize, cols: i64) -> Vec<Partition> {
        fn rec(rows: usize, max: i64, prefix: &mut Vec<i64>, out: &mut Vec<Partition>) {
            out.push(Partition::trimmed(prefix.clone()));
            if prefix.len() == rows {
                return;
            }
            for p in 1..=max {
                prefix.push(p);
                rec(rows, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(rows, cols, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// All partitions of `n` with at most `rows` parts.
    pub fn of_size(n: i64, rows: usize) -> Vec<Partition> {
        Partition::in_box(rows, n)
            .into_iter()
            .filter(|p| p.size() == n)
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;
    /// Comma-separated parts; `"0"` or `""` is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_int_list(s)?;
        Partition::new(parts)
    }
}

impl From<Partition> for IntSeq {
    fn from(p: Partition) -> IntSeq {
        p.0
    }
}

/// Parse a comma-separated list of integers (whitespace tolerated, empty → []).
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("{x:?}: {e}")))
        })
        .collect()
}

/// Build a partition from literal parts, panicking on invalid input (test/const helper).
pub fn part(parts: &[i64]) -> Partition {
    Partition::new(parts.to_vec()).expect("valid partition")
}

/// Transpose of the Young diagram.
pub fn conjugate(lambda: &Partition) -> Partition {
    let l1 = lambda.part(1);
    Partition::trimmed(
        (1..=l1)
            .map(|c| lambda.0.iter().filter(|&&p| p >= c).count() as i64)
            .collect(),
    )
}

/// Result of straightening an integer sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Straightened {
    /// `-1`, `0` or `+1`.
    pub sign: i8,
    /// Weakly decreasing sequence of the same length; present iff `sign != 0`.
    pub parts: Option<IntSeq>,
}

/// Normalize `s_a` for an arbitrary integer index `a` of length `n`.
///
/// With `b_i = a_i + n - i`, a repeated `b` gives zero; otherwise sorting `b`
/// decreasingly yields the sign of the sorting permutation and the partition-shaped
/// index `λ_i = b_{σ(i)} - (n - i)`.
pub fn straighten(a: &[i64]) -> Straightened {
    let n = a.len();
    let mut b: Vec<i64> = a
        .iter()
        .enumerate()
        .map(|(i, &x)| x + (n - 1 - i) as i64)
        .collect();
    // insertion sort, descending, counting transpositions
    let mut swaps = 0usize;
    for i in 1..n {
        let mut j = i;
        while j > 0 && b[j - 1] < b[j] {
            b.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if b.windows(2).any(|w| w[0] == w[1]) {
        return Straightened {
            sign: 0,
            parts: None,
        };
    }
    let parts = b
        .iter()
        .enumerate()
        .map(|(i, &x)| x - (n - 1 - i) as i64)
        .collect();
    Straightened {
        sign: if swaps % 2 == 0 { 1 } else { -1 },
        parts: Some(parts),
    }
}

/// Classical Littlewood–Richardson coefficients `c^ν_{λμ}` restricted to `ν`
/// with at most `max_rows` rows.
///
/// Enumerates LR skew tableaux of shape `ν/λ` and content `μ` by placing the
/// letters `1, 2, …` as successive horizontal strips, checking the lattice
/// (Yamanouchi) condition of the reverse reading word row by row.
pub fn lr_classical(lambda: &Partition, mu: &Partition, max_rows: usize) -> BTreeMap<Partition, u64> {
    let mut out = BTreeMap::new();
    if lambda.len() > max_rows || mu.len() > max_rows {
        return out;
    }
    let shape = lambda.padded(max_rows);
    // counts[j][i]: number of letters i+1 in row j
    let counts = vec![vec![0i64; mu.len()]; max_rows];
    lr_place(0, mu.parts(), shape, counts, &mut out);
    out
}

fn lr_place(
    letter: usize,
    content: &[i64],
    shape: Vec<i64>,
    counts: Vec<Vec<i64>>,
    out: &mut BTreeMap<Partition, u64>,
) {
    if letter == content.len() {
        *out.entry(Partition::trimmed(shape)).or_insert(0) += 1;
        return;
    }
    let rows = shape.len();
    // cumulative counts of `letter` and `letter-1` in rows strictly above j
    let mut strip = vec![0i64; rows];
    #[allow(clippy::too_many_arguments)]
    fn distribute(
        j: usize,
        remaining: i64,
        letter: usize,
        content: &[i64],
        shape: &[i64],
        counts: &[Vec<i64>],
        strip: &mut Vec<i64>,
        above_cur: i64,
        above_prev: i64,
        out: &mut BTreeMap<Partition, u64>,
    ) {
        let rows = shape.len();
        if j == rows {
            if remaining == 0 {
                let mut new_shape = shape.to_vec();
                let mut new_counts = counts.to_vec();
                for r in 0..rows {
                    new_shape[r] += strip[r];
                    new_counts[r][letter] = strip[r];
                }
                lr_place(letter + 1, content, new_shape, new_counts, out);
            }
            return;
        }
        // horizontal strip: new row length must not exceed the old row above
        let cap_shape = if j == 0 { remaining } else { shape[j - 1] - shape[j] };
        // lattice: letters `letter` through row j may not exceed letters `letter-1` above row j
        let cap_lattice = if letter == 0 {
            remaining
        } else {
            above_prev - above_cur
        };
        let cap = remaining.min(cap_shape).min(cap_lattice).max(0);
        let prev_in_row = if letter == 0 { 0 } else { counts[j][letter - 1] };
        for a in (0..=cap).rev() {
            strip[j] = a;
            distribute(
                j + 1,
                remaining - a,
                letter,
                content,
                shape,
                counts,
                strip,
                above_cur + a,
                above_prev + prev_in_row,
                out,
            );
        }
        strip[j] = 0;
    }
    distribute(
        0,
        content[letter],
        letter,
        content,
        &shape,
        &counts,
        &mut strip,
        0,
        0,
        out,
    );
}

/// `s_λ(1^m)`: dimension of the irreducible `GL_m` representation (Weyl formula).
pub fn schur_dim(lambda: &Partition, m: usize) -> BigInt {
    if lambda.len() > m {
        return BigInt::zero();
    }
    let p = lambda.padded(m);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..m {
        for j in i + 1..m {
            num *= BigInt::from(p[i] - p[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    num / den
}

/// Generalized binomial `n choose k`: zero for `k < 0`, and for `k >= 0` the
/// polynomial `n(n-1)…(n-k+1)/k!` (so zero when `0 <= n < k`).
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

/// Monomial expansion of `s_λ(x_1, …, x_m)`: exponent vector → multiplicity,
/// by enumerating semistandard tableaux.
pub fn schur_monomials(lambda: &Partition, m: usize) -> BTreeMap<Vec<i64>, u64> {
    let mut out = BTreeMap::new();
    if lambda.len() > m {
        return out;
    }
    let rows = lambda.parts().to_vec();
    let mut filling: Vec<Vec<usize>> = rows.iter().map(|&l| vec![0; l as usize]).collect();
    fn rec(
        r: usize,
        c: usize,
        rows: &[i64],
        m: usize,
        filling: &mut Vec<Vec<usize>>,
        out: &mut BTreeMap<Vec<i64>, u64>,
    ) {
        if r == rows.len() {
            let mut e = vec![0i64; m];
            for row in filling.iter() {
                for &x in row {
                    e[x] += 1;
                }
            }
            *out.entry(e).or_insert(0) += 1;
            return;
        }
        if c == rows[r] as usize {
            rec(r + 1, 0, rows, m, filling, out);
            return;
        }
        let lo_row = if c > 0 { filling[r][c - 1] } else { 0 };
        let lo_col = if r > 0 { filling[r - 1][c] + 1 } else { 0 };
        for x in lo_row.max(lo_col)..m {
            filling[r][c] = x;
            rec(r, c + 1, rows, m, filling, out);
        }
    }
    rec(0, 0, &rows, m, &mut filling, &mut out);
    out
}
