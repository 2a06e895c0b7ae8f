//! Partitions, straightening, classical Littlewood–Richardson coefficients and
//! dimension formulas, checked against semistandard-tableau brute force.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use quotk::combinatorics::{
    binom, conjugate, lr_classical, parse_int_list, part, schur_dim, schur_monomials, straighten,
    Partition,
};

/// Monomial expansion of `s_λ(x_1..x_m)` by enumerating semistandard tableaux.
fn ssyt_expansion(lambda: &[i64], m: usize) -> BTreeMap<Vec<i64>, i64> {
    let cells: Vec<(usize, usize)> = lambda
        .iter()
        .enumerate()
        .flat_map(|(i, &len)| (0..len as usize).map(move |j| (i, j)))
        .collect();
    let mut grid: Vec<Vec<usize>> = lambda.iter().map(|&l| vec![0; l as usize]).collect();
    let mut out = BTreeMap::new();
    fn fill(
        k: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        m: usize,
        out: &mut BTreeMap<Vec<i64>, i64>,
    ) {
        if k == cells.len() {
            let mut e = vec![0i64; m];
            for row in grid.iter() {
                for &x in row {
                    e[x] += 1;
                }
            }
            *out.entry(e).or_insert(0) += 1;
            return;
        }
        let (i, j) = cells[k];
        let lo_row = if j > 0 { grid[i][j - 1] } else { 0 };
        let lo_col = if i > 0 { grid[i - 1][j] + 1 } else { 0 };
        for v in lo_row.max(lo_col)..m {
            grid[i][j] = v;
            fill(k + 1, cells, grid, m, out);
        }
    }
    if lambda.len() <= m {
        fill(0, &cells, &mut grid, m, &mut out);
    }
    out
}

fn poly_mul(a: &BTreeMap<Vec<i64>, i64>, b: &BTreeMap<Vec<i64>, i64>) -> BTreeMap<Vec<i64>, i64> {
    let mut out = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Expand a symmetric polynomial in the Schur basis by peeling the
/// lexicographically largest monomial.
fn schur_decompose(mut p: BTreeMap<Vec<i64>, i64>, m: usize) -> BTreeMap<Partition, i64> {
    let mut out = BTreeMap::new();
    while let Some((e, &c)) = p.iter().next_back() {
        let lam = Partition::new(e.clone()).expect("leading exponent is a partition");
        for (mono, k) in ssyt_expansion(lam.parts(), m) {
            let entry = p.entry(mono).or_insert(0);
            *entry -= c * k;
        }
        p.retain(|_, x| *x != 0);
        out.insert(lam, c);
    }
    out
}

fn brute_lr(lambda: &Partition, mu: &Partition, m: usize) -> BTreeMap<Partition, i64> {
    schur_decompose(
        poly_mul(&ssyt_expansion(lambda.parts(), m), &ssyt_expansion(mu.parts(), m)),
        m,
    )
}

#[test]
fn conjugates() {
    assert_eq!(conjugate(&part(&[3, 1])), part(&[2, 1, 1]));
    assert_eq!(conjugate(&Partition::empty()), Partition::empty());
    assert_eq!(conjugate(&part(&[4, 4, 4])), part(&[3, 3, 3, 3]));
}

#[test]
fn straightening_rules() {
    // adjacent (a, a+1) vanishes
    assert_eq!(straighten(&[2, 3, 0]).sign, 0);
    // (a, b) with b - 1 > a gives -(b-1, a+1)
    let s = straighten(&[1, 5]);
    assert_eq!(s.sign, -1);
    assert_eq!(s.parts, Some(vec![4, 2]));
    let s = straighten(&[3, 1, 0]);
    assert_eq!(s.sign, 1);
    assert_eq!(s.parts, Some(vec![3, 1, 0]));
}

#[test]
fn pieri_and_known_products() {
    let got = lr_classical(&part(&[1]), &part(&[1]), 2);
    let want: BTreeMap<Partition, u64> = [(part(&[2]), 1), (part(&[1, 1]), 1)].into();
    assert_eq!(got, want);

    let got = lr_classical(&part(&[2, 1]), &part(&[2, 1]), 3);
    let want: BTreeMap<Partition, u64> = [
        (part(&[4, 2]), 1),
        (part(&[4, 1, 1]), 1),
        (part(&[3, 3]), 1),
        (part(&[3, 2, 1]), 2),
        (part(&[2, 2, 2]), 1),
    ]
    .into();
    assert_eq!(got, want);
}

#[test]
fn lr_matches_tableau_brute_force_in_three_variables() {
    let boxes = Partition::in_box(3, 3);
    for a in &boxes {
        for b in &boxes {
            if a.size() + b.size() > 9 {
                continue;
            }
            let got: BTreeMap<Partition, i64> = lr_classical(a, b, 3)
                .into_iter()
                .map(|(k, v)| (k, v as i64))
                .collect();
            assert_eq!(got, brute_lr(a, b, 3), "{a} x {b}");
        }
    }
}

#[test]
fn dimensions() {
    assert_eq!(schur_dim(&part(&[1]), 4), BigInt::from(4));
    assert_eq!(schur_dim(&part(&[1, 1]), 4), BigInt::from(6));
    assert_eq!(schur_dim(&part(&[2, 1]), 3), BigInt::from(8));
    assert_eq!(schur_dim(&part(&[1, 1, 1]), 2), BigInt::from(0));
    for lam in Partition::in_box(3, 3) {
        let count: i64 = ssyt_expansion(lam.parts(), 3).values().sum();
        assert_eq!(schur_dim(&lam, 3), BigInt::from(count));
    }
}

#[test]
fn binomials() {
    assert_eq!(binom(6, 2), BigInt::from(15));
    assert_eq!(binom(4, 0), BigInt::from(1));
    assert_eq!(binom(6, 3), BigInt::from(20));
    assert_eq!(binom(3, 5), BigInt::from(0));
    assert_eq!(binom(3, -1), BigInt::from(0));
}

#[test]
fn schur_monomials_match_tableaux() {
    for lam in Partition::in_box(2, 3) {
        let lib: BTreeMap<Vec<i64>, i64> = schur_monomials(&lam, 3)
            .into_iter()
            .map(|(k, v)| (k, v as i64))
            .collect();
        assert_eq!(lib, ssyt_expansion(lam.parts(), 3), "{lam}");
    }
}

#[test]
fn partition_keys() {
    assert_eq!(part(&[4, 1]).to_string(), "4,1");
    assert_eq!(Partition::empty().to_string(), "0");
    assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
    assert_eq!("4, 1,0".parse::<Partition>().unwrap(), part(&[4, 1]));
    assert!("1,2".parse::<Partition>().is_err());
    assert_eq!(parse_int_list("").unwrap(), Vec::<i64>::new());
}

#[test]
fn box_enumeration_is_sorted_and_complete() {
    let b = Partition::in_box(2, 4);
    assert_eq!(b.len(), 15);
    assert!(b.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(Partition::in_box(3, 3).len(), 20);
}

fn small_partition(rows: usize, cols: i64) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=cols, rows).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

proptest! {
    #[test]
    fn straightening_is_idempotent(a in prop::collection::vec(-4i64..6, 1..5)) {
        let s = straighten(&a);
        if let Some(p) = s.parts {
            let again = straighten(&p);
            prop_assert_eq!(again.sign, 1);
            prop_assert_eq!(again.parts, Some(p));
        }
    }

    #[test]
    fn lr_is_symmetric(a in small_partition(3, 3), b in small_partition(3, 3)) {
        prop_assert_eq!(lr_classical(&a, &b, 3), lr_classical(&b, &a, 3));
    }

    #[test]
    fn lr_respects_dimensions(a in small_partition(3, 3), b in small_partition(3, 2), m in 3usize..5) {
        let total: BigInt = lr_classical(&a, &b, m)
            .iter()
            .map(|(nu, c)| schur_dim(nu, m) * BigInt::from(*c))
            .sum();
        prop_assert_eq!(total, schur_dim(&a, m) * schur_dim(&b, m));
    }

    #[test]
    fn conjugation_is_an_involution(p in small_partition(4, 5)) {
        prop_assert_eq!(conjugate(&conjugate(&p)), p.clone());
        prop_assert_eq!(conjugate(&p).size(), p.size());
    }
}
