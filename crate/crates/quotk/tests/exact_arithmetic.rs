//! Exact polynomial substrate: t-polynomials, truncated q-polynomials,
//! closed-form q-series and determinants.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use quotk::combinatorics::binom;
use quotk::exact_poly::{
    integer_matrix_inverse, parse_rational_list, qpoly_matrix_inverse, rat, t_coeff, tpoly_det,
    tpoly_mul, QPoly, TPoly, TailSeries,
};
use quotk::Error;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn tpoly_products() {
    let t_plus_2 = TPoly::from_ints([2, 1]);
    assert_eq!(tpoly_mul(&TPoly::one(), &t_plus_2), t_plus_2);
    let sq = &tpoly_mul(&t_plus_2, &t_plus_2) - &TPoly::one();
    assert_eq!(sq, TPoly::from_ints([3, 4, 1]));
    let t3 = TPoly::from_ints([0, 0, 0, 1]);
    assert!(tpoly_mul(&TPoly::zero(), &t3).is_zero());
}

#[test]
fn coefficient_extraction() {
    let p = TPoly::from_ints([3, 4, 1]);
    assert_eq!(t_coeff(&p, 1), rat(4));
    assert_eq!(t_coeff(&p, 5), rat(0));
    assert_eq!(t_coeff(&p, 2), rat(1));
}

#[test]
fn small_determinants() {
    assert_eq!(tpoly_det(&[vec![TPoly::one()]]).unwrap(), TPoly::one());
    let t = TPoly::t();
    let m = vec![vec![t.clone(), TPoly::one()], vec![TPoly::one(), t]];
    assert_eq!(tpoly_det(&m).unwrap(), TPoly::from_ints([-1, 0, 1]));
}

/// Dual Jacobi–Trudi block with `e_r = C(N,r) + t` on the diagonal: the top
/// two t-coefficients of its determinant are `1` and `d·C(N,r)`.
#[test]
fn tridiagonal_block_leading_coefficients() {
    let (n, r) = (6i64, 2i64);
    let e = |j: i64| -> TPoly {
        if j < 0 || j > n {
            TPoly::zero()
        } else if j == r {
            TPoly::from_coeffs(vec![rat(binom(n, j)), rat(1)])
        } else {
            TPoly::constant(rat(binom(n, j)))
        }
    };
    for d in 1..=5usize {
        // e_{r - i + j} pattern of the rectangle (d)^r conjugate
        let m: Vec<Vec<TPoly>> = (0..d)
            .map(|i| (0..d).map(|j| e(r - i as i64 + j as i64)).collect())
            .collect();
        let det = tpoly_det(&m).unwrap();
        assert_eq!(det.degree(), Some(d));
        assert_eq!(t_coeff(&det, d), rat(1));
        assert_eq!(t_coeff(&det, d - 1), rat(binom(n, r) * BigInt::from(d)));
    }
}

fn cofactor(m: &[Vec<TPoly>]) -> TPoly {
    let n = m.len();
    if n == 0 {
        return TPoly::one();
    }
    let mut acc = TPoly::zero();
    for j in 0..n {
        let minor: Vec<Vec<TPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = tpoly_mul(&m[0][j], &cofactor(&minor));
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn small_tpoly() -> impl Strategy<Value = TPoly> {
    prop::collection::vec(-3i64..=3, 0..3).prop_map(TPoly::from_ints)
}

fn square(n: usize) -> impl Strategy<Value = Vec<Vec<TPoly>>> {
    prop::collection::vec(prop::collection::vec(small_tpoly(), n), n)
}

proptest! {
    #[test]
    fn bareiss_matches_cofactor_expansion(m in (1usize..=4).prop_flat_map(square)) {
        prop_assert_eq!(tpoly_det(&m).unwrap(), cofactor(&m));
    }

    #[test]
    fn determinant_is_homogeneous(m in (1usize..=4).prop_flat_map(square), c in -3i64..=3) {
        let n = m.len() as u32;
        let scaled: Vec<Vec<TPoly>> = m.iter()
            .map(|row| row.iter().map(|x| x.scale(&rat(c))).collect())
            .collect();
        let lhs = tpoly_det(&scaled).unwrap();
        let rhs = tpoly_det(&m).unwrap().scale(&rat(BigInt::from(c).pow(n)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tail_series_coefficients_match_definition(
        p in prop::collection::vec(-5i64..=5, 0..5),
        c in -3i64..=3,
        d in 0usize..5,
    ) {
        let s = TailSeries::with_tail(&ints(&p), &BigInt::from(c), d);
        for e in 0..12 {
            let mut want = BigInt::from(*p.get(e).unwrap_or(&0));
            if e >= d { want += c; }
            prop_assert_eq!(s.coeff(e), want);
        }
        let (poly, cc, dd) = s.decompose();
        prop_assert_eq!(TailSeries::with_tail(&poly, &cc, dd), s.clone());
        prop_assert_eq!(s.tail_coeff(), BigInt::from(c));
    }

    #[test]
    fn qpoly_overflow_flag_tracks_discarded_terms(
        a in prop::collection::vec(-4i64..=4, 1..4),
        b in prop::collection::vec(-4i64..=4, 1..4),
        q_max in 0usize..4,
    ) {
        let pa = QPoly::from_coeffs(&ints(&a), 8);
        let pb = QPoly::from_coeffs(&ints(&b), 8);
        let full = pa.mul(&pb);
        let trunc = QPoly::from_coeffs(&ints(&a), q_max).mul(&QPoly::from_coeffs(&ints(&b), q_max));
        for e in 0..=q_max {
            prop_assert_eq!(trunc.coeff(e), full.coeff(e));
        }
        let discarded = full.coeffs().iter().skip(q_max + 1).any(|c| !c.is_zero())
            || a.iter().skip(q_max + 1).any(|&c| c != 0)
            || b.iter().skip(q_max + 1).any(|&c| c != 0);
        prop_assert_eq!(trunc.overflow(), discarded);
    }
}

#[test]
fn geometric_series_inverse() {
    let geo = QPoly::from_coeffs(&ints(&[1, 1, 1, 1]), 3);
    let inv = qpoly_matrix_inverse(&[vec![geo]]).unwrap();
    assert_eq!(inv[0][0].trimmed(), ints(&[1, -1]));
    assert!(!inv[0][0].overflow());
}

#[test]
fn singular_constant_term_is_rejected() {
    let m = vec![
        vec![QPoly::from_coeffs(&ints(&[1, 1]), 2), QPoly::from_coeffs(&ints(&[1]), 2)],
        vec![QPoly::from_coeffs(&ints(&[1]), 2), QPoly::from_coeffs(&ints(&[1, 5]), 2)],
    ];
    assert!(matches!(qpoly_matrix_inverse(&m), Err(Error::SingularPairing(_))));
    let m = vec![vec![BigInt::from(2)]];
    assert!(matches!(integer_matrix_inverse(&m), Err(Error::SingularPairing(_))));
}

#[test]
fn integer_inverse_round_trip() {
    let m = vec![ints(&[1, 1, 0]), ints(&[0, 1, 1]), ints(&[0, 0, 1])];
    let inv = integer_matrix_inverse(&m).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let s: BigInt = (0..3).map(|k| &m[i][k] * &inv[k][j]).sum();
            assert_eq!(s, if i == j { BigInt::one() } else { BigInt::zero() });
        }
    }
}

#[test]
fn tail_series_arithmetic() {
    let geo = TailSeries::with_tail(&[], &BigInt::one(), 0);
    assert_eq!(geo.times_one_minus_q(), ints(&[1]));
    assert!(!geo.is_polynomial());
    let poly = geo.mul_poly(&ints(&[1, -1]));
    assert_eq!(poly.as_polynomial(), Some(ints(&[1])));
    let s = TailSeries::with_tail(&ints(&[0, -3]), &BigInt::one(), 1);
    assert_eq!(s.decompose(), (ints(&[0, -3]), BigInt::one(), 1));
    let t = s.truncate(3);
    assert!(t.overflow());
    assert_eq!(t.trimmed(), ints(&[0, -2, 1, 1]));
    assert_eq!(s.add(&s.scale(&BigInt::from(-1))), TailSeries::zero());
}

#[test]
fn rational_lists_parse() {
    let v = parse_rational_list("2, 3/2,-5").unwrap();
    assert_eq!(v, vec![rat(2), rat(3) / rat(2), rat(-5)]);
    assert!(matches!(parse_rational_list("2,x"), Err(Error::Parse(_))));
}
