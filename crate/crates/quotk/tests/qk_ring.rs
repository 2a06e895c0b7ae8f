//! Quantum K-ring of Grassmannians: products, the reduction map, the quantized
//! pairing and its inverse, rank-two closed forms and the cohomological limit.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use quotk::combinatorics::{part, Partition};
use quotk::exact_poly::{integer_matrix_inverse, TailSeries};
use quotk::exec::Parallelism;
use quotk::grothendieck::{dual_class, euler_representation, grothendieck_char, schur_multiply, SchurVector};
use quotk::qk_ring::{
    classical_cohomology_product, graded_part, rank2_class_series, rank2_kappa, rank2_pairing,
    rank2_pairing_inverse, rank2_quantum_cohomology_product, rank2_quantum_product, ExactElement,
    QKElement, QkRing,
};
use quotk::Error;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn ex(terms: &[(&[i64], &[i64])]) -> ExactElement {
    terms.iter().map(|(p, c)| (part(p), ints(c))).collect()
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

#[test]
fn printed_products() {
    let ring = QkRing::new(6, 2).unwrap();
    let got = ring.quantum_product_exact(&part(&[2]), &part(&[4, 1])).unwrap();
    assert_eq!(got, ex(&[(&[4, 3], &[1]), (&[1], &[0, 1]), (&[2], &[0, -1])]));
    let got = ring.quantum_product_exact(&part(&[4, 2]), &part(&[4, 2])).unwrap();
    let want = ex(&[
        (&[3, 3], &[0, 1]),
        (&[4, 2], &[0, 1]),
        (&[4, 3], &[0, -1]),
        (&[], &[0, 0, 1]),
        (&[1], &[0, 0, -1]),
    ]);
    assert_eq!(got, want);
    let got = ring.quantum_product_exact(&part(&[1]), &part(&[4, 4])).unwrap();
    assert_eq!(got, ex(&[(&[3], &[0, 1])]));
    let ring = QkRing::new(6, 3).unwrap();
    let top = part(&[3, 3, 3]);
    assert_eq!(ring.quantum_product_exact(&top, &top).unwrap(), ex(&[(&[], &[0, 0, 0, 1])]));
}

#[test]
fn element_display() {
    let ring = QkRing::new(6, 2).unwrap();
    let x = ring.quantum_product(&part(&[2]), &part(&[4, 1])).unwrap();
    assert_eq!(x.to_string(), "O_4,3 + q O_1 - q O_2");
    let x = ring.quantum_product(&part(&[4, 2]), &part(&[4, 2])).unwrap();
    assert_eq!(x.to_string(), "q O_3,3 + q O_4,2 - q O_4,3 + q^2 - q^2 O_1");
}

#[test]
fn rank_two_closed_forms_match_the_general_pipeline() {
    for n in 4..=7usize {
        let k = n as i64 - 2;
        let ring = QkRing::new(n, 2).unwrap();
        let b = ring.basis().to_vec();
        for l in &b {
            for m in &b {
                let general = ring.quantum_product(l, m).unwrap();
                let closed = rank2_quantum_product(l, m, n).unwrap();
                assert_eq!(general.exact(), closed.exact(), "N={n} {l} x {m}");
                assert!(general.q_degree().unwrap_or(0) <= 2);
                let pairing = ring.pair_series(l, m).unwrap();
                assert_eq!(pairing, rank2_pairing(l, m, n).unwrap(), "N={n} F({l},{m})");
            }
        }
        for nu in Partition::in_box(2, 2 * k) {
            let general = ring.kappa_of_class(&nu).unwrap();
            assert_eq!(general, rank2_kappa(&nu, n).unwrap().exact(), "N={n} kappa {nu}");
        }
        for nu in Partition::in_box(2, 3 * k + 1) {
            assert_eq!(ring.class_series(&nu).unwrap(), rank2_class_series(&nu, n).unwrap(), "N={n} {nu}");
        }
        let inv = ring.pairing_inverse().unwrap();
        for l in &b {
            for m in &b {
                let want = rank2_pairing_inverse(l, m, n).unwrap();
                assert_eq!(inv.get(l, m).unwrap().as_polynomial().unwrap(), want, "N={n} F^({l},{m})");
            }
        }
    }
}

#[test]
fn products_in_larger_rank_two_spaces_stay_in_degree_two() {
    let ring = QkRing::new(8, 2).unwrap();
    let table = ring.table(Parallelism::Parallel).unwrap();
    assert_eq!(table.entries.len(), 28 * 29 / 2);
    assert!(table.entries.values().all(|x| x.q_degree().unwrap_or(0) <= 2));
}

#[test]
fn cohomological_degeneration() {
    for n in 4..=6usize {
        let ring = QkRing::new(n, 2).unwrap();
        for l in ring.basis() {
            for m in ring.basis() {
                let got = ring.quantum_cohomology_product(l, m).unwrap();
                assert_eq!(got.exact(), rank2_quantum_cohomology_product(l, m, n).unwrap().exact());
                // grading and the classical part
                for (nu, p) in got.exact() {
                    for (d, c) in p.iter().enumerate() {
                        if !c.is_zero() {
                            assert_eq!(nu.size() + (n * d) as i64, l.size() + m.size());
                        }
                    }
                }
                let classical: BTreeMap<Partition, BigInt> = got
                    .exact()
                    .into_iter()
                    .filter_map(|(nu, p)| p.first().filter(|c| !c.is_zero()).map(|c| (nu, c.clone())))
                    .collect();
                let want: BTreeMap<Partition, BigInt> = classical_cohomology_product(l, m, n, 2)
                    .into_iter()
                    .map(|(nu, c)| (nu, BigInt::from(c)))
                    .collect();
                assert_eq!(classical, want, "N={n} {l} x {m}");
            }
        }
    }
    let ring = QkRing::new(6, 3).unwrap();
    let x = ring.quantum_product(&part(&[2, 1]), &part(&[3, 2, 1])).unwrap();
    assert_eq!(graded_part(&x, 9), ring.quantum_cohomology_product(&part(&[2, 1]), &part(&[3, 2, 1])).unwrap());
}

#[test]
fn pairing_and_inverse_in_rank_three() {
    let ring = QkRing::new(6, 3).unwrap();
    let f = ring.quantized_pairing().unwrap();
    let empty = Partition::empty();
    let top = part(&[3, 3, 3]);
    assert_eq!(f.get(&empty, &empty).unwrap(), &TailSeries::with_tail(&[], &BigInt::one(), 0));
    let numer = f.numerators();
    let i0 = 0;
    assert!(numer[i0].iter().all(|x| *x == ints(&[1])));
    let it = f.basis.iter().position(|x| *x == top).unwrap();
    assert_eq!(numer[it][it], ints(&[0, 0, 0, 1]));
    for i in 0..f.basis.len() {
        for j in 0..f.basis.len() {
            assert_eq!(f.entries[i][j], f.entries[j][i]);
        }
    }
    let g = ring.pairing_inverse().unwrap();
    assert_eq!(g.get(&empty, &part(&[2, 2])).unwrap().as_polynomial().unwrap(), ints(&[0, -1]));
    assert_eq!(g.get(&empty, &top).unwrap().as_polynomial().unwrap(), ints(&[1]));
    // F · F^{-1} = I as exact series
    let dim = f.basis.len();
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = TailSeries::zero();
            for k in 0..dim {
                acc = acc.add(&f.entries[i][k].mul_poly(&g.entries[k][j].as_polynomial().unwrap()));
            }
            let want = TailSeries::polynomial(&ints(&[(i == j) as i64]));
            assert_eq!(acc, want, "({i},{j})");
        }
    }
}

#[test]
fn classical_limit_of_the_inverse() {
    for (n, r) in [(4, 2), (5, 2), (6, 3)] {
        let ring = QkRing::new(n, r).unwrap();
        let f = ring.quantized_pairing().unwrap();
        let chi: Vec<Vec<BigInt>> = f.entries.iter().map(|row| row.iter().map(|s| s.coeff(0)).collect()).collect();
        let want = integer_matrix_inverse(&chi).unwrap();
        let g = ring.pairing_inverse().unwrap();
        for (i, row) in g.entries.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                assert_eq!(s.coeff(0), want[i][j]);
            }
        }
    }
}

#[test]
fn pairing_route_reproduces_products() {
    for (n, r) in [(6, 2), (6, 3)] {
        let ring = QkRing::new(n, r).unwrap();
        for (i, l) in ring.basis().iter().enumerate() {
            for m in &ring.basis()[i..] {
                assert_eq!(
                    ring.structure_constants_via_pairing(l, m).unwrap(),
                    ring.quantum_product(l, m).unwrap(),
                    "N={n} r={r} {l} x {m}"
                );
            }
        }
    }
}

#[test]
fn unit_and_kappa_identity() {
    for (n, r) in [(5, 2), (6, 3)] {
        let ring = QkRing::new(n, r).unwrap();
        for mu in ring.basis() {
            let x = ring.quantum_product(&Partition::empty(), mu).unwrap();
            assert_eq!(x, QKElement::basis(mu, n, r, r + 1));
            let k = ring.kappa(&grothendieck_char(mu, r).unwrap()).unwrap();
            assert_eq!(k, QKElement::basis(mu, n, r, r + 1));
        }
    }
}

#[test]
fn kappa_is_linear_on_the_handle_element() {
    let (n, r) = (5, 2);
    let ring = QkRing::new(n, r).unwrap();
    let h = ring.kappa(&euler_representation(n, r).unwrap()).unwrap();
    let mut sum = QKElement::zero(n, r, r + 1);
    for a in ring.basis() {
        let prod = schur_multiply(&grothendieck_char(a, r).unwrap(), &dual_class(a, n, r).unwrap()).unwrap();
        sum = sum.add(&ring.kappa(&prod).unwrap());
    }
    assert_eq!(h, sum);
}

#[test]
fn kappa_is_a_ring_map() {
    let (n, r) = (5, 2);
    // classes outside the box reach higher q-degrees
    let ring = QkRing::with_q_max(n, r, 12).unwrap();
    let det = SchurVector::det_s(r);
    let samples: Vec<SchurVector> = vec![
        grothendieck_char(&part(&[1]), r).unwrap(),
        grothendieck_char(&part(&[3, 2]), r).unwrap(),
        grothendieck_char(&part(&[5, 1]), r).unwrap(),
        grothendieck_char(&part(&[4, 4]), r).unwrap(),
        grothendieck_char(&part(&[2]), r).unwrap().mul(&det).unwrap(),
    ];
    for v in &samples {
        for w in &samples {
            let lhs = ring.kappa(&schur_multiply(v, w).unwrap()).unwrap();
            let rhs = ring.multiply(&ring.kappa(v).unwrap(), &ring.kappa(w).unwrap()).unwrap();
            assert_eq!(lhs.exact(), rhs.exact());
        }
    }
}

#[test]
fn overflow_is_reported() {
    let ring = QkRing::with_q_max(6, 2, 2).unwrap();
    let e = ring.quantum_product(&part(&[4, 2]), &part(&[4, 2])).unwrap_err();
    assert!(matches!(e, Error::QDegreeOverflow(_)));
    assert_eq!(e.exit_code(), 4);
    // a product of q-degree one still fits
    assert!(ring.quantum_product(&part(&[2]), &part(&[4, 1])).is_ok());
    assert!(QkRing::new(4, 4).is_err());
    assert!(QkRing::new(4, 2).unwrap().quantum_product(&part(&[3]), &part(&[1])).is_err());
}

/// `F(x, y) = Σ x_a y_b F_{ab}` with polynomial coefficients.
fn pairing_form(ring: &QkRing, x: &QKElement, y: &QKElement) -> TailSeries {
    let mut acc = TailSeries::zero();
    for (a, pa) in x.exact() {
        for (b, pb) in y.exact() {
            let mut c = vec![BigInt::zero(); pa.len() + pb.len()];
            for (i, u) in pa.iter().enumerate() {
                for (j, v) in pb.iter().enumerate() {
                    c[i + j] += u * v;
                }
            }
            acc = acc.add(&ring.pair_series(&a, &b).unwrap().mul_poly(&trim(c)));
        }
    }
    acc
}

fn box_index(len: usize) -> impl Strategy<Value = usize> {
    0..len
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_axioms_in_rank_three(a in box_index(20), b in box_index(20), c in box_index(20)) {
        let ring = QkRing::with_q_max(6, 3, 10).unwrap();
        let basis = ring.basis().to_vec();
        let o = |i: usize| QKElement::basis(&basis[i], 6, 3, 10);
        let ab = ring.multiply(&o(a), &o(b)).unwrap();
        let ba = ring.multiply(&o(b), &o(a)).unwrap();
        prop_assert_eq!(&ab, &ba);
        let bc = ring.multiply(&o(b), &o(c)).unwrap();
        let left = ring.multiply(&ab, &o(c)).unwrap();
        let right = ring.multiply(&o(a), &bc).unwrap();
        prop_assert_eq!(left.exact(), right.exact());
        prop_assert_eq!(pairing_form(&ring, &ab, &o(c)), pairing_form(&ring, &o(a), &bc));
    }
}
