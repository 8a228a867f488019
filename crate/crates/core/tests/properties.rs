mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use common::{el, free, ring, unit};
use proreg::cli::{run_problem, Problem, Settings};
use proreg::fpmod::FpModule;
use proreg::kernel::{smith_normal_form, Matrix};
use proreg::koszul::{koszul_tower, KoszulLevel, SequenceSpec};
use proreg::regularity::{is_bounded_torsion, is_weakly_pro_regular, BoundedVerdict};
use proreg::towers::is_pro_zero;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// Polynomial text in `x, y` from `(coefficient, deg x, deg y)` terms.
fn poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec((-6i64..=6, 0u32..3, 0u32..3), 0..4).prop_map(|terms| {
        if terms.is_empty() {
            return "0".to_string();
        }
        terms.iter().map(|(c, a, b)| format!("({c})*x^{a}*y^{b}")).collect::<Vec<_>>().join("+")
    })
}

/// Small nonzero elements of `ℚ[x, y]` for sequences.
fn seq_element() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["x", "y", "x*y", "x^2", "x+y", "y^2-x", "x-1", "2*y"])
}

/// Integer determinant by fraction-free elimination (Bareiss).
fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect()).collect()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ring_arithmetic_laws(a in poly_text(), b in poly_text(), c in poly_text()) {
        for r in [ring("QQ", &["x", "y"], &["x^2-y"]), ring("ZZ/4", &["x", "y"], &["x*y-2"])] {
            let (a, b, c) = (el(&r, &a), el(&r, &b), el(&r, &c));
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
            prop_assert!(r.sub(&a, &a).is_zero());
        }
    }

    #[test]
    fn format_then_parse_is_identity(a in poly_text()) {
        for r in [ring("QQ", &["x", "y"], &[]), ring("GF(5)", &["x", "y"], &["y^2-x-1"]), ring("ZZ", &["x", "y"], &[])] {
            let p = el(&r, &a);
            prop_assert_eq!(el(&r, &r.format(&p)), p);
        }
    }

    #[test]
    fn smith_form_is_a_certified_diagonalization(
        rows in 1usize..4,
        cols in 1usize..4,
        entries in prop::collection::vec(-9i64..=9, 9),
    ) {
        let a: Vec<Vec<BigInt>> = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(entries[i * 3 + j])).collect()).collect();
        let s = smith_normal_form(&a, cols);
        prop_assert_eq!(matmul(&matmul(&s.u, &a, rows, cols), &s.v, cols, cols), s.d.clone());
        prop_assert_eq!(det(&s.u).abs(), BigInt::from(1));
        prop_assert_eq!(det(&s.v).abs(), BigInt::from(1));
        for i in 0..rows {
            for j in 0..cols {
                prop_assert!(i == j || s.d[i][j].is_zero());
            }
        }
        let inv = s.invariant_factors();
        prop_assert!(inv.iter().all(|d| !d.is_negative()));
        for w in inv.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        if rows == cols {
            let product: BigInt = inv.iter().product();
            prop_assert_eq!(det(&a).abs(), product);
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn koszul_differentials_square_to_zero(elements in prop::collection::vec(seq_element(), 1..4), n in 1u32..3) {
        let r = ring("QQ", &["x", "y"], &["x^2*y"]);
        let s = SequenceSpec::parse(r.clone(), &elements).unwrap();
        let level = KoszulLevel::new(&s, n, free(&r)).unwrap();
        for k in 1..elements.len() {
            prop_assert!(level.differential(k).compose(level.differential(k + 1)).unwrap().is_zero());
        }
    }

    #[test]
    fn bounded_torsion_index_of_truncation_sum_is_the_largest_exponent(exps in prop::collection::vec(1u32..6, 1..4)) {
        let r = ring("QQ", &["x"], &[]);
        let len = exps.len();
        let cols = exps.iter().enumerate().map(|(k, e)| unit(&r, len, k, el(&r, &format!("x^{e}")))).collect();
        let m = Arc::new(FpModule::new(r.clone(), len, Matrix::from_columns(len, cols)).unwrap());
        // certifying index s needs n + s ≤ W for every n ≤ W/2
        let report = is_bounded_torsion(&m, &el(&r, "x"), 12).unwrap();
        prop_assert_eq!(report.verdict, BoundedVerdict::Bounded);
        prop_assert_eq!(report.index, Some(*exps.iter().max().unwrap() as usize));
    }

    #[test]
    fn pro_zero_certificates_replay(elements in prop::collection::vec(seq_element(), 2..4), i in 1usize..3) {
        let r = ring("QQ", &["x", "y"], &["x*y"]);
        let s = SequenceSpec::parse(r.clone(), &elements).unwrap();
        let tower = koszul_tower(i, &s, &free(&r), 4).unwrap();
        let cert = is_pro_zero(&tower).unwrap();
        prop_assert!(cert.replay(&tower).is_ok());
    }

    #[test]
    fn weak_pro_regularity_ignores_order(a in seq_element(), b in seq_element()) {
        let r = ring("QQ", &["x", "y"], &["x*y"]);
        let m = free(&r);
        let ab = is_weakly_pro_regular(&SequenceSpec::parse(r.clone(), &[a, b]).unwrap(), &m, 4).unwrap();
        let ba = is_weakly_pro_regular(&SequenceSpec::parse(r.clone(), &[b, a]).unwrap(), &m, 4).unwrap();
        prop_assert_eq!(ab.holds, ba.holds);
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn reports_do_not_depend_on_worker_count(jobs in 2usize..9) {
        let bytes = std::fs::read(common::fixtures_dir().join("problems/regularity.json")).unwrap();
        let problem = Problem::parse(&bytes, Settings { window: 8, degree_cap: 24 }).unwrap();
        let (serial, _) = run_problem(&problem, 1).unwrap();
        let (parallel, _) = run_problem(&problem, jobs).unwrap();
        prop_assert_eq!(serial.to_json(), parallel.to_json());
    }
}
