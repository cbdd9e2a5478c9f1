use std::collections::BTreeMap;

use falconer_core::matrix::{determinant, determinant_bareiss};
use falconer_core::rational::{int, Rational};
use falconer_core::MPoly;
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];

fn poly() -> impl Strategy<Value = MPoly> {
    let term = (-5i64..=5, 0u32..3, 0u32..3, 0u32..3).prop_map(|(c, a, b, d)| (vec![a, b, d], int(c)));
    prop::collection::vec(term, 0..5).prop_map(|ts| MPoly::from_terms(&VARS, ts).unwrap())
}

fn point() -> impl Strategy<Value = BTreeMap<String, Rational>> {
    prop::array::uniform3(-4i64..=4).prop_map(|v| {
        VARS.iter()
            .zip(v)
            .map(|(n, x)| (n.to_string(), int(x)))
            .collect()
    })
}

proptest! {
    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &MPoly::one(), p.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), at in point()) {
        let (pv, qv) = (p.eval(&at).unwrap(), q.eval(&at).unwrap());
        prop_assert_eq!((&p * &q).eval(&at).unwrap(), &pv * &qv);
        prop_assert_eq!((&p + &q).eval(&at).unwrap(), &pv + &qv);
    }

    #[test]
    fn product_rule(p in poly(), q in poly()) {
        for v in VARS {
            let lhs = (&p * &q).partial_derivative(v).unwrap_or_else(|_| MPoly::zero());
            let dp = p.partial_derivative(v).unwrap_or_else(|_| MPoly::zero());
            let dq = q.partial_derivative(v).unwrap_or_else(|_| MPoly::zero());
            prop_assert_eq!(lhs, &(&dp * &q) + &(&p * &dq));
        }
    }

    #[test]
    fn substitution_is_a_homomorphism(p in poly(), q in poly(), s in poly(), t in poly()) {
        let b: BTreeMap<String, MPoly> =
            [("x".to_string(), s), ("y".to_string(), t)].into_iter().collect();
        prop_assert_eq!((&p * &q).substitute(&b), &p.substitute(&b) * &q.substitute(&b));
        prop_assert_eq!((&p + &q).substitute(&b), &p.substitute(&b) + &q.substitute(&b));
    }

    #[test]
    fn substitution_commutes_with_evaluation(p in poly(), s in poly(), at in point()) {
        let b: BTreeMap<String, MPoly> = [("y".to_string(), s.clone())].into_iter().collect();
        let mut moved = at.clone();
        moved.insert("y".into(), s.eval(&at).unwrap());
        prop_assert_eq!(p.substitute(&b).eval(&at).unwrap(), p.eval(&moved).unwrap());
    }

    #[test]
    fn exact_division_recovers_factor(p in poly(), q in poly()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).div_exact(&q), Some(p));
    }

    #[test]
    fn bareiss_matches_leibniz_5x5(cells in prop::collection::vec(0usize..ENTRIES.len(), 25)) {
        let m: Vec<Vec<MPoly>> = cells.chunks(5).map(|r| r.iter().map(|&k| entry(k)).collect()).collect();
        let oracle = leibniz(&m);
        prop_assert_eq!(determinant(&m).unwrap(), oracle.clone());
        prop_assert_eq!(determinant_bareiss(&m).unwrap(), oracle);
    }

    #[test]
    fn bareiss_matches_cofactor_4x4(cells in prop::collection::vec(0usize..ENTRIES.len(), 16)) {
        let m: Vec<Vec<MPoly>> = cells.chunks(4).map(|r| r.iter().map(|&k| entry(k)).collect()).collect();
        prop_assert_eq!(determinant_bareiss(&m).unwrap(), determinant(&m).unwrap());
    }
}

const ENTRIES: [&str; 7] = ["0", "1", "-1", "u1", "-u1", "v2", "-v2"];

fn entry(k: usize) -> MPoly {
    ENTRIES[k].parse().unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

fn sign(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Sum over permutations; the reference for every determinant path.
fn leibniz(m: &[Vec<MPoly>]) -> MPoly {
    let mut acc = MPoly::zero();
    for p in permutations(m.len()) {
        let term = p
            .iter()
            .enumerate()
            .fold(MPoly::one(), |t, (r, &c)| &t * &m[r][c]);
        acc = if sign(&p) { &acc - &term } else { &acc + &term };
    }
    acc
}

#[test]
fn all_2x2_and_sampled_3x3_matrices_match_leibniz() {
    let n = ENTRIES.len();
    for idx in 0..n.pow(4) {
        let k = [idx % n, idx / n % n, idx / n / n % n, idx / n / n / n];
        let m = vec![vec![entry(k[0]), entry(k[1])], vec![entry(k[2]), entry(k[3])]];
        assert_eq!(determinant(&m).unwrap(), leibniz(&m));
        assert_eq!(determinant_bareiss(&m).unwrap(), leibniz(&m));
    }
    // a fixed stride through all 7^9 matrices of size 3
    for idx in (0..n.pow(9)).step_by(997) {
        let mut rest = idx;
        let m: Vec<Vec<MPoly>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let e = entry(rest % n);
                        rest /= n;
                        e
                    })
                    .collect()
            })
            .collect();
        assert_eq!(determinant(&m).unwrap(), leibniz(&m));
        assert_eq!(determinant_bareiss(&m).unwrap(), leibniz(&m));
    }
}

#[test]
fn canonical_form_examples() {
    let p: MPoly = "(x+y+z)^2".parse().unwrap();
    assert_eq!(p.to_string(), "x^2 + 2*x*y + 2*x*z + y^2 + 2*y*z + z^2");
    assert_eq!(
        p.partial_derivative("x").unwrap(),
        "2*x + 2*y + 2*z".parse().unwrap()
    );
    assert_eq!(p.substitute(&BTreeMap::new()), p);
}
