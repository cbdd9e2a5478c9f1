//! Determinants of small matrices with polynomial entries.

use crate::error::{Error, Result};
use crate::poly::MPoly;

fn check_square(m: &[Vec<MPoly>]) -> Result<usize> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::NotSquare {
                rows: n,
                cols: row.len(),
            });
        }
    }
    Ok(n)
}

/// Exact determinant: cofactor expansion up to 4x4, fraction-free Bareiss
/// elimination above that. The empty matrix has determinant 1.
pub fn determinant(m: &[Vec<MPoly>]) -> Result<MPoly> {
    let n = check_square(m)?;
    if n <= 4 {
        Ok(cofactor(m))
    } else {
        Ok(bareiss(m))
    }
}

/// Bareiss elimination for any size; exposed so it can be checked against
/// the cofactor path.
pub fn determinant_bareiss(m: &[Vec<MPoly>]) -> Result<MPoly> {
    check_square(m)?;
    Ok(bareiss(m))
}

fn cofactor(m: &[Vec<MPoly>]) -> MPoly {
    match m.len() {
        0 => MPoly::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = MPoly::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != col)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let t = &m[0][col] * &cofactor(&minor);
                acc = if col % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

fn bareiss(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one();
    }
    let mut a: Vec<Vec<MPoly>> = m.to_vec();
    let mut sign = false;
    let mut prev = MPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return MPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    fn mat(rows: &[&[&str]]) -> Vec<Vec<MPoly>> {
        rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect()
    }

    #[test]
    fn identity_has_unit_determinant() {
        let id = mat(&[
            &["1", "0", "0", "0"],
            &["0", "1", "0", "0"],
            &["0", "0", "1", "0"],
            &["0", "0", "0", "1"],
        ]);
        assert_eq!(determinant(&id).unwrap(), MPoly::one());
    }

    #[test]
    fn difference_of_squares_curvature_matrix() {
        let m = mat(&[
            &["0", "2*u1-2*v1", "-2*u2+2*v2", "1"],
            &["2*v1-2*u1", "-2", "0", "0"],
            &["-2*v2+2*u2", "0", "2", "0"],
            &["1", "0", "0", "0"],
        ]);
        assert_eq!(determinant(&m).unwrap(), MPoly::int(4));
    }

    #[test]
    fn bilinear_curvature_matrix() {
        let m = mat(&[
            &["0", "v1", "-v2", "1"],
            &["u1", "1", "0", "0"],
            &["-u2", "0", "-1", "0"],
            &["1", "0", "0", "0"],
        ]);
        assert_eq!(determinant(&m).unwrap(), MPoly::one());
    }

    #[test]
    fn non_square_is_rejected() {
        let m = mat(&[&["1", "2"], &["3"]]);
        assert!(matches!(determinant(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn bareiss_handles_zero_pivots() {
        let m = mat(&[&["0", "x", "1"], &["y", "0", "0"], &["1", "1", "z"]]);
        assert_eq!(determinant_bareiss(&m).unwrap(), cofactor(&m));
        let singular = mat(&[&["0", "1"], &["0", "x"]]);
        assert!(determinant_bareiss(&singular).unwrap().is_zero());
    }
}
