//! Exact integer matrices: the 2x2 matrices acting on (length, sum)
//! vectors, and square letter-count matrices.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::PsiVector;

/// A 2x2 integer matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }

    /// `[[d, -b], [-c, a]]`, so that `m * adj(m) = det(m) * I`.
    pub fn adjugate(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[d, -b], [-c, a]])
    }

    pub fn mul_vec(&self, v: PsiVector) -> PsiVector {
        let [[a, b], [c, d]] = self.0;
        PsiVector::new(a * v.length + b * v.sum, c * v.length + d * v.sum)
    }

    /// Solves `m * x = v` exactly. Returns `Ok(None)` when the unique
    /// rational solution is not an integer vector.
    pub fn solve_integral(&self, v: PsiVector) -> Result<Option<PsiVector>> {
        let det = self.det();
        if det == 0 {
            return Err(Error::SingularMatrix);
        }
        let num = self.adjugate().mul_vec(v);
        if num.length % det != 0 || num.sum % det != 0 {
            return Ok(None);
        }
        Ok(Some(PsiVector::new(num.length / det, num.sum / det)))
    }

    /// Integer roots of the characteristic polynomial, when both are integers.
    pub fn integer_eigenvalues(&self) -> Option<(i64, i64)> {
        let t = self.trace();
        let disc = t * t - 4 * self.det();
        if disc < 0 {
            return None;
        }
        let r = isqrt(disc);
        if r * r != disc || (t + r) % 2 != 0 {
            return None;
        }
        Some(((t - r) / 2, (t + r) / 2))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let mut out = [[0i64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j];
            }
        }
        Mat2(out)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

fn isqrt(n: i64) -> i64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Decides whether both eigenvalues of `m` have modulus strictly greater
/// than one, using only integer sign conditions.
///
/// The eigenvalues are the roots of `l^2 - t l + D`. They lie strictly
/// outside the unit circle iff the roots of the reciprocal polynomial
/// `D u^2 - t u + 1` lie strictly inside it, which by the Jury conditions
/// for degree two is `|D| > 1` together with `q(1) > 0` and `q(-1) > 0`
/// after normalizing the leading coefficient to be positive.
pub fn eigenvalues_outside_unit_circle(m: &[Vec<i64>]) -> Result<bool> {
    if m.len() != 2 || m.iter().any(|r| r.len() != 2) {
        return Err(Error::UnsupportedDimension(m.len()));
    }
    let m = Mat2([[m[0][0], m[0][1]], [m[1][0], m[1][1]]]);
    mat2_eigenvalues_outside_unit_circle(&m)
}

pub fn mat2_eigenvalues_outside_unit_circle(m: &Mat2) -> Result<bool> {
    let det = m.det();
    if det == 0 {
        return Err(Error::SingularMatrix);
    }
    let t = m.trace();
    // reciprocal polynomial s*(det u^2 - t u + 1) with positive leading coefficient
    let s = det.signum();
    let a2 = s * det;
    let a1 = -s * t;
    let a0 = s;
    let q_at_1 = a2 + a1 + a0;
    let q_at_minus_1 = a2 - a1 + a0;
    Ok(a0.abs() < a2 && q_at_1 > 0 && q_at_minus_1 > 0)
}

/// A square matrix of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl IncidenceMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn column_sum(&self, j: usize) -> i64 {
        self.entries.iter().map(|r| r[j]).sum()
    }

    /// `self - lambda * I`.
    pub fn shifted(&self, lambda: i64) -> Vec<Vec<i64>> {
        let mut m = self.entries.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= lambda;
        }
        m
    }

    /// `det(self - lambda * I)`; zero iff `lambda` is an eigenvalue.
    pub fn characteristic_at(&self, lambda: i64) -> i128 {
        determinant(&self.shifted(lambda))
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Floating point reference, test-only.
    fn outside_by_roots(m: &Mat2) -> bool {
        let t = m.trace() as f64;
        let d = m.det() as f64;
        let disc = t * t - 4.0 * d;
        if disc < 0.0 {
            d.sqrt() > 1.0
        } else {
            let r = disc.sqrt();
            ((t - r) / 2.0).abs() > 1.0 && ((t + r) / 2.0).abs() > 1.0
        }
    }

    #[test]
    fn eigenvalue_examples() {
        assert!(mat2_eigenvalues_outside_unit_circle(&Mat2::new(5, 0, 1, 2)).unwrap());
        assert!(mat2_eigenvalues_outside_unit_circle(&Mat2::new(5, 2, 2, 4)).unwrap());
        assert!(!mat2_eigenvalues_outside_unit_circle(&Mat2::IDENTITY).unwrap());
        assert_eq!(
            mat2_eigenvalues_outside_unit_circle(&Mat2::new(1, 2, 2, 4)),
            Err(Error::SingularMatrix)
        );
        assert!(matches!(
            eigenvalues_outside_unit_circle(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            Err(Error::UnsupportedDimension(3))
        ));
    }

    #[test]
    fn integer_eigenvalues_of_beta_matrix() {
        assert_eq!(Mat2::new(5, 0, 1, 2).integer_eigenvalues(), Some((2, 5)));
        // (9 +- sqrt 17) / 2 is irrational
        assert_eq!(Mat2::new(5, 2, 2, 4).integer_eigenvalues(), None);
    }

    #[test]
    fn integral_solve() {
        let m = Mat2::new(5, 0, 1, 2);
        assert_eq!(m.adjugate(), Mat2::new(2, 0, -1, 5));
        assert_eq!(m.solve_integral(PsiVector::new(1, 0)).unwrap(), None);
        assert_eq!(
            m.solve_integral(PsiVector::new(10, 2)).unwrap(),
            Some(PsiVector::new(2, 0))
        );
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![vec![0, 1, 3], vec![0, 2, 2], vec![1, 0, 0]];
        // cofactor along first column: 1 * (1*2 - 3*2) = -4
        assert_eq!(determinant(&m), -4);
        let shifted = IncidenceMatrix { entries: m }.characteristic_at(1);
        assert_eq!(shifted, 0);
    }

    proptest::proptest! {
        #[test]
        fn jury_agrees_with_roots(a in -12i64..12, b in -12i64..12, c in -12i64..12, d in -12i64..12) {
            let m = Mat2::new(a, b, c, d);
            proptest::prop_assume!(m.det() != 0);
            let t = m.trace() as f64;
            let disc = t * t - 4.0 * m.det() as f64;
            // skip the measure-zero boundary where a root has modulus exactly one
            let near_boundary = if disc < 0.0 {
                m.det() == 1
            } else {
                let r = disc.sqrt();
                (((t - r) / 2.0).abs() - 1.0).abs() < 1e-9 || (((t + r) / 2.0).abs() - 1.0).abs() < 1e-9
            };
            proptest::prop_assume!(!near_boundary);
            proptest::prop_assert_eq!(mat2_eigenvalues_outside_unit_circle(&m).unwrap(), outside_by_roots(&m));
        }

        #[test]
        fn solve_integral_inverts(a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9,
                                  x in -50i64..50, y in -50i64..50) {
            let m = Mat2::new(a, b, c, d);
            proptest::prop_assume!(m.det() != 0);
            let v = PsiVector::new(x, y);
            proptest::prop_assert_eq!(m.solve_integral(m.mul_vec(v)).unwrap(), Some(v));
        }
    }
}
