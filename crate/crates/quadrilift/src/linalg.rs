//! Small exact linear algebra over ℚ: products, determinants, inverses, and
//! kernels by Gaussian elimination. Dimensions here are tiny (≤ ~8), so
//! clarity beats asymptotics.

use crate::rational::Rational;
use crate::{Error, Result};
use num::{One, Zero};

/// Dense matrix as rows of exact rationals.
pub type Matrix = Vec<Vec<Rational>>;

/// n × n identity.
pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

/// Matrix product `a · b`.
pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k) = (a.len(), b.len());
    debug_assert!(a.iter().all(|r| r.len() == k));
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

/// Matrix–vector product `a · v`.
pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Transpose.
pub fn transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

/// Exact determinant by fraction-preserving Gaussian elimination.
pub fn det(a: &Matrix) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Rational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { return Rational::zero() };
        if p != col {
            m.swap(p, col);
            d = -d;
        }
        d *= m[col][col].clone();
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let s = &m[col][c] * &f;
                m[r][c] -= s;
            }
        }
    }
    d
}

/// Exact inverse; errors on singular input.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::Degenerate("singular matrix has no inverse".into()))?;
        m.swap(pivot, col);
        inv.swap(pivot, col);
        let f = m[col][col].recip();
        for c in 0..n {
            m[col][c] *= f.clone();
            inv[col][c] *= f.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..n {
                let (s, t) = (&m[col][c] * &f, &inv[col][c] * &f);
                m[r][c] -= s;
                inv[r][c] -= t;
            }
        }
    }
    Ok(inv)
}

/// Basis of the (right) kernel `{v : a·v = 0}` via reduced row echelon form.
pub fn kernel_basis(a: &Matrix) -> Vec<Vec<Rational>> {
    let rows = a.len();
    let cols = if rows == 0 { return Vec::new() } else { a[0].len() };
    let mut m = a.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(p, r);
        let f = m[r][c].recip();
        for j in 0..cols {
            m[r][j] *= f.clone();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..cols {
                let s = &m[r][j] * &f;
                m[i][j] -= s;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn products_and_dets() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(mat_mul(&a, &b), m(&[&[2, 1], &[4, 3]]));
        assert_eq!(det(&a), rat(-2));
        assert_eq!(det(&b), rat(-1));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), rat(0));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[0, 1, -1], &[3, 0, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
        assert!(inverse(&m(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn kernels() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                let dot: Rational = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(dot.is_zero());
            }
        }
        assert!(kernel_basis(&identity(3)).is_empty());
    }
}
