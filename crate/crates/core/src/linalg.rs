//! Small exact linear algebra: Gaussian elimination over a field and
//! determinants of integer matrices, exact or modulo an integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ring::Field;

/// Solve `a x = b` for a square nonsingular system; `None` if singular.
pub fn solve<T: Field>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = T::one() / &m[col][col];
        for j in col..=n {
            m[col][j] = m[col][j].clone() * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    let t = m[col][j].clone() * &f;
                    m[r][j] = m[r][j].clone() - &t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinant modulo `modulus`, by unimodular integer row operations.
pub fn det_mod(mut m: Vec<Vec<BigInt>>, modulus: &BigInt) -> BigInt {
    let n = m.len();
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x = x.mod_floor(modulus);
        }
    }
    let mut det = BigInt::one();
    for col in 0..n {
        loop {
            // Row with the smallest nonzero entry in this column.
            let piv = (col..n).filter(|&r| !m[r][col].is_zero()).min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(p) = piv else {
                return BigInt::zero();
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let mut done = true;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = m[r][col].div_floor(&m[col][col]);
                for j in col..n {
                    let t = &q * &m[col][j];
                    m[r][j] = (&m[r][j] - t).mod_floor(modulus);
                }
                if !m[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        det = (det * &m[col][col]).mod_floor(modulus);
    }
    det.mod_floor(modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn bm(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn determinants_agree() {
        let m = bm(&[&[2, -1, 0, 3], &[1, 4, 2, -2], &[0, 5, -3, 1], &[7, 0, 1, 1]]);
        let d = det_bareiss(m.clone());
        for md in [7i64, 1000, 97 * 97, 1 << 20] {
            let modulus = BigInt::from(md);
            assert_eq!(det_mod(m.clone(), &modulus), d.mod_floor(&modulus));
        }
        assert_eq!(det_bareiss(bm(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    }

    #[test]
    fn rational_solve() {
        let r = |n: i64| BigRational::from_integer(n.into());
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let x = solve(&a, &[r(3), r(5)]).unwrap();
        assert_eq!(x, vec![BigRational::new(4.into(), 5.into()), BigRational::new(7.into(), 5.into())]);
        assert!(solve(&[vec![r(1), r(2)], vec![r(2), r(4)]], &[r(1), r(1)]).is_none());
    }
}
