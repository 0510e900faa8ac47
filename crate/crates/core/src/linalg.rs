//! Exact linear algebra: integer echelon forms and Bareiss determinants for
//! small integer matrices, Gaussian elimination over the rationals.

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn overflow() -> Error {
    Error::Internal("integer overflow in exact elimination".into())
}

/// Result of a greedy rank computation over a list of integer vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    /// Indices (into the input list) of the vectors kept, in input order.
    /// Each kept vector is independent of those before it.
    pub independent: Vec<usize>,
    /// One coordinate per kept vector; the square submatrix of the kept
    /// vectors restricted to these coordinates is nonsingular.
    pub pivots: Vec<usize>,
}

impl Basis {
    pub fn rank(&self) -> usize {
        self.independent.len()
    }
}

/// Greedy basis of the span of `vectors` (processed in order), with exact
/// integer arithmetic. All vectors must have the same length.
pub fn integer_basis<V: AsRef<[i64]>>(vectors: &[V]) -> Result<Basis> {
    let mut rows: Vec<(Vec<i128>, usize)> = Vec::new();
    let mut basis = Basis { independent: Vec::new(), pivots: Vec::new() };
    for (idx, v) in vectors.iter().enumerate() {
        let mut cur: Vec<i128> = v.as_ref().iter().map(|&x| x as i128).collect();
        for (row, piv) in &rows {
            let c = cur[*piv];
            if c == 0 {
                continue;
            }
            let r = row[*piv];
            for (x, y) in cur.iter_mut().zip(row) {
                let lhs = x.checked_mul(r).ok_or_else(overflow)?;
                let rhs = y.checked_mul(c).ok_or_else(overflow)?;
                *x = lhs.checked_sub(rhs).ok_or_else(overflow)?;
            }
            let g = cur.iter().fold(0i128, |g, x| g.gcd(x));
            if g > 1 {
                cur.iter_mut().for_each(|x| *x /= g);
            }
        }
        if let Some(piv) = cur.iter().position(|&x| x != 0) {
            basis.independent.push(idx);
            basis.pivots.push(piv);
            rows.push((cur, piv));
        }
    }
    Ok(basis)
}

pub fn integer_rank<V: AsRef<[i64]>>(vectors: &[V]) -> Result<usize> {
    Ok(integer_basis(vectors)?.rank())
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination.
pub fn det_i128(mut m: Vec<Vec<i128>>) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    assert!(m.iter().all(|r| r.len() == n), "det_i128 needs a square matrix");
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k]).ok_or_else(overflow)?;
                let b = m[i][k].checked_mul(m[k][j]).ok_or_else(overflow)?;
                m[i][j] = a.checked_sub(b).ok_or_else(overflow)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Reduce `m` in place to row echelon form over the rationals; returns the
/// rank and the determinant sign flips performed.
fn eliminate(m: &mut [Vec<Scalar>]) -> (usize, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut flipped = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if piv != rank {
            m.swap(piv, rank);
            flipped = !flipped;
        }
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * y;
            }
        }
        rank += 1;
    }
    (rank, flipped)
}

pub fn rational_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m = rows.to_vec();
    eliminate(&mut m).0
}

pub fn rational_det(rows: &[Vec<Scalar>]) -> Scalar {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "rational_det needs a square matrix");
    let mut m = rows.to_vec();
    let (rank, flipped) = eliminate(&mut m);
    if rank < n {
        return Scalar::zero();
    }
    let det = (0..n).fold(Scalar::from_integer(1.into()), |acc, i| acc * &m[i][i]);
    if flipped {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn bareiss_matches_known_determinants() {
        assert_eq!(det_i128(vec![vec![2, 0], vec![0, 3]]).unwrap(), 6);
        assert_eq!(det_i128(vec![vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(det_i128(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).unwrap(), -3);
        assert_eq!(det_i128(vec![vec![1, 2], vec![2, 4]]).unwrap(), 0);
        assert_eq!(det_i128(vec![]).unwrap(), 1);
    }

    #[test]
    fn rational_det_agrees_with_bareiss() {
        let ints = [[3i64, -1, 4], [1, 5, -9], [2, 6, 5]];
        let q: Vec<Vec<Scalar>> = ints.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let z: Vec<Vec<i128>> = ints.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        assert_eq!(rational_det(&q), int(det_i128(z).unwrap() as i64));
        let half = vec![vec![ratio(1, 2), int(0)], vec![int(0), ratio(1, 3)]];
        assert_eq!(rational_det(&half), ratio(1, 6));
    }

    #[test]
    fn basis_and_pivots() {
        let vs = [vec![1i64, 1, 0], vec![2, 2, 0], vec![0, 1, 1], vec![1, 2, 1]];
        let b = integer_basis(&vs).unwrap();
        assert_eq!(b.independent, vec![0, 2]);
        assert_eq!(b.rank(), 2);
        // Submatrix of the kept vectors on the pivot coordinates is nonsingular.
        let sub: Vec<Vec<i128>> =
            b.independent.iter().map(|&i| b.pivots.iter().map(|&c| vs[i][c] as i128).collect()).collect();
        assert_ne!(det_i128(sub).unwrap(), 0);
        assert_eq!(rational_rank(&vs.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>()), 2);
    }
}
