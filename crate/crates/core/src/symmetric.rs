//! The hollow symmetric and symmetric Monge polytopes.
//!
//! Both polytopes are simplices: every member is a unique convex combination
//! of the hatted `NESW(a×b)` (`a + b <= n`) and, in the symmetric case, the
//! hatted `HV(i)`. The coefficients are read off one anti-diagonal at a time,
//! which doubles as the membership test.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{Block, VertexLabel};
use crate::matrix::Matrix;
use crate::scalar::{int, Scalar};

/// Vertex labels of `HM_n` (`hollow`) or `SM_n`, hatted.
///
/// Order: `NESW(a×b)` by `a` then `b`, followed by `HV(1..=n)`.
pub fn symmetric_vertices(n: usize, hollow: bool) -> Result<Vec<VertexLabel>> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("symmetric families need n >= 2, got {n}")));
    }
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for a in 1..n {
        for b in 1..=n - a {
            out.push(VertexLabel::square(Block::Nesw { a, b }, n)?);
        }
    }
    if !hollow {
        for i in 1..=n {
            out.push(VertexLabel::square(Block::Hv { i }, n)?);
        }
    }
    Ok(out)
}

/// Coefficients of a matrix over the hatted symmetric generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricDecomposition {
    pub n: usize,
    pub hollow: bool,
    /// Coefficient of hatted `NESW(a×b)`, keyed by `(a, b)`, for all `a + b <= n`.
    pub lambda_ab: BTreeMap<(usize, usize), Scalar>,
    /// Coefficient of hatted `HV(i)` at index `i - 1`; all zero when hollow.
    pub lambda_i: Vec<Scalar>,
}

impl SymmetricDecomposition {
    pub fn coefficient_sum(&self) -> Scalar {
        self.lambda_ab.values().chain(&self.lambda_i).fold(Scalar::zero(), |acc, x| acc + x)
    }

    pub fn lambda(&self, a: usize, b: usize) -> &Scalar {
        &self.lambda_ab[&(a, b)]
    }

    /// The matrix `Σ λ_ab · hat-NESW(a×b) + Σ λ_i · hat-HV(i)`.
    pub fn reconstruct(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n).expect("n >= 1");
        for (&(a, b), lam) in &self.lambda_ab {
            add_hatted(&mut m, Block::Nesw { a, b }, lam);
        }
        for (i, lam) in self.lambda_i.iter().enumerate() {
            add_hatted(&mut m, Block::Hv { i: i + 1 }, lam);
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        use crate::scalar::format_scalar;
        let ab: Vec<_> = self
            .lambda_ab
            .iter()
            .map(|(&(a, b), v)| serde_json::json!({ "a": a, "b": b, "lambda": format_scalar(v) }))
            .collect();
        serde_json::json!({
            "n": self.n,
            "hollow": self.hollow,
            "lambda_ab": ab,
            "lambda_i": self.lambda_i.iter().map(format_scalar).collect::<Vec<_>>(),
            "coefficient_sum": format_scalar(&self.coefficient_sum()),
        })
    }
}

/// `m += coef · hat(block)` on an `n × n` matrix.
fn add_hatted(m: &mut Matrix, block: Block, coef: &Scalar) {
    if coef.is_zero() {
        return;
    }
    let n = m.rows();
    let label = VertexLabel { block, rows: n, cols: n, normalized: true };
    let unit = coef / int(label.weight());
    for r in 1..=n {
        for c in 1..=n {
            let pat = label.pattern(r, c);
            if pat != 0 {
                let v = m.get(r, c) + &unit * int(pat);
                m.set(r, c, v);
            }
        }
    }
}

/// Recover the unique coefficients of `c` over the hatted generators of
/// `HM_n` (`hollow`) or `SM_n`.
///
/// Diagonal coefficients are peeled first (`λ_i = n · c_ii`, since the hatted
/// `HV(i)` has `1/n` on its diagonal and no other generator touches it), then
/// anti-diagonals `a + b = n, n-1, ..., 2` with `λ_ab = 2ab · c'[a][n-b+1]`.
/// Succeeds iff every coefficient is nonnegative and the residual vanishes,
/// i.e. iff `c` lies in the cone spanned by the generators. The coefficients
/// sum to one iff the entries of `c` do.
pub fn decompose_symmetric(c: &Matrix, hollow: bool) -> Result<SymmetricDecomposition> {
    if !c.is_square() {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", c.rows(), c.cols())));
    }
    let n = c.rows();
    let mut residual = c.clone();
    let mut lambda_i = vec![Scalar::zero(); n];
    if !hollow {
        for (i, slot) in lambda_i.iter_mut().enumerate() {
            let i = i + 1;
            let lam = residual.get(i, i) * int(n as i64);
            if lam.is_negative() {
                return Err(Error::NotInPolytope { row: i, col: i });
            }
            add_hatted(&mut residual, Block::Hv { i }, &-&lam);
            *slot = lam;
        }
    }
    let mut lambda_ab = BTreeMap::new();
    for s in (2..=n).rev() {
        for a in 1..s {
            let b = s - a;
            let (row, col) = (a, n - b + 1);
            let lam = residual.get(row, col) * int(2 * (a * b) as i64);
            if lam.is_negative() {
                return Err(Error::NotInPolytope { row, col });
            }
            add_hatted(&mut residual, Block::Nesw { a, b }, &-&lam);
            lambda_ab.insert((a, b), lam);
        }
    }
    for r in 1..=n {
        for col in 1..=n {
            if !residual.get(r, col).is_zero() {
                return Err(Error::NotInPolytope { row: r, col });
            }
        }
    }
    Ok(SymmetricDecomposition { n, hollow, lambda_ab, lambda_i })
}

/// Membership in `HM_n` / `SM_n`: decomposable with coefficients summing to one.
pub fn in_polytope(c: &Matrix, hollow: bool) -> bool {
    decompose_symmetric(c, hollow).is_ok_and(|d| d.coefficient_sum() == int(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MetricFace {
    InteriorMetricFace,
    BoundaryMetricFace,
    OffMetricFace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricStatus {
    pub face: MetricFace,
    pub witness: SymmetricDecomposition,
}

/// Position of a hollow member relative to the metric face, the face spanned
/// by the `NESW(a×b)` with `a + b = n`.
pub fn metric_face_status(c: &Matrix) -> Result<MetricStatus> {
    let witness = decompose_symmetric(c, true)?;
    let n = witness.n;
    let off_face = witness.lambda_ab.iter().any(|(&(a, b), v)| a + b < n && !v.is_zero());
    let face = if off_face {
        MetricFace::OffMetricFace
    } else if witness.lambda_ab.iter().all(|(&(a, b), v)| a + b < n || v.is_positive()) {
        MetricFace::InteriorMetricFace
    } else {
        MetricFace::BoundaryMetricFace
    };
    Ok(MetricStatus { face, witness })
}

/// Direct check of the metric axioms on a hollow symmetric matrix: positive
/// off-diagonal distances and every triangle inequality.
pub fn is_true_metric(c: &Matrix) -> Result<bool> {
    if !c.is_square() {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", c.rows(), c.cols())));
    }
    if !c.is_hollow() {
        return Err(Error::Shape("matrix has a nonzero diagonal entry".into()));
    }
    if !c.is_symmetric() {
        return Err(Error::Shape("matrix is not symmetric".into()));
    }
    let n = c.rows();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            if !c.get(i, j).is_positive() {
                return Ok(false);
            }
            for k in 1..=n {
                if c.get(i, j) > &(c.get(i, k) + c.get(k, j)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::generators::generator;
    use crate::scalar::ratio;

    fn path_metric() -> Matrix {
        Matrix::from_rows(vec![
            vec![int(0), ratio(1, 8), ratio(2, 8)],
            vec![ratio(1, 8), int(0), ratio(1, 8)],
            vec![ratio(2, 8), ratio(1, 8), int(0)],
        ])
        .unwrap()
    }

    fn hat(block: Block, n: usize) -> Matrix {
        generator(&VertexLabel::square(block, n).unwrap()).unwrap()
    }

    #[test]
    fn vertex_lists() {
        let labels: Vec<_> = symmetric_vertices(3, true).unwrap().iter().map(|l| l.block).collect();
        assert_eq!(
            labels,
            vec![Block::Nesw { a: 1, b: 1 }, Block::Nesw { a: 1, b: 2 }, Block::Nesw { a: 2, b: 1 }]
        );
        assert_eq!(symmetric_vertices(2, true).unwrap().len(), 1);
        assert_eq!(symmetric_vertices(3, false).unwrap().len(), 6);
        assert!(matches!(symmetric_vertices(1, true), Err(Error::InvalidSize(_))));
        for n in 2..=8 {
            assert_eq!(symmetric_vertices(n, true).unwrap().len(), n * (n - 1) / 2);
            assert_eq!(symmetric_vertices(n, false).unwrap().len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn path_metric_decomposition() {
        let d = decompose_symmetric(&path_metric(), true).unwrap();
        assert_eq!(d.lambda(1, 2), &ratio(1, 2));
        assert_eq!(d.lambda(2, 1), &ratio(1, 2));
        assert!(d.lambda(1, 1).is_zero());
        assert!(d.coefficient_sum().is_one());
        assert_eq!(d.reconstruct(), path_metric());
    }

    #[test]
    fn vertex_decomposes_to_itself() {
        let d = decompose_symmetric(&hat(Block::Nesw { a: 1, b: 1 }, 2), true).unwrap();
        assert_eq!(d.lambda(1, 1), &int(1));
        assert_eq!(d.lambda_ab.len(), 1);
    }

    #[test]
    fn hv_diagonal_coefficient() {
        for n in 2..=5 {
            for i in 1..=n {
                let d = decompose_symmetric(&hat(Block::Hv { i }, n), false).unwrap();
                assert!(d.lambda_i[i - 1].is_one(), "HV({i}) on n={n}");
                assert!(d.coefficient_sum().is_one());
            }
        }
    }

    #[test]
    fn uniform_hollow_is_rejected() {
        let m = Matrix::from_fn(3, 3, |i, j| if i == j { Scalar::zero() } else { ratio(1, 6) }).unwrap();
        assert!(matches!(decompose_symmetric(&m, true), Err(Error::NotInPolytope { .. })));
        assert!(!in_polytope(&m, true));
    }

    #[test]
    fn shape_and_diagonal_errors() {
        let rect = Matrix::zeros(2, 3).unwrap();
        assert!(matches!(decompose_symmetric(&rect, true), Err(Error::Shape(_))));
        // A diagonal entry cannot be absorbed in the hollow family.
        let diag = hat(Block::Hv { i: 1 }, 3);
        assert!(matches!(decompose_symmetric(&diag, true), Err(Error::NotInPolytope { .. })));
        assert!(in_polytope(&diag, false));
    }

    #[test]
    fn metric_face_examples() {
        assert_eq!(metric_face_status(&path_metric()).unwrap().face, MetricFace::InteriorMetricFace);
        assert!(is_true_metric(&path_metric()).unwrap());

        let nesw12 = hat(Block::Nesw { a: 1, b: 2 }, 3);
        assert_eq!(metric_face_status(&nesw12).unwrap().face, MetricFace::BoundaryMetricFace);
        assert!(!is_true_metric(&nesw12).unwrap());

        let nesw11 = hat(Block::Nesw { a: 1, b: 1 }, 3);
        assert_eq!(metric_face_status(&nesw11).unwrap().face, MetricFace::OffMetricFace);
        assert!(!is_true_metric(&nesw11).unwrap());
    }

    #[test]
    fn true_metric_shape_errors() {
        let non_hollow = hat(Block::Hv { i: 2 }, 3);
        assert!(matches!(is_true_metric(&non_hollow), Err(Error::Shape(_))));
        let asym = Matrix::from_ints(&[[0, 1], [2, 0]]).unwrap();
        assert!(matches!(is_true_metric(&asym), Err(Error::Shape(_))));
    }
}
