//! Graded lattice-point counts of integer Monge matrices.
//!
//! Three families are graded:
//! * `HM(n)`: hollow symmetric `n × n`, graded by half the entry sum
//!   (the sum over the strict upper triangle);
//! * `SM(n)`: symmetric with even diagonal entries, graded by half the entry sum;
//! * `MM(p, q)`: all `p × q` matrices, graded by the entry sum.
//!
//! Counts come either from exhaustive enumeration or from the rational
//! generating functions `N(t) / Π(1 - t^{p_i})`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, Scalar};
use crate::stanley::numerator_polynomial;

/// Default largest grading accepted by [`brute_force_count`].
pub const DEFAULT_MAX_BRUTE_K: u64 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "UPPERCASE")]
pub enum CountFamily {
    Hm { n: usize },
    Sm { n: usize },
    Mm { p: usize, q: usize },
}

impl fmt::Display for CountFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountFamily::Hm { n } => write!(f, "HM({n})"),
            CountFamily::Sm { n } => write!(f, "SM({n})"),
            CountFamily::Mm { p, q } => write!(f, "MM({p},{q})"),
        }
    }
}

impl CountFamily {
    fn validate(self) -> Result<()> {
        let ok = match self {
            CountFamily::Hm { n } | CountFamily::Sm { n } => n >= 2,
            CountFamily::Mm { p, q } => p >= 1 && q >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSize(format!("{self} is not a valid family")))
        }
    }

    /// Number of free entries, the part count of the ambient compositions.
    pub fn free_entries(self) -> usize {
        match self {
            CountFamily::Hm { n } => n * (n - 1) / 2,
            CountFamily::Sm { n } => n * (n + 1) / 2,
            CountFamily::Mm { p, q } => p * q,
        }
    }

    fn shape(self) -> (usize, usize) {
        match self {
            CountFamily::Hm { n } | CountFamily::Sm { n } => (n, n),
            CountFamily::Mm { p, q } => (p, q),
        }
    }
}

/// How a cell is filled during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    /// Any value, costing the value.
    Free,
    /// Even values `2u`, costing `u`.
    EvenDiagonal,
    /// Always zero.
    Zero,
    /// Copy of the transposed cell.
    Mirror,
}

struct Enumerator {
    rows: usize,
    cols: usize,
    kinds: Vec<Cell>,
    last_free: usize,
}

impl Enumerator {
    fn new(family: CountFamily) -> Self {
        let (rows, cols) = family.shape();
        let kinds: Vec<Cell> = (0..rows * cols)
            .map(|idx| {
                let (i, j) = (idx / cols, idx % cols);
                match family {
                    CountFamily::Mm { .. } => Cell::Free,
                    CountFamily::Hm { .. } if i == j => Cell::Zero,
                    CountFamily::Sm { .. } if i == j => Cell::EvenDiagonal,
                    _ if j < i => Cell::Mirror,
                    _ => Cell::Free,
                }
            })
            .collect();
        let last_free = kinds.iter().rposition(|k| matches!(k, Cell::Free | Cell::EvenDiagonal)).expect("some free cell");
        Enumerator { rows, cols, kinds, last_free }
    }

    fn minor_ok(&self, grid: &[u64], idx: usize) -> bool {
        let (i, j) = (idx / self.cols, idx % self.cols);
        if i == 0 || j == 0 {
            return true;
        }
        let at = |r: usize, c: usize| grid[r * self.cols + c];
        at(i - 1, j - 1) + at(i, j) <= at(i - 1, j) + at(i, j - 1)
    }

    fn count(&self, grid: &mut Vec<u64>, idx: usize, budget: u64) -> u64 {
        if idx == grid.len() {
            return u64::from(budget == 0);
        }
        let candidates: Vec<(u64, u64)> = match self.kinds[idx] {
            Cell::Zero => vec![(0, 0)],
            Cell::Mirror => {
                let (i, j) = (idx / self.cols, idx % self.cols);
                vec![(grid[j * self.cols + i], 0)]
            }
            Cell::Free if idx == self.last_free => vec![(budget, budget)],
            Cell::EvenDiagonal if idx == self.last_free => vec![(2 * budget, budget)],
            Cell::Free => (0..=budget).map(|v| (v, v)).collect(),
            Cell::EvenDiagonal => (0..=budget).map(|u| (2 * u, u)).collect(),
        };
        let mut total = 0;
        for (value, cost) in candidates {
            grid[idx] = value;
            if self.minor_ok(grid, idx) {
                total += self.count(grid, idx + 1, budget - cost);
            }
        }
        grid[idx] = 0;
        total
    }

    fn count_all(&self, k: u64) -> u64 {
        // Split on the first free cell.
        let first = self.kinds.iter().position(|c| matches!(c, Cell::Free | Cell::EvenDiagonal)).expect("some free cell");
        if first == self.last_free {
            let mut grid = vec![0u64; self.rows * self.cols];
            return self.count(&mut grid, 0, k);
        }
        (0..=k)
            .into_par_iter()
            .map(|cost| {
                let mut grid = vec![0u64; self.rows * self.cols];
                let value = if self.kinds[first] == Cell::EvenDiagonal { 2 * cost } else { cost };
                grid[first] = value;
                // Cells before the first free one are forced zeros.
                self.count(&mut grid, first + 1, k - cost)
            })
            .sum()
    }
}

/// Exhaustive count of the integer Monge matrices of `family` at grading `k`.
pub fn brute_force_count(family: CountFamily, k: u64) -> Result<u64> {
    brute_force_count_with(family, k, DEFAULT_MAX_BRUTE_K)
}

pub fn brute_force_count_with(family: CountFamily, k: u64, max_k: u64) -> Result<u64> {
    family.validate()?;
    let small = match family {
        CountFamily::Hm { n } | CountFamily::Sm { n } => n <= 4,
        CountFamily::Mm { p, q } => p * q <= 9,
    };
    if !small {
        return Err(Error::ResourceLimit(format!("brute-force counting of {family} is limited to n <= 4 or pq <= 9")));
    }
    if k > max_k {
        return Err(Error::ResourceLimit(format!("brute-force counting is limited to k <= {max_k}, got {k}")));
    }
    Ok(Enumerator::new(family).count_all(k))
}

/// `N(t) / Π(1 - t^{p_i})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesSpec {
    pub numerator: Vec<u64>,
    pub denominator_exponents: Vec<u64>,
}

impl SeriesSpec {
    pub fn new(numerator: Vec<u64>, denominator_exponents: Vec<u64>) -> Result<Self> {
        if denominator_exponents.contains(&0) {
            return Err(Error::Domain("denominator exponents must be positive".into()));
        }
        Ok(SeriesSpec { numerator, denominator_exponents })
    }

    pub fn numerator_at_one(&self) -> BigInt {
        self.numerator.iter().map(|&c| BigInt::from(c)).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "numerator": self.numerator,
            "denominator_exponents": self.denominator_exponents,
        })
    }
}

/// Products `ab` over `a, b >= 1` with `a + b <= n`, ordered by `a` then `b`.
fn block_exponents(n: usize) -> Vec<u64> {
    (1..n).flat_map(|a| (1..=n - a).map(move |b| (a * b) as u64)).collect()
}

pub fn series_spec(family: CountFamily) -> Result<SeriesSpec> {
    family.validate()?;
    match family {
        CountFamily::Hm { n } => SeriesSpec::new(vec![1], block_exponents(n)),
        CountFamily::Sm { n } => {
            let mut exps = block_exponents(n);
            exps.extend(std::iter::repeat_n(n as u64, n));
            SeriesSpec::new(vec![1], exps)
        }
        CountFamily::Mm { p: 2, q } => {
            let mut exps = vec![2u64; q];
            exps.extend(1..=q as u64);
            SeriesSpec::new(numerator_polynomial(q)?, exps)
        }
        CountFamily::Mm { .. } => {
            Err(Error::Unsupported(format!("no generating function is known for {family}; only two-row shapes have one")))
        }
    }
}

/// `f_0..=f_K` of the series, by one prefix pass per denominator factor.
pub fn coefficients(spec: &SeriesSpec, max_k: usize) -> Vec<BigInt> {
    let mut f: Vec<BigInt> = (0..=max_k).map(|k| BigInt::from(spec.numerator.get(k).copied().unwrap_or(0))).collect();
    for &p in &spec.denominator_exponents {
        let p = p as usize;
        for k in p..=max_k {
            let prev = f[k - p].clone();
            f[k] += prev;
        }
    }
    f
}

/// Leading coefficient of `f_k ~ c·k^{m-1}` with `c = N(1) / ((m-1)! Π p_i)`.
pub fn asymptotic_leading(spec: &SeriesSpec) -> Result<Scalar> {
    let m = spec.denominator_exponents.len();
    let n1 = spec.numerator_at_one();
    if m == 0 || n1.is_zero() {
        return Err(Error::Hypothesis("t = 1 must be a root of the denominator and not of the numerator".into()));
    }
    let prod: BigInt = spec.denominator_exponents.iter().map(|&p| BigInt::from(p)).product();
    Ok(Scalar::new(n1, factorial(m as u64 - 1) * prod))
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `D^{(r)}(1)` for a polynomial given by its coefficients.
fn derivative_at_one(poly: &[BigInt], r: usize) -> BigInt {
    poly.iter()
        .enumerate()
        .skip(r)
        .map(|(d, c)| c * (d + 1 - r..=d).fold(BigInt::one(), |acc, x| acc * BigInt::from(x)))
        .sum()
}

/// The same leading coefficient, computed from the general form
/// `(-1)^m m N(1) / D^{(m)}(1)` after expanding `D(t)` and checking that
/// `t = 1` is a root of multiplicity exactly `m`.
pub fn asymptotic_leading_by_derivative(spec: &SeriesSpec) -> Result<Scalar> {
    let m = spec.denominator_exponents.len();
    let n1 = spec.numerator_at_one();
    if m == 0 || n1.is_zero() {
        return Err(Error::Hypothesis("t = 1 must be a root of the denominator and not of the numerator".into()));
    }
    let mut denom = vec![BigInt::one()];
    for &p in &spec.denominator_exponents {
        let mut factor = vec![BigInt::zero(); p as usize + 1];
        factor[0] = BigInt::one();
        factor[p as usize] = -BigInt::one();
        denom = poly_mul(&denom, &factor);
    }
    if (0..m).any(|r| !derivative_at_one(&denom, r).is_zero()) {
        return Err(Error::Hypothesis("t = 1 has multiplicity below the number of factors".into()));
    }
    let dm = derivative_at_one(&denom, m);
    let sign = if m.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    Ok(Scalar::new(sign * BigInt::from(m) * n1, dm))
}

/// Number of ways to write `k` as an ordered sum of `m` nonnegative integers.
pub fn weak_composition_count(k: u64, m: u64) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::InvalidSize("weak compositions need at least one part".into()));
    }
    Ok(binomial(k + m - 1, m - 1))
}

/// `f_k` over the number of all (not necessarily Monge) matrices of the
/// family at grading `k`.
pub fn volume_ratio_estimate(family: CountFamily, k: u64) -> Result<Scalar> {
    let spec = series_spec(family)?;
    let k_usize = usize::try_from(k).map_err(|_| Error::ResourceLimit(format!("k = {k} is too large")))?;
    let fk = coefficients(&spec, k_usize).pop().expect("k + 1 coefficients");
    let ambient = weak_composition_count(k, family.free_entries() as u64)?;
    Ok(Scalar::new(fk, ambient))
}

/// Same ratio from a brute-force count, for families without a series.
pub fn brute_force_ratio(family: CountFamily, k: u64) -> Result<Scalar> {
    let count = brute_force_count(family, k)?;
    Ok(Scalar::new(BigInt::from(count), weak_composition_count(k, family.free_entries() as u64)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use num_traits::ToPrimitive;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_count(CountFamily::Hm { n: 3 }, 1).unwrap(), 1);
        assert_eq!(brute_force_count(CountFamily::Mm { p: 2, q: 2 }, 2).unwrap(), 7);
        for family in [CountFamily::Hm { n: 4 }, CountFamily::Sm { n: 3 }, CountFamily::Mm { p: 3, q: 3 }] {
            assert_eq!(brute_force_count(family, 0).unwrap(), 1);
        }
        assert!(matches!(brute_force_count(CountFamily::Hm { n: 5 }, 1), Err(Error::ResourceLimit(_))));
        assert!(matches!(brute_force_count(CountFamily::Mm { p: 2, q: 5 }, 1), Err(Error::ResourceLimit(_))));
        assert!(matches!(brute_force_count(CountFamily::Mm { p: 2, q: 2 }, 100), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn specs() {
        let hm3 = series_spec(CountFamily::Hm { n: 3 }).unwrap();
        assert_eq!((hm3.numerator.clone(), hm3.denominator_exponents.clone()), (vec![1], vec![1, 2, 2]));
        let sm3 = series_spec(CountFamily::Sm { n: 3 }).unwrap();
        assert_eq!(sm3.denominator_exponents, vec![1, 2, 2, 3, 3, 3]);
        let mm22 = series_spec(CountFamily::Mm { p: 2, q: 2 }).unwrap();
        assert_eq!((mm22.numerator.clone(), mm22.denominator_exponents.clone()), (vec![1, 1, 2], vec![2, 2, 1, 2]));
        assert!(matches!(series_spec(CountFamily::Mm { p: 3, q: 3 }), Err(Error::Unsupported(_))));
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(ints(&coefficients(&series_spec(CountFamily::Hm { n: 3 }).unwrap(), 4)), vec![1, 1, 3, 3, 6]);
        assert_eq!(ints(&coefficients(&series_spec(CountFamily::Mm { p: 2, q: 2 }).unwrap(), 2)), vec![1, 2, 7]);
        assert_eq!(ints(&coefficients(&SeriesSpec::new(vec![1], vec![1]).unwrap(), 5)), vec![1; 6]);
    }

    #[test]
    fn leading_terms() {
        let hm3 = series_spec(CountFamily::Hm { n: 3 }).unwrap();
        let mm22 = series_spec(CountFamily::Mm { p: 2, q: 2 }).unwrap();
        let geo = SeriesSpec::new(vec![1], vec![1]).unwrap();
        assert_eq!(asymptotic_leading(&hm3).unwrap(), ratio(1, 8));
        assert_eq!(asymptotic_leading(&mm22).unwrap(), ratio(1, 12));
        assert_eq!(asymptotic_leading(&geo).unwrap(), int(1));
        for spec in [hm3, mm22, geo] {
            assert_eq!(asymptotic_leading_by_derivative(&spec).unwrap(), asymptotic_leading(&spec).unwrap());
        }
        let vanishing = SeriesSpec::new(vec![1, 0, 0], vec![1]).unwrap();
        assert!(asymptotic_leading(&vanishing).is_ok());
        assert!(matches!(asymptotic_leading(&SeriesSpec { numerator: vec![], denominator_exponents: vec![1] }), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn compositions_and_ratios() {
        assert_eq!(weak_composition_count(2, 4).unwrap(), BigInt::from(10));
        assert_eq!(weak_composition_count(0, 7).unwrap(), BigInt::from(1));
        assert_eq!(weak_composition_count(4, 3).unwrap(), BigInt::from(15));
        assert_eq!(volume_ratio_estimate(CountFamily::Hm { n: 3 }, 4).unwrap(), ratio(2, 5));
        assert_eq!(volume_ratio_estimate(CountFamily::Mm { p: 2, q: 2 }, 2).unwrap(), ratio(7, 10));
        assert_eq!(volume_ratio_estimate(CountFamily::Sm { n: 3 }, 0).unwrap(), int(1));
    }
}
