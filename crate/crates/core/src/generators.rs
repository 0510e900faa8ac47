//! The six families of block matrices that span the Monge cones, and their
//! normalized ("hat") forms scaled onto the probability simplex.
//!
//! For a `p × q` matrix:
//!
//! * `NE(a×b)`: ones in the top-right `a × b` block.
//! * `SW(a×b)`: ones in the bottom-left `a × b` block.
//! * `HOR(i)`: ones along row `i`.
//! * `VER(j)`: ones along column `j`.
//! * `NESW(a×b) = NE(a×b) + SW(b×a)` (square, symmetric, hollow when `a+b <= n`).
//! * `HV(i) = HOR(i) + VER(i)` (square; entry `(i, i)` is 2).
//!
//! The hat forms divide by `ab`, `q`, `p`, `2ab`, `2n` respectively so the
//! entries sum to one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{int, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Block {
    Ne { a: usize, b: usize },
    Sw { a: usize, b: usize },
    Hor { i: usize },
    Ver { j: usize },
    Nesw { a: usize, b: usize },
    Hv { i: usize },
}

/// A generator together with its ambient shape and normalization flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexLabel {
    pub block: Block,
    pub rows: usize,
    pub cols: usize,
    pub normalized: bool,
}

impl VertexLabel {
    /// Build a label, checking the parameter ranges of its family.
    pub fn new(block: Block, rows: usize, cols: usize, normalized: bool) -> Result<Self> {
        let label = VertexLabel { block, rows, cols, normalized };
        label.validate()?;
        Ok(label)
    }

    /// Hatted label on an `n × n` square, the convention used by the
    /// symmetric families.
    pub fn square(block: Block, n: usize) -> Result<Self> {
        Self::new(block, n, n, true)
    }

    pub fn validate(&self) -> Result<()> {
        let (p, q) = (self.rows, self.cols);
        let bad = |msg: String| Err(Error::InvalidLabel(format!("{}: {msg}", self.block)));
        if p == 0 || q == 0 {
            return bad(format!("ambient shape {p}x{q} must be positive"));
        }
        match self.block {
            Block::Ne { a, b } | Block::Sw { a, b } => {
                if !(1..p).contains(&a) || !(1..q).contains(&b) {
                    return bad(format!("requires 1 <= a < {p} and 1 <= b < {q}"));
                }
            }
            Block::Hor { i } => {
                if !(1..=p).contains(&i) {
                    return bad(format!("requires 1 <= i <= {p}"));
                }
            }
            Block::Ver { j } => {
                if !(1..=q).contains(&j) {
                    return bad(format!("requires 1 <= j <= {q}"));
                }
            }
            Block::Nesw { a, b } => {
                if p != q {
                    return bad(format!("needs a square shape, got {p}x{q}"));
                }
                if a < 1 || b < 1 || a + b > p {
                    return bad(format!("requires a, b >= 1 and a + b <= {p}"));
                }
            }
            Block::Hv { i } => {
                if p != q {
                    return bad(format!("needs a square shape, got {p}x{q}"));
                }
                if !(1..=p).contains(&i) {
                    return bad(format!("requires 1 <= i <= {p}"));
                }
            }
        }
        Ok(())
    }

    /// Unnormalized integer entry at 1-based `(r, c)`: 0, 1, or 2.
    pub fn pattern(&self, r: usize, c: usize) -> i64 {
        let (p, q) = (self.rows, self.cols);
        let ne = |a: usize, b: usize| r <= a && c > q - b;
        let sw = |a: usize, b: usize| r > p - a && c <= b;
        match self.block {
            Block::Ne { a, b } => ne(a, b) as i64,
            Block::Sw { a, b } => sw(a, b) as i64,
            Block::Hor { i } => (r == i) as i64,
            Block::Ver { j } => (c == j) as i64,
            Block::Nesw { a, b } => ne(a, b) as i64 + sw(b, a) as i64,
            Block::Hv { i } => (r == i) as i64 + (c == i) as i64,
        }
    }

    /// Sum of the unnormalized entries, i.e. the hat scaling denominator.
    pub fn weight(&self) -> i64 {
        let (p, q) = (self.rows as i64, self.cols as i64);
        match self.block {
            Block::Ne { a, b } | Block::Sw { a, b } => (a * b) as i64,
            Block::Hor { .. } => q,
            Block::Ver { .. } => p,
            Block::Nesw { a, b } => 2 * (a * b) as i64,
            Block::Hv { .. } => 2 * p,
        }
    }

    /// Unnormalized pattern flattened row-major.
    pub fn pattern_vec(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for r in 1..=self.rows {
            for c in 1..=self.cols {
                v.push(self.pattern(r, c));
            }
        }
        v
    }

    pub fn with_normalized(self, normalized: bool) -> Self {
        VertexLabel { normalized, ..self }
    }
}

/// The matrix described by `label`; hat-normalized when `label.normalized`.
pub fn generator(label: &VertexLabel) -> Result<Matrix> {
    label.validate()?;
    let scale = if label.normalized { Scalar::new(1.into(), label.weight().into()) } else { int(1) };
    Matrix::from_fn(label.rows, label.cols, |r, c| int(label.pattern(r, c)) * &scale)
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Block::Ne { a, b } => write!(f, "NE({a}x{b})"),
            Block::Sw { a, b } => write!(f, "SW({a}x{b})"),
            Block::Hor { i } => write!(f, "HOR({i})"),
            Block::Ver { j } => write!(f, "VER({j})"),
            Block::Nesw { a, b } => write!(f, "NESW({a}x{b})"),
            Block::Hv { i } => write!(f, "HV({i})"),
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.normalized {
            write!(f, "hat-")?;
        }
        write!(f, "{}", self.block)
    }
}
