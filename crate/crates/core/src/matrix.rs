//! Dense exact matrices, the Monge test, and the shared JSON file format.

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, int, parse_scalar, Scalar};

/// A dense `rows × cols` grid of exact rationals.
///
/// Indexing through [`Matrix::get`] and [`Matrix::set`] is 1-based, row index
/// increasing downward. Storage is row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        Ok(Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::Shape(format!(
                "ragged rows: row {} has {} entries, expected {c}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.as_ref().iter().map(|&x| int(x)).collect()).collect())
    }

    /// Build from a function of the 1-based position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 1..=rows {
            for j in 1..=cols {
                m.set(i, j, f(i, j));
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 1-based position `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j), "index ({i}, {j}) out of range");
        &self.data[(i - 1) * self.cols + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j), "index ({i}, {j}) out of range");
        self.data[(i - 1) * self.cols + (j - 1)] = value;
    }

    /// Row-major view of all entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    /// Sum of all entries, written `|C|`.
    pub fn entry_sum(&self) -> Scalar {
        self.data.iter().fold(Scalar::zero(), |acc, x| acc + x)
    }

    pub fn scaled(&self, factor: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * factor).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 1..=self.cols {
            for i in 1..=self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (1..=self.rows).all(|i| (i + 1..=self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_hollow(&self) -> bool {
        self.is_square() && (1..=self.rows).all(|i| self.get(i, i).is_zero())
    }

    /// Entries as integers, if every entry is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        (1..=self.rows)
            .map(|i| {
                (1..=self.cols)
                    .map(|j| {
                        let x = self.get(i, j);
                        if x.is_integer() {
                            i64::try_from(x.to_integer()).ok()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Slack of the adjacent Monge inequality at `(i, j)`:
    /// `c[i][j+1] + c[i+1][j] - c[i][j] - c[i+1][j+1]`, nonnegative iff it holds.
    pub fn adjacent_slack(&self, i: usize, j: usize) -> Scalar {
        self.get(i, j + 1) + self.get(i + 1, j) - self.get(i, j) - self.get(i + 1, j + 1)
    }

    /// Monge test through adjacent 2×2 minors only, which is equivalent to
    /// the quadruple condition over all `i < I`, `j < J`.
    pub fn is_monge(&self) -> bool {
        (1..self.rows).all(|i| (1..self.cols).all(|j| !self.adjacent_slack(i, j).is_negative()))
    }

    /// All adjacent positions `(i, j)` whose 2×2 minor violates the Monge
    /// inequality, in row-major order.
    pub fn monge_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..self.rows {
            for j in 1..self.cols {
                if self.adjacent_slack(i, j).is_negative() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn ensure_monge(&self) -> Result<()> {
        match self.monge_violations().first() {
            Some(&(row, col)) => Err(Error::NotMonge { row, col }),
            None => Ok(()),
        }
    }

    fn check_same_shape(&self, other: &Matrix) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    /// Parse the shared JSON matrix document
    /// `{"rows": p, "cols": q, "entries": [[...], ...]}` where each entry is a
    /// JSON integer or a string `"a/b"`.
    pub fn from_json(value: &Value) -> Result<Matrix> {
        let obj = value.as_object().ok_or_else(|| Error::Parse("matrix document must be a JSON object".into()))?;
        let dim = |key: &str| -> Result<usize> {
            obj.get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| Error::Parse(format!("missing or non-integer {key:?}")))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let entries = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"entries\" array".into()))?;
        if entries.len() != rows {
            return Err(Error::Parse(format!("expected {rows} rows, found {}", entries.len())));
        }
        let mut parsed = Vec::with_capacity(rows);
        for (r, row) in entries.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::Parse(format!("row {} is not an array", r + 1)))?;
            if row.len() != cols {
                return Err(Error::Parse(format!("ragged row {}: {} entries, expected {cols}", r + 1, row.len())));
            }
            parsed.push(row.iter().map(parse_entry).collect::<Result<Vec<_>>>()?);
        }
        Matrix::from_rows(parsed)
    }

    pub fn from_json_str(text: &str) -> Result<Matrix> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&value)
    }

    /// Serialize in the shared format; integral entries become JSON integers
    /// when they fit in `i64`, everything else a `"a/b"` string.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (1..=self.rows)
            .map(|i| Value::Array((1..=self.cols).map(|j| entry_to_json(self.get(i, j))).collect()))
            .collect();
        json!({ "rows": self.rows, "cols": self.cols, "entries": entries })
    }
}

fn parse_entry(v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| Error::Parse(format!("entry {n} is not an integer; use a \"a/b\" string"))),
        Value::String(s) => parse_scalar(s),
        other => Err(Error::Parse(format!("entry {other} is neither an integer nor a rational string"))),
    }
}

fn entry_to_json(x: &Scalar) -> Value {
    if x.is_integer() {
        if let Ok(v) = i64::try_from(x.to_integer()) {
            return json!(v);
        }
    }
    Value::String(format_scalar(x))
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.check_same_shape(rhs);
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self.check_same_shape(rhs);
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{}", self.rows, self.cols, self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 1..=self.rows {
            if i > 1 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 1..=self.cols {
                if j > 1 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
