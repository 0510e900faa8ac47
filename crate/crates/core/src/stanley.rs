//! Stanley decomposition of the monoid of `2 × p` nonnegative integer Monge
//! matrices.
//!
//! Each subset `S ⊆ [p]` indexes one component
//! `base(S) + N[VER(1..p), step(S,1..p)]`, and every integer Monge matrix
//! lies in exactly one component with unique multiplicities. All three
//! ingredients come from the *ranking* matrix of `S`: the top row holds the
//! elements of `S` ascending, right-aligned; the bottom row holds the
//! complement descending, left-aligned. Every column then carries exactly one
//! nonzero label, and the labels are `1..=p`.

use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::int;

/// Largest `p` accepted by [`numerator_polynomial`].
pub const MAX_NUMERATOR_COLUMNS: usize = 20;

/// A `2 × p` matrix of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TwoRowMatrix {
    pub top: Vec<u64>,
    pub bottom: Vec<u64>,
}

impl TwoRowMatrix {
    pub fn zeros(p: usize) -> Self {
        TwoRowMatrix { top: vec![0; p], bottom: vec![0; p] }
    }

    pub fn cols(&self) -> usize {
        self.top.len()
    }

    pub fn sum(&self) -> u64 {
        self.top.iter().chain(&self.bottom).sum()
    }

    pub fn is_monge(&self) -> bool {
        (0..self.cols().saturating_sub(1))
            .all(|j| self.top[j] + self.bottom[j + 1] <= self.top[j + 1] + self.bottom[j])
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(2, self.cols(), |i, j| int((if i == 1 { self.top[j - 1] } else { self.bottom[j - 1] }) as i64))
            .expect("two rows and at least one column")
    }

    /// Requires two rows of nonnegative integers.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if m.rows() != 2 {
            return Err(Error::Shape(format!("expected a 2 x p matrix, got {} rows", m.rows())));
        }
        let row = |i: usize| {
            (1..=m.cols())
                .map(|j| {
                    let x = m.get(i, j);
                    if !x.is_integer() || x.is_negative() {
                        return Err(Error::Domain(format!("entry ({i},{j}) = {x} is not a nonnegative integer")));
                    }
                    x.to_integer().to_u64().ok_or_else(|| Error::Domain(format!("entry ({i},{j}) is too large")))
                })
                .collect::<Result<Vec<u64>>>()
        };
        Ok(TwoRowMatrix { top: row(1)?, bottom: row(2)? })
    }

    fn add_scaled(&mut self, other: &TwoRowMatrix, k: u64) {
        for (x, y) in self.top.iter_mut().zip(&other.top).chain(self.bottom.iter_mut().zip(&other.bottom)) {
            *x += k * y;
        }
    }
}

impl From<&TwoRowMatrix> for Matrix {
    fn from(m: &TwoRowMatrix) -> Matrix {
        m.to_matrix()
    }
}

/// A subset of the column labels `{1, ..., p}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ColumnSubset {
    pub p: usize,
    /// Sorted ascending, without repetition.
    pub members: Vec<usize>,
}

impl ColumnSubset {
    pub fn new(p: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if p == 0 {
            return Err(Error::InvalidSize("p must be at least 1".into()));
        }
        if let Some(&bad) = members.iter().find(|&&x| x == 0 || x > p) {
            return Err(Error::Domain(format!("{bad} is not in [1, {p}]")));
        }
        Ok(ColumnSubset { p, members })
    }

    /// Subset whose members are the set bits of `mask` (bit `k` is label `k+1`).
    pub fn from_mask(p: usize, mask: u64) -> Self {
        ColumnSubset { p, members: (0..p).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect() }
    }

    pub fn complement(&self) -> Vec<usize> {
        (1..=self.p).filter(|x| self.members.binary_search(x).is_err()).collect()
    }

    /// All `2^p` subsets in mask order.
    pub fn all(p: usize) -> impl Iterator<Item = ColumnSubset> {
        (0..1u64 << p).map(move |mask| ColumnSubset::from_mask(p, mask))
    }
}

impl fmt::Display for ColumnSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// One component of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StanleyComponent {
    pub subset: ColumnSubset,
    pub ranking: TwoRowMatrix,
    pub base: TwoRowMatrix,
    /// `steps[j-1]` is the binary generator with ones where the ranking
    /// label exceeds `p - j`.
    pub steps: Vec<TwoRowMatrix>,
}

fn ranking(subset: &ColumnSubset) -> TwoRowMatrix {
    let p = subset.p;
    let mut m = TwoRowMatrix::zeros(p);
    let offset = p - subset.members.len();
    for (k, &s) in subset.members.iter().enumerate() {
        m.top[offset + k] = s as u64;
    }
    for (k, s) in subset.complement().into_iter().rev().enumerate() {
        m.bottom[k] = s as u64;
    }
    m
}

/// Replace the i-th run of consecutive integers (ascending) by `i`; zeros stay.
fn collapse_runs(row: &[u64]) -> Vec<u64> {
    let mut values: Vec<u64> = row.iter().copied().filter(|&x| x > 0).collect();
    values.sort_unstable();
    let mut run_of = std::collections::HashMap::new();
    let mut run = 0;
    for (k, &v) in values.iter().enumerate() {
        if k == 0 || v != values[k - 1] + 1 {
            run += 1;
        }
        run_of.insert(v, run);
    }
    row.iter().map(|x| if *x == 0 { 0 } else { run_of[x] }).collect()
}

fn base_point(ranking: &TwoRowMatrix) -> TwoRowMatrix {
    // An empty top row has minimum +inf, so the whole bottom row is cleared.
    let top_min = ranking.top.iter().copied().filter(|&x| x > 0).min().unwrap_or(u64::MAX);
    let bottom: Vec<u64> = ranking.bottom.iter().map(|&x| if x < top_min { 0 } else { x }).collect();
    TwoRowMatrix { top: collapse_runs(&ranking.top), bottom: collapse_runs(&bottom) }
}

fn step(ranking: &TwoRowMatrix, j: usize) -> TwoRowMatrix {
    let p = ranking.cols() as u64;
    let threshold = p - j as u64;
    let bin = |row: &[u64]| row.iter().map(|&x| u64::from(x > threshold)).collect();
    TwoRowMatrix { top: bin(&ranking.top), bottom: bin(&ranking.bottom) }
}

pub fn component(subset: &ColumnSubset) -> StanleyComponent {
    let ranking = ranking(subset);
    let base = base_point(&ranking);
    let steps = (1..=subset.p).map(|j| step(&ranking, j)).collect();
    StanleyComponent { subset: subset.clone(), ranking, base, steps }
}

/// Size `|base(S)|` without building the whole component.
pub fn base_size(subset: &ColumnSubset) -> u64 {
    base_point(&ranking(subset)).sum()
}

/// `C = base(S) + Σ strips[j]·VER(j) + Σ steps[j]·step(S, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub subset: ColumnSubset,
    /// Multiplicities of the vertical strips `VER(1..p)`.
    pub strips: Vec<u64>,
    /// Multiplicities of `step(S, 1..p)`.
    pub steps: Vec<u64>,
}

impl CanonicalForm {
    /// Grading of the reconstructed matrix: `|base| + 2Σ strips + Σ j·steps[j]`.
    pub fn grading(&self) -> u64 {
        base_size(&self.subset)
            + 2 * self.strips.iter().sum::<u64>()
            + self.steps.iter().enumerate().map(|(k, &b)| (k as u64 + 1) * b).sum::<u64>()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.subset.p,
            "S": self.subset.members,
            "a": self.strips,
            "b": self.steps,
        })
    }

    /// Inverse of [`CanonicalForm::to_json`].
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let field = |key: &str| value.get(key).ok_or_else(|| Error::Parse(format!("missing {key:?}")));
        let numbers = |key: &str| -> Result<Vec<u64>> {
            field(key)?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{key:?} must be an array")))?
                .iter()
                .map(|v| v.as_u64().ok_or_else(|| Error::Parse(format!("{key:?} entries must be nonnegative integers"))))
                .collect()
        };
        let p = field("p")?.as_u64().ok_or_else(|| Error::Parse("\"p\" must be a nonnegative integer".into()))? as usize;
        let subset = ColumnSubset::new(p, numbers("S")?.into_iter().map(|x| x as usize))?;
        let form = CanonicalForm { subset, strips: numbers("a")?, steps: numbers("b")? };
        if form.strips.len() != p || form.steps.len() != p {
            return Err(Error::Shape(format!("a form for p = {p} needs {p} entries in \"a\" and \"b\"")));
        }
        Ok(form)
    }
}

pub fn canonical_form(c: &Matrix) -> Result<CanonicalForm> {
    let m = TwoRowMatrix::from_matrix(c)?;
    c.ensure_monge()?;
    canonical_form_of(&m)
}

/// Canonical form of a nonnegative integer Monge matrix.
pub fn canonical_form_of(c: &TwoRowMatrix) -> Result<CanonicalForm> {
    let p = c.cols();
    if p == 0 {
        return Err(Error::InvalidSize("p must be at least 1".into()));
    }
    if !c.is_monge() {
        return Err(Error::NotMonge { row: 1, col: (0..p - 1).find(|&j| c.top[j] + c.bottom[j + 1] > c.top[j + 1] + c.bottom[j]).unwrap_or(0) + 1 });
    }
    // Strip the column minima.
    let strips: Vec<u64> = (0..p).map(|j| c.top[j].min(c.bottom[j])).collect();
    let reduced = TwoRowMatrix {
        top: (0..p).map(|j| c.top[j] - strips[j]).collect(),
        bottom: (0..p).map(|j| c.bottom[j] - strips[j]).collect(),
    };
    // Columns with two zeros get labels 1..z in the bottom row, right to left.
    let mut labels = TwoRowMatrix::zeros(p);
    let mut next = 1u64;
    for j in (0..p).rev() {
        if reduced.top[j] == 0 && reduced.bottom[j] == 0 {
            labels.bottom[j] = next;
            next += 1;
        }
    }
    // Remaining entries in increasing order. Ties: top row left to right,
    // then bottom row right to left.
    let mut entries: Vec<(u64, u8, usize, usize)> = Vec::new();
    for j in 0..p {
        if reduced.top[j] > 0 {
            entries.push((reduced.top[j], 0, j, j));
        }
        if reduced.bottom[j] > 0 {
            entries.push((reduced.bottom[j], 1, p - 1 - j, j));
        }
    }
    entries.sort_unstable();
    for (_, row, _, j) in entries {
        if row == 0 {
            labels.top[j] = next;
        } else {
            labels.bottom[j] = next;
        }
        next += 1;
    }
    let subset = ColumnSubset::new(p, labels.top.iter().filter(|&&x| x > 0).map(|&x| x as usize))?;
    let comp = component(&subset);
    if comp.ranking != labels {
        return Err(Error::Internal(format!("ordering of {c:?} does not match the ranking of {subset}")));
    }
    // Subtract the base point, then read off step multiplicities along the
    // labels: position with label i is covered by step(S, j) iff j >= p-i+1.
    let value_at = |m: &TwoRowMatrix, label: u64| -> i128 {
        let j = (0..p).find(|&j| comp.ranking.top[j] == label || comp.ranking.bottom[j] == label).expect("labels are 1..=p");
        let v = if comp.ranking.top[j] == label { m.top[j] } else { m.bottom[j] };
        let b = if comp.ranking.top[j] == label { comp.base.top[j] } else { comp.base.bottom[j] };
        v as i128 - b as i128
    };
    let mut steps = vec![0u64; p];
    let mut prev = 0i128;
    for label in 1..=p as u64 {
        let cur = value_at(&reduced, label);
        let diff = cur - prev;
        if diff < 0 {
            return Err(Error::Internal(format!("negative step multiplicity while decomposing {c:?}")));
        }
        steps[p - label as usize] = diff as u64;
        prev = cur;
    }
    let form = CanonicalForm { subset, strips, steps };
    if reconstruct_of(&form) != *c {
        return Err(Error::Internal(format!("canonical form of {c:?} does not reconstruct it")));
    }
    Ok(form)
}

pub fn reconstruct_of(form: &CanonicalForm) -> TwoRowMatrix {
    let comp = component(&form.subset);
    let mut m = comp.base.clone();
    for (j, &a) in form.strips.iter().enumerate() {
        m.top[j] += a;
        m.bottom[j] += a;
    }
    for (g, &b) in comp.steps.iter().zip(&form.steps) {
        m.add_scaled(g, b);
    }
    m
}

pub fn reconstruct(form: &CanonicalForm) -> Result<Matrix> {
    let p = form.subset.p;
    if form.strips.len() != p || form.steps.len() != p {
        return Err(Error::Shape(format!("a form for p = {p} needs {p} strip and {p} step multiplicities")));
    }
    Ok(reconstruct_of(form).to_matrix())
}

/// Coefficients of `Σ_S t^{|base(S)|}`.
pub fn numerator_polynomial(p: usize) -> Result<Vec<u64>> {
    if p == 0 {
        return Err(Error::InvalidSize("p must be at least 1".into()));
    }
    if p > MAX_NUMERATOR_COLUMNS {
        return Err(Error::ResourceLimit(format!("numerator polynomial supports p <= {MAX_NUMERATOR_COLUMNS}, got {p}")));
    }
    let mut coeffs: Vec<u64> = Vec::new();
    for subset in ColumnSubset::all(p) {
        let k = base_size(&subset) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] += 1;
    }
    Ok(coeffs)
}

/// Young diagram whose diagonals have the lengths recorded in a base point:
/// the i-th largest top entry is the i-th diagonal from the main one
/// rightward, the i-th largest bottom entry the i-th subdiagonal downward.
pub fn delta_to_partition(base: &TwoRowMatrix) -> Result<Vec<usize>> {
    let mut top: Vec<usize> = base.top.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect();
    let mut bottom: Vec<usize> = base.bottom.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect();
    top.sort_unstable_by(|a, b| b.cmp(a));
    bottom.sort_unstable_by(|a, b| b.cmp(a));
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (k, &len) in top.iter().enumerate() {
        cells.extend((0..len).map(|t| (t, k + t)));
    }
    for (k, &len) in bottom.iter().enumerate() {
        cells.extend((0..len).map(|t| (k + 1 + t, t)));
    }
    let rows = cells.iter().map(|&(r, _)| r + 1).max().unwrap_or(0);
    let mut parts = vec![0usize; rows];
    for &(r, _) in &cells {
        parts[r] += 1;
    }
    let shape_ok = parts.windows(2).all(|w| w[0] >= w[1])
        && parts.iter().all(|&x| x > 0)
        && cells.iter().all(|&(r, c)| c < parts[r]);
    if !shape_ok {
        return Err(Error::Domain(format!("{base:?} does not describe a Young diagram")));
    }
    Ok(parts)
}

/// Largest hook `λ_1 + λ'_1 - 1` of a partition (0 when empty).
pub fn max_hook(partition: &[usize]) -> usize {
    match partition.first() {
        Some(&first) => first + partition.len() - 1,
        None => 0,
    }
}
