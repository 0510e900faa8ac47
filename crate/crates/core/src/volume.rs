//! Exact volumes of Monge polytopes.
//!
//! The generic polytope is triangulated by recursive pulling: each face is
//! coned from its smallest vertex over the facets of the face that miss it.
//! Instead of materializing simplices, every face `F` carries its *relative
//! measure*: its volume divided by the volume of a reference simplex spanned
//! by a fixed affine basis of `F`. Relative measures only involve integer
//! determinants of vertex patterns, so the recursion stays exact and cheap,
//! and the memo is keyed by the face's vertex set.
//!
//! Volumes are reported in an affine chart of the hyperplane "entries sum to
//! one" (see [`Family::chart`]); the normalized volume is the ratio to the
//! ambient probability simplex in the same chart.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{generator, VertexLabel};
use crate::generic::{GenericPolytope, DEFAULT_MAX_CELLS};
use crate::linalg::{det_i128, integer_basis, rational_det};
use crate::matrix::Matrix;
use crate::scalar::{big, factorial, format_scalar, int, ratio, superfactorial, Scalar};
use crate::symmetric::symmetric_vertices;
use crate::vertex_set::VertexSet;

/// Polytope family for volume computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "UPPERCASE")]
pub enum Family {
    Generic { p: usize, q: usize },
    Hollow { n: usize },
    Symmetric { n: usize },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Generic { p, q } => write!(f, "GENERIC({p},{q})"),
            Family::Hollow { n } => write!(f, "HOLLOW({n})"),
            Family::Symmetric { n } => write!(f, "SYMMETRIC({n})"),
        }
    }
}

impl Family {
    fn validate(self) -> Result<()> {
        match self {
            Family::Generic { p, q } if p < 2 || q < 2 => {
                Err(Error::InvalidSize(format!("generic family needs p, q >= 2, got {p}x{q}")))
            }
            Family::Hollow { n } if n < 3 => {
                Err(Error::InvalidSize(format!("hollow family needs n >= 3 for a full-dimensional simplex, got {n}")))
            }
            Family::Symmetric { n } if n < 2 => Err(Error::InvalidSize(format!("symmetric family needs n >= 2, got {n}"))),
            _ => Ok(()),
        }
    }

    /// Free matrix positions of the chart, 1-based, in chart order. The last
    /// free position of the family is dropped.
    ///
    /// * generic: all entries row-major, dropping `(p, q)`;
    /// * hollow: strictly upper triangle row-major, dropping `(n-1, n)`;
    /// * symmetric: upper triangle with diagonal, dropping `(n, n)`.
    pub fn chart(self) -> Vec<(usize, usize)> {
        let mut cells: Vec<(usize, usize)> = match self {
            Family::Generic { p, q } => (1..=p).flat_map(|i| (1..=q).map(move |j| (i, j))).collect(),
            Family::Hollow { n } => (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect(),
            Family::Symmetric { n } => (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect(),
        };
        cells.pop();
        cells
    }

    /// Chart dimension.
    pub fn dim(self) -> usize {
        self.chart().len()
    }

    pub fn chart_point(self, m: &Matrix) -> ChartPoint {
        ChartPoint { coordinates: self.chart().into_iter().map(|(i, j)| m.get(i, j).clone()).collect() }
    }

    /// Vertices of the ambient probability simplex of the family.
    fn ambient_vertices(self) -> Result<Vec<Matrix>> {
        let (rows, cols) = match self {
            Family::Generic { p, q } => (p, q),
            Family::Hollow { n } | Family::Symmetric { n } => (n, n),
        };
        let mut out = Vec::new();
        for i in 1..=rows {
            for j in 1..=cols {
                let mut m = Matrix::zeros(rows, cols)?;
                match self {
                    Family::Generic { .. } => m.set(i, j, int(1)),
                    Family::Hollow { .. } | Family::Symmetric { .. } if i < j => {
                        m.set(i, j, ratio(1, 2));
                        m.set(j, i, ratio(1, 2));
                    }
                    Family::Symmetric { .. } if i == j => m.set(i, i, int(1)),
                    _ => continue,
                }
                out.push(m);
            }
        }
        Ok(out)
    }
}

/// A point of the affine chart of a family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChartPoint {
    pub coordinates: Vec<Scalar>,
}

impl ChartPoint {
    pub fn new(coordinates: Vec<Scalar>) -> Self {
        ChartPoint { coordinates }
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeReport {
    pub family: Family,
    /// Lebesgue volume of the Monge polytope in the chart.
    pub polytope_volume: Scalar,
    /// Lebesgue volume of the ambient probability simplex in the chart.
    pub simplex_volume: Scalar,
    pub normalized: Scalar,
}

impl VolumeReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.to_string(),
            "polytope_volume": format_scalar(&self.polytope_volume),
            "simplex_volume": format_scalar(&self.simplex_volume),
            "normalized": format_scalar(&self.normalized),
        })
    }
}

/// `|det(v_1 - v_0, ..., v_d - v_0)| / d!` for `d + 1` points in dimension `d`.
pub fn simplex_volume(points: &[ChartPoint]) -> Result<Scalar> {
    let Some(origin) = points.first() else {
        return Err(Error::DegenerateSimplex);
    };
    let d = origin.dim();
    if points.len() != d + 1 || points.iter().any(|pt| pt.dim() != d) {
        return Err(Error::Shape(format!("a simplex in dimension {d} needs {} points of that dimension", d + 1)));
    }
    let rows: Vec<Vec<Scalar>> = points[1..]
        .iter()
        .map(|pt| pt.coordinates.iter().zip(&origin.coordinates).map(|(a, b)| a - b).collect())
        .collect();
    let det = rational_det(&rows);
    if det.is_zero() {
        return Err(Error::DegenerateSimplex);
    }
    Ok(det.abs() / big(factorial(d as u64)))
}

/// Which vertex of a face serves as the pulling apex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ApexOrder {
    /// Smallest vertex in canonical order.
    #[default]
    Canonical,
    /// Largest vertex in canonical order.
    Reversed,
}

#[derive(Clone, Debug)]
struct FaceMeasure {
    /// Volume of the face relative to the simplex on `basis`.
    measure: Scalar,
    /// Affinely independent vertices spanning the face, in canonical order.
    basis: Vec<usize>,
}

/// Memoized pulling triangulation of a generic Monge polytope.
pub struct Triangulation<'a> {
    poly: &'a GenericPolytope,
    order: ApexOrder,
    weights: Vec<BigInt>,
    memo: HashMap<VertexSet, FaceMeasure>,
}

impl<'a> Triangulation<'a> {
    pub fn new(poly: &'a GenericPolytope, order: ApexOrder) -> Self {
        let weights = poly.vertices.iter().map(|v| BigInt::from(v.weight())).collect();
        Triangulation { poly, order, weights, memo: HashMap::new() }
    }

    /// Number of faces whose measure has been computed.
    pub fn faces_visited(&self) -> usize {
        self.memo.len()
    }

    fn det(&self, verts: &[usize], coords: &[usize]) -> Result<i128> {
        let m = verts.iter().map(|&v| coords.iter().map(|&c| self.poly.patterns[v][c] as i128).collect()).collect();
        det_i128(m)
    }

    fn weight_product(&self, verts: &[usize]) -> BigInt {
        verts.iter().map(|&v| &self.weights[v]).product()
    }

    /// Volume of `face` relative to the simplex on its canonical basis.
    pub fn relative_measure(&mut self, face: VertexSet) -> Result<Scalar> {
        Ok(self.measure(face)?.measure)
    }

    fn measure(&mut self, face: VertexSet) -> Result<FaceMeasure> {
        if let Some(m) = self.memo.get(&face) {
            return Ok(m.clone());
        }
        let members: Vec<usize> = face.iter().collect();
        let patterns: Vec<&[i64]> = members.iter().map(|&v| self.poly.patterns[v].as_slice()).collect();
        let found = integer_basis(&patterns)?;
        let basis: Vec<usize> = found.independent.iter().map(|&k| members[k]).collect();
        if basis.len() == members.len() {
            let fm = FaceMeasure { measure: Scalar::one(), basis };
            self.memo.insert(face, fm.clone());
            return Ok(fm);
        }
        let coords = found.pivots;
        let apex = match self.order {
            ApexOrder::Canonical => face.min(),
            ApexOrder::Reversed => face.max(),
        }
        .expect("a non-simplex face has vertices");
        let base_det = BigInt::from(self.det(&basis, &coords)?.abs());
        let base_weight = self.weight_product(&basis);
        let mut total = Scalar::zero();
        for sub in self.poly.subfacets(face) {
            if sub.contains(apex) {
                continue;
            }
            let sub_measure = self.measure(sub)?;
            let mut cone = Vec::with_capacity(basis.len());
            cone.push(apex);
            cone.extend_from_slice(&sub_measure.basis);
            if cone.len() != basis.len() {
                return Err(Error::Internal(format!("facet {sub:?} of {face:?} has the wrong dimension")));
            }
            let cone_det = BigInt::from(self.det(&cone, &coords)?.abs());
            let num = cone_det * &base_weight;
            let den = &base_det * self.weight_product(&cone);
            total += sub_measure.measure * Scalar::new(num, den);
        }
        let fm = FaceMeasure { measure: total, basis };
        self.memo.insert(face, fm.clone());
        Ok(fm)
    }

    /// Chart volume of the whole polytope.
    pub fn volume(&mut self) -> Result<Scalar> {
        let all = self.poly.all_vertices();
        let top = self.measure(all)?;
        let family = Family::Generic { p: self.poly.p, q: self.poly.q };
        let points = top.basis.iter().map(|&v| Ok(family.chart_point(&generator(&self.poly.vertices[v])?))).collect::<Result<Vec<_>>>()?;
        Ok(top.measure * simplex_volume(&points)?)
    }
}

/// Chart volume of `M(p×q)` with the canonical apex order.
pub fn polytope_volume(p: usize, q: usize) -> Result<Scalar> {
    polytope_volume_with(p, q, ApexOrder::Canonical, DEFAULT_MAX_CELLS)
}

/// Chart volume of `M(p×q)`, refusing shapes with more than `max_cells` entries.
pub fn polytope_volume_with(p: usize, q: usize, order: ApexOrder, max_cells: usize) -> Result<Scalar> {
    Family::Generic { p, q }.validate()?;
    if p * q > max_cells {
        return Err(Error::ResourceLimit(format!("{p}x{q} exceeds the volume bound of {max_cells} cells")));
    }
    let poly = GenericPolytope::new(p, q)?;
    Triangulation::new(&poly, order).volume()
}

fn simplex_report(family: Family, vertices: Vec<VertexLabel>) -> Result<VolumeReport> {
    let points = vertices.iter().map(|v| Ok(family.chart_point(&generator(v)?))).collect::<Result<Vec<_>>>()?;
    let polytope_volume = simplex_volume(&points)?;
    finish(family, polytope_volume)
}

fn finish(family: Family, polytope_volume: Scalar) -> Result<VolumeReport> {
    let ambient = family.ambient_vertices()?.iter().map(|m| family.chart_point(m)).collect::<Vec<_>>();
    let simplex_volume = simplex_volume(&ambient)?;
    let normalized = &polytope_volume / &simplex_volume;
    Ok(VolumeReport { family, polytope_volume, simplex_volume, normalized })
}

pub fn normalized_volume(family: Family) -> Result<VolumeReport> {
    normalized_volume_with(family, DEFAULT_MAX_CELLS)
}

pub fn normalized_volume_with(family: Family, max_cells: usize) -> Result<VolumeReport> {
    family.validate()?;
    match family {
        Family::Generic { p, q } => finish(family, polytope_volume_with(p, q, ApexOrder::Canonical, max_cells)?),
        Family::Hollow { n } => simplex_report(family, symmetric_vertices(n, true)?),
        Family::Symmetric { n } => simplex_report(family, symmetric_vertices(n, false)?),
    }
}

/// Closed forms: `1/sf(n-1)^2` (hollow), `1/(sf(n-1)^2 n^n)` (symmetric),
/// `1/p!` for `2 × p` and `p × 2`.
pub fn closed_form_volume(family: Family) -> Result<Scalar> {
    match family {
        Family::Hollow { n } if n >= 2 => {
            let sf = superfactorial(n as u64 - 1);
            Ok(Scalar::new(BigInt::one(), &sf * &sf))
        }
        Family::Symmetric { n } if n >= 2 => {
            let sf = superfactorial(n as u64 - 1);
            Ok(Scalar::new(BigInt::one(), &sf * &sf * BigInt::from(n).pow(n as u32)))
        }
        Family::Generic { p, q } if p >= 2 && q >= 2 => {
            if p == 2 || q == 2 {
                Ok(Scalar::new(BigInt::one(), factorial(p.max(q) as u64)))
            } else {
                Err(Error::NoClosedForm(format!("no closed form is known for {family}")))
            }
        }
        _ => Err(Error::InvalidSize(format!("{family} is not a valid family"))),
    }
}
