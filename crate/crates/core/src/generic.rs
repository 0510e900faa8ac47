//! Combinatorics of the generic Monge polytope `M(p×q)`: nonnegative `p × q`
//! Monge matrices with entry sum one.
//!
//! Vertices are the hatted `NE(a×b)`, `SW(a×b)` (`1 <= a < p`, `1 <= b < q`),
//! `HOR(i)` and `VER(j)`. A minimal H-representation consists of the adjacent
//! Monge inequalities (facets `F(i,j)`) and the nonnegativity constraints
//! (facets `G(i,j)`). Everything else here (edges, the face lattice, the
//! f-vector) is derived from the vertex–facet incidences.
//!
//! The square case `p = q` has `2((p-1)^2 + p)` vertices, the count of regions
//! cut out of the plane by `p` ellipses meeting pairwise in four points (OEIS
//! A051890). No bijection between the two is implemented.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{Block, VertexLabel};
use crate::linalg::integer_rank;
use crate::vertex_set::VertexSet;

/// Default cap on `p·q` for face-lattice enumeration (covers 4×4).
pub const DEFAULT_MAX_CELLS: usize = 16;

fn check_shape(p: usize, q: usize) -> Result<()> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidSize(format!("generic polytope needs p, q >= 2, got {p}x{q}")));
    }
    Ok(())
}

pub fn vertex_count(p: usize, q: usize) -> usize {
    2 * (p - 1) * (q - 1) + p + q
}

pub fn facet_count(p: usize, q: usize) -> usize {
    (p - 1) * (q - 1) + p * q
}

/// Hatted vertices in canonical order: `NE(a×b)` row-major in `(a, b)`, then
/// `SW(a×b)` likewise, then `HOR(1..=p)`, then `VER(1..=q)`.
pub fn generic_vertices(p: usize, q: usize) -> Result<Vec<VertexLabel>> {
    check_shape(p, q)?;
    let mut blocks = Vec::with_capacity(vertex_count(p, q));
    for a in 1..p {
        for b in 1..q {
            blocks.push(Block::Ne { a, b });
        }
    }
    for a in 1..p {
        for b in 1..q {
            blocks.push(Block::Sw { a, b });
        }
    }
    blocks.extend((1..=p).map(|i| Block::Hor { i }));
    blocks.extend((1..=q).map(|j| Block::Ver { j }));
    blocks.into_iter().map(|b| VertexLabel::new(b, p, q, true)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FacetKind {
    /// `F(i,j)`: the adjacent Monge inequality at `(i, j)` is tight.
    MongeTight { i: usize, j: usize },
    /// `G(i,j)`: entry `(i, j)` is zero.
    NonnegTight { i: usize, j: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetDescriptor {
    pub kind: FacetKind,
    /// Indices into the canonical vertex list.
    pub vertices: VertexSet,
}

/// The generic polytope's vertices and facets, built once and shared by the
/// edge, lattice and volume computations.
#[derive(Clone, Debug)]
pub struct GenericPolytope {
    pub p: usize,
    pub q: usize,
    pub vertices: Vec<VertexLabel>,
    /// Unnormalized 0/1 patterns, flattened row-major, one per vertex.
    pub patterns: Vec<Vec<i64>>,
    pub facets: Vec<FacetDescriptor>,
}

impl GenericPolytope {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let vertices = generic_vertices(p, q)?;
        if vertices.len() > VertexSet::CAPACITY {
            return Err(Error::ResourceLimit(format!(
                "{p}x{q} has {} vertices; at most {} are supported",
                vertices.len(),
                VertexSet::CAPACITY
            )));
        }
        let patterns = vertices.iter().map(VertexLabel::pattern_vec).collect();
        let mut poly = GenericPolytope { p, q, vertices, patterns, facets: Vec::new() };
        poly.facets = poly.build_facets()?;
        Ok(poly)
    }

    pub fn dim(&self) -> usize {
        self.p * self.q - 1
    }

    pub fn index_of(&self, block: Block) -> usize {
        let (p, q) = (self.p, self.q);
        let blocks = (p - 1) * (q - 1);
        match block {
            Block::Ne { a, b } => (a - 1) * (q - 1) + (b - 1),
            Block::Sw { a, b } => blocks + (a - 1) * (q - 1) + (b - 1),
            Block::Hor { i } => 2 * blocks + i - 1,
            Block::Ver { j } => 2 * blocks + p + j - 1,
            Block::Nesw { .. } | Block::Hv { .. } => unreachable!("not a generic vertex"),
        }
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertices.len())
    }

    fn entry(&self, v: usize, i: usize, j: usize) -> i64 {
        self.patterns[v][(i - 1) * self.q + (j - 1)]
    }

    /// Facets from their closed-form vertex descriptions, each re-verified
    /// against its defining tight (in)equality.
    fn build_facets(&self) -> Result<Vec<FacetDescriptor>> {
        let (p, q) = (self.p, self.q);
        let all = self.all_vertices();
        let mut facets = Vec::with_capacity(facet_count(p, q));
        for i in 1..p {
            for j in 1..q {
                let vertices = all
                    .without(self.index_of(Block::Ne { a: i, b: q - j }))
                    .without(self.index_of(Block::Sw { a: p - i, b: j }));
                facets.push(FacetDescriptor { kind: FacetKind::MongeTight { i, j }, vertices });
            }
        }
        for i in 1..=p {
            for j in 1..=q {
                let mut vertices = VertexSet::empty();
                for a in 1..p {
                    for b in 1..q {
                        if a < i || b <= q - j {
                            vertices = vertices.with(self.index_of(Block::Ne { a, b }));
                        }
                        if a <= p - i || b < j {
                            vertices = vertices.with(self.index_of(Block::Sw { a, b }));
                        }
                    }
                }
                for a in (1..=p).filter(|&a| a != i) {
                    vertices = vertices.with(self.index_of(Block::Hor { i: a }));
                }
                for b in (1..=q).filter(|&b| b != j) {
                    vertices = vertices.with(self.index_of(Block::Ver { j: b }));
                }
                facets.push(FacetDescriptor { kind: FacetKind::NonnegTight { i, j }, vertices });
            }
        }
        for f in &facets {
            let tight = self.tight_set(f.kind);
            if tight != f.vertices {
                return Err(Error::Internal(format!(
                    "facet {:?}: closed-form vertex set {:?} differs from tight set {:?}",
                    f.kind, f.vertices, tight
                )));
            }
        }
        Ok(facets)
    }

    /// Vertices at which the defining inequality of `kind` holds with
    /// equality, evaluated on the vertex matrices.
    pub fn tight_set(&self, kind: FacetKind) -> VertexSet {
        VertexSet::from_indices((0..self.vertices.len()).filter(|&v| self.slack(v, kind) == 0))
    }

    /// Slack of the facet inequality at a vertex, on the unnormalized
    /// pattern (same sign and zero set as on the hatted vertex).
    pub fn slack(&self, v: usize, kind: FacetKind) -> i64 {
        match kind {
            FacetKind::MongeTight { i, j } => {
                self.entry(v, i, j + 1) + self.entry(v, i + 1, j) - self.entry(v, i, j) - self.entry(v, i + 1, j + 1)
            }
            FacetKind::NonnegTight { i, j } => self.entry(v, i, j),
        }
    }

    /// Vertex–facet incidence: `rows[v][f]` iff vertex `v` lies on facet `f`.
    pub fn incidence(&self) -> Vec<Vec<bool>> {
        (0..self.vertices.len()).map(|v| self.facets.iter().map(|f| f.vertices.contains(v)).collect()).collect()
    }

    /// Affine dimension of the convex hull of a vertex subset (`-1` when empty).
    pub fn face_dim(&self, face: VertexSet) -> Result<isize> {
        // The hatted vertices lie on the hyperplane "entries sum to 1", so the
        // affine dimension is the linear rank minus one, and scaling each
        // vertex to its integer pattern does not change the rank.
        let vecs: Vec<&[i64]> = face.iter().map(|v| self.patterns[v].as_slice()).collect();
        Ok(integer_rank(&vecs)? as isize - 1)
    }

    /// Smallest face containing `set`: intersection of all facets containing it.
    pub fn closure(&self, set: VertexSet) -> VertexSet {
        self.facets
            .iter()
            .filter(|f| set.is_subset(f.vertices))
            .fold(self.all_vertices(), |acc, f| acc.intersection(f.vertices))
    }

    /// Facets of the face `face`: the maximal proper intersections of `face`
    /// with facets of the polytope.
    pub fn subfacets(&self, face: VertexSet) -> Vec<VertexSet> {
        let mut cands: Vec<VertexSet> = self
            .facets
            .iter()
            .map(|f| face.intersection(f.vertices))
            .filter(|&s| s != face)
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        cands.sort();
        cands.iter().copied().filter(|&s| !cands.iter().any(|&t| t != s && s.is_subset(t))).collect()
    }

    pub fn edges_explicit(&self) -> Vec<(usize, usize)> {
        let (p, q) = (self.p, self.q);
        let mut edges = Vec::new();
        let mut push = |x: usize, y: usize| edges.push((x.min(y), x.max(y)));
        let blocks: Vec<(usize, usize)> = (1..p).flat_map(|a| (1..q).map(move |b| (a, b))).collect();
        let ne = |a, b| self.index_of(Block::Ne { a, b });
        let sw = |a, b| self.index_of(Block::Sw { a, b });
        let hor = |i| self.index_of(Block::Hor { i });
        let ver = |j| self.index_of(Block::Ver { j });

        for &(a, b) in &blocks {
            // Strips against blocks. A full strip sharing the long side of a
            // maximal block produces the same support as a different strip
            // combination, which rules those pairs out.
            for i in 1..=p {
                if !(i == p && a == p - 1) {
                    push(hor(i), ne(a, b));
                }
                if !(i == 1 && a == p - 1) {
                    push(hor(i), sw(a, b));
                }
            }
            for j in 1..=q {
                if !(j == 1 && b == q - 1) {
                    push(ver(j), ne(a, b));
                }
                if !(j == q && b == q - 1) {
                    push(ver(j), sw(a, b));
                }
            }
        }
        for (k, &(a, b)) in blocks.iter().enumerate() {
            for &(a2, b2) in &blocks[k + 1..] {
                push(ne(a, b), ne(a2, b2));
                push(sw(a, b), sw(a2, b2));
            }
        }
        for &(a, b) in &blocks {
            for &(a2, b2) in &blocks {
                if a + a2 < p || b + b2 < q || (a + a2 == p && b + b2 == q) {
                    push(ne(a, b), sw(a2, b2));
                }
            }
        }
        let strips: Vec<usize> = (1..=p).map(hor).chain((1..=q).map(ver)).collect();
        for (k, &x) in strips.iter().enumerate() {
            for &y in &strips[k + 1..] {
                let both_hor = x < ver(1) && y < ver(1);
                let both_ver = x >= ver(1) && y >= ver(1);
                if (p == 2 && both_hor) || (q == 2 && both_ver) {
                    continue;
                }
                push(x, y);
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Pairs `{v, w}` such that no third vertex lies on every facet that
    /// contains both.
    pub fn edges_from_incidence(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut edges = Vec::new();
        for v in 0..n {
            for w in v + 1..n {
                let pair = VertexSet::from_indices([v, w]);
                if self.closure(pair) == pair {
                    edges.push((v, w));
                }
            }
        }
        edges
    }
}

pub fn generic_facets(p: usize, q: usize) -> Result<Vec<FacetDescriptor>> {
    Ok(GenericPolytope::new(p, q)?.facets)
}

/// Vertex–facet incidence matrix; rows in canonical vertex order, columns
/// `F(i,j)` row-major then `G(i,j)` row-major.
pub fn incidence_matrix(p: usize, q: usize) -> Result<Vec<Vec<bool>>> {
    Ok(GenericPolytope::new(p, q)?.incidence())
}

pub fn edges_explicit(p: usize, q: usize) -> Result<Vec<(usize, usize)>> {
    Ok(GenericPolytope::new(p, q)?.edges_explicit())
}

pub fn edges_from_incidence(p: usize, q: usize) -> Result<Vec<(usize, usize)>> {
    Ok(GenericPolytope::new(p, q)?.edges_from_incidence())
}

/// Closed-form edge count, with one subtracted for each of `p`, `q` equal to 2.
pub fn edge_count_formula(p: usize, q: usize) -> Result<u64> {
    check_shape(p, q)?;
    let (p, q) = (p as i128, q as i128);
    let four_x = 24 - 18 * (p + q) + 19 * p * q + 2 * (p * p + q * q) - 7 * (p * p * q + p * q * q - p * p * q * q);
    if four_x % 4 != 0 {
        return Err(Error::Internal(format!("edge polynomial not divisible by 4 at {p}x{q}")));
    }
    let correction = (p == 2) as i128 + (q == 2) as i128;
    Ok((four_x / 4 - correction) as u64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: VertexSet,
    pub dim: isize,
}

/// All faces of `M(p×q)`, including the empty face and the polytope itself.
///
/// Faces are sorted by dimension, then by vertex mask. `covers[k]` lists the
/// faces of dimension `dim - 1` contained in face `k`.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub p: usize,
    pub q: usize,
    pub faces: Vec<Face>,
    pub covers: Vec<Vec<usize>>,
    index: HashMap<VertexSet, usize>,
}

impl FaceLattice {
    pub fn dim(&self) -> isize {
        (self.p * self.q) as isize - 1
    }

    pub fn index_of(&self, face: VertexSet) -> Option<usize> {
        self.index.get(&face).copied()
    }

    pub fn faces_of_dim(&self, d: isize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == d)
    }

    /// `(f_{-1}, f_0, ..., f_{pq-1})`.
    pub fn f_vector(&self) -> Vec<u64> {
        let mut f = vec![0u64; (self.dim() + 2) as usize];
        for face in &self.faces {
            f[(face.dim + 1) as usize] += 1;
        }
        f
    }
}

pub fn face_lattice(p: usize, q: usize) -> Result<FaceLattice> {
    face_lattice_with_limit(p, q, DEFAULT_MAX_CELLS)
}

/// Face lattice as the intersection closure of the facets, with `p·q`
/// capped at `max_cells`.
pub fn face_lattice_with_limit(p: usize, q: usize, max_cells: usize) -> Result<FaceLattice> {
    check_shape(p, q)?;
    if p * q > max_cells {
        return Err(Error::ResourceLimit(format!(
            "face lattice of {p}x{q} exceeds the enumeration bound p*q <= {max_cells}"
        )));
    }
    let poly = GenericPolytope::new(p, q)?;

    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut queue: VecDeque<VertexSet> = VecDeque::new();
    let full = poly.all_vertices();
    for s in std::iter::once(full).chain(poly.facets.iter().map(|f| f.vertices)).chain([VertexSet::empty()]) {
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(face) = queue.pop_front() {
        for f in &poly.facets {
            let s = face.intersection(f.vertices);
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
    }

    let mut faces = seen
        .into_par_iter()
        .map(|s| Ok(Face { vertices: s, dim: poly.face_dim(s)? }))
        .collect::<Result<Vec<_>>>()?;
    faces.sort_by_key(|f| (f.dim, f.vertices));
    let index: HashMap<VertexSet, usize> = faces.iter().enumerate().map(|(k, f)| (f.vertices, k)).collect();

    let covers = faces
        .par_iter()
        .map(|face| {
            if face.dim < 0 {
                return Ok(Vec::new());
            }
            let mut subs = Vec::new();
            for s in poly.subfacets(face.vertices) {
                let k = index[&s];
                if faces[k].dim != face.dim - 1 {
                    return Err(Error::Internal(format!(
                        "face {:?} of dimension {} has a maximal subface of dimension {}",
                        face.vertices, face.dim, faces[k].dim
                    )));
                }
                subs.push(k);
            }
            subs.sort_unstable();
            Ok(subs)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FaceLattice { p, q, faces, covers, index })
}

/// f-vector `(f_{-1}, ..., f_{pq-1})`, cross-checked against the vertex,
/// edge and facet counts.
pub fn f_vector(p: usize, q: usize) -> Result<Vec<u64>> {
    f_vector_with_limit(p, q, DEFAULT_MAX_CELLS)
}

pub fn f_vector_with_limit(p: usize, q: usize, max_cells: usize) -> Result<Vec<u64>> {
    let f = face_lattice_with_limit(p, q, max_cells)?.f_vector();
    let d = p * q - 1;
    let checks = [
        (1, vertex_count(p, q) as u64, "vertices"),
        (2, edge_count_formula(p, q)?, "edges"),
        (d, facet_count(p, q) as u64, "facets"),
    ];
    for (slot, expected, what) in checks {
        if f[slot] != expected {
            return Err(Error::Internal(format!(
                "{p}x{q}: lattice has {} {what}, closed form gives {expected}",
                f[slot]
            )));
        }
    }
    Ok(f)
}
