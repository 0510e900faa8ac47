//! Random integer Monge matrices.
//!
//! Every nonnegative combination of generator patterns is Monge, so sampling
//! coefficients gives Monge instances of any size without rejection.

use rand::Rng;

use crate::error::Result;
use crate::generators::{generator, Block, VertexLabel};
use crate::generic::generic_vertices;
use crate::matrix::Matrix;
use crate::scalar::int;
use crate::symmetric::symmetric_vertices;

fn combine<R: Rng + ?Sized>(labels: Vec<VertexLabel>, rows: usize, cols: usize, max_coeff: u32, rng: &mut R) -> Result<Matrix> {
    let mut acc = Matrix::zeros(rows, cols)?;
    for label in labels {
        let coeff = rng.gen_range(0..=max_coeff);
        if coeff > 0 {
            let pattern = generator(&label.with_normalized(false))?;
            acc = &acc + &pattern.scaled(&int(coeff as i64));
        }
    }
    Ok(acc)
}

/// Random `p × q` integer Monge matrix: each generic generator pattern
/// (`NE`, `SW`, `HOR`, `VER`) gets a coefficient in `0..=max_coeff`.
pub fn random_monge<R: Rng + ?Sized>(p: usize, q: usize, max_coeff: u32, rng: &mut R) -> Result<Matrix> {
    combine(generic_vertices(p, q)?, p, q, max_coeff, rng)
}

/// Random symmetric integer Monge matrix from `NESW` and `HV` patterns;
/// with `hollow` only `NESW` patterns are used, giving a zero diagonal.
pub fn random_symmetric_monge<R: Rng + ?Sized>(n: usize, hollow: bool, max_coeff: u32, rng: &mut R) -> Result<Matrix> {
    combine(symmetric_vertices(n, hollow)?, n, n, max_coeff, rng)
}

/// Random `n × n` integer Monge matrix with a zero diagonal, built from a
/// random generic matrix by subtracting a diagonal-matching combination of
/// `HOR` patterns (which keeps the Monge property). Entries may be negative.
pub fn random_square_monge<R: Rng + ?Sized>(n: usize, max_coeff: u32, rng: &mut R) -> Result<Matrix> {
    let base = random_monge(n, n, max_coeff, rng)?;
    let mut shift = Matrix::zeros(n, n)?;
    for i in 1..=n {
        let row = generator(&VertexLabel::new(Block::Hor { i }, n, n, false)?)?;
        shift = &shift + &row.scaled(base.get(i, i));
    }
    Ok(&base - &shift)
}
