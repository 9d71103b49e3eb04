//! Flag bases compatible with a decomposition `V = U ⊕ W`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{precondition, Error, Result};
use crate::exactlin::{
    in_span, is_independent, nullspace, rank_of, solve, Matrix, Rational, Vector,
};
use crate::flags::{AdaptedPresentation, Block, Flag, VectorTag};

/// Builds an `e`-basis with every `e_i` in `U` or `W` and flag vectors that
/// are single `e_i` or sums `e_u + e_w` with `e_u ∈ U`, `e_w ∈ W`.
///
/// The basis is grown one flag level at a time. Comparing how
/// `dim pr_U(V_k)` and `dim pr_W(V_k)` change picks one of four steps:
/// both projections grow (new mixed vector), a new vector of `U ∩ V_{k+1}`,
/// a new vector of `W ∩ V_{k+1}`, or neither grows. In the last case an
/// earlier mixed vector is re-chosen so that its `U`-part lands in
/// `V_{k+1}`, which becomes the new pure vector.
pub fn decomposition_adapted_basis(
    f: &Flag,
    u_basis: &[Vector],
    w_basis: &[Vector],
) -> Result<AdaptedPresentation> {
    let n = f.dim();
    let m = u_basis.len();
    if u_basis.iter().chain(w_basis).any(|v| v.len() != n) {
        return precondition("decomposition vectors have the wrong dimension");
    }
    let mut all: Vec<Vector> = u_basis.to_vec();
    all.extend_from_slice(w_basis);
    if all.len() != n || !is_independent(&all, n) {
        return precondition("U and W are not complementary subspaces");
    }
    let to_ambient = Matrix::from_columns(&all, n);
    let to_split = to_ambient
        .inverse()
        .expect("complementary bases are invertible");

    // Everything below works in coordinates (U-part | W-part).
    let gens: Vec<Vector> = f.generators().iter().map(|g| to_split.mul_vec(g)).collect();
    let pu = |y: &[Rational]| -> Vector {
        y.iter()
            .enumerate()
            .map(|(i, x)| if i < m { x.clone() } else { Rational::zero() })
            .collect()
    };
    let pw = |y: &[Rational]| -> Vector {
        y.iter()
            .enumerate()
            .map(|(i, x)| if i >= m { x.clone() } else { Rational::zero() })
            .collect()
    };

    let mut e: Vec<Vector> = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();
    let mut tags: Vec<VectorTag> = Vec::new();
    let mut vs: Vec<Vector> = Vec::new();
    // mixed tags whose e-vectors already lie in the current flag level
    let mut split: Vec<bool> = Vec::new();

    for k in 0..n {
        let before = &gens[..k];
        let after = &gens[..=k];
        let rank_u = |s: &[Vector]| rank_of(&s.iter().map(|y| pu(y)).collect::<Vec<_>>(), n);
        let rank_w = |s: &[Vector]| rank_of(&s.iter().map(|y| pw(y)).collect::<Vec<_>>(), n);
        let grow_u = rank_u(after) > rank_u(before);
        let grow_w = rank_w(after) > rank_w(before);

        match (grow_u, grow_w) {
            (true, true) => {
                let v = gens[k].clone();
                let iu = e.len();
                e.push(pu(&v));
                blocks.push(Block::U);
                e.push(pw(&v));
                blocks.push(Block::W);
                tags.push(VectorTag::Mixed(iu, iu + 1));
                vs.push(v);
                split.push(false);
            }
            (true, false) => {
                let x = new_vector_in_block(after, before, m, Block::U, n)?;
                tags.push(VectorTag::Pure(e.len()));
                e.push(x.clone());
                blocks.push(Block::U);
                vs.push(x);
                split.push(false);
            }
            (false, true) => {
                let x = new_vector_in_block(after, before, m, Block::W, n)?;
                tags.push(VectorTag::Pure(e.len()));
                e.push(x.clone());
                blocks.push(Block::W);
                vs.push(x);
                split.push(false);
            }
            (false, false) => {
                let u = new_vector_in_block(after, before, m, Block::U, n)?;
                let columns: Vec<Vector> = vs.iter().map(|v| pu(v)).collect();
                let alpha = solve(&Matrix::from_columns(&columns, n), &u).ok_or_else(|| {
                    Error::Invariant("U ∩ V_(k+1) is not inside pr_U(V_k)".into())
                })?;
                let live: Vec<usize> = (0..k)
                    .filter(|&i| matches!(tags[i], VectorTag::Mixed(..)) && !split[i])
                    .filter(|&i| !alpha[i].is_zero())
                    .collect();
                let &k0 = live.last().ok_or_else(|| {
                    Error::Invariant("no mixed vector available for substitution".into())
                })?;
                let mut v = vec![Rational::zero(); n];
                for &i in &live {
                    for (acc, x) in v.iter_mut().zip(&vs[i]) {
                        *acc += &alpha[i] * x;
                    }
                }
                let VectorTag::Mixed(s, t) = tags[k0] else {
                    unreachable!("live indices are mixed")
                };
                e[s] = pu(&v);
                e[t] = pw(&v);
                vs[k0] = v;
                split[k0] = true;
                tags.push(VectorTag::Pure(s));
                vs.push(e[s].clone());
                split.push(false);
            }
        }
    }

    let e_basis: Vec<Vector> = e.iter().map(|x| to_ambient.mul_vec(x)).collect();
    let blocks: BTreeMap<usize, Block> = blocks.into_iter().enumerate().collect();
    Ok(AdaptedPresentation {
        blocks: Some(blocks),
        ..AdaptedPresentation::bare(e_basis, tags)
    })
}

/// First vector of `block ∩ span(after)` (in split coordinates) outside
/// `span(before)`, scanning the null space in column order.
fn new_vector_in_block(
    after: &[Vector],
    before: &[Vector],
    m: usize,
    block: Block,
    n: usize,
) -> Result<Vector> {
    // coordinates that must vanish for a vector to lie in `block`
    let other: Vec<usize> = match block {
        Block::U => (m..n).collect(),
        Block::W => (0..m).collect(),
    };
    let rows: Vec<Vector> = other
        .iter()
        .map(|&r| after.iter().map(|y| y[r].clone()).collect())
        .collect();
    let constraint = Matrix::from_rows(&rows, after.len());
    for c in nullspace(&constraint) {
        let mut x = vec![Rational::zero(); n];
        for (ci, y) in c.iter().zip(after) {
            if !ci.is_zero() {
                for (acc, yj) in x.iter_mut().zip(y) {
                    *acc += ci * yj;
                }
            }
        }
        if !in_span(&x, before) {
            return Ok(x);
        }
    }
    Err(Error::Invariant(format!(
        "expected a new vector of {block:?} in the next flag level"
    )))
}
