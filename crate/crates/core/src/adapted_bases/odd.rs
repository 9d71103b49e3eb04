//! Flag bases for odd-dimensional skew forms with a one-dimensional kernel.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{precondition, Error, Result};
use crate::exactlin::{
    coordinates, form_kernel, in_span, is_independent, scale_vector, solve, sub_vectors,
    BilinearForm, FormKind, Matrix, Rational, Vector,
};
use crate::flags::{AdaptedPresentation, Block, Flag, VectorTag};

use super::symplectic::hyperbolic_flag_basis;

/// Basis `e_1..e_2n, e_special` with `e_special` spanning `ker ω`, `e_1..e_2n`
/// a hyperbolic basis of `U`, and each flag vector equal to `e_i`,
/// `e_i + e_special` or `e_special`.
///
/// The flag is projected to `U` along the kernel, a hyperbolic basis is built
/// there, lifted back into the flag, and each hyperbolic pair is rescaled so
/// that at most one of its two lifts carries a kernel component.
pub fn odd_symplectic_adapted_basis(
    f: &Flag,
    omega: &BilinearForm,
    u_basis: &[Vector],
) -> Result<AdaptedPresentation> {
    let dim = f.dim();
    if omega.kind() != FormKind::Skew {
        return precondition("odd symplectic basis needs a skew form");
    }
    if omega.dim() != dim {
        return precondition("form and flag dimensions differ");
    }
    if dim.is_multiple_of(2) {
        return precondition("odd symplectic basis needs an odd-dimensional space");
    }
    if u_basis.len() + 1 != dim
        || u_basis.iter().any(|u| u.len() != dim)
        || !is_independent(u_basis, dim)
    {
        return precondition("U must be a hyperplane given by an independent basis");
    }
    let kernel = form_kernel(omega);
    if kernel.len() != 1 {
        return precondition(format!(
            "form kernel has dimension {}, expected 1",
            kernel.len()
        ));
    }
    let kvec = kernel.into_iter().next().expect("one kernel vector");
    if in_span(&kvec, u_basis) {
        return precondition("form kernel lies inside U");
    }
    let two_n = dim - 1;

    let mut split_basis = u_basis.to_vec();
    split_basis.push(kvec.clone());
    // x = pr(x) + alpha(x) * kvec
    let kernel_part = |x: &Vector| -> Rational {
        coordinates(x, &split_basis).expect("U ⊕ ker spans V")[two_n].clone()
    };
    let project = |x: &Vector| -> Vector { sub_vectors(x, &scale_vector(&kernel_part(x), &kvec)) };

    let mut u_levels = Vec::new();
    let mut u_gens: Vec<Vector> = Vec::new();
    let mut kernel_level = None;
    for (l, g) in f.generators().iter().enumerate() {
        let p = project(g);
        if in_span(&p, &u_gens) {
            kernel_level = Some(l);
        } else {
            u_levels.push(l);
            u_gens.push(p);
        }
    }
    let kernel_level =
        kernel_level.ok_or_else(|| Error::Invariant("projected flag did not collapse".into()))?;
    if u_gens.len() != two_n {
        return Err(Error::Invariant(
            "projected flag has the wrong dimension".into(),
        ));
    }

    let (u, pairs) = hyperbolic_flag_basis(&u_gens, omega)?;

    // kernel components of the lifts u_j + alpha_j k ∈ V_(level j)
    let alpha: Vec<Rational> = u_levels
        .iter()
        .zip(&u)
        .map(|(&l, uj)| -> Result<Rational> {
            if l > kernel_level {
                return Ok(Rational::zero());
            }
            let mut cols = f.level(l + 1).to_vec();
            cols.push(scale_vector(&-Rational::one(), &kvec));
            let sol = solve(&Matrix::from_columns(&cols, dim), uj).ok_or_else(|| {
                Error::Invariant("projected vector has no lift in the flag".into())
            })?;
            Ok(sol[l + 1].clone())
        })
        .collect::<Result<_>>()?;

    let mut e = u.clone();
    let mut mixed = vec![false; two_n];
    for &(i, j) in &pairs {
        let (ai, aj) = (&alpha[i], &alpha[j]);
        match (ai.is_zero(), aj.is_zero()) {
            (true, true) => {}
            (true, false) => {
                e[i] = scale_vector(aj, &u[i]);
                e[j] = scale_vector(&aj.recip(), &u[j]);
                mixed[j] = true;
            }
            (false, true) => {
                e[i] = scale_vector(&ai.recip(), &u[i]);
                e[j] = scale_vector(ai, &u[j]);
                mixed[i] = true;
            }
            (false, false) => {
                e[i] = scale_vector(&ai.recip(), &u[i]);
                e[j] = sub_vectors(&scale_vector(ai, &u[j]), &scale_vector(aj, &u[i]));
                mixed[i] = true;
            }
        }
    }

    let special = two_n;
    let mut tags = Vec::with_capacity(dim);
    let mut next_u = 0;
    for l in 0..dim {
        if l == kernel_level {
            tags.push(VectorTag::Pure(special));
        } else {
            let j = next_u;
            next_u += 1;
            tags.push(if mixed[j] {
                VectorTag::Mixed(j, special)
            } else {
                VectorTag::Pure(j)
            });
        }
    }
    e.push(kvec);

    let mut pairing = BTreeMap::new();
    for (i, j) in pairs {
        pairing.insert(i, j);
        pairing.insert(j, i);
    }
    let blocks: BTreeMap<usize, Block> = (0..dim)
        .map(|i| (i, if i == special { Block::W } else { Block::U }))
        .collect();
    let mut p = AdaptedPresentation {
        blocks: Some(blocks),
        pairing: Some(pairing),
        special: Some(special),
        ..AdaptedPresentation::bare(e, tags)
    };
    p.s_set = Some(p.s_from_tags());
    Ok(p)
}
