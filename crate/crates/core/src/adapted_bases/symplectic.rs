//! Flag-compatible hyperbolic bases for nondegenerate skew forms.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{precondition, Error, Result};
use crate::exactlin::{
    form_value, in_span, scale_vector, BilinearForm, FormKind, Rational, Vector,
};
use crate::flags::{AdaptedPresentation, Flag, VectorTag};

/// Hyperbolic basis `e_1..e_2n` with `V_l = span(e_1..e_l)` for every level.
///
/// Pairs satisfy `ω(e_i, e_j) = 1` for `i < j`; every other pair of basis
/// vectors is orthogonal. The output tags are `Pure(0), ..., Pure(2n-1)`.
pub fn symplectic_adapted_basis(f: &Flag, omega: &BilinearForm) -> Result<AdaptedPresentation> {
    let n = f.dim();
    if omega.kind() != FormKind::Skew {
        return precondition("symplectic basis needs a skew form");
    }
    if omega.dim() != n {
        return precondition("form and flag dimensions differ");
    }
    if n % 2 == 1 {
        return precondition("symplectic basis needs an even-dimensional space");
    }
    if !omega.is_nondegenerate() {
        return precondition("skew form is degenerate");
    }
    let (e_basis, pairs) = hyperbolic_flag_basis(f.generators(), omega)?;
    let mut pairing = BTreeMap::new();
    for (i, j) in pairs {
        pairing.insert(i, j);
        pairing.insert(j, i);
    }
    Ok(AdaptedPresentation {
        pairing: Some(pairing),
        ..AdaptedPresentation::bare(e_basis, (0..n).map(VectorTag::Pure).collect())
    })
}

pub(crate) type HyperbolicBasis = (Vec<Vector>, Vec<(usize, usize)>);

/// Hyperbolic basis of `span(gens)` compatible with the flag the generators
/// define; `ω` must be nondegenerate on that span. Returns the basis in
/// level order together with the pairs `(i, j)`, `i < j`, `ω(e_i, e_j) = 1`.
///
/// Take `e = g_1`, the first level `k` on which `ω(e, ·)` is nonzero and
/// `f = g_k / ω(e, g_k)`; then recurse on the flag cut out on `<e, f>^⊥`.
pub(crate) fn hyperbolic_flag_basis(
    gens: &[Vector],
    omega: &BilinearForm,
) -> Result<HyperbolicBasis> {
    let len = gens.len();
    if len == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let e = gens[0].clone();
    let Some(k) = (1..len).find(|&l| !form_value(omega, &e, &gens[l]).is_zero()) else {
        return precondition("skew form is degenerate on the flag");
    };
    let c = form_value(omega, &e, &gens[k]);
    let f = scale_vector(&c.recip(), &gens[k]);

    // symplectic projection onto <e, f>^⊥
    let project = |x: &Vector| -> Vector {
        let a = form_value(omega, x, &f);
        let b = form_value(omega, x, &e);
        x.iter()
            .zip(e.iter().zip(&f))
            .map(|(xi, (ei, fi))| xi - &a * ei + &b * fi)
            .collect::<Vec<Rational>>()
    };
    let mut levels = Vec::new();
    let mut cut = Vec::new();
    for (l, g) in gens.iter().enumerate().skip(1) {
        let x = project(g);
        // keep only levels where the cut flag grows
        if !in_span(&x, &cut) {
            levels.push(l);
            cut.push(x);
        }
    }
    if cut.len() + 2 != len {
        return Err(Error::Invariant(
            "cut flag on the symplectic complement has the wrong dimension".into(),
        ));
    }
    let (sub, sub_pairs) = hyperbolic_flag_basis(&cut, omega)?;

    let mut basis = vec![Vec::new(); len];
    basis[0] = e;
    basis[k] = f;
    for (j, &l) in levels.iter().enumerate() {
        basis[l] = sub[j].clone();
    }
    let mut pairs = vec![(0, k)];
    pairs.extend(sub_pairs.into_iter().map(|(a, b)| (levels[a], levels[b])));
    Ok((basis, pairs))
}
