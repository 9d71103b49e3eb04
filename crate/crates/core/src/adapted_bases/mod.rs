//! Constructors of adapted presentations and the checks their outputs must
//! pass.

mod decomposition;
mod odd;
mod symplectic;

pub use decomposition::decomposition_adapted_basis;
pub use odd::odd_symplectic_adapted_basis;
pub use symplectic::symplectic_adapted_basis;

use num_traits::{One, Zero};

use crate::exactlin::{form_value, in_span, BilinearForm, Rational, Vector};
use crate::flags::{check_presentation, AdaptedPresentation, Block, Flag, VectorTag};

type Check = std::result::Result<(), String>;

/// Block labels are total and correct, and every mixed vector joins a `U`
/// vector with a `W` vector.
pub fn check_decomposition_output(
    p: &AdaptedPresentation,
    f: &Flag,
    u_basis: &[Vector],
    w_basis: &[Vector],
) -> Check {
    check_presentation(p, f)?;
    let blocks = p.blocks.as_ref().ok_or("missing block labels")?;
    for (i, e) in p.e_basis.iter().enumerate() {
        let space = match blocks.get(&i) {
            Some(Block::U) => u_basis,
            Some(Block::W) => w_basis,
            None => return Err(format!("e_{i} has no block label")),
        };
        if !in_span(e, space) {
            return Err(format!("e_{i} is not in its labelled block"));
        }
    }
    for t in &p.v_tags {
        if let VectorTag::Mixed(i, j) = *t {
            if blocks.get(&i) == blocks.get(&j) {
                return Err(format!("mixed pair ({i},{j}) lies in one block"));
            }
        }
    }
    Ok(())
}

/// The Gram matrix of `omega` on the given indices is hyperbolic with
/// `ω(e_i, e_j) = +1` for paired `i < j`.
pub fn check_hyperbolic(p: &AdaptedPresentation, omega: &BilinearForm, indices: &[usize]) -> Check {
    let pairing = p.pairing.as_ref().ok_or("missing pairing")?;
    for &i in indices {
        let partner = *pairing.get(&i).ok_or(format!("e_{i} is unpaired"))?;
        for &j in indices {
            let w = form_value(omega, &p.e_basis[i], &p.e_basis[j]);
            let expected = if j == partner {
                if i < j {
                    Rational::one()
                } else {
                    -Rational::one()
                }
            } else {
                Rational::zero()
            };
            if w != expected {
                return Err(format!("ω(e_{i}, e_{j}) = {w}, expected {expected}"));
            }
        }
    }
    Ok(())
}

pub fn check_symplectic_output(p: &AdaptedPresentation, f: &Flag, omega: &BilinearForm) -> Check {
    check_presentation(p, f)?;
    if p.v_tags.iter().any(|t| matches!(t, VectorTag::Mixed(..))) {
        return Err("symplectic presentation has a mixed vector".into());
    }
    let all: Vec<usize> = (0..p.dim()).collect();
    check_hyperbolic(p, omega, &all)
}

/// Every flag vector is `e_i` or `e_i + e_special`, and each index is the
/// leading index of exactly one flag vector.
pub fn check_odd_shape(p: &AdaptedPresentation) -> Check {
    let sp = p.special.ok_or("missing special index")?;
    let mut seen = vec![false; p.dim()];
    for t in &p.v_tags {
        let own = match *t {
            VectorTag::Pure(i) => i,
            VectorTag::Mixed(i, j) if j == sp && i != sp => i,
            VectorTag::Mixed(i, j) => {
                return Err(format!(
                    "mixed vector ({i},{j}) does not have the form e_i + e_special"
                ))
            }
        };
        if own >= seen.len() || std::mem::replace(&mut seen[own], true) {
            return Err(format!("index {own} leads more than one flag vector"));
        }
    }
    Ok(())
}

pub fn check_odd_output(
    p: &AdaptedPresentation,
    f: &Flag,
    omega: &BilinearForm,
    u_basis: &[Vector],
) -> Check {
    check_presentation(p, f)?;
    let sp = p.special.ok_or("missing special index")?;
    let rest: Vec<usize> = (0..p.dim()).filter(|&i| i != sp).collect();
    for &i in &rest {
        if !in_span(&p.e_basis[i], u_basis) {
            return Err(format!("e_{i} is not in U"));
        }
    }
    for i in 0..p.dim() {
        if !form_value(omega, &p.e_basis[sp], &p.e_basis[i]).is_zero() {
            return Err(format!("e_special is not orthogonal to e_{i}"));
        }
    }
    check_odd_shape(p)?;
    if p.s_set.as_ref() != Some(&p.s_from_tags()) {
        return Err("S does not match its definition".into());
    }
    check_hyperbolic(p, omega, &rest)
}
