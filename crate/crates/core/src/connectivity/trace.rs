use serde::Serialize;

use super::SubgroupFamily;
use crate::adapted_bases::{
    check_decomposition_output, check_odd_output, check_symplectic_output,
    decomposition_adapted_basis, odd_symplectic_adapted_basis, symplectic_adapted_basis,
};
use crate::error::{Error, Result};
use crate::exactlin::{add_vectors, in_span, int, unit, BilinearForm, FormKind, Matrix, Vector};
use crate::flags::{
    presentation_vectors, quotient_flag, AdaptedPresentation, Block, Flag, VectorTag,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepCase {
    #[serde(rename = "pure-in-U")]
    PureInU,
    #[serde(rename = "pure-in-W")]
    PureInW,
    #[serde(rename = "mixed")]
    Mixed,
    #[serde(rename = "symplectic-pair")]
    SymplecticPair,
    /// Restriction to the kernel line, `H → C^×`, whose kernel is the
    /// odd symplectic group.
    #[serde(rename = "torus-section")]
    TorusSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelShape {
    Unipotent,
    TorusExtension,
}

/// One inductive step: the flag vector consumed, the case it falls in, the
/// shape of the kernel of the projection, and the group it projects onto
/// together with that group's presentation (in its own coordinates).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub tag: VectorTag,
    pub case: StepCase,
    pub kernel: KernelShape,
    pub family: SubgroupFamily,
    pub dim: usize,
    pub presentation: AdaptedPresentation,
}

fn units(n: usize, idx: impl IntoIterator<Item = usize>) -> Vec<Vector> {
    idx.into_iter().map(|i| unit(n, i)).collect()
}

/// Hyperbolic Gram matrix of `p` in its `e`-basis: `+1` at `(i, ī)` for
/// `i < ī`, zero on the special index.
fn hyperbolic_gram(p: &AdaptedPresentation) -> Matrix {
    let n = p.dim();
    let mut rows = vec![vec![int(0); n]; n];
    if let Some(pairing) = &p.pairing {
        for (&i, &j) in pairing {
            rows[i][j] = int(if i < j { 1 } else { -1 });
        }
    }
    Matrix::from_rows(&rows, n)
}

fn sub_gram(g: &Matrix, kept: &[usize]) -> BilinearForm {
    let rows: Vec<Vector> = kept
        .iter()
        .map(|&i| kept.iter().map(|&j| g[(i, j)].clone()).collect())
        .collect();
    BilinearForm::new(Matrix::from_rows(&rows, kept.len()), FormKind::Skew)
        .expect("principal submatrix of a skew matrix is skew")
}

struct Quotient {
    flag: Flag,
    kept: Vec<usize>,
}

/// `V• / span(e_i : i ∈ removed)` in the coordinates of the remaining `e`'s.
fn quotient_by(p_e: &AdaptedPresentation, removed: &[usize]) -> Result<Quotient> {
    let n = p_e.dim();
    let flag = p_e.flag()?;
    let q = quotient_flag(&flag, &units(n, removed.iter().copied()))?;
    let kept = (0..n).filter(|i| !removed.contains(i)).collect();
    Ok(Quotient { flag: q.flag, kept })
}

fn invariant(msg: String) -> Error {
    Error::Invariant(format!("reduction trace: {msg}"))
}

/// Follows the inductive proof for the family, consuming the first flag
/// vector at each step until the remaining space has dimension at most 1.
pub fn reduce_trace(family: SubgroupFamily, p: &AdaptedPresentation) -> Result<Vec<ReductionStep>> {
    match family {
        SubgroupFamily::So { .. } => {
            return Err(Error::Unsupported(
                "no connectivity proof to trace for SO(n)".into(),
            ))
        }
        SubgroupFamily::SGlGl { m, n } if m == n => {
            return Err(Error::Unsupported(format!(
                "no connectivity proof to trace for {family}"
            )))
        }
        _ => {}
    }
    if p.dim() != family.ambient_dim() {
        return Err(Error::Precondition(format!(
            "presentation dimension does not match {family}"
        )));
    }
    let mut steps = Vec::new();
    let mut family = family;
    let mut p = p.clone();
    if let SubgroupFamily::SpT1 { n } = family {
        family = SubgroupFamily::SpOdd { n };
        steps.push(ReductionStep {
            tag: p.v_tags[0],
            case: StepCase::TorusSection,
            kernel: KernelShape::TorusExtension,
            family,
            dim: p.dim(),
            presentation: p.clone(),
        });
    }
    while p.dim() > 1 {
        let step = match family {
            SubgroupFamily::Sp { .. } => symplectic_step(family, &p)?,
            SubgroupFamily::SpOdd { .. } => odd_step(family, &p)?,
            _ => decomposition_step(family, &p)?,
        };
        family = step.family;
        p = step.presentation.clone();
        steps.push(step);
    }
    Ok(steps)
}

fn decomposition_step(family: SubgroupFamily, p: &AdaptedPresentation) -> Result<ReductionStep> {
    use SubgroupFamily::*;
    let p_e = p.in_e_coordinates();
    let (m, n) = family.blocks().expect("decomposition family");
    let block = |i: usize| {
        p.block_of(i)
            .ok_or_else(|| invariant(format!("e_{i} has no block label")))
    };
    let tag = p.v_tags[0];
    let (case, removed) = match tag {
        VectorTag::Pure(i) if block(i)? == Block::U => (StepCase::PureInU, vec![i]),
        VectorTag::Pure(i) => (StepCase::PureInW, vec![i]),
        VectorTag::Mixed(i, j) => (StepCase::Mixed, vec![i, j]),
    };
    let (m1, n1) = match case {
        StepCase::PureInU => (m - 1, n),
        StepCase::PureInW => (m, n - 1),
        _ => (m - 1, n - 1),
    };
    let others_all_mixed = || {
        (0..p.dim()).filter(|i| !removed.contains(i)).all(|i| {
            p.v_tags
                .iter()
                .any(|t| matches!(t, VectorTag::Mixed(..)) && t.involves(i))
        })
    };
    let gl = GlGl { m: m1, n: n1 };
    let mut swap = false;
    let (kernel, next) = match (family, case) {
        (GlGl { .. }, _) => (KernelShape::TorusExtension, gl),
        (SlGl { .. }, StepCase::PureInW) => (KernelShape::TorusExtension, SlGl { m: m1, n: n1 }),
        (SlGl { .. }, _) => (KernelShape::Unipotent, gl),
        (DetEqual { .. }, StepCase::Mixed) => {
            (KernelShape::TorusExtension, DetEqual { m: m1, n: n1 })
        }
        (DetEqual { .. }, _) => (KernelShape::Unipotent, gl),
        (SGlGl { .. }, _) => (KernelShape::Unipotent, gl),
        (SlSl { .. }, StepCase::Mixed) => (KernelShape::TorusExtension, DetEqual { m: m1, n: n1 }),
        (SlSl { .. }, _) if others_all_mixed() => (KernelShape::Unipotent, SlSl { m: m1, n: n1 }),
        (SlSl { .. }, StepCase::PureInU) => {
            // GL(U') x SL(W): the special linear block becomes the first one
            swap = true;
            (KernelShape::TorusExtension, SlGl { m: n1, n: m1 })
        }
        (SlSl { .. }, _) => (KernelShape::TorusExtension, SlGl { m: m1, n: n1 }),
        _ => unreachable!("decomposition_step on {family}"),
    };

    let q = quotient_by(&p_e, &removed)?;
    let d = q.kept.len();
    let mut u = Vec::new();
    let mut w = Vec::new();
    for (t, &i) in q.kept.iter().enumerate() {
        let in_u = (block(i)? == Block::U) != swap;
        if in_u { &mut u } else { &mut w }.push(unit(d, t));
    }
    let presentation = decomposition_adapted_basis(&q.flag, &u, &w)?;
    check_decomposition_output(&presentation, &q.flag, &u, &w).map_err(invariant)?;
    Ok(ReductionStep {
        tag,
        case,
        kernel,
        family: next,
        dim: d,
        presentation,
    })
}

fn symplectic_step(family: SubgroupFamily, p: &AdaptedPresentation) -> Result<ReductionStep> {
    let SubgroupFamily::Sp { n } = family else {
        unreachable!()
    };
    let tag = p.v_tags[0];
    let VectorTag::Pure(a) = tag else {
        return Err(invariant(
            "symplectic presentation with a mixed vector".into(),
        ));
    };
    let b = p
        .partner(a)
        .ok_or_else(|| invariant(format!("e_{a} is unpaired")))?;
    let p_e = p.in_e_coordinates();
    let q = quotient_by(&p_e, &[a, b])?;
    let presentation = if q.kept.is_empty() {
        AdaptedPresentation::bare(Vec::new(), Vec::new())
    } else {
        let omega = sub_gram(&hyperbolic_gram(p), &q.kept);
        let pres = symplectic_adapted_basis(&q.flag, &omega)?;
        check_symplectic_output(&pres, &q.flag, &omega).map_err(invariant)?;
        pres
    };
    Ok(ReductionStep {
        tag,
        case: StepCase::SymplecticPair,
        kernel: KernelShape::TorusExtension,
        family: SubgroupFamily::Sp { n: n - 1 },
        dim: q.kept.len(),
        presentation,
    })
}

fn odd_step(family: SubgroupFamily, p: &AdaptedPresentation) -> Result<ReductionStep> {
    let SubgroupFamily::SpOdd { n } = family else {
        unreachable!()
    };
    let sp = p
        .special
        .ok_or_else(|| invariant("missing special index".into()))?;
    let a = (0..p.dim())
        .find(|&i| i != sp)
        .ok_or_else(|| invariant("no symplectic pair left".into()))?;
    let b = p
        .partner(a)
        .ok_or_else(|| invariant(format!("e_{a} is unpaired")))?;
    let tag = *p
        .v_tags
        .iter()
        .find(|t| t.involves(a))
        .ok_or_else(|| invariant(format!("no flag vector involves e_{a}")))?;

    let dim = p.dim();
    let vs = presentation_vectors(&p.in_e_coordinates());
    let es = unit(dim, sp);
    let pinned = |i: usize| {
        let e = unit(dim, i);
        let shifted = add_vectors(&e, &es);
        (1..=dim).any(|k| in_span(&shifted, &vs[..k]) && !in_span(&e, &vs[..k]))
    };
    let kernel = if pinned(a) || pinned(b) {
        KernelShape::Unipotent
    } else {
        KernelShape::TorusExtension
    };

    let p_e = p.in_e_coordinates();
    let q = quotient_by(&p_e, &[a, b])?;
    let d = q.kept.len();
    let omega = sub_gram(&hyperbolic_gram(p), &q.kept);
    let u: Vec<Vector> = q
        .kept
        .iter()
        .enumerate()
        .filter(|&(_, &i)| i != sp)
        .map(|(t, _)| unit(d, t))
        .collect();
    let presentation = odd_symplectic_adapted_basis(&q.flag, &omega, &u)?;
    check_odd_output(&presentation, &q.flag, &omega, &u).map_err(invariant)?;
    Ok(ReductionStep {
        tag,
        case: StepCase::SymplecticPair,
        kernel,
        family: SubgroupFamily::SpOdd { n: n - 1 },
        dim: d,
        presentation,
    })
}
