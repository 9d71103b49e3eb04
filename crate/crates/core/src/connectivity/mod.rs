//! Connectivity of `H ∩ Stab(V•)` for the subgroup families of the
//! classification. The verdict comes from the character lattice of the
//! diagonal constraints read off an adapted presentation; disconnected cases
//! carry an explicit witness that is re-checked against the group's
//! definition.

mod constraints;
mod family;
mod membership;
mod trace;

pub use constraints::extract_constraints;
pub use family::{FamilyKind, SubgroupFamily};
pub use membership::{
    is_member, is_member_in_e_coordinates, sp_odd_equations_hold, sp_odd_membership,
    sp_t1_torus_section,
};
pub use trace::{reduce_trace, KernelShape, ReductionStep, StepCase};

use rand::Rng;
use serde::Serialize;

use crate::adapted_bases::{
    check_decomposition_output, check_odd_output, check_symplectic_output,
    decomposition_adapted_basis, odd_symplectic_adapted_basis, symplectic_adapted_basis,
};
use crate::charlattice::{
    component_group, sign_character_value, sign_torsion_point, torsion_characters, CharacterSystem,
};
use crate::error::{precondition, Error, Result};
use crate::exactlin::{form_kernel, in_span, int, unit, BilinearForm, Matrix, Vector};
use crate::flags::{check_presentation, is_standard_flag, AdaptedPresentation, Flag, VectorTag};
use crate::sampling;

/// The linear data a family is defined by, in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyData {
    Decomposition {
        u_basis: Vec<Vector>,
        w_basis: Vec<Vector>,
    },
    Symplectic {
        omega: BilinearForm,
    },
    OddSymplectic {
        omega: BilinearForm,
        u_basis: Vec<Vector>,
    },
    Orthogonal {
        form: BilinearForm,
    },
}

impl FamilyData {
    /// Coordinate blocks, standard forms: `U` is spanned by the leading
    /// coordinates and the odd symplectic kernel is the last coordinate.
    pub fn standard(family: SubgroupFamily) -> Self {
        let dim = family.ambient_dim();
        let units = |r: std::ops::Range<usize>| r.map(|i| unit(dim, i)).collect::<Vec<_>>();
        match family {
            SubgroupFamily::So { n } => FamilyData::Orthogonal {
                form: BilinearForm::standard_symmetric(n),
            },
            SubgroupFamily::Sp { n } => FamilyData::Symplectic {
                omega: BilinearForm::standard_skew(n, 0),
            },
            SubgroupFamily::SpOdd { n } | SubgroupFamily::SpT1 { n } => FamilyData::OddSymplectic {
                omega: BilinearForm::standard_skew(n, 1),
                u_basis: units(0..2 * n),
            },
            _ => {
                let (m, _) = family.blocks().expect("decomposition family");
                FamilyData::Decomposition {
                    u_basis: units(0..m),
                    w_basis: units(m..dim),
                }
            }
        }
    }

    /// Random data of the right shape: a random complementary pair, or a
    /// random form pulled back from the standard one together with a random
    /// hyperplane `U` missing its kernel. `SO(n)` keeps the standard form.
    pub fn random(family: SubgroupFamily, rng: &mut impl Rng) -> Self {
        let dim = family.ambient_dim();
        match family {
            SubgroupFamily::So { .. } => Self::standard(family),
            SubgroupFamily::Sp { n } => FamilyData::Symplectic {
                omega: sampling::random_skew_form(rng, n, 0),
            },
            SubgroupFamily::SpOdd { n } | SubgroupFamily::SpT1 { n } => {
                let omega = sampling::random_skew_form(rng, n, 1);
                let kernel = form_kernel(&omega);
                let u_basis = loop {
                    let mut cand = sampling::random_basis(rng, dim, 3);
                    cand.truncate(dim - 1);
                    if !in_span(&kernel[0], &cand) {
                        break cand;
                    }
                };
                FamilyData::OddSymplectic { omega, u_basis }
            }
            _ => {
                let (m, _) = family.blocks().expect("decomposition family");
                let (u_basis, w_basis) = sampling::random_decomposition(rng, dim, m);
                FamilyData::Decomposition { u_basis, w_basis }
            }
        }
    }

    fn check_for(&self, family: SubgroupFamily) -> Result<()> {
        let dim = family.ambient_dim();
        let lengths_ok = |vs: &[Vector]| vs.iter().all(|v| v.len() == dim);
        let ok = match (self, family.kind()) {
            (FamilyData::Decomposition { u_basis, w_basis }, FamilyKind::Decomposition) => {
                let (m, n) = family.blocks().expect("blocks");
                u_basis.len() == m
                    && w_basis.len() == n
                    && lengths_ok(u_basis)
                    && lengths_ok(w_basis)
            }
            (FamilyData::Symplectic { omega }, FamilyKind::Symplectic) => omega.dim() == dim,
            (FamilyData::OddSymplectic { omega, u_basis }, FamilyKind::OddSymplectic) => {
                omega.dim() == dim && u_basis.len() + 1 == dim && lengths_ok(u_basis)
            }
            (FamilyData::Orthogonal { form }, FamilyKind::Orthogonal) => form.dim() == dim,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            precondition(format!("data does not match the shape of {family}"))
        }
    }
}

/// Runs the constructor that matches the family.
pub fn adapted_presentation(
    family: SubgroupFamily,
    f: &Flag,
    data: &FamilyData,
) -> Result<AdaptedPresentation> {
    if f.dim() != family.ambient_dim() {
        return precondition(format!(
            "{family} acts on dimension {}, flag has dimension {}",
            family.ambient_dim(),
            f.dim()
        ));
    }
    data.check_for(family)?;
    match data {
        FamilyData::Decomposition { u_basis, w_basis } => {
            decomposition_adapted_basis(f, u_basis, w_basis)
        }
        FamilyData::Symplectic { omega } => symplectic_adapted_basis(f, omega),
        FamilyData::OddSymplectic { omega, u_basis } => {
            odd_symplectic_adapted_basis(f, omega, u_basis)
        }
        FamilyData::Orthogonal { form } => {
            let n = f.dim();
            if !is_standard_flag(f) || *form.gram() != Matrix::identity(n) {
                return Err(Error::Unsupported(
                    "SO(n) is only decided for the standard form and the standard flag".into(),
                ));
            }
            Ok(AdaptedPresentation::bare(
                (0..n).map(|i| unit(n, i)).collect(),
                (0..n).map(VectorTag::Pure).collect(),
            ))
        }
    }
}

/// Checks that `p` is a presentation of `f` carrying every label the family
/// needs and satisfying the constructor's guarantees for `data`.
pub fn check_family_presentation(
    family: SubgroupFamily,
    f: &Flag,
    data: &FamilyData,
    p: &AdaptedPresentation,
) -> std::result::Result<(), String> {
    if p.dim() != family.ambient_dim() {
        return Err(format!("presentation dimension does not match {family}"));
    }
    match data {
        FamilyData::Decomposition { u_basis, w_basis } => {
            check_decomposition_output(p, f, u_basis, w_basis)
        }
        FamilyData::Symplectic { omega } => check_symplectic_output(p, f, omega),
        FamilyData::OddSymplectic { omega, u_basis } => check_odd_output(p, f, omega, u_basis),
        FamilyData::Orthogonal { .. } => {
            check_presentation(p, f)?;
            let n = f.dim();
            let standard = p.e_basis.iter().enumerate().all(|(i, e)| *e == unit(n, i))
                && p.v_tags
                    .iter()
                    .enumerate()
                    .all(|(i, t)| *t == VectorTag::Pure(i));
            if standard {
                Ok(())
            } else {
                Err("SO(n) presentations must be the standard one".into())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub family: SubgroupFamily,
    pub dim: usize,
    pub components: u64,
    pub factors: Vec<u64>,
    pub constraints: CharacterSystem,
    pub presentation: AdaptedPresentation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<ReductionStep>>,
    /// Two group elements, in ambient coordinates, lying in different
    /// components.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[Matrix; 2]>,
}

pub fn analyze(family: SubgroupFamily, f: &Flag, data: &FamilyData) -> Result<ConnectivityReport> {
    let p = adapted_presentation(family, f, data)?;
    check_family_presentation(family, f, data, &p).map_err(Error::Invariant)?;
    report(family, f, data, p)
}

/// Like [`analyze`] but starting from a ready-made presentation, which is
/// checked against its own flag and `data` first.
pub fn analyze_presentation(
    family: SubgroupFamily,
    data: &FamilyData,
    p: AdaptedPresentation,
) -> Result<ConnectivityReport> {
    if p.dim() != family.ambient_dim() {
        return precondition(format!("presentation dimension does not match {family}"));
    }
    data.check_for(family)?;
    let f = p.flag()?;
    check_family_presentation(family, &f, data, &p).map_err(Error::Precondition)?;
    report(family, &f, data, p)
}

fn report(
    family: SubgroupFamily,
    f: &Flag,
    data: &FamilyData,
    p: AdaptedPresentation,
) -> Result<ConnectivityReport> {
    let constraints = extract_constraints(family, &p)?;
    let group = component_group(&constraints);
    let (trace, witness) = if group.is_connected() {
        let trace = if family.is_expected_connected() {
            Some(reduce_trace(family, &p)?)
        } else {
            None
        };
        (trace, None)
    } else {
        (
            None,
            Some(disconnection_witness(family, f, data, &p, &constraints)?),
        )
    };
    Ok(ConnectivityReport {
        family,
        dim: f.dim(),
        components: group.order,
        factors: group.factors,
        constraints,
        presentation: p,
        trace,
        witness,
    })
}

/// Identity and a sign matrix (diagonal in the `e`-basis) outside the
/// identity component, both checked for membership.
fn disconnection_witness(
    family: SubgroupFamily,
    f: &Flag,
    data: &FamilyData,
    p: &AdaptedPresentation,
    constraints: &CharacterSystem,
) -> Result<[Matrix; 2]> {
    let negative = sign_torsion_point(constraints).ok_or_else(|| {
        Error::Unsupported("component group has no element of order two to exhibit".into())
    })?;
    let separated = torsion_characters(constraints)
        .iter()
        .any(|(_, chi)| !sign_character_value(chi, &negative));
    if !separated {
        return Err(Error::Invariant(
            "witness is not separated by a torsion character".into(),
        ));
    }
    let diag: Vec<_> = negative
        .iter()
        .map(|&neg| int(if neg { -1 } else { 1 }))
        .collect();
    let e = p.e_matrix();
    let e_inv = e.inverse().expect("e-basis is a basis");
    let g = &(&e * &Matrix::diagonal(&diag)) * &e_inv;
    let id = Matrix::identity(f.dim());
    for (name, x) in [("identity", &id), ("sign element", &g)] {
        if !is_member(family, data, f, x) {
            return Err(Error::Invariant(format!(
                "witness {name} fails the membership test"
            )));
        }
    }
    Ok([id, g])
}

/// The flag `(e_1 + e_{n+1}, ..., e_n + e_{2n}, e_1, ..., e_n)` in `Q^{2n}`.
pub fn negative_flag_sglgl(n: usize) -> Flag {
    assert!(n >= 1, "negative_flag_sglgl needs n >= 1");
    let d = 2 * n;
    let mixed = (0..n).map(|i| {
        let mut v = unit(d, i);
        v[n + i] = int(1);
        v
    });
    let pure = (0..n).map(|i| unit(d, i));
    Flag::new(mixed.chain(pure).collect()).expect("triangular change of basis")
}

/// The report for `SO(n)` on the standard flag with the standard form.
pub fn so_witness(n: usize) -> Result<ConnectivityReport> {
    if n < 2 {
        return precondition("so_witness needs n >= 2");
    }
    let family = SubgroupFamily::So { n };
    analyze(family, &Flag::standard(n), &FamilyData::standard(family))
}

#[cfg(test)]
mod tests;
