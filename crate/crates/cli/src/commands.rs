use parcon_core::adapted_bases::{
    check_decomposition_output, check_odd_output, check_symplectic_output,
    decomposition_adapted_basis, odd_symplectic_adapted_basis, symplectic_adapted_basis,
};
use parcon_core::connectivity::{
    analyze as analyze_flag, analyze_presentation, negative_flag_sglgl, so_witness, FamilyData,
    SubgroupFamily,
};
use parcon_core::exactlin::unit;
use parcon_core::flags::random_flag;
use parcon_core::{AdaptedPresentation, BilinearForm, Flag};

use crate::input::{read_json, DataDocument};
use crate::{to_document, AdaptArgs, AnalyzeArgs, CliError, CliResult, Lemma, Witness};

/// Coordinate data for a lemma in dimension `dim`.
pub(crate) fn standard_lemma_data(
    lemma: Lemma,
    dim: usize,
    u_dim: Option<usize>,
) -> CliResult<FamilyData> {
    if dim == 0 {
        return Err(CliError::Precondition(
            "dimension must be at least 1".into(),
        ));
    }
    let units = |r: std::ops::Range<usize>| r.map(|i| unit(dim, i)).collect::<Vec<_>>();
    match lemma {
        Lemma::Decomposition => {
            let m = u_dim.unwrap_or(dim.div_ceil(2));
            if m > dim {
                return Err(CliError::Precondition(format!(
                    "dim U = {m} exceeds dimension {dim}"
                )));
            }
            Ok(FamilyData::Decomposition {
                u_basis: units(0..m),
                w_basis: units(m..dim),
            })
        }
        Lemma::Symplectic if dim.is_multiple_of(2) => Ok(FamilyData::Symplectic {
            omega: BilinearForm::standard_skew(dim / 2, 0),
        }),
        Lemma::OddSymplectic if dim % 2 == 1 => Ok(FamilyData::OddSymplectic {
            omega: BilinearForm::standard_skew(dim / 2, 1),
            u_basis: units(0..dim - 1),
        }),
        Lemma::Symplectic => Err(CliError::Precondition(format!(
            "a symplectic form needs even dimension, got {dim}"
        ))),
        Lemma::OddSymplectic => Err(CliError::Precondition(format!(
            "an odd symplectic form needs odd dimension, got {dim}"
        ))),
    }
}

/// Runs the constructor for `data` and its validator. A validator failure
/// is an internal error: the constructor promised the property.
pub(crate) fn adapt_checked(f: &Flag, data: &FamilyData) -> CliResult<AdaptedPresentation> {
    let n = f.dim();
    let wrong_length = |vs: &[parcon_core::Vector]| vs.iter().any(|v| v.len() != n);
    let (p, check) = match data {
        FamilyData::Decomposition { u_basis, w_basis } => {
            if wrong_length(u_basis) || wrong_length(w_basis) {
                return Err(CliError::Precondition(
                    "basis vectors must match the flag dimension".into(),
                ));
            }
            let p = decomposition_adapted_basis(f, u_basis, w_basis)?;
            let check = check_decomposition_output(&p, f, u_basis, w_basis);
            (p, check)
        }
        FamilyData::Symplectic { omega } => {
            if omega.dim() != n {
                return Err(CliError::Precondition(
                    "form size must match the flag dimension".into(),
                ));
            }
            let p = symplectic_adapted_basis(f, omega)?;
            let check = check_symplectic_output(&p, f, omega);
            (p, check)
        }
        FamilyData::OddSymplectic { omega, u_basis } => {
            if omega.dim() != n || wrong_length(u_basis) {
                return Err(CliError::Precondition(
                    "data must match the flag dimension".into(),
                ));
            }
            let p = odd_symplectic_adapted_basis(f, omega, u_basis)?;
            let check = check_odd_output(&p, f, omega, u_basis);
            (p, check)
        }
        FamilyData::Orthogonal { .. } => {
            return Err(CliError::Unsupported(
                "no constructor takes a symmetric form".into(),
            ))
        }
    };
    check.map_err(|m| {
        CliError::Internal(format!("constructed presentation fails validation: {m}"))
    })?;
    Ok(p)
}

pub(crate) fn adapt(args: &AdaptArgs) -> CliResult<String> {
    let (flag, data) = match (&args.input, args.seed) {
        (Some(path), _) => {
            let mut doc: DataDocument = read_json(path)?;
            let flag = doc.take_flag("adapt input")?;
            (flag, doc.lemma_data(args.lemma)?)
        }
        (None, Some(seed)) => {
            let dim = args.dim.expect("clap requires --dim with --seed");
            let data = standard_lemma_data(args.lemma, dim, args.u_dim)?;
            (random_flag(dim, seed), data)
        }
        (None, None) => unreachable!("clap requires a flag source"),
    };
    to_document(&adapt_checked(&flag, &data)?)
}

pub(crate) fn analyze(args: &AnalyzeArgs) -> CliResult<String> {
    let family = args.family;
    let data = match &args.data {
        Some(path) => read_json::<DataDocument>(path)?.family_data(family)?,
        None => FamilyData::standard(family),
    };
    let report = if let Some(seed) = args.seed {
        analyze_flag(family, &random_flag(family.ambient_dim(), seed), &data)?
    } else if let Some(path) = &args.flag {
        let flag: Flag = read_json(path)?;
        analyze_flag(family, &flag, &data)?
    } else if let Some(path) = &args.presentation {
        analyze_presentation(family, &data, read_json(path)?)?
    } else {
        match (args.witness.expect("clap requires a flag source"), family) {
            (Witness::SglglNegative, SubgroupFamily::SGlGl { m, n }) if m == n && n >= 1 => {
                analyze_flag(family, &negative_flag_sglgl(n), &data)?
            }
            (Witness::SoStandard, SubgroupFamily::So { n }) => so_witness(n)?,
            (Witness::SglglNegative, _) => {
                return Err(CliError::Parse(format!(
                    "witness sglgl-negative applies to S_GLxGL(n,n), not {family}"
                )))
            }
            (Witness::SoStandard, _) => {
                return Err(CliError::Parse(format!(
                    "witness so-standard applies to SO(n), not {family}"
                )))
            }
        }
    };
    to_document(&report)
}
