//! Input documents. Every file is JSON with rationals as `"p/q"` strings or
//! plain integers.

use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use parcon_core::connectivity::{FamilyData, FamilyKind, SubgroupFamily};
use parcon_core::{BilinearForm, Flag, FormKind, Matrix, Vector};

use crate::{CliError, CliResult, Lemma};

#[derive(Debug, Deserialize)]
struct Vectors(#[serde(with = "parcon_core::json::vectors")] Vec<Vector>);

/// Linear data for a family or a lemma. Which fields are required depends
/// on the consumer; unknown fields are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataDocument {
    #[serde(default)]
    flag: Option<Flag>,
    #[serde(default)]
    u_basis: Option<Vectors>,
    #[serde(default)]
    w_basis: Option<Vectors>,
    /// Gram matrix of a skew form.
    #[serde(default)]
    omega: Option<Matrix>,
    /// Gram matrix of a symmetric form.
    #[serde(default)]
    form: Option<Matrix>,
}

pub fn read_text(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Parse(format!("cannot read standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

/// Parses a JSON file. Structural problems are parse errors; a document
/// that parses but describes an invalid object (dependent flag generators,
/// say) is a precondition failure.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        if e.is_data() && msg.contains("precondition failed") {
            CliError::Precondition(msg)
        } else {
            CliError::Parse(msg)
        }
    })
}

fn required<T>(field: Option<T>, name: &str, what: &str) -> CliResult<T> {
    field.ok_or_else(|| CliError::Parse(format!("{what} needs the field `{name}`")))
}

fn skew(gram: Matrix) -> CliResult<BilinearForm> {
    Ok(BilinearForm::new(gram, FormKind::Skew)?)
}

impl DataDocument {
    pub fn take_flag(&mut self, what: &str) -> CliResult<Flag> {
        required(self.flag.take(), "flag", what)
    }

    /// Data for `family`; fields belonging to other families are an error.
    pub fn family_data(self, family: SubgroupFamily) -> CliResult<FamilyData> {
        let what = family.to_string();
        let unexpected = |present: bool, name: &str| -> CliResult<()> {
            if present {
                Err(CliError::Parse(format!(
                    "{what} does not use the field `{name}`"
                )))
            } else {
                Ok(())
            }
        };
        unexpected(self.flag.is_some(), "flag")?;
        match family.kind() {
            FamilyKind::Decomposition => {
                unexpected(self.omega.is_some(), "omega")?;
                unexpected(self.form.is_some(), "form")?;
                Ok(FamilyData::Decomposition {
                    u_basis: required(self.u_basis, "u_basis", &what)?.0,
                    w_basis: required(self.w_basis, "w_basis", &what)?.0,
                })
            }
            FamilyKind::Symplectic => {
                unexpected(self.u_basis.is_some(), "u_basis")?;
                unexpected(self.w_basis.is_some(), "w_basis")?;
                unexpected(self.form.is_some(), "form")?;
                Ok(FamilyData::Symplectic {
                    omega: skew(required(self.omega, "omega", &what)?)?,
                })
            }
            FamilyKind::OddSymplectic => {
                unexpected(self.w_basis.is_some(), "w_basis")?;
                unexpected(self.form.is_some(), "form")?;
                Ok(FamilyData::OddSymplectic {
                    omega: skew(required(self.omega, "omega", &what)?)?,
                    u_basis: required(self.u_basis, "u_basis", &what)?.0,
                })
            }
            FamilyKind::Orthogonal => {
                unexpected(self.u_basis.is_some(), "u_basis")?;
                unexpected(self.w_basis.is_some(), "w_basis")?;
                unexpected(self.omega.is_some(), "omega")?;
                let gram = required(self.form, "form", &what)?;
                Ok(FamilyData::Orthogonal {
                    form: BilinearForm::new(gram, FormKind::Symmetric)?,
                })
            }
        }
    }

    /// Data for a lemma's constructor.
    pub fn lemma_data(self, lemma: Lemma) -> CliResult<FamilyData> {
        let what = format!("lemma {}", lemma.number());
        match lemma {
            Lemma::Decomposition => Ok(FamilyData::Decomposition {
                u_basis: required(self.u_basis, "u_basis", &what)?.0,
                w_basis: required(self.w_basis, "w_basis", &what)?.0,
            }),
            Lemma::Symplectic => Ok(FamilyData::Symplectic {
                omega: skew(required(self.omega, "omega", &what)?)?,
            }),
            Lemma::OddSymplectic => Ok(FamilyData::OddSymplectic {
                omega: skew(required(self.omega, "omega", &what)?)?,
                u_basis: required(self.u_basis, "u_basis", &what)?.0,
            }),
        }
    }
}
