//! Exact linear algebra over the rationals and the algorithms built on it:
//! adapted bases for flags, character lattices of diagonal tori, and the
//! connectivity test for intersections with flag stabilizers.
//!
//! ```
//! use parcon_core::connectivity::{analyze, negative_flag_sglgl, FamilyData, SubgroupFamily};
//! use parcon_core::flags::random_flag;
//!
//! # fn main() -> parcon_core::Result<()> {
//! let family: SubgroupFamily = "SpOdd(4)".parse()?;
//! let flag = random_flag(family.ambient_dim(), 42);
//! let report = analyze(family, &flag, &FamilyData::standard(family))?;
//! assert_eq!(report.components, 1);
//!
//! let family: SubgroupFamily = "S_GLxGL(2,2)".parse()?;
//! let report = analyze(family, &negative_flag_sglgl(2), &FamilyData::standard(family))?;
//! assert_eq!(report.components, 2);
//! # Ok(())
//! # }
//! ```

pub mod adapted_bases;
pub mod charlattice;
pub mod connectivity;
pub mod error;
pub mod exactlin;
pub mod flags;
pub mod json;
pub mod oracle;
pub mod sampling;

pub use error::{Error, Result};
pub use exactlin::{BilinearForm, FormKind, Matrix, Rational, Vector};
pub use flags::{AdaptedPresentation, Block, Flag, QuotientFlag, VectorTag};
