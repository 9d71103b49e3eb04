use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{precondition, Error, Result};

/// The subgroups of the classification, with their size parameters.
///
/// `Sp`, `SpOdd` and `SpT1` carry the number of hyperbolic pairs `n`; their
/// textual names use `2n` (`Sp(4)` has `n = 2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupFamily {
    GlGl { m: usize, n: usize },
    SlGl { m: usize, n: usize },
    DetEqual { m: usize, n: usize },
    SlSl { m: usize, n: usize },
    SGlGl { m: usize, n: usize },
    Sp { n: usize },
    SpOdd { n: usize },
    SpT1 { n: usize },
    So { n: usize },
}

/// Which constructor produces presentations for a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Decomposition,
    Symplectic,
    OddSymplectic,
    Orthogonal,
}

impl SubgroupFamily {
    pub fn ambient_dim(&self) -> usize {
        use SubgroupFamily::*;
        match *self {
            GlGl { m, n } | SlGl { m, n } | DetEqual { m, n } | SlSl { m, n } | SGlGl { m, n } => {
                m + n
            }
            Sp { n } => 2 * n,
            SpOdd { n } | SpT1 { n } => 2 * n + 1,
            So { n } => n,
        }
    }

    pub fn kind(&self) -> FamilyKind {
        use SubgroupFamily::*;
        match self {
            GlGl { .. } | SlGl { .. } | DetEqual { .. } | SlSl { .. } | SGlGl { .. } => {
                FamilyKind::Decomposition
            }
            Sp { .. } => FamilyKind::Symplectic,
            SpOdd { .. } | SpT1 { .. } => FamilyKind::OddSymplectic,
            So { .. } => FamilyKind::Orthogonal,
        }
    }

    /// `(dim U, dim W)` for the decomposition families.
    pub fn blocks(&self) -> Option<(usize, usize)> {
        use SubgroupFamily::*;
        match *self {
            GlGl { m, n } | SlGl { m, n } | DetEqual { m, n } | SlSl { m, n } | SGlGl { m, n } => {
                Some((m, n))
            }
            _ => None,
        }
    }

    /// Families covered by the classification theorem's positive list.
    pub fn is_expected_connected(&self) -> bool {
        match *self {
            SubgroupFamily::SGlGl { m, n } => m != n,
            SubgroupFamily::So { .. } => false,
            _ => true,
        }
    }

    fn check(self) -> Result<Self> {
        use SubgroupFamily::*;
        match self {
            GlGl { m, n } | SlGl { m, n } | DetEqual { m, n } | SlSl { m, n } | SGlGl { m, n }
                if m + n == 0 =>
            {
                precondition("block sizes must not both be zero")
            }
            Sp { n: 0 } | SpOdd { n: 0 } | SpT1 { n: 0 } => {
                precondition("symplectic families need at least one pair")
            }
            So { n } if n < 2 => precondition("SO(n) needs n >= 2"),
            f => Ok(f),
        }
    }
}

impl fmt::Display for SubgroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SubgroupFamily::*;
        match *self {
            GlGl { m, n } => write!(f, "GLxGL({m},{n})"),
            SlGl { m, n } => write!(f, "SLxGL({m},{n})"),
            DetEqual { m, n } => write!(f, "DetEqual({m},{n})"),
            SlSl { m, n } => write!(f, "SLxSL({m},{n})"),
            SGlGl { m, n } => write!(f, "S_GLxGL({m},{n})"),
            Sp { n } => write!(f, "Sp({})", 2 * n),
            SpOdd { n } => write!(f, "SpOdd({})", 2 * n),
            SpT1 { n } => write!(f, "SpT1({})", 2 * n),
            So { n } => write!(f, "SO({n})"),
        }
    }
}

impl FromStr for SubgroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("unknown subgroup family {s:?}"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let args = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let name = &s[..open];
        let pair = || match nums[..] {
            [m, n] => Ok((m, n)),
            _ => Err(bad()),
        };
        let even = || match nums[..] {
            [d] if d % 2 == 0 => Ok(d / 2),
            _ => Err(bad()),
        };
        use SubgroupFamily::*;
        let family = match name {
            "GLxGL" => pair().map(|(m, n)| GlGl { m, n })?,
            "SLxGL" => pair().map(|(m, n)| SlGl { m, n })?,
            "DetEqual" => pair().map(|(m, n)| DetEqual { m, n })?,
            "SLxSL" => pair().map(|(m, n)| SlSl { m, n })?,
            "S_GLxGL" => pair().map(|(m, n)| SGlGl { m, n })?,
            "Sp" => Sp { n: even()? },
            "SpOdd" => SpOdd { n: even()? },
            "SpT1" => SpT1 { n: even()? },
            "SO" => match nums[..] {
                [n] => So { n },
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        };
        family.check()
    }
}

impl Serialize for SubgroupFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SubgroupFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in [
            "GLxGL(2,1)",
            "SLxGL(0,3)",
            "DetEqual(1,1)",
            "SLxSL(2,2)",
            "S_GLxGL(3,1)",
            "Sp(4)",
            "SpOdd(2)",
            "SpT1(6)",
            "SO(5)",
        ] {
            let f: SubgroupFamily = name.parse().unwrap();
            assert_eq!(f.to_string(), name);
        }
        assert_eq!(
            "Sp(4)".parse::<SubgroupFamily>().unwrap(),
            SubgroupFamily::Sp { n: 2 }
        );
        assert_eq!(
            "SpOdd(4)".parse::<SubgroupFamily>().unwrap().ambient_dim(),
            5
        );
    }

    #[test]
    fn rejects_bad_names() {
        for name in [
            "Sp(3)",
            "SO(1)",
            "GLxGL(0,0)",
            "GLxGL(1)",
            "Foo(1,2)",
            "SLxSL(1,2",
            "SpT1(0)",
        ] {
            assert!(name.parse::<SubgroupFamily>().is_err(), "{name}");
        }
    }
}
