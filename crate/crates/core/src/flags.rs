//! Full flags, quotient flags and adapted presentations.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::exactlin::{
    add_vectors, coordinates, in_span, is_independent, rank_of, same_span, scale_vector, unit,
    Matrix, Rational, Vector,
};
use crate::json;
use crate::sampling;

/// Full flag `0 < V_1 < ... < V_n = Q^n` with `V_i` spanned by the first `i`
/// generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FlagRepr", into = "FlagRepr")]
pub struct Flag {
    generators: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
struct FlagRepr {
    n: usize,
    #[serde(with = "json::vectors")]
    generators: Vec<Vector>,
}

impl TryFrom<FlagRepr> for Flag {
    type Error = Error;
    fn try_from(r: FlagRepr) -> Result<Self> {
        if r.generators.len() != r.n {
            return precondition(format!(
                "flag declares n = {} but has {} generators",
                r.n,
                r.generators.len()
            ));
        }
        Flag::new(r.generators)
    }
}

impl From<Flag> for FlagRepr {
    fn from(f: Flag) -> Self {
        FlagRepr {
            n: f.dim(),
            generators: f.generators,
        }
    }
}

impl Flag {
    pub fn new(generators: Vec<Vector>) -> Result<Self> {
        let n = generators.len();
        if generators.iter().any(|g| g.len() != n) {
            return precondition("flag generators must have length equal to their count");
        }
        if !is_independent(&generators, n) {
            return precondition("flag generators are linearly dependent");
        }
        Ok(Self { generators })
    }

    pub fn standard(n: usize) -> Self {
        Self {
            generators: (0..n).map(|i| unit(n, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    /// Generators of `V_k`.
    pub fn level(&self, k: usize) -> &[Vector] {
        &self.generators[..k]
    }

    pub fn level_contains(&self, k: usize, v: &[Rational]) -> bool {
        in_span(v, self.level(k))
    }

    /// True when `g V_k <= V_k` for every level.
    pub fn is_stabilized_by(&self, g: &Matrix) -> bool {
        let n = self.dim();
        assert_eq!(
            (g.rows(), g.cols()),
            (n, n),
            "matrix size does not match flag"
        );
        (1..n).all(|k| {
            let mut span = self.level(k).to_vec();
            span.push(g.mul_vec(&self.generators[k - 1]));
            // earlier images are already known to lie in V_{k-1} <= V_k
            rank_of(&span, n) == k
        })
    }

    /// Same flag as `other`, level by level.
    pub fn same_flag(&self, other: &Flag) -> bool {
        self.dim() == other.dim()
            && (1..=self.dim()).all(|k| same_span(self.level(k), other.level(k), self.dim()))
    }

    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.generators, self.dim())
    }
}

/// Flag whose `i`-th generator is column `i` of `m`.
pub fn flag_from_matrix(m: &Matrix) -> Result<Flag> {
    if !m.is_square() {
        return precondition("flag matrix must be square");
    }
    Flag::new(m.column_vectors())
}

/// A flag on `V/W`, represented by coordinates in a complement of `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientFlag {
    /// The flag in the coordinates of `complement`.
    pub flag: Flag,
    /// Surviving generators of the original flag, one per quotient level.
    pub lifts: Vec<Vector>,
    /// Standard basis vectors completing `W` to a basis of the ambient space.
    pub complement: Vec<Vector>,
}

/// `V_i / (V_i ∩ W)`: keeps, in order, the generators that are independent of
/// `W` and of the earlier survivors.
pub fn quotient_flag(f: &Flag, w_basis: &[Vector]) -> Result<QuotientFlag> {
    let n = f.dim();
    if w_basis.iter().any(|w| w.len() != n) {
        panic!("quotient_flag: subspace vectors have the wrong dimension");
    }
    if !is_independent(w_basis, n) {
        return precondition("quotient_flag: subspace basis is linearly dependent");
    }
    let mut spanned = w_basis.to_vec();
    let mut complement = Vec::new();
    for i in 0..n {
        let e = unit(n, i);
        if !in_span(&e, &spanned) {
            spanned.push(e.clone());
            complement.push(e);
        }
    }
    let basis: Vec<Vector> = w_basis.iter().chain(&complement).cloned().collect();

    let mut lifts: Vec<Vector> = Vec::new();
    let mut seen = w_basis.to_vec();
    for g in f.generators() {
        if !in_span(g, &seen) {
            seen.push(g.clone());
            lifts.push(g.clone());
        }
    }
    let d = w_basis.len();
    let images: Vec<Vector> = lifts
        .iter()
        .map(|g| {
            let c = coordinates(g, &basis).expect("basis spans the ambient space");
            c[d..].to_vec()
        })
        .collect();
    Ok(QuotientFlag {
        flag: Flag::new(images)?,
        lifts,
        complement,
    })
}

pub fn random_flag(n: usize, seed: u64) -> Flag {
    assert!(n >= 1, "random_flag needs n >= 1");
    let mut rng = sampling::rng(seed);
    Flag {
        generators: sampling::random_basis(&mut rng, n, sampling::ENTRY_BOUND),
    }
}

// ---------------------------------------------------------------------------
// Adapted presentations

/// A flag vector given as one basis vector `e_i` or a sum `e_i + e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorTag {
    Pure(usize),
    Mixed(usize, usize),
}

impl VectorTag {
    pub fn indices(&self) -> Vec<usize> {
        match *self {
            VectorTag::Pure(i) => vec![i],
            VectorTag::Mixed(i, j) => vec![i, j],
        }
    }

    pub fn involves(&self, i: usize) -> bool {
        self.indices().contains(&i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    U,
    W,
}

/// A flag re-expressed through an `e`-basis: every flag vector `v_k` is an
/// `e_i` or a sum `e_i + e_j`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptedPresentation {
    #[serde(with = "json::vectors")]
    pub e_basis: Vec<Vector>,
    pub v_tags: Vec<VectorTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BTreeMap<usize, Block>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<BTreeMap<usize, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special: Option<usize>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s_set: Option<BTreeSet<usize>>,
}

impl AdaptedPresentation {
    /// Presentation with the given `e`-basis and tags and no labels.
    pub fn bare(e_basis: Vec<Vector>, v_tags: Vec<VectorTag>) -> Self {
        Self {
            e_basis,
            v_tags,
            blocks: None,
            pairing: None,
            special: None,
            s_set: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.e_basis.len()
    }

    /// `{ i : some v_k = e_i + e_special }`.
    pub fn s_from_tags(&self) -> BTreeSet<usize> {
        let Some(sp) = self.special else {
            return BTreeSet::new();
        };
        self.v_tags
            .iter()
            .filter_map(|t| match *t {
                VectorTag::Mixed(i, j) if j == sp => Some(i),
                VectorTag::Mixed(i, j) if i == sp => Some(j),
                _ => None,
            })
            .collect()
    }

    /// The same presentation with `e_i` replaced by the standard basis, i.e.
    /// everything expressed in `e`-coordinates.
    pub fn in_e_coordinates(&self) -> Self {
        let n = self.dim();
        Self {
            e_basis: (0..n).map(|i| unit(n, i)).collect(),
            ..self.clone()
        }
    }

    /// The flag spanned by the presentation's own vectors.
    pub fn flag(&self) -> Result<Flag> {
        Flag::new(presentation_vectors(self))
    }

    /// Matrix whose columns are the `e`-vectors.
    pub fn e_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.e_basis, self.dim())
    }

    pub fn block_of(&self, i: usize) -> Option<Block> {
        self.blocks.as_ref().and_then(|b| b.get(&i).copied())
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        self.pairing.as_ref().and_then(|p| p.get(&i).copied())
    }
}

pub fn presentation_vectors(p: &AdaptedPresentation) -> Vec<Vector> {
    p.v_tags
        .iter()
        .map(|t| match *t {
            VectorTag::Pure(i) => p.e_basis[i].clone(),
            VectorTag::Mixed(i, j) => add_vectors(&p.e_basis[i], &p.e_basis[j]),
        })
        .collect()
}

/// Checks every presentation invariant against `f`, reporting the first
/// violation.
pub fn check_presentation(p: &AdaptedPresentation, f: &Flag) -> std::result::Result<(), String> {
    let n = f.dim();
    if p.dim() != n || p.v_tags.len() != n {
        return Err(format!(
            "presentation has {} e-vectors and {} tags for a flag of dimension {n}",
            p.dim(),
            p.v_tags.len()
        ));
    }
    if p.e_basis.iter().any(|e| e.len() != n) {
        return Err("e-vector of wrong length".into());
    }
    if !is_independent(&p.e_basis, n) {
        return Err("e-basis is not a basis".into());
    }
    for (k, t) in p.v_tags.iter().enumerate() {
        match *t {
            VectorTag::Pure(i) if i >= n => return Err(format!("tag {k} index out of range")),
            VectorTag::Mixed(i, j) if i >= n || j >= n => {
                return Err(format!("tag {k} index out of range"))
            }
            VectorTag::Mixed(i, j) if i == j => {
                return Err(format!("tag {k} mixes e_{i} with itself"))
            }
            _ => {}
        }
    }
    let vs = presentation_vectors(p);
    for k in 1..=n {
        if rank_of(&vs[..k], n) != k {
            return Err(format!("v_1..v_{k} are dependent"));
        }
        let mut both = vs[..k].to_vec();
        both.extend_from_slice(f.level(k));
        if rank_of(&both, n) != k {
            return Err(format!("span(v_1..v_{k}) differs from V_{k}"));
        }
    }
    for (k, t) in p.v_tags.iter().enumerate() {
        if let VectorTag::Mixed(i, j) = *t {
            let mut span = vs[..k].to_vec();
            span.push(p.e_basis[i].clone());
            span.push(p.e_basis[j].clone());
            if rank_of(&span, n) != k + 2 {
                return Err(format!("mixed pair at position {k} meets V_{k}"));
            }
        }
    }
    if let Some(blocks) = &p.blocks {
        if blocks.keys().any(|&i| i >= n) {
            return Err("block label index out of range".into());
        }
    }
    if let Some(pairing) = &p.pairing {
        for (&i, &j) in pairing {
            if i >= n || j >= n {
                return Err("pairing index out of range".into());
            }
            if i == j {
                return Err(format!("pairing fixes {i}"));
            }
            if pairing.get(&j) != Some(&i) {
                return Err(format!("pairing is not an involution at {i}"));
            }
        }
    }
    if let Some(sp) = p.special {
        if sp >= n {
            return Err("special index out of range".into());
        }
    }
    if let Some(s) = &p.s_set {
        if p.special.is_none() {
            return Err("S given without a special index".into());
        }
        if *s != p.s_from_tags() {
            return Err("S does not match the mixed tags through the special index".into());
        }
    }
    Ok(())
}

pub fn validate_presentation(p: &AdaptedPresentation, f: &Flag) -> bool {
    check_presentation(p, f).is_ok()
}

/// Multiplies every generator by the given nonzero scalars; the flag is unchanged.
pub fn rescale_generators(f: &Flag, scalars: &[Rational]) -> Flag {
    assert_eq!(scalars.len(), f.dim());
    let gens = f
        .generators()
        .iter()
        .zip(scalars)
        .map(|(g, c)| {
            assert!(!c.is_zero(), "rescale_generators: zero scalar");
            scale_vector(c, g)
        })
        .collect();
    Flag { generators: gens }
}

/// The flag `V_1 < ... ` of the standard basis.
pub fn is_standard_flag(f: &Flag) -> bool {
    f.same_flag(&Flag::standard(f.dim()))
}
