use std::collections::BTreeMap;

use super::SubgroupFamily;
use crate::charlattice::CharacterSystem;
use crate::error::{precondition, Result};
use crate::flags::{AdaptedPresentation, Block, VectorTag};

fn basis_row(n: usize, entries: &[(usize, i64)]) -> Vec<i64> {
    let mut row = vec![0; n];
    for &(i, c) in entries {
        row[i] += c;
    }
    row
}

/// Pairs `(i, ī)` with `i < ī`, in increasing order of `i`.
fn pairs(pairing: &BTreeMap<usize, usize>) -> Vec<(usize, usize)> {
    pairing
        .iter()
        .filter(|(i, j)| i < j)
        .map(|(&i, &j)| (i, j))
        .collect()
}

/// Equations on the diagonal entries `λ_i` (in the `e`-basis) of elements of
/// `H ∩ Stab(V•)`: one tie `λ_i = λ_j` per mixed vector, plus the family's
/// determinant, form or torus rows.
pub fn extract_constraints(
    family: SubgroupFamily,
    p: &AdaptedPresentation,
) -> Result<CharacterSystem> {
    let n = p.dim();
    if n != family.ambient_dim() {
        return precondition(format!(
            "presentation has dimension {n}, {family} needs {}",
            family.ambient_dim()
        ));
    }
    let mut s = CharacterSystem::empty(n);
    for t in &p.v_tags {
        if let VectorTag::Mixed(i, j) = *t {
            s.push(basis_row(n, &[(i, 1), (j, -1)]));
        }
    }

    let block_sum = |b: Block, c: i64| -> Result<Vec<(usize, i64)>> {
        let blocks =
            p.blocks.as_ref().filter(|m| m.len() == n).ok_or_else(|| {
                crate::Error::Precondition(format!("{family} needs block labels"))
            })?;
        Ok(blocks
            .iter()
            .filter(|(_, &x)| x == b)
            .map(|(&i, _)| (i, c))
            .collect())
    };
    let need_pairs = || -> Result<Vec<(usize, usize)>> {
        match &p.pairing {
            Some(m) => Ok(pairs(m)),
            None => precondition(format!("{family} needs a pairing")),
        }
    };
    let need_special = || -> Result<usize> {
        p.special
            .ok_or_else(|| crate::Error::Precondition(format!("{family} needs a special index")))
    };

    use SubgroupFamily::*;
    match family {
        GlGl { .. } => {
            block_sum(Block::U, 1)?;
        }
        SlGl { .. } => s.push(basis_row(n, &block_sum(Block::U, 1)?)),
        SlSl { .. } => {
            s.push(basis_row(n, &block_sum(Block::U, 1)?));
            s.push(basis_row(n, &block_sum(Block::W, 1)?));
        }
        DetEqual { .. } => {
            let mut e = block_sum(Block::U, 1)?;
            e.extend(block_sum(Block::W, -1)?);
            s.push(basis_row(n, &e));
        }
        SGlGl { .. } => {
            let mut e = block_sum(Block::U, 1)?;
            e.extend(block_sum(Block::W, 1)?);
            s.push(basis_row(n, &e));
        }
        Sp { .. } => {
            for (i, j) in need_pairs()? {
                s.push(basis_row(n, &[(i, 1), (j, 1)]));
            }
        }
        SpOdd { .. } => {
            let sp = need_special()?;
            for (i, j) in need_pairs()? {
                s.push(basis_row(n, &[(i, 1), (j, 1)]));
            }
            s.push(basis_row(n, &[(sp, 1)]));
        }
        SpT1 { .. } => {
            // λ_i λ_ī = μ² for every pair and λ_special = μ^{-2n}, with μ eliminated
            let sp = need_special()?;
            let ps = need_pairs()?;
            for (a, &(i, j)) in ps.iter().enumerate() {
                for &(k, l) in &ps[a + 1..] {
                    s.push(basis_row(n, &[(i, 1), (j, 1), (k, -1), (l, -1)]));
                }
            }
            let &(i, j) = ps
                .first()
                .ok_or_else(|| crate::Error::Precondition("SpT1 needs at least one pair".into()))?;
            let k = ps.len() as i64;
            s.push(basis_row(n, &[(sp, 1), (i, k), (j, k)]));
        }
        So { .. } => {
            for i in 0..n {
                s.push(basis_row(n, &[(i, 2)]));
            }
            s.push(vec![1; n]);
        }
    }
    Ok(s)
}
