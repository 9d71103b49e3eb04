//! Brute-force cross-checks. Nothing here calls the elimination-based Smith
//! form or the lattice point count; the only shared piece is the system
//! being checked.

use serde::Serialize;

use crate::charlattice::CharacterSystem;
use crate::connectivity::{extract_constraints, sp_odd_equations_hold, SubgroupFamily};
use crate::error::{precondition, Error, Result};
use crate::exactlin::{is_prime, PrimeFieldScalar};
use crate::flags::{AdaptedPresentation, VectorTag};

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors `g_k / g_{k-1}`, where `g_k` is the gcd of all `k×k`
/// minors, computed by exhaustive minor expansion.
pub fn gcd_minor_invariant_factors(rows: &[Vec<i64>], ncols: usize) -> Vec<u64> {
    let m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut factors = Vec::new();
    let mut previous: i128 = 1;
    for k in 1..=rows.len().min(ncols) {
        let mut g: i128 = 0;
        for rs in subsets(rows.len(), k) {
            for cs in subsets(ncols, k) {
                let minor: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c]).collect())
                    .collect();
                g = gcd(g, cofactor_det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        factors.push(u64::try_from(g / previous).expect("factor fits"));
        previous = g;
    }
    factors
}

fn pow_mod(mut base: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

pub const TORUS_MAX_RANK: usize = 6;
pub const TORUS_MAX_Q: u64 = 7;

/// Exhaustive count of `λ ∈ (F_q^×)^N` satisfying every row.
pub fn enumerate_torus_solutions(s: &CharacterSystem, q: u64) -> Result<u64> {
    if !is_prime(q) {
        return precondition(format!("{q} is not prime"));
    }
    if q > TORUS_MAX_Q || s.n > TORUS_MAX_RANK {
        return Err(Error::Guard(format!(
            "torus enumeration limited to N <= {TORUS_MAX_RANK}, q <= {TORUS_MAX_Q} (got N = {}, q = {q})",
            s.n
        )));
    }
    let order = q - 1;
    let exps: Vec<Vec<u64>> = s
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&e| e.rem_euclid(order as i64) as u64)
                .collect()
        })
        .collect();
    let mut lambda = vec![1u64; s.n];
    let mut count = 0;
    loop {
        let ok = exps.iter().all(|r| {
            r.iter()
                .zip(&lambda)
                .fold(1, |acc, (&e, &l)| acc * pow_mod(l, e, q) % q)
                == 1
        });
        count += u64::from(ok);
        // odometer over 1..q-1
        let mut i = 0;
        loop {
            if i == s.n {
                return Ok(count);
            }
            lambda[i] += 1;
            if lambda[i] < q {
                break;
            }
            lambda[i] = 1;
            i += 1;
        }
    }
}

pub const SIGN_MAX_RANK: usize = 20;

/// Number of sign vectors satisfying every row, for systems that contain
/// `2e_i` for every `i` (so all solutions are sign vectors).
pub fn enumerate_sign_solutions(s: &CharacterSystem) -> Result<u64> {
    let has_square = |i: usize| {
        s.rows.iter().any(|r| {
            r.iter()
                .enumerate()
                .all(|(j, &x)| x == if i == j { 2 } else { 0 })
        })
    };
    if !(0..s.n).all(has_square) {
        return precondition("sign enumeration needs the row 2e_i for every i");
    }
    if s.n > SIGN_MAX_RANK {
        return Err(Error::Guard(format!(
            "sign enumeration limited to N <= {SIGN_MAX_RANK}"
        )));
    }
    let count = (0u64..1 << s.n)
        .filter(|mask| {
            s.rows.iter().all(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(i, &x)| mask >> i & 1 == 1 && x % 2 != 0)
                    .count()
                    % 2
                    == 0
            })
        })
        .count();
    Ok(count as u64)
}

/// Rank over `F_q` by Gaussian elimination.
fn rank_mod(mut m: Vec<Vec<u64>>, q: u64) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][c], q - 2, q);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * inv % q;
                let pivot = m[rank].clone();
                for (x, &y) in m[r].iter_mut().zip(&pivot) {
                    *x = (*x + q - f * y % q) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpOddCount {
    pub q: u64,
    /// Matrices satisfying the group's definition over `F_q`.
    pub members: u64,
    /// Members that are diagonal.
    pub diagonal: u64,
    /// Members with every diagonal entry equal to 1.
    pub unipotent: u64,
    /// Solutions of the diagonal constraint system in `(F_q^×)^3`.
    pub torus_solutions: u64,
    /// Matrices on which the equation system and the definition disagree.
    pub equation_mismatches: u64,
    /// Members whose diagonal violates the constraint system.
    pub constraint_violations: u64,
}

impl SpOddCount {
    pub fn agrees(&self) -> bool {
        self.equation_mismatches == 0
            && self.constraint_violations == 0
            && self.members == self.diagonal * self.unipotent
            && self.diagonal == self.torus_solutions
    }
}

/// Every `3×3` matrix over `F_q`, `q ∈ {2, 3}`, tested for membership in
/// `Sp(2) ∩ Stab(V•)` (in the `e`-basis of `p`) both by definition and by
/// the equation system.
pub fn brute_force_sp_odd(q: u64, p: &AdaptedPresentation) -> Result<SpOddCount> {
    if p.dim() != 3 || !(q == 2 || q == 3) {
        return Err(Error::Guard(format!(
            "exhaustive SpOdd enumeration needs dimension 3 and q in {{2, 3}} (got {}, {q})",
            p.dim()
        )));
    }
    let (Some(sp), Some(pairing)) = (p.special, p.pairing.as_ref()) else {
        return precondition("presentation needs a pairing and a special index");
    };
    let constraints = extract_constraints(SubgroupFamily::SpOdd { n: 1 }, p)?;
    let n = 3;
    let e_coord = |i: usize| -> Vec<u64> { (0..n).map(|j| u64::from(i == j)).collect() };
    // flag vectors in e-coordinates
    let vs: Vec<Vec<u64>> = p
        .v_tags
        .iter()
        .map(|t| match *t {
            VectorTag::Pure(i) => e_coord(i),
            VectorTag::Mixed(i, j) => (0..n)
                .map(|k| u64::from(k == i) + u64::from(k == j))
                .collect(),
        })
        .collect();
    let omega = |i: usize, j: usize| -> u64 {
        match pairing.get(&i) {
            Some(&pj) if pj == j && i < j => 1,
            Some(&pj) if pj == j => q - 1,
            _ => 0,
        }
    };

    let mut out = SpOddCount {
        q,
        members: 0,
        diagonal: 0,
        unipotent: 0,
        torus_solutions: enumerate_torus_solutions(&constraints, q)?,
        equation_mismatches: 0,
        constraint_violations: 0,
    };
    let total = q.pow(9);
    for code in 0..total {
        let mut a = vec![vec![0u64; n]; n];
        let mut c = code;
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = c % q;
                c /= q;
            }
        }
        let apply = |v: &[u64]| -> Vec<u64> {
            (0..n)
                .map(|r| (0..n).map(|k| a[r][k] * v[k]).sum::<u64>() % q)
                .collect()
        };
        let invertible = rank_mod(a.clone(), q) == n;
        let stabilizes = (1..=n).all(|k| {
            let mut span: Vec<Vec<u64>> = vs[..k].to_vec();
            span.push(apply(&vs[k - 1]));
            rank_mod(span, q) == k
        });
        let fixes_kernel = apply(&e_coord(sp)) == e_coord(sp);
        let keeps_u = (0..n).filter(|&k| k != sp).all(|k| a[sp][k] == 0);
        let keeps_form = (0..n).all(|l| {
            (0..n).all(|m| {
                let mut acc = 0;
                for i in 0..n {
                    for j in 0..n {
                        acc += a[i][l] * omega(i, j) % q * a[j][m];
                    }
                }
                acc % q == omega(l, m)
            })
        });
        let member = invertible && stabilizes && fixes_kernel && keeps_u && keeps_form;

        let field: Vec<Vec<PrimeFieldScalar>> = a
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| PrimeFieldScalar::new(x as i64, q))
                    .collect()
            })
            .collect();
        if sp_odd_equations_hold(&field, p)? != member {
            out.equation_mismatches += 1;
        }
        if !member {
            continue;
        }
        out.members += 1;
        let diag: Vec<u64> = (0..n).map(|i| a[i][i]).collect();
        let off_diagonal_zero = (0..n).all(|i| (0..n).all(|j| i == j || a[i][j] == 0));
        out.diagonal += u64::from(off_diagonal_zero);
        out.unipotent += u64::from(diag.iter().all(|&d| d == 1));
        let satisfied = constraints.rows.iter().all(|r| {
            r.iter().zip(&diag).fold(1, |acc, (&e, &d)| {
                acc * pow_mod(d, e.rem_euclid(q as i64 - 1) as u64, q) % q
            }) == 1
        });
        out.constraint_violations += u64::from(!satisfied);
    }
    Ok(out)
}

/// Every valid odd-shaped `e`-coordinate presentation for `n = 1` with
/// special index 2 and pairing `(0, 1)`.
pub fn sp_odd_small_presentations() -> Vec<AdaptedPresentation> {
    use std::collections::BTreeMap;
    let choices = [
        VectorTag::Pure(0),
        VectorTag::Pure(1),
        VectorTag::Pure(2),
        VectorTag::Mixed(0, 2),
        VectorTag::Mixed(1, 2),
    ];
    let mut out = Vec::new();
    for a in choices {
        for b in choices {
            for c in choices {
                let mut p = AdaptedPresentation::bare(
                    (0..3).map(|i| crate::exactlin::unit(3, i)).collect(),
                    vec![a, b, c],
                );
                p.pairing = Some(BTreeMap::from([(0, 1), (1, 0)]));
                p.special = Some(2);
                p.s_set = Some(p.s_from_tags());
                let Ok(f) = p.flag() else { continue };
                if crate::flags::validate_presentation(&p, &f)
                    && crate::adapted_bases::check_odd_shape(&p).is_ok()
                {
                    out.push(p);
                }
            }
        }
    }
    out
}
