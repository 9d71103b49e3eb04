//! Character systems on a diagonal torus `T^N`. A row `r` stands for the
//! equation `λ_1^{r_1} ⋯ λ_N^{r_N} = 1`; the solution set is a diagonalizable
//! group whose component group is the torsion of `Z^N / (row lattice)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::exactlin::{rational_pow, Rational, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr")]
pub struct CharacterSystem {
    pub n: usize,
    pub rows: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct SystemRepr {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl TryFrom<SystemRepr> for CharacterSystem {
    type Error = Error;
    fn try_from(r: SystemRepr) -> Result<Self> {
        CharacterSystem::new(r.n, r.rows)
    }
}

impl CharacterSystem {
    pub fn new(n: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return precondition(format!(
                "character row has length {}, torus rank is {n}",
                bad.len()
            ));
        }
        Ok(Self { n, rows })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<i64>) {
        assert_eq!(row.len(), self.n, "character row length");
        self.rows.push(row);
    }

    /// True when every row evaluates to 1 at `lambda`.
    pub fn is_satisfied_by(&self, lambda: &[Rational]) -> bool {
        assert_eq!(lambda.len(), self.n, "point length");
        self.rows
            .iter()
            .all(|r| evaluate_character(r, lambda).is_one())
    }
}

/// `∏ λ_j^{χ_j}`. Zero coordinates with negative exponents are not allowed.
pub fn evaluate_character(chi: &[i64], lambda: &[Rational]) -> Rational {
    chi.iter()
        .zip(lambda)
        .fold(Rational::one(), |acc, (&c, l)| acc * rational_pow(l, c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentGroup {
    pub factors: Vec<u64>,
    pub order: u64,
}

impl ComponentGroup {
    pub fn is_connected(&self) -> bool {
        self.order == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithNormalForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, ones included.
    pub factors: Vec<u64>,
    pub rank: usize,
}

/// `left · A · right = D` with `left`, `right` unimodular and `D` diagonal,
/// its nonzero entries positive and successively dividing each other.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
    pub right_inverse: Vec<Vec<BigInt>>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

struct Elimination {
    a: Vec<Vec<BigInt>>,
    left: Vec<Vec<BigInt>>,
    right: Vec<Vec<BigInt>>,
    right_inverse: Vec<Vec<BigInt>>,
}

impl Elimination {
    // row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.left] {
            let src = m[t].clone();
            for (x, s) in m[i].iter_mut().zip(&src) {
                *x -= q * s;
            }
        }
    }

    fn row_swap(&mut self, i: usize, t: usize) {
        self.a.swap(i, t);
        self.left.swap(i, t);
    }

    fn row_negate(&mut self, t: usize) {
        for m in [&mut self.a, &mut self.left] {
            for x in m[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    // col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.right] {
            for row in m.iter_mut() {
                let s = row[t].clone();
                row[j] -= q * s;
            }
        }
        let src = self.right_inverse[j].clone();
        for (x, s) in self.right_inverse[t].iter_mut().zip(&src) {
            *x += q * s;
        }
    }

    fn col_swap(&mut self, j: usize, t: usize) {
        for m in [&mut self.a, &mut self.right] {
            for row in m.iter_mut() {
                row.swap(j, t);
            }
        }
        self.right_inverse.swap(j, t);
    }
}

/// Smith normal form by integer elimination, always pivoting on the entry of
/// smallest absolute value.
pub fn smith_decomposition(rows: &[Vec<i64>], ncols: usize) -> SmithDecomposition {
    let nrows = rows.len();
    assert!(
        rows.iter().all(|r| r.len() == ncols),
        "ragged integer matrix"
    );
    let mut e = Elimination {
        a: rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
        left: identity(nrows),
        right: identity(ncols),
        right_inverse: identity(ncols),
    };
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let pivot = (t..nrows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| !e.a[i][j].is_zero())
            .min_by_key(|&(i, j)| e.a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        e.row_swap(t, pi);
        e.col_swap(t, pj);

        let mut clean = true;
        for i in t + 1..nrows {
            if !e.a[i][t].is_zero() {
                let q = e.a[i][t].div_floor(&e.a[t][t]);
                e.row_sub(i, t, &q);
                clean &= e.a[i][t].is_zero();
            }
        }
        for j in t + 1..ncols {
            if !e.a[t][j].is_zero() {
                let q = e.a[t][j].div_floor(&e.a[t][t]);
                e.col_sub(j, t, &q);
                clean &= e.a[t][j].is_zero();
            }
        }
        if !clean {
            continue;
        }
        let bad_row =
            (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !e.a[i][j].is_multiple_of(&e.a[t][t])));
        if let Some(i) = bad_row {
            // bring the offending row into row t; the next pass shrinks the pivot
            e.row_sub(t, i, &BigInt::from(-1));
            continue;
        }
        if e.a[t][t].is_negative() {
            e.row_negate(t);
        }
        diagonal.push(e.a[t][t].clone());
        t += 1;
    }
    SmithDecomposition {
        diagonal,
        left: e.left,
        right: e.right,
        right_inverse: e.right_inverse,
    }
}

fn to_u64(x: &BigInt) -> u64 {
    x.to_u64()
        .expect("invariant factor does not fit in 64 bits")
}

pub fn smith_normal_form(rows: &[Vec<i64>], ncols: usize) -> SmithNormalForm {
    let d = smith_decomposition(rows, ncols);
    SmithNormalForm {
        factors: d.diagonal.iter().map(to_u64).collect(),
        rank: d.rank(),
    }
}

pub fn component_group(s: &CharacterSystem) -> ComponentGroup {
    let snf = smith_normal_form(&s.rows, s.n);
    let factors: Vec<u64> = snf.factors.into_iter().filter(|&d| d > 1).collect();
    let order = factors
        .iter()
        .try_fold(1u64, |acc, &d| acc.checked_mul(d))
        .expect("component group order does not fit in 64 bits");
    ComponentGroup { factors, order }
}

pub fn saturation_defect(s: &CharacterSystem) -> u64 {
    component_group(s).order
}

/// Number of solutions in `(F_q^×)^N`, for a prime power `q`.
///
/// # Panics
/// If `q < 2` or the count overflows `u128`.
pub fn point_count_mod_q(s: &CharacterSystem, q: u64) -> u128 {
    assert!(q >= 2, "point_count_mod_q needs q >= 2");
    let snf = smith_normal_form(&s.rows, s.n);
    let units = u128::from(q - 1);
    let free = u32::try_from(s.n - snf.rank).expect("torus rank");
    snf.factors.iter().fold(units.pow(free), |acc, &d| {
        acc.checked_mul(u128::from(d.gcd(&(q - 1))))
            .expect("point count overflow")
    })
}

/// Characters that are trivial on the identity component but not on the
/// whole solution group, one per invariant factor `d > 1`, paired with `d`.
pub fn torsion_characters(s: &CharacterSystem) -> Vec<(u64, Vec<i64>)> {
    let d = smith_decomposition(&s.rows, s.n);
    d.diagonal
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_one())
        .map(|(k, f)| {
            let chi = d.right_inverse[k]
                .iter()
                .map(|x| x.to_i64().expect("torsion character entry too large"))
                .collect();
            (to_u64(f), chi)
        })
        .collect()
}

/// Number of free parameters of the identity component, `N - rank`.
pub fn identity_component_dim(s: &CharacterSystem) -> usize {
    s.n - smith_decomposition(&s.rows, s.n).rank()
}

/// A point of the identity component: `λ_j = ∏_k t_k^{R[j][r + k]}` where
/// `R` is the right transform and `r` the rank. `params` must be nonzero and
/// have length `N - r`.
pub fn identity_component_point(s: &CharacterSystem, params: &[Rational]) -> Result<Vector> {
    let d = smith_decomposition(&s.rows, s.n);
    let r = d.rank();
    if params.len() != s.n - r {
        return precondition(format!(
            "identity component has {} parameters, got {}",
            s.n - r,
            params.len()
        ));
    }
    if params.iter().any(Zero::is_zero) {
        return precondition("torus parameters must be nonzero");
    }
    Ok((0..s.n)
        .map(|j| {
            params
                .iter()
                .enumerate()
                .fold(Rational::one(), |acc, (k, t)| {
                    let e = d.right[j][r + k].to_i64().expect("exponent too large");
                    acc * rational_pow(t, e)
                })
        })
        .collect())
}

/// Sign vectors (`true` means `-1`) satisfying every row.
pub fn sign_satisfies(s: &CharacterSystem, negative: &[bool]) -> bool {
    s.rows.iter().all(|r| sign_character_value(r, negative))
}

/// Value of a character on a sign vector: `true` for `+1`.
pub fn sign_character_value(chi: &[i64], negative: &[bool]) -> bool {
    chi.iter()
        .zip(negative)
        .filter(|(c, &neg)| neg && c.rem_euclid(2) == 1)
        .count()
        % 2
        == 0
}

const SIGN_SEARCH_LIMIT: usize = 20;

/// A solution of order two lying outside the identity component, if one
/// exists; chosen with the fewest `-1` entries, earliest positions first.
pub fn sign_torsion_point(s: &CharacterSystem) -> Option<Vec<bool>> {
    let chars = torsion_characters(s);
    let even: Vec<&Vec<i64>> = chars
        .iter()
        .filter(|(d, _)| d % 2 == 0)
        .map(|(_, c)| c)
        .collect();
    if even.is_empty() {
        return None;
    }
    let outside = |neg: &[bool]| {
        sign_satisfies(s, neg) && chars.iter().any(|(_, c)| !sign_character_value(c, neg))
    };
    if s.n <= SIGN_SEARCH_LIMIT {
        for weight in 1..=s.n {
            let mut found = None;
            for_each_subset(s.n, weight, &mut |neg| {
                if found.is_none() && outside(neg) {
                    found = Some(neg.to_vec());
                }
            });
            if found.is_some() {
                return found;
            }
        }
        return None;
    }
    // λ_j = (-1)^{R[j][k]} for an even factor d_k
    let d = smith_decomposition(&s.rows, s.n);
    let k = d.diagonal.iter().position(|f| f.is_even())?;
    let neg: Vec<bool> = (0..s.n).map(|j| d.right[j][k].is_odd()).collect();
    outside(&neg).then_some(neg)
}

fn for_each_subset(n: usize, weight: usize, f: &mut impl FnMut(&[bool])) {
    fn go(n: usize, left: usize, cur: &mut Vec<bool>, f: &mut impl FnMut(&[bool])) {
        if left == 0 {
            let mut full = cur.clone();
            full.resize(n, false);
            f(&full);
            return;
        }
        if cur.len() + left > n {
            return;
        }
        cur.push(true);
        go(n, left - 1, cur, f);
        cur.pop();
        cur.push(false);
        go(n, left, cur, f);
        cur.pop();
    }
    go(n, weight, &mut Vec::with_capacity(n), f);
}
