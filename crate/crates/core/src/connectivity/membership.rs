use num_traits::{One, Zero};

use super::{FamilyData, SubgroupFamily};
use crate::adapted_bases::check_odd_shape;
use crate::error::{precondition, Result};
use crate::exactlin::{
    coordinates, form_kernel, rational_pow, restrict_form, scale_vector, FieldElement, Matrix,
    Rational, Vector,
};
use crate::flags::{AdaptedPresentation, Flag, VectorTag};

/// Matrix of `g` restricted to `span(basis)` in that basis, if `g` preserves it.
fn restriction(g: &Matrix, basis: &[Vector]) -> Option<Matrix> {
    let cols = basis
        .iter()
        .map(|b| coordinates(&g.mul_vec(b), basis))
        .collect::<Option<Vec<_>>>()?;
    Some(Matrix::from_columns(&cols, basis.len()))
}

fn det_of(m: &Matrix) -> Rational {
    if m.rows() == 0 {
        Rational::one()
    } else {
        m.determinant()
    }
}

fn preserves_form(g: &Matrix, gram: &Matrix) -> bool {
    &(&g.transpose() * gram) * g == *gram
}

/// Whether `g` (ambient coordinates) lies in `H ∩ Stab(f)`, tested against
/// the family's defining conditions directly.
pub fn is_member(family: SubgroupFamily, data: &FamilyData, f: &Flag, g: &Matrix) -> bool {
    let n = f.dim();
    if g.rows() != n || g.cols() != n || g.determinant().is_zero() || !f.is_stabilized_by(g) {
        return false;
    }
    match data {
        FamilyData::Decomposition { u_basis, w_basis } => {
            let (Some(a), Some(b)) = (restriction(g, u_basis), restriction(g, w_basis)) else {
                return false;
            };
            let (du, dw) = (det_of(&a), det_of(&b));
            match family {
                SubgroupFamily::GlGl { .. } => true,
                SubgroupFamily::SlGl { .. } => du.is_one(),
                SubgroupFamily::SlSl { .. } => du.is_one() && dw.is_one(),
                SubgroupFamily::DetEqual { .. } => du == dw,
                SubgroupFamily::SGlGl { .. } => (du * dw).is_one(),
                _ => false,
            }
        }
        FamilyData::Symplectic { omega } => preserves_form(g, omega.gram()),
        FamilyData::OddSymplectic { omega, u_basis } => {
            let kernel = form_kernel(omega);
            let [k] = kernel.as_slice() else { return false };
            let Some(h) = restriction(g, u_basis) else {
                return false;
            };
            let Ok(omega_u) = restrict_form(omega, u_basis) else {
                return false;
            };
            let gk = g.mul_vec(k);
            match family {
                SubgroupFamily::SpOdd { .. } => preserves_form(&h, omega_u.gram()) && gk == *k,
                SubgroupFamily::SpT1 { n: pairs } => {
                    // h^T Ω h = s Ω on U and g k = s^{-n} k
                    let gram = omega_u.gram();
                    let pulled = &(&h.transpose() * gram) * &h;
                    let Some((i, j)) = (0..gram.rows())
                        .flat_map(|i| (0..gram.cols()).map(move |j| (i, j)))
                        .find(|&(i, j)| !gram[(i, j)].is_zero())
                    else {
                        return false;
                    };
                    let s = &pulled[(i, j)] / &gram[(i, j)];
                    if s.is_zero() {
                        return false;
                    }
                    let scaled = Matrix::new(
                        gram.rows(),
                        gram.cols(),
                        (0..gram.rows())
                            .flat_map(|r| gram.row(r).iter().map(|x| x * &s).collect::<Vec<_>>())
                            .collect(),
                    );
                    let c = rational_pow(&s, -(pairs as i64));
                    pulled == scaled && gk == scale_vector(&c, k)
                }
                _ => false,
            }
        }
        FamilyData::Orthogonal { form } => {
            preserves_form(g, form.gram()) && g.determinant().is_one()
        }
    }
}

/// [`is_member`] for a matrix written in the `e`-basis of `p`.
pub fn is_member_in_e_coordinates(
    family: SubgroupFamily,
    data: &FamilyData,
    f: &Flag,
    p: &AdaptedPresentation,
    g_e: &Matrix,
) -> bool {
    let e = p.e_matrix();
    let Some(e_inv) = e.inverse() else {
        return false;
    };
    is_member(family, data, f, &(&(&e * g_e) * &e_inv))
}

/// The equation system for `Sp(2n) ⊂ SL(2n+1)` in the `e`-basis of an odd
/// symplectic presentation: the special row and column are those of the
/// identity, the non-special block is triangular in flag order, it preserves
/// the hyperbolic form, and `Σ_{i∈S} a_{ik} = [k ∈ S]` for every `k` whose
/// flag vector precedes the one equal to `e_special`.
pub fn sp_odd_equations_hold<F: FieldElement>(
    a: &[Vec<F>],
    p: &AdaptedPresentation,
) -> Result<bool> {
    let n = p.dim();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return precondition(format!("matrix is not {n}x{n}"));
    }
    let (Some(sp), Some(pairing), Some(s)) = (p.special, p.pairing.as_ref(), p.s_set.as_ref())
    else {
        return precondition("presentation needs a pairing, a special index and S");
    };
    if let Err(msg) = check_odd_shape(p) {
        return precondition(msg);
    }
    if n == 0 {
        return Ok(true);
    }
    let zero = a[0][0].zero_like();
    let one = a[0][0].one_like();
    let rest: Vec<usize> = (0..n).filter(|&i| i != sp).collect();

    // special row and column
    if a[sp][sp] != one
        || rest
            .iter()
            .any(|&k| !a[k][sp].is_zero_element() || !a[sp][k].is_zero_element())
    {
        return Ok(false);
    }

    // triangular in the order in which the flag first reaches each e_i
    let mut position = vec![usize::MAX; n];
    for (k, t) in p.v_tags.iter().enumerate() {
        for i in t.indices() {
            position[i] = position[i].min(k);
        }
    }
    for &i in &rest {
        for &j in &rest {
            if position[i] > position[j] && !a[i][j].is_zero_element() {
                return Ok(false);
            }
        }
    }

    // A^T Ω A = Ω with Ω(e_i, e_ī) = +1 when i < ī
    let omega = |i: usize, j: usize| -> F {
        match pairing.get(&i) {
            Some(&pj) if pj == j && i < j => one.clone(),
            Some(&pj) if pj == j => -one.clone(),
            _ => zero.clone(),
        }
    };
    for &l in &rest {
        for &m in &rest {
            let mut acc = zero.clone();
            for &i in &rest {
                if let Some(&ib) = pairing.get(&i) {
                    acc = acc + a[i][l].clone() * omega(i, ib) * a[ib][m].clone();
                }
            }
            if acc != omega(l, m) {
                return Ok(false);
            }
        }
    }

    // the S-sums only bind columns whose flag vector comes before e_special
    let kernel_level = p
        .v_tags
        .iter()
        .position(|t| *t == VectorTag::Pure(sp))
        .unwrap_or(n);
    for &k in rest.iter().filter(|&&k| position[k] < kernel_level) {
        let sum = s.iter().fold(zero.clone(), |acc, &i| acc + a[i][k].clone());
        let expected = if s.contains(&k) {
            one.clone()
        } else {
            zero.clone()
        };
        if sum != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn sp_odd_membership(a: &Matrix, p: &AdaptedPresentation) -> Result<bool> {
    sp_odd_equations_hold(&a.row_vectors(), p)
}

/// `diag(t)` in the `e`-basis with `t = λ^{-n}` on the special index and on
/// the member of each pair lying in `S` (the smaller index when neither
/// does), and `t = λ^{n+1}` on its partner.
pub fn sp_t1_torus_section(lambda: &Rational, p: &AdaptedPresentation) -> Result<Matrix> {
    if lambda.is_zero() {
        return precondition("torus parameter must be nonzero");
    }
    let (Some(sp), Some(pairing)) = (p.special, p.pairing.as_ref()) else {
        return precondition("presentation needs a pairing and a special index");
    };
    let s = p.s_set.clone().unwrap_or_else(|| p.s_from_tags());
    let pairs = pairing.iter().filter(|(i, j)| i < j).count() as i64;
    let low = rational_pow(lambda, -pairs);
    let high = rational_pow(lambda, pairs + 1);
    let mut t = vec![Rational::one(); p.dim()];
    for (&i, &j) in pairing.iter().filter(|(i, j)| i < j) {
        let (first, second) = match (s.contains(&i), s.contains(&j)) {
            (true, true) => return precondition(format!("both {i} and {j} lie in S")),
            (false, true) => (j, i),
            _ => (i, j),
        };
        t[first] = low.clone();
        t[second] = high.clone();
    }
    t[sp] = low;
    Ok(Matrix::diagonal(&t))
}
