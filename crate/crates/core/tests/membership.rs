//! The SpOdd equation system against direct membership, and closure of the
//! accepted set under products.

use parcon_core::charlattice::{identity_component_dim, identity_component_point};
use parcon_core::connectivity::{
    adapted_presentation, extract_constraints, is_member_in_e_coordinates, sp_odd_membership,
    FamilyData, SubgroupFamily,
};
use parcon_core::exactlin::{int, ratio, Matrix, Rational};
use parcon_core::flags::random_flag;
use parcon_core::sampling;
use rand::Rng;

/// `x ↦ x + c (ω(e_i, x) e_j + ω(e_j, x) e_i)` in the `e`-basis, which
/// preserves `ω`.
fn transvection(gram: &Matrix, i: usize, j: usize, c: &Rational) -> Matrix {
    let n = gram.rows();
    let mut rows: Vec<Vec<Rational>> = Matrix::identity(n).row_vectors();
    for x in 0..n {
        rows[j][x] += c * &gram[(i, x)];
        rows[i][x] += c * &gram[(j, x)];
    }
    Matrix::from_rows(&rows, n)
}

#[test]
fn sp_odd_members_closed_under_products() {
    let mut pairs_checked = 0;
    for (pairs, seed) in [(1, 0), (1, 1), (2, 2), (2, 3), (2, 4), (3, 5)] {
        let family = SubgroupFamily::SpOdd { n: pairs };
        let data = FamilyData::standard(family);
        let f = random_flag(family.ambient_dim(), seed);
        let p = adapted_presentation(family, &f, &data).unwrap();
        let n = p.dim();
        let mut gram_rows = vec![vec![int(0); n]; n];
        for (&i, &j) in p.pairing.as_ref().unwrap() {
            gram_rows[i][j] = int(if i < j { 1 } else { -1 });
        }
        let gram = Matrix::from_rows(&gram_rows, n);

        let mut rng = sampling::rng(seed + 77);
        let mut accepted: Vec<Matrix> = Vec::new();
        let constraints = extract_constraints(family, &p).unwrap();
        for _ in 0..6 {
            let params: Vec<_> = (0..identity_component_dim(&constraints))
                .map(|_| ratio(rng.random_range(1..=5), rng.random_range(1..=4)))
                .collect();
            let d = identity_component_point(&constraints, &params).unwrap();
            accepted.push(Matrix::diagonal(&d));
        }
        for i in 0..n {
            for j in 0..n {
                let c = int(rng.random_range(-3..=3));
                let t = transvection(&gram, i, j, &c);
                if sp_odd_membership(&t, &p).unwrap() {
                    accepted.push(t);
                }
            }
        }
        for a in &accepted {
            assert!(is_member_in_e_coordinates(family, &data, &f, &p, a));
        }
        for a in &accepted {
            for b in &accepted {
                let ab = a * b;
                assert!(sp_odd_membership(&ab, &p).unwrap());
                pairs_checked += 1;
            }
        }
    }
    assert!(pairs_checked >= 100, "only {pairs_checked} products");
}

#[test]
fn sp_odd_equations_match_definition_on_random_candidates() {
    // rational matrices near the group: products of accepted transvections
    // and torus points perturbed in one entry
    let family = SubgroupFamily::SpOdd { n: 2 };
    let data = FamilyData::standard(family);
    let mut rng = sampling::rng(5);
    for seed in 0..20 {
        let f = random_flag(5, seed);
        let p = adapted_presentation(family, &f, &data).unwrap();
        for _ in 0..10 {
            let mut rows = Matrix::identity(5).row_vectors();
            let (r, c) = (rng.random_range(0..5), rng.random_range(0..5));
            rows[r][c] += int(rng.random_range(-2..=2));
            let a = Matrix::from_rows(&rows, 5);
            if a.determinant() == int(0) {
                continue;
            }
            assert_eq!(
                sp_odd_membership(&a, &p).unwrap(),
                is_member_in_e_coordinates(family, &data, &f, &p, &a),
                "seed {seed}, entry ({r},{c})"
            );
        }
    }
}
