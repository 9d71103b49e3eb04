use parcon_core::charlattice::{
    component_group, point_count_mod_q, smith_normal_form, CharacterSystem,
};
use parcon_core::oracle::{
    brute_force_sp_odd, enumerate_sign_solutions, enumerate_torus_solutions,
    gcd_minor_invariant_factors, sp_odd_small_presentations,
};
use proptest::prelude::*;

fn matrix(
    max_rows: usize,
    max_cols: usize,
    bound: i64,
) -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        (
            prop::collection::vec(prop::collection::vec(-bound..=bound, c), r),
            Just(c),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn snf_matches_minors((rows, cols) in matrix(6, 6, 9)) {
        prop_assert_eq!(smith_normal_form(&rows, cols).factors, gcd_minor_invariant_factors(&rows, cols));
    }

    #[test]
    fn point_count_matches_enumeration((rows, n) in matrix(4, 4, 3), qi in 0usize..4) {
        let q = [2u64, 3, 5, 7][qi];
        let s = CharacterSystem::new(n, rows).unwrap();
        prop_assert_eq!(point_count_mod_q(&s, q), u128::from(enumerate_torus_solutions(&s, q).unwrap()));
    }

    #[test]
    fn order_invariant_under_row_operations(
        (rows, n) in matrix(5, 5, 5),
        a in 0usize..5, b in 0usize..5, k in -4i64..=4, seed in any::<u64>()
    ) {
        let s = CharacterSystem::new(n, rows.clone()).unwrap();
        let order = component_group(&s).order;
        let r = rows.len();
        let (a, b) = (a % r, b % r);
        let mut ops = rows.clone();
        if a != b {
            let src = ops[b].clone();
            for (x, y) in ops[a].iter_mut().zip(&src) {
                *x += k * y;
            }
        }
        ops[a] = ops[a].iter().map(|x| -x).collect();
        ops.rotate_left((seed % r as u64) as usize);
        let combo: Vec<i64> = (0..n).map(|j| rows.iter().map(|row| row[j]).sum::<i64>() * k).collect();
        ops.push(combo);
        prop_assert_eq!(component_group(&CharacterSystem::new(n, ops).unwrap()).order, order);
    }

    #[test]
    fn order_divides_square_minors((rows, n) in matrix(4, 4, 6)) {
        let square: Vec<Vec<i64>> = rows.iter().map(|r| {
            let mut r = r.clone();
            r.resize(rows.len().max(n), 0);
            r
        }).collect();
        let d = square.len().max(n);
        let mut square = square;
        square.resize(d, vec![0; d]);
        let minors = gcd_minor_invariant_factors(&square, d);
        if minors.len() == d {
            let det: u64 = minors.iter().product();
            let s = CharacterSystem::new(d, square).unwrap();
            prop_assert_eq!(det % component_group(&s).order, 0);
        }
    }
}

#[test]
fn so_sign_counts_match_component_group() {
    for n in 2..=6usize {
        let mut rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 } else { 0 }).collect())
            .collect();
        rows.push(vec![1; n]);
        let s = CharacterSystem::new(n, rows).unwrap();
        let signs = enumerate_sign_solutions(&s).unwrap();
        assert_eq!(signs, 1 << (n - 1));
        assert_eq!(signs, component_group(&s).order);
    }
}

#[test]
fn sp_odd_brute_force_on_every_small_presentation() {
    let ps = sp_odd_small_presentations();
    assert!(ps.len() >= 6);
    for p in &ps {
        for q in [2, 3] {
            let c = brute_force_sp_odd(q, p).unwrap();
            assert!(c.agrees(), "{:?} q = {q}: {c:?}", p.v_tags);
        }
    }
}
