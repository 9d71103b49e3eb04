use std::collections::{BTreeMap, BTreeSet};

use super::*;
use crate::charlattice::evaluate_character;
use crate::exactlin::{int_vector, ratio};
use crate::flags::{random_flag, Block};

fn fam(s: &str) -> SubgroupFamily {
    s.parse().unwrap()
}

fn units(n: usize) -> Vec<Vector> {
    (0..n).map(|i| unit(n, i)).collect()
}

fn with_blocks(tags: Vec<VectorTag>, blocks: &[Block]) -> AdaptedPresentation {
    let mut p = AdaptedPresentation::bare(units(tags.len()), tags);
    p.blocks = Some(blocks.iter().copied().enumerate().collect());
    p
}

fn odd_presentation(tags: Vec<VectorTag>, s: &[usize]) -> AdaptedPresentation {
    let mut p = AdaptedPresentation::bare(units(3), tags);
    p.pairing = Some(BTreeMap::from([(0, 1), (1, 0)]));
    p.special = Some(2);
    p.s_set = Some(s.iter().copied().collect::<BTreeSet<_>>());
    p
}

#[test]
fn constraints_sglgl_one() {
    let p = with_blocks(
        vec![VectorTag::Mixed(0, 1), VectorTag::Pure(0)],
        &[Block::U, Block::W],
    );
    let s = extract_constraints(fam("S_GLxGL(1,1)"), &p).unwrap();
    assert_eq!(s.rows, vec![vec![1, -1], vec![1, 1]]);
    assert_eq!(component_group(&s).order, 2);
}

#[test]
fn constraints_sp_two() {
    let mut p = AdaptedPresentation::bare(units(2), vec![VectorTag::Pure(0), VectorTag::Pure(1)]);
    p.pairing = Some(BTreeMap::from([(0, 1), (1, 0)]));
    let s = extract_constraints(fam("Sp(2)"), &p).unwrap();
    assert_eq!(s.rows, vec![vec![1, 1]]);
    assert!(component_group(&s).is_connected());
}

#[test]
fn constraints_sp_t1_small() {
    let p = odd_presentation(
        vec![
            VectorTag::Mixed(0, 2),
            VectorTag::Pure(1),
            VectorTag::Pure(2),
        ],
        &[0],
    );
    let s = extract_constraints(fam("SpT1(2)"), &p).unwrap();
    assert!(s.rows.contains(&vec![1, 1, 1]));
    assert!(component_group(&s).is_connected());
}

#[test]
fn constraints_need_labels() {
    let p = AdaptedPresentation::bare(units(2), vec![VectorTag::Pure(0), VectorTag::Pure(1)]);
    assert!(extract_constraints(fam("SLxSL(1,1)"), &p).is_err());
    assert!(extract_constraints(fam("Sp(2)"), &p).is_err());
    assert!(extract_constraints(fam("SLxSL(2,1)"), &p).is_err());
}

#[test]
fn slsl_random_flag_connected() {
    let family = fam("SLxSL(1,1)");
    for seed in 0..10 {
        let r = analyze(family, &random_flag(2, seed), &FamilyData::standard(family)).unwrap();
        assert_eq!(r.components, 1);
        assert!(r.witness.is_none());
        assert!(r.trace.is_some());
    }
}

#[test]
fn sglgl_negative_witness() {
    let family = fam("S_GLxGL(2,2)");
    let r = analyze(
        family,
        &negative_flag_sglgl(2),
        &FamilyData::standard(family),
    )
    .unwrap();
    assert_eq!(r.components, 2);
    assert!(r.trace.is_none());
    let [id, g] = r.witness.unwrap();
    assert_eq!(id, Matrix::identity(4));
    assert_eq!(g, Matrix::diagonal(&int_vector(&[-1, 1, -1, 1])));
}

#[test]
fn so_counts() {
    for (n, order) in [(2, 2), (3, 4), (4, 8)] {
        let r = so_witness(n).unwrap();
        assert_eq!(r.components, order);
        assert!(r.witness.is_some());
    }
    assert!(so_witness(1).is_err());
}

#[test]
fn so_rejects_other_flags() {
    let family = fam("SO(3)");
    let err = analyze(family, &random_flag(3, 5), &FamilyData::standard(family)).unwrap_err();
    assert!(matches!(err, Error::Unsupported(_)));
}

#[test]
fn negative_flags() {
    assert_eq!(
        negative_flag_sglgl(1).generators(),
        &[int_vector(&[1, 1]), int_vector(&[1, 0])]
    );
    assert_eq!(
        negative_flag_sglgl(2).generators(),
        &[
            int_vector(&[1, 0, 1, 0]),
            int_vector(&[0, 1, 0, 1]),
            int_vector(&[1, 0, 0, 0]),
            int_vector(&[0, 1, 0, 0])
        ]
    );
    for n in 1..=5 {
        assert_eq!(negative_flag_sglgl(n).dim(), 2 * n);
    }
}

#[test]
fn sp_odd_membership_examples() {
    let p = odd_presentation(
        vec![VectorTag::Pure(0), VectorTag::Pure(1), VectorTag::Pure(2)],
        &[],
    );
    assert!(sp_odd_membership(&Matrix::identity(3), &p).unwrap());
    assert!(!sp_odd_membership(&Matrix::diagonal(&int_vector(&[1, 1, 2])), &p).unwrap());
    let u = Matrix::from_i64(&[&[1, 5, 0], &[0, 1, 0], &[0, 0, 1]]);
    assert!(sp_odd_membership(&u, &p).unwrap());
    assert!(sp_odd_membership(&Matrix::identity(2), &p).is_err());
}

#[test]
fn torus_section_examples() {
    let p = odd_presentation(
        vec![
            VectorTag::Mixed(0, 2),
            VectorTag::Pure(1),
            VectorTag::Pure(2),
        ],
        &[0],
    );
    assert_eq!(
        sp_t1_torus_section(&int(1), &p).unwrap(),
        Matrix::identity(3)
    );
    let t = sp_t1_torus_section(&int(4), &p).unwrap();
    assert_eq!(t, Matrix::diagonal(&[ratio(1, 4), int(16), ratio(1, 4)]));
    assert!(sp_t1_torus_section(&int(0), &p).is_err());
    let s = extract_constraints(fam("SpT1(2)"), &p).unwrap();
    for lambda in [ratio(-2, 3), int(5), ratio(7, 2)] {
        let t = sp_t1_torus_section(&lambda, &p).unwrap();
        let d = t.diagonal_entries();
        for row in &s.rows {
            assert_eq!(evaluate_character(row, &d), int(1));
        }
    }
}

#[test]
fn torus_section_accepted_by_sp_odd_only_at_one() {
    let p = odd_presentation(
        vec![
            VectorTag::Mixed(0, 2),
            VectorTag::Pure(1),
            VectorTag::Pure(2),
        ],
        &[0],
    );
    for (lambda, expected) in [
        (int(1), true),
        (int(-1), false),
        (int(3), false),
        (ratio(1, 2), false),
    ] {
        let mut t = sp_t1_torus_section(&lambda, &p).unwrap();
        // the odd symplectic group fixes the kernel vector
        let mut d = t.diagonal_entries();
        d[2] = int(1);
        t = Matrix::diagonal(&d);
        assert_eq!(
            sp_odd_membership(&t, &p).unwrap(),
            expected,
            "lambda = {lambda}"
        );
    }
}

#[test]
fn trace_glgl_mixed() {
    let p = with_blocks(
        vec![VectorTag::Mixed(0, 1), VectorTag::Pure(0)],
        &[Block::U, Block::W],
    );
    let t = reduce_trace(fam("GLxGL(1,1)"), &p).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].case, StepCase::Mixed);
    assert_eq!(t[0].dim, 0);
}

#[test]
fn trace_slgl_pure_in_w() {
    let p = with_blocks(
        vec![VectorTag::Pure(1), VectorTag::Pure(0)],
        &[Block::U, Block::W],
    );
    let t = reduce_trace(fam("SLxGL(1,1)"), &p).unwrap();
    assert_eq!(t[0].case, StepCase::PureInW);
    assert_eq!(t[0].kernel, KernelShape::TorusExtension);
    assert_eq!(t[0].family, fam("SLxGL(1,0)"));
    assert_eq!(t.last().unwrap().dim, 1);
}

#[test]
fn trace_sp_odd_small() {
    let family = fam("SpOdd(2)");
    let data = FamilyData::standard(family);
    for seed in 0..20 {
        let f = random_flag(3, seed);
        let p = adapted_presentation(family, &f, &data).unwrap();
        let t = reduce_trace(family, &p).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].case, StepCase::SymplecticPair);
        assert_eq!(t[0].dim, 1);
        // pinned exactly when some V_k holds e_a + e_special but not e_a
        let vs = crate::flags::presentation_vectors(&p);
        let sp = p.special.unwrap();
        let pinned = [0usize, 1].iter().any(|&a| {
            let e = p.e_basis[a].clone();
            let shifted = crate::exactlin::add_vectors(&e, &p.e_basis[sp]);
            (1..=3).any(|k| {
                crate::exactlin::rank_of(&[vs[..k].to_vec(), vec![shifted.clone()]].concat(), 3)
                    == k
                    && crate::exactlin::rank_of(&[vs[..k].to_vec(), vec![e.clone()]].concat(), 3)
                        > k
            })
        });
        let expected = if pinned {
            KernelShape::Unipotent
        } else {
            KernelShape::TorusExtension
        };
        assert_eq!(t[0].kernel, expected, "seed {seed}");
    }
}

#[test]
fn trace_refuses_unproved_families() {
    let p = with_blocks(
        vec![
            VectorTag::Pure(0),
            VectorTag::Pure(1),
            VectorTag::Pure(2),
            VectorTag::Pure(3),
        ],
        &[Block::U, Block::U, Block::W, Block::W],
    );
    assert!(reduce_trace(fam("S_GLxGL(2,2)"), &p).is_err());
    let so = AdaptedPresentation::bare(units(3), (0..3).map(VectorTag::Pure).collect());
    assert!(reduce_trace(fam("SO(3)"), &so).is_err());
}

#[test]
fn traces_for_every_connected_family() {
    for name in [
        "GLxGL(2,2)",
        "SLxGL(2,2)",
        "SLxGL(1,3)",
        "DetEqual(2,2)",
        "SLxSL(2,2)",
        "SLxSL(3,1)",
        "S_GLxGL(3,1)",
        "Sp(4)",
        "SpOdd(4)",
        "SpT1(4)",
    ] {
        let family = fam(name);
        let data = FamilyData::standard(family);
        for seed in 0..5 {
            let f = random_flag(family.ambient_dim(), seed);
            let r = analyze(family, &f, &data).unwrap();
            assert_eq!(r.components, 1, "{name} seed {seed}");
            let trace = r.trace.unwrap();
            assert!(trace.last().unwrap().dim <= 1);
        }
    }
}

#[test]
fn witness_members_and_diagonal_soundness() {
    let family = fam("S_GLxGL(1,1)");
    let data = FamilyData::standard(family);
    let f = negative_flag_sglgl(1);
    let r = analyze(family, &f, &data).unwrap();
    assert_eq!(r.components, 2);
    let [_, g] = r.witness.unwrap();
    assert!(is_member(family, &data, &f, &g));
    assert!(!is_member(
        family,
        &data,
        &f,
        &Matrix::diagonal(&int_vector(&[-1, 1]))
    ));
}

#[test]
fn analyze_presentation_matches_analyze() {
    let family = fam("SLxSL(2,1)");
    let data = FamilyData::standard(family);
    let f = random_flag(3, 1);
    let direct = analyze(family, &f, &data).unwrap();
    let p = adapted_presentation(family, &f, &data).unwrap();
    assert_eq!(analyze_presentation(family, &data, p).unwrap(), direct);
}

#[test]
fn report_json_keys() {
    let r = so_witness(2).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in [
        "family",
        "dim",
        "components",
        "factors",
        "constraints",
        "presentation",
        "witness",
    ] {
        assert!(keys.contains(&k), "{k}");
    }
    assert_eq!(v["family"], "SO(2)");
    assert_eq!(v["components"], 2);
}
