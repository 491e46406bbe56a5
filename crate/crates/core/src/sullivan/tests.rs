use super::*;
use crate::dgl::DglPresentation;
use crate::freelie::{FreeLie, Generator, TruncationWindow};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn basis(spec: &[(&str, u32)]) -> Vec<(String, u32)> {
    spec.iter().map(|(n, d)| (n.to_string(), *d)).collect()
}

fn heisenberg() -> NilpotentLieData {
    NilpotentLieData::new(
        basis(&[("a", 0), ("b", 0), ("c", 0)]),
        [((0, 1), SparseVector::unit(2))],
        None,
    )
    .unwrap()
}

fn free_nilpotent(gens: &[(&str, u32)], max_weight: u32) -> NilpotentLieData {
    let alg = FreeLie::new(
        gens.iter().map(|(n, d)| Generator::new(*n, *d)).collect(),
        TruncationWindow::new(max_weight, 1),
    )
    .unwrap();
    NilpotentLieData::from_presentation(&DglPresentation::free(alg), max_weight).unwrap()
}

fn cp2_truncation() -> NilpotentLieData {
    let alg = FreeLie::new(
        vec![Generator::new("x", 1), Generator::new("sy", 3).with_weight(2)],
        TruncationWindow::new(2, 6),
    )
    .unwrap();
    let x = alg.gen("x").unwrap();
    let p = DglPresentation::new(alg, vec![("sy".into(), x.bracket(&x).unwrap().into_value())]).unwrap();
    NilpotentLieData::from_presentation(&p, 2).unwrap()
}

fn acyclic_pair(max_weight: u32) -> NilpotentLieData {
    let alg = FreeLie::new(
        vec![Generator::new("g", 1), Generator::new("h", 2)],
        TruncationWindow::new(max_weight, 2 * max_weight),
    )
    .unwrap();
    let g = alg.gen("g").unwrap().into_value();
    let p = DglPresentation::new(alg, vec![("h".into(), g)]).unwrap();
    NilpotentLieData::from_presentation(&p, max_weight).unwrap()
}

fn d1_terms(sd: &SullivanData) -> Vec<Vec<((usize, usize), Rational)>> {
    (0..sd.dim())
        .map(|k| sd.d1(k).iter().map(|(m, c)| ((m[0], m[1]), c.clone())).collect())
        .collect()
}

fn basis_of(sd: &SullivanData) -> Vec<(String, u32)> {
    sd.names().iter().cloned().zip(sd.degrees().iter().copied()).collect()
}

#[test]
fn abelian_cochains() {
    let l = NilpotentLieData::abelian(basis(&[("a", 0), ("b", 0)]));
    let sd = cochains(&l);
    assert_eq!(sd.degrees(), &[1, 1]);
    assert!((0..2).all(|k| sd.d(k).is_empty()));
    let r = check_sullivan(&sd);
    assert!(r.passed());
    assert_eq!(r.filtration, vec![2]);
    assert_eq!(homotopy_lie(&sd).unwrap(), l);
    let h = wedge_homology(&sd, 3).unwrap();
    assert_eq!(h.dims, BTreeMap::from([((0, 0), 1), ((1, 1), 2), ((2, 2), 1)]));
}

#[test]
fn heisenberg_cochains() {
    let l = heisenberg();
    let sd = cochains(&l);
    assert!(sd.d1(0).is_empty() && sd.d1(1).is_empty());
    assert_eq!(sd.format(sd.d1(2)), "-v(a)·v(b)");
    let r = check_sullivan(&sd);
    assert!(r.passed());
    assert_eq!(r.filtration, vec![2, 3]);
    assert_eq!(homotopy_lie(&sd).unwrap(), l);
}

#[test]
fn free_nilpotent_roundtrip() {
    let l = free_nilpotent(&[("a", 0), ("b", 0)], 3);
    assert_eq!(l.dim(), 5);
    assert_eq!(l.names(), &["a", "b", "[a,b]", "[a,[a,b]]", "[b,[a,b]]"]);
    let sd = cochains(&l);
    assert!(check_sullivan(&sd).passed());
    assert_eq!(homotopy_lie(&sd).unwrap(), l);
}

#[test]
fn graded_roundtrips() {
    for gens in [
        &[("x", 1)][..],
        &[("x", 1), ("y", 1)],
        &[("x", 1), ("y", 2)],
        &[("a", 0), ("x", 1)],
        &[("a", 0), ("b", 0), ("c", 0)],
    ] {
        let l = free_nilpotent(gens, 4);
        let sd = cochains(&l);
        let r = check_sullivan(&sd);
        assert!(r.violations.is_empty(), "{gens:?}: {:?}", r.violations);
        assert!(r.filtration_exhausts());
        assert_eq!(homotopy_lie(&sd).unwrap(), l, "{gens:?}");
    }
}

#[test]
fn odd_self_bracket_uses_half_coefficient() {
    let l = free_nilpotent(&[("x", 1)], 2);
    assert_eq!(l.names(), &["x", "[x,x]"]);
    let sd = cochains(&l);
    assert_eq!(sd.degrees(), &[2, 3]);
    assert_eq!(sd.format(sd.d1(1)), "1/2 v(x)·v(x)");
}

#[test]
fn cp2_truncation_dual() {
    let l = cp2_truncation();
    assert_eq!(l.names(), &["x", "[x,x]", "sy"]);
    let sd = cochains(&l);
    assert_eq!(sd.degrees(), &[2, 3, 4]);
    assert!(!sd.is_quadratic());
    assert_eq!(sd.d0(1), &SparseVector::unit(2));
    let r = check_sullivan(&sd);
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.filtration, vec![2, 3]);
    assert_eq!(homotopy_lie(&sd).unwrap(), l);
    let t = semiquadratic_homology(&sd, 6);
    assert_eq!(
        t.linear,
        BTreeMap::from([(1, 0), (2, 1), (3, 0), (4, 1), (5, 0), (6, 0)])
    );
    assert_eq!(
        t.total,
        BTreeMap::from([(1, 0), (2, 1), (3, 0), (4, 1), (5, 0), (6, 1)])
    );
    assert_eq!(t.disagreements(), vec![6]);
}

#[test]
fn acyclic_pair_tables_vanish() {
    for w in 1..=3 {
        let sd = cochains(&acyclic_pair(w));
        assert!(check_sullivan(&sd).passed());
        let t = semiquadratic_homology(&sd, 6);
        assert!(t.total.values().all(|&d| d == 0), "weight {w}: {t:?}");
        assert!(t.linear.values().all(|&d| d == 0));
        assert!(t.agree());
    }
}

#[test]
fn quadratic_linear_table_is_kernel_of_d1() {
    let sd = cochains(&free_nilpotent(&[("a", 0), ("b", 0)], 3));
    let t = semiquadratic_homology(&sd, 3);
    assert_eq!(t.linear[&1], 2);
    assert_eq!(t.linear[&2], 0);
}

#[test]
fn jacobi_failure_shows_in_d_squared() {
    let names = basis(&[("v(a)", 1), ("v(b)", 1), ("v(c)", 1), ("v(d)", 1), ("v(e)", 1)]);
    let d1 = vec![
        vec![],
        vec![],
        vec![((0, 1), q(-1))],
        vec![((0, 2), q(-1))],
        vec![((1, 3), q(-1))],
    ];
    let sd = SullivanData::new(names, vec![SparseVector::new(); 5], d1).unwrap();
    let r = check_sullivan(&sd);
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.violations[0].generator, 4);
    assert_eq!(sd.format(&r.violations[0].residual), "v(a)·v(b)·v(c)");
    assert!(matches!(homotopy_lie(&sd), Err(SullivanError::NotSullivan(_))));
    assert!(matches!(dual_lie(&sd), Err(SullivanError::Jacobi(..))));
}

#[test]
fn corruptions_break_d_squared_exactly_when_jacobi_fails() {
    let sd = cochains(&free_nilpotent(&[("a", 0), ("b", 0)], 4));
    let terms = d1_terms(&sd);
    let mut detected = 0;
    for k in 0..terms.len() {
        for t in 0..terms[k].len() {
            let mut bad = terms.clone();
            bad[k][t].1 = &bad[k][t].1 * &q(2);
            let corrupt = SullivanData::new(basis_of(&sd), vec![SparseVector::new(); sd.dim()], bad).unwrap();
            let square_fails = !check_sullivan(&corrupt).violations.is_empty();
            let jacobi_fails = matches!(dual_lie(&corrupt), Err(SullivanError::Jacobi(..)));
            assert_eq!(square_fails, jacobi_fails, "term {t} of generator {k}");
            detected += square_fails as usize;
        }
    }
    assert!(detected > 0);
}

#[test]
fn nilpotent_data_rejections() {
    let b = basis(&[("a", 0), ("b", 0)]);
    assert!(matches!(
        NilpotentLieData::new(b.clone(), [((0, 1), SparseVector::unit(1))], None),
        Err(SullivanError::NotNilpotent)
    ));
    assert!(matches!(
        NilpotentLieData::new(
            b.clone(),
            [((0, 1), SparseVector::unit(1)), ((1, 0), SparseVector::unit(1))],
            None
        ),
        Err(SullivanError::Antisymmetry(..))
    ));
    assert!(matches!(
        NilpotentLieData::new(b.clone(), [((0, 0), SparseVector::unit(1))], None),
        Err(SullivanError::Antisymmetry(..))
    ));
    let graded = basis(&[("a", 0), ("x", 1)]);
    assert!(matches!(
        NilpotentLieData::new(graded.clone(), [((0, 0), SparseVector::unit(1))], None),
        Err(SullivanError::BracketDegree(..))
    ));
    assert!(matches!(
        NilpotentLieData::new(graded, [], Some(vec![SparseVector::unit(1), SparseVector::new()])),
        Err(SullivanError::DiffDegree(_))
    ));
    let pair = basis(&[("g", 1), ("h", 2)]);
    assert!(NilpotentLieData::new(pair.clone(), [], Some(vec![SparseVector::new(), SparseVector::unit(0)])).is_ok());
    let with_bracket = basis(&[("g", 1), ("h", 2), ("k", 2)]);
    assert!(matches!(
        NilpotentLieData::new(
            with_bracket,
            [((0, 0), SparseVector::unit(1))],
            Some(vec![SparseVector::new(), SparseVector::unit(0), SparseVector::new()])
        ),
        Err(SullivanError::DiffDerivation(..))
    ));
}

#[test]
fn sullivan_data_rejections() {
    assert!(matches!(
        SullivanData::new(basis(&[("v", 0)]), vec![SparseVector::new()], vec![vec![]]),
        Err(SullivanError::DegreeZero(_))
    ));
    assert!(matches!(
        SullivanData::new(
            basis(&[("v", 1), ("w", 2)]),
            vec![SparseVector::new(); 2],
            vec![vec![((0, 1), q(1))], vec![]]
        ),
        Err(SullivanError::BadDifferential(_))
    ));
    let cyclic = SullivanData::new(
        basis(&[("v", 1), ("w", 1), ("u", 1)]),
        vec![SparseVector::new(); 3],
        vec![vec![((1, 2), q(1))], vec![((0, 2), q(1))], vec![((0, 1), q(1))]],
    )
    .unwrap();
    let r = check_sullivan(&cyclic);
    assert!(!r.filtration_exhausts());
    assert!(matches!(
        wedge_homology(&cochains(&cp2_truncation()), 3),
        Err(SullivanError::NotQuadratic)
    ));
}

#[test]
fn wedge_homology_of_weight_two_stage() {
    let sd = cochains(&free_nilpotent(&[("a", 0), ("b", 0)], 2));
    let h = wedge_homology(&sd, 3).unwrap();
    assert_eq!(h.dim(1, 1), 2);
    assert_eq!(h.dim(2, 2), 2);
    let ones = wedge_classes(&sd, 1, 1).unwrap();
    assert_eq!(
        ones.iter().map(|w| sd.format(w)).collect::<Vec<_>>(),
        vec!["v(a)", "v(b)"]
    );
}

#[test]
fn weight_two_classes_die_at_weight_three() {
    let small = cochains(&free_nilpotent(&[("a", 0), ("b", 0)], 2));
    let large = cochains(&free_nilpotent(&[("a", 0), ("b", 0)], 3));
    let map = stage_inclusion(&small, &large).unwrap();
    let classes = wedge_classes(&small, 2, 2).unwrap();
    assert_eq!(classes.len(), 2);
    for c in &classes {
        assert!(!is_boundary(&small, c).unwrap());
        let image = map_wedge(c, &map, &large);
        assert!(large.apply(&image).is_empty());
        assert!(is_boundary(&large, &image).unwrap(), "{}", large.format(&image));
    }
}

#[test]
fn differential_is_a_derivation_with_koszul_signs() {
    let sd = cochains(&free_nilpotent(&[("x", 1), ("y", 2)], 3));
    let gens: Vec<Wedge> = (0..sd.dim()).map(|k| sd.generator(k)).collect();
    for a in &gens {
        for b in &gens {
            let ab = sd.product(a, b);
            let deg_a = sd.degrees()[a.keys().next().unwrap()[0]];
            let expected = {
                let mut e = sd.product(&sd.apply(a), b);
                wedge::add_scaled(&mut e, &Rational::sign(deg_a % 2 == 1), &sd.product(a, &sd.apply(b)));
                e
            };
            assert_eq!(sd.apply(&ab), expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cochains_of_truncations_square_to_zero(
        dx in 0u32..3, dy in 0u32..3, w in 2u32..4, with_diff in any::<bool>()
    ) {
        let mut gens = vec![Generator::new("x", dx), Generator::new("y", dy)];
        let mut diffs = Vec::new();
        if with_diff {
            gens.push(Generator::new("h", dx + dy + 1).with_weight(2));
        }
        let alg = FreeLie::new(gens, TruncationWindow::new(w, 3 * w)).unwrap();
        if with_diff {
            let t = alg.gen("x").unwrap().bracket(&alg.gen("y").unwrap()).unwrap();
            diffs.push(("h".to_string(), t.into_value()));
        }
        let p = DglPresentation::new(alg, diffs).unwrap();
        let l = NilpotentLieData::from_presentation(&p, w).unwrap();
        let sd = cochains(&l);
        let r = check_sullivan(&sd);
        prop_assert!(r.passed(), "{:?}", r);
        prop_assert_eq!(homotopy_lie(&sd).unwrap(), l);
    }
}
