use approx::assert_abs_diff_eq;
use dercross::crossed_module::{make_fixture, CrossedModuleMorphism, FixtureKind, MapSource};
use dercross::derived::{
    axiom_suite, coordinate_algebra, cross_suite, morphism_suite, oracle_suite, oracle_tolerance,
    DerivedModule, DerivedMorphism, Fault,
};
use dercross::matrix_lie::{DiffMethod, GroupKind, RMatrix};
use dercross::sampling::stream;
use proptest::prelude::*;

fn fixtures() -> Vec<FixtureKind> {
    vec![
        FixtureKind::Conj(GroupKind::SpecialOrthogonal(3)),
        FixtureKind::Conj(GroupKind::UnitQuaternion),
        FixtureKind::Conj(GroupKind::GeneralLinear(2)),
        FixtureKind::Lin(3),
        FixtureKind::Cover,
    ]
}

fn derived(k: &FixtureKind) -> DerivedModule {
    DerivedModule::new(make_fixture(k).unwrap(), MapSource::Exact).unwrap()
}

#[test]
fn closed_forms_match_embedding_oracles() {
    for k in fixtures() {
        let r = oracle_suite(&derived(&k), 8, 3);
        for (name, v) in r.entries() {
            assert!(*v < oracle_tolerance(name), "{k} {name} = {v:e}");
        }
    }
}

#[test]
fn derived_axioms_hold() {
    for k in fixtures() {
        let r = axiom_suite(&derived(&k), 8, 5);
        assert!(r.max() < 1e-9, "{k}\n{r}");
    }
}

#[test]
fn cross_mode_is_an_isomorphism() {
    for k in fixtures() {
        let r = cross_suite(&derived(&k), 8, 9);
        assert!(r.max() < 1e-6, "{k}\n{r}");
    }
}

#[test]
fn dropping_the_adjoint_correction_is_detected() {
    let dm = derived(&FixtureKind::default()).with_fault(Fault::DropAdjointCorrection);
    let r = oracle_suite(&dm, 4, 11);
    assert!(r.get("d_adjoint_exact").unwrap() > 1e-3, "{r}");
    assert!(r.get("dmul").unwrap() < 1e-10, "{r}");
}

#[test]
fn derived_morphisms_commute_with_the_structure() {
    let morphisms = vec![
        CrossedModuleMorphism::identity(&make_fixture(&FixtureKind::default()).unwrap()),
        CrossedModuleMorphism::object_inclusion(&make_fixture(&FixtureKind::Lin(3)).unwrap()),
        CrossedModuleMorphism::cover_projection().unwrap(),
        CrossedModuleMorphism::conj_cover_projection().unwrap(),
    ];
    for beta in &morphisms {
        let morph = DerivedMorphism::new(beta, MapSource::Exact, DiffMethod::Nilpotent).unwrap();
        let r = morphism_suite(&morph, 8, 13);
        assert!(
            r.get("group_homomorphism").unwrap() < 1e-8,
            "{}\n{r}",
            beta.name()
        );
        assert!(
            r.get("algebra_homomorphism").unwrap() < 1e-8,
            "{}\n{r}",
            beta.name()
        );
        assert!(
            r.get("differential_fd").unwrap() < 1e-6,
            "{}\n{r}",
            beta.name()
        );
    }
}

#[test]
fn unit_of_the_derived_group() {
    let dm = derived(&FixtureKind::default());
    let one = dm.identity();
    assert_eq!(one.shift_matrix().max_abs(), 0.0);
    assert_abs_diff_eq!(one.base_matrix().body(), RMatrix::identity(3, 3));
}

#[test]
fn degree_one_coboundaries_vanish_for_lin() {
    let dm = derived(&FixtureKind::Lin(3));
    let alg = coordinate_algebra(3, 2).unwrap();
    let mut rng = stream(1, "lin", 0);
    for p in -1..=1 {
        let s = dm.random_graded(&alg, p, &mut rng).unwrap();
        assert_eq!(dm.coboundary_dt(&s).unwrap().max_abs(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn group_laws_for_any_seed(seed in any::<u64>()) {
        let dm = derived(&FixtureKind::Conj(GroupKind::GeneralLinear(2)));
        let r = axiom_suite(&dm, 2, seed);
        prop_assert!(r.max() < 1e-9, "{}", r);
    }

    #[test]
    fn algebraic_oracles_for_any_seed(seed in any::<u64>()) {
        let dm = derived(&FixtureKind::default());
        let r = oracle_suite(&dm, 1, seed);
        for (name, v) in r.entries() {
            prop_assert!(*v < oracle_tolerance(name), "{} = {:e}", name, v);
        }
    }
}
