use dercross::crossed_module::{
    check_algebra_axioms, check_group_axioms, check_morphism, differentiate_module,
    differentiation_consistency, identity_suite, make_fixture, variational_convergence,
    variational_suite, CrossedModuleMorphism, FixtureKind, MapSource, VariationalOptions,
};
use dercross::matrix_lie::{DiffMethod, GroupKind};

fn fixtures() -> Vec<FixtureKind> {
    vec![
        FixtureKind::Conj(GroupKind::SpecialOrthogonal(3)),
        FixtureKind::Conj(GroupKind::UnitQuaternion),
        FixtureKind::Conj(GroupKind::GeneralLinear(2)),
        FixtureKind::Lin(3),
        FixtureKind::Cover,
    ]
}

#[test]
fn group_axioms_hold_on_every_fixture() {
    for k in fixtures() {
        let m = make_fixture(&k).unwrap();
        let r = check_group_axioms(&m, 50, 42);
        assert!(r.max() < 1e-12, "{k}\n{r}");
    }
}

#[test]
fn corrupted_action_breaks_peiffer() {
    let m = make_fixture(&FixtureKind::default())
        .unwrap()
        .with_scaled_action(1.01);
    let r = check_group_axioms(&m, 10, 1);
    assert!(r.get("peiffer").unwrap() > 1e-3, "{r}");
}

#[test]
fn algebra_axioms_from_every_differentiation_route() {
    for k in fixtures() {
        let m = make_fixture(&k).unwrap();
        let exact = m
            .differentiated(MapSource::Exact)
            .unwrap()
            .algebra_module("exact");
        let r = check_algebra_axioms(&exact, 50, 7);
        assert!(r.max() < 1e-12, "{k} exact\n{r}");
        let (nil, _) = differentiate_module(&m, DiffMethod::Nilpotent);
        let r = check_algebra_axioms(&nil, 20, 7);
        assert!(r.max() < 1e-11, "{k} nilpotent\n{r}");
        let (fd, _) = differentiate_module(&m, DiffMethod::default());
        let r = check_algebra_axioms(&fd, 10, 7);
        assert!(r.max() < 1e-6, "{k} fd\n{r}");
    }
}

#[test]
fn closed_forms_match_differentiation() {
    for k in fixtures() {
        let m = make_fixture(&k).unwrap();
        let exact = m.differentiated(MapSource::Exact).unwrap();
        let nil = m
            .differentiated(MapSource::Numeric(DiffMethod::Nilpotent))
            .unwrap();
        let fd = m
            .differentiated(MapSource::Numeric(DiffMethod::default()))
            .unwrap();
        let r = differentiation_consistency(&m, &exact, &nil, 20, 3);
        assert!(r.max() < 1e-11, "{k} nilpotent\n{r}");
        let r = differentiation_consistency(&m, &exact, &fd, 10, 3);
        assert!(r.max() < 1e-6, "{k} fd\n{r}");
    }
}

#[test]
fn identities_hold() {
    for k in fixtures() {
        let m = make_fixture(&k).unwrap();
        let exact = m.differentiated(MapSource::Exact).unwrap();
        let r = identity_suite(&m, &exact, 50, 5);
        assert!(r.max() < 1e-10, "{k} exact\n{r}");
        let fd = m
            .differentiated(MapSource::Numeric(DiffMethod::default()))
            .unwrap();
        let r = identity_suite(&m, &fd, 10, 5);
        assert!(r.max() < 1e-6, "{k} fd\n{r}");
    }
}

#[test]
fn variational_identities_hold_and_converge() {
    for k in fixtures() {
        let m = make_fixture(&k).unwrap();
        let exact = m.differentiated(MapSource::Exact).unwrap();
        let r = variational_suite(&m, &exact, 30, 9, VariationalOptions::default());
        assert!(r.max() < 1e-5, "{k}\n{r}");
        for name in [
            "mu_variation_odd",
            "mu_dot_variation_odd",
            "dot_mu_variation_odd",
        ] {
            assert!(r.get(name).unwrap() < 1e-10, "{k} {name}\n{r}");
        }
        let ratio = variational_convergence(&m, &exact, 10, 9, 20.0);
        assert!(ratio < 0.1, "{k} ratio {ratio}");
    }
}

#[test]
fn morphisms_commute_with_structure_maps() {
    let base = make_fixture(&FixtureKind::default()).unwrap();
    let lin = make_fixture(&FixtureKind::Lin(3)).unwrap();
    let morphisms = vec![
        CrossedModuleMorphism::identity(&base),
        CrossedModuleMorphism::object_inclusion(&base),
        CrossedModuleMorphism::object_inclusion(&lin),
        CrossedModuleMorphism::cover_projection().unwrap(),
        CrossedModuleMorphism::conj_cover_projection().unwrap(),
    ];
    for b in &morphisms {
        let r = check_morphism(b, 30, 4, DiffMethod::Nilpotent);
        assert!(r.max() < 1e-9, "{}\n{r}", b.name());
    }
}
