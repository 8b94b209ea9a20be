use approx::assert_abs_diff_eq;
use dercross::crossed_module::{make_fixture, FixtureKind, MapSource};
use dercross::derived::DerivedModule;
use dercross::error::Error;
use dercross::matrix_lie::{FdOptions, GroupKind, RMatrix};
use dercross::sampling::stream;
use dercross::synthetic_bundle::{
    basic_check, basic_suite, cartan_suite, gauge_suite, local_gauge, restriction_suite,
    structure_suite, BundleModel, Coefficient, DerivationHandle, FormField, GaugeKind, Operation,
    OperationFault, Quadratic,
};
use proptest::prelude::*;

fn model(k: &FixtureKind) -> BundleModel {
    BundleModel::new(
        DerivedModule::new(make_fixture(k).unwrap(), MapSource::Exact).unwrap(),
        2,
    )
}

fn fixtures() -> Vec<FixtureKind> {
    vec![
        FixtureKind::default(),
        FixtureKind::Conj(GroupKind::GeneralLinear(2)),
        FixtureKind::Lin(3),
        FixtureKind::Cover,
    ]
}

#[test]
fn structure_maps_are_compatible() {
    for k in fixtures() {
        let r = structure_suite(&model(&k), 100, 3);
        assert!(r.max() < 1e-10, "{k}\n{r}");
    }
}

#[test]
fn source_map_drops_the_shift() {
    let m = model(&FixtureKind::default());
    let mut rng = stream(5, "source", 0);
    let v = m.random_point(&mut rng);
    let s = m.source_map(&v).unwrap();
    assert_eq!(s.group(), v.group());
    assert_eq!(s.shift().abs().max(), 0.0);
    assert_eq!(m.source_map(&s).unwrap(), s);
    assert_eq!(m.project(&v), v.x().to_vec());
}

#[test]
fn cartan_relations_hold_on_every_fixture() {
    for k in fixtures() {
        let op = Operation::new(&model(&k)).unwrap();
        let r = cartan_suite(&op, 25, 7);
        assert!(r.max() < 1e-10, "{k}\n{r}");
    }
}

#[test]
fn flipped_contraction_breaks_the_cartan_relations() {
    let op = Operation::new(&model(&FixtureKind::default())).unwrap();
    let r = cartan_suite(&op.with_fault(OperationFault::FlipContraction), 10, 7);
    assert!(r.get("d_squared").unwrap() < 1e-12, "{r}");
    assert!(r.get("lie_contraction").unwrap() > 1e-4, "{r}");
    assert!(r.get("lie_lie").unwrap() > 1e-4, "{r}");
}

#[test]
fn pullbacks_are_basic_and_witnesses_are_not() {
    for k in fixtures() {
        let op = Operation::new(&model(&k)).unwrap();
        let r = basic_suite(&op, 20, 9);
        for (name, v) in r.entries() {
            if name.starts_with("basic_") {
                assert!(*v < 1e-6, "{k} {name} = {v:e}");
            } else {
                assert!(*v < 10.0, "{k} {name} = 1/{:e}", v.recip());
            }
        }
    }
}

#[test]
fn basic_check_on_single_fields() {
    let m = model(&FixtureKind::default());
    let op = Operation::new(&m).unwrap();
    let dm = m.module();
    let mut rng = stream(2, "basic", 0);
    let zs: Vec<_> = (0..3)
        .map(|_| dm.random_algebra_element(&mut rng))
        .collect();
    let points: Vec<_> = (0..3).map(|_| m.random_point(&mut rng)).collect();
    let (basic, r) = basic_check(&op, &FormField::constant(2.5), &zs, &points).unwrap();
    assert!(basic && r < 1e-12);
    let p = FormField::pullback(Quadratic::random(2, &mut rng));
    assert!(basic_check(&op, &p, &zs, &points).unwrap().0);
    let (basic, r) = basic_check(&op, &FormField::group_entry(0, 1), &zs, &points).unwrap();
    assert!(!basic && r > 0.1, "{r}");
}

#[test]
fn restriction_to_the_object_space_is_a_morphism() {
    for k in fixtures() {
        let r = restriction_suite(&model(&k), 20, 4);
        assert!(r.max() < 1e-10, "{k}\n{r}");
    }
}

#[test]
fn local_gauge_laws() {
    for k in fixtures() {
        let r = gauge_suite(&model(&k), 20, 6);
        assert!(r.max() < 1e-10, "{k}\n{r}");
    }
}

#[test]
fn local_gauge_rejects_non_members() {
    let m = model(&FixtureKind::default());
    let v = |_: &[f64]| Ok(RMatrix::identity(3, 3));
    let bad = RMatrix::identity(3, 3) * 2.0;
    let err = local_gauge(&m, &v, &[0.5, 0.5], &bad, GaugeKind::Morphism).unwrap_err();
    assert!(matches!(err, Error::Domain(_)), "{err}");
    let one = RMatrix::identity(3, 3);
    assert_eq!(
        local_gauge(&m, &v, &[0.5, 0.5], &one, GaugeKind::Morphism).unwrap(),
        one
    );
}

#[test]
fn vertical_fields_of_coordinates() {
    let m = model(&FixtureKind::default());
    let op = Operation::new(&m).unwrap();
    let dm = m.module();
    let mut rng = stream(8, "vertical", 0);
    let v = m.random_point(&mut rng);
    let y = dm.random_algebra_element(&mut rng);
    let (u, big_u) = (y.base_matrix().body(), y.shift_matrix().body());
    let zero = RMatrix::zeros(3, 3);
    let fd = FdOptions::default();

    let p = FormField::pullback(Quadratic::random(2, &mut rng));
    assert_eq!(op.vertical_field(&y, &p, &v, fd).unwrap().max_abs(), 0.0);

    let pure_u = dm.algebra_element(&u, &zero).unwrap();
    let au = v.group() * &u;
    for (i, j) in [(0, 1), (2, 0)] {
        let got = op
            .vertical_field(&pure_u, &FormField::group_entry(i, j), &v, fd)
            .unwrap();
        assert!((got.body() - au[(i, j)]).abs() < 1e-6);
    }

    // At a = 1 the fibre coordinates move by the coordinates of U.
    let at_unit = m
        .point(
            v.x().to_vec(),
            dm.element(&RMatrix::identity(3, 3), &v.shift()).unwrap(),
        )
        .unwrap();
    let pure_shift = dm.algebra_element(&zero, &big_u).unwrap();
    let coords = dm.maps().e_basis().coords_real(&big_u);
    let alpha = op.space().coefficient_index(Coefficient::Alpha);
    for (i, c) in coords.iter().enumerate() {
        let got = op
            .vertical_field(&pure_shift, &FormField::fibre_coordinate(i), &at_unit, fd)
            .unwrap();
        assert_abs_diff_eq!(got.left_factor(alpha).body(), *c, epsilon = 1e-10);
    }
}

#[test]
fn lie_derivative_of_functions_is_the_vertical_field() {
    let m = model(&FixtureKind::Conj(GroupKind::GeneralLinear(2)));
    let op = Operation::new(&m).unwrap();
    let dm = m.module();
    let mut rng = stream(3, "vertical", 1);
    for _ in 0..5 {
        let v = m.random_point(&mut rng);
        let y = dm.random_algebra_element(&mut rng);
        let f = FormField::group_entry(1, 0)
            .product(&FormField::fibre_coordinate(2))
            .sum(
                &FormField::group_entry(0, 0)
                    .product(&FormField::pullback(Quadratic::random(2, &mut rng))),
            );
        let z = op.internal(&y, Coefficient::Alpha).unwrap();
        let lie = op
            .lie(&z, &f)
            .unwrap()
            .eval(&op.chart(&v).unwrap())
            .unwrap();
        let flow = op.vertical_field(&y, &f, &v, FdOptions::default()).unwrap();
        assert!(lie.try_sub(&flow).unwrap().max_abs() < 1e-6);
    }
}

#[test]
fn elementary_derivations() {
    let m = model(&FixtureKind::default());
    let op = Operation::new(&m).unwrap();
    let dm = m.module();
    let mut rng = stream(4, "elementary", 0);
    let v = m.random_point(&mut rng);
    let chart = op.chart(&v).unwrap();
    let z = op
        .internal(&dm.random_algebra_element(&mut rng), Coefficient::Alpha)
        .unwrap();
    let j = DerivationHandle::Contraction(z.clone());
    for f in [
        FormField::group_entry(1, 2),
        FormField::fibre_coordinate(0),
        FormField::constant(1.0),
    ] {
        assert_eq!(
            op.apply(&j, &f).unwrap().eval(&chart).unwrap().max_abs(),
            0.0
        );
    }
    let p = FormField::pullback(Quadratic::random(2, &mut rng));
    assert!(op.lie(&z, &p).unwrap().eval(&chart).unwrap().max_abs() < 1e-6);
    let dd = op.de_rham(
        &op.de_rham(&FormField::group_entry(0, 0).product(&FormField::fibre_coordinate(1))),
    );
    assert!(dd.eval(&chart).unwrap().max_abs() < 1e-7);
}

#[test]
fn object_operation_rejects_shifted_directions() {
    let m = model(&FixtureKind::default());
    let op = Operation::object(&m).unwrap();
    let dm = m.module();
    let mut rng = stream(6, "object", 0);
    let z = op
        .internal(&dm.random_algebra_element(&mut rng), Coefficient::Alpha)
        .unwrap();
    let err = op.contraction(&z, &FormField::constant(1.0)).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cartan_relations_for_any_seed(seed in any::<u64>()) {
        let op = Operation::new(&model(&FixtureKind::Cover)).unwrap();
        let r = cartan_suite(&op, 1, seed);
        prop_assert!(r.max() < 1e-10, "{}", r);
    }

    #[test]
    fn right_action_for_any_seed(seed in any::<u64>()) {
        let r = structure_suite(&model(&FixtureKind::Lin(2)), 4, seed);
        prop_assert!(r.max() < 1e-10, "{}", r);
    }
}
