use rand::Rng;

use super::form::{random_basic_field, random_field, Coefficient, Differential, FormField};
use super::operation::{DerivationHandle, Operation};
use super::{BundleModel, SyntheticPoint};
use crate::derived::{DerivedAlgebraElement, GradedDerivedElement};
use crate::error::{Error, Result};
use crate::matrix_lie::RMatrix;
use crate::residual::ResidualReport;
use crate::sampling::run_samples;

/// Threshold below which a field counts as basic.
pub const BASIC_TOL: f64 = 1e-6;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()))
}

fn point_diff(p: &SyntheticPoint, q: &SyntheticPoint) -> f64 {
    let g = (p.group() - q.group()).abs().max();
    let l = (p.shift() - q.shift()).abs().max();
    dist(p.x(), q.x()).max(g).max(l)
}

/// Projection, source map, right action and trivialization laws.
pub fn structure_suite(model: &BundleModel, samples: usize, seed: u64) -> ResidualReport {
    let dm = model.module();
    run_samples(samples, seed, "bundle_structure", |rng, rep| {
        let v = model.random_point(rng);
        let (q, q2) = (dm.random_element(rng), dm.random_element(rng));
        let s = model.source_map(&v)?;
        rep.record(
            "projection_through_source",
            dist(&model.project(&v), &model.project(&s)),
        );
        rep.record("source_idempotent", point_diff(&model.source_map(&s)?, &s));
        let moved = model.right_action(&v, &q)?;
        rep.record(
            "projection_invariant",
            dist(&model.project(&moved), &model.project(&v)),
        );
        let twice = model.right_action(&moved, &q2)?;
        let once = model.right_action(&v, &dm.dmul(&q, &q2)?)?;
        rep.record("right_action", point_diff(&twice, &once));
        rep.record(
            "right_action_unit",
            point_diff(&model.right_action(&v, &dm.identity())?, &v),
        );
        let (x, t) = model.trivialize(&moved);
        let (x0, t0) = model.trivialize(&v);
        let expected = dm.dmul(&t0, &q)?;
        let equiv = (t.base_matrix().body() - expected.base_matrix().body())
            .abs()
            .max()
            .max(
                (t.shift_matrix().body() - expected.shift_matrix().body())
                    .abs()
                    .max(),
            );
        rep.record("trivialization_equivariance", equiv.max(dist(&x, &x0)));
        let n = dm.e().size();
        let object_q = dm.element(
            &q.base_matrix().body(),
            &crate::matrix_lie::RMatrix::zeros(n, n),
        )?;
        let object_moved = model.right_action(&s, &object_q)?;
        rep.record(
            "object_action_closed",
            object_moved
                .shift()
                .abs()
                .max()
                .max(dist(&model.project(&object_moved), &model.project(&s))),
        );
        Ok(())
    })
}

fn eval_at(f: &FormField, op: &Operation, p: &SyntheticPoint) -> Result<f64> {
    Ok(f.eval(&op.chart(p)?)?.max_abs())
}

fn difference(f: &FormField, g: &FormField) -> FormField {
    let (f, g) = (f.clone(), g.clone());
    FormField::new("difference", move |ch| f.eval(ch)?.try_sub(&g.eval(ch)?))
}

fn pure(
    dm_elem: &DerivedAlgebraElement,
    op: &Operation,
    keep_base: bool,
) -> Result<DerivedAlgebraElement> {
    let dm = op.model().module();
    let (u, l) = (dm_elem.base_matrix().body(), dm_elem.shift_matrix().body());
    if keep_base {
        dm.algebra_element(&u, &(l * 0.0))
    } else {
        dm.algebra_element(&(u * 0.0), &l)
    }
}

/// The Cartan relations on random fields, points and pairs `Z, W`. `Z`
/// carries the coefficient `ᾱ` and `W` the coefficient `β̄`, except in the
/// entry checked against the derived bracket, where both carry `ᾱ`.
pub fn cartan_suite(op: &Operation, samples: usize, seed: u64) -> ResidualReport {
    let model = op.model();
    let dm = model.module();
    let group_size = dm.g().size();
    run_samples(samples, seed, "cartan", |rng, rep| {
        let p = model.random_point(rng);
        let f = random_field(op.space(), group_size, rng);
        let (zr, wr) = (
            dm.random_algebra_element(rng),
            dm.random_algebra_element(rng),
        );
        let z = op.internal(&zr, Coefficient::Alpha)?;
        let w = op.internal(&wr, Coefficient::Beta)?;
        let d = DerivationHandle::DeRham;
        let (jz, jw) = (
            DerivationHandle::Contraction(z.clone()),
            DerivationHandle::Contraction(w.clone()),
        );
        let (lz, lw) = (
            DerivationHandle::Lie(z.clone()),
            DerivationHandle::Lie(w.clone()),
        );
        let zw = op.bracket(&z, &w)?;

        rep.record("d_squared", eval_at(&op.commutator(&d, &d, &f)?, op, &p)?);
        let homotopy = difference(&op.commutator(&d, &jz, &f)?, &op.apply(&lz, &f)?);
        rep.record("cartan_homotopy", eval_at(&homotopy, op, &p)?);
        rep.record("d_lie", eval_at(&op.commutator(&d, &lz, &f)?, op, &p)?);
        rep.record(
            "contractions_anticommute",
            eval_at(&op.commutator(&jz, &jw, &f)?, op, &p)?,
        );
        rep.record(
            "contraction_square",
            eval_at(&op.commutator(&jz, &jz, &f)?, op, &p)?,
        );
        let lj = difference(&op.commutator(&lz, &jw, &f)?, &op.contraction(&zw, &f)?);
        rep.record("lie_contraction", eval_at(&lj, op, &p)?);
        let ll = difference(&op.commutator(&lz, &lw, &f)?, &op.lie(&zw, &f)?);
        rep.record("lie_lie", eval_at(&ll, op, &p)?);

        // Shared coefficient: the bracket is the derived bracket.
        let wa = op.internal(&wr, Coefficient::Alpha)?;
        let zw_derived = op.internal(&dm.dbracket(&zr, &wr)?, Coefficient::Alpha)?;
        let shared = difference(
            &op.commutator(&lz, &DerivationHandle::Contraction(wa), &f)?,
            &op.contraction(&zw_derived, &f)?,
        );
        rep.record("lie_contraction_derived_bracket", eval_at(&shared, op, &p)?);

        // Pure 𝔤 directions: the ordinary bundle relation.
        let (zg, wg) = (
            op.internal(&pure(&zr, op, true)?, Coefficient::Alpha)?,
            op.internal(&pure(&wr, op, true)?, Coefficient::Beta)?,
        );
        let rel = lie_contraction_residual(op, &zg, &wg, &f, &p)?;
        rep.record("lie_contraction_group", rel);

        // Pure 𝔢[1] directions: the bracket vanishes.
        let (ze, we) = (
            op.internal(&pure(&zr, op, false)?, Coefficient::Alpha)?,
            op.internal(&pure(&wr, op, false)?, Coefficient::Beta)?,
        );
        if op.bracket(&ze, &we)?.max_abs() != 0.0 {
            return Err(Error::Precondition(
                "bracket of pure shifted elements is not zero".into(),
            ));
        }
        let rel = lie_contraction_residual(op, &ze, &we, &f, &p)?;
        rep.record("lie_contraction_shift", rel);
        Ok(())
    })
}

fn lie_contraction_residual(
    op: &Operation,
    z: &GradedDerivedElement,
    w: &GradedDerivedElement,
    f: &FormField,
    p: &SyntheticPoint,
) -> Result<f64> {
    let lhs = op.commutator(
        &DerivationHandle::Lie(z.clone()),
        &DerivationHandle::Contraction(w.clone()),
        f,
    )?;
    eval_at(
        &difference(&lhs, &op.contraction(&op.bracket(z, w)?, f)?),
        op,
        p,
    )
}

/// `max |j_Z f|, |l_Z f|` over the given directions and points, and whether
/// it is below [`BASIC_TOL`].
pub fn basic_check(
    op: &Operation,
    f: &FormField,
    directions: &[DerivedAlgebraElement],
    points: &[SyntheticPoint],
) -> Result<(bool, f64)> {
    let mut worst: f64 = 0.0;
    for z in directions {
        let zi = op.internal(z, Coefficient::Alpha)?;
        let (j, l) = (op.contraction(&zi, f)?, op.lie(&zi, f)?);
        for p in points {
            worst = worst.max(eval_at(&j, op, p)?).max(eval_at(&l, op, p)?);
        }
    }
    Ok((worst < BASIC_TOL, worst))
}

/// Residuals of basic fields (`basic_*`, small) and reciprocal residuals of
/// the designated non-basic witnesses (`witness_*`, small), so the maximum
/// over samples bounds every witness from below.
pub fn basic_suite(op: &Operation, samples: usize, seed: u64) -> ResidualReport {
    let model = op.model();
    let dm = model.module();
    run_samples(samples, seed, "basic", |rng, rep| {
        let points: Vec<SyntheticPoint> = (0..3).map(|_| model.random_point(rng)).collect();
        let mut directions: Vec<DerivedAlgebraElement> =
            (0..2).map(|_| dm.random_algebra_element(rng)).collect();
        directions.push(pure(&directions[0], op, true)?);
        directions.push(pure(&directions[1], op, false)?);
        // Basic means annihilated by every direction, so include a basis.
        let (g_zero, e_zero) = (
            RMatrix::zeros(dm.g().size(), dm.g().size()),
            RMatrix::zeros(dm.e().size(), dm.e().size()),
        );
        for u in dm.maps().g_basis().elements() {
            directions.push(dm.algebra_element(u, &e_zero)?);
        }
        for big_u in dm.maps().e_basis().elements() {
            directions.push(dm.algebra_element(&g_zero, big_u)?);
        }
        let space = op.space();
        rep.record(
            "basic_pullback",
            basic_check(op, &random_basic_field(space, rng), &directions, &points)?.1,
        );
        rep.record(
            "basic_constant",
            basic_check(
                op,
                &FormField::constant(rng.gen_range(-2.0..2.0)),
                &directions,
                &points,
            )?
            .1,
        );
        let n = dm.g().size();
        let witnesses = [
            (
                "witness_group_entry",
                FormField::group_entry(rng.gen_range(0..n), rng.gen_range(0..n)),
            ),
            (
                "witness_fibre_coordinate",
                FormField::fibre_coordinate(rng.gen_range(0..space.e_dim())),
            ),
            (
                "witness_group_differential",
                FormField::differential(Differential::Group(rng.gen_range(0..space.g_dim()))),
            ),
        ];
        for (name, f) in witnesses {
            rep.record(name, basic_check(op, &f, &directions, &points)?.1.recip());
        }
        Ok(())
    })
}

/// Pull-back to the object space intertwines `d`, `j` and `l` of the full
/// operation restricted to `(u, 0)` with those of the object operation.
pub fn restriction_suite(model: &BundleModel, samples: usize, seed: u64) -> ResidualReport {
    let dm = model.module();
    let setup = Operation::new(model).and_then(|full| Ok((full, Operation::object(model)?)));
    run_samples(samples, seed, "restriction", |rng, rep| {
        let (full, object) = setup.as_ref().map_err(|e| Error::Config(e.to_string()))?;
        let p = model.random_point(rng);
        let (cf, co) = (full.chart(&p)?, object.chart(&p)?);
        let f = random_field(full.space(), dm.g().size(), rng);
        let basic = random_basic_field(full.space(), rng);
        let z = pure(&dm.random_algebra_element(rng), full, true)?;
        let (zf, zo) = (
            full.internal(&z, Coefficient::Alpha)?,
            object.internal(&z, Coefficient::Alpha)?,
        );
        let compare = |lhs: FormField, rhs: FormField| -> Result<f64> {
            Ok(lhs
                .restricted()
                .eval(&cf)?
                .try_sub(&rhs.eval(&co)?)?
                .max_abs())
        };
        rep.record(
            "restriction_de_rham",
            compare(full.de_rham(&f), object.de_rham(&f.restricted()))?,
        );
        rep.record(
            "restriction_de_rham_basic",
            compare(full.de_rham(&basic), object.de_rham(&basic.restricted()))?,
        );
        rep.record(
            "restriction_contraction",
            compare(
                full.contraction(&zf, &f)?,
                object.contraction(&zo, &f.restricted())?,
            )?,
        );
        rep.record(
            "restriction_lie",
            compare(full.lie(&zf, &f)?, object.lie(&zo, &f.restricted())?)?,
        );
        let outside = object.internal(
            &pure(&dm.random_algebra_element(rng), full, false)?,
            Coefficient::Alpha,
        )?;
        let rejected = matches!(
            object.contraction(&outside, &f),
            Err(Error::Precondition(_))
        );
        rep.record(
            "restriction_rejects_shift",
            if rejected { 0.0 } else { f64::INFINITY },
        );
        Ok(())
    })
}
