//! Grassmann-embedding oracles: every closed-form law is re-derived by
//! adjoining nilpotent generators, computing in the block-matrix realization
//! of `E ⋊ G` and reading coefficients back.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::graded::{coordinate_algebra, sign, GradedDerivedElement};
use super::transport::{Derivation, DerivedField, FieldFn, ModelSpace};
use super::{
    AdjointDirection, DerivedAlgebraElement, DerivedCurve, DerivedGroupElement, DerivedModule,
    DerivedMorphism, Side,
};
use crate::crossed_module::SemidirectRealization;
use crate::error::{Error, Result};
use crate::graded_coeff::{GeneratorSpec, GradedAlgebra, GradedScalar, Origin};
use crate::matrix_lie::{
    even_curve_derivative, exp_matrix, fd_curve_derivative, max_diff, real_exp, FdOptions, GMatrix,
    Target,
};
use crate::residual::ResidualReport;
use crate::sampling::run_samples;

/// Tolerance for an entry of [`oracle_suite`]: entries ending in `_fd`
/// involve finite differences.
pub fn oracle_tolerance(name: &str) -> f64 {
    if name.ends_with("_fd") {
        1e-6
    } else {
        1e-10
    }
}

fn realization(dm: &DerivedModule) -> Result<&SemidirectRealization> {
    dm.module().realization().ok_or_else(|| {
        Error::Unsupported(format!("{} has no block realization", dm.module().name()))
    })
}

fn algebra_with(gens: &[(&str, i32)]) -> Result<Arc<GradedAlgebra>> {
    GradedAlgebra::new(
        gens.iter()
            .map(|(n, d)| GeneratorSpec::new(*n, *d, Origin::Auxiliary))
            .collect(),
    )
}

/// `1 + c X` with `c` a scalar on the left.
fn unipotent(c: &GradedScalar, x: &GMatrix) -> Result<GMatrix> {
    GMatrix::identity(x.rows()).try_add(&x.left_scale(c))
}

/// Differences after re-expressing both sides over the larger algebra.
fn ordered_diff(pairs: &[(&GMatrix, &GMatrix)]) -> f64 {
    pairs.iter().fold(0.0, |m: f64, (a, b)| {
        let d = if a.algebra().len() >= b.algebra().len() {
            b.embed_into(&a.algebra()).map(|b| max_diff(a, &b))
        } else {
            a.embed_into(&b.algebra()).map(|a| max_diff(&a, b))
        };
        m.max(d.unwrap_or(f64::INFINITY))
    })
}

/// Embedded `e^{ᾱL} a`.
fn embed_derived(
    r: &SemidirectRealization,
    bar: &GradedScalar,
    p: &DerivedGroupElement,
) -> Result<GMatrix> {
    (r.embed_group)(&unipotent(bar, p.shift_matrix())?, p.base_matrix())
}

/// Compares a split group element `(1 + ᾱL', b)` with a closed-form result.
fn compare_group(
    r: &SemidirectRealization,
    m: &GMatrix,
    gen: usize,
    closed: &DerivedGroupElement,
) -> Result<f64> {
    let (big, small) = (r.split_group)(m)?;
    let one = GMatrix::identity(big.rows());
    Ok(ordered_diff(&[
        (&small, closed.base_matrix()),
        (&big.left_factor(gen), closed.shift_matrix()),
        (&big.drop_generators(1 << gen), &one),
    ]))
}

/// Compares a split algebra element `u + ᾱU` with a closed-form result.
fn compare_algebra(
    r: &SemidirectRealization,
    m: &GMatrix,
    gen: usize,
    closed: &DerivedAlgebraElement,
) -> Result<f64> {
    let (big, small) = (r.split_algebra)(m)?;
    let zero = GMatrix::zeros(big.rows(), big.cols());
    Ok(ordered_diff(&[
        (&small, closed.base_matrix()),
        (&big.left_factor(gen), closed.shift_matrix()),
        (&big.drop_generators(1 << gen), &zero),
    ]))
}

fn dmul_oracle(
    dm: &DerivedModule,
    p: &DerivedGroupElement,
    q: &DerivedGroupElement,
) -> Result<f64> {
    let r = realization(dm)?;
    let alg = algebra_with(&[("ᾱ", 1)])?;
    let bar = GradedScalar::generator(&alg, 0);
    let prod = embed_derived(r, &bar, p)?.try_mul(&embed_derived(r, &bar, q)?)?;
    compare_group(r, &prod, 0, &dm.dmul(p, q)?)
}

fn dinv_oracle(dm: &DerivedModule, p: &DerivedGroupElement) -> Result<f64> {
    let r = realization(dm)?;
    let alg = algebra_with(&[("ᾱ", 1)])?;
    let bar = GradedScalar::generator(&alg, 0);
    compare_group(r, &embed_derived(r, &bar, p)?.inverse()?, 0, &dm.dinv(p)?)
}

/// `Y = u + ᾱU` and `W = v + β̄V` with independent odd generators; the
/// bracket is read off the terms linear in one of them.
fn dbracket_oracle(
    dm: &DerivedModule,
    y: &DerivedAlgebraElement,
    w: &DerivedAlgebraElement,
) -> Result<f64> {
    let r = realization(dm)?;
    let alg = algebra_with(&[("ᾱ", 1), ("β̄", 1)])?;
    let (a, b) = (
        GradedScalar::generator(&alg, 0),
        GradedScalar::generator(&alg, 1),
    );
    let ey = (r.embed_algebra)(&y.shift_matrix().left_scale(&a), y.base_matrix())?;
    let ew = (r.embed_algebra)(&w.shift_matrix().left_scale(&b), w.base_matrix())?;
    let (big, small) = (r.split_algebra)(&ey.commutator(&ew))?;
    let closed = dm.dbracket(y, w)?;
    let shift = big
        .left_factor(0)
        .drop_generators(2)
        .try_add(&big.left_factor(1).drop_generators(1))?;
    Ok(ordered_diff(&[
        (&small.drop_generators(3), closed.base_matrix()),
        (&shift, closed.shift_matrix()),
    ]))
}

/// Conjugates `D(s) = e^{ᾱsU} e^{su}` by `P` and differentiates at `s = 0`.
fn adjoint_oracle(
    dm: &DerivedModule,
    p: &DerivedGroupElement,
    y: &DerivedAlgebraElement,
    direction: AdjointDirection,
    exact: bool,
) -> Result<f64> {
    let r = realization(dm)?;
    let alg = algebra_with(&[("ᾱ", 1)])?;
    let bar = GradedScalar::generator(&alg, 0);
    let emb_p = embed_derived(r, &bar, p)?;
    let emb_pi = emb_p.inverse()?;
    let conj = |s: &GradedScalar| -> Result<GMatrix> {
        let host = s.algebra().clone();
        let (pp, ppi) = if host.is_empty() {
            (emb_p.clone(), emb_pi.clone())
        } else {
            (emb_p.embed_into(&host)?, emb_pi.embed_into(&host)?)
        };
        let bar_s = if host.is_empty() {
            bar.clone()
        } else {
            bar.embed_into(&host)?
        };
        let d = (r.embed_group)(
            &unipotent(&bar_s.try_mul(s)?, y.shift_matrix())?,
            &exp_matrix(&y.base_matrix().left_scale(s))?,
        )?;
        match direction {
            AdjointDirection::Forward => pp.try_mul(&d)?.try_mul(&ppi),
            AdjointDirection::Inverse => ppi.try_mul(&d)?.try_mul(&pp),
        }
    };
    let tangent = if exact {
        even_curve_derivative(conj, &alg, Target::Group)?
    } else {
        fd_curve_derivative(
            |s| conj(&GradedScalar::real(s)),
            Target::Group,
            FdOptions::default(),
        )?
    };
    let tangent = if tangent.algebra().is_empty() {
        tangent.embed_into(&alg)?
    } else {
        tangent
    };
    compare_algebra(r, &tangent, 0, &dm.d_adjoint(p, y, direction)?)
}

/// The finite conjugation `P D P⁻¹` (or `P⁻¹ D P`) against its closed
/// exponential form.
fn conjugation_exp_oracle(
    dm: &DerivedModule,
    p: &DerivedGroupElement,
    y: &DerivedAlgebraElement,
    direction: AdjointDirection,
) -> Result<f64> {
    let r = realization(dm)?;
    let maps = dm.maps();
    let alg = algebra_with(&[("ᾱ", 1)])?;
    let bar = GradedScalar::generator(&alg, 0);
    let (a, l) = (p.base_matrix(), p.shift_matrix());
    let (u, big_u) = (y.base_matrix(), y.shift_matrix());
    let emb_p = embed_derived(r, &bar, p)?;
    let d = (r.embed_group)(&unipotent(&bar, big_u)?, &exp_matrix(u)?)?;
    let eu = exp_matrix(u)?;
    let ai = a.inverse()?;
    let (lhs, shift, base) = match direction {
        AdjointDirection::Forward => {
            let ad = a.try_mul(u)?.try_mul(&ai)?;
            let e_ad = exp_matrix(&ad)?;
            let shift = maps
                .mu_dot(a, big_u)?
                .try_add(l)?
                .try_sub(&maps.mu_dot(&e_ad, l)?)?;
            (emb_p.try_mul(&d)?.try_mul(&emb_p.inverse()?)?, shift, e_ad)
        }
        AdjointDirection::Inverse => {
            let ad = ai.try_mul(u)?.try_mul(a)?;
            let inner = big_u.try_sub(l)?.try_add(&maps.mu_dot(&eu, l)?)?;
            (
                emb_p.inverse()?.try_mul(&d)?.try_mul(&emb_p)?,
                maps.mu_dot(&ai, &inner)?,
                exp_matrix(&ad)?,
            )
        }
    };
    let closed = dm.element(&base.body(), &shift.body())?;
    compare_group(r, &lhs, 0, &closed)
}

/// A random curve `g(t) = a e^{t x₁ + t² x₂}`, `E(t) = L₀ + t L₁ + t² L₂`.
fn random_curve(dm: &DerivedModule, rng: &mut ChaCha8Rng) -> DerivedCurve {
    let (g, e) = (dm.g().clone(), dm.e().clone());
    let a = g.random_element(rng);
    let (x1, x2) = (g.random_algebra(rng), g.random_algebra(rng));
    let (l0, l1, l2) = (
        e.random_algebra(rng),
        e.random_algebra(rng),
        e.random_algebra(rng),
    );
    let dm = dm.clone();
    DerivedCurve::new(vec![-0.5, 0.0, 0.5], move |t| {
        dm.element(
            &(&a * real_exp(&(&x1 * t + &x2 * (t * t)))),
            &(&l0 + &l1 * t + &l2 * (t * t)),
        )
    })
}

/// `d = θ ∂ₜ` applied to the embedded curve, `θ` kept to the left; the
/// components are read by left extraction of `θ` and then `ᾱ`.
fn mc_oracle(dm: &DerivedModule, curve: &DerivedCurve, t0: f64, side: Side) -> Result<f64> {
    let r = realization(dm)?;
    let alg = algebra_with(&[("ᾱ", 1), ("θ", 1)])?;
    let bar = GradedScalar::generator(&alg, 0);
    let theta = GradedScalar::generator(&alg, 1);
    let at = |s: f64| embed_derived(r, &bar, &curve.at(t0 + s)?);
    let m = at(0.0)?;
    let dm_dt = fd_curve_derivative(at, Target::Algebra, FdOptions::default())?;
    // `ᾱL` has total degree 0, so `θ` commutes with `M` and sits in front.
    let form = match side {
        Side::Left => dm_dt.try_mul(&m.inverse()?)?,
        Side::Right => m.inverse()?.try_mul(&dm_dt)?,
    }
    .left_scale(&theta);
    let (big, small) = (r.split_algebra)(&form)?;
    let closed = dm.mc_form(curve, t0, side, FdOptions::default())?;
    Ok(ordered_diff(&[
        (&small.left_factor(1), closed.base_matrix()),
        (&big.left_factor(0).left_factor(1), closed.shift_matrix()),
    ]))
}

/// `S(α) = j + (−1)^p αJ` embedded over `alg`, where `α` is generator `gen`.
fn embed_graded(
    r: &SemidirectRealization,
    s: &GradedDerivedElement,
    alg: &Arc<GradedAlgebra>,
    gen: usize,
) -> Result<GMatrix> {
    let alpha = GradedScalar::generator(alg, gen);
    let shift = s
        .shift()
        .embed_into(alg)?
        .left_scale(&alpha)
        .scale(sign(s.degree()));
    (r.embed_algebra)(&shift, &s.base().embed_into(alg)?)
}

fn with_alpha(alg: &Arc<GradedAlgebra>) -> Result<(Arc<GradedAlgebra>, usize)> {
    let ext = alg.extended(vec![GeneratorSpec::new("α", -1, Origin::Auxiliary)])?;
    let i = ext.len() - 1;
    Ok((ext, i))
}

/// Reads `(j, J)` off an embedded degree-`p` element.
fn split_graded(
    r: &SemidirectRealization,
    m: &GMatrix,
    gen: usize,
    degree: i32,
) -> Result<(GMatrix, GMatrix)> {
    let (big, small) = (r.split_algebra)(m)?;
    Ok((small, big.left_factor(gen).scale(sign(degree))))
}

fn graded_bracket_oracle(
    dm: &DerivedModule,
    alg: &Arc<GradedAlgebra>,
    s: &GradedDerivedElement,
    t: &GradedDerivedElement,
) -> Result<f64> {
    let r = realization(dm)?;
    let (ext, a) = with_alpha(alg)?;
    let (es, et) = (embed_graded(r, s, &ext, a)?, embed_graded(r, t, &ext, a)?);
    let twist = sign(s.degree() * t.degree());
    let c = es.try_mul(&et)?.try_sub(&et.try_mul(&es)?.scale(twist))?;
    let degree = s.degree() + t.degree();
    let (base, shift) = split_graded(r, &c, a, degree)?;
    let closed = dm.graded_bracket(s, t)?;
    Ok(ordered_diff(&[
        (&base, closed.base()),
        (&shift, closed.shift()),
    ]))
}

/// `d_t S = t(dS/dα)` with the `α`-derivative from the left.
fn coboundary_oracle(
    dm: &DerivedModule,
    alg: &Arc<GradedAlgebra>,
    s: &GradedDerivedElement,
) -> Result<f64> {
    let r = realization(dm)?;
    let (ext, a) = with_alpha(alg)?;
    let (big, _) = (r.split_algebra)(&embed_graded(r, s, &ext, a)?)?;
    let base = dm.maps().tau_dot_graded(&big.left_derivative(a))?;
    let closed = dm.coboundary_dt(s)?;
    let zero = GMatrix::zeros(closed.shift().rows(), closed.shift().cols());
    Ok(ordered_diff(&[
        (&base, closed.base()),
        (closed.shift(), &zero),
    ]))
}

/// A random field on `ℝ² × ℝ[1]³`: `r(x) = a e^{x₀ξ₀ + x₁ξ₁}`,
/// `O(x) = Σ yᵢ (Oᵢ₀ + x₀ Oᵢ₁ + x₁² Oᵢ₂)`.
pub fn random_field<R: Rng + ?Sized>(dm: &DerivedModule, rng: &mut R) -> Result<DerivedField> {
    let space = ModelSpace::new(2, 3)?;
    let (g, e) = (dm.g().clone(), dm.e().clone());
    let a = g.random_element(rng);
    let xi = [g.random_algebra(rng), g.random_algebra(rng)];
    let parts: Vec<[_; 3]> = (0..3)
        .map(|_| {
            [
                e.random_algebra(rng),
                e.random_algebra(rng),
                e.random_algebra(rng),
            ]
        })
        .collect();
    let base: FieldFn = Arc::new(move |x| {
        Ok(GMatrix::from_real(
            &(&a * real_exp(&(&xi[0] * x[0] + &xi[1] * x[1]))),
        ))
    });
    let coords = space.coords().clone();
    let shift: FieldFn = Arc::new(move |x| {
        let n = parts[0][0].nrows();
        let mut acc = GMatrix::zeros(n, n);
        for (i, [c0, c1, c2]) in parts.iter().enumerate() {
            let m = c0 + c1 * x[0] + c2 * (x[1] * x[1]);
            acc = acc.try_add(&GMatrix::scaled_real(
                &GradedScalar::generator(&coords, i),
                &m,
            ))?;
        }
        Ok(acc)
    });
    Ok(DerivedField::new(space, base, shift))
}

/// Applies the derivation entrywise to the embedded field `e^{αO} r`.
fn transport_oracle(
    dm: &DerivedModule,
    field: &DerivedField,
    x: &[f64],
    d: Derivation,
    side: Side,
) -> Result<f64> {
    let r = realization(dm)?;
    let (ext, a) = with_alpha(field.space().coords())?;
    let alpha = GradedScalar::generator(&ext, a);
    let embedded = |y: &[f64]| -> Result<GMatrix> {
        let o = field.shift_at(y)?.embed_into(&ext)?;
        (r.embed_group)(
            &unipotent(&alpha, &o)?,
            &field.base_at(y)?.embed_into(&ext)?,
        )
    };
    let c = embedded(x)?;
    let dc = d
        .apply(field.space(), &embedded, x, FdOptions::default())?
        .embed_into(&ext)?;
    let form = match side {
        Side::Left => dc.try_mul(&c.inverse()?)?,
        Side::Right => c.inverse()?.try_mul(&dc)?,
    };
    let (base, shift) = split_graded(r, &form, a, d.degree())?;
    let closed = dm.derivation_transport(field, x, d, side, FdOptions::default())?;
    Ok(ordered_diff(&[
        (&base, closed.base()),
        (&shift, closed.shift()),
    ]))
}

/// `d_τ̇ = τ̇ d/dα` realized as the variation `αO ↦ αO + ν τ̇(O)` of the
/// exponent, `ν` odd of degree `−1` and read from the left.
fn dtau_oracle(dm: &DerivedModule, field: &DerivedField, x: &[f64], side: Side) -> Result<f64> {
    let r = realization(dm)?;
    let ext = field.space().coords().extended(vec![
        GeneratorSpec::new("ν", -1, Origin::Auxiliary),
        GeneratorSpec::new("α", -1, Origin::Auxiliary),
    ])?;
    let (nu_i, a) = (ext.len() - 2, ext.len() - 1);
    let (nu, alpha) = (
        GradedScalar::generator(&ext, nu_i),
        GradedScalar::generator(&ext, a),
    );
    let o = field.shift_at(x)?.embed_into(&ext)?;
    let rr = field.base_at(x)?.embed_into(&ext)?;
    let t_o = dm.maps().tau_dot_graded(&o)?.embed_into(&ext)?;
    let ne = o.rows();
    let plain = (r.embed_algebra)(
        &o.left_scale(&alpha),
        &GMatrix::zeros(rr.rows(), rr.rows()).embed_into(&ext)?,
    )?;
    let varied = (r.embed_algebra)(&o.left_scale(&alpha), &t_o.left_scale(&nu))?;
    let emb_r = (r.embed_group)(&GMatrix::identity(ne).embed_into(&ext)?, &rr)?;
    let value = match side {
        Side::Left => exp_matrix(&varied)?.try_mul(&exp_matrix(&plain.scale(-1.0))?)?,
        Side::Right => emb_r
            .inverse()?
            .try_mul(&exp_matrix(&plain.scale(-1.0))?)?
            .try_mul(&exp_matrix(&varied)?)?
            .try_mul(&emb_r)?,
    };
    let (base, shift) = split_graded(r, &value.left_factor(nu_i), a, 1)?;
    let closed = dm.dtau_transport(field, x, side)?;
    Ok(ordered_diff(&[
        (&base, closed.base()),
        (&shift, closed.shift()),
    ]))
}

fn random_point<R: Rng + ?Sized>(rng: &mut R) -> [f64; 2] {
    [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)]
}

/// Every closed-form law against its embedding oracle. Entries ending in
/// `_fd` involve finite differences; see [`oracle_tolerance`].
pub fn oracle_suite(dm: &DerivedModule, samples: usize, seed: u64) -> ResidualReport {
    run_samples(samples, seed, "derived_oracles", |rng, rep| {
        let (p, q) = (dm.random_element(rng), dm.random_element(rng));
        let (y, w) = (
            dm.random_algebra_element(rng),
            dm.random_algebra_element(rng),
        );
        rep.record("dmul", dmul_oracle(dm, &p, &q)?);
        rep.record("dinv", dinv_oracle(dm, &p)?);
        rep.record("dbracket", dbracket_oracle(dm, &y, &w)?);
        for (dir, name) in [
            (AdjointDirection::Forward, "d_adjoint"),
            (AdjointDirection::Inverse, "d_adjoint_inverse"),
        ] {
            rep.record(
                &format!("{name}_fd"),
                adjoint_oracle(dm, &p, &y, dir, false)?,
            );
            rep.record(
                &format!("{name}_exact"),
                adjoint_oracle(dm, &p, &y, dir, true)?,
            );
            rep.record(
                &format!("{name}_exp_form"),
                conjugation_exp_oracle(dm, &p, &y, dir)?,
            );
        }
        let curve = random_curve(dm, rng);
        let t0 = rng.gen_range(-0.5..0.5);
        rep.record("mc_left_fd", mc_oracle(dm, &curve, t0, Side::Left)?);
        rep.record("mc_right_fd", mc_oracle(dm, &curve, t0, Side::Right)?);

        let alg = coordinate_algebra(3, 2)?;
        let (dp, dq) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let s = dm.random_graded(&alg, dp, rng)?;
        let t = dm.random_graded(&alg, dq, rng)?;
        rep.record("graded_bracket", graded_bracket_oracle(dm, &alg, &s, &t)?);
        rep.record("coboundary", coboundary_oracle(dm, &alg, &s)?);

        let field = random_field(dm, rng)?;
        let x = random_point(rng);
        let odd = Derivation::OddPartial(rng.gen_range(0..3));
        let even = Derivation::OddTimesEvenPartial {
            odd: rng.gen_range(0..3),
            even: rng.gen_range(0..2),
        };
        for (side, tag) in [(Side::Left, "left"), (Side::Right, "right")] {
            rep.record(
                &format!("transport_{tag}_odd"),
                transport_oracle(dm, &field, &x, odd, side)?,
            );
            rep.record(
                &format!("transport_{tag}_fd"),
                transport_oracle(dm, &field, &x, even, side)?,
            );
            rep.record(&format!("dtau_{tag}"), dtau_oracle(dm, &field, &x, side)?);
        }
        Ok(())
    })
}

fn alg_diff(a: &DerivedAlgebraElement, b: &DerivedAlgebraElement) -> f64 {
    ordered_diff(&[
        (a.base_matrix(), b.base_matrix()),
        (a.shift_matrix(), b.shift_matrix()),
    ])
}

fn group_diff(a: &DerivedGroupElement, b: &DerivedGroupElement) -> f64 {
    ordered_diff(&[
        (a.base_matrix(), b.base_matrix()),
        (a.shift_matrix(), b.shift_matrix()),
    ])
}

fn add(
    dm: &DerivedModule,
    a: &DerivedAlgebraElement,
    b: &DerivedAlgebraElement,
    c: f64,
) -> Result<DerivedAlgebraElement> {
    let base = a.base_matrix().try_add(&b.base_matrix().scale(c))?;
    let shift = a.shift_matrix().try_add(&b.shift_matrix().scale(c))?;
    dm.algebra_element(&base.body(), &shift.body())
}

fn graded_add(
    a: &GradedDerivedElement,
    b: &GradedDerivedElement,
    c: f64,
) -> Result<GradedDerivedElement> {
    if a.degree() != b.degree() {
        return Err(Error::Mismatch(format!(
            "degrees {} and {}",
            a.degree(),
            b.degree()
        )));
    }
    GradedDerivedElement::new(
        a.degree(),
        a.base().try_add(&b.base().scale(c))?,
        a.shift().try_add(&b.shift().scale(c))?,
    )
}

/// Group, algebra, action and complex axioms of the derived structures.
pub fn axiom_suite(dm: &DerivedModule, samples: usize, seed: u64) -> ResidualReport {
    run_samples(samples, seed, "derived_axioms", |rng, rep| {
        let (p, q, s) = (
            dm.random_element(rng),
            dm.random_element(rng),
            dm.random_element(rng),
        );
        let one = dm.identity();
        rep.record(
            "associativity",
            group_diff(
                &dm.dmul(&dm.dmul(&p, &q)?, &s)?,
                &dm.dmul(&p, &dm.dmul(&q, &s)?)?,
            ),
        );
        rep.record(
            "identity",
            group_diff(&dm.dmul(&one, &p)?, &p).max(group_diff(&dm.dmul(&p, &one)?, &p)),
        );
        let pi = dm.dinv(&p)?;
        rep.record(
            "inverse",
            group_diff(&dm.dmul(&p, &pi)?, &one).max(group_diff(&dm.dmul(&pi, &p)?, &one)),
        );
        rep.record("inverse_involution", group_diff(&dm.dinv(&pi)?, &p));

        let (y, w, z) = (
            dm.random_algebra_element(rng),
            dm.random_algebra_element(rng),
            dm.random_algebra_element(rng),
        );
        let yw = dm.dbracket(&y, &w)?;
        rep.record(
            "antisymmetry",
            alg_diff(&yw, &add(dm, &dm.dbracket(&w, &y)?, &yw, 0.0)?.negated(dm)?),
        );
        let jac = add(
            dm,
            &add(
                dm,
                &dm.dbracket(&y, &dm.dbracket(&w, &z)?)?,
                &dm.dbracket(&w, &dm.dbracket(&z, &y)?)?,
                1.0,
            )?,
            &dm.dbracket(&z, &yw)?,
            1.0,
        )?;
        rep.record(
            "jacobi",
            jac.base_matrix()
                .max_abs()
                .max(jac.shift_matrix().max_abs()),
        );

        let fwd = AdjointDirection::Forward;
        let pq = dm.dmul(&p, &q)?;
        rep.record(
            "adjoint_action",
            alg_diff(
                &dm.d_adjoint(&pq, &y, fwd)?,
                &dm.d_adjoint(&p, &dm.d_adjoint(&q, &y, fwd)?, fwd)?,
            ),
        );
        rep.record(
            "adjoint_automorphism",
            alg_diff(
                &dm.d_adjoint(&p, &yw, fwd)?,
                &dm.dbracket(&dm.d_adjoint(&p, &y, fwd)?, &dm.d_adjoint(&p, &w, fwd)?)?,
            ),
        );
        let back = dm.d_adjoint(&p, &dm.d_adjoint(&p, &y, AdjointDirection::Inverse)?, fwd)?;
        rep.record(
            "adjoint_inverse",
            alg_diff(&back, &y).max(alg_diff(
                &dm.d_adjoint(&p, &y, AdjointDirection::Inverse)?,
                &dm.d_adjoint(&pi, &y, fwd)?,
            )),
        );

        let alg = coordinate_algebra(3, 2)?;
        let mut deg = || rng.gen_range(-1..=1);
        let (dp, dq, dr) = (deg(), deg(), deg());
        let gs = dm.random_graded(&alg, dp, rng)?;
        let gt = dm.random_graded(&alg, dq, rng)?;
        let gu = dm.random_graded(&alg, dr, rng)?;
        let st = dm.graded_bracket(&gs, &gt)?;
        let ts = dm.graded_bracket(&gt, &gs)?;
        rep.record(
            "graded_antisymmetry",
            graded_add(&st, &ts, sign(dp * dq))?.max_abs(),
        );
        let lhs = dm.graded_bracket(&gs, &dm.graded_bracket(&gt, &gu)?)?;
        let rhs = graded_add(
            &dm.graded_bracket(&st, &gu)?,
            &dm.graded_bracket(&gt, &dm.graded_bracket(&gs, &gu)?)?,
            sign(dp * dq),
        )?;
        rep.record("graded_jacobi", lhs.distance(&rhs));

        let dts = dm.coboundary_dt(&gs)?;
        rep.record("dt_squared", dm.coboundary_dt(&dts)?.max_abs());
        let lhs = dm.coboundary_dt(&st)?;
        let rhs = graded_add(
            &dm.graded_bracket(&dts, &gt)?,
            &dm.graded_bracket(&gs, &dm.coboundary_dt(&gt)?)?,
            sign(dp),
        )?;
        rep.record("leibniz", lhs.distance(&rhs));

        // Degree-0 elements whose shifted parts share one odd coefficient
        // reproduce the ungraded bracket.
        let y1 = GradedScalar::generator(&alg, 0);
        let lift = |v: &DerivedAlgebraElement| {
            GradedDerivedElement::new(0, v.base_matrix().clone(), v.shift_matrix().left_scale(&y1))
        };
        let lifted = dm.graded_bracket(&lift(&y)?, &lift(&w)?)?;
        rep.record(
            "degree_zero_reduction",
            ordered_diff(&[
                (lifted.base(), yw.base_matrix()),
                (&lifted.shift().left_factor(0), yw.shift_matrix()),
            ]),
        );
        Ok(())
    })
}

impl DerivedAlgebraElement {
    fn negated(&self, dm: &DerivedModule) -> Result<Self> {
        dm.algebra_element(
            &(-self.base_matrix().body()),
            &(-self.shift_matrix().body()),
        )
    }
}

/// Cross modality: homomorphism, Lie differential, round trips and the
/// product law against an `α`-embedding.
pub fn cross_suite(dm: &DerivedModule, samples: usize, seed: u64) -> ResidualReport {
    run_samples(samples, seed, "cross_mode", |rng, rep| {
        let (p, q) = (dm.random_element(rng), dm.random_element(rng));
        let (cp, cq) = (dm.cross_mode(&p)?, dm.cross_mode(&q)?);
        let lhs = dm.cross_mode(&dm.dmul(&p, &q)?)?;
        let rhs = dm.cross_mul(&cp, &cq)?;
        rep.record(
            "homomorphism",
            ordered_diff(&[
                (lhs.base().entries(), rhs.base().entries()),
                (lhs.shift().entries(), rhs.shift().entries()),
            ]),
        );
        let (li, ri) = (dm.cross_mode(&dm.dinv(&p)?)?, dm.cross_inv(&cp)?);
        rep.record(
            "inverse",
            ordered_diff(&[
                (li.base().entries(), ri.base().entries()),
                (li.shift().entries(), ri.shift().entries()),
            ]),
        );
        let back = dm.cross_mode_inverse(&cp)?;
        rep.record(
            "round_trip",
            if back == p {
                0.0
            } else {
                group_diff(&back, &p).max(f64::MIN_POSITIVE)
            },
        );

        let (y, w) = (
            dm.random_algebra_element(rng),
            dm.random_algebra_element(rng),
        );
        let (cy, cw) = (dm.cross_mode_algebra(&y)?, dm.cross_mode_algebra(&w)?);
        let lb = dm.cross_mode_algebra(&dm.dbracket(&y, &w)?)?;
        let rb = dm.cross_bracket(&cy, &cw)?;
        rep.record(
            "bracket_homomorphism",
            ordered_diff(&[
                (lb.base().entries(), rb.base().entries()),
                (lb.shift().entries(), rb.shift().entries()),
            ]),
        );
        let yb = dm.cross_mode_algebra_inverse(&cy)?;
        rep.record(
            "algebra_round_trip",
            if yb == y {
                0.0
            } else {
                alg_diff(&yb, &y).max(f64::MIN_POSITIVE)
            },
        );

        // Tangent at the identity of s ↦ z(e^{ᾱsU} e^{su}).
        let (u, big_u) = (y.base_matrix().body(), y.shift_matrix().body());
        let curve = |s: f64| dm.cross_mode(&dm.element(&real_exp(&(&u * s)), &(&big_u * s))?);
        let base = fd_curve_derivative(
            |s| Ok(curve(s)?.base().entries().clone()),
            Target::Group,
            FdOptions::default(),
        )?;
        let shift = fd_curve_derivative(
            |s| Ok(curve(s)?.shift().entries().clone()),
            Target::Algebra,
            FdOptions::default(),
        )?;
        rep.record(
            "differential_fd",
            ordered_diff(&[(&base, cy.base().entries()), (&shift, cy.shift().entries())]),
        );

        if let Some(r) = dm.module().realization() {
            let alg = algebra_with(&[("α", -1)])?;
            let alpha = GradedScalar::generator(&alg, 0);
            let emb = |f: &super::CrossGroupElement| {
                (r.embed_group)(&unipotent(&alpha, f.shift().entries())?, f.base().entries())
            };
            let (big, small) = (r.split_group)(&emb(&cp)?.try_mul(&emb(&cq)?)?)?;
            rep.record(
                "product_embedding",
                ordered_diff(&[
                    (&small, rhs.base().entries()),
                    (&big.left_factor(0), rhs.shift().entries()),
                ]),
            );
        }
        Ok(())
    })
}

/// `𝔻β` is a homomorphism of derived groups and algebras, and its algebra
/// part is the Lie differential of its group part.
pub fn morphism_suite(morph: &DerivedMorphism, samples: usize, seed: u64) -> ResidualReport {
    run_samples(samples, seed, "derived_morphism", |rng, rep| {
        let (src, tgt) = (morph.source(), morph.target());
        let (p, q) = (src.random_element(rng), src.random_element(rng));
        rep.record(
            "group_homomorphism",
            group_diff(
                &morph.apply_group(&src.dmul(&p, &q)?)?,
                &tgt.dmul(&morph.apply_group(&p)?, &morph.apply_group(&q)?)?,
            ),
        );
        let (y, w) = (
            src.random_algebra_element(rng),
            src.random_algebra_element(rng),
        );
        rep.record(
            "algebra_homomorphism",
            alg_diff(
                &morph.apply_algebra(&src.dbracket(&y, &w)?)?,
                &tgt.dbracket(&morph.apply_algebra(&y)?, &morph.apply_algebra(&w)?)?,
            ),
        );
        let (u, big_u) = (y.base_matrix().body(), y.shift_matrix().body());
        let curve = |s: f64| morph.apply_group(&src.element(&real_exp(&(&u * s)), &(&big_u * s))?);
        let base = fd_curve_derivative(
            |s| Ok(curve(s)?.base_matrix().clone()),
            Target::Group,
            FdOptions::default(),
        )?;
        let shift = fd_curve_derivative(
            |s| Ok(curve(s)?.shift_matrix().clone()),
            Target::Algebra,
            FdOptions::default(),
        )?;
        let image = morph.apply_algebra(&y)?;
        rep.record(
            "differential_fd",
            ordered_diff(&[(&base, image.base_matrix()), (&shift, image.shift_matrix())]),
        );
        Ok(())
    })
}
