use rand_chacha::ChaCha8Rng;

use super::{
    AlgebraCrossedModule, CrossedModuleMorphism, DifferentiatedMaps, GroupCrossedModule, MapSource,
};
use crate::error::Result;
use crate::graded_coeff::{GradedAlgebra, GradedScalar};
use crate::matrix_lie::{
    curve_derivative, exp_matrix, fd_curve_derivative, max_diff, DiffMethod, FdOptions, GMatrix,
    GroupKind, Target,
};
use crate::residual::ResidualReport;
use crate::sampling::run_samples;

fn elem(g: &GroupKind, rng: &mut ChaCha8Rng) -> GMatrix {
    GMatrix::from_real(&g.random_element(rng))
}

fn alg(g: &GroupKind, rng: &mut ChaCha8Rng) -> GMatrix {
    GMatrix::from_real(&g.random_algebra(rng))
}

fn conj(a: &GMatrix, x: &GMatrix) -> Result<GMatrix> {
    a.try_mul(x)?.try_mul(&a.inverse()?)
}

fn bracket(x: &GMatrix, y: &GMatrix) -> Result<GMatrix> {
    x.try_mul(y)?.try_sub(&y.try_mul(x)?)
}

/// Residuals of `τ(AB) = τ(A)τ(B)`, `τ(μ(a,A)) = aτ(A)a⁻¹` and
/// `μ(τ(A),B) = ABA⁻¹`.
pub fn check_group_axioms(m: &GroupCrossedModule, samples: usize, seed: u64) -> ResidualReport {
    run_samples(samples, seed, "group_axioms", |rng, r| {
        let (big_a, big_b, a) = (elem(m.e(), rng), elem(m.e(), rng), elem(m.g(), rng));
        let tab = m.tau(&big_a.try_mul(&big_b)?)?;
        r.record(
            "tau_morphism",
            max_diff(&tab, &m.tau(&big_a)?.try_mul(&m.tau(&big_b)?)?),
        );
        let lhs = m.tau(&m.mu(&a, &big_a)?)?;
        r.record("equivariance", max_diff(&lhs, &conj(&a, &m.tau(&big_a)?)?));
        let lhs = m.mu(&m.tau(&big_a)?, &big_b)?;
        r.record("peiffer", max_diff(&lhs, &conj(&big_a, &big_b)?));
        Ok(())
    })
}

/// Residuals of `t([U,V]) = [t(U),t(V)]`, `t(m(u,U)) = [u,t(U)]` and
/// `m(t(U),V) = [U,V]`.
pub fn check_algebra_axioms(m: &AlgebraCrossedModule, samples: usize, seed: u64) -> ResidualReport {
    run_samples(samples, seed, "algebra_axioms", |rng, r| {
        let (u, big_u, big_v) = (alg(m.g(), rng), alg(m.e(), rng), alg(m.e(), rng));
        let lhs = m.t(&bracket(&big_u, &big_v)?)?;
        r.record(
            "t_morphism",
            max_diff(&lhs, &bracket(&m.t(&big_u)?, &m.t(&big_v)?)?),
        );
        let lhs = m.t(&m.m(&u, &big_u)?)?;
        r.record("equivariance", max_diff(&lhs, &bracket(&u, &m.t(&big_u)?)?));
        let lhs = m.m(&m.t(&big_u)?, &big_v)?;
        r.record("peiffer", max_diff(&lhs, &bracket(&big_u, &big_v)?));
        Ok(())
    })
}

fn maps_of(m: &GroupCrossedModule, method: DiffMethod) -> DifferentiatedMaps {
    m.differentiated(MapSource::Exact)
        .unwrap_or_else(|_| DifferentiatedMaps::from_module(m, method))
}

/// Residuals of the morphism relations on both the group and the
/// differentiated algebra level.
pub fn check_morphism(
    beta: &CrossedModuleMorphism,
    samples: usize,
    seed: u64,
    method: DiffMethod,
) -> ResidualReport {
    let (src, dst) = (beta.source(), beta.target());
    let h = beta.differentiate(method);
    let (ms, md) = (maps_of(src, method), maps_of(dst, method));
    run_samples(samples, seed, "morphism", |rng, r| {
        let (big_a, a) = (elem(src.e(), rng), elem(src.g(), rng));
        let lhs = dst.tau(&beta.big(&big_a)?)?;
        r.record(
            "tau_compat",
            max_diff(&lhs, &beta.small(&src.tau(&big_a)?)?),
        );
        let lhs = beta.big(&src.mu(&a, &big_a)?)?;
        r.record(
            "mu_compat",
            max_diff(&lhs, &dst.mu(&beta.small(&a)?, &beta.big(&big_a)?)?),
        );
        let (x, big_x) = (alg(src.g(), rng), alg(src.e(), rng));
        let lhs = md.tau_dot(&h.big(&big_x)?)?;
        r.record("t_compat", max_diff(&lhs, &h.small(&ms.tau_dot(&big_x)?)?));
        let lhs = h.big(&ms.dot_mu_dot(&x, &big_x)?)?;
        r.record(
            "m_compat",
            max_diff(&lhs, &md.dot_mu_dot(&h.small(&x)?, &h.big(&big_x)?)?),
        );
        Ok(())
    })
}

/// The six algebraic identities between `τ̇, μ̇, ˙μ, ˙μ˙`, evaluated with the
/// given maps.
pub fn identity_suite(
    m: &GroupCrossedModule,
    maps: &DifferentiatedMaps,
    samples: usize,
    seed: u64,
) -> ResidualReport {
    run_samples(samples, seed, "identities", |rng, r| {
        let (big_a, big_b, a) = (elem(m.e(), rng), elem(m.e(), rng), elem(m.g(), rng));
        let (x, y, big_x) = (alg(m.g(), rng), alg(m.g(), rng), alg(m.e(), rng));
        let dm_xa = maps.dot_mu(&x, &big_a)?;
        let dm_ya = maps.dot_mu(&y, &big_a)?;

        let lhs = maps.tau_dot(&dm_xa)?;
        let rhs = x.try_sub(&conj(&m.tau(&big_a)?, &x)?)?;
        r.record("tau_dot_of_dot_mu", max_diff(&lhs, &rhs));

        let lhs = maps.dot_mu(&maps.tau_dot(&big_x)?, &big_a)?;
        let rhs = big_x.try_sub(&conj(&big_a, &big_x)?)?;
        r.record("dot_mu_of_tau_dot", max_diff(&lhs, &rhs));

        let lhs = maps.dot_mu(&bracket(&x, &y)?, &big_a)?;
        let rhs = maps
            .dot_mu_dot(&x, &dm_ya)?
            .try_sub(&maps.dot_mu_dot(&y, &dm_xa)?)?
            .try_sub(&bracket(&dm_xa, &dm_ya)?)?;
        r.record("dot_mu_bracket", max_diff(&lhs, &rhs));

        let lhs = maps.dot_mu(&x, &big_a.try_mul(&big_b)?)?;
        let rhs = dm_xa.try_add(&conj(&big_a, &maps.dot_mu(&x, &big_b)?)?)?;
        r.record("dot_mu_product", max_diff(&lhs, &rhs));

        let lhs = maps.dot_mu(&conj(&a, &x)?, &m.mu(&a, &big_a)?)?;
        let rhs = maps.mu_dot(&a, &dm_xa)?;
        r.record("dot_mu_equivariance", max_diff(&lhs, &rhs));

        let ad_x = conj(&big_a, &big_x)?;
        let lhs = conj(&big_a, &maps.dot_mu_dot(&x, &big_x)?)?;
        let rhs = maps
            .dot_mu_dot(&x, &ad_x)?
            .try_sub(&bracket(&dm_xa, &ad_x)?)?;
        r.record("dot_mu_dot_conjugation", max_diff(&lhs, &rhs));
        Ok(())
    })
}

/// Step and direction scale for the variational identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VariationalOptions {
    pub fd: FdOptions,
    /// Multiplies the group-curve directions; large values make truncation
    /// error dominate roundoff.
    pub direction_scale: f64,
    /// Also check each identity along an odd direction with exact
    /// nilpotent evaluation.
    pub odd_directions: bool,
}

impl Default for VariationalOptions {
    fn default() -> Self {
        Self {
            fd: FdOptions::default(),
            direction_scale: 1.0,
            odd_directions: true,
        }
    }
}

/// The three variational identities. Curves are `a·exp(sξ)`, `exp(sΞ)·A`,
/// `x + s x'`, `X + s X'`, so `a⁻¹δa = ξ` and `δA A⁻¹ = Ξ`.
pub fn variational_suite(
    m: &GroupCrossedModule,
    maps: &DifferentiatedMaps,
    samples: usize,
    seed: u64,
    opts: VariationalOptions,
) -> ResidualReport {
    run_samples(samples, seed, "variational", |rng, r| {
        let (big_a, a) = (elem(m.e(), rng), elem(m.g(), rng));
        let (x, big_x) = (alg(m.g(), rng), alg(m.e(), rng));
        let xi = alg(m.g(), rng).scale(opts.direction_scale);
        let big_xi = alg(m.e(), rng).scale(opts.direction_scale);
        let (dx, d_big_x) = (alg(m.g(), rng), alg(m.e(), rng));

        let a_at = |t: &GradedScalar| a.try_mul(&exp_matrix(&xi.left_scale(t))?);
        let big_a_at = |t: &GradedScalar| exp_matrix(&big_xi.left_scale(t))?.try_mul(&big_a);
        let x_at = |t: &GradedScalar| x.try_add(&dx.left_scale(t));
        let big_x_at = |t: &GradedScalar| big_x.try_add(&d_big_x.left_scale(t));

        let c11 = |t: &GradedScalar| m.mu(&a_at(t)?, &big_a_at(t)?);
        let c12 = |t: &GradedScalar| maps.mu_dot(&a_at(t)?, &big_x_at(t)?);
        let c13 = |t: &GradedScalar| maps.dot_mu(&x_at(t)?, &big_a_at(t)?);

        let rhs11 = maps.mu_dot(&a, &maps.dot_mu(&xi, &big_a)?.try_add(&big_xi)?)?;
        let rhs12 = maps.mu_dot(&a, &maps.dot_mu_dot(&xi, &big_x)?.try_add(&d_big_x)?)?;
        let dm = maps.dot_mu(&x, &big_a)?;
        let rhs13 = maps
            .dot_mu(&dx, &big_a)?
            .try_add(&maps.dot_mu_dot(&x, &big_xi)?)?
            .try_sub(&bracket(&dm, &big_xi)?)?;

        let host = GradedAlgebra::real();
        let real = |f: &dyn Fn(&GradedScalar) -> Result<GMatrix>, target| {
            fd_curve_derivative(|s| f(&GradedScalar::real(s)), target, opts.fd)
        };
        r.record(
            "mu_variation",
            max_diff(&real(&c11, Target::Group)?, &rhs11),
        );
        r.record(
            "mu_dot_variation",
            max_diff(&real(&c12, Target::Algebra)?, &rhs12),
        );
        r.record(
            "dot_mu_variation",
            max_diff(&real(&c13, Target::Algebra)?, &rhs13),
        );
        if opts.odd_directions {
            let exact = |f: &dyn Fn(&GradedScalar) -> Result<GMatrix>, target| {
                curve_derivative(f, &host, target, DiffMethod::Nilpotent)
            };
            r.record(
                "mu_variation_odd",
                max_diff(&exact(&c11, Target::Group)?, &rhs11),
            );
            r.record(
                "mu_dot_variation_odd",
                max_diff(&exact(&c12, Target::Algebra)?, &rhs12),
            );
            r.record(
                "dot_mu_variation_odd",
                max_diff(&exact(&c13, Target::Algebra)?, &rhs13),
            );
        }
        Ok(())
    })
}

/// Ratio of the largest variational residual at steps `1e-6` and `1e-5` with
/// curve directions scaled by `direction_scale`, so that truncation error
/// dominates. Central differences make the ratio about `0.01`.
pub fn variational_convergence(
    m: &GroupCrossedModule,
    maps: &DifferentiatedMaps,
    samples: usize,
    seed: u64,
    direction_scale: f64,
) -> f64 {
    let at = |step: f64| {
        let opts = VariationalOptions {
            fd: FdOptions::with_step(step),
            direction_scale,
            odd_directions: false,
        };
        variational_suite(m, maps, samples, seed, opts).max()
    };
    at(1e-6) / at(1e-5)
}

/// Largest difference between two sets of differentiated maps on random
/// inputs, entry per map.
pub fn differentiation_consistency(
    m: &GroupCrossedModule,
    lhs: &DifferentiatedMaps,
    rhs: &DifferentiatedMaps,
    samples: usize,
    seed: u64,
) -> ResidualReport {
    run_samples(samples, seed, "differentiation", |rng, r| {
        let (big_a, a) = (elem(m.e(), rng), elem(m.g(), rng));
        let (x, big_x) = (alg(m.g(), rng), alg(m.e(), rng));
        r.record(
            "tau_dot",
            max_diff(&lhs.tau_dot(&big_x)?, &rhs.tau_dot(&big_x)?),
        );
        r.record(
            "mu_dot",
            max_diff(&lhs.mu_dot(&a, &big_x)?, &rhs.mu_dot(&a, &big_x)?),
        );
        r.record(
            "dot_mu",
            max_diff(&lhs.dot_mu(&x, &big_a)?, &rhs.dot_mu(&x, &big_a)?),
        );
        r.record(
            "dot_mu_dot",
            max_diff(&lhs.dot_mu_dot(&x, &big_x)?, &rhs.dot_mu_dot(&x, &big_x)?),
        );
        Ok(())
    })
}
