use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use super::exp_matrix;
use super::gmatrix::GMatrix;
use crate::error::{Error, Result};
use crate::graded_coeff::{GeneratorSpec, GradedAlgebra, GradedScalar, Origin};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdOptions {
    pub step: f64,
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            step: 1e-5,
            richardson: false,
        }
    }
}

impl FdOptions {
    pub fn with_step(step: f64) -> Self {
        Self {
            step,
            richardson: false,
        }
    }
}

/// How a directional derivative is taken.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiffMethod {
    CentralDifference(FdOptions),
    /// Evaluate at a nilpotent perturbation built from auxiliary odd
    /// generators and read off its coefficient. Exact for maps built from
    /// graded arithmetic.
    Nilpotent,
}

impl Default for DiffMethod {
    fn default() -> Self {
        DiffMethod::CentralDifference(FdOptions::default())
    }
}

/// Whether the differentiated map lands in a group (the result is then
/// right-trivialized, `(d/dt f) f⁻¹`) or in a vector space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Group,
    Algebra,
}

fn central(curve: &dyn Fn(f64) -> Result<GMatrix>, h: f64) -> Result<GMatrix> {
    let plus = curve(h)?;
    let minus = curve(-h)?;
    Ok(plus.try_sub(&minus)?.scale(0.5 / h))
}

/// Central-difference derivative at `t = 0` of a real-parameter curve.
pub fn fd_curve_derivative(
    curve: impl Fn(f64) -> Result<GMatrix>,
    target: Target,
    opts: FdOptions,
) -> Result<GMatrix> {
    if !(opts.step > 0.0) {
        return Err(Error::Validation(format!(
            "finite-difference step must be positive, got {}",
            opts.step
        )));
    }
    let mut d = central(&curve, opts.step)?;
    if opts.richardson {
        let half = central(&curve, opts.step / 2.0)?;
        d = half.scale(4.0 / 3.0).try_sub(&d.scale(1.0 / 3.0))?;
    }
    match target {
        Target::Algebra => Ok(d),
        Target::Group => d.try_mul(&curve(0.0)?.inverse()?),
    }
}

/// Directional derivative of `f` along `t ↦ base · exp(t X)` by central
/// differences.
pub fn fd_differential(
    f: impl Fn(&GMatrix) -> Result<GMatrix>,
    base: &GMatrix,
    direction: &GMatrix,
    target: Target,
    opts: FdOptions,
) -> Result<GMatrix> {
    fd_curve_derivative(
        |t| {
            let g = base.try_mul(&exp_matrix(&direction.scale(t))?)?;
            f(&g)
        },
        target,
        opts,
    )
}

static FRESH: AtomicUsize = AtomicUsize::new(0);

/// An algebra extending `host` by one auxiliary odd generator, and its index.
/// Names are process-unique so nested derivatives never share a generator.
fn with_sigma(host: &Arc<GradedAlgebra>) -> Result<(Arc<GradedAlgebra>, usize)> {
    let name = format!("σ{}", FRESH.fetch_add(1, AtomicOrdering::Relaxed));
    let alg = host.extended(vec![GeneratorSpec::new(name, 1, Origin::Auxiliary)])?;
    let i = alg.len() - 1;
    Ok((alg, i))
}

/// Derivative of a curve given on graded parameters. With
/// [`DiffMethod::Nilpotent`] the curve is evaluated once at an auxiliary odd
/// generator appended to `host`; the curve must accept parameters from that
/// extended algebra.
pub fn curve_derivative(
    curve: impl Fn(&GradedScalar) -> Result<GMatrix>,
    host: &Arc<GradedAlgebra>,
    target: Target,
    method: DiffMethod,
) -> Result<GMatrix> {
    match method {
        DiffMethod::CentralDifference(opts) => {
            fd_curve_derivative(|t| curve(&GradedScalar::real(t)), target, opts)
        }
        DiffMethod::Nilpotent => {
            let (alg, s) = with_sigma(host)?;
            let value = curve(&GradedScalar::generator(&alg, s))?.embed_into(&alg)?;
            let d = value.left_factor(s);
            let d = match target {
                Target::Algebra => d,
                Target::Group => d.try_mul(&value.drop_generators(1 << s).inverse()?)?,
            };
            d.embed_into(host)
        }
    }
}

/// Exact derivative of a curve evaluated at the even nilpotent `ε = σσ'`.
/// Unlike the odd parameter of [`curve_derivative`], `ε` commutes with every
/// entry, so the curve may mix in odd generators of its own.
pub fn even_curve_derivative(
    curve: impl Fn(&GradedScalar) -> Result<GMatrix>,
    host: &Arc<GradedAlgebra>,
    target: Target,
) -> Result<GMatrix> {
    let (alg, s) = with_sigma(host)?;
    let (alg, s2) = with_sigma(&alg)?;
    let eps = GradedScalar::word(&alg, &[s, s2], 1.0);
    let value = curve(&eps)?.embed_into(&alg)?;
    let d = value.left_factor(s).left_factor(s2);
    let d = match target {
        Target::Algebra => d,
        Target::Group => d.try_mul(&value.drop_generators((1 << s) | (1 << s2)).inverse()?)?,
    };
    d.embed_into(host)
}

/// Exact directional derivative. An even direction `X` is followed along
/// `base · (1 + εX)` with the even nilpotent `ε = σσ'` built from two fresh odd
/// generators, so the perturbation commutes with everything and nested calls
/// compose. An odd direction `U` uses a single odd `σ`, making `σU` even.
pub fn nilpotent_differential(
    f: impl Fn(&GMatrix) -> Result<GMatrix>,
    base: &GMatrix,
    direction: &GMatrix,
    target: Target,
) -> Result<GMatrix> {
    let host = merged_algebra(base, direction)?;
    let odd = !direction.is_even();
    let (alg, s) = with_sigma(&host)?;
    let (alg, eps, mask, pair) = if odd {
        (
            alg.clone(),
            GradedScalar::generator(&alg, s),
            1u32 << s,
            None,
        )
    } else {
        let (alg2, s2) = with_sigma(&alg)?;
        let e = GradedScalar::word(&alg2, &[s, s2], 1.0);
        (alg2, e, (1u32 << s) | (1u32 << s2), Some(s2))
    };
    let b = base.embed_into(&alg)?;
    let step =
        GMatrix::identity(base.rows()).try_add(&direction.embed_into(&alg)?.left_scale(&eps))?;
    let value = f(&b.try_mul(&step)?)?.embed_into(&alg)?;
    let mut d = value.left_factor(s);
    if let Some(s2) = pair {
        d = d.left_factor(s2);
    }
    let d = match target {
        Target::Algebra => d,
        Target::Group => d.try_mul(&value.drop_generators(mask).inverse()?)?,
    };
    d.embed_into(&host)
}

fn merged_algebra(a: &GMatrix, b: &GMatrix) -> Result<Arc<GradedAlgebra>> {
    let (x, y) = (a.algebra(), b.algebra());
    if y.is_empty() || Arc::ptr_eq(&x, &y) {
        Ok(x)
    } else if x.is_empty() {
        Ok(y)
    } else {
        Err(Error::Config(
            "base and direction live over different generator sets".into(),
        ))
    }
}

/// Directional derivative with the chosen method.
pub fn differential(
    f: impl Fn(&GMatrix) -> Result<GMatrix>,
    base: &GMatrix,
    direction: &GMatrix,
    target: Target,
    method: DiffMethod,
) -> Result<GMatrix> {
    match method {
        DiffMethod::CentralDifference(opts) => fd_differential(f, base, direction, target, opts),
        DiffMethod::Nilpotent => nilpotent_differential(f, base, direction, target),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_lie::{max_diff, real_exp, GroupKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_map_returns_direction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = GroupKind::SpecialOrthogonal(3);
        let a = GMatrix::from_real(&g.random_element(&mut rng));
        let x = GMatrix::from_real(&g.random_algebra(&mut rng));
        // d/dt (a e^{tX}) (a e^{tX})⁻¹ = a X a⁻¹, so use the left-trivialized view.
        let d = fd_differential(
            |m| Ok(m.clone()),
            &a,
            &x,
            Target::Group,
            FdOptions::default(),
        )
        .unwrap();
        let expect = &(&a * &x) * &a.inverse().unwrap();
        assert!(max_diff(&d, &expect) < 1e-6);
        let one = GMatrix::identity(3);
        let d = fd_differential(
            |m| Ok(m.clone()),
            &one,
            &x,
            Target::Group,
            FdOptions::default(),
        )
        .unwrap();
        assert!(max_diff(&d, &x) < 1e-6);
        let n = nilpotent_differential(|m| Ok(m.clone()), &one, &x, Target::Group).unwrap();
        assert!(max_diff(&n, &x) < 1e-15);
    }

    #[test]
    fn conjugation_differential() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = GroupKind::SpecialOrthogonal(3);
        let a = GMatrix::from_real(&g.random_element(&mut rng));
        let ai = a.inverse().unwrap();
        let x = GMatrix::from_real(&g.random_algebra(&mut rng));
        let conj = |m: &GMatrix| Ok(&(&a * m) * &ai);
        let expect = &(&a * &x) * &ai;
        let one = GMatrix::identity(3);
        let d = fd_differential(conj, &one, &x, Target::Group, FdOptions::default()).unwrap();
        assert!(max_diff(&d, &expect) < 1e-6);
        let d = nilpotent_differential(conj, &one, &x, Target::Group).unwrap();
        assert!(max_diff(&d, &expect) < 1e-13);
    }

    #[test]
    fn product_rule_converges_quadratically() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = GroupKind::GeneralLinear(3);
        let (x, y) = (g.random_algebra(&mut rng), g.random_algebra(&mut rng));
        let curve = |t: f64| {
            Ok(GMatrix::from_real(
                &(real_exp(&(&x * t)) * real_exp(&(&y * t)) * 2.0),
            ))
        };
        let exact = GMatrix::from_real(&((&x + &y) * 2.0));
        let err = |h: f64| {
            let d = fd_curve_derivative(curve, Target::Algebra, FdOptions::with_step(h)).unwrap();
            max_diff(&d, &exact)
        };
        let (e4, e3) = (err(1e-4), err(1e-3));
        assert!(e4 < e3 / 50.0, "{e3} {e4}");
        assert!(err(1e-5) < 1e-7);
        let rich = fd_curve_derivative(
            curve,
            Target::Algebra,
            FdOptions {
                step: 1e-3,
                richardson: true,
            },
        )
        .unwrap();
        assert!(max_diff(&rich, &exact) < e3 / 100.0);
    }

    #[test]
    fn graded_curve_in_both_modes_agree() {
        let g = GroupKind::SpecialOrthogonal(3);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let x = g.random_algebra(&mut rng);
        let host = GradedAlgebra::real();
        let curve = |t: &GradedScalar| exp_matrix(&GMatrix::scaled_real(t, &x));
        let a = curve_derivative(curve, &host, Target::Group, DiffMethod::Nilpotent).unwrap();
        let b = curve_derivative(curve, &host, Target::Group, DiffMethod::default()).unwrap();
        assert!(max_diff(&a, &GMatrix::from_real(&x)) < 1e-14);
        assert!(max_diff(&b, &GMatrix::from_real(&x)) < 1e-6);
    }

    #[test]
    fn step_must_be_positive() {
        let r = fd_curve_derivative(
            |_| Ok(GMatrix::identity(1)),
            Target::Algebra,
            FdOptions::with_step(0.0),
        );
        assert!(matches!(r, Err(Error::Validation(_))));
    }
}
