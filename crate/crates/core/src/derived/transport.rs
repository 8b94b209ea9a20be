use std::sync::Arc;

use super::graded::{coordinate_algebra, GradedDerivedElement};
use super::{DerivedModule, Side};
use crate::error::{Error, Result};
use crate::graded_coeff::{GradedAlgebra, GradedScalar};
use crate::matrix_lie::{fd_curve_derivative, FdOptions, GMatrix, Target};

/// A matrix-valued function of the even coordinates whose entries are
/// polynomials in the odd ones.
pub type FieldFn = Arc<dyn Fn(&[f64]) -> Result<GMatrix> + Send + Sync>;

/// The model manifold `ℝ^m × ℝ[1]^k`. Even coordinates are passed as reals;
/// odd coordinates are the degree-1 generators `y1..yk`.
#[derive(Clone, Debug)]
pub struct ModelSpace {
    even_dim: usize,
    coords: Arc<GradedAlgebra>,
}

impl ModelSpace {
    pub fn new(even_dim: usize, odd_dim: usize) -> Result<Self> {
        Ok(Self {
            even_dim,
            coords: coordinate_algebra(odd_dim, 0)?,
        })
    }

    pub fn even_dim(&self) -> usize {
        self.even_dim
    }

    pub fn odd_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &Arc<GradedAlgebra> {
        &self.coords
    }

    /// The odd coordinate `y_{i+1}`.
    pub fn odd(&self, i: usize) -> GradedScalar {
        GradedScalar::generator(&self.coords, i)
    }
}

fn odd_name(i: usize) -> String {
    format!("y{}", i + 1)
}

/// Supported derivations of the model manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// `∂/∂y_i`, degree `−1`.
    OddPartial(usize),
    /// `y_i ∂/∂x_j`, degree `+1`.
    OddTimesEvenPartial { odd: usize, even: usize },
}

impl Derivation {
    pub fn degree(&self) -> i32 {
        match self {
            Derivation::OddPartial(_) => -1,
            Derivation::OddTimesEvenPartial { .. } => 1,
        }
    }

    pub fn check(&self, space: &ModelSpace) -> Result<()> {
        let ok = match *self {
            Derivation::OddPartial(i) => i < space.odd_dim(),
            Derivation::OddTimesEvenPartial { odd, even } => {
                odd < space.odd_dim() && even < space.even_dim()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{self:?} on ℝ^{} × ℝ[1]^{}",
                space.even_dim(),
                space.odd_dim()
            )))
        }
    }

    /// Entrywise action on a field. Entries may carry generators besides the
    /// coordinates; odd partials act from the left, so a generator standing
    /// before `y_i` contributes its sign. Even partials use central
    /// differences.
    pub fn apply(
        &self,
        space: &ModelSpace,
        f: &dyn Fn(&[f64]) -> Result<GMatrix>,
        x: &[f64],
        fd: FdOptions,
    ) -> Result<GMatrix> {
        self.check(space)?;
        match *self {
            Derivation::OddPartial(i) => {
                let v = f(x)?;
                match v.algebra().index_of(&odd_name(i)) {
                    Some(g) => Ok(v.left_derivative(g)),
                    None => Ok(GMatrix::zeros(v.rows(), v.cols())),
                }
            }
            Derivation::OddTimesEvenPartial { odd, even } => {
                let d = fd_curve_derivative(
                    |s| {
                        let mut moved = x.to_vec();
                        moved[even] += s;
                        f(&moved)
                    },
                    Target::Algebra,
                    fd,
                )?;
                let alg = d.algebra();
                let alg = if alg.index_of(&odd_name(odd)).is_some() {
                    alg
                } else {
                    space.coords().clone()
                };
                let g = alg.index_of(&odd_name(odd)).ok_or_else(|| {
                    Error::Config(format!("{} is not a coordinate", odd_name(odd)))
                })?;
                Ok(d.embed_into(&alg)?
                    .left_scale(&GradedScalar::generator(&alg, g)))
            }
        }
    }
}

/// A map `C = e^{αO} r` from the model manifold to the derived group:
/// `r` is `G`-valued of degree 0 and `O` is `𝔢`-valued of degree 1.
#[derive(Clone)]
pub struct DerivedField {
    space: ModelSpace,
    base: FieldFn,
    shift: FieldFn,
}

impl DerivedField {
    pub fn new(space: ModelSpace, base: FieldFn, shift: FieldFn) -> Self {
        Self { space, base, shift }
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn base_fn(&self) -> &FieldFn {
        &self.base
    }

    pub fn shift_fn(&self) -> &FieldFn {
        &self.shift
    }

    pub fn base_at(&self, x: &[f64]) -> Result<GMatrix> {
        let r = (self.base)(x)?;
        if !r.is_homogeneous_of(0) {
            return Err(Error::Precondition(
                "group component of a field must have degree 0".into(),
            ));
        }
        Ok(r)
    }

    pub fn shift_at(&self, x: &[f64]) -> Result<GMatrix> {
        let o = (self.shift)(x)?;
        if !o.is_homogeneous_of(1) {
            return Err(Error::Precondition(
                "𝔢[1] component of a field must have degree 1".into(),
            ));
        }
        Ok(o)
    }
}

impl DerivedModule {
    /// `μ̇(a, X)` for graded `a` and `X`: expands `X` in the basis of `𝔢` and
    /// evaluates `μ̇` on basis elements only.
    pub(crate) fn mu_dot_any(&self, a: &GMatrix, x: &GMatrix) -> Result<GMatrix> {
        if a.is_real() {
            return self.maps().mu_dot_graded(a, x);
        }
        let basis = self.maps().e_basis();
        let n = self.e().size();
        let mut acc = GMatrix::zeros(n, n);
        for (c, e) in basis.coords(x).iter().zip(basis.elements()) {
            if c.is_zero() {
                continue;
            }
            let v = self.maps().mu_dot(a, &GMatrix::from_real(e))?;
            acc = acc.try_add(&v.map(|s| c * s))?;
        }
        Ok(acc)
    }

    /// `D C C⁻¹` (left) or `C⁻¹ D C` (right) in degree `p = deg D`, stored
    /// without the `(−1)^p` of the `α`-expansion: left `J = DO − ˙μ˙(Drr⁻¹, O)`,
    /// right `J = μ̇(r⁻¹, DO)`.
    pub fn derivation_transport(
        &self,
        field: &DerivedField,
        x: &[f64],
        d: Derivation,
        side: Side,
        fd: FdOptions,
    ) -> Result<GradedDerivedElement> {
        let space = field.space();
        let r = field.base_at(x)?;
        let o = field.shift_at(x)?;
        let dr = d.apply(space, &|y| field.base_at(y), x, fd)?;
        let d_o = d.apply(space, &|y| field.shift_at(y), x, fd)?;
        let ri = r.inverse()?;
        match side {
            Side::Left => {
                let j = dr.try_mul(&ri)?;
                let big_j = d_o.try_sub(&self.maps().dot_mu_dot_graded(&j, &o)?)?;
                GradedDerivedElement::new(d.degree(), j, big_j)
            }
            Side::Right => {
                let j = ri.try_mul(&dr)?;
                let big_j = self.mu_dot_any(&ri, &d_o)?;
                GradedDerivedElement::new(d.degree(), j, big_j)
            }
        }
    }

    /// `d_τ̇ C C⁻¹` (left) or `C⁻¹ d_τ̇ C` (right), degree 1. The `α`-parts
    /// are `½[O, O]` and `−½ μ̇(r⁻¹, [O, O])`.
    pub fn dtau_transport(
        &self,
        field: &DerivedField,
        x: &[f64],
        side: Side,
    ) -> Result<GradedDerivedElement> {
        let r = field.base_at(x)?;
        let o = field.shift_at(x)?;
        let oo = o.graded_commutator(&o)?;
        let t_o = self.maps().tau_dot_graded(&o)?;
        match side {
            Side::Left => GradedDerivedElement::new(1, t_o, oo.scale(-0.5)),
            Side::Right => {
                let ri = r.inverse()?;
                let j = ri.try_mul(&t_o)?.try_mul(&r)?;
                GradedDerivedElement::new(1, j, self.mu_dot_any(&ri, &oo)?.scale(0.5))
            }
        }
    }
}
