use std::sync::Arc;

use super::form::{Chart, Coefficient, FormField, FormSpace};
use super::{BundleModel, SyntheticPoint};
use crate::derived::{DerivedAlgebraElement, GradedDerivedElement};
use crate::error::{Error, Result};
use crate::graded_coeff::GradedScalar;
use crate::matrix_lie::{fd_curve_derivative, real_exp, FdOptions, GMatrix, Target};

/// Deliberate defects for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperationFault {
    /// Negate every contraction.
    FlipContraction,
}

/// `d` (degree 1), `j_Z` (degree −1) or `l_Z` (degree 0). `Z` is an internal
/// element `u + c U` of degree 0 whose `𝔢[1]` part carries an odd coefficient
/// `c` of degree 1.
#[derive(Clone, Debug)]
pub enum DerivationHandle {
    DeRham,
    Contraction(GradedDerivedElement),
    Lie(GradedDerivedElement),
}

impl DerivationHandle {
    pub fn degree(&self) -> i32 {
        match self {
            DerivationHandle::DeRham => 1,
            DerivationHandle::Contraction(_) => -1,
            DerivationHandle::Lie(_) => 0,
        }
    }
}

struct Inner {
    model: BundleModel,
    space: Arc<FormSpace>,
    object_only: bool,
    fault: Option<OperationFault>,
}

/// The operation of `𝔻𝔪` on the function algebra of `T[1]P`, or of `𝔤` on
/// that of the object space `T[1]P₀`.
#[derive(Clone)]
pub struct Operation {
    inner: Arc<Inner>,
}

impl Operation {
    pub fn new(model: &BundleModel) -> Result<Self> {
        Self::build(model, false)
    }

    /// The operation on the `L = 0` slice: no fibre coordinates, and only
    /// elements `(u, 0)` act.
    pub fn object(model: &BundleModel) -> Result<Self> {
        Self::build(model, true)
    }

    fn build(model: &BundleModel, object_only: bool) -> Result<Self> {
        let dm = model.module();
        let space = FormSpace::new(
            model.base_dim(),
            dm.maps().e_basis().dim(),
            dm.maps().g_basis(),
        )?;
        Ok(Self {
            inner: Arc::new(Inner {
                model: model.clone(),
                space,
                object_only,
                fault: None,
            }),
        })
    }

    pub fn with_fault(&self, fault: OperationFault) -> Self {
        let i = &self.inner;
        Self {
            inner: Arc::new(Inner {
                model: i.model.clone(),
                space: i.space.clone(),
                object_only: i.object_only,
                fault: Some(fault),
            }),
        }
    }

    pub fn model(&self) -> &BundleModel {
        &self.inner.model
    }

    pub fn space(&self) -> &Arc<FormSpace> {
        &self.inner.space
    }

    pub fn is_object(&self) -> bool {
        self.inner.object_only
    }

    pub fn chart(&self, p: &SyntheticPoint) -> Result<Chart> {
        let l = if self.inner.object_only {
            vec![0.0; self.inner.space.e_dim()]
        } else {
            self.inner.model.fibre_coords(p)
        };
        let chart = self.inner.space.chart(p.x(), &p.group(), &l)?;
        Ok(if self.inner.object_only {
            chart.restricted()
        } else {
            chart
        })
    }

    /// `u + c U` over the form algebra.
    pub fn internal(
        &self,
        z: &DerivedAlgebraElement,
        c: Coefficient,
    ) -> Result<GradedDerivedElement> {
        let alg = self.inner.space.algebra();
        let coeff = self.inner.space.coefficient(c);
        GradedDerivedElement::new(
            0,
            z.base_matrix().embed_into(alg)?,
            z.shift_matrix().embed_into(alg)?.left_scale(&coeff),
        )
    }

    /// `[Z, W]` of internal elements.
    pub fn bracket(
        &self,
        z: &GradedDerivedElement,
        w: &GradedDerivedElement,
    ) -> Result<GradedDerivedElement> {
        self.inner.model.module().graded_bracket(z, w)
    }

    /// `d = Σ dxₖ ∂ₖ + Σ ϑᵇ ξ_b + Σ dℓᵢ ∂/∂ℓᵢ + Σ dϑᵇ ∂/∂ϑᵇ`, `ξ_b` the
    /// left-invariant field of `e_b`.
    pub fn de_rham(&self, f: &FormField) -> FormField {
        let op = self.inner.clone();
        let f = f.clone();
        FormField::new(format!("d({})", f.label()), move |ch| {
            let space = &op.space;
            let value = f.eval(ch)?;
            let mut acc = GradedScalar::zero(space.algebra());
            for k in 0..space.base_dim() {
                acc = acc.try_add(&space.dx(k).try_mul(&ch.d_base(&f, k)?)?)?;
            }
            for (b, e_b) in op
                .model
                .module()
                .maps()
                .g_basis()
                .elements()
                .iter()
                .enumerate()
            {
                acc = acc.try_add(&space.theta(b).try_mul(&ch.d_group(&f, e_b)?)?)?;
                let dt = space.theta_differential(b);
                if !dt.is_zero() {
                    acc =
                        acc.try_add(&dt.try_mul(&value.left_derivative(space.theta_index(b)))?)?;
                }
            }
            if !op.object_only {
                for i in 0..space.e_dim() {
                    acc = acc.try_add(
                        &ch.dell(i)
                            .try_mul(&value.left_derivative(space.ell_index(i)))?,
                    )?;
                }
            }
            Ok(acc)
        })
    }

    /// `j_Z = Σ uᵇ ∂/∂ϑᵇ + Σ (c μ̇(a, U))ⁱ ∂/∂dℓᵢ`.
    pub fn contraction(&self, z: &GradedDerivedElement, f: &FormField) -> Result<FormField> {
        if z.degree() != 0 {
            return Err(Error::Precondition(format!(
                "contraction by an element of degree {}",
                z.degree()
            )));
        }
        if self.inner.object_only && z.shift().max_abs() != 0.0 {
            return Err(Error::Precondition(
                "the object space is acted on by 𝔤 only".into(),
            ));
        }
        let op = self.inner.clone();
        let f = f.clone();
        let z = z.clone();
        let sign = if op.fault == Some(OperationFault::FlipContraction) {
            -1.0
        } else {
            1.0
        };
        Ok(FormField::new(format!("j({})", f.label()), move |ch| {
            let space = &op.space;
            let maps = op.model.module().maps();
            let value = f.eval(ch)?;
            let mut acc = GradedScalar::zero(space.algebra());
            for (b, u) in maps.g_basis().coords(z.base()).iter().enumerate() {
                if !u.is_zero() {
                    acc = acc.try_add(&u.try_mul(&value.left_derivative(space.theta_index(b)))?)?;
                }
            }
            if !op.object_only && z.shift().max_abs() != 0.0 {
                let moved = op.model.module().mu_dot_any(ch.a(), z.shift())?;
                for (i, w) in maps.e_basis().coords(&moved).iter().enumerate() {
                    acc = acc.try_add(&w.try_mul(&value.left_derivative(space.dell_index(i)))?)?;
                }
            }
            Ok(acc.scale(sign))
        }))
    }

    /// `l_Z = [d, j_Z] = d j_Z + j_Z d`.
    pub fn lie(&self, z: &GradedDerivedElement, f: &FormField) -> Result<FormField> {
        let a = self.de_rham(&self.contraction(z, f)?);
        let b = self.contraction(z, &self.de_rham(f))?;
        Ok(FormField::new(format!("l({})", f.label()), move |ch| {
            a.eval(ch)?.try_add(&b.eval(ch)?)
        }))
    }

    pub fn apply(&self, h: &DerivationHandle, f: &FormField) -> Result<FormField> {
        match h {
            DerivationHandle::DeRham => Ok(self.de_rham(f)),
            DerivationHandle::Contraction(z) => self.contraction(z, f),
            DerivationHandle::Lie(z) => self.lie(z, f),
        }
    }

    /// `[D₁, D₂] f = D₁D₂f − (−1)^{|D₁||D₂|} D₂D₁f`.
    pub fn commutator(
        &self,
        h1: &DerivationHandle,
        h2: &DerivationHandle,
        f: &FormField,
    ) -> Result<FormField> {
        let a = self.apply(h1, &self.apply(h2, f)?)?;
        let b = self.apply(h2, &self.apply(h1, f)?)?;
        let sign = if (h1.degree() * h2.degree()).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        Ok(FormField::new(format!("[D,D]({})", f.label()), move |ch| {
            a.eval(ch)?.try_sub(&b.eval(ch)?.scale(sign))
        }))
    }

    /// `d/dt f(V · e^{tZ})` at `t = 0` for `Z = (u, U)`: the `u`-part by
    /// central differences along `a e^{tu}`, the `U`-part exactly by shifting
    /// the fibre coordinates by `ᾱ μ̇(a, U)`.
    pub fn vertical_field(
        &self,
        z: &DerivedAlgebraElement,
        f: &FormField,
        at: &SyntheticPoint,
        fd: FdOptions,
    ) -> Result<GradedScalar> {
        let chart = self.chart(at)?;
        let a = at.group();
        let u = z.base_matrix().body();
        let along = |t: f64| -> Result<GMatrix> {
            let v = f.eval(&chart.with_group(&(&a * real_exp(&(&u * t))))?)?;
            Ok(GMatrix::from_fn(1, 1, |_, _| v.clone()))
        };
        let even = fd_curve_derivative(along, Target::Algebra, fd)?
            .get(0, 0)
            .clone();
        if z.shift_matrix().max_abs() == 0.0 {
            return Ok(even);
        }
        if self.inner.object_only {
            return Err(Error::Precondition(
                "the object space is acted on by 𝔤 only".into(),
            ));
        }
        let space = &self.inner.space;
        let alpha = space.coefficient(Coefficient::Alpha);
        let maps = self.inner.model.module().maps();
        let moved = maps.mu_dot(&GMatrix::from_real(&a), z.shift_matrix())?;
        let shift: Vec<GradedScalar> = maps
            .e_basis()
            .coords(&moved)
            .iter()
            .map(|w| alpha.try_mul(w))
            .collect::<Result<_>>()?;
        let odd = f
            .eval(&chart.with_ell_shift(&shift)?)?
            .try_sub(&f.eval(&chart)?)?;
        even.try_add(&odd)
    }
}
