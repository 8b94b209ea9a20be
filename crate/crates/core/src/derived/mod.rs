//! The derived group `𝔢[1] ⋊ G` and algebra `𝔢[1] ⋊ 𝔤` of a crossed module,
//! the full degree extension with its coboundary, Maurer-Cartan forms,
//! derivation transports and the cross modality.
//!
//! Derived elements hold plain real matrices; the formal variable `ᾱ` (degree
//! `+1`) only appears in the embedding oracles. Shifted `𝔢`-components carry
//! the degree tag [`SHIFT_DEGREE`].
//!
//! Maurer-Cartan forms are read with `d = θ ∂ₜ`, `θ` odd and kept to the left.
//! Moving `θ` past `ᾱ` costs a sign, so the shifted component of both forms
//! comes out negated relative to the plain tangent `Ṁ M⁻¹`.

mod cross;
mod graded;
mod morphism;
mod oracle;
mod transport;

use std::sync::Arc;

use rand::Rng;

pub use cross::{CrossAlgebraElement, CrossGroupElement, CROSS_SHIFT_DEGREE};
pub use graded::{coordinate_algebra, random_homogeneous, GradedDerivedElement};
pub use morphism::DerivedMorphism;
pub use oracle::{
    axiom_suite, cross_suite, morphism_suite, oracle_suite, oracle_tolerance, random_field,
};
pub use transport::{Derivation, DerivedField, FieldFn, ModelSpace};

use crate::crossed_module::{DifferentiatedMaps, GroupCrossedModule, MapSource};
use crate::error::{Error, Result};
use crate::matrix_lie::{
    adjoint_matrix, fd_curve_derivative, FdOptions, GMatrix, GroupKind, MatrixAlgebraElement,
    MatrixGroupElement, RMatrix, Target,
};

/// Degree tag of the `𝔢[1]` component.
pub const SHIFT_DEGREE: i32 = -1;

/// `P = e^{ᾱL} a`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedGroupElement {
    base: MatrixGroupElement,
    shift: MatrixAlgebraElement,
}

/// `Y = u + ᾱU`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedAlgebraElement {
    base: MatrixAlgebraElement,
    shift: MatrixAlgebraElement,
}

fn check_shift(shift: &MatrixAlgebraElement) -> Result<()> {
    if shift.degree() != SHIFT_DEGREE {
        return Err(Error::Domain(format!(
            "shifted component has degree {}, expected {SHIFT_DEGREE}",
            shift.degree()
        )));
    }
    if !shift.entries().is_real() {
        return Err(Error::Domain("derived components must be real".into()));
    }
    Ok(())
}

impl DerivedGroupElement {
    pub fn new(base: MatrixGroupElement, shift: MatrixAlgebraElement) -> Result<Self> {
        check_shift(&shift)?;
        if !base.entries().is_real() {
            return Err(Error::Domain("derived components must be real".into()));
        }
        Ok(Self { base, shift })
    }

    pub fn base(&self) -> &MatrixGroupElement {
        &self.base
    }

    pub fn shift(&self) -> &MatrixAlgebraElement {
        &self.shift
    }

    pub fn base_matrix(&self) -> &GMatrix {
        self.base.entries()
    }

    pub fn shift_matrix(&self) -> &GMatrix {
        self.shift.entries()
    }
}

impl DerivedAlgebraElement {
    pub fn new(base: MatrixAlgebraElement, shift: MatrixAlgebraElement) -> Result<Self> {
        check_shift(&shift)?;
        if base.degree() != 0 || !base.entries().is_real() {
            return Err(Error::Domain(
                "the 𝔤-component must be a real degree-0 element".into(),
            ));
        }
        Ok(Self { base, shift })
    }

    pub fn base(&self) -> &MatrixAlgebraElement {
        &self.base
    }

    pub fn shift(&self) -> &MatrixAlgebraElement {
        &self.shift
    }

    pub fn base_matrix(&self) -> &GMatrix {
        self.base.entries()
    }

    pub fn shift_matrix(&self) -> &GMatrix {
        self.shift.entries()
    }
}

/// A curve `t ↦ e^{ᾱE(t)} g(t)` with nominal sample times.
#[derive(Clone)]
pub struct DerivedCurve {
    times: Vec<f64>,
    values: Arc<dyn Fn(f64) -> Result<DerivedGroupElement> + Send + Sync>,
}

impl DerivedCurve {
    pub fn new(
        times: Vec<f64>,
        values: impl Fn(f64) -> Result<DerivedGroupElement> + Send + Sync + 'static,
    ) -> Self {
        Self {
            times,
            values: Arc::new(values),
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn at(&self, t: f64) -> Result<DerivedGroupElement> {
        (self.values)(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjointDirection {
    Forward,
    Inverse,
}

/// Deliberate defects for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Omit the `˙μ˙` correction in the derived adjoint action.
    DropAdjointCorrection,
}

/// A crossed module together with the differentiated maps its derived
/// structures are built from.
#[derive(Clone)]
pub struct DerivedModule {
    module: GroupCrossedModule,
    maps: DifferentiatedMaps,
    fault: Option<Fault>,
}

impl DerivedModule {
    pub fn new(module: GroupCrossedModule, source: MapSource) -> Result<Self> {
        let maps = module.differentiated(source)?;
        Ok(Self {
            module,
            maps,
            fault: None,
        })
    }

    pub fn from_parts(module: GroupCrossedModule, maps: DifferentiatedMaps) -> Self {
        Self {
            module,
            maps,
            fault: None,
        }
    }

    pub fn with_fault(mut self, fault: Fault) -> Self {
        self.fault = Some(fault);
        self
    }

    pub fn module(&self) -> &GroupCrossedModule {
        &self.module
    }

    pub fn maps(&self) -> &DifferentiatedMaps {
        &self.maps
    }

    pub fn e(&self) -> &GroupKind {
        self.module.e()
    }

    pub fn g(&self) -> &GroupKind {
        self.module.g()
    }

    fn check_group(&self, p: &DerivedGroupElement) -> Result<()> {
        if p.base.group() != self.g() || p.shift.group() != self.e() {
            return Err(Error::Mismatch(format!(
                "element of ({}, {}) used with {}",
                p.shift.group(),
                p.base.group(),
                self.module.name()
            )));
        }
        Ok(())
    }

    fn check_algebra(&self, y: &DerivedAlgebraElement) -> Result<()> {
        if y.base.group() != self.g() || y.shift.group() != self.e() {
            return Err(Error::Mismatch(format!(
                "element of ({}, {}) used with {}",
                y.shift.group(),
                y.base.group(),
                self.module.name()
            )));
        }
        Ok(())
    }

    pub fn element(&self, base: &RMatrix, shift: &RMatrix) -> Result<DerivedGroupElement> {
        DerivedGroupElement::new(
            MatrixGroupElement::from_real(base, self.g().clone())?,
            MatrixAlgebraElement::shifted(shift, self.e().clone(), SHIFT_DEGREE)?,
        )
    }

    pub fn algebra_element(
        &self,
        base: &RMatrix,
        shift: &RMatrix,
    ) -> Result<DerivedAlgebraElement> {
        DerivedAlgebraElement::new(
            MatrixAlgebraElement::from_real(base, self.g().clone())?,
            MatrixAlgebraElement::shifted(shift, self.e().clone(), SHIFT_DEGREE)?,
        )
    }

    /// Builds an element after projecting both components onto their
    /// algebras; used for results of finite differences.
    fn projected_algebra_element(
        &self,
        base: &GMatrix,
        shift: &GMatrix,
    ) -> Result<DerivedAlgebraElement> {
        self.algebra_element(
            &project(self.g(), &base.body()),
            &project(self.e(), &shift.body()),
        )
    }

    pub fn identity(&self) -> DerivedGroupElement {
        let n = self.e().size();
        self.element(
            &RMatrix::identity(self.g().size(), self.g().size()),
            &RMatrix::zeros(n, n),
        )
        .expect("identity is a member")
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> DerivedGroupElement {
        let (a, l) = (self.g().random_element(rng), self.e().random_algebra(rng));
        self.element(&a, &l).expect("random members")
    }

    pub fn random_algebra_element<R: Rng + ?Sized>(&self, rng: &mut R) -> DerivedAlgebraElement {
        let (u, big_u) = (self.g().random_algebra(rng), self.e().random_algebra(rng));
        self.algebra_element(&u, &big_u).expect("random members")
    }

    fn group_from(&self, base: GMatrix, shift: GMatrix) -> Result<DerivedGroupElement> {
        self.element(&base.body(), &shift.body())
    }

    fn algebra_from(&self, base: GMatrix, shift: GMatrix) -> Result<DerivedAlgebraElement> {
        self.algebra_element(&base.body(), &shift.body())
    }

    /// `(ab, L + μ̇(a, N))`.
    pub fn dmul(
        &self,
        p: &DerivedGroupElement,
        q: &DerivedGroupElement,
    ) -> Result<DerivedGroupElement> {
        self.check_group(p)?;
        self.check_group(q)?;
        let (a, b) = (p.base_matrix(), q.base_matrix());
        let shift = p
            .shift_matrix()
            .try_add(&self.maps.mu_dot(a, q.shift_matrix())?)?;
        self.group_from(a.try_mul(b)?, shift)
    }

    /// `(a⁻¹, −μ̇(a⁻¹, L))`.
    pub fn dinv(&self, p: &DerivedGroupElement) -> Result<DerivedGroupElement> {
        self.check_group(p)?;
        let ai = p.base_matrix().inverse()?;
        let shift = self.maps.mu_dot(&ai, p.shift_matrix())?.scale(-1.0);
        self.group_from(ai, shift)
    }

    /// `([u, v], m(u, V) − m(v, U))`.
    pub fn dbracket(
        &self,
        y: &DerivedAlgebraElement,
        w: &DerivedAlgebraElement,
    ) -> Result<DerivedAlgebraElement> {
        self.check_algebra(y)?;
        self.check_algebra(w)?;
        let (u, v) = (y.base_matrix(), w.base_matrix());
        let shift = self
            .maps
            .dot_mu_dot(u, w.shift_matrix())?
            .try_sub(&self.maps.dot_mu_dot(v, y.shift_matrix())?)?;
        self.algebra_from(u.commutator(v), shift)
    }

    /// Forward: `(Ad a(u), μ̇(a, U) − ˙μ˙(Ad a(u), L))`.
    /// Inverse: `(Ad a⁻¹(u), μ̇(a⁻¹, U + ˙μ˙(u, L)))`.
    pub fn d_adjoint(
        &self,
        p: &DerivedGroupElement,
        y: &DerivedAlgebraElement,
        direction: AdjointDirection,
    ) -> Result<DerivedAlgebraElement> {
        self.check_group(p)?;
        self.check_algebra(y)?;
        let drop = self.fault == Some(Fault::DropAdjointCorrection);
        let (a, l) = (p.base_matrix(), p.shift_matrix());
        let (u, big_u) = (y.base_matrix(), y.shift_matrix());
        match direction {
            AdjointDirection::Forward => {
                let ad = adjoint_matrix(a, u)?;
                let mut shift = self.maps.mu_dot(a, big_u)?;
                if !drop {
                    shift = shift.try_sub(&self.maps.dot_mu_dot(&ad, l)?)?;
                }
                self.algebra_from(ad, shift)
            }
            AdjointDirection::Inverse => {
                let ai = a.inverse()?;
                let mut inner = big_u.clone();
                if !drop {
                    inner = inner.try_add(&self.maps.dot_mu_dot(u, l)?)?;
                }
                self.algebra_from(adjoint_matrix(&ai, u)?, self.maps.mu_dot(&ai, &inner)?)
            }
        }
    }

    /// Maurer-Cartan form of a curve at `t0`, derivatives by central
    /// differences. Left: `(ġg⁻¹, −(Ė − ˙μ˙(ġg⁻¹, E)))`; right:
    /// `(g⁻¹ġ, −μ̇(g⁻¹, Ė))`.
    pub fn mc_form(
        &self,
        curve: &DerivedCurve,
        t0: f64,
        side: Side,
        opts: FdOptions,
    ) -> Result<DerivedAlgebraElement> {
        let here = curve.at(t0)?;
        self.check_group(&here)?;
        let g = here.base_matrix();
        let g_dot = fd_curve_derivative(
            |s| Ok(curve.at(t0 + s)?.base_matrix().clone()),
            Target::Algebra,
            opts,
        )?;
        let e_dot = fd_curve_derivative(
            |s| Ok(curve.at(t0 + s)?.shift_matrix().clone()),
            Target::Algebra,
            opts,
        )?;
        let gi = g.inverse()?;
        match side {
            Side::Left => {
                let u = g_dot.try_mul(&gi)?;
                let shift = e_dot
                    .try_sub(&self.maps.dot_mu_dot(&u, here.shift_matrix())?)?
                    .scale(-1.0);
                self.projected_algebra_element(&u, &shift)
            }
            Side::Right => {
                let u = gi.try_mul(&g_dot)?;
                let shift = self.maps.mu_dot(&gi, &e_dot)?.scale(-1.0);
                self.projected_algebra_element(&u, &shift)
            }
        }
    }
}

/// Projection onto the Lie algebra of `kind` through basis coordinates.
pub(crate) fn project(kind: &GroupKind, m: &RMatrix) -> RMatrix {
    let b = kind.basis();
    b.combine_real(&b.coords_real(m))
}
