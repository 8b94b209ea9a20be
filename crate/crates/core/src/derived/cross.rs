use super::{DerivedAlgebraElement, DerivedGroupElement, DerivedModule, SHIFT_DEGREE};
use crate::error::{Error, Result};
use crate::matrix_lie::{GMatrix, MatrixAlgebraElement, MatrixGroupElement};

/// Degree tag of `𝔢[1]⁺ ≅ ℝ[−1] ⊗ 𝔢`, paired with `α` of degree `−1`.
pub const CROSS_SHIFT_DEGREE: i32 = 1;

/// `F(α) = e^{αQ} m`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossGroupElement {
    base: MatrixGroupElement,
    shift: MatrixAlgebraElement,
}

/// `S(α) = j + αJ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossAlgebraElement {
    base: MatrixAlgebraElement,
    shift: MatrixAlgebraElement,
}

/// The same real coordinates under the other degree tag.
fn retag(x: &MatrixAlgebraElement, from: i32, to: i32) -> Result<MatrixAlgebraElement> {
    if x.degree() != from {
        return Err(Error::Domain(format!(
            "expected degree tag {from}, found {}",
            x.degree()
        )));
    }
    MatrixAlgebraElement::shifted(&x.entries().body(), x.group().clone(), to)
}

impl CrossGroupElement {
    pub fn base(&self) -> &MatrixGroupElement {
        &self.base
    }

    pub fn shift(&self) -> &MatrixAlgebraElement {
        &self.shift
    }
}

impl CrossAlgebraElement {
    pub fn base(&self) -> &MatrixAlgebraElement {
        &self.base
    }

    pub fn shift(&self) -> &MatrixAlgebraElement {
        &self.shift
    }
}

impl DerivedModule {
    /// `e^{ᾱL} a ↦ e^{α ζ(L)} a`.
    pub fn cross_mode(&self, p: &DerivedGroupElement) -> Result<CrossGroupElement> {
        self.check_group(p)?;
        Ok(CrossGroupElement {
            base: p.base().clone(),
            shift: retag(p.shift(), SHIFT_DEGREE, CROSS_SHIFT_DEGREE)?,
        })
    }

    pub fn cross_mode_inverse(&self, f: &CrossGroupElement) -> Result<DerivedGroupElement> {
        DerivedGroupElement::new(
            f.base.clone(),
            retag(&f.shift, CROSS_SHIFT_DEGREE, SHIFT_DEGREE)?,
        )
    }

    /// `u + ᾱU ↦ u + α ζ(U)`.
    pub fn cross_mode_algebra(&self, y: &DerivedAlgebraElement) -> Result<CrossAlgebraElement> {
        self.check_algebra(y)?;
        Ok(CrossAlgebraElement {
            base: y.base().clone(),
            shift: retag(y.shift(), SHIFT_DEGREE, CROSS_SHIFT_DEGREE)?,
        })
    }

    pub fn cross_mode_algebra_inverse(
        &self,
        s: &CrossAlgebraElement,
    ) -> Result<DerivedAlgebraElement> {
        DerivedAlgebraElement::new(
            s.base.clone(),
            retag(&s.shift, CROSS_SHIFT_DEGREE, SHIFT_DEGREE)?,
        )
    }

    pub fn cross_element(&self, base: &GMatrix, shift: &GMatrix) -> Result<CrossGroupElement> {
        Ok(CrossGroupElement {
            base: MatrixGroupElement::from_real(&base.body(), self.g().clone())?,
            shift: MatrixAlgebraElement::shifted(
                &shift.body(),
                self.e().clone(),
                CROSS_SHIFT_DEGREE,
            )?,
        })
    }

    pub fn cross_algebra_element(
        &self,
        base: &GMatrix,
        shift: &GMatrix,
    ) -> Result<CrossAlgebraElement> {
        Ok(CrossAlgebraElement {
            base: MatrixAlgebraElement::from_real(&base.body(), self.g().clone())?,
            shift: MatrixAlgebraElement::shifted(
                &shift.body(),
                self.e().clone(),
                CROSS_SHIFT_DEGREE,
            )?,
        })
    }

    /// `FG = e^{α(Q + μ̇(m, R))} mn`.
    pub fn cross_mul(
        &self,
        f: &CrossGroupElement,
        g: &CrossGroupElement,
    ) -> Result<CrossGroupElement> {
        let (m, n) = (f.base.entries(), g.base.entries());
        let shift = f
            .shift
            .entries()
            .try_add(&self.maps().mu_dot(m, g.shift.entries())?)?;
        self.cross_element(&m.try_mul(n)?, &shift)
    }

    /// `F⁻¹ = e^{−α μ̇(m⁻¹, Q)} m⁻¹`.
    pub fn cross_inv(&self, f: &CrossGroupElement) -> Result<CrossGroupElement> {
        let mi = f.base.entries().inverse()?;
        let shift = self.maps().mu_dot(&mi, f.shift.entries())?.scale(-1.0);
        self.cross_element(&mi, &shift)
    }

    /// `[S, T] = [j, k] + α(m(j, K) − m(k, J))`.
    pub fn cross_bracket(
        &self,
        s: &CrossAlgebraElement,
        t: &CrossAlgebraElement,
    ) -> Result<CrossAlgebraElement> {
        let (j, k) = (s.base.entries(), t.base.entries());
        let shift = self
            .maps()
            .dot_mu_dot(j, t.shift.entries())?
            .try_sub(&self.maps().dot_mu_dot(k, s.shift.entries())?)?;
        self.cross_algebra_element(&j.commutator(k), &shift)
    }
}
