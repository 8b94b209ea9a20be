//! The trivial synthetic principal 2-bundle `P = U × (𝔢[1] ⋊ G)` over a box
//! `U ⊆ ℝ^d`: structure maps, the operation `(d, j_Z, l_Z)` on the function
//! algebra of `T[1]P`, basic elements, restriction to the object space and
//! local gauge transformations.
//!
//! Group directions of `T[1]P` use the left-invariant Maurer-Cartan form
//! `ϑ = a⁻¹da`, so vertical fields of the right action contract it to
//! constants. Derivatives along `x` and `a` are exact: fields are evaluated
//! at an even nilpotent perturbation `ε = σσ'` and the coefficient of `ε` is
//! read off.

mod checks;
mod form;
mod gauge;
mod operation;

use rand::Rng;

pub use checks::{basic_check, basic_suite, cartan_suite, restriction_suite, structure_suite};
pub use form::{
    random_basic_field, random_field, Chart, Coefficient, Differential, FormField, FormSpace,
    Quadratic, PERTURBATION_DEPTH,
};
pub use gauge::{gauge_suite, local_gauge, GaugeKind};
pub use operation::{DerivationHandle, Operation, OperationFault};

use crate::derived::{DerivedGroupElement, DerivedModule};
use crate::error::{Error, Result};
use crate::matrix_lie::RMatrix;

/// `U × 𝔻M` with `U` an axis-aligned box.
#[derive(Clone)]
pub struct BundleModel {
    module: DerivedModule,
    bounds: Vec<(f64, f64)>,
}

/// A point `(x, e^{ᾱL} a)` of `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticPoint {
    x: Vec<f64>,
    fibre: DerivedGroupElement,
}

impl SyntheticPoint {
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn fibre(&self) -> &DerivedGroupElement {
        &self.fibre
    }

    pub fn group(&self) -> RMatrix {
        self.fibre.base_matrix().body()
    }

    pub fn shift(&self) -> RMatrix {
        self.fibre.shift_matrix().body()
    }
}

impl BundleModel {
    /// The unit cube in `ℝ^d`.
    pub fn new(module: DerivedModule, base_dim: usize) -> Self {
        Self {
            module,
            bounds: vec![(0.0, 1.0); base_dim],
        }
    }

    pub fn with_bounds(module: DerivedModule, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.iter().any(|(lo, hi)| !(lo < hi)) {
            return Err(Error::Config("chart bounds must satisfy lo < hi".into()));
        }
        Ok(Self { module, bounds })
    }

    pub fn module(&self) -> &DerivedModule {
        &self.module
    }

    pub fn base_dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn point(&self, x: Vec<f64>, fibre: DerivedGroupElement) -> Result<SyntheticPoint> {
        if x.len() != self.base_dim() {
            return Err(Error::Shape(format!(
                "base point of dimension {} in ℝ^{}",
                x.len(),
                self.base_dim()
            )));
        }
        if x.iter()
            .zip(&self.bounds)
            .any(|(v, (lo, hi))| v < lo || v > hi)
        {
            return Err(Error::Domain(format!("{x:?} lies outside the chart")));
        }
        let fibre = self
            .module
            .element(&fibre.base_matrix().body(), &fibre.shift_matrix().body())?;
        Ok(SyntheticPoint { x, fibre })
    }

    pub fn random_base_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.bounds
            .iter()
            .map(|(lo, hi)| rng.gen_range(*lo..*hi))
            .collect()
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> SyntheticPoint {
        let x = self.random_base_point(rng);
        SyntheticPoint {
            x,
            fibre: self.module.random_element(rng),
        }
    }

    /// `(x, a, L) ↦ (x, a, 0)`.
    pub fn source_map(&self, v: &SyntheticPoint) -> Result<SyntheticPoint> {
        let n = self.module.e().size();
        let fibre = self.module.element(&v.group(), &RMatrix::zeros(n, n))?;
        Ok(SyntheticPoint {
            x: v.x.clone(),
            fibre,
        })
    }

    pub fn project(&self, v: &SyntheticPoint) -> Vec<f64> {
        v.x.clone()
    }

    /// `(x, P) ↦ (x, P Q)`.
    pub fn right_action(
        &self,
        v: &SyntheticPoint,
        q: &DerivedGroupElement,
    ) -> Result<SyntheticPoint> {
        Ok(SyntheticPoint {
            x: v.x.clone(),
            fibre: self.module.dmul(&v.fibre, q)?,
        })
    }

    /// The trivialization `V ↦ (π(V), (a, L))`.
    pub fn trivialize(&self, v: &SyntheticPoint) -> (Vec<f64>, DerivedGroupElement) {
        (self.project(v), v.fibre.clone())
    }

    /// Coordinates of `L` in the basis of `𝔢`.
    pub fn fibre_coords(&self, v: &SyntheticPoint) -> Vec<f64> {
        self.module.maps().e_basis().coords_real(&v.shift())
    }
}
