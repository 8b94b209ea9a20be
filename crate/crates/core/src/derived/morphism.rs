use super::{DerivedAlgebraElement, DerivedGroupElement, DerivedModule};
use crate::crossed_module::{AlgebraMorphism, CrossedModuleMorphism, MapSource};
use crate::error::Result;
use crate::matrix_lie::DiffMethod;

/// `𝔻β = Φ̇ × φ` on the derived group and `Φ̇ × φ̇` on the derived algebra.
#[derive(Clone)]
pub struct DerivedMorphism {
    beta: CrossedModuleMorphism,
    differential: AlgebraMorphism,
    source: DerivedModule,
    target: DerivedModule,
}

impl DerivedMorphism {
    /// `maps` selects the differentiated structure maps of both ends; `method`
    /// differentiates `β` itself.
    pub fn new(beta: &CrossedModuleMorphism, maps: MapSource, method: DiffMethod) -> Result<Self> {
        Ok(Self {
            differential: beta.differentiate(method),
            source: DerivedModule::new(beta.source().clone(), maps)?,
            target: DerivedModule::new(beta.target().clone(), maps)?,
            beta: beta.clone(),
        })
    }

    pub fn source(&self) -> &DerivedModule {
        &self.source
    }

    pub fn target(&self) -> &DerivedModule {
        &self.target
    }

    pub fn apply_group(&self, p: &DerivedGroupElement) -> Result<DerivedGroupElement> {
        self.source.check_group(p)?;
        let base = self.beta.small(p.base_matrix())?;
        let shift = self.differential.big(p.shift_matrix())?;
        self.target.element(&base.body(), &shift.body())
    }

    pub fn apply_algebra(&self, y: &DerivedAlgebraElement) -> Result<DerivedAlgebraElement> {
        self.source.check_algebra(y)?;
        let base = self.differential.small(y.base_matrix())?;
        let shift = self.differential.big(y.shift_matrix())?;
        self.target.algebra_element(&base.body(), &shift.body())
    }
}
