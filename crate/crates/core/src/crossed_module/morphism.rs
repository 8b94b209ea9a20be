use std::sync::Arc;

use super::fixtures::{make_fixture, rotation_of_quaternion, FixtureKind};
use super::{identity_like, DifferentiatedMaps, GroupCrossedModule, UnaryMap};
use crate::error::Result;
use crate::matrix_lie::{differential, DiffMethod, GMatrix, GroupKind, Target};

/// `β = (Φ, φ)` between group crossed modules, `Φ: E' → E`, `φ: G' → G`.
#[derive(Clone)]
pub struct CrossedModuleMorphism {
    name: String,
    source: GroupCrossedModule,
    target: GroupCrossedModule,
    big: UnaryMap,
    small: UnaryMap,
}

/// `(H, h)` between algebra crossed modules.
#[derive(Clone)]
pub struct AlgebraMorphism {
    pub big: UnaryMap,
    pub small: UnaryMap,
}

impl CrossedModuleMorphism {
    pub fn new(
        name: impl Into<String>,
        source: GroupCrossedModule,
        target: GroupCrossedModule,
        big: UnaryMap,
        small: UnaryMap,
    ) -> Self {
        Self {
            name: name.into(),
            source,
            target,
            big,
            small,
        }
    }

    pub fn identity(m: &GroupCrossedModule) -> Self {
        let id: UnaryMap = Arc::new(|a| Ok(a.clone()));
        Self::new(
            format!("id[{}]", m.name()),
            m.clone(),
            m.clone(),
            id.clone(),
            id,
        )
    }

    /// Inclusion of the submodule `(1, G)` with trivial `E`.
    pub fn object_inclusion(m: &GroupCrossedModule) -> Self {
        let source = object_submodule(m);
        let ne = m.e().size();
        Self::new(
            format!("incl[{}]", m.name()),
            source,
            m.clone(),
            Arc::new(move |a| identity_like(ne, a)),
            Arc::new(|a| Ok(a.clone())),
        )
    }

    /// `COVER → CONJ(SO3)` with `Φ` the covering map and `φ = id`.
    pub fn cover_projection() -> Result<Self> {
        Ok(Self::new(
            "cover->CONJ(SO3)",
            make_fixture(&FixtureKind::Cover)?,
            make_fixture(&FixtureKind::Conj(GroupKind::SpecialOrthogonal(3)))?,
            Arc::new(rotation_of_quaternion),
            Arc::new(|a| Ok(a.clone())),
        ))
    }

    /// `CONJ(SU2) → CONJ(SO3)` with the covering map in both slots.
    pub fn conj_cover_projection() -> Result<Self> {
        Ok(Self::new(
            "CONJ(SU2)->CONJ(SO3)",
            make_fixture(&FixtureKind::Conj(GroupKind::UnitQuaternion))?,
            make_fixture(&FixtureKind::Conj(GroupKind::SpecialOrthogonal(3)))?,
            Arc::new(rotation_of_quaternion),
            Arc::new(rotation_of_quaternion),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &GroupCrossedModule {
        &self.source
    }

    pub fn target(&self) -> &GroupCrossedModule {
        &self.target
    }

    pub fn big(&self, a: &GMatrix) -> Result<GMatrix> {
        (self.big)(a)
    }

    pub fn small(&self, a: &GMatrix) -> Result<GMatrix> {
        (self.small)(a)
    }

    /// `(Φ̇, φ̇)` by differentiating at the identities.
    pub fn differentiate(&self, method: DiffMethod) -> AlgebraMorphism {
        let (ne, ng) = (self.source.e().size(), self.source.g().size());
        let big = self.big.clone();
        let small = self.small.clone();
        AlgebraMorphism {
            big: Arc::new(move |x| {
                differential(|a| big(a), &identity_like(ne, x)?, x, Target::Group, method)
            }),
            small: Arc::new(move |x| {
                differential(
                    |a| small(a),
                    &identity_like(ng, x)?,
                    x,
                    Target::Group,
                    method,
                )
            }),
        }
    }
}

impl AlgebraMorphism {
    pub fn big(&self, x: &GMatrix) -> Result<GMatrix> {
        (self.big)(x)
    }

    pub fn small(&self, x: &GMatrix) -> Result<GMatrix> {
        (self.small)(x)
    }
}

/// `(1, G, 1, trivial action)`.
pub fn object_submodule(m: &GroupCrossedModule) -> GroupCrossedModule {
    let g = m.g().clone();
    let ng = g.size();
    let maps = DifferentiatedMaps::new(
        GroupKind::Trivial,
        g.clone(),
        Arc::new(move |_| Ok(GMatrix::zeros(ng, ng))),
        Arc::new(|_, _| Ok(GMatrix::zeros(1, 1))),
        Arc::new(|_, _| Ok(GMatrix::zeros(1, 1))),
        Arc::new(|_, _| Ok(GMatrix::zeros(1, 1))),
    );
    GroupCrossedModule::new(
        format!("{}_0", m.name()),
        GroupKind::Trivial,
        g,
        Arc::new(move |a| identity_like(ng, a)),
        Arc::new(|_, b| Ok(b.clone())),
    )
    .with_exact_maps(maps)
}
