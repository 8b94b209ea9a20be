//! Crossed modules of matrix Lie groups and algebras, their morphisms and
//! differentiation, fixtures, and identity suites.

mod fixtures;
mod morphism;
mod suites;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use fixtures::{lift_rotation, make_fixture, rotation_of_quaternion, FixtureKind};
pub use morphism::{object_submodule, AlgebraMorphism, CrossedModuleMorphism};
pub use suites::{
    check_algebra_axioms, check_group_axioms, check_morphism, differentiation_consistency,
    identity_suite, variational_convergence, variational_suite, VariationalOptions,
};

use crate::error::{Error, Result};
use crate::graded_coeff::GradedScalar;
use crate::matrix_lie::{
    differential, fd_differential, nilpotent_differential, AlgebraBasis, DiffMethod, GMatrix,
    GroupKind, RMatrix, Target,
};

pub type UnaryMap = Arc<dyn Fn(&GMatrix) -> Result<GMatrix> + Send + Sync>;
pub type BinaryMap = Arc<dyn Fn(&GMatrix, &GMatrix) -> Result<GMatrix> + Send + Sync>;

/// Block-matrix realization of the semidirect product `E ⋊ G` and of its Lie
/// algebra, independent of the action map. Used by the embedding oracles.
#[derive(Clone)]
pub struct SemidirectRealization {
    pub size: usize,
    /// `(A, a) ↦ ι(A)ι(a)`.
    pub embed_group: BinaryMap,
    /// Inverse of `embed_group`, returned as `E` then `G` component.
    pub split_group: Arc<dyn Fn(&GMatrix) -> Result<(GMatrix, GMatrix)> + Send + Sync>,
    /// `(X, x) ↦ ι(X) + ι(x)`.
    pub embed_algebra: BinaryMap,
    pub split_algebra: Arc<dyn Fn(&GMatrix) -> Result<(GMatrix, GMatrix)> + Send + Sync>,
}

/// `(E, G, τ, μ)` with evaluable structure maps.
#[derive(Clone)]
pub struct GroupCrossedModule {
    name: String,
    e: GroupKind,
    g: GroupKind,
    tau: UnaryMap,
    mu: BinaryMap,
    exact: Option<DifferentiatedMaps>,
    realization: Option<SemidirectRealization>,
}

impl fmt::Debug for GroupCrossedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupCrossedModule")
            .field("name", &self.name)
            .field("e", &self.e)
            .field("g", &self.g)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl GroupCrossedModule {
    pub fn new(
        name: impl Into<String>,
        e: GroupKind,
        g: GroupKind,
        tau: UnaryMap,
        mu: BinaryMap,
    ) -> Self {
        Self {
            name: name.into(),
            e,
            g,
            tau,
            mu,
            exact: None,
            realization: None,
        }
    }

    pub fn with_exact_maps(mut self, maps: DifferentiatedMaps) -> Self {
        self.exact = Some(maps);
        self
    }

    pub fn with_realization(mut self, r: SemidirectRealization) -> Self {
        self.realization = Some(r);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn e(&self) -> &GroupKind {
        &self.e
    }

    pub fn g(&self) -> &GroupKind {
        &self.g
    }

    pub fn tau(&self, a: &GMatrix) -> Result<GMatrix> {
        (self.tau)(a)
    }

    pub fn mu(&self, a: &GMatrix, b: &GMatrix) -> Result<GMatrix> {
        (self.mu)(a, b)
    }

    pub fn tau_map(&self) -> &UnaryMap {
        &self.tau
    }

    pub fn mu_map(&self) -> &BinaryMap {
        &self.mu
    }

    pub fn exact_maps(&self) -> Option<&DifferentiatedMaps> {
        self.exact.as_ref()
    }

    pub fn realization(&self) -> Option<&SemidirectRealization> {
        self.realization.as_ref()
    }

    /// A copy whose action is multiplied by `factor`; closed-form maps are
    /// dropped so every derived quantity comes from the corrupted action.
    pub fn with_scaled_action(&self, factor: f64) -> Self {
        let mu = self.mu.clone();
        let mut out = self.clone();
        out.name = format!("{}*{}", self.name, factor);
        out.mu = Arc::new(move |a, b| Ok(mu(a, b)?.scale(factor)));
        out.exact = None;
        out
    }

    /// The differentiated structure maps: closed-form ones, or ones obtained
    /// by differentiating `τ` and `μ` with `method`.
    pub fn differentiated(&self, source: MapSource) -> Result<DifferentiatedMaps> {
        match source {
            MapSource::Exact => self.exact.clone().ok_or_else(|| {
                Error::Unsupported(format!("{} has no closed-form differentials", self.name))
            }),
            MapSource::Numeric(method) => Ok(DifferentiatedMaps::from_module(self, method)),
        }
    }
}

/// Where differentiated maps come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MapSource {
    Exact,
    Numeric(DiffMethod),
}

/// Identity matrix sharing the generator set of `like`, so closures can mix
/// it with graded inputs.
pub(crate) fn identity_like(n: usize, like: &GMatrix) -> Result<GMatrix> {
    let alg = like.algebra();
    if alg.is_empty() {
        Ok(GMatrix::identity(n))
    } else {
        GMatrix::identity(n).embed_into(&alg)
    }
}

/// `m` re-expressed over the generators of `like` when both are graded.
pub(crate) fn align(m: &GMatrix, like: &GMatrix) -> Result<GMatrix> {
    let alg = like.algebra();
    if alg.is_empty() {
        Ok(m.clone())
    } else {
        m.embed_into(&alg)
    }
}

/// `τ̇, μ̇, ˙μ, ˙μ˙` with cached structure tensors for graded extension.
#[derive(Clone)]
pub struct DifferentiatedMaps {
    e: GroupKind,
    g: GroupKind,
    e_basis: AlgebraBasis,
    g_basis: AlgebraBasis,
    tau_dot: UnaryMap,
    mu_dot: BinaryMap,
    dot_mu: BinaryMap,
    dot_mu_dot: BinaryMap,
    tables: Arc<OnceLock<Tables>>,
}

struct Tables {
    t: Vec<RMatrix>,
    m: Vec<Vec<RMatrix>>,
}

impl DifferentiatedMaps {
    pub fn new(
        e: GroupKind,
        g: GroupKind,
        tau_dot: UnaryMap,
        mu_dot: BinaryMap,
        dot_mu: BinaryMap,
        dot_mu_dot: BinaryMap,
    ) -> Self {
        Self {
            e_basis: e.basis(),
            g_basis: g.basis(),
            e,
            g,
            tau_dot,
            mu_dot,
            dot_mu,
            dot_mu_dot,
            tables: Arc::new(OnceLock::new()),
        }
    }

    /// Differentiates `τ` and `μ` along exponential curves. With finite
    /// differences, `˙μ˙` differences over an exact inner derivative so the
    /// two steps do not compound.
    pub fn from_module(m: &GroupCrossedModule, method: DiffMethod) -> Self {
        let (ne, ng) = (m.e.size(), m.g.size());
        let tau = m.tau.clone();
        let tau_dot: UnaryMap = Arc::new(move |x| {
            let one = identity_like(ne, x)?;
            differential(|a| tau(a), &one, x, Target::Group, method)
        });
        let mu = m.mu.clone();
        let mu_dot: BinaryMap = Arc::new(move |a, x| {
            let one = identity_like(ne, a)?;
            differential(|b| mu(&align(a, b)?, b), &one, x, Target::Group, method)
        });
        let mu = m.mu.clone();
        let dot_mu: BinaryMap = Arc::new(move |x, big| {
            let one = identity_like(ng, big)?;
            differential(|a| mu(a, &align(big, a)?), &one, x, Target::Group, method)
        });
        let mu = m.mu.clone();
        let dot_mu_dot: BinaryMap = Arc::new(move |x, big_x| {
            let inner = |a: &GMatrix| {
                let one = identity_like(ne, a)?;
                nilpotent_differential(|b| mu(&align(a, b)?, b), &one, big_x, Target::Group)
            };
            let one = GMatrix::identity(ng);
            match method {
                DiffMethod::CentralDifference(opts) => {
                    fd_differential(inner, &one, x, Target::Algebra, opts)
                }
                DiffMethod::Nilpotent => nilpotent_differential(inner, &one, x, Target::Algebra),
            }
        });
        Self::new(
            m.e.clone(),
            m.g.clone(),
            tau_dot,
            mu_dot,
            dot_mu,
            dot_mu_dot,
        )
    }

    pub fn e(&self) -> &GroupKind {
        &self.e
    }

    pub fn g(&self) -> &GroupKind {
        &self.g
    }

    pub fn e_basis(&self) -> &AlgebraBasis {
        &self.e_basis
    }

    pub fn g_basis(&self) -> &AlgebraBasis {
        &self.g_basis
    }

    pub fn tau_dot(&self, x: &GMatrix) -> Result<GMatrix> {
        (self.tau_dot)(x)
    }

    pub fn mu_dot(&self, a: &GMatrix, x: &GMatrix) -> Result<GMatrix> {
        (self.mu_dot)(a, x)
    }

    pub fn dot_mu(&self, x: &GMatrix, a: &GMatrix) -> Result<GMatrix> {
        (self.dot_mu)(x, a)
    }

    pub fn dot_mu_dot(&self, x: &GMatrix, y: &GMatrix) -> Result<GMatrix> {
        (self.dot_mu_dot)(x, y)
    }

    fn tables(&self) -> Result<&Tables> {
        if let Some(t) = self.tables.get() {
            return Ok(t);
        }
        let t = self
            .e_basis
            .elements()
            .iter()
            .map(|e| Ok(self.tau_dot(&GMatrix::from_real(e))?.body()))
            .collect::<Result<Vec<_>>>()?;
        let m = self
            .g_basis
            .elements()
            .iter()
            .map(|x| {
                self.e_basis
                    .elements()
                    .iter()
                    .map(|e| {
                        Ok(self
                            .dot_mu_dot(&GMatrix::from_real(x), &GMatrix::from_real(e))?
                            .body())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.tables.get_or_init(|| Tables { t, m }))
    }

    /// `τ̇` extended to graded coefficients: `Σ cᵇ τ̇(e_b)`.
    pub fn tau_dot_graded(&self, x: &GMatrix) -> Result<GMatrix> {
        let tables = self.tables()?;
        let c = self.e_basis.coords(x);
        sum_scaled(self.g.size(), c.iter().zip(&tables.t))
    }

    /// `˙μ˙` extended bilinearly: `Σ cᵃ dᵇ ˙μ˙(x_a, e_b)`, coefficients kept in
    /// argument order.
    pub fn dot_mu_dot_graded(&self, x: &GMatrix, y: &GMatrix) -> Result<GMatrix> {
        let tables = self.tables()?;
        let c = self.g_basis.coords(x);
        let d = self.e_basis.coords(y);
        let mut acc = GMatrix::zeros(self.e.size(), self.e.size());
        for (ca, row) in c.iter().zip(&tables.m) {
            if ca.is_zero() {
                continue;
            }
            for (db, m) in d.iter().zip(row) {
                if db.is_zero() {
                    continue;
                }
                acc = acc.try_add(&GMatrix::scaled_real(&ca.try_mul(db)?, m))?;
            }
        }
        Ok(acc)
    }

    /// `μ̇(a, ·)` for a real group element, extended to graded coefficients.
    pub fn mu_dot_graded(&self, a: &GMatrix, y: &GMatrix) -> Result<GMatrix> {
        if y.is_real() {
            return self.mu_dot(a, y);
        }
        let d = self.e_basis.coords(y);
        let mut acc = GMatrix::zeros(self.e.size(), self.e.size());
        for (db, e) in d.iter().zip(self.e_basis.elements()) {
            if db.is_zero() {
                continue;
            }
            let v = self.mu_dot(a, &GMatrix::from_real(e))?;
            acc = acc.try_add(&GMatrix::scaled_real(db, &v.body()))?;
        }
        Ok(acc)
    }

    /// `˙μ(·, A)` for a real `A`, extended to graded coefficients.
    pub fn dot_mu_graded(&self, x: &GMatrix, a: &GMatrix) -> Result<GMatrix> {
        if x.is_real() {
            return self.dot_mu(x, a);
        }
        let c = self.g_basis.coords(x);
        let mut acc = GMatrix::zeros(self.e.size(), self.e.size());
        for (ca, g) in c.iter().zip(self.g_basis.elements()) {
            if ca.is_zero() {
                continue;
            }
            let v = self.dot_mu(&GMatrix::from_real(g), a)?;
            acc = acc.try_add(&GMatrix::scaled_real(ca, &v.body()))?;
        }
        Ok(acc)
    }

    /// The Lie algebra crossed module `(𝔢, 𝔤, τ̇, ˙μ˙)`.
    pub fn algebra_module(&self, name: impl Into<String>) -> AlgebraCrossedModule {
        AlgebraCrossedModule {
            name: name.into(),
            e: self.e.clone(),
            g: self.g.clone(),
            t: self.tau_dot.clone(),
            m: self.dot_mu_dot.clone(),
        }
    }
}

fn sum_scaled<'a>(
    n: usize,
    terms: impl Iterator<Item = (&'a GradedScalar, &'a RMatrix)>,
) -> Result<GMatrix> {
    let mut acc = GMatrix::zeros(n, n);
    for (c, m) in terms {
        if !c.is_zero() {
            acc = acc.try_add(&GMatrix::scaled_real(c, m))?;
        }
    }
    Ok(acc)
}

/// `(𝔢, 𝔤, t, m)`.
#[derive(Clone)]
pub struct AlgebraCrossedModule {
    name: String,
    e: GroupKind,
    g: GroupKind,
    t: UnaryMap,
    m: BinaryMap,
}

impl AlgebraCrossedModule {
    pub fn new(
        name: impl Into<String>,
        e: GroupKind,
        g: GroupKind,
        t: UnaryMap,
        m: BinaryMap,
    ) -> Self {
        Self {
            name: name.into(),
            e,
            g,
            t,
            m,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn e(&self) -> &GroupKind {
        &self.e
    }

    pub fn g(&self) -> &GroupKind {
        &self.g
    }

    pub fn t(&self, x: &GMatrix) -> Result<GMatrix> {
        (self.t)(x)
    }

    pub fn m(&self, x: &GMatrix, y: &GMatrix) -> Result<GMatrix> {
        (self.m)(x, y)
    }
}

/// Differentiates a group crossed module: the algebra module plus all four
/// differentiated maps.
pub fn differentiate_module(
    m: &GroupCrossedModule,
    method: DiffMethod,
) -> (AlgebraCrossedModule, DifferentiatedMaps) {
    let maps = DifferentiatedMaps::from_module(m, method);
    (maps.algebra_module(format!("d{}", m.name)), maps)
}
