use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graded_coeff::{GeneratorSpec, GradedAlgebra, GradedScalar, Origin};
use crate::matrix_lie::{AlgebraBasis, GMatrix, RMatrix};

/// Nesting depth available for exact derivatives along even directions.
pub const PERTURBATION_DEPTH: usize = 4;

/// Generator layout of the function algebra of `T[1]P` over a chart, with the
/// coefficient generators of internal Lie algebra elements and the pairs
/// used for nilpotent perturbations.
///
/// Order: `ℓ` (degree 1), `dx` (1), `ϑ` (1), `dℓ` (2), `ᾱ`, `β̄`, `ζ` (1),
/// then `PERTURBATION_DEPTH` pairs `σ` (1), `σ'` (−1).
#[derive(Debug)]
pub struct FormSpace {
    alg: Arc<GradedAlgebra>,
    base_dim: usize,
    e_dim: usize,
    g_dim: usize,
    /// `dϑᵇ = −½ cᵇ_{cd} ϑᶜ ϑᵈ`.
    theta_differentials: Vec<GradedScalar>,
}

/// Which internal coefficient carries the `𝔢[1]` part of a Lie algebra
/// element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Alpha,
    Beta,
}

impl FormSpace {
    pub fn new(base_dim: usize, e_dim: usize, g_basis: &AlgebraBasis) -> Result<Arc<Self>> {
        let g_dim = g_basis.dim();
        let mut gens = Vec::new();
        gens.extend((1..=e_dim).map(|i| GeneratorSpec::new(format!("l{i}"), 1, Origin::Internal)));
        gens.extend((1..=base_dim).map(|k| GeneratorSpec::new(format!("dx{k}"), 1, Origin::Form)));
        gens.extend((1..=g_dim).map(|b| GeneratorSpec::new(format!("th{b}"), 1, Origin::Form)));
        gens.extend((1..=e_dim).map(|i| GeneratorSpec::new(format!("dl{i}"), 2, Origin::Form)));
        for name in ["ᾱ", "β̄", "ζ"] {
            gens.push(GeneratorSpec::new(name, 1, Origin::Auxiliary));
        }
        for k in 1..=PERTURBATION_DEPTH {
            gens.push(GeneratorSpec::new(format!("σ{k}"), 1, Origin::Auxiliary));
            gens.push(GeneratorSpec::new(format!("σ'{k}"), -1, Origin::Auxiliary));
        }
        let n = gens.len();
        if n > crate::graded_coeff::MAX_GENERATORS {
            return Err(Error::Unsupported(format!(
                "form algebra needs {n} generators; reduce the base or group dimension"
            )));
        }
        let alg = GradedAlgebra::with_cap(gens, n)?;
        let mut space = Self {
            alg,
            base_dim,
            e_dim,
            g_dim,
            theta_differentials: Vec::new(),
        };
        let mut dtheta = vec![GradedScalar::zero(&space.alg); g_dim];
        for c in 0..g_dim {
            for d in 0..g_dim {
                let (ec, ed) = (g_basis.element(c), g_basis.element(d));
                let structure = g_basis.coords_real(&(ec * ed - ed * ec));
                let pair = space.theta(c).try_mul(&space.theta(d))?;
                for (b, s) in structure.iter().enumerate() {
                    if *s != 0.0 {
                        dtheta[b] = dtheta[b].try_sub(&pair.scale(0.5 * s))?;
                    }
                }
            }
        }
        space.theta_differentials = dtheta;
        Ok(Arc::new(space))
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn e_dim(&self) -> usize {
        self.e_dim
    }

    pub fn g_dim(&self) -> usize {
        self.g_dim
    }

    pub fn ell_index(&self, i: usize) -> usize {
        i
    }

    pub fn dx_index(&self, k: usize) -> usize {
        self.e_dim + k
    }

    pub fn theta_index(&self, b: usize) -> usize {
        self.e_dim + self.base_dim + b
    }

    pub fn dell_index(&self, i: usize) -> usize {
        self.e_dim + self.base_dim + self.g_dim + i
    }

    pub fn coefficient_index(&self, c: Coefficient) -> usize {
        let first = 2 * self.e_dim + self.base_dim + self.g_dim;
        match c {
            Coefficient::Alpha => first,
            Coefficient::Beta => first + 1,
        }
    }

    fn point_index(&self) -> usize {
        2 * self.e_dim + self.base_dim + self.g_dim + 2
    }

    fn pair_indices(&self, level: usize) -> (usize, usize) {
        let first = self.point_index() + 1 + 2 * level;
        (first, first + 1)
    }

    /// Mask of the perturbation generators.
    pub fn perturbation_mask(&self) -> u32 {
        let first = self.point_index() + 1;
        ((1u32 << (2 * PERTURBATION_DEPTH)) - 1) << first
    }

    fn gen(&self, i: usize) -> GradedScalar {
        GradedScalar::generator(&self.alg, i)
    }

    pub fn ell(&self, i: usize) -> GradedScalar {
        self.gen(self.ell_index(i))
    }

    pub fn dx(&self, k: usize) -> GradedScalar {
        self.gen(self.dx_index(k))
    }

    pub fn theta(&self, b: usize) -> GradedScalar {
        self.gen(self.theta_index(b))
    }

    pub fn dell(&self, i: usize) -> GradedScalar {
        self.gen(self.dell_index(i))
    }

    pub fn coefficient(&self, c: Coefficient) -> GradedScalar {
        self.gen(self.coefficient_index(c))
    }

    pub fn theta_differential(&self, b: usize) -> &GradedScalar {
        &self.theta_differentials[b]
    }

    pub fn constant(&self, c: f64) -> GradedScalar {
        GradedScalar::constant(&self.alg, c)
    }

    /// The chart at `(x, a, L)`: `x` and `a` as constants, the odd fibre
    /// coordinates as `ℓᵢ + ζ Lⁱ`.
    pub fn chart(self: &Arc<Self>, x: &[f64], a: &RMatrix, l_coords: &[f64]) -> Result<Chart> {
        if x.len() != self.base_dim || l_coords.len() != self.e_dim {
            return Err(Error::Shape(format!(
                "chart needs {} base and {} fibre coordinates, got {} and {}",
                self.base_dim,
                self.e_dim,
                x.len(),
                l_coords.len()
            )));
        }
        let zeta = self.gen(self.point_index());
        Ok(Chart {
            space: self.clone(),
            x: x.iter().map(|&v| self.constant(v)).collect(),
            a: GMatrix::from_real(a).embed_into(&self.alg)?,
            ell: (0..self.e_dim)
                .map(|i| self.ell(i).try_add(&zeta.scale(l_coords[i])))
                .collect::<Result<_>>()?,
            dell: (0..self.e_dim).map(|i| self.dell(i)).collect(),
            depth: 0,
        })
    }
}

/// Values of the coordinates of `T[1]P` at which a field is evaluated.
/// Differentials `dx` and `ϑ` are always the bare generators.
#[derive(Clone, Debug)]
pub struct Chart {
    space: Arc<FormSpace>,
    x: Vec<GradedScalar>,
    a: GMatrix,
    ell: Vec<GradedScalar>,
    dell: Vec<GradedScalar>,
    depth: usize,
}

impl Chart {
    pub fn space(&self) -> &Arc<FormSpace> {
        &self.space
    }

    pub fn x(&self, k: usize) -> &GradedScalar {
        &self.x[k]
    }

    pub fn a(&self) -> &GMatrix {
        &self.a
    }

    pub fn ell(&self, i: usize) -> &GradedScalar {
        &self.ell[i]
    }

    pub fn dell(&self, i: usize) -> &GradedScalar {
        &self.dell[i]
    }

    /// Pull-back to the object space: `ℓ = 0`, `dℓ = 0`.
    pub fn restricted(&self) -> Chart {
        let zero = GradedScalar::zero(self.space.algebra());
        Chart {
            ell: vec![zero.clone(); self.ell.len()],
            dell: vec![zero; self.dell.len()],
            ..self.clone()
        }
    }

    /// The next unused perturbation pair as an even nilpotent `ε = σσ'`,
    /// with the chart that records it as used.
    fn perturbation(&self) -> Result<(Chart, GradedScalar, (usize, usize))> {
        if self.depth >= PERTURBATION_DEPTH {
            return Err(Error::Unsupported(format!(
                "derivatives nested deeper than {PERTURBATION_DEPTH}"
            )));
        }
        let (s, t) = self.space.pair_indices(self.depth);
        let eps = self.space.gen(s).try_mul(&self.space.gen(t))?;
        Ok((
            Chart {
                depth: self.depth + 1,
                ..self.clone()
            },
            eps,
            (s, t),
        ))
    }

    /// `∂f/∂x_k`, exact for fields built from graded arithmetic.
    pub fn d_base(&self, f: &FormField, k: usize) -> Result<GradedScalar> {
        let (mut moved, eps, (s, t)) = self.perturbation()?;
        moved.x[k] = moved.x[k].try_add(&eps)?;
        Ok(f.eval(&moved)?.left_factor(s).left_factor(t))
    }

    /// `d/dt f(a e^{t e_b})` at `t = 0`.
    pub fn d_group(&self, f: &FormField, e_b: &RMatrix) -> Result<GradedScalar> {
        let (mut moved, eps, (s, t)) = self.perturbation()?;
        let step = GMatrix::identity(e_b.nrows()).try_add(&GMatrix::scaled_real(&eps, e_b))?;
        moved.a = moved.a.try_mul(&step)?;
        Ok(f.eval(&moved)?.left_factor(s).left_factor(t))
    }

    /// The chart with `ℓᵢ` shifted by `shift[i]`.
    pub fn with_ell_shift(&self, shift: &[GradedScalar]) -> Result<Chart> {
        let ell = self
            .ell
            .iter()
            .zip(shift)
            .map(|(l, s)| l.try_add(s))
            .collect::<Result<_>>()?;
        Ok(Chart {
            ell,
            ..self.clone()
        })
    }

    /// The chart with the group coordinate replaced.
    pub fn with_group(&self, a: &RMatrix) -> Result<Chart> {
        Ok(Chart {
            a: GMatrix::from_real(a).embed_into(self.space.algebra())?,
            ..self.clone()
        })
    }
}

type EvalFn = dyn Fn(&Chart) -> Result<GradedScalar> + Send + Sync;

/// An element of the function algebra of `T[1]P`, evaluable on charts.
#[derive(Clone)]
pub struct FormField {
    label: Arc<str>,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormField({})", self.label)
    }
}

/// A differential generator of `T[1]P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Differential {
    Base(usize),
    Group(usize),
    Fibre(usize),
}

/// `c₀ + Σ c_k x_k + Σ_{k≤l} c_{kl} x_k x_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic {
    pub constant: f64,
    pub linear: Vec<f64>,
    pub quadratic: Vec<Vec<f64>>,
}

impl Quadratic {
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut c = || rng.gen_range(-1.0..1.0);
        Self {
            constant: c(),
            linear: (0..dim).map(|_| c()).collect(),
            quadratic: (0..dim)
                .map(|k| (0..dim).map(|l| if l >= k { c() } else { 0.0 }).collect())
                .collect(),
        }
    }

    pub fn eval(&self, x: &[GradedScalar]) -> Result<GradedScalar> {
        let mut acc = GradedScalar::real(self.constant);
        for (k, c) in self.linear.iter().enumerate() {
            acc = acc.try_add(&x[k].scale(*c))?;
        }
        for (k, row) in self.quadratic.iter().enumerate() {
            for (l, c) in row.iter().enumerate() {
                if *c != 0.0 {
                    acc = acc.try_add(&x[k].try_mul(&x[l])?.scale(*c))?;
                }
            }
        }
        Ok(acc)
    }

    pub fn eval_real(&self, x: &[f64]) -> f64 {
        let xs: Vec<GradedScalar> = x.iter().map(|&v| GradedScalar::real(v)).collect();
        self.eval(&xs).map(|s| s.body()).unwrap_or(f64::NAN)
    }
}

impl FormField {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(&Chart) -> Result<GradedScalar> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: Arc::from(label.into()),
            eval: Arc::new(eval),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, chart: &Chart) -> Result<GradedScalar> {
        (self.eval)(chart)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |ch| Ok(ch.space().constant(c)))
    }

    /// Pull-back of a function on the base.
    pub fn pullback(p: Quadratic) -> Self {
        Self::new("π*p", move |ch| {
            let x: Vec<GradedScalar> = (0..ch.space().base_dim())
                .map(|k| ch.x(k).clone())
                .collect();
            Ok(p.eval(&x)?.try_add(&ch.space().constant(0.0))?)
        })
    }

    /// The coordinate function `a_{ij}`.
    pub fn group_entry(i: usize, j: usize) -> Self {
        Self::new(format!("a{i}{j}"), move |ch| {
            Ok(ch.a().get(i, j).try_add(&ch.space().constant(0.0))?)
        })
    }

    /// The odd fibre coordinate `ℓᵢ`.
    pub fn fibre_coordinate(i: usize) -> Self {
        Self::new(format!("l{}", i + 1), move |ch| Ok(ch.ell(i).clone()))
    }

    pub fn differential(d: Differential) -> Self {
        let label = match d {
            Differential::Base(k) => format!("dx{}", k + 1),
            Differential::Group(b) => format!("th{}", b + 1),
            Differential::Fibre(i) => format!("dl{}", i + 1),
        };
        Self::new(label, move |ch| {
            Ok(match d {
                Differential::Base(k) => ch.space().dx(k),
                Differential::Group(b) => ch.space().theta(b),
                Differential::Fibre(i) => ch.dell(i).clone(),
            })
        })
    }

    pub fn product(&self, other: &FormField) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::new(format!("{}·{}", self.label, other.label), move |ch| {
            f.eval(ch)?.try_mul(&g.eval(ch)?)
        })
    }

    pub fn sum(&self, other: &FormField) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::new(format!("{}+{}", self.label, other.label), move |ch| {
            f.eval(ch)?.try_add(&g.eval(ch)?)
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        let f = self.clone();
        Self::new(format!("{c}·{}", self.label), move |ch| {
            Ok(f.eval(ch)?.scale(c))
        })
    }

    /// Pull-back to the object space.
    pub fn restricted(&self) -> Self {
        let f = self.clone();
        Self::new(format!("I*({})", self.label), move |ch| {
            f.eval(&ch.restricted())
        })
    }
}

fn random_differential<R: Rng + ?Sized>(
    space: &FormSpace,
    base_only: bool,
    rng: &mut R,
) -> Differential {
    let kinds = if base_only { 1 } else { 3 };
    match rng.gen_range(0..kinds) {
        0 => Differential::Base(rng.gen_range(0..space.base_dim())),
        1 => Differential::Group(rng.gen_range(0..space.g_dim())),
        _ => Differential::Fibre(rng.gen_range(0..space.e_dim())),
    }
}

fn with_differentials<R: Rng + ?Sized>(
    f: FormField,
    space: &FormSpace,
    base_only: bool,
    rng: &mut R,
) -> FormField {
    let count = rng.gen_range(0..=2);
    (0..count).fold(f, |acc, _| {
        acc.product(&FormField::differential(random_differential(
            space, base_only, rng,
        )))
    })
}

/// A pull-back of a form on the base: a quadratic in `x` times up to two
/// `dx`.
pub fn random_basic_field<R: Rng + ?Sized>(space: &FormSpace, rng: &mut R) -> FormField {
    let p = FormField::pullback(Quadratic::random(space.base_dim(), rng));
    with_differentials(p, space, true, rng)
}

/// A sum of two terms from the sampling family: a base quadratic, a matrix
/// entry of `a` or a fibre coordinate, times up to two differentials.
pub fn random_field<R: Rng + ?Sized>(
    space: &FormSpace,
    group_size: usize,
    rng: &mut R,
) -> FormField {
    let term = |rng: &mut R| {
        let coeff = FormField::pullback(Quadratic::random(space.base_dim(), rng));
        let factor = match rng.gen_range(0..3) {
            0 => FormField::constant(1.0),
            1 => FormField::group_entry(rng.gen_range(0..group_size), rng.gen_range(0..group_size)),
            _ => FormField::fibre_coordinate(rng.gen_range(0..space.e_dim())),
        };
        with_differentials(coeff.product(&factor), space, false, rng)
    };
    let first = term(rng);
    first.sum(&term(rng))
}
