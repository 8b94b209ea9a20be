use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::DerivedModule;
use crate::error::{Error, Result};
use crate::graded_coeff::{GeneratorSpec, GradedAlgebra, GradedScalar, Origin};
use crate::matrix_lie::{max_diff, GMatrix, GroupKind};

/// `S ∈ 𝔻𝔪[p]` written as `S(α) = j + (−1)^p α J`, `α` of degree `−1`.
/// The stored `J` excludes the sign; [`alpha_part`](Self::alpha_part)
/// includes it.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedDerivedElement {
    degree: i32,
    base: GMatrix,
    shift: GMatrix,
}

pub(crate) fn sign(exponent: i32) -> f64 {
    if exponent.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

impl GradedDerivedElement {
    /// `base` must be homogeneous of degree `degree` and `shift` of degree
    /// `degree + 1`.
    pub fn new(degree: i32, base: GMatrix, shift: GMatrix) -> Result<Self> {
        if !base.is_homogeneous_of(degree) {
            return Err(Error::Precondition(format!(
                "𝔤-component is not homogeneous of degree {degree}"
            )));
        }
        if !shift.is_homogeneous_of(degree + 1) {
            return Err(Error::Precondition(format!(
                "𝔢-component is not homogeneous of degree {}",
                degree + 1
            )));
        }
        Ok(Self {
            degree,
            base,
            shift,
        })
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn base(&self) -> &GMatrix {
        &self.base
    }

    pub fn shift(&self) -> &GMatrix {
        &self.shift
    }

    /// The coefficient `(−1)^p J` of `α`.
    pub fn alpha_part(&self) -> GMatrix {
        self.shift.scale(sign(self.degree))
    }

    /// Largest componentwise difference; infinite across degrees.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.degree != other.degree {
            return f64::INFINITY;
        }
        max_diff(&self.base, &other.base).max(max_diff(&self.shift, &other.shift))
    }

    pub fn max_abs(&self) -> f64 {
        self.base.max_abs().max(self.shift.max_abs())
    }
}

/// Coordinates `y1..` of degree `1` followed by `w1..` of degree `−1`.
pub fn coordinate_algebra(positive: usize, negative: usize) -> Result<Arc<GradedAlgebra>> {
    let gens = (1..=positive)
        .map(|i| GeneratorSpec::new(format!("y{i}"), 1, Origin::Internal))
        .chain((1..=negative).map(|i| GeneratorSpec::new(format!("w{i}"), -1, Origin::Internal)))
        .collect();
    GradedAlgebra::new(gens)
}

/// A random element of the Lie algebra of `kind` with coefficients
/// homogeneous of `degree`: up to two monomials in distinct generators of
/// `alg`, each of length at most three. Zero when no monomial fits.
pub fn random_homogeneous<R: Rng + ?Sized>(
    kind: &GroupKind,
    alg: &Arc<GradedAlgebra>,
    degree: i32,
    rng: &mut R,
) -> GMatrix {
    let n = alg.len();
    let words: Vec<Vec<usize>> = (0u32..1 << n)
        .filter(|m| m.count_ones() <= 3)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|w| w.iter().map(|&i| alg.generator(i).degree).sum::<i32>() == degree)
        .collect();
    let size = kind.size();
    let mut acc = GMatrix::zeros(size, size);
    for w in words.choose_multiple(rng, 2) {
        let c = GradedScalar::word(alg, w, 1.0);
        acc = &acc + &GMatrix::scaled_real(&c, &kind.random_algebra(rng));
    }
    acc
}

impl DerivedModule {
    /// `[S, T] = ([j, k], m(j, K) − (−1)^{pq} m(k, J))` in degree `p + q`, the
    /// `𝔤`-bracket graded by coefficient degree.
    pub fn graded_bracket(
        &self,
        s: &GradedDerivedElement,
        t: &GradedDerivedElement,
    ) -> Result<GradedDerivedElement> {
        let (p, q) = (s.degree, t.degree);
        let twist = sign(p * q);
        let base = s
            .base
            .try_mul(&t.base)?
            .try_sub(&t.base.try_mul(&s.base)?.scale(twist))?;
        let shift = self.maps().dot_mu_dot_graded(&s.base, &t.shift)?.try_sub(
            &self
                .maps()
                .dot_mu_dot_graded(&t.base, &s.shift)?
                .scale(twist),
        )?;
        GradedDerivedElement::new(p + q, base, shift)
    }

    /// `d_t S = ((−1)^p t(J), 0)` in degree `p + 1`.
    pub fn coboundary_dt(&self, s: &GradedDerivedElement) -> Result<GradedDerivedElement> {
        let base = self.maps().tau_dot_graded(&s.shift)?.scale(sign(s.degree));
        let n = self.e().size();
        GradedDerivedElement::new(s.degree + 1, base, GMatrix::zeros(n, n))
    }

    pub fn random_graded<R: Rng + ?Sized>(
        &self,
        alg: &Arc<GradedAlgebra>,
        degree: i32,
        rng: &mut R,
    ) -> Result<GradedDerivedElement> {
        let base = random_homogeneous(self.g(), alg, degree, rng);
        let shift = random_homogeneous(self.e(), alg, degree + 1, rng);
        GradedDerivedElement::new(degree, base, shift)
    }
}
