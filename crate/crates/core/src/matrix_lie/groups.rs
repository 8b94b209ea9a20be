use std::fmt;

use rand::Rng;

use super::gmatrix::{GMatrix, RMatrix};
use crate::graded_coeff::GradedScalar;

/// The ambient matrix groups used by the fixtures.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Rotations of ℝⁿ.
    SpecialOrthogonal(usize),
    /// Unit quaternions acting on ℍ ≅ ℝ⁴ by left multiplication.
    UnitQuaternion,
    GeneralLinear(usize),
    /// ℝⁿ under addition, as unipotent `(n+1)×(n+1)` matrices.
    Translation(usize),
    Trivial,
    /// A block matrix realization of a semidirect product; no structural check.
    Block(usize),
}

impl GroupKind {
    pub fn size(&self) -> usize {
        match self {
            GroupKind::SpecialOrthogonal(n) | GroupKind::GeneralLinear(n) | GroupKind::Block(n) => {
                *n
            }
            GroupKind::UnitQuaternion => 4,
            GroupKind::Translation(n) => n + 1,
            GroupKind::Trivial => 1,
        }
    }

    pub fn basis(&self) -> AlgebraBasis {
        let n = self.size();
        let unit = |i: usize, j: usize| {
            let mut m = RMatrix::zeros(n, n);
            m[(i, j)] = 1.0;
            m
        };
        let elems = match self {
            GroupKind::SpecialOrthogonal(_) => {
                let mut v = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        v.push(unit(i, j) - unit(j, i));
                    }
                }
                v
            }
            GroupKind::UnitQuaternion => (1..4)
                .map(|k| quaternion_left(&unit_quaternion(k)))
                .collect(),
            GroupKind::GeneralLinear(_) | GroupKind::Block(_) => (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| unit(i, j))
                .collect(),
            GroupKind::Translation(k) => (0..*k).map(|i| unit(i, *k)).collect(),
            GroupKind::Trivial => Vec::new(),
        };
        AlgebraBasis::new(n, elems)
    }

    /// Distance of a real matrix from the group, 0 for members.
    pub fn group_residual(&self, m: &RMatrix) -> f64 {
        let n = self.size();
        if m.nrows() != n || m.ncols() != n {
            return f64::INFINITY;
        }
        let id = RMatrix::identity(n, n);
        match self {
            GroupKind::SpecialOrthogonal(_) => {
                (m.transpose() * m - &id).amax() + (m.determinant() - 1.0).abs()
            }
            GroupKind::UnitQuaternion => {
                let q: Vec<f64> = (0..4).map(|i| m[(i, 0)]).collect();
                (m - quaternion_left(&q)).amax()
                    + (q.iter().map(|x| x * x).sum::<f64>() - 1.0).abs()
            }
            GroupKind::GeneralLinear(_) | GroupKind::Block(_) => {
                if m.determinant().abs() > 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            GroupKind::Translation(k) => {
                let mut d = m - &id;
                for i in 0..*k {
                    d[(i, *k)] = 0.0;
                }
                d.amax()
            }
            GroupKind::Trivial => (m - id).amax(),
        }
    }

    /// Distance of a real matrix from the Lie algebra.
    pub fn algebra_residual(&self, m: &RMatrix) -> f64 {
        if m.nrows() != self.size() || m.ncols() != self.size() {
            return f64::INFINITY;
        }
        let b = self.basis();
        let c = b.coords_real(m);
        (b.combine_real(&c) - m).amax()
    }

    pub fn random_algebra<R: Rng + ?Sized>(&self, rng: &mut R) -> RMatrix {
        let b = self.basis();
        let c: Vec<f64> = (0..b.dim()).map(|_| rng.gen_range(-0.8..=0.8)).collect();
        b.combine_real(&c)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> RMatrix {
        real_exp(&self.random_algebra(rng))
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::SpecialOrthogonal(n) => write!(f, "SO{n}"),
            GroupKind::UnitQuaternion => write!(f, "SU2"),
            GroupKind::GeneralLinear(n) => write!(f, "GL{n}"),
            GroupKind::Translation(n) => write!(f, "R{n}"),
            GroupKind::Trivial => write!(f, "1"),
            GroupKind::Block(n) => write!(f, "block{n}"),
        }
    }
}

/// A basis of a matrix Lie algebra with the dual coordinates obtained from the
/// Frobenius Gram matrix.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    size: usize,
    elems: Vec<RMatrix>,
    dual: Vec<RMatrix>,
}

impl AlgebraBasis {
    pub fn new(size: usize, elems: Vec<RMatrix>) -> Self {
        let d = elems.len();
        let gram = RMatrix::from_fn(d, d, |i, j| elems[i].dot(&elems[j]));
        let ginv = gram
            .try_inverse()
            .expect("basis must be linearly independent");
        let dual = (0..d)
            .map(|k| {
                (0..d).fold(RMatrix::zeros(size, size), |acc, l| {
                    acc + &elems[l] * ginv[(k, l)]
                })
            })
            .collect();
        Self { size, elems, dual }
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> &[RMatrix] {
        &self.elems
    }

    pub fn element(&self, k: usize) -> &RMatrix {
        &self.elems[k]
    }

    pub fn coords_real(&self, m: &RMatrix) -> Vec<f64> {
        self.dual.iter().map(|w| w.dot(m)).collect()
    }

    pub fn combine_real(&self, c: &[f64]) -> RMatrix {
        self.elems
            .iter()
            .zip(c)
            .fold(RMatrix::zeros(self.size, self.size), |acc, (e, x)| {
                acc + e * *x
            })
    }

    /// Coordinates of a graded matrix: graded scalars `c^k` with `m = Σ c^k e_k`
    /// when `m` lies in the span.
    pub fn coords(&self, m: &GMatrix) -> Vec<GradedScalar> {
        self.dual
            .iter()
            .map(|w| {
                let mut acc = GradedScalar::real(0.0);
                for i in 0..self.size {
                    for j in 0..self.size {
                        let x = w[(i, j)];
                        if x != 0.0 {
                            acc = &acc + &m.get(i, j).scale(x);
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// `Σ c^k e_k` with each coefficient to the left of its basis matrix.
    pub fn combine(&self, c: &[GradedScalar]) -> GMatrix {
        let mut acc = GMatrix::zeros(self.size, self.size);
        for (e, x) in self.elems.iter().zip(c) {
            if !x.is_zero() {
                acc = &acc + &GMatrix::scaled_real(x, e);
            }
        }
        acc
    }
}

pub fn unit_quaternion(k: usize) -> Vec<f64> {
    let mut q = vec![0.0; 4];
    q[k] = 1.0;
    q
}

/// Matrix of left multiplication by the quaternion `(w, x, y, z)`.
pub fn quaternion_left(q: &[f64]) -> RMatrix {
    let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
    RMatrix::from_row_slice(
        4,
        4,
        &[w, -x, -y, -z, x, w, -z, y, y, z, w, -x, z, -y, x, w],
    )
}

/// Graded version of [`quaternion_left`].
pub fn quaternion_left_graded(q: &[GradedScalar]) -> GMatrix {
    let (w, x, y, z) = (&q[0], &q[1], &q[2], &q[3]);
    let rows = [
        [w.clone(), -x, -y, -z],
        [x.clone(), w.clone(), -z, y.clone()],
        [y.clone(), z.clone(), w.clone(), -x],
        [z.clone(), -y, x.clone(), w.clone()],
    ];
    GMatrix::from_fn(4, 4, |i, j| rows[i][j].clone())
}

/// Scaling-and-squaring exponential of a real matrix.
pub fn real_exp(a: &RMatrix) -> RMatrix {
    let n = a.nrows();
    let norm = (0..n).map(|j| a.column(j).abs().sum()).fold(0.0, f64::max);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let b = a / 2f64.powi(squarings);
    let mut term = RMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &b / k as f64;
        sum += &term;
        if term.amax() < 1e-18 * sum.amax() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bases_have_expected_dimensions() {
        assert_eq!(GroupKind::SpecialOrthogonal(3).basis().dim(), 3);
        assert_eq!(GroupKind::UnitQuaternion.basis().dim(), 3);
        assert_eq!(GroupKind::GeneralLinear(2).basis().dim(), 4);
        assert_eq!(GroupKind::Translation(3).basis().dim(), 3);
        assert_eq!(GroupKind::Trivial.basis().dim(), 0);
    }

    #[test]
    fn random_elements_lie_in_their_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [
            GroupKind::SpecialOrthogonal(3),
            GroupKind::UnitQuaternion,
            GroupKind::GeneralLinear(3),
            GroupKind::Translation(3),
        ] {
            for _ in 0..10 {
                let x = g.random_algebra(&mut rng);
                assert!(g.algebra_residual(&x) < 1e-12);
                assert!(g.group_residual(&real_exp(&x)) < 1e-12, "{g}");
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let b = GroupKind::UnitQuaternion.basis();
        let c = vec![0.3, -0.2, 0.7];
        let m = b.combine_real(&c);
        let back = b.coords_real(&m);
        for (x, y) in c.iter().zip(&back) {
            assert!((x - y).abs() < 1e-15);
        }
    }
}
