use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graded_coeff::{GradedAlgebra, GradedScalar, Monomial};

pub type RMatrix = DMatrix<f64>;

/// Dense row-major matrix with [`GradedScalar`] entries. Products keep the
/// left-to-right order of factors, so odd entries pick up Koszul signs.
#[derive(Clone, Debug, PartialEq)]
pub struct GMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GradedScalar>,
}

impl GMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GradedScalar::real(0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            GradedScalar::real(if i == j { 1.0 } else { 0.0 })
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GradedScalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real(m: &RMatrix) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| GradedScalar::real(m[(i, j)]))
    }

    /// Real matrix `m` multiplied entrywise by the scalar `s` placed on the left.
    pub fn scaled_real(s: &GradedScalar, m: &RMatrix) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| s.scale(m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GradedScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[GradedScalar] {
        &self.data
    }

    /// The algebra of the first entry that carries generators, or the reals.
    pub fn algebra(&self) -> Arc<GradedAlgebra> {
        self.data
            .iter()
            .map(|s| s.algebra())
            .find(|a| !a.is_empty())
            .cloned()
            .unwrap_or_else(GradedAlgebra::real)
    }

    pub fn body(&self) -> RMatrix {
        RMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).body())
    }

    pub fn soul(&self) -> Self {
        self.map(|s| s.soul())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|s| s.is_real())
    }

    pub fn is_even(&self) -> bool {
        self.data.iter().all(|s| s.is_even())
    }

    pub fn is_odd(&self) -> bool {
        self.data.iter().all(|s| s.is_odd())
    }

    pub fn is_homogeneous_of(&self, p: i32) -> bool {
        self.data.iter().all(|s| s.is_homogeneous_of(p))
    }

    pub fn map(&self, f: impl Fn(&GradedScalar) -> GradedScalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|s| s.scale(c))
    }

    /// `s · M` with `s` to the left of every entry.
    pub fn left_scale(&self, s: &GradedScalar) -> Self {
        self.map(|x| s * x)
    }

    /// Coefficient matrix of a canonical monomial.
    pub fn coefficient(&self, m: Monomial) -> RMatrix {
        RMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).extract_coefficient(m)
        })
    }

    pub fn left_factor(&self, g: usize) -> Self {
        self.map(|s| s.left_factor(g))
    }

    pub fn left_derivative(&self, g: usize) -> Self {
        self.map(|s| s.left_derivative(g))
    }

    pub fn drop_generators(&self, mask: u32) -> Self {
        self.map(|s| s.drop_generators(mask))
    }

    pub fn embed_into(&self, alg: &Arc<GradedAlgebra>) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|s| s.embed_into(alg))
            .collect::<Result<_>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, s| a.max(s.max_abs()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> GradedScalar {
        (0..self.rows.min(self.cols)).fold(GradedScalar::real(0.0), |acc, i| &acc + self.get(i, i))
    }

    fn check_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sum")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "difference")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.try_sub(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "product: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for k in 0..other.cols {
                let mut acc = GradedScalar::real(0.0);
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    let b = other.get(j, k);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.try_add(&a.try_mul(b)?)?;
                }
                data.push(acc);
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Plain commutator `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Graded commutator `AB - (-1)^{|A||B|} BA` for homogeneous-parity
    /// matrices; mixed parity is rejected.
    pub fn graded_commutator(&self, other: &Self) -> Result<Self> {
        let pa = self.parity()?;
        let pb = other.parity()?;
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        if pa && pb {
            ab.try_add(&ba)
        } else {
            ab.try_sub(&ba)
        }
    }

    /// `true` for odd, `false` for even; zero counts as even.
    pub fn parity(&self) -> Result<bool> {
        if self.is_even() {
            Ok(false)
        } else if self.is_odd() {
            Ok(true)
        } else {
            Err(Error::Precondition("matrix has mixed parity".into()))
        }
    }

    /// Inverse of a matrix with invertible body: `(B + S)^{-1} = Σ (-B⁻¹S)^k B⁻¹`,
    /// a finite sum because the soul is nilpotent.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let body_inv = self
            .body()
            .try_inverse()
            .ok_or_else(|| Error::Domain("matrix body is singular".into()))?;
        let binv = Self::from_real(&body_inv);
        let soul = self.soul();
        if soul.max_abs() == 0.0 {
            return Ok(binv);
        }
        let step = binv.try_mul(&soul)?.scale(-1.0);
        let mut term = binv.clone();
        let mut acc = binv.clone();
        for _ in 0..(4 * crate::graded_coeff::MAX_GENERATORS) {
            term = step.try_mul(&term)?;
            if term.max_abs() == 0.0 {
                return Ok(acc);
            }
            acc = acc.try_add(&term)?;
        }
        Err(Error::Domain("soul is not nilpotent".into()))
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn block_diag(blocks: &[&GMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r + i, c + j, b.get(i, j).clone());
                }
            }
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &GMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }
}

/// Largest absolute coefficient of `a - b`.
pub fn max_diff(a: &GMatrix, b: &GMatrix) -> f64 {
    a.try_sub(b).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
}

impl fmt::Display for GMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &GMatrix {
    type Output = GMatrix;
    fn add(self, rhs: &GMatrix) -> GMatrix {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl Sub for &GMatrix {
    type Output = GMatrix;
    fn sub(self, rhs: &GMatrix) -> GMatrix {
        self.try_sub(rhs).expect("matrix difference")
    }
}

impl Mul for &GMatrix {
    type Output = GMatrix;
    fn mul(self, rhs: &GMatrix) -> GMatrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl Neg for &GMatrix {
    type Output = GMatrix;
    fn neg(self) -> GMatrix {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_coeff::{GeneratorSpec, Origin};

    #[test]
    fn graded_inverse_round_trips() {
        let alg = GradedAlgebra::new(vec![
            GeneratorSpec::new("a", 1, Origin::Auxiliary),
            GeneratorSpec::new("b", 1, Origin::Auxiliary),
        ])
        .unwrap();
        let ab = GradedScalar::word(&alg, &[0, 1], 1.0);
        let m = GMatrix::from_fn(2, 2, |i, j| {
            let base = GradedScalar::real([[2.0, 1.0], [0.5, 3.0]][i][j]);
            &base + &ab.scale((i + 2 * j) as f64)
        });
        let inv = m.inverse().unwrap();
        assert!(max_diff(&(&m * &inv), &GMatrix::identity(2)) < 1e-14);
        assert!(max_diff(&(&inv * &m), &GMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn graded_commutator_of_odd_matrices_is_anticommutator() {
        let alg = GradedAlgebra::new(vec![
            GeneratorSpec::new("a", 1, Origin::Auxiliary),
            GeneratorSpec::new("b", 1, Origin::Auxiliary),
        ])
        .unwrap();
        let a = GMatrix::scaled_real(
            &GradedScalar::generator(&alg, 0),
            &RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
        );
        let b = GMatrix::scaled_real(
            &GradedScalar::generator(&alg, 1),
            &RMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]),
        );
        let c = a.graded_commutator(&b).unwrap();
        // a b [E12, E21] = a b diag(1, -1)
        let expect = GMatrix::scaled_real(
            &GradedScalar::word(&alg, &[0, 1], 1.0),
            &RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        );
        assert!(max_diff(&c, &expect) < 1e-15);
    }
}
