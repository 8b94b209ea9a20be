//! Matrix Lie groups and algebras over graded scalars.

mod diff;
mod gmatrix;
mod groups;

pub use diff::{
    curve_derivative, differential, even_curve_derivative, fd_curve_derivative, fd_differential,
    nilpotent_differential, DiffMethod, FdOptions, Target,
};
pub use gmatrix::{max_diff, GMatrix, RMatrix};
pub use groups::{
    quaternion_left, quaternion_left_graded, real_exp, unit_quaternion, AlgebraBasis, GroupKind,
};

use crate::error::{Error, Result};

const MEMBERSHIP_TOL: f64 = 1e-9;

/// A group element: a square graded matrix whose body lies in `group`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixGroupElement {
    entries: GMatrix,
    group: GroupKind,
}

impl MatrixGroupElement {
    pub fn new(entries: GMatrix, group: GroupKind) -> Result<Self> {
        let r = group.group_residual(&entries.body());
        if !(r <= MEMBERSHIP_TOL) {
            return Err(Error::Domain(format!(
                "matrix is not in {group} (residual {r:e})"
            )));
        }
        if !entries.is_even() {
            return Err(Error::Domain(
                "group elements must have even entries".into(),
            ));
        }
        Ok(Self { entries, group })
    }

    pub fn from_real(m: &RMatrix, group: GroupKind) -> Result<Self> {
        Self::new(GMatrix::from_real(m), group)
    }

    pub fn identity(group: GroupKind) -> Self {
        let n = group.size();
        Self {
            entries: GMatrix::identity(n),
            group,
        }
    }

    pub fn entries(&self) -> &GMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> GMatrix {
        self.entries
    }

    pub fn group(&self) -> &GroupKind {
        &self.group
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::Mismatch(format!(
                "{} times {}",
                self.group, other.group
            )));
        }
        Ok(Self {
            entries: self.entries.try_mul(&other.entries)?,
            group: self.group.clone(),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            entries: self.entries.inverse()?,
            group: self.group.clone(),
        })
    }
}

/// An algebra element of declared degree whose body lies in the Lie algebra
/// of `group`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAlgebraElement {
    entries: GMatrix,
    group: GroupKind,
    degree: i32,
}

impl MatrixAlgebraElement {
    pub fn new(entries: GMatrix, group: GroupKind, degree: i32) -> Result<Self> {
        let r = group.algebra_residual(&entries.body());
        if !(r <= MEMBERSHIP_TOL) {
            return Err(Error::Domain(format!(
                "matrix is not in the algebra of {group} (residual {r:e})"
            )));
        }
        if !entries.is_homogeneous_of(degree) {
            return Err(Error::Domain(format!(
                "entries are not homogeneous of degree {degree}"
            )));
        }
        Ok(Self {
            entries,
            group,
            degree,
        })
    }

    pub fn from_real(m: &RMatrix, group: GroupKind) -> Result<Self> {
        Self::new(GMatrix::from_real(m), group, 0)
    }

    /// Real coordinates of a point of the shifted space `𝔤[k]`: the entries
    /// stay real and `degree` only records the shift.
    pub fn shifted(m: &RMatrix, group: GroupKind, degree: i32) -> Result<Self> {
        let r = group.algebra_residual(m);
        if !(r <= MEMBERSHIP_TOL) {
            return Err(Error::Domain(format!(
                "matrix is not in the algebra of {group} (residual {r:e})"
            )));
        }
        Ok(Self {
            entries: GMatrix::from_real(m),
            group,
            degree,
        })
    }

    pub fn zero(group: GroupKind, degree: i32) -> Self {
        let n = group.size();
        Self {
            entries: GMatrix::zeros(n, n),
            group,
            degree,
        }
    }

    pub fn entries(&self) -> &GMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> GMatrix {
        self.entries
    }

    pub fn group(&self) -> &GroupKind {
        &self.group
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }
}

fn check_square(m: &GMatrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "{what} of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn norm1(m: &RMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).abs().sum())
        .fold(0.0, f64::max)
}

/// Matrix exponential of an even graded matrix. The body part is scaled and
/// squared; nilpotent soul terms make the Taylor series effectively finite.
pub fn exp_matrix(x: &GMatrix) -> Result<GMatrix> {
    check_square(x, "exponential")?;
    if x.is_real() {
        return Ok(GMatrix::from_real(&real_exp(&x.body())));
    }
    let norm = norm1(&x.body());
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let b = x.scale(0.5f64.powi(squarings));
    let n = x.rows();
    let mut term = GMatrix::identity(n);
    let mut sum = term.clone();
    let mut quiet = 0;
    for k in 1..60 {
        term = term.try_mul(&b)?.scale(1.0 / k as f64);
        if term.max_abs() == 0.0 {
            break;
        }
        sum = sum.try_add(&term)?;
        // Soul terms can vanish for a few orders before the series settles.
        if term.max_abs() < 1e-18 * sum.max_abs().max(1.0) {
            quiet += 1;
            if quiet > 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    for _ in 0..squarings {
        sum = sum.try_mul(&sum)?;
    }
    Ok(sum)
}

/// Exponential of an algebra element; the degree must make the entries even.
pub fn mexp(x: &MatrixAlgebraElement) -> Result<MatrixGroupElement> {
    if !x.entries.is_even() {
        return Err(Error::Precondition("exponential needs even entries".into()));
    }
    Ok(MatrixGroupElement {
        entries: exp_matrix(&x.entries)?,
        group: x.group.clone(),
    })
}

/// Principal logarithm of a graded matrix whose body is within spectral
/// distance 1 of the identity.
pub fn log_matrix(g: &GMatrix) -> Result<GMatrix> {
    check_square(g, "logarithm")?;
    let n = g.rows();
    let id = RMatrix::identity(n, n);
    let dist = (g.body() - &id).singular_values().max();
    if !(dist < 1.0) {
        return Err(Error::Domain(format!(
            "logarithm outside its chart (distance {dist:.3})"
        )));
    }
    let mut y = g.clone();
    let mut roots = 0;
    while norm1(&(y.body() - &id)) > 0.2 && roots < 20 {
        y = sqrt_matrix(&y)?;
        roots += 1;
    }
    let z = y.try_sub(&GMatrix::identity(n))?;
    let mut power = GMatrix::identity(n);
    let mut sum = GMatrix::zeros(n, n);
    for k in 1..80 {
        power = power.try_mul(&z)?;
        let m = power.max_abs();
        if m == 0.0 {
            break;
        }
        let c = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
        sum = sum.try_add(&power.scale(c))?;
        if m < 1e-18 {
            break;
        }
    }
    Ok(sum.scale(2f64.powi(roots)))
}

/// Denman–Beavers square root.
fn sqrt_matrix(a: &GMatrix) -> Result<GMatrix> {
    let n = a.rows();
    let mut y = a.clone();
    let mut z = GMatrix::identity(n);
    for _ in 0..60 {
        let yi = y.inverse()?;
        let zi = z.inverse()?;
        let y_next = y.try_add(&zi)?.scale(0.5);
        let z_next = z.try_add(&yi)?.scale(0.5);
        let change = max_diff(&y_next, &y);
        y = y_next;
        z = z_next;
        if change < 1e-15 * y.max_abs().max(1.0) {
            return Ok(y);
        }
    }
    Ok(y)
}

pub fn mlog(g: &MatrixGroupElement) -> Result<MatrixAlgebraElement> {
    Ok(MatrixAlgebraElement {
        entries: log_matrix(&g.entries)?,
        group: g.group.clone(),
        degree: 0,
    })
}

/// `g X g⁻¹`.
pub fn adjoint_matrix(g: &GMatrix, x: &GMatrix) -> Result<GMatrix> {
    g.try_mul(x)?.try_mul(&g.inverse()?)
}

pub fn adjoint_group(
    g: &MatrixGroupElement,
    x: &MatrixAlgebraElement,
) -> Result<MatrixAlgebraElement> {
    if g.group != x.group {
        return Err(Error::Mismatch(format!(
            "{} acting on the algebra of {}",
            g.group, x.group
        )));
    }
    Ok(MatrixAlgebraElement {
        entries: adjoint_matrix(&g.entries, &x.entries)?,
        group: x.group.clone(),
        degree: x.degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_coeff::{GeneratorSpec, GradedAlgebra, GradedScalar, Origin};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn taylor(x: &RMatrix, terms: usize) -> RMatrix {
        let n = x.nrows();
        let mut t = RMatrix::identity(n, n);
        let mut s = t.clone();
        for k in 1..terms {
            t = &t * x / k as f64;
            s += &t;
        }
        s
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = MatrixAlgebraElement::zero(GroupKind::SpecialOrthogonal(3), 0);
        assert_eq!(mexp(&z).unwrap().entries().body(), RMatrix::identity(3, 3));
    }

    #[test]
    fn exp_matches_taylor() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = GroupKind::SpecialOrthogonal(3);
        for _ in 0..20 {
            let x = g.random_algebra(&mut rng);
            let e = real_exp(&x);
            assert!((e - taylor(&x, 20)).amax() < 1e-10);
        }
    }

    #[test]
    fn exp_of_odd_line_truncates() {
        let alg =
            GradedAlgebra::new(vec![GeneratorSpec::new("abar", 1, Origin::Internal)]).unwrap();
        let a = GradedScalar::generator(&alg, 0);
        let l = RMatrix::from_row_slice(2, 2, &[0.5, -1.0, 2.0, 0.25]);
        let x = GMatrix::scaled_real(&a, &l);
        let e = exp_matrix(&x).unwrap();
        let expect = &GMatrix::identity(2) + &x;
        assert_eq!(max_diff(&e, &expect), 0.0);
        let back = log_matrix(&expect).unwrap();
        assert_eq!(max_diff(&back, &x), 0.0);
    }

    #[test]
    fn log_inverts_exp() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = GroupKind::GeneralLinear(3);
        for _ in 0..20 {
            let x = g.random_algebra(&mut rng) * 0.4;
            let e = GMatrix::from_real(&real_exp(&x));
            let l = log_matrix(&e).unwrap();
            assert!((l.body() - &x).amax() < 1e-9);
        }
        assert!(log_matrix(&GMatrix::identity(3)).unwrap().max_abs() < 1e-15);
        let far = GMatrix::from_real(&RMatrix::from_diagonal_element(2, 2, 3.0));
        assert!(matches!(log_matrix(&far), Err(Error::Domain(_))));
    }

    #[test]
    fn graded_exp_inverse() {
        let alg = GradedAlgebra::new(vec![
            GeneratorSpec::new("s", 1, Origin::Auxiliary),
            GeneratorSpec::new("t", 1, Origin::Auxiliary),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = GroupKind::SpecialOrthogonal(3);
        let st = GradedScalar::word(&alg, &[0, 1], 1.0);
        let x = &GMatrix::from_real(&g.random_algebra(&mut rng))
            + &GMatrix::scaled_real(&st, &g.random_algebra(&mut rng));
        let e = exp_matrix(&x).unwrap();
        let ei = exp_matrix(&-&x).unwrap();
        assert!(max_diff(&(&e * &ei), &GMatrix::identity(3)) < 1e-12);
        let back = log_matrix(&exp_matrix(&x.scale(0.3)).unwrap()).unwrap();
        assert!(max_diff(&back, &x.scale(0.3)) < 1e-9);
    }

    #[test]
    fn adjoint_is_exp_of_ad() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = GroupKind::SpecialOrthogonal(3);
        for _ in 0..10 {
            let y = g.random_algebra(&mut rng) * 0.5;
            let x = g.random_algebra(&mut rng);
            let lhs = adjoint_matrix(&GMatrix::from_real(&real_exp(&y)), &GMatrix::from_real(&x))
                .unwrap();
            let mut term = x.clone();
            let mut sum = x.clone();
            for k in 1..30 {
                term = (&y * &term - &term * &y) / k as f64;
                sum += &term;
            }
            assert!((lhs.body() - sum).amax() < 1e-8);
        }
    }

    #[test]
    fn membership_is_enforced() {
        let bad = RMatrix::from_diagonal_element(3, 3, 2.0);
        assert!(MatrixGroupElement::from_real(&bad, GroupKind::SpecialOrthogonal(3)).is_err());
        assert!(MatrixAlgebraElement::from_real(&bad, GroupKind::SpecialOrthogonal(3)).is_err());
        assert!(MatrixGroupElement::from_real(&bad, GroupKind::GeneralLinear(3)).is_ok());
    }
}
