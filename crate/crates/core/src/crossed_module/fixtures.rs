use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{
    align, identity_like, BinaryMap, DifferentiatedMaps, GroupCrossedModule, SemidirectRealization,
    UnaryMap,
};
use crate::error::{Error, Result};
use crate::graded_coeff::GradedScalar;
use crate::matrix_lie::{quaternion_left_graded, GMatrix, GroupKind};

/// The built-in crossed modules.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FixtureKind {
    /// `(G, G, id, conjugation)`.
    Conj(GroupKind),
    /// `(ℝⁿ, GL(n), 1, natural action)`.
    Lin(usize),
    /// `(SU(2), SO(3), covering map, conjugation by a lift)`.
    Cover,
}

impl Default for FixtureKind {
    fn default() -> Self {
        FixtureKind::Conj(GroupKind::SpecialOrthogonal(3))
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureKind::Conj(g) => write!(f, "CONJ({g})"),
            FixtureKind::Lin(n) => write!(f, "LIN({n})"),
            FixtureKind::Cover => write!(f, "COVER"),
        }
    }
}

impl FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        let bad = || Error::Config(format!("unknown fixture {s:?}"));
        let dim = |d: &str| -> Result<usize> {
            let n: usize = d.parse().map_err(|_| bad())?;
            if (1..=6).contains(&n) {
                Ok(n)
            } else {
                Err(Error::Config(format!(
                    "fixture dimension {n} outside 1..=6"
                )))
            }
        };
        if t == "CONJ" {
            return Ok(FixtureKind::default());
        }
        if t == "LIN" {
            return Ok(FixtureKind::Lin(3));
        }
        if t == "COVER" {
            return Ok(FixtureKind::Cover);
        }
        if let Some(inner) = t.strip_prefix("CONJ(").and_then(|r| r.strip_suffix(')')) {
            if inner == "SU2" {
                return Ok(FixtureKind::Conj(GroupKind::UnitQuaternion));
            }
            if let Some(d) = inner.strip_prefix("SO") {
                let n = dim(d)?;
                if n < 2 {
                    return Err(Error::Config("rotation fixture needs n ≥ 2".into()));
                }
                return Ok(FixtureKind::Conj(GroupKind::SpecialOrthogonal(n)));
            }
            if let Some(d) = inner.strip_prefix("GL") {
                return Ok(FixtureKind::Conj(GroupKind::GeneralLinear(dim(d)?)));
            }
            return Err(bad());
        }
        if let Some(inner) = t.strip_prefix("LIN(").and_then(|r| r.strip_suffix(')')) {
            return Ok(FixtureKind::Lin(dim(inner)?));
        }
        Err(bad())
    }
}

pub fn make_fixture(kind: &FixtureKind) -> Result<GroupCrossedModule> {
    match kind {
        FixtureKind::Conj(g) => match g {
            GroupKind::SpecialOrthogonal(n) if *n >= 2 => Ok(conj(g.clone())),
            GroupKind::GeneralLinear(n) if *n >= 1 => Ok(conj(g.clone())),
            GroupKind::UnitQuaternion => Ok(conj(g.clone())),
            _ => Err(Error::Config(format!("no conjugation fixture for {g}"))),
        },
        FixtureKind::Lin(n) if *n >= 1 => Ok(lin(*n)),
        FixtureKind::Lin(n) => Err(Error::Config(format!("LIN needs n ≥ 1, got {n}"))),
        FixtureKind::Cover => Ok(cover()),
    }
}

fn conj_action(a: &GMatrix, b: &GMatrix) -> Result<GMatrix> {
    let a = align(a, b)?;
    let b = align(b, &a)?;
    a.try_mul(&b)?.try_mul(&a.inverse()?)
}

fn bracket(x: &GMatrix, y: &GMatrix) -> Result<GMatrix> {
    let x = align(x, y)?;
    let y = align(y, &x)?;
    x.try_mul(&y)?.try_sub(&y.try_mul(&x)?)
}

fn conj(g: GroupKind) -> GroupCrossedModule {
    let n = g.size();
    let tau: UnaryMap = Arc::new(|a| Ok(a.clone()));
    let mu: BinaryMap = Arc::new(conj_action);
    let maps = DifferentiatedMaps::new(
        g.clone(),
        g.clone(),
        Arc::new(|x| Ok(x.clone())),
        Arc::new(conj_action),
        Arc::new(|x, a| x.try_sub(&conj_action(a, x)?)),
        Arc::new(bracket),
    );
    let realization = SemidirectRealization {
        size: 2 * n,
        embed_group: Arc::new(move |big, a| {
            let top = align(big, a)?.try_mul(&align(a, big)?)?;
            Ok(GMatrix::block_diag(&[&top, a]))
        }),
        split_group: Arc::new(move |m| {
            let a = m.submatrix(n, n, n, n);
            let big = m.submatrix(0, 0, n, n).try_mul(&a.inverse()?)?;
            Ok((big, a))
        }),
        embed_algebra: Arc::new(move |big, x| {
            let top = align(big, x)?.try_add(&align(x, big)?)?;
            Ok(GMatrix::block_diag(&[&top, x]))
        }),
        split_algebra: Arc::new(move |m| {
            let x = m.submatrix(n, n, n, n);
            let big = m.submatrix(0, 0, n, n).try_sub(&x)?;
            Ok((big, x))
        }),
    };
    GroupCrossedModule::new(format!("CONJ({g})"), g.clone(), g, tau, mu)
        .with_exact_maps(maps)
        .with_realization(realization)
}

/// `diag(a, c)` with `c` the identity (group) or zero (algebra) in the last slot.
fn pad(a: &GMatrix, corner: f64) -> GMatrix {
    let n = a.rows();
    let mut out = GMatrix::zeros(n + 1, n + 1);
    out.set_block(0, 0, a);
    out.set(n, n, GradedScalar::real(corner));
    out
}

fn lin(n: usize) -> GroupCrossedModule {
    let e = GroupKind::Translation(n);
    let g = GroupKind::GeneralLinear(n);
    let action = |a: &GMatrix, big: &GMatrix| -> Result<GMatrix> {
        let p = pad(&align(a, big)?, 1.0);
        p.try_mul(&align(big, a)?)?.try_mul(&p.inverse()?)
    };
    let tau: UnaryMap = Arc::new(move |big| identity_like(n, big));
    let mu: BinaryMap = Arc::new(action);
    let maps = DifferentiatedMaps::new(
        e.clone(),
        g.clone(),
        Arc::new(move |_| Ok(GMatrix::zeros(n, n))),
        Arc::new(action),
        Arc::new(move |x, big| {
            let shift = align(big, x)?.try_sub(&identity_like(n + 1, big)?)?;
            pad(&align(x, big)?, 0.0).try_mul(&shift)
        }),
        Arc::new(move |x, big_x| bracket(&pad(x, 0.0), big_x)),
    );
    let realization = SemidirectRealization {
        size: n + 1,
        embed_group: Arc::new(|big, a| align(big, a)?.try_mul(&pad(&align(a, big)?, 1.0))),
        split_group: Arc::new(move |m| {
            let a = m.submatrix(0, 0, n, n);
            let big = m.try_mul(&pad(&a, 1.0).inverse()?)?;
            Ok((big, a))
        }),
        embed_algebra: Arc::new(|big, x| align(big, x)?.try_add(&pad(&align(x, big)?, 0.0))),
        split_algebra: Arc::new(move |m| {
            let x = m.submatrix(0, 0, n, n);
            let big = m.try_sub(&pad(&x, 0.0))?;
            Ok((big, x))
        }),
    };
    GroupCrossedModule::new(format!("LIN({n})"), e, g, tau, mu)
        .with_exact_maps(maps)
        .with_realization(realization)
}

/// Quaternion read off the first column of a left-multiplication matrix.
pub(crate) fn quaternion_of(m: &GMatrix) -> [GradedScalar; 4] {
    std::array::from_fn(|i| m.get(i, 0).clone())
}

fn mul(a: &GradedScalar, b: &GradedScalar) -> Result<GradedScalar> {
    a.try_mul(b)
}

/// The rotation `v ↦ q v q̄` of a quaternion given by its left-multiplication
/// matrix; polynomial in the entries, so graded inputs are fine.
pub fn rotation_of_quaternion(m: &GMatrix) -> Result<GMatrix> {
    let [w, x, y, z] = quaternion_of(m);
    let two = |s: GradedScalar| s.scale(2.0);
    let one = GradedScalar::real(1.0);
    let (xx, yy, zz) = (mul(&x, &x)?, mul(&y, &y)?, mul(&z, &z)?);
    let (xy, xz, yz) = (mul(&x, &y)?, mul(&x, &z)?, mul(&y, &z)?);
    let (wx, wy, wz) = (mul(&w, &x)?, mul(&w, &y)?, mul(&w, &z)?);
    let rows = [
        [
            one.try_sub(&two(yy.try_add(&zz)?))?,
            two(xy.try_sub(&wz)?),
            two(xz.try_add(&wy)?),
        ],
        [
            two(xy.try_add(&wz)?),
            one.try_sub(&two(xx.try_add(&zz)?))?,
            two(yz.try_sub(&wx)?),
        ],
        [
            two(xz.try_sub(&wy)?),
            two(yz.try_add(&wx)?),
            one.try_sub(&two(xx.try_add(&yy)?))?,
        ],
    ];
    Ok(GMatrix::from_fn(3, 3, |i, j| rows[i][j].clone()))
}

/// The unit quaternion with nonnegative scalar part over a rotation, as a
/// left-multiplication matrix. Needs rotation angle below π.
pub fn lift_rotation(r: &GMatrix) -> Result<GMatrix> {
    let tr = r.trace();
    let w = tr.try_add(&GradedScalar::real(1.0))?.sqrt()?.scale(0.5);
    let inv4w = w.scale(4.0).recip()?;
    let d = |i: usize, j: usize| r.get(i, j).try_sub(r.get(j, i));
    let x = d(2, 1)?.try_mul(&inv4w)?;
    let y = d(0, 2)?.try_mul(&inv4w)?;
    let z = d(1, 0)?.try_mul(&inv4w)?;
    Ok(quaternion_left_graded(&[w, x, y, z]))
}

/// Vector `(v₁, v₂, v₃)` of a pure quaternion stored in a 4×4 matrix.
fn pure_part(m: &GMatrix) -> [GradedScalar; 3] {
    std::array::from_fn(|i| m.get(i + 1, 0).clone())
}

fn pure_quaternion(v: &[GradedScalar; 3]) -> GMatrix {
    quaternion_left_graded(&[
        GradedScalar::real(0.0),
        v[0].clone(),
        v[1].clone(),
        v[2].clone(),
    ])
}

fn hat(v: &[GradedScalar; 3]) -> GMatrix {
    let z = GradedScalar::real(0.0);
    let rows = [
        [z.clone(), -&v[2], v[1].clone()],
        [v[2].clone(), z.clone(), -&v[0]],
        [-&v[1], v[0].clone(), z],
    ];
    GMatrix::from_fn(3, 3, |i, j| rows[i][j].clone())
}

fn vee(x: &GMatrix) -> [GradedScalar; 3] {
    [
        x.get(2, 1).clone(),
        x.get(0, 2).clone(),
        x.get(1, 0).clone(),
    ]
}

fn mat_vec(r: &GMatrix, v: &[GradedScalar; 3]) -> Result<[GradedScalar; 3]> {
    let mut out: [GradedScalar; 3] = std::array::from_fn(|_| GradedScalar::real(0.0));
    for (i, o) in out.iter_mut().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            *o = o.try_add(&r.get(i, j).try_mul(vj)?)?;
        }
    }
    Ok(out)
}

fn cross(a: &[GradedScalar; 3], b: &[GradedScalar; 3]) -> Result<[GradedScalar; 3]> {
    let c = |i: usize, j: usize| -> Result<GradedScalar> {
        a[i].try_mul(&b[j])?.try_sub(&a[j].try_mul(&b[i])?)
    };
    Ok([c(1, 2)?, c(2, 0)?, c(0, 1)?])
}

fn cover() -> GroupCrossedModule {
    let e = GroupKind::UnitQuaternion;
    let g = GroupKind::SpecialOrthogonal(3);
    let action = |r: &GMatrix, big: &GMatrix| -> Result<GMatrix> {
        let q = align(&lift_rotation(r)?, big)?;
        q.try_mul(&align(big, &q)?)?.try_mul(&q.inverse()?)
    };
    let tau: UnaryMap = Arc::new(rotation_of_quaternion);
    let mu: BinaryMap = Arc::new(action);
    let maps = DifferentiatedMaps::new(
        e.clone(),
        g.clone(),
        Arc::new(|x| Ok(hat(&pure_part(x)).scale(2.0))),
        Arc::new(|r, x| Ok(pure_quaternion(&mat_vec(r, &pure_part(x))?))),
        Arc::new(|x, big| {
            let w = pure_quaternion(&vee(x));
            let big = align(big, &w)?;
            let w = align(&w, &big)?;
            Ok(w.try_sub(&big.try_mul(&w)?.try_mul(&big.inverse()?)?)?
                .scale(0.5))
        }),
        Arc::new(|x, big_x| Ok(pure_quaternion(&cross(&vee(x), &pure_part(big_x))?))),
    );
    let rotation_block = |r: &GMatrix| {
        let mut m = GMatrix::zeros(4, 4);
        m.set_block(1, 1, r);
        m
    };
    let realization = SemidirectRealization {
        size: 4,
        embed_group: Arc::new(move |big, r| {
            let mut block = rotation_block(r);
            block.set(0, 0, GradedScalar::real(1.0));
            align(big, &block)?.try_mul(&align(&block, big)?)
        }),
        split_group: Arc::new(|m| {
            let q = quaternion_left_graded(&quaternion_of(m));
            let rest = q.inverse()?.try_mul(m)?;
            Ok((q, rest.submatrix(1, 1, 3, 3)))
        }),
        embed_algebra: Arc::new(move |big, x| {
            align(big, x)?.try_add(&rotation_block(&align(x, big)?))
        }),
        split_algebra: Arc::new(|m| {
            let big = pure_quaternion(&pure_part(m));
            let x = m.try_sub(&big)?.submatrix(1, 1, 3, 3);
            Ok((big, x))
        }),
    };
    GroupCrossedModule::new("COVER", e, g, tau, mu)
        .with_exact_maps(maps)
        .with_realization(realization)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_lie::{max_diff, real_exp};
    use crate::sampling::stream;

    #[test]
    fn fixture_names_parse() {
        assert_eq!(
            "CONJ".parse::<FixtureKind>().unwrap(),
            FixtureKind::default()
        );
        assert_eq!(
            "conj(su2)".parse::<FixtureKind>().unwrap(),
            FixtureKind::Conj(GroupKind::UnitQuaternion)
        );
        assert_eq!(
            "CONJ(GL2)".parse::<FixtureKind>().unwrap(),
            FixtureKind::Conj(GroupKind::GeneralLinear(2))
        );
        assert_eq!(
            "LIN(4)".parse::<FixtureKind>().unwrap(),
            FixtureKind::Lin(4)
        );
        assert_eq!("COVER".parse::<FixtureKind>().unwrap(), FixtureKind::Cover);
        assert!("SPIN".parse::<FixtureKind>().is_err());
        assert!("LIN(0)".parse::<FixtureKind>().is_err());
        for k in ["CONJ(SO3)", "LIN(3)", "COVER", "CONJ(SU2)"] {
            assert_eq!(k.parse::<FixtureKind>().unwrap().to_string(), k);
        }
    }

    #[test]
    fn lift_is_a_section_and_sign_free() {
        let m = make_fixture(&FixtureKind::Cover).unwrap();
        for i in 0..50 {
            let mut rng = stream(1, "lift", i);
            let q = GMatrix::from_real(&GroupKind::UnitQuaternion.random_element(&mut rng));
            let r = rotation_of_quaternion(&q).unwrap();
            assert!(GroupKind::SpecialOrthogonal(3).group_residual(&r.body()) < 1e-12);
            let lift = lift_rotation(&r).unwrap();
            let same = max_diff(&lift, &q).min(max_diff(&lift, &q.scale(-1.0)));
            assert!(same < 1e-12);
            // Conjugating by the other lift gives the same action.
            let big = GMatrix::from_real(&GroupKind::UnitQuaternion.random_element(&mut rng));
            let neg = lift.scale(-1.0);
            let other = &(&neg * &big) * &neg.inverse().unwrap();
            assert!(max_diff(&m.mu(&r, &big).unwrap(), &other) < 1e-12);
        }
    }

    #[test]
    fn cover_tau_differential_doubles() {
        let e1 = GMatrix::from_real(GroupKind::UnitQuaternion.basis().element(0));
        let m = make_fixture(&FixtureKind::Cover).unwrap();
        let t = m.exact_maps().unwrap().tau_dot(&e1).unwrap();
        let rot = GMatrix::from_real(&real_exp(&(t.body() * 0.1)));
        let q = GMatrix::from_real(&real_exp(&(e1.body() * 0.1)));
        assert!(max_diff(&rotation_of_quaternion(&q).unwrap(), &rot) < 1e-14);
    }
}
