use rand::Rng;

use super::BundleModel;
use crate::error::{Error, Result};
use crate::matrix_lie::{real_exp, GMatrix, RMatrix};
use crate::residual::ResidualReport;
use crate::sampling::run_samples;

const MEMBERSHIP_TOL: f64 = 1e-9;

/// Object transformations act by elements of `E ⋊ G` (block realization),
/// morphism transformations by elements of `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeKind {
    Object,
    Morphism,
}

fn check_member(model: &BundleModel, m: &RMatrix, kind: GaugeKind) -> Result<()> {
    let dm = model.module();
    let residual = match kind {
        GaugeKind::Morphism => dm.g().group_residual(m),
        GaugeKind::Object => {
            let r = dm.module().realization().ok_or_else(|| {
                Error::Unsupported(format!("{} has no block realization", dm.module().name()))
            })?;
            if m.nrows() != r.size {
                f64::INFINITY
            } else {
                let (big, small) = (r.split_group)(&GMatrix::from_real(m))?;
                let rebuilt = (r.embed_group)(&big, &small)?.body();
                dm.e()
                    .group_residual(&big.body())
                    .max(dm.g().group_residual(&small.body()))
                    .max((rebuilt - m).abs().max())
            }
        }
    };
    if residual > MEMBERSHIP_TOL {
        return Err(Error::Domain(format!(
            "{kind:?} gauge element off the group by {residual:e}"
        )));
    }
    Ok(())
}

/// `A⁻¹ V(m) A`.
pub fn local_gauge(
    model: &BundleModel,
    v: &dyn Fn(&[f64]) -> Result<RMatrix>,
    m: &[f64],
    a: &RMatrix,
    kind: GaugeKind,
) -> Result<RMatrix> {
    let value = v(m)?;
    check_member(model, &value, kind)?;
    check_member(model, a, kind)?;
    let ai = a
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Domain("singular gauge element".into()))?;
    Ok(ai * value * a)
}

fn random_member<R: Rng + ?Sized>(
    model: &BundleModel,
    kind: GaugeKind,
    rng: &mut R,
) -> Result<RMatrix> {
    let dm = model.module();
    match kind {
        GaugeKind::Morphism => Ok(dm.g().random_element(rng)),
        GaugeKind::Object => {
            let r = dm.module().realization().ok_or_else(|| {
                Error::Unsupported(format!("{} has no block realization", dm.module().name()))
            })?;
            let big = GMatrix::from_real(&dm.e().random_element(rng));
            let small = GMatrix::from_real(&dm.g().random_element(rng));
            Ok((r.embed_group)(&big, &small)?.body())
        }
    }
}

/// A smooth map `m ↦ exp(Σ mₖ Xₖ) A₀` into the object or morphism group.
fn random_map<R: Rng + ?Sized>(
    model: &BundleModel,
    kind: GaugeKind,
    rng: &mut R,
) -> Result<impl Fn(&[f64]) -> Result<RMatrix>> {
    let dm = model.module().clone();
    let d = model.base_dim();
    let r = dm.module().realization().cloned();
    let es: Vec<RMatrix> = (0..d).map(|_| dm.e().random_algebra(rng)).collect();
    let gs: Vec<RMatrix> = (0..d).map(|_| dm.g().random_algebra(rng)).collect();
    let base = random_member(model, kind, rng)?;
    Ok(move |m: &[f64]| -> Result<RMatrix> {
        let small = real_exp(&gs.iter().zip(m).fold(
            RMatrix::zeros(gs[0].nrows(), gs[0].ncols()),
            |acc, (x, t)| acc + x * *t,
        ));
        let moved = match kind {
            GaugeKind::Morphism => small,
            GaugeKind::Object => {
                let r = r
                    .as_ref()
                    .ok_or_else(|| Error::Unsupported("no block realization".into()))?;
                let big = real_exp(&es.iter().zip(m).fold(
                    RMatrix::zeros(es[0].nrows(), es[0].ncols()),
                    |acc, (x, t)| acc + x * *t,
                ));
                (r.embed_group)(&GMatrix::from_real(&big), &GMatrix::from_real(&small))?.body()
            }
        };
        Ok(moved * &base)
    })
}

/// Unit, trivial-map and equivariance laws of both gauge kinds.
pub fn gauge_suite(model: &BundleModel, samples: usize, seed: u64) -> ResidualReport {
    run_samples(samples, seed, "gauge", |rng, rep| {
        let m = model.random_base_point(rng);
        for (kind, tag) in [
            (GaugeKind::Object, "object"),
            (GaugeKind::Morphism, "morphism"),
        ] {
            let v = random_map(model, kind, rng)?;
            let (a, b) = (
                random_member(model, kind, rng)?,
                random_member(model, kind, rng)?,
            );
            let n = a.nrows();
            let one = RMatrix::identity(n, n);
            let trivial = |_: &[f64]| Ok(RMatrix::identity(n, n));
            let h = local_gauge(model, &trivial, &m, &a, kind)?;
            rep.record(&format!("gauge_{tag}_trivial"), (h - &one).abs().max());
            let h1 = local_gauge(model, &v, &m, &one, kind)?;
            rep.record(&format!("gauge_{tag}_unit"), (h1 - v(&m)?).abs().max());
            let hab = local_gauge(model, &v, &m, &(&a * &b), kind)?;
            let ha = local_gauge(model, &v, &m, &a, kind)?;
            let bi = b
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Domain("singular sample".into()))?;
            rep.record(
                &format!("gauge_{tag}_equivariance"),
                (hab - bi * ha * &b).abs().max(),
            );
        }
        Ok(())
    })
}
