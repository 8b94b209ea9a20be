//! Finite Grassmann algebras over the reals with ℤ-graded generators.
//!
//! A [`GradedAlgebra`] fixes an ordered list of generators. Generators of odd
//! degree anticommute and square to zero; generators of even degree commute.
//! A [`GradedScalar`] is a finite sum of monomials with real coefficients, kept
//! in canonical form: generators sorted by their index in the algebra, odd
//! generators at most once, no zero coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock};

use crate::error::{Error, Result};

/// Hard upper bound on generators per algebra, set by the monomial packing.
pub const MAX_GENERATORS: usize = 32;
/// Default per-instance generator cap.
pub const DEFAULT_CAP: usize = 8;
const MAX_EXPONENT: u8 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Internal,
    Form,
    Auxiliary,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i32,
    pub origin: Origin,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: i32, origin: Origin) -> Self {
        Self {
            name: name.into(),
            degree,
            origin,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    gens: Vec<GeneratorSpec>,
    cap: usize,
    odd_mask: u32,
}

static REAL: LazyLock<Arc<GradedAlgebra>> = LazyLock::new(|| {
    Arc::new(GradedAlgebra {
        gens: Vec::new(),
        cap: DEFAULT_CAP,
        odd_mask: 0,
    })
});

impl GradedAlgebra {
    pub fn new(gens: Vec<GeneratorSpec>) -> Result<Arc<Self>> {
        Self::with_cap(gens, DEFAULT_CAP)
    }

    pub fn with_cap(gens: Vec<GeneratorSpec>, cap: usize) -> Result<Arc<Self>> {
        if cap > MAX_GENERATORS {
            return Err(Error::Config(format!(
                "generator cap {cap} exceeds {MAX_GENERATORS}"
            )));
        }
        if gens.len() > cap {
            return Err(Error::Config(format!(
                "{} generators exceed the cap of {cap}",
                gens.len()
            )));
        }
        for (i, g) in gens.iter().enumerate() {
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Config(format!(
                    "duplicate generator name {}",
                    g.name
                )));
            }
        }
        let odd_mask = gens
            .iter()
            .enumerate()
            .filter(|(_, g)| g.is_odd())
            .fold(0u32, |m, (i, _)| m | (1 << i));
        Ok(Arc::new(Self {
            gens,
            cap,
            odd_mask,
        }))
    }

    /// The algebra with no generators; its scalars are plain reals and combine
    /// with scalars of any other algebra.
    pub fn real() -> Arc<Self> {
        REAL.clone()
    }

    /// A copy with `extra` appended after the existing generators.
    pub fn extended(&self, extra: Vec<GeneratorSpec>) -> Result<Arc<Self>> {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        let cap = self.cap.max(gens_len_cap(gens.len()));
        Self::with_cap(gens, cap)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &GeneratorSpec {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.odd_mask >> i & 1 == 1
    }

    pub fn odd_mask(&self) -> u32 {
        self.odd_mask
    }

    pub fn monomial_degree(&self, m: Monomial) -> i32 {
        m.factors()
            .map(|(i, e)| self.gens[i].degree * e as i32)
            .sum()
    }

    pub fn monomial_is_odd(&self, m: Monomial) -> bool {
        self.monomial_degree(m).rem_euclid(2) == 1
    }

    /// Product of two canonical monomials: `None` when an odd generator repeats,
    /// otherwise the canonical product and whether the Koszul sign is negative.
    pub fn monomial_mul(&self, a: Monomial, b: Monomial) -> Option<(Monomial, bool)> {
        let oa = a.support() & self.odd_mask;
        let ob = b.support() & self.odd_mask;
        if oa & ob != 0 {
            return None;
        }
        let mut parity = 0u32;
        let mut rest = ob;
        while rest != 0 {
            let j = rest.trailing_zeros();
            parity ^= (oa.checked_shr(j + 1).unwrap_or(0)).count_ones() & 1;
            rest &= rest - 1;
        }
        let mut out = a;
        for (i, e) in b.factors() {
            let total = out.exponent(i) + e;
            assert!(
                total <= MAX_EXPONENT,
                "exponent overflow for generator {}",
                self.gens[i].name
            );
            out = out.with_exponent(i, total);
        }
        Some((out, parity == 1))
    }

    /// Canonical monomial of an ordered word of generator indices, with the sign
    /// picked up by reordering; `None` if the word vanishes.
    pub fn word(&self, word: &[usize]) -> Option<(Monomial, bool)> {
        let mut acc = (Monomial::ONE, false);
        for &g in word {
            let (m, s) = self.monomial_mul(acc.0, Monomial::generator(g))?;
            acc = (m, acc.1 ^ s);
        }
        Some(acc)
    }

    pub fn format_monomial(&self, m: Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.factors()
            .map(|(i, e)| {
                if e == 1 {
                    self.gens[i].name.clone()
                } else {
                    format!("{}^{}", self.gens[i].name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("")
    }
}

fn gens_len_cap(n: usize) -> usize {
    n.min(MAX_GENERATORS)
}

/// Exponent vector packed four bits per generator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn generator(i: usize) -> Self {
        Monomial(1u128 << (4 * i))
    }

    pub fn exponent(self, i: usize) -> u8 {
        ((self.0 >> (4 * i)) & 0xf) as u8
    }

    fn with_exponent(self, i: usize, e: u8) -> Self {
        let cleared = self.0 & !(0xfu128 << (4 * i));
        Monomial(cleared | ((e as u128) << (4 * i)))
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.exponent(i) > 0
    }

    /// Bit `i` set iff generator `i` occurs.
    pub fn support(self) -> u32 {
        let mut mask = 0u32;
        let mut v = self.0;
        let mut i = 0;
        while v != 0 {
            if v & 0xf != 0 {
                mask |= 1 << i;
            }
            v >>= 4;
            i += 1;
        }
        mask
    }

    pub fn factors(self) -> impl Iterator<Item = (usize, u8)> {
        (0..MAX_GENERATORS)
            .map(move |i| (i, self.exponent(i)))
            .filter(|&(_, e)| e > 0)
    }

    pub fn total_power(self) -> u32 {
        self.factors().map(|(_, e)| e as u32).sum()
    }

    fn without(self, i: usize) -> Self {
        self.with_exponent(i, self.exponent(i) - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Homogeneous(i32),
    Inhomogeneous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
}

#[derive(Clone, Debug)]
pub struct GradedScalar {
    alg: Arc<GradedAlgebra>,
    terms: Vec<(Monomial, f64)>,
}

impl PartialEq for GradedScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.terms.is_empty() && other.terms.is_empty() {
            return true;
        }
        common_algebra(self, other).is_ok() && self.terms == other.terms
    }
}

/// The algebra two scalars combine in. Generator-free scalars adopt the other
/// operand's algebra.
fn common_algebra(x: &GradedScalar, y: &GradedScalar) -> Result<Arc<GradedAlgebra>> {
    let (a, b) = (&x.alg, &y.alg);
    if Arc::ptr_eq(a, b) || b.is_empty() {
        Ok(a.clone())
    } else if a.is_empty() || **a == **b {
        Ok(b.clone())
    } else if y.is_real() {
        Ok(a.clone())
    } else if x.is_real() {
        Ok(b.clone())
    } else {
        Err(Error::Config(
            "scalars belong to different generator sets".into(),
        ))
    }
}

impl GradedScalar {
    pub fn zero(alg: &Arc<GradedAlgebra>) -> Self {
        Self {
            alg: alg.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(alg: &Arc<GradedAlgebra>, c: f64) -> Self {
        Self::from_terms(alg, [(Monomial::ONE, c)])
    }

    pub fn real(c: f64) -> Self {
        Self::constant(&GradedAlgebra::real(), c)
    }

    pub fn generator(alg: &Arc<GradedAlgebra>, i: usize) -> Self {
        assert!(i < alg.len(), "generator index {i} out of range");
        Self::from_terms(alg, [(Monomial::generator(i), 1.0)])
    }

    pub fn named(alg: &Arc<GradedAlgebra>, name: &str) -> Result<Self> {
        let i = alg
            .index_of(name)
            .ok_or_else(|| Error::Config(format!("unknown generator {name}")))?;
        Ok(Self::generator(alg, i))
    }

    /// Product of generators in the given order times `c`.
    pub fn word(alg: &Arc<GradedAlgebra>, word: &[usize], c: f64) -> Self {
        match alg.word(word) {
            Some((m, neg)) => Self::from_terms(alg, [(m, if neg { -c } else { c })]),
            None => Self::zero(alg),
        }
    }

    /// Canonicalizes arbitrary (monomial, coefficient) pairs. Monomials must
    /// already be squarefree in odd generators.
    pub fn from_terms(
        alg: &Arc<GradedAlgebra>,
        terms: impl IntoIterator<Item = (Monomial, f64)>,
    ) -> Self {
        let mut v: Vec<(Monomial, f64)> = terms.into_iter().collect();
        for (m, _) in &v {
            debug_assert!(m
                .factors()
                .all(|(i, e)| i < alg.len() && (e == 1 || !alg.is_odd(i))));
        }
        canonicalize(&mut v);
        Self {
            alg: alg.clone(),
            terms: v,
        }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> &[(Monomial, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn body(&self) -> f64 {
        self.extract_coefficient(Monomial::ONE)
    }

    pub fn soul(&self) -> Self {
        Self {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|(m, _)| !m.is_one())
                .collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// True when every monomial has even total degree.
    pub fn is_even(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| !self.alg.monomial_is_odd(*m))
    }

    pub fn is_odd(&self) -> bool {
        self.terms.iter().all(|(m, _)| self.alg.monomial_is_odd(*m))
    }

    pub fn arithmetic(&self, other: &Self, op: ArithOp) -> Result<Self> {
        match op {
            ArithOp::Add => self.try_add(other),
            ArithOp::Mul => self.try_mul(other),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let alg = common_algebra(self, other)?;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (self.terms[i], other.terms[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a.1 + b.1;
                    if c != 0.0 {
                        out.push((a.0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(Self { alg, terms: out })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1.0))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let alg = common_algebra(self, other)?;
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(Self::zero(&alg));
        }
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                if let Some((m, neg)) = alg.monomial_mul(ma, mb) {
                    let c = ca * cb;
                    out.push((m, if neg { -c } else { c }));
                }
            }
        }
        canonicalize(&mut out);
        Ok(Self { alg, terms: out })
    }

    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero(&self.alg);
        }
        Self {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|&(m, x)| (m, x * c)).collect(),
        }
    }

    /// Coefficient of a canonical monomial, 0 if absent.
    pub fn extract_coefficient(&self, m: Monomial) -> f64 {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(&m))
            .map(|i| self.terms[i].1)
            .unwrap_or(0.0)
    }

    /// Coefficient with respect to an ordered word of generators, so that the
    /// scalar contains `coefficient · word`.
    pub fn coefficient_of_word(&self, word: &[usize]) -> f64 {
        match self.alg.word(word) {
            Some((m, neg)) => {
                let c = self.extract_coefficient(m);
                if neg {
                    -c
                } else {
                    c
                }
            }
            None => 0.0,
        }
    }

    pub fn degree_of(&self) -> Degree {
        let mut degs = self.terms.iter().map(|(m, _)| self.alg.monomial_degree(*m));
        match degs.next() {
            None => Degree::Homogeneous(0),
            Some(d) => {
                if degs.all(|e| e == d) {
                    Degree::Homogeneous(d)
                } else {
                    Degree::Inhomogeneous
                }
            }
        }
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, p: i32) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| self.alg.monomial_degree(*m) == p)
    }

    /// The unique `c` with `self = rest + g·c` where `rest` does not contain the
    /// generator `g` to the first power from the left.
    pub fn left_factor(&self, g: usize) -> Self {
        let before = if g == 0 {
            0
        } else {
            self.alg.odd_mask & ((1u32 << g) - 1)
        };
        let odd_g = self.alg.is_odd(g);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.contains(g))
            .map(|&(m, c)| {
                let flip = odd_g && (m.support() & before).count_ones() % 2 == 1;
                (m.without(g), if flip { -c } else { c })
            });
        Self::from_terms(&self.alg, terms)
    }

    /// Left derivative with respect to generator `g`: for odd `g` this equals
    /// [`left_factor`](Self::left_factor); for even `g` it multiplies by the
    /// exponent.
    pub fn left_derivative(&self, g: usize) -> Self {
        if self.alg.is_odd(g) {
            return self.left_factor(g);
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.contains(g))
            .map(|&(m, c)| (m.without(g), c * m.exponent(g) as f64));
        Self::from_terms(&self.alg, terms)
    }

    /// Drops every term containing a generator in `mask`, i.e. sets those
    /// generators to zero.
    pub fn drop_generators(&self, mask: u32) -> Self {
        Self {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|(m, _)| m.support() & mask == 0)
                .collect(),
        }
    }

    /// Keeps only terms whose monomials lie in the span of `mask`.
    pub fn restrict_to(&self, mask: u32) -> Self {
        Self {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|(m, _)| m.support() & !mask == 0)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().fold(0.0, |a, (_, c)| a.max(c.abs()))
    }

    /// Re-expresses the scalar in `target`, matching generators by name.
    pub fn embed_into(&self, target: &Arc<GradedAlgebra>) -> Result<Self> {
        if Arc::ptr_eq(&self.alg, target) || self.is_real() {
            return Ok(Self::from_terms(target, self.terms.iter().copied()));
        }
        let map: Vec<Option<usize>> = self
            .alg
            .gens
            .iter()
            .map(|g| {
                target
                    .index_of(&g.name)
                    .filter(|&j| target.gens[j].degree == g.degree)
            })
            .collect();
        let mut out = Self::zero(target);
        for &(m, c) in &self.terms {
            let mut word = Vec::new();
            for (i, e) in m.factors() {
                let j = map[i].ok_or_else(|| {
                    Error::Config(format!(
                        "generator {} missing from target",
                        self.alg.gens[i].name
                    ))
                })?;
                word.extend(std::iter::repeat(j).take(e as usize));
            }
            out = out.try_add(&Self::word(target, &word, c))?;
        }
        Ok(out)
    }

    /// Evaluates an analytic function at the scalar from the Taylor data
    /// `coeff(k) = f^(k)(body) / k!`; the series terminates because the soul is
    /// nilpotent.
    pub fn analytic(&self, coeff: impl Fn(usize) -> f64) -> Result<Self> {
        let soul = self.soul();
        let mut out = Self::constant(&self.alg, coeff(0));
        let mut power = Self::constant(&self.alg, 1.0);
        for k in 1.. {
            power = power.try_mul(&soul)?;
            if power.is_zero() {
                return Ok(out);
            }
            if k > 4 * MAX_GENERATORS {
                return Err(Error::Domain("soul is not nilpotent".into()));
            }
            out = out.try_add(&power.scale(coeff(k)))?;
        }
        unreachable!()
    }

    pub fn recip(&self) -> Result<Self> {
        let b = self.body();
        if b == 0.0 {
            return Err(Error::Domain(
                "reciprocal of a scalar with zero body".into(),
            ));
        }
        self.analytic(|k| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s * b.powi(-(k as i32) - 1)
        })
    }

    pub fn sqrt(&self) -> Result<Self> {
        let b = self.body();
        if b <= 0.0 {
            return Err(Error::Domain(
                "square root of a scalar with non-positive body".into(),
            ));
        }
        self.analytic(|k| {
            let mut binom = 1.0;
            for i in 0..k {
                binom *= (0.5 - i as f64) / (i as f64 + 1.0);
            }
            binom * b.powf(0.5 - k as f64)
        })
    }
}

fn canonicalize(v: &mut Vec<(Monomial, f64)>) {
    v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Monomial, f64)> = Vec::with_capacity(v.len());
    for &(m, c) in v.iter() {
        match out.last_mut() {
            Some(last) if last.0 == m => last.1 += c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|&(_, c)| c != 0.0);
    *v = out;
}

impl fmt::Display for GradedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            let sep = match (k, c < 0.0) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            if m.is_one() {
                write!(f, "{sep}{}", c.abs())?;
            } else {
                write!(f, "{sep}{}·{}", c.abs(), self.alg.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl From<f64> for GradedScalar {
    fn from(c: f64) -> Self {
        Self::real(c)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr<&GradedScalar> for &GradedScalar {
            type Output = GradedScalar;
            fn $method(self, rhs: &GradedScalar) -> GradedScalar {
                self.$call(rhs).expect("incompatible generator sets")
            }
        }
        impl $tr<GradedScalar> for GradedScalar {
            type Output = GradedScalar;
            fn $method(self, rhs: GradedScalar) -> GradedScalar {
                (&self).$call(&rhs).expect("incompatible generator sets")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Mul<f64> for &GradedScalar {
    type Output = GradedScalar;
    fn mul(self, c: f64) -> GradedScalar {
        self.scale(c)
    }
}

impl Neg for &GradedScalar {
    type Output = GradedScalar;
    fn neg(self) -> GradedScalar {
        self.scale(-1.0)
    }
}

impl Neg for GradedScalar {
    type Output = GradedScalar;
    fn neg(self) -> GradedScalar {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd_pair() -> Arc<GradedAlgebra> {
        GradedAlgebra::new(vec![
            GeneratorSpec::new("y1", 1, Origin::Internal),
            GeneratorSpec::new("y2", 1, Origin::Internal),
        ])
        .unwrap()
    }

    #[test]
    fn odd_generators_anticommute() {
        let alg = odd_pair();
        let y1 = GradedScalar::generator(&alg, 0);
        let y2 = GradedScalar::generator(&alg, 1);
        let p = &y1 * &y2;
        let q = &y2 * &y1;
        assert_eq!(p.coefficient_of_word(&[0, 1]), 1.0);
        assert_eq!((&p + &q), GradedScalar::zero(&alg));
        assert!((&y1 * &y1).is_zero());
    }

    #[test]
    fn distributes_through_nilpotent_terms() {
        // (c + y1 y2) y1 = c y1 because y1 y2 y1 = -y1 y1 y2 = 0.
        let alg = odd_pair();
        let c = 2.5;
        let y1 = GradedScalar::generator(&alg, 0);
        let y2 = GradedScalar::generator(&alg, 1);
        let lhs = &(&GradedScalar::constant(&alg, c) + &(&y1 * &y2)) * &y1;
        assert_eq!(lhs, y1.scale(c));
    }

    #[test]
    fn extraction_reads_reordered_words() {
        let alg =
            GradedAlgebra::new(vec![GeneratorSpec::new("abar", 1, Origin::Auxiliary)]).unwrap();
        let a = &GradedScalar::constant(&alg, 3.0) + &GradedScalar::generator(&alg, 0).scale(2.0);
        assert_eq!(a.extract_coefficient(Monomial::generator(0)), 2.0);
        assert_eq!(a.extract_coefficient(Monomial::ONE), 3.0);
        let pair = odd_pair();
        let y1y2 = GradedScalar::word(&pair, &[0, 1], 1.0);
        assert_eq!(y1y2.coefficient_of_word(&[1, 0]), -1.0);
    }

    #[test]
    fn degrees() {
        let alg =
            GradedAlgebra::new(vec![GeneratorSpec::new("abar", 1, Origin::Auxiliary)]).unwrap();
        let abar = GradedScalar::generator(&alg, 0);
        assert_eq!(abar.degree_of(), Degree::Homogeneous(1));
        assert_eq!(GradedScalar::real(5.0).degree_of(), Degree::Homogeneous(0));
        let mixed = &GradedScalar::constant(&alg, 1.0) + &abar;
        assert_eq!(mixed.degree_of(), Degree::Inhomogeneous);
    }

    #[test]
    fn mismatched_sets_are_rejected() {
        let a = GradedScalar::generator(&odd_pair(), 0);
        let other = GradedAlgebra::new(vec![GeneratorSpec::new("z", 2, Origin::Form)]).unwrap();
        let b = GradedScalar::generator(&other, 0);
        assert!(matches!(
            a.arithmetic(&b, ArithOp::Mul),
            Err(Error::Config(_))
        ));
        assert!(a.try_add(&GradedScalar::real(1.0)).is_ok());
    }

    #[test]
    fn even_generators_commute_and_take_powers() {
        let alg = GradedAlgebra::new(vec![
            GeneratorSpec::new("u", 2, Origin::Internal),
            GeneratorSpec::new("y", 1, Origin::Internal),
        ])
        .unwrap();
        let u = GradedScalar::generator(&alg, 0);
        let y = GradedScalar::generator(&alg, 1);
        assert_eq!(&u * &y, &y * &u);
        let u2 = &u * &u;
        assert_eq!(u2.degree_of(), Degree::Homogeneous(4));
        assert_eq!(u2.left_derivative(0), u.scale(2.0));
    }

    #[test]
    fn left_factor_tracks_sign() {
        let alg = odd_pair();
        // y1 y2 = -(y2 y1): the left factor of y2 is -y1.
        let y1y2 = GradedScalar::word(&alg, &[0, 1], 1.0);
        assert_eq!(
            y1y2.left_factor(1),
            GradedScalar::generator(&alg, 0).scale(-1.0)
        );
        assert_eq!(y1y2.left_factor(0), GradedScalar::generator(&alg, 1));
    }

    #[test]
    fn analytic_functions_truncate() {
        let alg = odd_pair();
        let x = &GradedScalar::constant(&alg, 4.0) + &GradedScalar::word(&alg, &[0, 1], 1.0);
        let r = x.sqrt().unwrap();
        assert!((&(&r * &r) - &x).max_abs() < 1e-15);
        let inv = x.recip().unwrap();
        assert!((&(&inv * &x) - &GradedScalar::constant(&alg, 1.0)).max_abs() < 1e-15);
    }

    #[test]
    fn cap_is_enforced() {
        let gens = (0..9)
            .map(|i| GeneratorSpec::new(format!("g{i}"), 1, Origin::Internal))
            .collect();
        assert!(GradedAlgebra::new(gens).is_err());
    }
}
