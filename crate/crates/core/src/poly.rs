//! Sparse multivariate polynomials over `Q` and over a number field `K`.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic; iteration from the largest key down is the canonical
//! print order. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{FieldElement, NumberField, TraceMatrix};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials are over different variable lists")]
    VariableMismatch,
    #[error("polynomials are over different number fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not rational: coefficient of {monomial} has nonzero theta^{index} coordinate")]
    NotRational { monomial: String, index: usize },
}

/// Exponent vector, one entry per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `x^2*y`, or `1` for the empty product.
    pub fn display(&self, vars: &[String]) -> String {
        let factors: Vec<String> = self
            .0
            .iter()
            .zip(vars)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient rings a [`MultiPoly`] can be built over.
///
/// `Ring` is the context needed to make a zero (the field, for `K`). The
/// arithmetic methods assume both operands live in the same ring; the
/// polynomial layer checks that once per operation.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Ring: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero_in(ring: &Self::Ring) -> Self;
    fn from_rational(ring: &Self::Ring, c: Rational) -> Self;
    fn vanishes(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
}

/// The ring `Q`; it needs no context.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Coefficient for Rational {
    type Ring = Rationals;

    fn zero_in(_: &Rationals) -> Self {
        Rational::zero()
    }
    fn from_rational(_: &Rationals, c: Rational) -> Self {
        c
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Coefficient for FieldElement {
    type Ring = NumberField;

    fn zero_in(ring: &NumberField) -> Self {
        ring.zero()
    }
    fn from_rational(ring: &NumberField, c: Rational) -> Self {
        ring.from_rational(c)
    }
    fn vanishes(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        self.add_assign_unchecked(other);
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }
    fn scale(&self, c: &Rational) -> Self {
        FieldElement::scale(self, c)
    }
}

/// A sparse polynomial in a fixed list of variables with coefficients `C`.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<C: Coefficient> {
    vars: Arc<[String]>,
    ring: C::Ring,
    terms: BTreeMap<Monomial, C>,
}

/// Polynomial over `Q`.
pub type QPoly = MultiPoly<Rational>;
/// Polynomial over a number field `K`.
pub type KPoly = MultiPoly<FieldElement>;

impl<C: Coefficient> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (m, c) in self.terms.iter().rev() {
            list.entry(&m.display(&self.vars), c);
        }
        list.finish()
    }
}

impl<C: Coefficient> MultiPoly<C> {
    pub fn zero(vars: Arc<[String]>, ring: C::Ring) -> Self {
        MultiPoly { vars, ring, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<[String]>, ring: C::Ring, c: C) -> Self {
        let n = vars.len();
        Self::from_terms(vars, ring, [(Monomial::one(n), c)])
    }

    /// The variable `vars[index]`.
    pub fn var(vars: Arc<[String]>, ring: C::Ring, index: usize) -> Self {
        let n = vars.len();
        let one = C::from_rational(&ring, Rational::one());
        Self::from_terms(vars, ring, [(Monomial::var(n, index), one)])
    }

    /// Builds a polynomial, combining repeated monomials and dropping zeros.
    /// Panics if a monomial has the wrong number of exponents.
    pub fn from_terms(
        vars: Arc<[String]>,
        ring: C::Ring,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Self {
        let mut p = Self::zero(vars, ring);
        for (m, c) in terms {
            assert_eq!(m.0.len(), p.vars.len(), "monomial arity");
            p.add_term(m, &c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn shared_vars(&self) -> Arc<[String]> {
        self.vars.clone()
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    fn add_term(&mut self, m: Monomial, c: &C) {
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                existing.add_assign(c);
                if existing.vanishes() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VariableMismatch);
        }
        if self.ring != other.ring {
            return Err(PolyError::FieldMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.compatible(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.compatible(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        out
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.ring.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &ca.mul(cb));
            }
        }
        out
    }

    pub fn square(&self) -> Self {
        self.mul_unchecked(self)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let n = self.vars.len();
        let one = C::from_rational(&self.ring, Rational::one());
        let mut acc = Self::from_terms(self.vars.clone(), self.ring.clone(), [(Monomial::one(n), one)]);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.vars.clone(), self.ring.clone());
        }
        self.map_coeffs(|c| c.scale(s))
    }

    fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect(),
        }
    }
}

impl QPoly {
    pub fn rational_zero(vars: Arc<[String]>) -> Self {
        Self::zero(vars, Rationals)
    }

    /// The same polynomial viewed over `K`.
    pub fn embed(&self, field: &NumberField) -> KPoly {
        MultiPoly {
            vars: self.vars.clone(),
            ring: field.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.from_rational(c.clone()))).collect(),
        }
    }
}

/// The coordinates `(q_0, ..., q_(r-1))` of a polynomial over `K` with
/// respect to `1, theta, ..., theta^(r-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordVector(Vec<QPoly>);

impl CoordVector {
    pub fn new(parts: Vec<QPoly>) -> Self {
        CoordVector(parts)
    }

    pub fn parts(&self) -> &[QPoly] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<QPoly> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum_i q_i theta^i` as a polynomial over `field`.
    pub fn recombine(&self, field: &NumberField) -> Result<KPoly, PolyError> {
        if self.0.len() != field.degree() {
            return Err(PolyError::DimensionMismatch { expected: field.degree(), got: self.0.len() });
        }
        let vars = self.0[0].shared_vars();
        let mut out = KPoly::zero(vars, field.clone());
        let theta = field.generator();
        let mut power = field.one();
        for q in &self.0 {
            if q.vars != out.vars {
                return Err(PolyError::VariableMismatch);
            }
            for (m, c) in &q.terms {
                out.add_term(m.clone(), &power.scale(c));
            }
            power = power.mul_unchecked(&theta);
        }
        Ok(out)
    }
}

/// Reads each coefficient of `p` coordinate-wise.
pub fn coord_split(p: &KPoly) -> CoordVector {
    let r = p.ring.degree();
    let mut parts = vec![QPoly::rational_zero(p.vars.clone()); r];
    for (m, c) in &p.terms {
        for (q, x) in parts.iter_mut().zip(c.coords()) {
            q.add_term(m.clone(), x);
        }
    }
    CoordVector(parts)
}

/// Returns `q_0` if every other coordinate of `p` vanishes.
pub fn rational_part_check(p: &KPoly) -> Result<QPoly, PolyError> {
    for (m, c) in p.terms() {
        if let Some(index) = c.coords().iter().skip(1).position(|x| !x.is_zero()) {
            return Err(PolyError::NotRational { monomial: m.display(&p.vars), index: index + 1 });
        }
    }
    Ok(coord_split(p).0.swap_remove(0))
}

/// `q^T G q = sum_(i,j) G_ij q_i q_j`.
pub fn trace_form_apply(q: &CoordVector, g: &TraceMatrix) -> Result<QPoly, PolyError> {
    let r = g.dim();
    if q.len() != r {
        return Err(PolyError::DimensionMismatch { expected: r, got: q.len() });
    }
    let vars = q.0[0].shared_vars();
    if q.0.iter().any(|p| p.vars != vars) {
        return Err(PolyError::VariableMismatch);
    }
    let two = crate::rat(2);
    let mut out = QPoly::rational_zero(vars);
    for i in 0..r {
        if q.0[i].is_zero() {
            continue;
        }
        out.add_assign_unchecked(&q.0[i].square().scale(g.get(i, i)));
        for j in (i + 1)..r {
            if q.0[j].is_zero() || g.get(i, j).is_zero() {
                continue;
            }
            let w = g.get(i, j) * &two;
            out.add_assign_unchecked(&q.0[i].mul_unchecked(&q.0[j]).scale(&w));
        }
    }
    Ok(out)
}
