//! Number field arithmetic in `Q[theta]/(u)`.
//!
//! A [`NumberField`] is given by a monic squarefree polynomial `u` of degree
//! `r`; elements are coordinate vectors in the power basis
//! `1, theta, ..., theta^(r-1)`. Irreducibility of `u` is not checked, so
//! strictly speaking the quotient is an étale algebra; every identity this
//! crate emits is verified exactly afterwards, which is what soundness
//! rests on.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactla::SymMatrix;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("minimal polynomial has no coefficients")]
    Empty,
    #[error("minimal polynomial is not monic (leading coefficient {0})")]
    NotMonic(Rational),
    #[error("minimal polynomial has degree zero")]
    DegreeZero,
    #[error("minimal polynomial is not squarefree (gcd(u, u') has degree {gcd_degree})")]
    NotSquarefree { gcd_degree: usize },
    #[error("field elements belong to different number fields")]
    FieldMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
}

struct FieldData {
    /// Ascending coefficients of `u`; the last entry is 1.
    coeffs: Vec<Rational>,
}

/// The number field `K = Q[theta]/(u)`. Cloning is cheap.
#[derive(Clone)]
pub struct NumberField(Arc<FieldData>);

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.coeffs == other.0.coeffs
    }
}

impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("minpoly", &self.0.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .finish()
    }
}

/// Validates `coeffs` (ascending, monic, squarefree) and builds the field.
pub fn make_field(coeffs: Vec<Rational>) -> Result<NumberField, FieldError> {
    NumberField::new(coeffs)
}

impl NumberField {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, FieldError> {
        let lead = coeffs.last().ok_or(FieldError::Empty)?;
        if !lead.is_one() {
            return Err(FieldError::NotMonic(lead.clone()));
        }
        if coeffs.len() == 1 {
            return Err(FieldError::DegreeZero);
        }
        let g = upoly::gcd(&coeffs, &upoly::derivative(&coeffs));
        if g.len() > 1 {
            return Err(FieldError::NotSquarefree { gcd_degree: g.len() - 1 });
        }
        Ok(NumberField(Arc::new(FieldData { coeffs })))
    }

    /// Convenience constructor from small integer coefficients (ascending).
    pub fn from_ints(coeffs: &[i64]) -> Result<Self, FieldError> {
        Self::new(coeffs.iter().map(|&c| crate::rat(c)).collect())
    }

    /// `r = [K:Q]`.
    pub fn degree(&self) -> usize {
        self.0.coeffs.len() - 1
    }

    /// Ascending coefficients of the minimal polynomial, leading 1 included.
    pub fn minpoly(&self) -> &[Rational] {
        &self.0.coeffs
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coords: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, c: Rational) -> FieldElement {
        let mut e = self.zero();
        e.coords[0] = c;
        e
    }

    /// The class of `theta` (reduced, so for `r = 1` it is the root of `u`).
    pub fn generator(&self) -> FieldElement {
        self.reduce(vec![Rational::zero(), Rational::one()])
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<FieldElement, FieldError> {
        if coords.len() != self.degree() {
            return Err(FieldError::WrongLength { expected: self.degree(), got: coords.len() });
        }
        Ok(FieldElement { field: self.clone(), coords })
    }

    /// Reduces an arbitrary-length ascending coefficient vector modulo `u`.
    pub fn reduce(&self, poly: Vec<Rational>) -> FieldElement {
        let mut coords = upoly::rem_monic(poly, &self.0.coeffs);
        coords.resize(self.degree(), Rational::zero());
        FieldElement { field: self.clone(), coords }
    }

    /// Power sums `p_0, ..., p_upto` of the roots of `u`, via Newton's identities.
    pub fn newton_sums(&self, upto: usize) -> Vec<Rational> {
        let r = self.degree();
        let a = &self.0.coeffs;
        let mut p: Vec<Rational> = Vec::with_capacity(upto + 1);
        p.push(crate::rat(r as i64));
        for k in 1..=upto {
            let mut acc = Rational::zero();
            for i in 1..k.min(r + 1) {
                acc += &a[r - i] * &p[k - i];
            }
            // for k > r the loop above already runs over all of a_0..a_(r-1)
            if k <= r {
                acc += &a[r - k] * crate::rat(k as i64);
            }
            p.push(-acc);
        }
        p
    }

    /// The `r x r` matrix with entries `p_(i+j)` (0-based), i.e. the Gram
    /// matrix of the trace form `Tr(x y)` in the power basis.
    pub fn trace_matrix(&self) -> TraceMatrix {
        let r = self.degree();
        let p = self.newton_sums(2 * r - 2);
        let rows = (0..r).map(|i| (0..r).map(|j| p[i + j].clone()).collect()).collect();
        let matrix = SymMatrix::from_rows(rows).expect("Hankel matrix is symmetric");
        TraceMatrix { field: self.clone(), matrix }
    }
}

/// An element of `K`, stored as coordinates in the power basis.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: NumberField,
    coords: Vec<Rational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `Some(c)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn neg(&self) -> Self {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `Tr_{K/Q}(self) = sum_i coord_i * p_i`.
    pub fn trace(&self) -> Rational {
        let p = self.field.newton_sums(self.field.degree() - 1);
        self.coords.iter().zip(&p).map(|(c, s)| c * s).sum()
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += b;
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let r = self.coords.len();
        let mut prod = vec![Rational::zero(); 2 * r - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        self.field.reduce(prod)
    }
}

/// Coordinate-wise sum of two elements of the same field.
pub fn fe_add(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    a.checked_add(b)
}

/// Product in `K`, reduced modulo `u`.
pub fn fe_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    a.checked_mul(b)
}

/// The Gram matrix of the trace form of a [`NumberField`].
#[derive(Clone, Debug, PartialEq)]
pub struct TraceMatrix {
    field: NumberField,
    matrix: SymMatrix,
}

impl TraceMatrix {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.matrix.get(i, j)
    }
}

/// Dense univariate helpers over `Q`, ascending coefficients, no trailing zeros
/// (the zero polynomial is the empty vector).
mod upoly {
    use super::*;

    pub(super) fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub(super) fn derivative(p: &[Rational]) -> Vec<Rational> {
        trim(p.iter().enumerate().skip(1).map(|(i, c)| c * crate::rat(i as i64)).collect())
    }

    /// Remainder of `p` modulo the monic `m`.
    pub(super) fn rem_monic(p: Vec<Rational>, m: &[Rational]) -> Vec<Rational> {
        let mut p = trim(p);
        let dm = m.len() - 1;
        while p.len() > dm {
            let lead = p.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = p.len() - dm;
            for (i, c) in m[..dm].iter().enumerate() {
                p[shift + i] -= &lead * c;
            }
        }
        trim(p)
    }

    fn rem(p: Vec<Rational>, m: &[Rational]) -> Vec<Rational> {
        let lead = m.last().unwrap();
        let monic: Vec<Rational> = m.iter().map(|c| c / lead).collect();
        rem_monic(p, &monic)
    }

    /// Monic gcd (empty if both are zero).
    pub(super) fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(a, &b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.last().cloned() {
            a.iter_mut().for_each(|c| *c /= &lead);
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};
    use proptest::prelude::*;

    fn cubic() -> NumberField {
        NumberField::from_ints(&[1, -3, 0, 1]).unwrap()
    }

    fn elem(f: &NumberField, c: &[i64]) -> FieldElement {
        f.element(c.iter().map(|&x| rat(x)).collect()).unwrap()
    }

    #[test]
    fn make_field_examples() {
        assert_eq!(cubic().degree(), 3);
        assert_eq!(NumberField::from_ints(&[-5, 1]).unwrap().degree(), 1);
        assert_eq!(
            NumberField::from_ints(&[1, 2, 1]),
            Err(FieldError::NotSquarefree { gcd_degree: 1 })
        );
        assert!(matches!(NumberField::from_ints(&[1, 2]), Err(FieldError::NotMonic(_))));
        assert_eq!(NumberField::from_ints(&[1]), Err(FieldError::DegreeZero));
        assert_eq!(NumberField::new(vec![]), Err(FieldError::Empty));
        // rational, non-integer coefficients are fine
        assert!(NumberField::new(vec![ratio(-7, 2), rat(0), rat(1)]).is_ok());
    }

    #[test]
    fn add_examples() {
        let f = cubic();
        assert_eq!(fe_add(&elem(&f, &[1, 0, 0]), &elem(&f, &[0, 1, 0])).unwrap(), elem(&f, &[1, 1, 0]));
        let a = elem(&f, &[4, -1, 7]);
        assert_eq!(fe_add(&a, &f.zero()).unwrap(), a);
        let half = f.from_rational(ratio(1, 2));
        assert_eq!(fe_add(&half, &half).unwrap(), f.one());
    }

    #[test]
    fn mul_examples() {
        let f = cubic();
        let t = f.generator();
        let t2 = fe_mul(&t, &t).unwrap();
        assert_eq!(fe_mul(&t2, &t).unwrap(), elem(&f, &[-1, 3, 0]));
        let a = elem(&f, &[2, -5, 3]);
        assert_eq!(fe_mul(&a, &f.one()).unwrap(), a);

        let q = NumberField::from_ints(&[-7, 0, 1]).unwrap();
        let s = q.generator();
        assert_eq!(fe_mul(&s, &s).unwrap(), elem(&q, &[7, 0]));
    }

    #[test]
    fn mismatched_fields() {
        let a = cubic().one();
        let b = NumberField::from_ints(&[-2, 0, 1]).unwrap().one();
        assert_eq!(fe_add(&a, &b), Err(FieldError::FieldMismatch));
        assert_eq!(fe_mul(&a, &b), Err(FieldError::FieldMismatch));
    }

    #[test]
    fn newton_sum_examples() {
        let ints = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        assert_eq!(cubic().newton_sums(4), ints(&[3, 0, 6, -3, 18]));
        assert_eq!(NumberField::from_ints(&[-5, 1]).unwrap().newton_sums(2), ints(&[1, 5, 25]));
        assert_eq!(NumberField::from_ints(&[-2, 0, 1]).unwrap().newton_sums(2), ints(&[2, 0, 4]));
        assert_eq!(cubic().newton_sums(0), ints(&[3]));
    }

    #[test]
    fn trace_matrix_examples() {
        let m = cubic().trace_matrix();
        let expect = [[3, 0, 6], [0, 6, -3], [6, -3, 18]];
        for (i, row) in expect.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(m.get(i, j), &rat(v));
            }
        }
        let lin = NumberField::from_ints(&[-9, 1]).unwrap().trace_matrix();
        assert_eq!(lin.dim(), 1);
        assert_eq!(lin.get(0, 0), &rat(1));

        let d = ratio(7, 2);
        let quad = NumberField::new(vec![-d.clone(), rat(0), rat(1)]).unwrap().trace_matrix();
        assert_eq!(quad.get(0, 0), &rat(2));
        assert_eq!(quad.get(0, 1), &rat(0));
        assert_eq!(quad.get(1, 1), &(rat(2) * d));
    }

    #[test]
    fn degree_one_generator_is_root() {
        let f = NumberField::from_ints(&[-5, 1]).unwrap();
        assert_eq!(f.generator().as_rational(), Some(&rat(5)));
    }

    fn small_field() -> impl Strategy<Value = NumberField> {
        prop_oneof![
            Just(NumberField::from_ints(&[-2, 0, 1]).unwrap()),
            Just(cubic()),
            Just(NumberField::from_ints(&[1, 0, -10, 0, 1]).unwrap()),
            Just(NumberField::new(vec![ratio(1, 3), ratio(-1, 2), rat(0), rat(1)]).unwrap()),
        ]
    }

    fn triple() -> impl Strategy<Value = (FieldElement, FieldElement, FieldElement)> {
        small_field().prop_flat_map(|f| {
            let r = f.degree();
            let coords = proptest::collection::vec((-20i64..20, 1i64..5), r);
            (Just(f), coords.clone(), coords.clone(), coords)
                .prop_map(|(f, a, b, c)| {
                    let mk = |v: Vec<(i64, i64)>| {
                        f.element(v.into_iter().map(|(n, d)| ratio(n, d)).collect()).unwrap()
                    };
                    (mk(a), mk(b), mk(c))
                })
        })
    }

    proptest! {
        #[test]
        fn mul_ring_axioms((a, b, c) in triple()) {
            prop_assert_eq!(fe_mul(&a, &b).unwrap(), fe_mul(&b, &a).unwrap());
            prop_assert_eq!(
                fe_mul(&fe_mul(&a, &b).unwrap(), &c).unwrap(),
                fe_mul(&a, &fe_mul(&b, &c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                fe_mul(&a, &fe_add(&b, &c).unwrap()).unwrap(),
                fe_add(&fe_mul(&a, &b).unwrap(), &fe_mul(&a, &c).unwrap()).unwrap()
            );
        }

        #[test]
        fn trace_matrix_shape(f in small_field()) {
            let m = f.trace_matrix();
            let r = f.degree();
            prop_assert_eq!(m.get(0, 0), &rat(r as i64));
            for i in 0..r {
                for j in 0..r {
                    prop_assert_eq!(m.get(i, j), m.get(j, i));
                }
            }
        }

        #[test]
        fn trace_of_powers_matches_power_sums(f in small_field()) {
            let r = f.degree();
            let p = f.newton_sums(r - 1);
            for (k, pk) in p.iter().enumerate() {
                prop_assert_eq!(&f.generator().pow(k as u32).trace(), pk);
            }
        }
    }
}
