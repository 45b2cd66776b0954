//! From a sum of squares over `K` to a sum of squares over `Q`.
//!
//! For each input square `f_k` with coordinates `q_k = (q_0, ..., q_(r-1))`,
//! the trace `Tr(f_k^2) = q_k^T G q_k` is a rational quadratic form in the
//! `q_i`. Since `f = sum f_k^2` is rational, `Tr(f) = r f`, hence
//!
//! ```text
//! f = (1/r) sum_k q_k^T G q_k = sum_k sum_i (d_i / r) (U q_k)_i^2
//! ```
//!
//! with `G = U^T D U`. The first pivot of a trace matrix is `r`, so the first
//! weight is always 1; every other weight is split into at most four
//! rational squares. This uses only that `f` is rational, not that `K` is
//! Galois; in any case every certificate is checked exactly before it is
//! handed out.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactla::{ldl_decompose, positivity_check, LdlFactors, LinalgError, Positivity};
use crate::field::NumberField;
use crate::foursquare::{rational_square_sum, FourSquareError};
use crate::poly::{coord_split, rational_part_check, trace_form_apply, CoordVector, KPoly, PolyError, QPoly};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("sum of squares is not rational: coefficient of {monomial} has nonzero theta^{index} coordinate")]
    NotRational { monomial: String, index: usize },
    #[error("sum of squares differs from the stated target at {monomial}")]
    TargetMismatch { monomial: String },
    #[error("field is not totally real: pivot {index} of the trace matrix is zero (leading principal minor vanishes)")]
    ZeroPivot { index: usize },
    #[error("field is not totally real: pivot {index} of the trace matrix is {pivot} <= 0")]
    NegativePivot { index: usize, pivot: Rational },
    #[error("weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error(transparent)]
    FourSquare(#[from] FourSquareError),
    #[error("internal error: emitted identity does not hold ({0})")]
    IdentityFailed(String),
}

impl DescentError {
    /// True for failures of the mathematical preconditions (as opposed to
    /// malformed input).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            DescentError::NotRational { .. }
                | DescentError::TargetMismatch { .. }
                | DescentError::ZeroPivot { .. }
                | DescentError::NegativePivot { .. }
        )
    }

    fn from_rationality(e: PolyError) -> Self {
        match e {
            PolyError::NotRational { monomial, index } => DescentError::NotRational { monomial, index },
            other => DescentError::Poly(other),
        }
    }
}

/// `f = sum_k f_k^2` with `f_k` over `K`; `target` optionally states `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct SosProblem {
    field: NumberField,
    vars: Arc<[String]>,
    squares: Vec<KPoly>,
    target: Option<QPoly>,
}

impl SosProblem {
    pub fn new(
        field: NumberField,
        vars: Arc<[String]>,
        squares: Vec<KPoly>,
        target: Option<QPoly>,
    ) -> Result<Self, PolyError> {
        for s in &squares {
            if s.vars() != &*vars {
                return Err(PolyError::VariableMismatch);
            }
            if s.ring() != &field {
                return Err(PolyError::FieldMismatch);
            }
        }
        if target.as_ref().is_some_and(|t| t.vars() != &*vars) {
            return Err(PolyError::VariableMismatch);
        }
        Ok(SosProblem { field, vars, squares, target })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn shared_vars(&self) -> Arc<[String]> {
        self.vars.clone()
    }

    pub fn squares(&self) -> &[KPoly] {
        &self.squares
    }

    pub fn target(&self) -> Option<&QPoly> {
        self.target.as_ref()
    }

    /// `(4r - 3) m`.
    pub fn bound(&self) -> usize {
        square_bound(self.field.degree(), self.squares.len())
    }
}

pub fn square_bound(degree: usize, inputs: usize) -> usize {
    (4 * degree - 3) * inputs
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedTerm {
    pub weight: Rational,
    pub poly: QPoly,
}

/// `sum w_i g_i^2` with positive rational weights.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct WeightedSos {
    pub terms: Vec<WeightedTerm>,
}

impl WeightedSos {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = &Rational> {
        self.terms.iter().map(|t| &t.weight)
    }

    /// `sum w_i g_i^2` over the given variables.
    pub fn evaluate(&self, vars: Arc<[String]>) -> Result<QPoly, PolyError> {
        let mut acc = QPoly::rational_zero(vars);
        for t in &self.terms {
            acc = acc.checked_add(&t.poly.square().scale(&t.weight))?;
        }
        Ok(acc)
    }
}

/// A self-contained rational SOS certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub field: NumberField,
    pub vars: Arc<[String]>,
    /// Number of input squares `m`.
    pub inputs: usize,
    pub compressed: bool,
    pub weighted: WeightedSos,
    /// Pure squares `h_j` with `sum h_j^2 = f`, when expanded.
    pub expanded: Option<Vec<QPoly>>,
}

impl Certificate {
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn weighted_count(&self) -> usize {
        self.weighted.len()
    }

    pub fn expanded_count(&self) -> Option<usize> {
        self.expanded.as_ref().map(Vec::len)
    }

    pub fn bound(&self) -> usize {
        square_bound(self.degree(), self.inputs)
    }
}

/// Computes `sum f_k^2`, checks that it is rational and, if the problem
/// states a target, that it matches.
pub fn reconstruct_target(p: &SosProblem) -> Result<QPoly, DescentError> {
    let mut total = KPoly::zero(p.vars.clone(), p.field.clone());
    for s in &p.squares {
        total.add_assign_unchecked(&s.square());
    }
    let f = rational_part_check(&total).map_err(DescentError::from_rationality)?;
    if let Some(t) = &p.target {
        let diff = f.checked_sub(t)?;
        let first = diff.terms().next().map(|(m, _)| m.display(&p.vars));
        if let Some(monomial) = first {
            return Err(DescentError::TargetMismatch { monomial });
        }
    }
    Ok(f)
}

/// Factors the trace matrix of `field` and insists on positive pivots.
pub fn trace_factors(field: &NumberField) -> Result<LdlFactors, DescentError> {
    let ldl = ldl_decompose(field.trace_matrix().matrix()).map_err(|e| match e {
        LinalgError::ZeroPivot(index) => DescentError::ZeroPivot { index },
        other => unreachable!("trace matrices are square and symmetric: {other}"),
    })?;
    match positivity_check(&ldl) {
        Positivity::Positive => Ok(ldl),
        Positivity::NotPositive { index, pivot } => Err(DescentError::NegativePivot { index, pivot }),
    }
}

/// `g = U q`, with `U` unit upper triangular.
fn triangular_apply(u: &[Vec<Rational>], q: &CoordVector) -> Vec<QPoly> {
    let q = q.parts();
    (0..q.len())
        .map(|i| {
            let mut g = q[i].clone();
            for j in (i + 1)..q.len() {
                if !u[i][j].is_zero() && !q[j].is_zero() {
                    g.add_assign_unchecked(&q[j].scale(&u[i][j]));
                }
            }
            g
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DescentOptions {
    /// Merge classes of input squares with equal traces whose sum is rational.
    pub compress: bool,
    /// Also produce pure squares.
    pub expand: bool,
    /// Process input squares on the rayon pool. Output is identical either way.
    pub parallel: bool,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { compress: true, expand: false, parallel: false }
    }
}

pub fn weighted_descent(p: &SosProblem, compress: bool) -> Result<WeightedSos, DescentError> {
    weighted_descent_with(p, compress, false)
}

pub fn weighted_descent_with(p: &SosProblem, compress: bool, parallel: bool) -> Result<WeightedSos, DescentError> {
    let ldl = trace_factors(&p.field)?;
    let target = reconstruct_target(p)?;
    let r = crate::rat(p.field.degree() as i64);
    let splits: Vec<CoordVector> = if parallel {
        p.squares.par_iter().map(coord_split).collect()
    } else {
        p.squares.iter().map(coord_split).collect()
    };

    // (first member, class size) for every square; class size 1 for squares
    // that go through the general path
    let mut plan: Vec<Option<usize>> = vec![Some(1); p.squares.len()];
    if compress {
        let g = p.field.trace_matrix();
        let traces: Vec<QPoly> = if parallel {
            splits.par_iter().map(|q| trace_form_apply(q, &g)).collect::<Result<_, _>>()?
        } else {
            splits.iter().map(|q| trace_form_apply(q, &g)).collect::<Result<_, _>>()?
        };
        for class in trace_classes(&traces) {
            if class.len() < 2 || !class_sum_is_rational(p, &class) {
                continue;
            }
            plan[class[0]] = Some(class.len());
            for &k in &class[1..] {
                plan[k] = None;
            }
        }
    }

    let emit = |(k, q): (usize, &CoordVector)| -> Vec<WeightedTerm> {
        let Some(size) = plan[k] else { return Vec::new() };
        let s = crate::rat(size as i64);
        triangular_apply(ldl.u(), q)
            .into_iter()
            .zip(ldl.pivots())
            .map(|(poly, d)| WeightedTerm { weight: d * &s / &r, poly })
            .collect()
    };
    let terms: Vec<WeightedTerm> = if parallel {
        splits.par_iter().enumerate().flat_map_iter(emit).collect()
    } else {
        splits.iter().enumerate().flat_map(emit).collect()
    };
    let sos = WeightedSos { terms };

    let check = sos.evaluate(p.vars.clone())?;
    if check != target {
        return Err(DescentError::IdentityFailed("weighted form".into()));
    }
    Ok(sos)
}

/// Groups indices by equal trace polynomial, in order of first appearance.
fn trace_classes(traces: &[QPoly]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut by_key: HashMap<Vec<(Vec<u32>, String)>, usize> = HashMap::new();
    for (k, t) in traces.iter().enumerate() {
        let key: Vec<(Vec<u32>, String)> =
            t.terms().map(|(m, c)| (m.exponents().to_vec(), c.to_string())).collect();
        match by_key.get(&key) {
            Some(&c) => classes[c].push(k),
            None => {
                by_key.insert(key, classes.len());
                classes.push(vec![k]);
            }
        }
    }
    classes
}

fn class_sum_is_rational(p: &SosProblem, class: &[usize]) -> bool {
    let mut total = KPoly::zero(p.vars.clone(), p.field.clone());
    for &k in class {
        total.add_assign_unchecked(&p.squares[k].square());
    }
    rational_part_check(&total).is_ok()
}

/// Replaces each weighted term by pure squares: `w g^2 = sum (t_j g)^2` with
/// `w = sum t_j^2` minimal. Zero polynomials contribute nothing.
pub fn expand_certificate(w: &WeightedSos) -> Result<Vec<QPoly>, DescentError> {
    let mut out = Vec::new();
    for (index, term) in w.terms.iter().enumerate() {
        if !term.weight.is_positive() {
            return Err(DescentError::NonPositiveWeight { index: index + 1 });
        }
        if term.poly.is_zero() {
            continue;
        }
        if term.weight.is_one() {
            out.push(term.poly.clone());
            continue;
        }
        let parts = rational_square_sum(&term.weight)?;
        out.extend(parts.parts.iter().map(|t| term.poly.scale(t)));
    }
    Ok(out)
}

/// Runs the whole pipeline and self-checks the result.
pub fn descend(p: &SosProblem, opts: DescentOptions) -> Result<Certificate, DescentError> {
    let weighted = weighted_descent_with(p, opts.compress, opts.parallel)?;
    let expanded = if opts.expand { Some(expand_certificate(&weighted)?) } else { None };
    let cert = Certificate {
        field: p.field.clone(),
        vars: p.vars.clone(),
        inputs: p.squares.len(),
        compressed: opts.compress,
        weighted,
        expanded,
    };
    if cert.expanded_count().is_some_and(|n| n > cert.bound()) {
        return Err(DescentError::IdentityFailed("square count exceeds (4r - 3) m".into()));
    }
    let target = reconstruct_target(p)?;
    match verify(&target, &cert) {
        Verdict::Accept => Ok(cert),
        Verdict::Reject(why) => Err(DescentError::IdentityFailed(why.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Part {
    Weighted,
    Expanded,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("certificate is over variables [{found}], target over [{expected}]")]
    VariableMismatch { expected: String, found: String },
    #[error("{part:?} sum differs from target at {monomial}: expected {expected}, found {found}")]
    Mismatch { part: Part, monomial: String, expected: Rational, found: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Rejection),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Recomputes the certificate's sums exactly and compares with `target`.
pub fn verify(target: &QPoly, cert: &Certificate) -> Verdict {
    if target.vars() != &*cert.vars {
        return Verdict::Reject(Rejection::VariableMismatch {
            expected: target.vars().join(" "),
            found: cert.vars.join(" "),
        });
    }
    if let Some(i) = cert.weighted.weights().position(|w| !w.is_positive()) {
        return Verdict::Reject(Rejection::NonPositiveWeight { index: i + 1 });
    }
    let weighted = cert.weighted.evaluate(cert.vars.clone()).expect("variables checked above");
    if let Some(r) = first_difference(target, &weighted, Part::Weighted) {
        return Verdict::Reject(r);
    }
    if let Some(squares) = &cert.expanded {
        let mut sum = QPoly::rational_zero(cert.vars.clone());
        for h in squares {
            match sum.checked_add(&h.square()) {
                Ok(s) => sum = s,
                Err(_) => {
                    return Verdict::Reject(Rejection::VariableMismatch {
                        expected: target.vars().join(" "),
                        found: h.vars().join(" "),
                    })
                }
            }
        }
        if let Some(r) = first_difference(target, &sum, Part::Expanded) {
            return Verdict::Reject(r);
        }
    }
    Verdict::Accept
}

fn first_difference(target: &QPoly, found: &QPoly, part: Part) -> Option<Rejection> {
    let diff = found.checked_sub(target).ok()?;
    let (m, _) = diff.terms().next()?;
    let get = |p: &QPoly| p.coeff(m).cloned().unwrap_or_else(Rational::zero);
    Some(Rejection::Mismatch {
        part,
        monomial: m.display(target.vars()),
        expected: get(target),
        found: get(found),
    })
}
