//! Exact rational sum-of-squares certificates.
//!
//! Given polynomials `f_1, ..., f_m` with coefficients in a totally real
//! number field `K = Q(theta)` whose squares add up to a polynomial `f` with
//! rational coefficients, this crate rewrites `f` as a sum of squares of
//! polynomials with rational coefficients, using at most `(4r - 3) * m`
//! squares where `r = [K:Q]`.
//!
//! The pipeline only ever touches rational numbers: the Galois conjugates of
//! `theta` are never computed. Instead the quadratic form
//! `sum_sigma (sigma f_k)^2` is expressed through the trace (Gram) matrix
//! built from the power sums of the roots of the minimal polynomial, factored
//! exactly as `U^T D U`, and the pivots are split with Lagrange's four-square
//! theorem.
//!
//! ```
//! use ratsos::{descend, reconstruct_target, textio, verify, DescentOptions};
//!
//! let problem = textio::parse_problem(
//!     "minpoly: theta^2 - 2\n\
//!      vars: x y\n\
//!      square: x + theta*y\n\
//!      square: x - theta*y\n",
//! )?;
//! let cert = descend(&problem, DescentOptions { compress: false, ..Default::default() })?;
//! let weights: Vec<String> = cert.weighted.weights().map(|w| w.to_string()).collect();
//! assert_eq!(weights, ["1", "2", "1", "2"]);
//! assert!(verify(&reconstruct_target(&problem)?, &cert).is_accept());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! Modules:
//! - [`field`]: arithmetic in `Q[theta]/(u)`, power sums, the trace matrix.
//! - [`poly`]: sparse multivariate polynomials over `Q` and over `K`.
//! - [`exactla`]: exact `U^T D U` factorization without pivoting.
//! - [`foursquare`]: minimal sums of squares of integers and rationals.
//! - [`descent`]: the end-to-end construction and certificate verification.
//! - [`textio`]: problem and certificate file formats.
//! - [`cli`]: the `ratsos` command-line front end.

pub mod cli;
pub mod descent;
pub mod exactla;
pub mod field;
pub mod foursquare;
pub mod poly;
pub mod textio;

/// Exact arbitrary-precision fraction; always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub use descent::{
    descend, expand_certificate, reconstruct_target, verify, weighted_descent, Certificate,
    DescentError, DescentOptions, Rejection, SosProblem, Verdict, WeightedSos, WeightedTerm,
};
pub use exactla::{ldl_decompose, positivity_check, LdlFactors, LinalgError, Positivity, SymMatrix};
pub use field::{make_field, FieldElement, FieldError, NumberField, TraceMatrix};
pub use foursquare::{four_square_int, rational_square_sum, FourSquareError, SquareDecomposition};
pub use poly::{CoordVector, KPoly, Monomial, MultiPoly, PolyError, QPoly};

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `num / den` as a [`Rational`]. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
