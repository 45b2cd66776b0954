//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ratsos::poly::Rationals;
use ratsos::{rat, ratio, CoordVector, FieldElement, KPoly, Monomial, NumberField, QPoly, Rational, SosProblem};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn vars(n: usize) -> Arc<[String]> {
    let names = ["x", "y", "z"];
    Arc::from(names[..n].iter().map(|s| s.to_string()).collect::<Vec<_>>())
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let c = small_rational(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32) -> Monomial {
    let total = rng.gen_range(0..=max_degree);
    let mut e = vec![0u32; nvars];
    for _ in 0..total {
        e[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::new(e)
}

pub fn random_qpoly(rng: &mut ChaCha8Rng, vars: &Arc<[String]>, max_degree: u32, max_terms: usize) -> QPoly {
    let n = rng.gen_range(1..=max_terms);
    let terms: Vec<(Monomial, Rational)> =
        (0..n).map(|_| (random_monomial(rng, vars.len(), max_degree), small_rational(rng))).collect();
    QPoly::from_terms(vars.clone(), Rationals, terms)
}

pub fn random_element(rng: &mut ChaCha8Rng, field: &NumberField) -> FieldElement {
    let coords = (0..field.degree())
        .map(|_| if rng.gen_bool(0.5) { small_rational(rng) } else { Rational::zero() })
        .collect();
    field.element(coords).unwrap()
}

pub fn random_kpoly(rng: &mut ChaCha8Rng, field: &NumberField, vars: &Arc<[String]>, max_degree: u32) -> KPoly {
    let n = rng.gen_range(1..=4);
    let terms: Vec<(Monomial, FieldElement)> =
        (0..n).map(|_| (random_monomial(rng, vars.len(), max_degree), random_element(rng, field))).collect();
    KPoly::from_terms(vars.clone(), field.clone(), terms)
}

/// A Galois field together with the images of `theta` under all its
/// automorphisms (identity first).
pub struct GaloisField {
    pub field: NumberField,
    pub conjugates: Vec<FieldElement>,
}

fn galois(minpoly: &[i64], images: &[&[i64]]) -> GaloisField {
    let field = NumberField::from_ints(minpoly).unwrap();
    let conjugates = images
        .iter()
        .map(|c| field.element(c.iter().map(|&x| rat(x)).collect()).unwrap())
        .collect();
    GaloisField { field, conjugates }
}

/// `x^2 - 2`, `x^3 - 3x + 1` and `x^4 - 10x^2 + 1` with their automorphisms.
pub fn galois_fields() -> Vec<GaloisField> {
    vec![
        galois(&[-2, 0, 1], &[&[0, 1], &[0, -1]]),
        galois(&[1, -3, 0, 1], &[&[0, 1, 0], &[-2, 0, 1], &[2, -1, -1]]),
        galois(&[1, 0, -10, 0, 1], &[&[0, 1, 0, 0], &[0, -1, 0, 0], &[0, 10, 0, -1], &[0, -10, 0, 1]]),
    ]
}

/// Applies the automorphism `theta -> image` coefficientwise.
pub fn conjugate(f: &KPoly, image: &FieldElement) -> KPoly {
    let field = image.field();
    let terms: Vec<(Monomial, FieldElement)> = f
        .terms()
        .map(|(m, c)| {
            let mut acc = field.zero();
            for (i, a) in c.coords().iter().enumerate() {
                acc = acc.checked_add(&image.pow(i as u32).scale(a)).unwrap();
            }
            (m.clone(), acc)
        })
        .collect();
    KPoly::from_terms(f.shared_vars(), field.clone(), terms)
}

/// A random problem with the pieces it was built from.
pub struct Generated {
    pub problem: SosProblem,
    pub orbit_reps: Vec<KPoly>,
    pub rational_squares: Vec<QPoly>,
}

/// A random problem over `gf`: whole Galois orbits of random polynomials,
/// plus a few rational squares, `m <= 5`, `n <= 3`, input degree `<= 4`.
pub fn random_problem(rng: &mut ChaCha8Rng, gf: &GaloisField) -> Generated {
    let r = gf.field.degree();
    let vars = vars(rng.gen_range(1..=3));
    let orbits = if r == 2 { rng.gen_range(1..=2) } else { 1 };
    let extras = rng.gen_range(0..=(5 - r * orbits).min(2));
    let orbit_reps: Vec<KPoly> = (0..orbits).map(|_| random_kpoly(rng, &gf.field, &vars, 4)).collect();
    let rational_squares: Vec<QPoly> = (0..extras).map(|_| random_qpoly(rng, &vars, 4, 3)).collect();
    let mut squares = Vec::new();
    for g in &orbit_reps {
        squares.extend(gf.conjugates.iter().map(|s| conjugate(g, s)));
    }
    squares.extend(rational_squares.iter().map(|h| h.embed(&gf.field)));
    let problem = SosProblem::new(gf.field.clone(), vars, squares, None).unwrap();
    Generated { problem, orbit_reps, rational_squares }
}

impl Generated {
    pub fn target_oracle(&self) -> QPoly {
        orbit_target_oracle(&self.orbit_reps, &self.rational_squares, self.problem.field())
    }
}

/// `sum_k f_k^2` computed coefficientwise through the companion-matrix trace:
/// for a Galois orbit `sum_sigma sigma(g)^2 = Tr(g^2)`, so this oracle takes
/// the squares' orbit structure from the generator, not from the library.
pub fn orbit_target_oracle(orbit_reps: &[KPoly], rational_squares: &[QPoly], field: &NumberField) -> QPoly {
    let vars = orbit_reps.first().map(|g| g.shared_vars()).unwrap_or_else(|| rational_squares[0].shared_vars());
    let traces = companion_power_traces(field.minpoly(), field.degree());
    let mut acc = QPoly::rational_zero(vars.clone());
    for g in orbit_reps {
        let terms: Vec<(Monomial, Rational)> = g
            .square()
            .terms()
            .map(|(m, c)| (m.clone(), c.coords().iter().zip(&traces).map(|(a, t)| a * t).sum()))
            .collect();
        acc = acc.checked_add(&QPoly::from_terms(vars.clone(), Rationals, terms)).unwrap();
    }
    for h in rational_squares {
        acc = acc.checked_add(&h.square()).unwrap();
    }
    acc
}

pub type Matrix = Vec<Vec<Rational>>;

/// Companion matrix of the monic polynomial with ascending coefficients
/// `u`: multiplication by `theta` on the basis `1, theta, ...`.
pub fn companion(u: &[Rational]) -> Matrix {
    let r = u.len() - 1;
    let mut c = vec![vec![Rational::zero(); r]; r];
    for i in 1..r {
        c[i][i - 1] = Rational::one();
    }
    for (i, row) in c.iter_mut().enumerate() {
        row[r - 1] = -u[i].clone();
    }
    c
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

/// `Tr(C^k)` for `k = 0..=upto` by repeated multiplication.
pub fn companion_power_traces(u: &[Rational], upto: usize) -> Vec<Rational> {
    let c = companion(u);
    let mut power = identity(c.len());
    let mut out = Vec::new();
    for _ in 0..=upto {
        out.push((0..c.len()).map(|i| power[i][i].clone()).sum());
        power = mat_mul(&power, &c);
    }
    out
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let a: Vec<Vec<Rational>> = (0..n).map(|i| (0..=i).map(|_| small_rational(rng)).collect()).collect();
    (0..n).map(|i| (0..n).map(|j| a[i.max(j)][i.min(j)].clone()).collect()).collect()
}

/// Determinant by the Leibniz expansion over all permutations.
pub fn leibniz_det(a: &Matrix) -> Rational {
    fn go(a: &Matrix, row: usize, used: &mut Vec<bool>, sign: bool, acc: Rational, out: &mut Rational) {
        let n = a.len();
        if row == n {
            if sign {
                *out -= acc;
            } else {
                *out += acc;
            }
            return;
        }
        let mut flips = sign;
        for col in 0..n {
            if used[col] {
                continue;
            }
            if !a[row][col].is_zero() {
                used[col] = true;
                go(a, row + 1, used, flips, &acc * &a[row][col], out);
                used[col] = false;
            }
            // each column skipped past moves the sign once
            flips = !flips;
        }
    }
    let mut out = Rational::zero();
    go(a, 0, &mut vec![false; a.len()], false, Rational::one(), &mut out);
    out
}

/// Minimal number of squares summing to each `n <= limit`, by dynamic
/// programming over all squares.
pub fn min_squares_table(limit: usize) -> Vec<usize> {
    let mut best = vec![usize::MAX; limit + 1];
    best[0] = 0;
    for n in 1..=limit {
        let mut s = 1;
        while s * s <= n {
            best[n] = best[n].min(best[n - s * s] + 1);
            s += 1;
        }
    }
    best
}

/// Substitutes integer points into a polynomial; used as a cheap
/// evaluation oracle.
pub fn eval_qpoly(p: &QPoly, point: &[i64]) -> Rational {
    p.terms()
        .map(|(m, c)| {
            let mut v = c.clone();
            for (&e, &x) in m.exponents().iter().zip(point) {
                v *= rat(x.pow(e));
            }
            v
        })
        .sum()
}

pub fn coords_to_kpoly(field: &NumberField, parts: Vec<QPoly>) -> KPoly {
    CoordVector::new(parts).recombine(field).unwrap()
}
