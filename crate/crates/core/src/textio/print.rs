//! Canonical text for rationals and polynomials.
//!
//! Terms come out in descending graded-lex order, rationals in lowest terms
//! (`p` or `p/q`), products with explicit `*` and powers with `^`. The
//! output parses back to the same value.

use num_traits::{One, Signed, Zero};

use crate::poly::{KPoly, Monomial, QPoly};
use crate::Rational;

/// One signed summand: `(negative, body)`.
type Summand = (bool, String);

fn join(summands: Vec<Summand>) -> String {
    if summands.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (neg, body)) in summands.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// `c * mono` with the sign split off; `mono` empty means the constant term.
fn scaled(c: &Rational, mono: &str) -> Summand {
    let abs = c.abs();
    let body = if mono.is_empty() {
        abs.to_string()
    } else if abs.is_one() {
        mono.to_string()
    } else {
        format!("{abs}*{mono}")
    };
    (c.is_negative(), body)
}

fn mono_text(m: &Monomial, vars: &[String]) -> String {
    if m.is_one() {
        String::new()
    } else {
        m.display(vars)
    }
}

fn theta_power(i: usize) -> String {
    match i {
        0 => String::new(),
        1 => "theta".to_string(),
        _ => format!("theta^{i}"),
    }
}

fn with_factor(a: &str, b: &str) -> String {
    match (a.is_empty(), b.is_empty()) {
        (true, _) => b.to_string(),
        (_, true) => a.to_string(),
        _ => format!("{a}*{b}"),
    }
}

pub fn print_qpoly(p: &QPoly) -> String {
    join(p.terms().map(|(m, c)| scaled(c, &mono_text(m, p.vars()))).collect())
}

/// A univariate polynomial in `theta` from ascending coefficients.
pub fn print_theta_poly(coeffs: &[Rational]) -> String {
    join(
        coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| scaled(c, &theta_power(i)))
            .collect(),
    )
}

pub fn print_kpoly(p: &KPoly) -> String {
    let summands = p
        .terms()
        .map(|(m, c)| {
            let mono = mono_text(m, p.vars());
            let nonzero: Vec<usize> = (0..c.coords().len()).filter(|&i| !c.coords()[i].is_zero()).collect();
            if let [i] = nonzero[..] {
                scaled(&c.coords()[i], &with_factor(&theta_power(i), &mono))
            } else {
                let inner = format!("({})", print_theta_poly(c.coords()));
                (false, with_factor(&inner, &mono))
            }
        })
        .collect();
    join(summands)
}
