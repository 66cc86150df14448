//! Factoring questions for monic polynomials in `t` over `Q(x)`.
//!
//! A squarefree `chi` is split by lifting a factorization of a good
//! specialization `chi(x0, t)` in powers of `u = x - x0` and testing each
//! candidate for exact division. A monic factor of `t`-degree `d` has
//! coefficients of `x`-degree at most `floor(d * mu)` where
//! `mu = max_i deg_x(c_{r-i}) / i`, so lifting to that precision is enough.

use num::traits::Zero;

use super::bipoly::BiPoly;
use super::factor::factor_rationals;
use super::poly::UniPoly;
use super::ratfunc::RationalFunction;
use super::resultant::discriminant_t;
use super::scalar::{Field, Rational, Ring};
use super::AlgebraError;

/// How many good specializations are compared before lifting.
const SPECIALIZATION_SAMPLES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum IrreducibilityWitness {
    /// `t`-degree one.
    Linear,
    /// `chi(x0, t)` is irreducible and squarefree over `Q`.
    Specialization { x0: Rational, image: UniPoly },
    /// No subset of the local factors at `x0` lifts to a true factor.
    ExhaustedSearch { x0: Rational, local_factors: Vec<UniPoly>, precision: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionFieldSplit {
    Irreducible(IrreducibilityWitness),
    /// `chi = factor * cofactor` with both monic of positive `t`-degree.
    Factor { factor: BiPoly, cofactor: BiPoly },
}

pub fn irreducible_over_function_field(chi: &BiPoly) -> Result<bool, AlgebraError> {
    Ok(matches!(split_over_function_field(chi)?, FunctionFieldSplit::Irreducible(_)))
}

/// Either an irreducibility witness or a nontrivial monic factorization.
pub fn split_over_function_field(chi: &BiPoly) -> Result<FunctionFieldSplit, AlgebraError> {
    if chi.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if !chi.is_monic_in_t() {
        return Err(AlgebraError::NonMonic);
    }
    let r = chi.t_degree().unwrap();
    if r == 0 {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if r == 1 {
        return Ok(FunctionFieldSplit::Irreducible(IrreducibilityWitness::Linear));
    }
    if let Some(g) = repeated_factor(chi) {
        let (q, _) = chi.div_rem_t(&g)?;
        return Ok(FunctionFieldSplit::Factor { factor: g, cofactor: q });
    }

    let disc = discriminant_t(chi);
    let mut samples: Vec<(Rational, Vec<UniPoly>)> = Vec::new();
    for x0 in specialization_points() {
        if disc.eval(&x0).is_zero() {
            continue;
        }
        let image = chi.eval_x(&x0);
        let fac = factor_rationals(&image)?;
        if fac.is_irreducible() {
            return Ok(FunctionFieldSplit::Irreducible(IrreducibilityWitness::Specialization { x0, image }));
        }
        samples.push((x0, fac.factors.into_iter().map(|(f, _)| f).collect()));
        if samples.len() == SPECIALIZATION_SAMPLES {
            break;
        }
    }
    let (x0, local) = samples
        .into_iter()
        .min_by_key(|(_, f)| f.len())
        .expect("discriminant has finitely many roots");
    lifted_factor_search(chi, x0, local)
}

/// Integer candidates 0, 1, -1, 2, -2, ...
fn specialization_points() -> impl Iterator<Item = Rational> {
    (0i64..).map(|k| {
        let v = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
        Rational::from_integer(v.into())
    })
}

fn factor_degree_bound(chi: &BiPoly, d: usize) -> usize {
    let r = chi.t_degree().unwrap();
    let mut best = Rational::zero();
    for i in 1..=r {
        if let Some(dx) = chi.coeff_t(r - i).degree() {
            let q = Rational::new((dx as i64).into(), (i as i64).into());
            if q > best {
                best = q;
            }
        }
    }
    (best * Rational::from_integer((d as i64).into())).floor().to_integer().try_into().unwrap_or(usize::MAX)
}

fn lifted_factor_search(chi: &BiPoly, x0: Rational, local: Vec<UniPoly>) -> Result<FunctionFieldSplit, AlgebraError> {
    let r = chi.t_degree().unwrap();
    let chi_u = chi.shift_x(&x0).by_x_powers();
    let image = chi_u[0].clone();
    let mut max_precision = 0;
    for d in 1..=r / 2 {
        let precision = factor_degree_bound(chi, d);
        max_precision = max_precision.max(precision);
        for subset in subsets_of_degree(&local, d) {
            let g0 = subset.iter().fold(UniPoly::one(), |acc, &i| &acc * &local[i]);
            let h0 = image.exact_div(&g0)?;
            let lifted = hensel_lift(&chi_u, &g0, &h0, precision)?;
            let candidate = BiPoly::from_x_powers(&lifted).shift_x(&-x0.clone());
            let (q, rem) = chi.div_rem_t(&candidate)?;
            if rem.is_zero() {
                return Ok(FunctionFieldSplit::Factor { factor: candidate, cofactor: q });
            }
        }
    }
    Ok(FunctionFieldSplit::Irreducible(IrreducibilityWitness::ExhaustedSearch {
        x0,
        local_factors: local,
        precision: max_precision,
    }))
}

/// Index subsets whose factor degrees sum to `d`.
fn subsets_of_degree(factors: &[UniPoly], d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(factors: &[UniPoly], start: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..factors.len() {
            let k = factors[i].degree().unwrap();
            if k <= left {
                current.push(i);
                rec(factors, i + 1, left - k, current, out);
                current.pop();
            }
        }
    }
    rec(factors, 0, d, &mut current, &mut out);
    out
}

/// Lifts `chi_u[0] = g0 * h0` to `G * H = chi mod u^(precision+1)`; returns
/// the `u`-coefficients of `G`.
fn hensel_lift(chi_u: &[UniPoly], g0: &UniPoly, h0: &UniPoly, precision: usize) -> Result<Vec<UniPoly>, AlgebraError> {
    let (one, _s, w) = g0.ext_gcd(h0);
    debug_assert!(one.degree() == Some(0));
    let mut g = vec![g0.clone()];
    let mut h = vec![h0.clone()];
    for k in 1..=precision {
        let mut e = chi_u.get(k).cloned().unwrap_or_else(UniPoly::zero);
        for i in 1..k {
            e = &e - &(&g[i] * &h[k - i]);
        }
        let gk = (&w * &e).rem(g0)?;
        let hk = (&e - &(&gk * h0)).exact_div(g0)?;
        g.push(gk);
        h.push(hk);
    }
    Ok(g)
}

/// `gcd(chi, d chi/dt)` as a monic polynomial in `t` with coefficients in
/// `Q[x]`, when it has positive degree.
pub fn repeated_factor(chi: &BiPoly) -> Option<BiPoly> {
    if !discriminant_t(chi).is_zero() {
        return None;
    }
    let to_rf = |p: &BiPoly| -> Vec<RationalFunction> {
        p.coeffs().iter().cloned().map(RationalFunction::from_poly).collect()
    };
    let mut a = to_rf(chi);
    let mut b = to_rf(&chi.derivative_t());
    while !b.is_empty() {
        let r = rf_rem(&a, &b);
        a = b;
        b = r;
    }
    let lc = a.last()?.inv()?;
    let monic: Vec<RationalFunction> = a.iter().map(|c| c.mul(&lc)).collect();
    if monic.len() < 2 {
        return None;
    }
    // A monic factor of a monic polynomial over Q[x] has polynomial coefficients.
    let coeffs = monic.iter().map(|c| c.as_poly().cloned()).collect::<Option<Vec<_>>>()?;
    Some(BiPoly::new(coeffs))
}

fn rf_trim(mut v: Vec<RationalFunction>) -> Vec<RationalFunction> {
    while v.last().is_some_and(|c| c.vanishes()) {
        v.pop();
    }
    v
}

fn rf_rem(a: &[RationalFunction], b: &[RationalFunction]) -> Vec<RationalFunction> {
    let mut rem = rf_trim(a.to_vec());
    let b = rf_trim(b.to_vec());
    let lead_inv = b.last().unwrap().inv().unwrap();
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let q = rem.last().unwrap().mul(&lead_inv);
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] = rem[shift + i].sub(&q.mul(c));
        }
        rem.pop();
        rem = rf_trim(rem);
    }
    rem
}

/// A rational point `(x0, y0)` with `chi(x0, y0) = 0` and
/// `d chi/dt (x0, y0) != 0`, searched over small integers `x0`.
pub fn smooth_rational_point(chi: &BiPoly, tries: usize) -> Result<Option<(Rational, Rational)>, AlgebraError> {
    let d = chi.derivative_t();
    for x0 in specialization_points().take(tries) {
        let image = chi.eval_x(&x0);
        if image.is_zero() {
            continue;
        }
        let fac = factor_rationals(&image)?;
        for (f, m) in &fac.factors {
            if *m == 1 && f.degree() == Some(1) {
                let y0 = -f.coeff(0);
                if !d.eval_x(&x0).eval(&y0).is_zero() {
                    return Ok(Some((x0, y0)));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_bipoly;
    use crate::algebra::scalar::int;

    fn b(s: &str) -> BiPoly {
        parse_bipoly(s).unwrap()
    }

    #[test]
    fn irreducibility_examples() {
        assert!(irreducible_over_function_field(&b("t^2 - x")).unwrap());
        assert!(!irreducible_over_function_field(&b("t^2 - x^2")).unwrap());
        assert!(!irreducible_over_function_field(&b("t^2")).unwrap());
        assert_eq!(irreducible_over_function_field(&b("x*t^2 - 1")), Err(AlgebraError::NonMonic));
    }

    #[test]
    fn finds_factor_invisible_at_every_specialization() {
        // factors with x-dependent coefficients
        let f = &b("t^2 - x*t + x^2 + 1") * &b("t^2 + x*t - 3");
        match split_over_function_field(&f).unwrap() {
            FunctionFieldSplit::Factor { factor, cofactor } => assert_eq!(&factor * &cofactor, f),
            other => panic!("expected a factor, got {other:?}"),
        }
    }

    #[test]
    fn irreducible_with_split_specializations() {
        // t^2 - (x^2 + 1) is irreducible over Q(x) but splits at x = 0
        match split_over_function_field(&b("t^2 - x^2 - 1")).unwrap() {
            FunctionFieldSplit::Irreducible(_) => {}
            other => panic!("{other:?}"),
        }
        // t^4 - x^2 - 1: x = 0 gives (t-1)(t+1)(t^2+1)
        assert!(irreducible_over_function_field(&b("t^4 - x^2 - 1")).unwrap());
    }

    #[test]
    fn repeated_factor_extraction() {
        let g = repeated_factor(&b("(t - x)^2*(t + 1)")).unwrap();
        assert_eq!(g, b("t - x"));
        assert!(repeated_factor(&b("t^2 - x")).is_none());
    }

    #[test]
    fn smooth_point_found() {
        let p = smooth_rational_point(&b("t^2 - x"), 10).unwrap().unwrap();
        assert_eq!(p.1.clone() * p.1, p.0);
        assert_ne!(p.0, int(0));
    }
}
