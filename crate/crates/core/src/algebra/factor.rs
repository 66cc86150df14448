//! Factorization of univariate polynomials over the rationals.
//!
//! Squarefree decomposition (Yun), then rational roots, then a
//! degree-bounded search over the integers for the remaining factors:
//! a factor of degree `k` of a primitive integer polynomial `G` takes, at
//! each of `k + 1` integer nodes, a value dividing `G` at that node, so it is
//! one of finitely many interpolants. Supported for squarefree parts without
//! linear factors up to degree [`SEARCH_DEGREE_LIMIT`].

use num::bigint::Sign;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::{BigInt, Integer};

use super::poly::UniPoly;
use super::scalar::Rational;
use super::AlgebraError;

pub const SEARCH_DEGREE_LIMIT: usize = 8;

const TRIAL_DIVISION_LIMIT: u64 = 2_000_000;
const MAX_CANDIDATES: u128 = 20_000_000;

/// `content * prod(factor^multiplicity)`, factors monic and irreducible.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub content: Rational,
    pub factors: Vec<(UniPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.content.clone()), |acc, (f, m)| &acc * &f.pow(*m as u32))
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

pub fn factor_rationals(p: &UniPoly) -> Result<Factorization, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let content = p.leading();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&p.monic()) {
        for f in factor_squarefree(&part)? {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| {
        (a.degree(), a.coeffs(), ma).cmp(&(b.degree(), b.coeffs(), mb))
    });
    Ok(Factorization { content, factors })
}

/// Yun's algorithm: returns `(a_i, i)` with `p = prod a_i^i`, each `a_i`
/// squarefree, monic and nonconstant. `p` must be monic.
pub fn squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let b = p.gcd(&dp);
    let mut c = p.exact_div(&b).expect("gcd divides");
    let mut d = &dp.exact_div(&b).expect("gcd divides") - &c.derivative();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let a = c.gcd(&d);
        c = c.exact_div(&a).expect("gcd divides");
        d = &d.exact_div(&a).expect("gcd divides") - &c.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Distinct rational roots, ascending.
pub fn rational_roots(p: &UniPoly) -> Result<Vec<Rational>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let (_, ints) = p.primitive_integer();
    let mut roots = Vec::new();
    let shift = ints.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        roots.push(Rational::zero());
    }
    let ints = &ints[shift..];
    if ints.len() > 1 {
        let nums = divisors(&ints[0])?;
        let dens = divisors(ints.last().unwrap())?;
        let poly = UniPoly::new(ints.iter().map(|c| Rational::from_integer(c.clone())).collect());
        let mut seen = Vec::new();
        for n in &nums {
            for d in &dens {
                for cand in [Rational::new(n.clone(), d.clone()), Rational::new(-n.clone(), d.clone())] {
                    if !seen.contains(&cand) {
                        if poly.eval(&cand).is_zero() {
                            roots.push(cand.clone());
                        }
                        seen.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Factors a monic squarefree polynomial into monic irreducibles.
fn factor_squarefree(f: &UniPoly) -> Result<Vec<UniPoly>, AlgebraError> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    for r in rational_roots(f)? {
        let lin = UniPoly::linear_root(&r);
        rest = rest.exact_div(&lin)?;
        out.push(lin);
    }
    let deg = rest.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(out);
    }
    if deg <= 3 {
        out.push(rest.monic());
        return Ok(out);
    }
    if deg > SEARCH_DEGREE_LIMIT {
        return Err(AlgebraError::DegreeLimit { degree: deg, limit: SEARCH_DEGREE_LIMIT });
    }
    split_without_roots(&rest, &mut out)?;
    Ok(out)
}

/// Recursively splits a squarefree polynomial with no rational roots.
fn split_without_roots(f: &UniPoly, out: &mut Vec<UniPoly>) -> Result<(), AlgebraError> {
    let deg = f.degree().unwrap_or(0);
    if deg <= 3 {
        if deg > 0 {
            out.push(f.monic());
        }
        return Ok(());
    }
    for k in 2..=deg / 2 {
        if let Some(h) = find_factor_of_degree(f, k)? {
            let cofactor = f.exact_div(&h)?;
            split_without_roots(&h, out)?;
            split_without_roots(&cofactor, out)?;
            return Ok(());
        }
    }
    out.push(f.monic());
    Ok(())
}

/// Searches for an integer factor of exact degree `k` by interpolating
/// through divisors of the values at `k + 1` integer nodes.
fn find_factor_of_degree(f: &UniPoly, k: usize) -> Result<Option<UniPoly>, AlgebraError> {
    let (_, ints) = f.primitive_integer();
    let g = UniPoly::new(ints.iter().map(|c| Rational::from_integer(c.clone())).collect());
    let lead = ints.last().unwrap().clone();

    // Prefer nodes whose values have few divisors.
    let mut nodes: Vec<(usize, BigInt, Vec<BigInt>)> = Vec::new();
    for step in 0..48i64 {
        let u = if step % 2 == 0 { step / 2 } else { -(step + 1) / 2 };
        let v = g.eval(&Rational::from_integer(u.into()));
        debug_assert!(!v.is_zero(), "no rational roots remain");
        let v = v.to_integer();
        let divs = match divisors(&v) {
            Ok(d) => d,
            Err(_) => continue,
        };
        nodes.push((divs.len(), BigInt::from(u), divs));
    }
    if nodes.len() < k + 1 {
        return Err(AlgebraError::IntegerTooLarge("no usable interpolation nodes".into()));
    }
    nodes.sort_by_key(|(n, _, _)| *n);
    nodes.truncate(k + 1);

    let total: u128 = nodes
        .iter()
        .enumerate()
        .map(|(i, (n, _, _))| if i == 0 { *n as u128 } else { 2 * *n as u128 })
        .product();
    if total > MAX_CANDIDATES {
        return Err(AlgebraError::DegreeLimit { degree: k, limit: SEARCH_DEGREE_LIMIT });
    }

    // candidate value lists; the first node is taken positive to fix the sign
    let choices: Vec<Vec<BigInt>> = nodes
        .iter()
        .enumerate()
        .map(|(i, (_, _, d))| {
            if i == 0 {
                d.clone()
            } else {
                d.iter().flat_map(|x| [x.clone(), -x.clone()]).collect()
            }
        })
        .collect();
    let xs: Vec<Rational> = nodes.iter().map(|(_, u, _)| Rational::from_integer(u.clone())).collect();

    let mut idx = vec![0usize; choices.len()];
    loop {
        let pts: Vec<(Rational, Rational)> = xs
            .iter()
            .zip(&idx)
            .zip(&choices)
            .map(|((x, &i), c)| (x.clone(), Rational::from_integer(c[i].clone())))
            .collect();
        let h = UniPoly::interpolate(&pts)?;
        if h.degree() == Some(k)
            && h.coeffs().iter().all(Rational::is_integer)
            && (&lead % h.leading().to_integer()).is_zero()
            && h.divides(&g)
        {
            return Ok(Some(h.monic()));
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Positive divisors of `|n|`, ascending. `n` must be nonzero.
pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>, AlgebraError> {
    let mut m = n.abs();
    assert!(!m.is_zero(), "divisors of zero");
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, e: u32, primes: &mut Vec<(BigInt, u32)>| {
        if e > 0 {
            primes.push((p, e));
        }
    };
    let mut d: u64 = 2;
    while d <= TRIAL_DIVISION_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > m {
            break;
        }
        let mut e = 0;
        while (&m % &bd).is_zero() {
            m /= &bd;
            e += 1;
        }
        push(bd, e, &mut primes);
        d += if d == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        let bd = BigInt::from(d);
        if &bd * &bd <= m && !is_probable_prime(&m)? {
            return Err(AlgebraError::IntegerTooLarge(n.to_string()));
        }
        push(m, 1, &mut primes);
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for dv in &divs {
            let mut acc = dv.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc = &acc * &p;
                next.push(acc.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// Deterministic Miller–Rabin below 3.3e24; larger inputs are refused.
fn is_probable_prime(n: &BigInt) -> Result<bool, AlgebraError> {
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    let limit: BigInt = "3317044064679887385961981".parse().unwrap();
    if n >= &limit {
        return Err(AlgebraError::IntegerTooLarge(n.to_string()));
    }
    if n < &BigInt::from(2) {
        return Ok(false);
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for b in BASES {
        let a = BigInt::from(b);
        if &a % n == BigInt::zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    debug_assert!(n.sign() == Sign::Plus && n.to_u128().is_some());
    Ok(true)
}
