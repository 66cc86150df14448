//! Seeded generators of test instances.

use num::traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BiPoly, Matrix, Rational, UniPoly};
use crate::hecke::{HeckeData, HeckePoint};
use crate::higgs::{random_valid_instance, reconstruct, HiggsError, HiggsPair, VTwistedHiggsField};
use crate::projective_line::{SplitBundle, TwistedEndo};
use crate::spectral::{is_integral, SpectralCurve, SpectralData};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng, nonzero: bool) -> Rational {
    loop {
        let n = rng.gen_range(-4i64..=4);
        let d = *[1i64, 1, 1, 2, 3].choose(rng).unwrap();
        if !(nonzero && n == 0) {
            return Rational::new(n.into(), d.into());
        }
    }
}

pub fn random_poly(rng: &mut impl Rng, degree: i64) -> UniPoly {
    if degree < 0 {
        return UniPoly::zero();
    }
    let c: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-3..=3)).collect();
    UniPoly::from_ints(&c)
}

/// `l` distinct marked points with nonzero scalars.
pub fn random_points(rng: &mut impl Rng, l: usize) -> Vec<HeckePoint> {
    let mut pool: Vec<Rational> = (-3i64..=3).map(|v| Rational::from_integer(v.into())).collect();
    pool.push(Rational::new(1.into(), 2.into()));
    pool.push(Rational::new((-2).into(), 3.into()));
    pool.shuffle(rng);
    pool.truncate(l);
    pool.into_iter().map(|x| HeckePoint::new(x, small_rational(rng, true))).collect()
}

/// Random split bundle of rank `r` with twists in `[-1, 1]`.
pub fn random_bundle(rng: &mut impl Rng, r: usize) -> SplitBundle {
    let mut t: Vec<i64> = (0..r).map(|_| rng.gen_range(-1..=1)).collect();
    t.sort_by(|a, b| b.cmp(a));
    SplitBundle::new(t).expect("sorted")
}

/// A valid field with `r <= 3`, twists `a, b <= 3` and at most three points.
pub fn random_field(seed: u64) -> VTwistedHiggsField {
    let mut rng = rng(seed);
    loop {
        let r = rng.gen_range(1..=3);
        let l = rng.gen_range(0..=3usize);
        let a = rng.gen_range(0..=3 - (l as i64 - 1).max(0));
        let b = rng.gen_range((a + l as i64 - 1).max(0)..=3);
        let e = random_bundle(&mut rng, r);
        let h = HeckeData::new(a, b, random_points(&mut rng, l));
        let budget = rng.gen_range(0..=3);
        match random_valid_instance(&h, &e, budget, rng.gen()) {
            Ok(f) => return f,
            Err(HiggsError::InfeasibleBudget { .. }) => continue,
            Err(err) => panic!("generator produced an invalid instance: {err}"),
        }
    }
}

/// Monic `chi` of degree `r` with `deg_x [t^(r-i)] <= i a`.
pub fn random_chi(rng: &mut impl Rng, r: usize, a: i64) -> BiPoly {
    let mut coeffs: Vec<UniPoly> = (0..r).map(|k| random_poly(rng, (r - k) as i64 * a)).collect();
    coeffs.push(UniPoly::one());
    BiPoly::new(coeffs)
}

/// `(chi, psi, b)` on an integral curve with compatible Hecke data for the
/// default sign: `psi = lambda(x) t + prod (x - x_i) rho(x, t)`.
pub fn random_spectral_pair(seed: u64) -> (SpectralData, HeckeData) {
    let mut rng = rng(seed);
    let r = rng.gen_range(2..=3usize);
    let a = rng.gen_range(1..=2i64);
    let curve = loop {
        let chi = random_chi(&mut rng, r, a);
        let curve = SpectralCurve::new(chi, a, r).expect("bounded by construction");
        if is_integral(&curve).map(|c| c.is_integral()).unwrap_or(false) {
            break curve;
        }
    };
    let l = rng.gen_range(1..=2usize);
    let points = random_points(&mut rng, l);
    let nodes: Vec<(Rational, Rational)> = points.iter().map(|p| (p.x.clone(), p.lambda.clone())).collect();
    let lambda = UniPoly::interpolate(&nodes).expect("distinct nodes");
    let vanish = UniPoly::from_roots(points.iter().map(|p| &p.x));
    let rho = BiPoly::new(
        (0..r)
            .map(|_| {
                let d = rng.gen_range(-1..=1);
                random_poly(&mut rng, d)
            })
            .collect(),
    );
    let psi = &BiPoly::monomial_t(lambda, 1) + &rho.mul_x_poly(&vanish);
    let psi = psi.rem_t(curve.chi()).expect("monic");
    let b = (0..r)
        .filter(|&k| !psi.coeff_t(k).is_zero())
        .map(|k| psi.coeff_t(k).degree_i64() + k as i64 * a)
        .max()
        .unwrap_or(0)
        .max(0);
    let data = SpectralData::new(curve, psi, UniPoly::one(), b).expect("nonzero denominator");
    (data, HeckeData::new(a, b, points))
}

pub fn random_poly_matrix(rng: &mut impl Rng, r: usize, degree: i64) -> Matrix<UniPoly> {
    Matrix::from_fn(r, r, UniPoly::zero(), |_, _| random_poly(rng, degree))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    Random,
    Reducible,
    NonReduced,
}

/// Monic `chi` with `r <= 3` and `x`-degree at most 3: random, a product of
/// two monic factors, or divisible by a square.
pub fn random_corpus_chi(seed: u64) -> (BiPoly, CorpusKind) {
    let mut rng = rng(seed);
    // x-degrees drawn up to `max_dx`
    let monic = |rng: &mut ChaCha8Rng, r: usize, max_dx: i64| {
        let dx = rng.gen_range(0..=max_dx);
        let mut c: Vec<UniPoly> = (0..r).map(|_| random_poly(rng, dx)).collect();
        c.push(UniPoly::one());
        BiPoly::new(c)
    };
    match rng.gen_range(0..4) {
        0 | 1 => {
            let r = rng.gen_range(1..=3);
            (monic(&mut rng, r, 3), CorpusKind::Random)
        }
        2 => {
            let r1 = rng.gen_range(1..=2usize);
            let r2 = rng.gen_range(1..=3 - r1);
            let f = monic(&mut rng, r1, 1);
            let g = monic(&mut rng, r2, 2);
            (&f * &g, CorpusKind::Reducible)
        }
        _ => {
            let f = monic(&mut rng, 1, 1);
            let g = if rng.gen_bool(0.5) { monic(&mut rng, 1, 3) } else { BiPoly::one() };
            (&(&f * &f) * &g, CorpusKind::NonReduced)
        }
    }
}

/// Rank-2 field on the trivial bundle with `Theta' = alpha I + beta Theta`
/// and no marked points. With `reducible`, `Theta` is conjugate to an upper
/// triangular matrix by a constant change of basis.
pub fn random_rank2_field(seed: u64, reducible: bool) -> VTwistedHiggsField {
    let mut rng = rng(seed);
    let e = SplitBundle::trivial(2);
    let a = rng.gen_range(1..=2i64);
    let theta = if reducible {
        let (p, q, s) = (random_poly(&mut rng, a), random_poly(&mut rng, a), random_poly(&mut rng, a));
        let tri = Matrix::from_rows(vec![vec![p, q], vec![UniPoly::zero(), s]], UniPoly::zero()).unwrap();
        let (g, gi) = loop {
            let g: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
            let m = Matrix::from_fn(2, 2, Rational::zero(), |i, j| Rational::from_integer(g[2 * i + j].into()));
            if let Some(inv) = m.inverse() {
                break (m, inv);
            }
        };
        let lift = |m: &Matrix<Rational>| m.map(UniPoly::zero(), |c| UniPoly::constant(c.clone()));
        lift(&g).mul(&tri).mul(&lift(&gi))
    } else {
        loop {
            let m = random_poly_matrix(&mut rng, 2, a);
            let t = TwistedEndo::new(e.clone(), a, m.clone()).unwrap();
            let curve = SpectralCurve::of_endo(&t).expect("square");
            if is_integral(&curve).map(|c| c.is_integral()).unwrap_or(false) {
                break m;
            }
        }
    };
    let theta = TwistedEndo::new(e.clone(), a, theta).unwrap();
    let b = a + rng.gen_range(0..=1);
    let alpha = random_poly(&mut rng, b);
    let beta = random_poly(&mut rng, b - a);
    let entries = Matrix::identity(2, UniPoly::zero()).scale(&alpha).add(&theta.entries.scale(&beta));
    let theta_prime = TwistedEndo::new(e, b, entries).unwrap();
    let pair = HiggsPair::new(theta, theta_prime).unwrap();
    reconstruct(&pair, &HeckeData::new(a, b, vec![])).expect("polynomial in Theta")
}
