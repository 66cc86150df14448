//! Pairs `(Theta, Theta')` of twisted endomorphisms standing for a Higgs field
//! with values in the Hecke-modified bundle `V`: the commutation identity, the
//! fiber equations `Theta'(x_i) = lambda_i Theta(x_i)`, and reconstruction.

use num::traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::scalar::fmt_rational;
use crate::algebra::{Matrix, Rational, UniPoly};
use crate::hecke::{HeckeData, HeckeError};
use crate::projective_line::{validate_twisted_endo, SplitBundle, TwistedEndo, TwistedEndoJson};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HiggsError {
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error("Theta and Theta' do not commute")]
    Commutation { commutator: TwistedEndoJson },
    #[error("fiber condition fails at x = {}", points.join(", "))]
    FiberCondition { points: Vec<String> },
    #[error("degree budget infeasible: multiplier needs degree {needed}, at most {available} available")]
    InfeasibleBudget { needed: i64, available: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HiggsPair {
    pub e: SplitBundle,
    /// Twisted by `O(a)`.
    pub theta: TwistedEndo,
    /// Twisted by `O(b)`.
    pub theta_prime: TwistedEndo,
}

impl HiggsPair {
    pub fn new(theta: TwistedEndo, theta_prime: TwistedEndo) -> Result<Self, HiggsError> {
        if theta.source != theta_prime.source {
            return Err(HiggsError::Inconsistent("Theta and Theta' act on different bundles".into()));
        }
        Ok(HiggsPair { e: theta.source.clone(), theta, theta_prime })
    }

    pub fn rank(&self) -> usize {
        self.e.rank()
    }

    pub fn a(&self) -> i64 {
        self.theta.twist.0
    }

    pub fn b(&self) -> i64 {
        self.theta_prime.twist.0
    }

    /// Degree-bound violations of either matrix, as messages.
    pub fn validate(&self) -> Result<(), HiggsError> {
        let mut msgs = Vec::new();
        for (name, t) in [("Theta", &self.theta), ("ThetaPrime", &self.theta_prime)] {
            for v in validate_twisted_endo(t) {
                msgs.push(format!("{name}[{}][{}] has degree {} > {}", v.row, v.col, v.degree, v.bound));
            }
        }
        if msgs.is_empty() {
            Ok(())
        } else {
            Err(HiggsError::Inconsistent(msgs.join("; ")))
        }
    }

    /// Twists must match the Hecke degrees.
    pub fn check_against(&self, h: &HeckeData) -> Result<(), HiggsError> {
        h.validate()?;
        self.validate()?;
        if self.a() != h.a || self.b() != h.b {
            return Err(HiggsError::Inconsistent(format!(
                "pair twists ({}, {}) differ from Hecke degrees ({}, {})",
                self.a(),
                self.b(),
                h.a,
                h.b
            )));
        }
        Ok(())
    }
}

/// `Theta Theta' - Theta' Theta`, twisted by `O(a + b)`.
pub fn commutator(p: &HiggsPair) -> TwistedEndo {
    TwistedEndo {
        source: p.e.clone(),
        twist: crate::projective_line::LineBundle(p.a() + p.b()),
        entries: p.theta.entries.commutator(&p.theta_prime.entries),
    }
}

pub fn check_commutation(p: &HiggsPair) -> bool {
    commutator(p).entries.is_zero()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberPointReport {
    pub x: String,
    pub ok: bool,
    /// `Theta'(x_i) - lambda_i Theta(x_i)` when nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberReport {
    pub points: Vec<FiberPointReport>,
}

impl FiberReport {
    pub fn all_ok(&self) -> bool {
        self.points.iter().all(|p| p.ok)
    }

    pub fn failing(&self) -> Vec<String> {
        self.points.iter().filter(|p| !p.ok).map(|p| p.x.clone()).collect()
    }
}

pub fn check_fiber_condition(p: &HiggsPair, h: &HeckeData) -> FiberReport {
    let points = h
        .points
        .iter()
        .map(|pt| {
            let t = p.theta.evaluate(&pt.x);
            let tp = p.theta_prime.evaluate(&pt.x);
            let residual = tp.sub(&t.scale(&pt.lambda));
            let ok = residual.is_zero();
            FiberPointReport {
                x: fmt_rational(&pt.x),
                ok,
                residual: (!ok).then(|| {
                    residual.to_rows().iter().map(|r| r.iter().map(fmt_rational).collect()).collect()
                }),
            }
        })
        .collect();
    FiberReport { points }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberVerdict {
    pub x: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub commutation: bool,
    pub fiber: Vec<FiberVerdict>,
    pub unique: bool,
}

/// A pair that passed every check against its Hecke data.
#[derive(Debug, Clone, PartialEq)]
pub struct VTwistedHiggsField {
    hecke: HeckeData,
    pair: HiggsPair,
    certificate: Certificate,
}

impl VTwistedHiggsField {
    pub fn hecke(&self) -> &HeckeData {
        &self.hecke
    }

    pub fn pair(&self) -> &HiggsPair {
        &self.pair
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }
}

/// Accepts the pair iff it commutes and satisfies the fiber equations. The
/// field is then determined by the pair, which the certificate records.
pub fn reconstruct(p: &HiggsPair, h: &HeckeData) -> Result<VTwistedHiggsField, HiggsError> {
    p.check_against(h)?;
    let comm = commutator(p);
    if !comm.entries.is_zero() {
        return Err(HiggsError::Commutation { commutator: comm.to_json() });
    }
    let fiber = check_fiber_condition(p, h);
    if !fiber.all_ok() {
        return Err(HiggsError::FiberCondition { points: fiber.failing() });
    }
    let certificate = Certificate {
        commutation: true,
        fiber: fiber.points.into_iter().map(|r| FiberVerdict { x: r.x, ok: r.ok }).collect(),
        unique: true,
    };
    Ok(VTwistedHiggsField { hecke: h.clone(), pair: p.clone(), certificate })
}

pub fn decompose(f: &VTwistedHiggsField) -> (TwistedEndo, TwistedEndo) {
    (f.pair.theta.clone(), f.pair.theta_prime.clone())
}

fn vanishing_poly(h: &HeckeData) -> UniPoly {
    UniPoly::from_roots(h.xs())
}

/// Random `Theta` within the bounds (entry degrees capped by `degree_budget`)
/// and `Theta' = alpha I + beta Theta` with `alpha` vanishing on the points
/// and `beta(x_i) = lambda_i`.
pub fn random_valid_instance(
    h: &HeckeData,
    e: &SplitBundle,
    degree_budget: u32,
    seed: u64,
) -> Result<VTwistedHiggsField, HiggsError> {
    h.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = e.rank();
    let mut theta = TwistedEndo::zero(e.clone(), h.a);
    for i in 0..r {
        for j in 0..r {
            let bound = e.entry_bound(i, j, h.a).min(degree_budget as i64);
            if bound >= 0 {
                theta.entries.set(i, j, random_full_degree(&mut rng, bound as usize));
            }
        }
    }
    // largest amount by which an entry of Theta uses up its b-bound
    let cap = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .filter(|&(i, j)| !theta.entries.get(i, j).is_zero())
        .map(|(i, j)| theta.entries.get(i, j).degree_i64() - (e.twists()[i] - e.twists()[j]))
        .max();

    let l = h.len() as i64;
    let pi = vanishing_poly(h);
    let beta = if l == 0 {
        match cap {
            Some(c) if c > h.b => UniPoly::zero(),
            _ => UniPoly::constant(Rational::from_integer(rng.gen_range(-3i64..=3).into())),
        }
    } else {
        let nodes: Vec<(Rational, Rational)> = h.points.iter().map(|p| (p.x.clone(), p.lambda.clone())).collect();
        let interp = UniPoly::interpolate(&nodes).expect("validated points are distinct");
        let room = cap.map_or(i64::MAX, |c| h.b - c);
        if interp.degree_i64() > room {
            return Err(HiggsError::InfeasibleBudget { needed: interp.degree_i64(), available: room });
        }
        let extra = room.saturating_sub(l);
        if extra >= 0 && extra < i64::MAX && rng.gen_bool(0.5) {
            &interp + &(&pi * &random_poly(&mut rng, extra.min(2) as usize))
        } else {
            interp
        }
    };
    let alpha = if h.b >= l {
        &pi * &random_poly(&mut rng, (h.b - l).min(2) as usize)
    } else {
        UniPoly::zero()
    };
    let identity = Matrix::identity(r, UniPoly::zero());
    let entries = identity.scale(&alpha).add(&theta.entries.scale(&beta));
    let theta_prime = TwistedEndo { source: e.clone(), twist: crate::projective_line::LineBundle(h.b), entries };
    let pair = HiggsPair::new(theta, theta_prime)?;
    reconstruct(&pair, h)
}

fn random_poly(rng: &mut impl Rng, degree: usize) -> UniPoly {
    let c: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-3..=3)).collect();
    UniPoly::from_ints(&c)
}

fn random_full_degree(rng: &mut impl Rng, degree: usize) -> UniPoly {
    let mut c: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-3..=3)).collect();
    while c[degree] == 0 {
        c[degree] = rng.gen_range(-3..=3);
    }
    UniPoly::from_ints(&c)
}

/// Moves `Theta'(x_i)` off the fiber condition at the point `x_i`, and
/// nowhere else when the degree bounds leave room. The bump is scalar, so
/// commutation survives, when `b >= 0`; otherwise the entry with the largest
/// bound changes. `None` when every entry of `Theta'` is forced to vanish.
pub fn perturb_at_point(p: &HiggsPair, h: &HeckeData, i: usize, c: &Rational) -> Option<HiggsPair> {
    assert!(!c.is_zero());
    let r = p.rank();
    let (row, col) = (0..r).flat_map(|k| (0..r).map(move |j| (k, j))).max_by_key(|&(k, j)| p.theta_prime.bound(k, j))?;
    let scalar = p.b() >= 0;
    let bound = if scalar { p.b() } else { p.theta_prime.bound(row, col) };
    if bound < 0 {
        return None;
    }
    let others: Vec<Rational> = h.xs().enumerate().filter(|(k, _)| *k != i).map(|(_, x)| x.clone()).collect();
    let bump = if others.len() as i64 <= bound {
        UniPoly::from_roots(&others).scale(c)
    } else {
        UniPoly::constant(c.clone())
    };
    let mut tp = p.theta_prime.clone();
    let cells: Vec<(usize, usize)> = if scalar { (0..r).map(|k| (k, k)).collect() } else { vec![(row, col)] };
    for (k, j) in cells {
        let v = tp.entries.get(k, j) + &bump;
        tp.entries.set(k, j, v);
    }
    Some(HiggsPair { e: p.e.clone(), theta: p.theta.clone(), theta_prime: tp })
}
