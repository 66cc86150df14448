//! Rank-2 bundles `V = ker(O(a) + O(b) -> T)` cut out by fiber conditions
//! `g(x_i) = lambda_i f(x_i)` at marked affine points, and their splitting
//! types.

use std::fmt;

use num::traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::scalar::fmt_rational;
use crate::algebra::{parse_rational, Matrix, Rational, UniPoly};

const PRESENTATION_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeckePoint {
    pub x: Rational,
    pub lambda: Rational,
}

impl HeckePoint {
    pub fn new(x: Rational, lambda: Rational) -> Self {
        HeckePoint { x, lambda }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HeckeJson", into = "HeckeJson")]
pub struct HeckeData {
    /// Degree of the first summand.
    pub a: i64,
    /// Degree of the second summand.
    pub b: i64,
    pub points: Vec<HeckePoint>,
}

#[derive(Serialize, Deserialize)]
struct HeckeJson {
    #[serde(rename = "S")]
    s: i64,
    #[serde(rename = "L")]
    l: i64,
    points: Vec<PointJson>,
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    x: String,
    lambda: String,
}

impl TryFrom<HeckeJson> for HeckeData {
    type Error = String;
    fn try_from(j: HeckeJson) -> Result<Self, String> {
        let points = j
            .points
            .iter()
            .map(|p| {
                let x = parse_rational(&p.x).map_err(|e| format!("point x {:?}: {e}", p.x))?;
                let lambda = parse_rational(&p.lambda).map_err(|e| format!("lambda {:?}: {e}", p.lambda))?;
                Ok(HeckePoint { x, lambda })
            })
            .collect::<Result<_, String>>()?;
        Ok(HeckeData { a: j.s, b: j.l, points })
    }
}

impl From<HeckeData> for HeckeJson {
    fn from(h: HeckeData) -> Self {
        HeckeJson {
            s: h.a,
            l: h.b,
            points: h
                .points
                .iter()
                .map(|p| PointJson { x: fmt_rational(&p.x), lambda: fmt_rational(&p.lambda) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub duplicate_points: Vec<String>,
    pub zero_lambda_points: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.duplicate_points.is_empty() && self.zero_lambda_points.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.duplicate_points.is_empty() {
            write!(f, "duplicate points {:?}", self.duplicate_points)?;
        }
        if !self.zero_lambda_points.is_empty() {
            if !self.duplicate_points.is_empty() {
                write!(f, "; ")?;
            }
            write!(f, "zero lambda at {:?}", self.zero_lambda_points)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("invalid Hecke data: {0}")]
    Invalid(ValidationReport),
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("point pool has {available} distinct entries, {needed} needed")]
    PoolTooSmall { needed: usize, available: usize },
    #[error("no presentation with the requested splitting type after {0} attempts")]
    RetryExhausted(usize),
    #[error("h0 counts match no splitting type (c, d) = ({c}, {d}) at n = {n}")]
    Inconsistent { c: i64, d: i64, n: i64 },
}

/// Twists `(c, d)` with `c >= d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplittingType {
    pub c: i64,
    pub d: i64,
}

impl HeckeData {
    pub fn new(a: i64, b: i64, points: Vec<HeckePoint>) -> Self {
        HeckeData { a, b, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> impl Iterator<Item = &Rational> {
        self.points.iter().map(|p| &p.x)
    }

    pub fn validate(&self) -> Result<(), HeckeError> {
        let mut report = ValidationReport::default();
        for (i, p) in self.points.iter().enumerate() {
            if self.points[..i].iter().any(|q| q.x == p.x) {
                let s = fmt_rational(&p.x);
                if !report.duplicate_points.contains(&s) {
                    report.duplicate_points.push(s);
                }
            }
            if p.lambda.is_zero() {
                report.zero_lambda_points.push(fmt_rational(&p.x));
            }
        }
        if report.is_ok() {
            Ok(())
        } else {
            Err(HeckeError::Invalid(report))
        }
    }

    pub fn degree_of_v(&self) -> i64 {
        self.a + self.b - self.points.len() as i64
    }

    pub fn rho(&self, i: usize) -> Result<Rational, HeckeError> {
        self.points
            .get(i)
            .map(|p| p.lambda.clone())
            .ok_or(HeckeError::IndexOutOfRange { index: i, len: self.points.len() })
    }

    /// `dim H^0(V(n))`, the dimension of the space of pairs `(f, g)` with
    /// `deg f <= a + n`, `deg g <= b + n` and `g(x_i) = lambda_i f(x_i)`.
    pub fn h0_of_twist(&self, n: i64) -> usize {
        let nf = (self.a + n + 1).max(0) as usize;
        let ng = (self.b + n + 1).max(0) as usize;
        let unknowns = nf + ng;
        if unknowns == 0 {
            return 0;
        }
        if self.points.is_empty() {
            return unknowns;
        }
        let conditions = Matrix::from_fn(self.points.len(), unknowns, Rational::zero(), |i, k| {
            let p = &self.points[i];
            if k < nf {
                -(&p.lambda * pow(&p.x, k))
            } else {
                pow(&p.x, k - nf)
            }
        });
        unknowns - conditions.rank()
    }

    /// Recovers `V = O(c) + O(d)` from the first twist with sections, then
    /// checks every `h0` count in a window around the jumps.
    pub fn splitting_type(&self) -> Result<SplittingType, HeckeError> {
        self.validate()?;
        let top = self.a.max(self.b);
        let deg = self.degree_of_v();
        let mut n = -top - 1;
        while self.h0_of_twist(n) == 0 {
            n += 1;
        }
        let c = -n;
        let d = deg - c;
        let hi = 2.max(-d + 1);
        for n in -(top + 2)..=hi {
            let expect = (c + n + 1).max(0) + (d + n + 1).max(0);
            if self.h0_of_twist(n) as i64 != expect || c < d {
                return Err(HeckeError::Inconsistent { c, d, n });
            }
        }
        Ok(SplittingType { c, d })
    }
}

fn pow(x: &Rational, k: usize) -> Rational {
    num::pow(x.clone(), k)
}

/// Builds Hecke data whose kernel bundle splits as `O(c) + O(d)`, using `l`
/// distinct points drawn from `pool`.
///
/// For `l >= c - d` the degrees are balanced, `a = ceil((c+d+l)/2)`, and
/// `lambda_i = g0(x_i)/f0(x_i)` for a random coprime pair `(f0, g0)` of
/// degrees `<= (a-c, b-c)`, which puts `(f0, g0) O(c)` inside `V` as a
/// subbundle. For `l = c - d - 1` take `a = c + l`, `b = d`: then `V`
/// contains the sections `(f, 0)` with `f` vanishing on the points.
pub fn make_presentation(c: i64, d: i64, l: usize, pool: &[Rational], seed: u64) -> Result<HeckeData, HeckeError> {
    if c < d {
        return Err(HeckeError::Precondition(format!("need c >= d, got ({c}, {d})")));
    }
    if l == 0 {
        return Err(HeckeError::Precondition("need at least one point".into()));
    }
    let li = l as i64;
    if li <= c - d - 2 {
        return Err(HeckeError::Precondition(format!("need l > c - d - 2, got l = {l}, c - d = {}", c - d)));
    }
    let mut distinct: Vec<Rational> = Vec::new();
    for x in pool {
        if !distinct.contains(x) {
            distinct.push(x.clone());
        }
    }
    if distinct.len() < l {
        return Err(HeckeError::PoolTooSmall { needed: l, available: distinct.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<Rational> = distinct.choose_multiple(&mut rng, l).cloned().collect();
    xs.sort();

    if li == c - d - 1 {
        let points = xs
            .into_iter()
            .map(|x| HeckePoint::new(x, Rational::from_integer(random_nonzero(&mut rng).into())))
            .collect();
        let h = HeckeData::new(c + li, d, points);
        return match h.splitting_type()? {
            SplittingType { c: c2, d: d2 } if (c2, d2) == (c, d) => Ok(h),
            _ => Err(HeckeError::RetryExhausted(1)),
        };
    }

    let total = c + d + li;
    let a = total.div_euclid(2) + total.rem_euclid(2);
    let b = total - a;
    for _ in 0..PRESENTATION_ATTEMPTS {
        let f0 = random_poly(&mut rng, (a - c) as usize);
        let g0 = random_poly(&mut rng, (b - c) as usize);
        if f0.is_zero() || g0.is_zero() || f0.gcd(&g0).degree() != Some(0) {
            continue;
        }
        if xs.iter().any(|x| f0.eval(x).is_zero() || g0.eval(x).is_zero()) {
            continue;
        }
        let points = xs.iter().map(|x| HeckePoint::new(x.clone(), g0.eval(x) / f0.eval(x))).collect();
        let h = HeckeData::new(a, b, points);
        if h.splitting_type()? == (SplittingType { c, d }) {
            return Ok(h);
        }
    }
    Err(HeckeError::RetryExhausted(PRESENTATION_ATTEMPTS))
}

fn random_nonzero(rng: &mut impl Rng) -> i64 {
    let v = rng.gen_range(1..=5);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

fn random_poly(rng: &mut impl Rng, degree: usize) -> UniPoly {
    let coeffs: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-4..=4)).collect();
    UniPoly::from_ints(&coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use proptest::prelude::*;

    fn h(a: i64, b: i64, pts: &[(i64, i64)]) -> HeckeData {
        HeckeData::new(a, b, pts.iter().map(|&(x, l)| HeckePoint::new(int(x), int(l))).collect())
    }

    #[test]
    fn validation_examples() {
        assert!(h(1, 1, &[(0, 1)]).validate().is_ok());
        match h(1, 1, &[(0, 1), (0, 2)]).validate() {
            Err(HeckeError::Invalid(r)) => assert_eq!(r.duplicate_points, vec!["0".to_string()]),
            other => panic!("{other:?}"),
        }
        match h(1, 1, &[(0, 0)]).validate() {
            Err(HeckeError::Invalid(r)) => assert_eq!(r.zero_lambda_points, vec!["0".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degree_and_rho() {
        assert_eq!(h(1, 1, &[(0, 1)]).degree_of_v(), 1);
        assert_eq!(h(1, 2, &[(0, 1)]).degree_of_v(), 2);
        assert_eq!(h(2, 2, &[(0, 1), (1, 1), (2, 1), (3, 1)]).degree_of_v(), 0);
        let hd = HeckeData::new(1, 1, vec![HeckePoint::new(int(0), int(1)), HeckePoint::new(int(1), rat(-3, 2))]);
        assert_eq!(hd.rho(1).unwrap(), rat(-3, 2));
        assert_eq!(h(1, 1, &[(1, 2)]).rho(0).unwrap(), int(2));
        assert!(matches!(hd.rho(2), Err(HeckeError::IndexOutOfRange { .. })));
    }

    #[test]
    fn h0_examples() {
        assert_eq!(h(1, 1, &[(0, 1), (1, 2)]).h0_of_twist(-1), 0);
        assert_eq!(h(1, 1, &[(0, 1), (1, 1)]).h0_of_twist(-1), 1);
        assert_eq!(h(2, 3, &[]).h0_of_twist(0), 3 + 4);
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(h(1, 1, &[(0, 1), (1, 2)]).splitting_type().unwrap(), SplittingType { c: 0, d: 0 });
        assert_eq!(h(1, 1, &[(0, 1), (1, 1)]).splitting_type().unwrap(), SplittingType { c: 1, d: -1 });
        assert_eq!(h(-2, 3, &[]).splitting_type().unwrap(), SplittingType { c: 3, d: -2 });
    }

    #[test]
    fn presentation_examples() {
        let pool = [int(0), int(1)];
        let p = make_presentation(0, 0, 2, &pool, 3).unwrap();
        assert_eq!((p.a, p.b), (1, 1));
        assert_ne!(p.points[0].lambda, p.points[1].lambda);

        let p = make_presentation(1, -1, 2, &pool, 3).unwrap();
        assert_eq!((p.a, p.b), (1, 1));
        assert_eq!(p.points[0].lambda, p.points[1].lambda);

        let p = make_presentation(1, 0, 1, &[int(0)], 3).unwrap();
        assert_eq!((p.a, p.b), (1, 1));
        assert!(!p.points[0].lambda.is_zero());
    }

    #[test]
    fn presentation_preconditions() {
        let pool: Vec<Rational> = (0..5).map(int).collect();
        assert!(matches!(make_presentation(3, 0, 1, &pool, 0), Err(HeckeError::Precondition(_))));
        assert!(matches!(make_presentation(0, 1, 1, &pool, 0), Err(HeckeError::Precondition(_))));
        assert!(matches!(make_presentation(0, 0, 6, &pool, 0), Err(HeckeError::PoolTooSmall { .. })));
        // boundary l = c - d - 1
        let p = make_presentation(4, 0, 3, &pool, 9).unwrap();
        assert_eq!(p.splitting_type().unwrap(), SplittingType { c: 4, d: 0 });
    }

    #[test]
    fn json_encoding() {
        let src = r#"{"S":1,"L":1,"points":[{"x":"0","lambda":"1"},{"x":"1","lambda":"2"}]}"#;
        let hd: HeckeData = serde_json::from_str(src).unwrap();
        assert_eq!(hd, h(1, 1, &[(0, 1), (1, 2)]));
        assert_eq!(serde_json::to_string(&hd).unwrap(), src);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn h0_matches_splitting_type(a in -2i64..4, b in -2i64..4, lambdas in prop::collection::vec(-3i64..4, 0..4)) {
            let pts: Vec<(i64, i64)> = lambdas.iter().enumerate().filter(|(_, &l)| l != 0).map(|(i, &l)| (i as i64, l)).collect();
            let hd = h(a, b, &pts);
            let st = hd.splitting_type().unwrap();
            prop_assert_eq!(st.c + st.d, hd.degree_of_v());
            let mut prev = 0;
            for n in -(a.max(b) + 2)..=2 {
                let v = hd.h0_of_twist(n);
                prop_assert!(v >= prev);
                prev = v;
            }
        }

        #[test]
        fn presentation_hits_target(c in -3i64..4, gap in 0i64..4, extra in -1i64..3, seed in 0u64..1000) {
            let d = c - gap;
            let l = (gap + extra).max(1) as usize;
            prop_assume!(l as i64 > gap - 2);
            let pool: Vec<Rational> = (-4..5).map(int).collect();
            let hd = make_presentation(c, d, l, &pool, seed).unwrap();
            prop_assert_eq!(hd.splitting_type().unwrap(), SplittingType { c, d });
        }
    }
}
