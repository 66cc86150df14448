//! Characteristic data of `Theta`, the spectral curve `chi(x, t) = 0`, fiberwise
//! eigen-analysis, and the passage between pairs `(Theta, Theta')` and
//! multipliers `psi` on the spectral curve.

use std::fmt;
use std::sync::Arc;

use num::traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::factor::factor_rationals;
use crate::algebra::function_field::{
    repeated_factor, smooth_rational_point, split_over_function_field, FunctionFieldSplit, IrreducibilityWitness,
};
use crate::algebra::matrix::{companion_matrix, evaluate, multiplication_matrix, restrict};
use crate::algebra::scalar::fmt_rational;
use crate::algebra::{
    char_poly, generalized_eigenspace, nilpotency_test, parse_bipoly, parse_unipoly, AlgebraError, BiPoly, Matrix,
    NumberField, NumberFieldElement, Rational, RationalFunction, Ring, UniPoly,
};
use crate::hecke::HeckeData;
use crate::higgs::{check_commutation, reconstruct, HiggsError, HiggsPair, VTwistedHiggsField};
use crate::projective_line::{validate_twisted_endo, LineBundle, Section, SplitBundle, TwistedEndo};

/// How many integer base points are tried when looking for a smooth rational
/// point on an integral curve.
const SMOOTH_POINT_TRIES: usize = 24;

/// Sign in `Theta'|_y - sign * lambda * y` being nilpotent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn apply(self, q: &Rational) -> Rational {
        match self {
            Sign::Plus => q.clone(),
            Sign::Minus => -q.clone(),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            _ => Err(format!("sign must be +1 or -1, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Higgs(#[from] HiggsError),
    #[error("invalid spectral curve: {0}")]
    Curve(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("spectral curve is not integral: {0}")]
    NonIntegral(Box<Integrality>),
    #[error("Theta' is not a polynomial in Theta over Q(x)")]
    NotInCommutant,
    #[error("eigenvalue condition fails at {}", failures.iter().map(|f| format!("x = {} ({})", f.x, f.minimal_polynomial)).collect::<Vec<_>>().join(", "))]
    EigenvalueCondition { failures: Vec<EigenVerdict> },
    #[error("multiplier has denominator {0}; only polynomial multipliers are supported")]
    NonPolynomialMultiplier(String),
    #[error("multiplication matrix violates the degree bounds: {}", .0.join("; "))]
    DegreeBound(Vec<String>),
    #[error("invariant line search supports rank 2 only, got rank {0}")]
    UnsupportedRank(usize),
}

/// `s_1, ..., s_r` with `s_i` a section of `O(i a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharData {
    pub a: i64,
    pub coefficients: Vec<Section>,
}

/// `s_i = tr(wedge^i Theta) = (-1)^i [t^(r-i)] det(t I - Theta)`.
pub fn char_coefficients(theta: &TwistedEndo) -> Result<CharData, SpectralError> {
    let chi = char_poly(&theta.entries)?;
    let r = theta.rank();
    let a = theta.twist.0;
    let coefficients = (1..=r)
        .map(|i| {
            let c = chi.coeff_t(r - i);
            let s = if i % 2 == 0 { c } else { -&c };
            Section::new(LineBundle(i as i64 * a), s).map_err(|e| SpectralError::Curve(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    Ok(CharData { a, coefficients })
}

pub fn build_spectral_curve(c: &CharData) -> SpectralCurve {
    let r = c.coefficients.len();
    let mut coeffs = vec![UniPoly::zero(); r + 1];
    coeffs[r] = UniPoly::one();
    for (k, s) in c.coefficients.iter().enumerate() {
        let i = k + 1;
        coeffs[r - i] = if i % 2 == 0 { s.poly().clone() } else { -s.poly() };
    }
    SpectralCurve { chi: BiPoly::new(coeffs), a: c.a, r }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveJson", into = "CurveJson")]
pub struct SpectralCurve {
    chi: BiPoly,
    a: i64,
    r: usize,
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    chi: String,
    a: i64,
    r: usize,
}

impl TryFrom<CurveJson> for SpectralCurve {
    type Error = String;
    fn try_from(j: CurveJson) -> Result<Self, String> {
        let chi = parse_bipoly(&j.chi).map_err(|e| format!("chi: {e}"))?;
        SpectralCurve::new(chi, j.a, j.r).map_err(|e| e.to_string())
    }
}

impl From<SpectralCurve> for CurveJson {
    fn from(c: SpectralCurve) -> Self {
        CurveJson { chi: c.chi.to_string(), a: c.a, r: c.r }
    }
}

impl SpectralCurve {
    /// Checks that `chi` is monic of degree `r` with `deg_x [t^(r-i)] <= i a`.
    pub fn new(chi: BiPoly, a: i64, r: usize) -> Result<Self, SpectralError> {
        if chi.t_degree() != Some(r) || !chi.is_monic_in_t() || r == 0 {
            return Err(SpectralError::Curve(format!("chi = {chi} must be monic of t-degree {r} >= 1")));
        }
        for i in 1..=r {
            let c = chi.coeff_t(r - i);
            if !c.is_zero() && c.degree_i64() > i as i64 * a {
                return Err(SpectralError::Curve(format!(
                    "coefficient of t^{} has x-degree {} > {}",
                    r - i,
                    c.degree_i64(),
                    i as i64 * a
                )));
            }
        }
        Ok(SpectralCurve { chi, a, r })
    }

    pub fn of_endo(theta: &TwistedEndo) -> Result<Self, SpectralError> {
        Ok(build_spectral_curve(&char_coefficients(theta)?))
    }

    pub fn chi(&self) -> &BiPoly {
        &self.chi
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn r(&self) -> usize {
        self.r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GeometricStatus {
    /// A rational point where `d chi/dt` is nonzero; an integral curve
    /// through such a point stays irreducible over the algebraic closure.
    SmoothRationalPoint { x: String, y: String },
    Uncertified,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Integrality {
    Integral { witness: IrreducibilityWitness, geometric: GeometricStatus },
    NonReduced { repeated_factor: BiPoly },
    Reducible { factor: BiPoly, cofactor: BiPoly },
}

impl Integrality {
    pub fn is_integral(&self) -> bool {
        matches!(self, Integrality::Integral { .. })
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Integrality::Integral { witness, geometric } => {
                let w = match witness {
                    IrreducibilityWitness::Linear => json!({"kind": "linear"}),
                    IrreducibilityWitness::Specialization { x0, image } => json!({
                        "kind": "irreducible_specialization",
                        "x": fmt_rational(x0),
                        "image": image.display_in("t"),
                    }),
                    IrreducibilityWitness::ExhaustedSearch { x0, local_factors, precision } => json!({
                        "kind": "exhausted_factor_search",
                        "x": fmt_rational(x0),
                        "local_factors": local_factors.iter().map(|f| f.display_in("t")).collect::<Vec<_>>(),
                        "precision": precision,
                    }),
                };
                json!({"integral": true, "witness": w, "geometric": geometric})
            }
            Integrality::NonReduced { repeated_factor } => {
                json!({"integral": false, "reason": "non_reduced", "repeated_factor": repeated_factor.to_string()})
            }
            Integrality::Reducible { factor, cofactor } => json!({
                "integral": false,
                "reason": "reducible",
                "factor": factor.to_string(),
                "cofactor": cofactor.to_string(),
            }),
        }
    }
}

impl fmt::Display for Integrality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integrality::Integral { .. } => write!(f, "integral"),
            Integrality::NonReduced { repeated_factor } => write!(f, "non-reduced, repeated factor {repeated_factor}"),
            Integrality::Reducible { factor, .. } => write!(f, "reducible, factor {factor}"),
        }
    }
}

/// Squarefree and irreducible over `Q(x)`, with a certificate either way.
pub fn is_integral(s: &SpectralCurve) -> Result<Integrality, SpectralError> {
    if let Some(g) = repeated_factor(&s.chi) {
        return Ok(Integrality::NonReduced { repeated_factor: g });
    }
    match split_over_function_field(&s.chi)? {
        FunctionFieldSplit::Factor { factor, cofactor } => {
            // report the factor of lowest t-degree, preferring one that involves x
            let key = |f: &BiPoly| (f.t_degree(), std::cmp::Reverse(f.x_degree()));
            let (factor, cofactor) = if key(&cofactor) < key(&factor) { (cofactor, factor) } else { (factor, cofactor) };
            Ok(Integrality::Reducible { factor, cofactor })
        }
        FunctionFieldSplit::Irreducible(witness) => {
            let geometric = match smooth_rational_point(&s.chi, SMOOTH_POINT_TRIES)? {
                Some((x, y)) => GeometricStatus::SmoothRationalPoint { x: fmt_rational(&x), y: fmt_rational(&y) },
                None => GeometricStatus::Uncertified,
            };
            Ok(Integrality::Integral { witness, geometric })
        }
    }
}

/// A Galois class of points over `base_x`: a root `y` of one irreducible
/// factor of `chi(base_x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFiberPoint {
    pub base_x: Rational,
    pub field: Arc<NumberField>,
    pub y: NumberFieldElement,
    pub multiplicity: usize,
}

impl SpectralFiberPoint {
    pub fn minimal_polynomial(&self) -> String {
        self.field.minimal_polynomial().display_in("t")
    }
}

pub fn fiber_points(chi: &BiPoly, x0: &Rational) -> Result<Vec<SpectralFiberPoint>, SpectralError> {
    let image = chi.eval_x(x0);
    let fac = factor_rationals(&image)?;
    Ok(fac
        .factors
        .into_iter()
        .map(|(f, multiplicity)| {
            let field = NumberField::from_irreducible(f);
            SpectralFiberPoint { base_x: x0.clone(), y: field.generator(), field, multiplicity }
        })
        .collect())
}

fn over_field(m: &Matrix<UniPoly>, field: &Arc<NumberField>, x0: &Rational) -> Matrix<NumberFieldElement> {
    evaluate(m, &field.element(x0.clone()))
}

/// At every fiber point over `x0`, the generalized eigenspace of `Theta(x0)`
/// is `Theta'(x0)`-invariant and the two restrictions commute.
pub fn eigenspace_invariance_check(p: &HiggsPair, x0: &Rational) -> Result<bool, SpectralError> {
    let chi = char_poly(&p.theta.entries)?;
    for pt in fiber_points(&chi, x0)? {
        let m = over_field(&p.theta.entries, &pt.field, x0);
        let mp = over_field(&p.theta_prime.entries, &pt.field, x0);
        let space = generalized_eigenspace(&m, &pt.y)?;
        let (Some(rm), Some(rmp)) = (restrict(&m, &space), restrict(&mp, &space)) else {
            return Ok(false);
        };
        if !rm.commutator(&rmp).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenVerdict {
    pub x: String,
    pub minimal_polynomial: String,
    pub multiplicity: usize,
    pub ok: bool,
}

/// For each marked point `x_i` and fiber point `y` over it, the restriction of
/// `Theta'(x_i)` to the generalized eigenspace of `y` minus
/// `sign * lambda_i * y` is nilpotent.
pub fn eigenvalue_condition(p: &HiggsPair, h: &HeckeData, sign: Sign) -> Result<Vec<EigenVerdict>, SpectralError> {
    let chi = char_poly(&p.theta.entries)?;
    let mut out = Vec::new();
    for hp in &h.points {
        for pt in fiber_points(&chi, &hp.x)? {
            let m = over_field(&p.theta.entries, &pt.field, &hp.x);
            let mp = over_field(&p.theta_prime.entries, &pt.field, &hp.x);
            let space = generalized_eigenspace(&m, &pt.y)?;
            let target = pt.y.mul(&pt.y.embed(&sign.apply(&hp.lambda)));
            let ok = restrict(&mp, &space).is_some_and(|rmp| nilpotency_test(&rmp.sub_scalar(&target)));
            out.push(EigenVerdict {
                x: fmt_rational(&hp.x),
                minimal_polynomial: pt.minimal_polynomial(),
                multiplicity: pt.multiplicity,
                ok,
            });
        }
    }
    Ok(out)
}

/// `psi = sum_k p_k(x) t^k / q(x)` with `Theta' = psi(x, Theta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplier {
    pub psi: BiPoly,
    /// Monic.
    pub denominator: UniPoly,
}

/// Writes `Theta'` as a polynomial in `Theta` over `Q(x)`; requires commuting
/// matrices and an integral spectral curve.
pub fn commutant_coordinates(p: &HiggsPair) -> Result<Multiplier, SpectralError> {
    let curve = SpectralCurve::of_endo(&p.theta)?;
    let cert = is_integral(&curve)?;
    if !cert.is_integral() {
        return Err(SpectralError::NonIntegral(Box::new(cert)));
    }
    if !check_commutation(p) {
        return Err(SpectralError::NotInCommutant);
    }
    solve_commutant(p)
}

fn solve_commutant(p: &HiggsPair) -> Result<Multiplier, SpectralError> {
    let r = p.rank();
    let zero = RationalFunction::from_poly(UniPoly::zero());
    let to_rf = |m: &Matrix<UniPoly>| m.map(zero.clone(), |e| RationalFunction::from_poly(e.clone()));
    let theta = to_rf(&p.theta.entries);
    let mut powers = vec![Matrix::identity(r, zero.clone())];
    for k in 1..r {
        powers.push(powers[k - 1].mul(&theta));
    }
    let system = Matrix::from_fn(r * r, r, zero.clone(), |row, k| powers[k].get(row / r, row % r).clone());
    let rhs = to_rf(&p.theta_prime.entries);
    let rhs = Matrix::from_fn(r * r, 1, zero.clone(), |row, _| rhs.get(row / r, row % r).clone());
    let sol = system.solve(&rhs).ok_or(SpectralError::NotInCommutant)?;
    let mut q = UniPoly::one();
    for k in 0..r {
        let d = sol.get(k, 0).denominator();
        q = (&q * d).exact_div(&q.gcd(d))?;
    }
    let coeffs: Vec<UniPoly> = (0..r)
        .map(|k| {
            let c = sol.get(k, 0);
            &c.numerator().clone() * &q.exact_div(c.denominator()).expect("lcm")
        })
        .collect();
    let psi = BiPoly::new(coeffs);
    // exact re-substitution: sum p_k Theta^k = q Theta'
    let mut acc = Matrix::zeros(r, r, UniPoly::zero());
    let mut pw = Matrix::identity(r, UniPoly::zero());
    for k in 0..r {
        acc = acc.add(&pw.scale(&psi.coeff_t(k)));
        pw = pw.mul(&p.theta.entries);
    }
    if acc != p.theta_prime.entries.scale(&q) {
        return Err(SpectralError::NotInCommutant);
    }
    Ok(Multiplier { psi, denominator: q })
}

/// A multiplier on an integral spectral curve together with the twist of
/// `Theta'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectralDataJson", into = "SpectralDataJson")]
pub struct SpectralData {
    pub curve: SpectralCurve,
    pub psi: BiPoly,
    pub psi_denominator: UniPoly,
    pub b: i64,
}

#[derive(Serialize, Deserialize)]
struct SpectralDataJson {
    chi: String,
    a: i64,
    r: usize,
    psi: String,
    #[serde(default = "one_string")]
    psi_denominator: String,
    b: i64,
}

fn one_string() -> String {
    "1".into()
}

impl TryFrom<SpectralDataJson> for SpectralData {
    type Error = String;
    fn try_from(j: SpectralDataJson) -> Result<Self, String> {
        let curve = SpectralCurve::try_from(CurveJson { chi: j.chi, a: j.a, r: j.r })?;
        let psi = parse_bipoly(&j.psi).map_err(|e| format!("psi: {e}"))?;
        let den = parse_unipoly(&j.psi_denominator).map_err(|e| format!("psi_denominator: {e}"))?;
        SpectralData::new(curve, psi, den, j.b).map_err(|e| e.to_string())
    }
}

impl From<SpectralData> for SpectralDataJson {
    fn from(s: SpectralData) -> Self {
        SpectralDataJson {
            chi: s.curve.chi.to_string(),
            a: s.curve.a,
            r: s.curve.r,
            psi: s.psi.to_string(),
            psi_denominator: s.psi_denominator.to_string(),
            b: s.b,
        }
    }
}

impl SpectralData {
    /// Reduces `psi` modulo `chi` and normalizes the denominator to be monic.
    pub fn new(curve: SpectralCurve, psi: BiPoly, denominator: UniPoly, b: i64) -> Result<Self, SpectralError> {
        if denominator.is_zero() {
            return Err(SpectralError::Curve("zero denominator".into()));
        }
        let lc = denominator.leading().recip();
        let psi = psi.rem_t(&curve.chi)?.scale(&lc);
        Ok(SpectralData { curve, psi, psi_denominator: denominator.monic(), b })
    }
}

/// From a field with integral spectral curve to `(chi, psi, b)`.
pub fn forward_correspondence(f: &VTwistedHiggsField, sign: Sign) -> Result<SpectralData, SpectralError> {
    let p = f.pair();
    let h = f.hecke();
    let curve = SpectralCurve::of_endo(&p.theta)?;
    let mult = commutant_coordinates(p)?;
    let verdicts = eigenvalue_condition(p, h, sign)?;
    let failures: Vec<EigenVerdict> = verdicts.into_iter().filter(|v| !v.ok).collect();
    if !failures.is_empty() {
        return Err(SpectralError::EigenvalueCondition { failures });
    }
    // psi(x_i, y) = sign lambda_i y wherever the denominator is a unit
    for hp in &h.points {
        let q = mult.denominator.eval(&hp.x);
        if q.is_zero() {
            continue;
        }
        for pt in fiber_points(curve.chi(), &hp.x)? {
            let val = mult.psi.eval_point(&hp.x, &pt.y).mul(&pt.y.embed(&q.recip()));
            let target = pt.y.mul(&pt.y.embed(&sign.apply(&hp.lambda)));
            if val != target {
                return Err(SpectralError::EigenvalueCondition {
                    failures: vec![EigenVerdict {
                        x: fmt_rational(&hp.x),
                        minimal_polynomial: pt.minimal_polynomial(),
                        multiplicity: pt.multiplicity,
                        ok: false,
                    }],
                });
            }
        }
    }
    SpectralData::new(curve, mult.psi, mult.denominator, p.b())
}

/// Twists `0, -a, ..., -(r-1)a` of the pushforward of the structure sheaf.
pub fn structure_bundle(a: i64, r: usize) -> Result<SplitBundle, SpectralError> {
    SplitBundle::new((0..r as i64).map(|k| -k * a).collect()).map_err(|e| SpectralError::Curve(e.to_string()))
}

/// From `(chi, psi, b)` on the structure module to a field: `Theta` is the
/// companion matrix of `chi` and `Theta'` is multiplication by `psi`, both
/// in the basis `1, t, ..., t^(r-1)`.
///
/// At each marked point `psi(x_i, t) - sign lambda_i t` must vanish modulo
/// `chi(x_i, t)`, which is checked one primary factor at a time.
pub fn backward_correspondence(s: &SpectralData, h: &HeckeData, sign: Sign) -> Result<VTwistedHiggsField, SpectralError> {
    let cert = is_integral(&s.curve)?;
    if !cert.is_integral() {
        return Err(SpectralError::NonIntegral(Box::new(cert)));
    }
    if s.psi_denominator != UniPoly::one() {
        return Err(SpectralError::NonPolynomialMultiplier(s.psi_denominator.to_string()));
    }
    if h.a != s.curve.a || h.b != s.b {
        return Err(SpectralError::Inconsistent(format!(
            "Hecke degrees ({}, {}) differ from curve twist {} and multiplier twist {}",
            h.a, h.b, s.curve.a, s.b
        )));
    }
    h.validate().map_err(HiggsError::from)?;
    let chi = &s.curve.chi;
    let mut failures = Vec::new();
    for hp in &h.points {
        let image = chi.eval_x(&hp.x);
        let residual = &s.psi.eval_x(&hp.x) - &UniPoly::monomial(sign.apply(&hp.lambda), 1);
        for (f, m) in factor_rationals(&image)?.factors {
            let ok = residual.rem(&f.pow(m as u32))?.is_zero();
            if !ok {
                failures.push(EigenVerdict {
                    x: fmt_rational(&hp.x),
                    minimal_polynomial: f.display_in("t"),
                    multiplicity: m,
                    ok,
                });
            }
        }
    }
    if !failures.is_empty() {
        return Err(SpectralError::EigenvalueCondition { failures });
    }
    let e = structure_bundle(s.curve.a, s.curve.r)?;
    let theta = TwistedEndo::new(e.clone(), s.curve.a, companion_matrix(chi)?)
        .map_err(|err| SpectralError::Curve(err.to_string()))?;
    let theta_prime = TwistedEndo::new(e, s.b, multiplication_matrix(&s.psi, chi)?)
        .map_err(|err| SpectralError::Curve(err.to_string()))?;
    let violations = validate_twisted_endo(&theta_prime);
    if !violations.is_empty() {
        return Err(SpectralError::DegreeBound(
            violations
                .iter()
                .map(|v| format!("entry ({},{}) has degree {} > {}", v.row, v.col, v.degree, v.bound))
                .collect(),
        ));
    }
    let pair = HiggsPair::new(theta, theta_prime)?;
    Ok(reconstruct(&pair, h)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stability {
    Stable(Integrality),
    Unknown(Integrality),
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        matches!(self, Stability::Stable(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Stability::Stable(_) => "stable",
            Stability::Unknown(_) => "unknown",
        }
    }
}

/// Stable when the spectral curve of `Theta` is integral: an invariant
/// subbundle would give a proper factor of `chi`.
pub fn certify_stability(f: &VTwistedHiggsField) -> Result<Stability, SpectralError> {
    let curve = SpectralCurve::of_endo(&f.pair().theta)?;
    let cert = is_integral(&curve)?;
    Ok(if cert.is_integral() { Stability::Stable(cert) } else { Stability::Unknown(cert) })
}

/// A `Theta`-eigenline `v(x)` with eigenvalue `p(x)`, and whether `Theta'`
/// preserves it.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantLine {
    pub vector: Vec<UniPoly>,
    pub eigenvalue: UniPoly,
    pub theta_prime_invariant: bool,
}

/// For rank 2: a line over `Q(x)` invariant under `Theta` exists iff the
/// discriminant `c1^2 - 4 c0` of `chi = t^2 + c1 t + c0` is a square in
/// `Q[x]`; the line is then the kernel of `Theta - p I`.
pub fn invariant_line_search_r2(p: &HiggsPair) -> Result<Option<InvariantLine>, SpectralError> {
    if p.rank() != 2 {
        return Err(SpectralError::UnsupportedRank(p.rank()));
    }
    let chi = char_poly(&p.theta.entries)?;
    let (c0, c1) = (chi.coeff_t(0), chi.coeff_t(1));
    let disc = &(&c1 * &c1) - &c0.scale(&Rational::from_integer(4.into()));
    let Some(s) = poly_sqrt(&disc) else {
        return Ok(None);
    };
    let half = Rational::new(1.into(), 2.into());
    let eigenvalue = (&s - &c1).scale(&half);
    let zero = RationalFunction::from_poly(UniPoly::zero());
    let shifted = p.theta.entries.sub_scalar(&eigenvalue).map(zero, |e| RationalFunction::from_poly(e.clone()));
    let kernel = shifted.kernel();
    let v = kernel.first().expect("eigenvalue of Theta");
    let vector = clear_denominators(v);
    let w = p.theta_prime.entries.apply(&vector);
    let det = &(&vector[0] * &w[1]) - &(&vector[1] * &w[0]);
    Ok(Some(InvariantLine { vector, eigenvalue, theta_prime_invariant: det.is_zero() }))
}

fn clear_denominators(v: &[RationalFunction]) -> Vec<UniPoly> {
    let mut q = UniPoly::one();
    for c in v {
        q = (&q * c.denominator()).exact_div(&q.gcd(c.denominator())).expect("lcm");
    }
    let polys: Vec<UniPoly> =
        v.iter().map(|c| c.numerator() * &q.exact_div(c.denominator()).expect("lcm")).collect();
    let g = polys.iter().fold(UniPoly::zero(), |acc, p| acc.gcd(p));
    polys.iter().map(|p| p.exact_div(&g).expect("gcd divides")).collect()
}

/// Exact square root in `Q[x]`, if one exists.
pub fn poly_sqrt(p: &UniPoly) -> Option<UniPoly> {
    if p.is_zero() {
        return Some(UniPoly::zero());
    }
    let d = p.degree()?;
    if d % 2 == 1 {
        return None;
    }
    let lead = rational_sqrt(&p.leading())?;
    let h = d / 2;
    // determine coefficients from the top: s_{h-k} from [x^(d-k)]
    let mut s = vec![Rational::zero(); h + 1];
    s[h] = lead.clone();
    let two_lead = &lead * Rational::from_integer(2.into());
    for k in 1..=h {
        let mut acc = p.coeff(d - k);
        for i in 1..k {
            acc -= &s[h - i] * &s[h - (k - i)];
        }
        s[h - k] = acc / &two_lead;
    }
    let cand = UniPoly::new(s);
    (&cand * &cand == *p).then_some(cand)
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::hecke::HeckePoint;
    use crate::projective_line::TwistedEndoJson;
    use proptest::prelude::*;

    fn endo(twists: &[i64], n: i64, rows: &[&[&str]]) -> TwistedEndo {
        let json = TwistedEndoJson {
            twist: n,
            entries: rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
        };
        TwistedEndo::from_json(&json, &SplitBundle::new(twists.to_vec()).unwrap()).unwrap()
    }

    fn b(s: &str) -> BiPoly {
        parse_bipoly(s).unwrap()
    }

    fn u(s: &str) -> UniPoly {
        parse_unipoly(s).unwrap()
    }

    fn curve(s: &str, a: i64) -> SpectralCurve {
        let chi = b(s);
        let r = chi.t_degree().unwrap();
        SpectralCurve::new(chi, a, r).unwrap()
    }

    fn worked() -> VTwistedHiggsField {
        let t = endo(&[0, 0], 1, &[&["0", "1"], &["x", "0"]]);
        let h = HeckeData::new(1, 1, vec![HeckePoint::new(int(0), int(1))]);
        reconstruct(&HiggsPair::new(t.clone(), t).unwrap(), &h).unwrap()
    }

    fn scaled() -> (HiggsPair, HeckeData) {
        let t = endo(&[0, 0], 1, &[&["0", "1"], &["x", "0"]]);
        let tp = endo(&[0, 0], 2, &[&["0", "2*x"], &["2*x^2", "0"]]);
        (HiggsPair::new(t, tp).unwrap(), HeckeData::new(1, 2, vec![HeckePoint::new(int(1), int(2))]))
    }

    #[test]
    fn char_coefficient_examples() {
        let c = char_coefficients(&endo(&[0, 0], 1, &[&["0", "1"], &["x", "0"]])).unwrap();
        assert_eq!(c.coefficients[0].poly(), &UniPoly::zero());
        assert_eq!(c.coefficients[1].poly(), &u("-x"));
        let c = char_coefficients(&TwistedEndo::zero(SplitBundle::trivial(3), 1)).unwrap();
        assert!(c.coefficients.iter().all(|s| s.poly().is_zero()));
        assert_eq!(build_spectral_curve(&c).chi(), &b("t^3"));
        let c = char_coefficients(&endo(&[0, 0], 1, &[&["x", "0"], &["0", "x+1"]])).unwrap();
        assert_eq!(c.coefficients[0].poly(), &u("2*x + 1"));
        assert_eq!(c.coefficients[1].poly(), &u("x^2 + x"));
        assert_eq!(build_spectral_curve(&c).chi(), &b("(t - x)*(t - x - 1)"));
    }

    #[test]
    fn integrality_examples() {
        let c = is_integral(&curve("t^2 - x", 1)).unwrap();
        assert!(c.is_integral());
        assert!(matches!(c, Integrality::Integral { geometric: GeometricStatus::SmoothRationalPoint { .. }, .. }));
        match is_integral(&curve("(t - x)*(t - x - 1)", 1)).unwrap() {
            Integrality::Reducible { factor, cofactor } => {
                assert_eq!(&factor * &cofactor, b("(t - x)*(t - x - 1)"));
                assert!(factor == b("t - x") || cofactor == b("t - x"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(is_integral(&curve("t^2", 1)).unwrap(), Integrality::NonReduced { .. }));
    }

    #[test]
    fn fiber_point_examples() {
        let chi = b("t^2 - x");
        let pts = fiber_points(&chi, &int(0)).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!((pts[0].multiplicity, pts[0].y.as_rational()), (2, Some(int(0))));
        let pts = fiber_points(&chi, &int(1)).unwrap();
        let mut ys: Vec<Rational> = pts.iter().map(|p| p.y.as_rational().unwrap()).collect();
        ys.sort();
        assert_eq!(ys, vec![int(-1), int(1)]);
        let pts = fiber_points(&chi, &int(2)).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].minimal_polynomial(), "t^2 - 2");
    }

    #[test]
    fn eigenspace_invariance_examples() {
        assert!(eigenspace_invariance_check(worked().pair(), &int(3)).unwrap());
        let p = HiggsPair::new(endo(&[0, 0], 1, &[&["x", "0"], &["0", "0"]]), endo(&[0, 0], 1, &[&["0", "1"], &["0", "0"]]))
            .unwrap();
        assert!(!eigenspace_invariance_check(&p, &int(1)).unwrap());
        let z = TwistedEndo::zero(SplitBundle::trivial(2), 1);
        assert!(eigenspace_invariance_check(&HiggsPair::new(z.clone(), z).unwrap(), &int(5)).unwrap());
    }

    #[test]
    fn eigenvalue_examples() {
        let f = worked();
        let v = eigenvalue_condition(f.pair(), f.hecke(), Sign::Plus).unwrap();
        assert!(v.iter().all(|v| v.ok));
        let (p, h) = scaled();
        assert!(eigenvalue_condition(&p, &h, Sign::Plus).unwrap().iter().all(|v| v.ok));
        let flipped = HeckeData::new(1, 2, vec![HeckePoint::new(int(1), int(-2))]);
        assert!(eigenvalue_condition(&p, &flipped, Sign::Plus).unwrap().iter().any(|v| !v.ok));
        assert!(eigenvalue_condition(&p, &h, Sign::Minus).unwrap().iter().any(|v| !v.ok));
    }

    #[test]
    fn commutant_examples() {
        let m = commutant_coordinates(worked().pair()).unwrap();
        assert_eq!((m.psi, m.denominator), (b("t"), UniPoly::one()));
        let (p, _) = scaled();
        assert_eq!(commutant_coordinates(&p).unwrap().psi, b("2*x*t"));
        let t = endo(&[0, 0], 1, &[&["0", "1"], &["x", "0"]]);
        let tp = endo(&[0, 0], 1, &[&["x", "1"], &["x", "x"]]);
        assert_eq!(commutant_coordinates(&HiggsPair::new(t, tp).unwrap()).unwrap().psi, b("x + t"));
    }

    #[test]
    fn commutant_with_denominator() {
        // Theta' = Theta / x on t^2 = x^3
        let t = endo(&[0, 0], 2, &[&["0", "x^2"], &["x", "0"]]);
        let tp = endo(&[0, 0], 1, &[&["0", "x"], &["1", "0"]]);
        let m = commutant_coordinates(&HiggsPair::new(t, tp).unwrap()).unwrap();
        assert_eq!((m.psi, m.denominator), (b("t"), u("x")));
    }

    #[test]
    fn forward_examples() {
        let s = forward_correspondence(&worked(), Sign::Plus).unwrap();
        assert_eq!((s.curve.chi(), &s.psi), (&b("t^2 - x"), &b("t")));
        let (p, h) = scaled();
        let f = reconstruct(&p, &h).unwrap();
        assert_eq!(forward_correspondence(&f, Sign::Plus).unwrap().psi, b("2*x*t"));
        let d = endo(&[0, 0], 1, &[&["x", "0"], &["0", "x + 1"]]);
        let z = TwistedEndo::zero(SplitBundle::trivial(2), 1);
        let f = reconstruct(&HiggsPair::new(d, z).unwrap(), &HeckeData::new(1, 1, vec![])).unwrap();
        assert!(matches!(forward_correspondence(&f, Sign::Plus), Err(SpectralError::NonIntegral(_))));
    }

    #[test]
    fn backward_examples() {
        let s = SpectralData::new(curve("t^2 - x", 1), b("t"), UniPoly::one(), 1).unwrap();
        let h = HeckeData::new(1, 1, vec![HeckePoint::new(int(0), int(1))]);
        let f = backward_correspondence(&s, &h, Sign::Plus).unwrap();
        assert_eq!(f.pair().e.twists(), &[0, -1]);
        assert_eq!(f.pair().theta.to_json().entries, vec![vec!["0", "x"], vec!["1", "0"]]);
        assert_eq!(f.pair().theta_prime, TwistedEndo { twist: LineBundle(1), ..f.pair().theta.clone() });

        let s = SpectralData::new(curve("t^2 - x", 1), b("2*x*t"), UniPoly::one(), 2).unwrap();
        let h = HeckeData::new(1, 2, vec![HeckePoint::new(int(1), int(2))]);
        let f = backward_correspondence(&s, &h, Sign::Plus).unwrap();
        assert_eq!(f.pair().theta_prime.to_json().entries, vec![vec!["0", "2*x^2"], vec!["2*x", "0"]]);

        let s = SpectralData::new(curve("t^2 - x", 1), b("t"), UniPoly::one(), 1).unwrap();
        let h = HeckeData::new(1, 1, vec![HeckePoint::new(int(1), int(3))]);
        assert!(matches!(backward_correspondence(&s, &h, Sign::Plus), Err(SpectralError::EigenvalueCondition { .. })));
    }

    #[test]
    fn backward_checks_non_reduced_fibers() {
        // psi = 2t agrees with t at the reduced point y = 0 over x = 0 but
        // not on the double point
        let s = SpectralData::new(curve("t^2 - x", 1), b("2*t"), UniPoly::one(), 1).unwrap();
        let h = HeckeData::new(1, 1, vec![HeckePoint::new(int(0), int(1))]);
        assert!(matches!(backward_correspondence(&s, &h, Sign::Plus), Err(SpectralError::EigenvalueCondition { .. })));
    }

    #[test]
    fn stability_examples() {
        assert!(certify_stability(&worked()).unwrap().is_stable());
        let d = endo(&[0, 0], 1, &[&["x", "0"], &["0", "x + 1"]]);
        let z = TwistedEndo::zero(SplitBundle::trivial(2), 1);
        let f = reconstruct(&HiggsPair::new(d, z.clone()).unwrap(), &HeckeData::new(1, 1, vec![])).unwrap();
        assert!(!certify_stability(&f).unwrap().is_stable());
        let f = reconstruct(&HiggsPair::new(z.clone(), z).unwrap(), &HeckeData::new(1, 1, vec![])).unwrap();
        assert!(!certify_stability(&f).unwrap().is_stable());
    }

    #[test]
    fn invariant_line_examples() {
        let z = TwistedEndo::zero(SplitBundle::trivial(2), 1);
        let p = HiggsPair::new(endo(&[0, 0], 1, &[&["0", "1"], &["x", "0"]]), z.clone()).unwrap();
        assert_eq!(invariant_line_search_r2(&p).unwrap(), None);
        let p = HiggsPair::new(endo(&[0, 0], 1, &[&["x", "0"], &["0", "x+1"]]), z.clone()).unwrap();
        let line = invariant_line_search_r2(&p).unwrap().unwrap();
        assert!(line.vector == vec![UniPoly::zero(), UniPoly::one()] || line.vector == vec![UniPoly::one(), UniPoly::zero()]);
        assert!(line.theta_prime_invariant);
        let p = HiggsPair::new(endo(&[0, 0], 1, &[&["x", "1"], &["0", "x"]]), z).unwrap();
        let line = invariant_line_search_r2(&p).unwrap().unwrap();
        assert_eq!(line.vector, vec![UniPoly::one(), UniPoly::zero()]);
        let p3 = HiggsPair::new(TwistedEndo::zero(SplitBundle::trivial(3), 1), TwistedEndo::zero(SplitBundle::trivial(3), 1))
            .unwrap();
        assert_eq!(invariant_line_search_r2(&p3), Err(SpectralError::UnsupportedRank(3)));
    }

    #[test]
    fn json_spectral_data() {
        let s: SpectralData =
            serde_json::from_str(r#"{"chi":"t^2 - x","a":1,"r":2,"psi":"2*x*t","psi_denominator":"1","b":2}"#).unwrap();
        assert_eq!(s.psi, b("2*x*t"));
        let c: SpectralCurve = serde_json::from_str(r#"{"chi":"t^2 - x","a":1,"r":2}"#).unwrap();
        assert_eq!(c, s.curve);
        assert!(serde_json::from_str::<SpectralCurve>(r#"{"chi":"t^2 - x^3","a":1,"r":2}"#).is_err());
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(poly_sqrt(&u("x^2 + 2*x + 1")), Some(u("x + 1")));
        assert_eq!(poly_sqrt(&u("4*x^2 + 1")), None);
        assert_eq!(poly_sqrt(&u("1/4")), Some(u("1/2")));
        assert_eq!(poly_sqrt(&u("x")), None);
    }

    fn arb_matrix(r: usize) -> impl Strategy<Value = Matrix<UniPoly>> {
        prop::collection::vec(prop::collection::vec(-3i64..4, 0..3), r * r)
            .prop_map(move |cs| Matrix::from_fn(r, r, UniPoly::zero(), |i, j| UniPoly::from_ints(&cs[i * r + j])))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn conjugation_invariance(m in arb_matrix(3), g in prop::collection::vec(-2i64..3, 9)) {
            let g = Matrix::from_fn(3, 3, Rational::zero(), |i, j| int(g[i * 3 + j]));
            prop_assume!(g.determinant() != Rational::zero());
            let gi = g.inverse().unwrap();
            let lift = |q: &Matrix<Rational>| q.map(UniPoly::zero(), |c| UniPoly::constant(c.clone()));
            let conj = lift(&g).mul(&m).mul(&lift(&gi));
            let t1 = TwistedEndo::new(SplitBundle::trivial(3), 2, m).unwrap();
            let t2 = TwistedEndo::new(SplitBundle::trivial(3), 2, conj).unwrap();
            prop_assert_eq!(char_coefficients(&t1).unwrap(), char_coefficients(&t2).unwrap());
        }

        #[test]
        fn fiber_trace_identity(m in arb_matrix(3), x0 in -4i64..5) {
            let t = TwistedEndo::new(SplitBundle::trivial(3), 2, m).unwrap();
            let c = char_coefficients(&t).unwrap();
            let x0 = int(x0);
            let pts = fiber_points(build_spectral_curve(&c).chi(), &x0).unwrap();
            let total: usize = pts.iter().map(|p| p.multiplicity * p.field.degree()).sum();
            prop_assert_eq!(total, 3);
            let trace_sum = pts.iter().fold(Rational::zero(), |acc, p| acc + p.y.trace() * int(p.multiplicity as i64));
            prop_assert_eq!(trace_sum, c.coefficients[0].poly().eval(&x0));
        }
    }
}
