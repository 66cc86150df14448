use rayon::prelude::*;
use serde_json::{json, Value};

use super::document::{BuildDocument, InstanceDocument};
use super::report::Report;
use crate::algebra::{char_poly, Matrix, Rational, UniPoly};
use crate::gen;
use crate::higgs::{
    check_fiber_condition, decompose, perturb_at_point, random_valid_instance, reconstruct, HiggsPair,
    VTwistedHiggsField,
};
use crate::projective_line::TwistedEndo;
use crate::spectral::{
    backward_correspondence, build_spectral_curve, certify_stability, char_coefficients, eigenvalue_condition,
    fiber_points, forward_correspondence, invariant_line_search_r2, is_integral, eigenspace_invariance_check, Integrality, Sign,
};

pub const PROPERTIES: [&str; 12] = [
    "round_trip",
    "injectivity",
    "fiber_conjugation_invariance",
    "fiber_implies_eigenvalue",
    "linearity",
    "display_consistency",
    "char_conjugation_invariance",
    "fiber_trace",
    "eigenspace_invariance",
    "spectral_round_trip_a",
    "spectral_round_trip_b",
    "stability_oracle",
];

const EIGENSPACE_SAMPLES: usize = 10;

#[derive(Debug)]
struct Failure {
    property: &'static str,
    detail: String,
    instance: Value,
}

fn field_doc(f: &VTwistedHiggsField) -> Value {
    InstanceDocument::from_field(f).to_value()
}

fn fail(property: &'static str, detail: impl ToString, instance: Value) -> Failure {
    Failure { property, detail: detail.to_string(), instance }
}

/// Per-instance seeds spread out from the command seed.
fn derive(seed: u64, index: u64, stream: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xBF58_476D_1CE4_E5B9) ^ stream.wrapping_mul(0x94D0_49BB_1331_11EB)
}

fn constant_invertible(rng: &mut impl rand::Rng, r: usize) -> (Matrix<UniPoly>, Matrix<UniPoly>) {
    use num::Zero;
    loop {
        let g = Matrix::from_fn(r, r, Rational::zero(), |_, _| Rational::from_integer(rng.gen_range(-2i64..=2).into()));
        if let Some(gi) = g.inverse() {
            let lift = |m: &Matrix<Rational>| m.map(UniPoly::zero(), |c| UniPoly::constant(c.clone()));
            return (lift(&g), lift(&gi));
        }
    }
}

fn conjugate(t: &TwistedEndo, g: &Matrix<UniPoly>, gi: &Matrix<UniPoly>) -> TwistedEndo {
    TwistedEndo { source: t.source.clone(), twist: t.twist, entries: g.mul(&t.entries).mul(gi) }
}

fn higgs_properties(f: &VTwistedHiggsField, seed: u64, index: u64, sign: Sign) -> Result<(), Failure> {
    let p = f.pair();
    let h = f.hecke();
    let doc = || field_doc(f);
    let mut rng = gen::rng(derive(seed, index, 1));

    let (theta, theta_prime) = decompose(f);
    let again = HiggsPair::new(theta, theta_prime).and_then(|q| reconstruct(&q, h));
    if again.as_ref() != Ok(f) {
        return Err(fail("round_trip", "reconstruct(decompose(F)) differs from F", doc()));
    }

    for i in 0..h.len() {
        let c = gen::small_rational(&mut rng, true);
        if let Some(q) = perturb_at_point(p, h, i, &c) {
            if q == *p || reconstruct(&q, h).is_ok() {
                let bad = InstanceDocument::from_pair(&q, h).to_value();
                return Err(fail("injectivity", format!("perturbation at point {i} accepted"), bad));
            }
        }
    }

    let (g, gi) = constant_invertible(&mut rng, p.rank());
    let conj = HiggsPair::new(conjugate(&p.theta, &g, &gi), conjugate(&p.theta_prime, &g, &gi)).expect("same bundle");
    let before: Vec<bool> = check_fiber_condition(p, h).points.iter().map(|q| q.ok).collect();
    let after: Vec<bool> = check_fiber_condition(&conj, h).points.iter().map(|q| q.ok).collect();
    if before != after {
        return Err(fail("fiber_conjugation_invariance", "fiber verdicts change under conjugation", doc()));
    }

    match eigenvalue_condition(p, h, sign) {
        Ok(v) => {
            if let Some(bad) = v.iter().find(|v| !v.ok) {
                let detail = format!("eigenvalue condition fails at x = {} ({})", bad.x, bad.minimal_polynomial);
                return Err(fail("fiber_implies_eigenvalue", detail, doc()));
            }
        }
        Err(e) => return Err(fail("fiber_implies_eigenvalue", e, doc())),
    }

    let second = (0..=3u32).find_map(|budget| random_valid_instance(h, &p.e, budget, derive(seed, index, 2)).ok());
    if let Some(other) = second {
        let (c1, c2) = (gen::small_rational(&mut rng, false), gen::small_rational(&mut rng, false));
        let combine = |a: &TwistedEndo, b: &TwistedEndo| TwistedEndo {
            source: a.source.clone(),
            twist: a.twist,
            entries: a.entries.map(UniPoly::zero(), |e| e.scale(&c1)).add(&b.entries.map(UniPoly::zero(), |e| e.scale(&c2))),
        };
        let q = other.pair();
        let sum = HiggsPair::new(combine(&p.theta, &q.theta), combine(&p.theta_prime, &q.theta_prime)).expect("same bundle");
        if sum.validate().is_err() || !check_fiber_condition(&sum, h).all_ok() {
            let bad = InstanceDocument::from_pair(&sum, h).to_value();
            return Err(fail("linearity", "linear combination leaves the valid set", bad));
        }
    }

    let cd = char_coefficients(&p.theta).map_err(|e| fail("display_consistency", e, doc()))?;
    let chi = char_poly(&p.theta.entries).map_err(|e| fail("display_consistency", e, doc()))?;
    if *build_spectral_curve(&cd).chi() != chi {
        return Err(fail("display_consistency", "coefficients do not rebuild the characteristic polynomial", doc()));
    }

    let conj_cd = char_coefficients(&conj.theta).map_err(|e| fail("char_conjugation_invariance", e, doc()))?;
    if conj_cd.coefficients.iter().map(|s| s.poly()).ne(cd.coefficients.iter().map(|s| s.poly())) {
        return Err(fail("char_conjugation_invariance", "coefficients change under conjugation", doc()));
    }

    let s1 = cd.coefficients[0].poly();
    for _ in 0..3 {
        let x0 = gen::small_rational(&mut rng, false);
        let pts = fiber_points(&chi, &x0).map_err(|e| fail("fiber_trace", e, doc()))?;
        let total = pts.iter().fold(Rational::from_integer(0.into()), |acc, pt| {
            acc + pt.y.trace() * Rational::from_integer((pt.multiplicity as i64).into())
        });
        if total != s1.eval(&x0) {
            return Err(fail("fiber_trace", format!("trace mismatch at x = {x0}"), doc()));
        }
    }

    for _ in 0..EIGENSPACE_SAMPLES {
        let x0 = gen::small_rational(&mut rng, false);
        match eigenspace_invariance_check(p, &x0) {
            Ok(true) => {}
            Ok(false) => return Err(fail("eigenspace_invariance", format!("fails at x = {x0}"), doc())),
            Err(e) => return Err(fail("eigenspace_invariance", e, doc())),
        }
    }
    Ok(())
}

fn spectral_properties(seed: u64, index: u64, sign: Sign) -> Result<(), Failure> {
    let (data, h) = gen::random_spectral_pair(derive(seed, index, 3));
    let build_doc = || serde_json::to_value(BuildDocument { spectral: data.clone(), hecke: h.clone() }).expect("plain data");
    let f = backward_correspondence(&data, &h, sign).map_err(|e| fail("spectral_round_trip_a", e, build_doc()))?;
    let with_spectral = || {
        let mut d = InstanceDocument::from_field(&f);
        d.spectral = Some(data.clone());
        d.to_value()
    };
    let back = forward_correspondence(&f, sign).map_err(|e| fail("spectral_round_trip_a", e, with_spectral()))?;
    if back != data {
        return Err(fail("spectral_round_trip_a", format!("recovered psi = {}", back.psi), with_spectral()));
    }
    let g = backward_correspondence(&back, &h, sign).map_err(|e| fail("spectral_round_trip_b", e, with_spectral()))?;
    if g.pair() != f.pair() {
        return Err(fail("spectral_round_trip_b", "rebuilt pair differs", with_spectral()));
    }

    let reducible = index % 2 == 1;
    let r2 = gen::random_rank2_field(derive(seed, index, 4), reducible);
    let doc = || field_doc(&r2);
    let stability = certify_stability(&r2).map_err(|e| fail("stability_oracle", e, doc()))?;
    let line = invariant_line_search_r2(r2.pair()).map_err(|e| fail("stability_oracle", e, doc()))?;
    if stability.is_stable() && line.is_some() {
        return Err(fail("stability_oracle", "invariant line on a stable field", doc()));
    }
    let curve = crate::spectral::SpectralCurve::of_endo(&r2.pair().theta).map_err(|e| fail("stability_oracle", e, doc()))?;
    let cert = is_integral(&curve).map_err(|e| fail("stability_oracle", e, doc()))?;
    if matches!(cert, Integrality::Reducible { .. }) && line.is_none() {
        return Err(fail("stability_oracle", "reducible curve without an invariant line", doc()));
    }
    Ok(())
}

fn run_instance(seed: u64, index: u64, sign: Sign) -> Result<(), Failure> {
    let f = gen::random_field(derive(seed, index, 0));
    higgs_properties(&f, seed, index, sign)?;
    spectral_properties(seed, index, sign)
}

pub(super) fn selftest(seed: u64, count: usize, sign: Sign) -> Report {
    let mut r = Report::new("selftest", sign);
    r.seed = Some(seed);
    let results: Vec<Result<(), Failure>> =
        (0..count as u64).into_par_iter().map(|i| run_instance(seed, i, sign)).collect();
    if count == 0 {
        return r;
    }
    for name in PROPERTIES {
        let ok = results.iter().all(|res| !matches!(res, Err(f) if f.property == name));
        r.verdict(name, ok);
    }
    r.certificate("instances", count);
    if let Some((index, f)) = results.iter().enumerate().find_map(|(i, res)| res.as_ref().err().map(|f| (i, f))) {
        r.fail(f.property, format!("instance {index}: {}", f.detail));
        r.certificate("counterexample", json!({"index": index, "property": f.property, "detail": f.detail}));
        r.instance = Some(f.instance.clone());
    }
    r
}
