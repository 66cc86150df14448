use std::path::Path;

use serde_json::json;

use super::document::{BuildDocument, InputError, InstanceDocument};
use super::report::Report;
use crate::algebra::parse_rational;
use crate::algebra::scalar::fmt_rational;
use crate::gen;
use crate::hecke::make_presentation;
use crate::higgs::{check_commutation, check_fiber_condition, commutator, reconstruct, HiggsError};
use crate::spectral::{
    certify_stability, char_coefficients, eigenvalue_condition, fiber_points, forward_correspondence,
    backward_correspondence, is_integral, eigenspace_invariance_check, Sign, SpectralCurve, SpectralError,
};

fn higgs_kind(e: &HiggsError) -> &'static str {
    match e {
        HiggsError::Inconsistent(_) => "inconsistent",
        HiggsError::Hecke(_) => "hecke",
        HiggsError::Commutation { .. } => "commutation",
        HiggsError::FiberCondition { .. } => "fiber_condition",
        HiggsError::InfeasibleBudget { .. } => "infeasible_budget",
    }
}

fn spectral_kind(e: &SpectralError) -> &'static str {
    match e {
        SpectralError::Algebra(_) => "algebra",
        SpectralError::Higgs(h) => higgs_kind(h),
        SpectralError::Curve(_) => "curve",
        SpectralError::Inconsistent(_) => "inconsistent",
        SpectralError::NonIntegral(_) => "non_integral",
        SpectralError::NotInCommutant => "not_in_commutant",
        SpectralError::EigenvalueCondition { .. } => "eigenvalue_condition",
        SpectralError::NonPolynomialMultiplier(_) => "non_polynomial_multiplier",
        SpectralError::DegreeBound(_) => "degree_bound",
        SpectralError::UnsupportedRank(_) => "unsupported_rank",
    }
}

fn record_higgs_error(r: &mut Report, e: &HiggsError) {
    if let HiggsError::Commutation { commutator } = e {
        r.certificate("commutator", commutator);
    }
    r.fail(higgs_kind(e), e);
}

fn record_spectral_error(r: &mut Report, e: &SpectralError) {
    match e {
        SpectralError::NonIntegral(c) => {
            r.certificates.insert("integrality".into(), c.to_json());
        }
        SpectralError::EigenvalueCondition { failures } => r.certificate("eigenvalue_failures", failures),
        SpectralError::Higgs(h) => return record_higgs_error(r, h),
        _ => {}
    }
    r.fail(spectral_kind(e), e);
}

pub(super) fn check(src: &str, sign: Sign, seed: u64, samples: usize) -> Result<Report, InputError> {
    let doc = InstanceDocument::parse(src)?;
    let p = doc.pair()?;
    let h = &doc.hecke;
    let mut r = Report::new("check", sign);
    r.seed = Some(seed);

    match p.check_against(h) {
        Ok(()) => r.verdict("validate", true),
        Err(e) => {
            r.verdict("validate", false);
            r.certificate("validate", e.to_string());
        }
    }
    let commutes = check_commutation(&p);
    r.verdict("commutation", commutes);
    if !commutes {
        r.certificate("commutator", commutator(&p).to_json());
    }
    let fiber = check_fiber_condition(&p, h);
    r.verdict("fiber_condition", fiber.all_ok());
    r.certificate("fiber_condition", &fiber.points);

    match eigenvalue_condition(&p, h, sign) {
        Ok(v) => {
            r.verdict("eigenvalue_condition", v.iter().all(|e| e.ok));
            r.certificate("eigenvalue_condition", &v);
        }
        Err(e) => {
            r.verdict("eigenvalue_condition", false);
            record_spectral_error(&mut r, &e);
        }
    }

    let mut rng = gen::rng(seed);
    let mut samples_checked = Vec::with_capacity(samples);
    for _ in 0..samples {
        let x0 = gen::small_rational(&mut rng, false);
        match eigenspace_invariance_check(&p, &x0) {
            Ok(ok) => samples_checked.push(json!({"x": fmt_rational(&x0), "ok": ok})),
            Err(e) => {
                samples_checked.push(json!({"x": fmt_rational(&x0), "ok": false}));
                record_spectral_error(&mut r, &e);
            }
        }
    }
    r.verdict("eigenspace_invariance", samples_checked.iter().all(|v| v["ok"] == true));
    r.certificate("eigenspace_invariance", &samples_checked);

    if !r.passed {
        r.instance = Some(doc.to_value());
    }
    Ok(r)
}

pub(super) fn reconstruct_cmd(src: &str, sign: Sign) -> Result<Report, InputError> {
    let doc = InstanceDocument::parse(src)?;
    let p = doc.pair()?;
    let mut r = Report::new("reconstruct", sign);
    match reconstruct(&p, &doc.hecke) {
        Ok(f) => {
            r.verdict("reconstruct", true);
            r.certificate("certificate", f.certificate());
        }
        Err(e) => {
            r.verdict("reconstruct", false);
            record_higgs_error(&mut r, &e);
            r.instance = Some(doc.to_value());
        }
    }
    Ok(r)
}

pub(super) fn spectral(src: &str, sign: Sign) -> Result<Report, InputError> {
    let doc = InstanceDocument::parse(src)?;
    let p = doc.pair()?;
    let h = &doc.hecke;
    let mut r = Report::new("spectral", sign);
    let outcome = (|| -> Result<(), SpectralError> {
        let cd = char_coefficients(&p.theta)?;
        let coefficients: Vec<_> = cd
            .coefficients
            .iter()
            .map(|s| json!({"bundle": s.bundle().degree(), "section": s.poly().to_string()}))
            .collect();
        r.certificate("char_data", json!({"a": cd.a, "coefficients": coefficients}));
        let curve = SpectralCurve::of_endo(&p.theta)?;
        r.certificate("chi", curve.chi().to_string());

        let mut fibers = Vec::new();
        for hp in &h.points {
            let pts: Vec<_> = fiber_points(curve.chi(), &hp.x)?
                .iter()
                .map(|pt| json!({"minimal_polynomial": pt.minimal_polynomial(), "multiplicity": pt.multiplicity}))
                .collect();
            fibers.push(json!({"x": fmt_rational(&hp.x), "points": pts}));
        }
        r.certificate("fibers", fibers);
        let eig = eigenvalue_condition(&p, h, sign)?;
        r.verdict("eigenvalue_condition", eig.iter().all(|e| e.ok));
        r.certificate("eigenvalue_condition", &eig);

        let cert = is_integral(&curve)?;
        r.certificates.insert("integrality".into(), cert.to_json());
        r.verdict("integral", cert.is_integral());
        if !cert.is_integral() {
            return Err(SpectralError::NonIntegral(Box::new(cert)));
        }
        let f = reconstruct(&p, h)?;
        r.certificate("stability", certify_stability(&f)?.label());
        let data = forward_correspondence(&f, sign)?;
        r.verdict("forward_correspondence", true);
        r.certificate("psi", data.psi.to_string());
        r.certificate("psi_denominator", data.psi_denominator.to_string());
        r.certificate("b", data.b);
        Ok(())
    })();
    if let Err(e) = outcome {
        record_spectral_error(&mut r, &e);
        r.instance = Some(doc.to_value());
    }
    Ok(r)
}

pub(super) fn build(src: &str, sign: Sign, output: Option<&Path>) -> Result<Report, InputError> {
    let doc = BuildDocument::parse(src)?;
    let mut r = Report::new("build", sign);
    match backward_correspondence(&doc.spectral, &doc.hecke, sign) {
        Ok(f) => {
            r.verdict("backward_correspondence", true);
            r.certificate("certificate", f.certificate());
            let mut inst = InstanceDocument::from_field(&f);
            inst.spectral = Some(doc.spectral.clone());
            if let Some(path) = output {
                let text = serde_json::to_string_pretty(&inst).expect("plain data") + "\n";
                std::fs::write(path, text)
                    .map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })?;
            }
            r.instance = Some(inst.to_value());
        }
        Err(e) => {
            r.verdict("backward_correspondence", false);
            record_spectral_error(&mut r, &e);
            r.instance = Some(serde_json::to_value(&doc).expect("plain data"));
        }
    }
    Ok(r)
}

pub(super) fn hecke_make(c: i64, d: i64, l: usize, pool: &str, sign: Sign, seed: u64) -> Result<Report, InputError> {
    let points = pool
        .split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| InputError::Json(format!("pool entry {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::new("hecke-make", sign);
    r.seed = Some(seed);
    match make_presentation(c, d, l, &points, seed) {
        Ok(h) => {
            let st = h.splitting_type();
            r.verdict("splitting_type", st.as_ref().is_ok_and(|s| (s.c, s.d) == (c, d)));
            r.verdict("degree_identity", c + d == h.a + h.b - l as i64);
            if let Ok(st) = st {
                r.certificate("splitting_type", st);
            }
            r.certificate("hecke", &h);
        }
        Err(e) => {
            r.fail("hecke", &e);
            r.instance = Some(json!({
                "c": c,
                "d": d,
                "l": l,
                "pool": points.iter().map(fmt_rational).collect::<Vec<_>>(),
                "seed": seed,
            }));
        }
    }
    Ok(r)
}
