use kappa_core::borcherds::{delta5_normalization, divisor_of_psi};
use kappa_core::jacobi::{family_member, VectorValuedFormJson};
use kappa_core::qseries::QSeriesJson;
use kappa_core::ratio::rat;
use kappa_core::{kappa_psi, Error, Evaluator, PrecisionConfig, QSeries, VectorValuedForm};
use rug::Float;

#[test]
fn form_json_round_trip() {
    let f = family_member(2, 3).unwrap();
    let text = serde_json::to_string(&f.to_json()).unwrap();
    let back: VectorValuedFormJson = serde_json::from_str(&text).unwrap();
    let g = VectorValuedForm::from_json(&back).unwrap();
    assert_eq!(f, g);
    assert_eq!(divisor_of_psi(&f).unwrap(), divisor_of_psi(&g).unwrap());
}

#[test]
fn series_json_keeps_exact_rationals() {
    let s = QSeries::new(
        4,
        &rat(3, 4),
        [(rat(-1, 4), rat(1, 3)), (rat(1, 2), rat(-7, 2))],
    )
    .unwrap();
    let j = serde_json::to_value(s.to_json()).unwrap();
    assert_eq!(j["terms"][0]["coeff"], "1/3");
    assert_eq!(j["terms"][1]["exp"], "1/2");
    let back: QSeriesJson = serde_json::from_value(j).unwrap();
    assert_eq!(QSeries::from_json(&back).unwrap(), s);
}

#[test]
fn report_json_is_complete() {
    let ev = Evaluator::new(PrecisionConfig::default());
    let r = kappa_psi(&family_member(1, 2).unwrap(), &ev).unwrap();
    let j = serde_json::to_value(r.to_json(30)).unwrap();
    assert_eq!(j["weight_squared"], "7548");
    assert_eq!(j["weight_half"], "3774");
    assert_eq!(
        j["degree_check"]["degree_lhs"],
        j["degree_check"]["degree_rhs"]
    );
    assert_eq!(j["contributions"].as_array().unwrap().len(), 3);
    assert_eq!(j["grouped"].as_array().unwrap().len(), 4);
    assert_eq!(j["closed_form_check"]["pass"], true);
}

#[test]
fn delta5_value_stable_across_precision() {
    let lo = Evaluator::new(PrecisionConfig::new(40).unwrap());
    let hi = Evaluator::new(PrecisionConfig::new(70).unwrap());
    let a = delta5_normalization(&lo).unwrap();
    let b = delta5_normalization(&hi).unwrap();
    let diff = Float::with_val(hi.bits(), &a - &b).abs();
    assert!(diff < lo.cfg().tol(12), "{diff}");
}

#[test]
fn truncated_input_is_rejected() {
    // knowing f only below q^0 leaves c_0(0) undetermined
    let f = family_member(0, 1).unwrap();
    let short = VectorValuedForm::new(
        f.f0().truncate(&rat(0, 1)).unwrap(),
        f.f1().truncate(&rat(0, 1)).unwrap(),
        f.weight().clone(),
    );
    match short {
        Err(e) => assert!(matches!(
            e,
            Error::PrecisionExhausted(_) | Error::InvalidForm(_)
        )),
        Ok(g) => assert!(kappa_psi(&g, &Evaluator::new(PrecisionConfig::default())).is_err()),
    }
}
