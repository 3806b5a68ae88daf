use motilt::ageing::{AgeingProperty, Window};
use motilt::lab::{
    case_ids, hazard_ratio_profile, preservation_table, random_pmf, reproduce_all, run_cell,
    search_counterexample, theorem_trials, trial_rng, AlphaRegime, CellOutcome, ClaimKind,
    Expectation, PreservationCertificate, PreservationClaim, SearchBudget, SearchOutcome, Trend,
};
use motilt::orders::OrderRelation;
use motilt::{SurvivalCurve, TiltParameter};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn registry_certificates_replay_and_round_trip() {
    let reports = reproduce_all();
    assert_eq!(reports.len(), case_ids().len());
    for r in &reports {
        assert!(r.passed(), "{}: {:?}", r.id, r.values);
        if let Some(cert) = &r.certificate {
            cert.replay().unwrap();
            assert!(cert.is_violation(), "{}", r.id);
            let back = PreservationCertificate::from_json(&cert.to_json()).unwrap();
            assert_eq!(&back, cert.as_ref());
            back.replay().unwrap();
        }
    }
}

#[test]
fn tampered_certificate_does_not_replay() {
    let cert = reproduce_all()
        .into_iter()
        .find_map(|r| r.certificate)
        .expect("some case carries a certificate");
    let mut json: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
    json["alpha"] = serde_json::json!("1");
    let forged: PreservationCertificate = serde_json::from_value(json).unwrap();
    assert!(forged.replay().is_err());
}

#[test]
fn search_is_thread_count_independent() {
    let claim = PreservationClaim::cell(ClaimKind::Order(OrderRelation::Hr), AlphaRegime::BelowOne);
    let budget = SearchBudget::with_seed(3);
    let one = in_pool(1, || search_counterexample(&claim, &budget).unwrap());
    let many = in_pool(4, || search_counterexample(&claim, &budget).unwrap());
    assert_eq!(one, many);
    let SearchOutcome::Found { certificate } = one else {
        panic!("hr-lt1 has a counterexample");
    };
    certificate.replay().unwrap();
}

#[test]
fn table_is_thread_count_independent() {
    let budget = SearchBudget::with_seed(5);
    let one = in_pool(1, || preservation_table(&budget, 50).unwrap());
    let many = in_pool(4, || preservation_table(&budget, 50).unwrap());
    assert_eq!(one.to_json(), many.to_json());
    assert_eq!(one.render_text(), many.render_text());
    assert!(one.all_agree(), "{}", one.render_text());
}

#[test]
fn hazard_ratio_profile_at_alpha_five() {
    let alpha = TiltParameter::ratio(5, 1);
    for i in 0..200 {
        let d = random_pmf(&mut trial_rng(11, 0, i), 8, 30);
        let p = hazard_ratio_profile(&d, &alpha, Window::new(1, d.len()).unwrap()).unwrap();
        assert!(p.conforms);
        assert_ne!(p.trend, Trend::Nonincreasing);
        // S(n) = 0 so the last ratio is exactly 1
        assert_eq!(p.gap_at_end, 0.0);
        assert!(p
            .points
            .iter()
            .all(|(k, v)| d.survival_at(*k).is_zero() || v.to_f64() < 1.0));
    }
}

#[test]
fn falsified_claim_is_refuted() {
    let ifr = ClaimKind::Ageing(AgeingProperty::Ifr);
    let claim =
        PreservationClaim::cell(ifr, AlphaRegime::BelowOne).with_expected(Expectation::Preserved);
    let row = run_cell(&claim, &SearchBudget::with_seed(2), 300).unwrap();
    let CellOutcome::Refuted(summary) = &row.outcome else {
        panic!("expected a refutation, got {:?}", row.outcome);
    };
    assert!(!row.agrees());
    assert!(summary.violations() > 0);
    summary.first_violation.as_ref().unwrap().replay().unwrap();
}

#[test]
fn preserved_cells_survive_trials() {
    let budget = SearchBudget::with_seed(9);
    for claim in PreservationClaim::table() {
        if claim.expected != Expectation::Preserved {
            continue;
        }
        let s = theorem_trials(&claim, 200, 9, &budget).unwrap();
        assert_eq!(s.passed, 200, "{}", claim.cell_id());
    }
}

#[test]
fn searching_a_preserved_cell_is_an_error() {
    let claim = PreservationClaim::cell(ClaimKind::Order(OrderRelation::St), AlphaRegime::AboveOne);
    assert!(search_counterexample(&claim, &SearchBudget::default()).is_err());
}
