mod common;

use common::*;
use frameopt::dual_pairs::{construct_probability_uniform_parseval, unique_pair_check_tight};
use frameopt::erasure::{one_erasure_value, weights_from_probabilities, MeasureKind};
use frameopt::frame::{canonical_dual, is_dual};
use frameopt::golden::{self, CheckStatus};
use frameopt::io::{pairs_to_frame, FrameFile};
use frameopt::linalg::C64;
use frameopt::optimality::{
    check_canonical_pasod_sufficient, check_unique_pasod_tight, check_unique_pod, pasod_search, tight_equivalences,
    CertificateKind, SearchConfig,
};
use frameopt::random::{random_dual, random_frame, random_probabilities};
use frameopt::{Frame, FrameError};
use rand::Rng;

fn quick(seed: u64) -> SearchConfig {
    SearchConfig {
        max_iters: 30_000,
        restarts: 4,
        stall_window: 3_000,
        seed,
        ..SearchConfig::default()
    }
}

#[test]
fn embedded_fixtures_verify() {
    let rows = golden::verify_embedded(&SearchConfig::default());
    assert!(golden::all_pass(&rows), "{rows:#?}");
    let errata: Vec<_> = rows
        .iter()
        .filter(|r| r.status == CheckStatus::PaperDiscrepancy)
        .map(|r| (r.fixture.as_str(), r.check.as_str()))
        .collect();
    assert_eq!(
        errata,
        vec![
            ("diagonal_augmented", "perturbed A"),
            ("mercedes", "canonical POD pair"),
            ("mercedes", "search value")
        ]
    );
    assert!(rows.iter().filter(|r| r.paper.is_some()).all(|r| r.status == CheckStatus::PaperDiscrepancy));
}

#[test]
fn perturbed_fixture_fails() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in golden::FIXTURES {
        let mut file = FrameFile::parse(text).unwrap();
        if name == "skew_triple" {
            file.vectors[2][1][0] = 1.01;
        }
        std::fs::write(dir.path().join(format!("{name}.json")), file.to_json()).unwrap();
    }
    let rows = golden::verify_dir(dir.path(), &quick(0));
    assert!(!golden::all_pass(&rows));
    assert!(rows
        .iter()
        .filter(|r| r.status == CheckStatus::Fail)
        .all(|r| r.fixture == "skew_triple"));

    std::fs::remove_file(dir.path().join("mercedes.json")).unwrap();
    let rows = golden::verify_dir(dir.path(), &quick(0));
    assert!(rows.iter().any(|r| r.fixture == "mercedes" && r.check == "load" && r.status == CheckStatus::Fail));
}

#[test]
fn uniqueness_certificates_on_reference_instances() {
    let (f, m) = split_axis();
    assert!(check_unique_pod(&f, &m).unwrap().holds);
    let (f, m) = diagonal_augmented();
    let cert = check_unique_pod(&f, &m).unwrap();
    assert!(!cert.holds);
    assert_eq!(cert.kind, CertificateKind::Inconclusive);
    let (f, m) = mercedes();
    let cert = check_unique_pasod_tight(&f, &m).unwrap();
    assert_eq!(cert.kind, CertificateKind::UniquePasod);
    let json = serde_json::to_value(&cert).unwrap();
    assert_eq!(json["kind"], "unique-PASOD");
    let check = unique_pair_check_tight(&f, &m).unwrap();
    assert!(check.holds && check.canonical_is_optimal_pair);
}

#[test]
fn unique_tight_optimum_is_found_by_search() {
    let (f, m) = mercedes();
    assert!(check_unique_pasod_tight(&f, &m).unwrap().holds);
    let out = pasod_search(&f, &m, &SearchConfig::default()).unwrap();
    let g = canonical_dual(&f).unwrap();
    assert!(out.dual.max_entry_diff(&g).unwrap() <= 1e-6);
    assert!((out.value - 1.0).abs() <= 1e-9);
}

#[test]
fn search_never_exceeds_canonical_and_returns_duals() {
    let mut r = rng(31);
    for seed in 0..12 {
        let (f, m, _) = random_instance(&mut r);
        let out = pasod_search(&f, &m, &quick(seed)).unwrap();
        assert!(out.value <= out.canonical_value);
        assert!(is_dual(&f, &out.dual, 1e-10).unwrap());
        let a = one_erasure_value(&f, &out.dual, &m, MeasureKind::Averaged).unwrap();
        assert!((a - out.value).abs() <= 1e-12 * a.max(1.0));
        // the global pair optimum bounds every dual from below
        assert!(out.value >= 1.0 - 1e-9);
    }
}

#[test]
fn search_is_bit_reproducible() {
    let (f, m) = skew_triple();
    let a = pasod_search(&f, &m, &quick(99)).unwrap();
    let b = pasod_search(&f, &m, &quick(99)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

/// `e_1` carries most of the erasure probability and is orthogonal to the rest,
/// so it alone attains the threshold.
#[test]
fn witness_matches_canonical_value_when_sufficiency_fires() {
    let mut r = rng(77);
    let mut fired = 0;
    for _ in 0..40 {
        let n = r.random_range(2..=4);
        let len = r.random_range(n + 1..=n + 3);
        let rest = random_frame(n - 1, len - 1, &mut r);
        let mut vectors = vec![{
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[0] = C64::new(1.0, 0.0);
            v
        }];
        for v in rest.vectors() {
            let mut w = vec![C64::new(0.0, 0.0)];
            w.extend(v);
            vectors.push(w);
        }
        let f = Frame::new(&vectors).unwrap();
        let mut p = random_probabilities(len - 1, &mut r);
        p.iter_mut().for_each(|x| *x *= 0.2);
        p.insert(0, 0.8);
        let m = weights_from_probabilities(&p, n).unwrap();
        let cert = check_canonical_pasod_sufficient(&f, &m).unwrap();
        if cert.kind != CertificateKind::CanonicalPasodSufficient {
            continue;
        }
        fired += 1;
        let w = cert.witness.expect("N > n");
        assert!((w.witness_value - w.canonical_value).abs() <= 1e-9);
        assert!((w.canonical_value - cert.threshold / 2.0).abs() <= 1e-9);
        let g = pairs_to_frame(&w.dual).unwrap();
        assert!(is_dual(&f, &g, 1e-10).unwrap());
        assert!(g.max_entry_diff(&canonical_dual(&f).unwrap()).unwrap() > 1e-6);
    }
    assert!(fired >= 10, "sufficiency fired only {fired} times");
}

#[test]
fn tight_equivalences_agree() {
    let (f, m) = mercedes();
    let cfg = quick(3);
    let uniform = tight_equivalences(&f, &m, &cfg).unwrap();
    assert!(uniform.agree && uniform.verdict);

    let skewed = weights_from_probabilities(&[0.5, 0.25, 0.25], 2).unwrap();
    let report = tight_equivalences(&f, &skewed, &cfg).unwrap();
    assert!(report.agree);
    assert!(!report.verdict);
    assert!(!check_unique_pasod_tight(&f, &skewed).unwrap().holds);

    let mut r = rng(5);
    for _ in 0..4 {
        let n = r.random_range(2..=3);
        let p = random_probabilities(n + 2, &mut r);
        let mq = weights_from_probabilities(&p, n).unwrap();
        let par = construct_probability_uniform_parseval(&mq, n).unwrap();
        let report = tight_equivalences(&par, &mq, &cfg).unwrap();
        assert!(report.agree && report.verdict);
    }

    let (f, m) = skew_triple();
    assert!(matches!(tight_equivalences(&f, &m, &cfg), Err(FrameError::NotTight { .. })));
}

#[test]
fn random_duals_are_not_better_than_pair_optimum() {
    let mut r = rng(12);
    for _ in 0..50 {
        let n = r.random_range(1..=4);
        let len = r.random_range(n + 1..=n + 4);
        let f = random_frame(n, len, &mut r);
        let m = weights_from_probabilities(&random_probabilities(len, &mut r), n).unwrap();
        let g = random_dual(&f, 1.0, &mut r).unwrap();
        for kind in MeasureKind::ALL {
            assert!(one_erasure_value(&f, &g, &m, kind).unwrap() >= frameopt::dual_pairs::global_pair_optimum() - 1e-9);
        }
    }
}
