use mnesor_core::checker::{
    run_check, verify_counterexample, CheckError, CheckPlan, Group, Kind, ModelSelector, Status,
};

fn plan(model: ModelSelector) -> CheckPlan {
    CheckPlan::new(model)
}

fn assert_status(report: &mnesor_core::checker::AxiomReport, label: &str, expected: Status) {
    let e = report
        .entry(label)
        .unwrap_or_else(|| panic!("no property {label}"));
    assert_eq!(e.status, expected, "{label}: {e:?}");
}

#[test]
fn subset_universe_three() {
    let p = plan(ModelSelector::Subset).universe(3);
    let r = run_check(&p).unwrap();
    for label in [
        "center-unit",
        "center-idempotent",
        "bitrop-absorption",
        "distributive-left",
        "oplus-associative",
    ] {
        assert_status(&r, label, Status::Pass);
    }
    let c = r.entry("cancellation").unwrap();
    assert_eq!(c.status, Status::Fail);
    assert_eq!(c.violations, 152);
    let cx = c.counterexample.as_ref().unwrap();
    assert_eq!(
        (cx.value("x"), cx.value("lambda"), cx.value("mu")),
        (Some("{}"), Some("{}"), Some("{a}"))
    );
    assert!(verify_counterexample(cx, &p).unwrap());
    assert_eq!(
        r.failures().map(|f| f.label).collect::<Vec<_>>(),
        ["cancellation"]
    );
}

#[test]
fn subset_universe_zero_is_degenerate_but_lawful() {
    let r = run_check(&plan(ModelSelector::Subset).universe(0)).unwrap();
    assert!(!r.has_failures());
}

#[test]
fn tampered_counterexample_does_not_verify() {
    let p = plan(ModelSelector::Subset)
        .universe(3)
        .only(["cancellation"]);
    let r = run_check(&p).unwrap();
    let mut cx = r
        .entry("cancellation")
        .unwrap()
        .counterexample
        .clone()
        .unwrap();
    for b in &mut cx.bindings {
        if b.var == "mu" {
            b.value = "{}".into();
        }
    }
    assert!(!verify_counterexample(&cx, &p).unwrap());
}

#[test]
fn stale_counterexample_is_rejected() {
    let p = plan(ModelSelector::Subset)
        .universe(3)
        .only(["cancellation"]);
    let r = run_check(&p).unwrap();
    let cx = r
        .entry("cancellation")
        .unwrap()
        .counterexample
        .clone()
        .unwrap();
    let other = plan(ModelSelector::Subset).universe(2);
    assert!(matches!(
        verify_counterexample(&cx, &other),
        Err(CheckError::Stale(_))
    ));
}

#[test]
fn minplus_window() {
    let r = run_check(&plan(ModelSelector::MinPlus).range(-8, 8)).unwrap();
    for label in ["center-unit", "center-idempotent", "cancellation"] {
        assert_status(&r, label, Status::Pass);
    }
    assert_status(&r, "bitrop-absorption", Status::Restricted);
    assert_status(&r, "otimes-closure", Status::Restricted);
    assert!(!r.has_failures());
}

#[test]
fn relation_universe_three() {
    let r = run_check(&plan(ModelSelector::Relation).universe(3)).unwrap();
    for e in r.group(Group::Space) {
        assert_eq!(e.status, Status::Pass, "{}", e.label);
        assert_eq!(e.violations, 0);
    }
    assert_status(&r, "cancellation", Status::Fail);
}

#[test]
fn truncated_tropical() {
    let r = run_check(&plan(ModelSelector::TruncatedTropical).range(-6, 0)).unwrap();
    for e in r.group(Group::Space) {
        assert_eq!(e.status, Status::Pass, "{}", e.label);
    }
    assert_status(&r, "add-oracle", Status::Pass);
    assert_status(&r, "intersect-oracle", Status::Pass);
    assert_status(&r, "otimes-closure", Status::Restricted);
}

#[test]
fn extended_minplus_fails_absorption_at_top() {
    let p = plan(ModelSelector::ExtendedMinPlus).range(-6, 6);
    let r = run_check(&p).unwrap();
    let e = r.entry("space-absorption").unwrap();
    assert_eq!(e.status, Status::Fail);
    let cx = e.counterexample.as_ref().unwrap();
    assert_eq!(cx.value("x"), Some("top"));
    assert!(verify_counterexample(cx, &p).unwrap());
}

#[test]
fn measurements_never_fail_a_report() {
    let r = run_check(&plan(ModelSelector::Relation).universe(2)).unwrap();
    assert!(r.properties.iter().any(|p| p.kind == Kind::Measurement));
    assert!(r.failures().all(|p| p.kind != Kind::Measurement));
}

#[test]
fn random_mode_is_reproducible() {
    let p = plan(ModelSelector::Relation)
        .universe(8)
        .random(200, 42)
        .only(["space"]);
    let a = run_check(&p).unwrap();
    let b = run_check(&p).unwrap();
    assert_eq!(a, b);
    assert!(!a.has_failures());
    let c = run_check(
        &plan(ModelSelector::Relation)
            .universe(8)
            .random(200, 43)
            .only(["space"]),
    )
    .unwrap();
    assert_eq!(c.parameters.seed, Some(43));
}

#[test]
fn every_counterexample_verifies() {
    let plans = [
        plan(ModelSelector::Subset).universe(2),
        plan(ModelSelector::Relation).universe(2),
        plan(ModelSelector::ExtendedMinPlus).range(-3, 3),
    ];
    for p in plans {
        let r = run_check(&p).unwrap();
        for e in r.failures() {
            let cx = e.counterexample.as_ref().unwrap();
            assert!(
                verify_counterexample(cx, &p).unwrap(),
                "{} {}",
                r.model,
                e.label
            );
        }
    }
}
