//! The checks outside the acceptance list, at default bounds, and the
//! determinism of reports.

use mmkit::harness::{self, Bounds, CHECK_NAMES};
use mmkit::harness::enumerate::{sample_delta_matroids, DeltaFilter};
use mmkit::harness::theorems::{check_chain, check_splitter};
use mmkit::bridge::q3_of;
use mmkit::harness::examples::d_ex;

#[test]
fn lemmas_hold() {
    let r = harness::run_check("lemmas", &Bounds::default()).unwrap();
    assert!(r.passed(), "{:?}", r.witnesses);
    assert!(r.instances > 0);
}

#[test]
fn ribbon_chain_holds() {
    let r = harness::run_check("ribbon-chain", &Bounds::default()).unwrap();
    assert!(r.passed(), "{:?}", r.witnesses);
    assert!(r.instances > 0 && r.skipped > 0);
}

#[test]
fn reports_are_deterministic() {
    let b = Bounds::uniform(3);
    for name in CHECK_NAMES {
        let mut first = harness::run_check(name, &b).unwrap();
        let mut second = harness::run_check(name, &b).unwrap();
        first.ms = 0;
        second.ms = 0;
        assert_eq!(first, second, "{name}");
    }
}

#[test]
fn report_json_has_the_schema_keys() {
    let r = harness::run_check("paper-q", &Bounds::default()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in ["check", "instances", "violations", "witnesses", "ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn chain_on_the_worked_example() {
    let q = q3_of(&d_ex()).unwrap();
    let r = check_chain(&q);
    assert!(r.passed());
    assert_eq!(r.instances, 4);
}

#[test]
fn splitter_on_the_worked_example() {
    let q = q3_of(&d_ex()).unwrap();
    let e = q.element("a'").unwrap();
    let a = q.subtransversal(&["a'"]).unwrap();
    let r = check_splitter(&q, &a, e);
    assert!(r.passed());
    assert_eq!(r.skipped, 0);
}

#[test]
fn sampled_instances_satisfy_the_chain_theorem() {
    let sample = sample_delta_matroids(6, DeltaFilter::any().connected(true), 10, 11).unwrap();
    assert_eq!(sample.len(), 10);
    for d in sample {
        for label in d.elements() {
            let minors = [
                d.delete(label).unwrap(),
                d.contract(label).unwrap(),
                d.twist_contract(label).unwrap(),
            ];
            assert!(minors.iter().filter(|m| m.is_connected()).count() >= 2, "{d} {label}");
        }
    }
}
