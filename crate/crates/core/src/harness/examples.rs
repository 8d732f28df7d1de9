//! The worked 3-matroid example and the half-twisted theta graph.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::json;

use crate::bits;
use crate::bridge::{delta_of_q3, q3_of};
use crate::delta::{DeltaMatroid, SetSystem};
use crate::io::set_system_to_value;
use crate::mm::Multimatroid;
use crate::report::CheckReport;
use crate::ribbon::RibbonGraph;

/// Feasible sets of the example delta-matroid on `{a, b, c, d}`.
pub const D_EX_FEASIBLE: [&str; 11] = ["", "a", "b", "c", "d", "ab", "cd", "abc", "abd", "acd", "bcd"];

/// The five pairs `(F₁, F₂)` left after the parity and symmetry reductions.
pub const D_EX_HARD_PAIRS: [(&str, &str); 5] = [
    ("a", "cd"),
    ("a", "bcd"),
    ("abc", "d"),
    ("abc", ""),
    ("abc", "cd"),
];

/// The 50 bases of `Q₃(D_ex)`, column by column (`Q|a`, `Q|a'`, `Q|a''`).
pub const TABLE_BASES: [&str; 50] = [
    "abcd", "abcd'", "abc'd", "abc'd'", "ab'cd", "ab'cd''", "ab'c'd'", "ab'c'd''",
    "ab'c''d", "ab'c''d'", "ab''cd'", "ab''cd''", "ab''c'd", "ab''c'd''", "ab''c''d", "ab''c''d'",
    "a'bcd", "a'bcd''", "a'bc'd'", "a'bc'd''", "a'bc''d", "a'bc''d'", "a'b'cd", "a'b'cd'",
    "a'b'c'd", "a'b'c'd''", "a'b'c''d'", "a'b'c''d''", "a'b''cd'", "a'b''cd''", "a'b''c'd", "a'b''c'd'",
    "a'b''c''d", "a'b''c''d''",
    "a''bcd'", "a''bcd''", "a''bc'd", "a''bc'd''", "a''bc''d", "a''bc''d'", "a''b'cd'", "a''b'cd''",
    "a''b'c'd", "a''b'c'd'", "a''b'c''d", "a''b'c''d''", "a''b''c'd'", "a''b''c'd''", "a''b''c''d'", "a''b''c''d''",
];

/// Splits `"a'bc''"` into `["a'", "b", "c''"]`.
pub fn split_compact(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for ch in s.chars() {
        match (ch, out.last_mut()) {
            ('\'', Some(last)) => last.push('\''),
            _ => out.push(ch.to_string()),
        }
    }
    out
}

fn family(elements: &[String], sets: &[&str]) -> Vec<bits::Mask> {
    sets.iter()
        .map(|s| {
            s.chars()
                .map(|c| elements.iter().position(|e| e.starts_with(c)).expect("known label"))
                .fold(0, |m, i| m | bits::bit(i))
        })
        .collect()
}

pub fn d_ex_system() -> SetSystem {
    let elements = super::enumerate::ground_labels(4);
    let feasible = family(&elements, &D_EX_FEASIBLE);
    SetSystem::new(elements, feasible).expect("distinct sets")
}

pub fn d_ex() -> DeltaMatroid {
    d_ex_system().into_delta_matroid().expect("example is a delta-matroid")
}

/// Reproduces every claim about the example with the built-in inputs.
pub fn run_paper_example() -> CheckReport {
    let table: Vec<&str> = TABLE_BASES.to_vec();
    run_paper_example_with(&d_ex_system(), &table)
}

/// The same assertions against a supplied set system and expected table; used
/// with mutated inputs as negative controls.
pub fn run_paper_example_with(system: &SetSystem, table: &[&str]) -> CheckReport {
    let start = Instant::now();
    let mut r = CheckReport::new("paper-q");
    let doc = set_system_to_value(system);

    let violation = system.exchange_violation();
    r.assert(violation.is_none(), || {
        json!({"assert": "symmetric exchange", "delta": doc, "counterexample": violation.as_ref().map(|v| v.to_string())})
    });
    for (f1, f2) in D_EX_HARD_PAIRS {
        let m = family(system.elements(), &[f1, f2]);
        let (a, b) = (m[0], m[1]);
        let ok = !system.contains(a)
            || !system.contains(b)
            || bits::ones(a ^ b).all(|x| {
                bits::ones(a ^ b).any(|y| system.contains(a ^ (bits::bit(x) | bits::bit(y))))
            });
        r.assert(ok, || json!({"assert": "hard pair", "F1": f1, "F2": f2}));
    }

    let d = match system.clone().into_delta_matroid() {
        Ok(d) => d,
        Err(e) => {
            r.violation(json!({"assert": "delta-matroid", "error": e.to_string()}));
            return r.finish(start);
        }
    };
    let q = match q3_of(&d) {
        Ok(q) => q,
        Err(e) => {
            r.violation(json!({"assert": "q3 construction", "error": e.to_string()}));
            return r.finish(start);
        }
    };

    let expected: BTreeSet<BTreeSet<String>> = table
        .iter()
        .map(|s| split_compact(s).into_iter().collect())
        .collect();
    let got: BTreeSet<BTreeSet<String>> = q
        .basis_labels()
        .into_iter()
        .map(|b| b.into_iter().collect())
        .collect();
    r.assert(got == expected, || {
        let missing: Vec<_> = expected.difference(&got).collect();
        let extra: Vec<_> = got.difference(&expected).collect();
        json!({"assert": "bases equal the table", "missing": missing, "extra": extra})
    });
    r.assert(q.num_bases() == 50, || json!({"assert": "50 bases", "got": q.num_bases()}));

    let minor = |l: &str| q.minor_of_labels(&[l]).expect("label present");
    let (qa, qa1, qa2) = (minor("a"), minor("a'"), minor("a''"));
    let counts = [qa.num_bases(), qa1.num_bases(), qa2.num_bases()];
    r.assert(counts == [16, 18, 16], || json!({"assert": "minor basis counts 16/18/16", "got": counts}));

    for c in [["a", "b", "c''"], ["a", "b", "d''"]] {
        let ok = q.subtransversal(&c).map(|s| q.is_circuit(&s)).unwrap_or(false);
        r.assert(ok, || json!({"assert": "circuit", "set": c}));
    }
    let fg_connected = q
        .subtransversal(&["a", "b", "c", "d"])
        .ok()
        .and_then(|b| q.fundamental_graph(&b).ok())
        .map(|g| g.is_connected());
    r.assert(fg_connected == Some(true), || {
        json!({"assert": "fundamental graph of {a,b,c,d} connected", "got": fg_connected})
    });
    r.assert(q.is_tight(), || json!({"assert": "Q tight"}));
    r.assert(q.is_connected(), || json!({"assert": "Q connected"}));
    r.assert(qa1.is_connected(), || json!({"assert": "Q|a' connected"}));
    let circuit = qa1
        .subtransversal(&["b", "c", "d'"])
        .map(|s| qa1.is_circuit(&s))
        .unwrap_or(false);
    r.assert(circuit, || json!({"assert": "{b,c,d'} is a circuit of Q|a'"}));

    let no_minor = |big: &Multimatroid| matches!(big.has_minor(&qa1), Ok(None));
    r.assert(no_minor(&qa), || json!({"assert": "Q|a has no Q|a' minor"}));
    r.assert(no_minor(&qa2), || json!({"assert": "Q|a'' has no Q|a' minor"}));
    r.assert(!qa.is_isomorphic(&qa1), || json!({"assert": "Q|a not isomorphic to Q|a'"}));
    r.assert(!qa2.is_isomorphic(&qa1), || json!({"assert": "Q|a'' not isomorphic to Q|a'"}));

    let back = delta_of_q3(&q);
    r.assert(back.as_ref() == Ok(&d), || json!({"assert": "inverse map recovers D"}));
    r.details = Some(json!({"bases": q.num_bases(), "minor_bases": counts}));
    r.finish(start)
}

/// The plane theta graph on edges `a, b, e` with the given twist on `e`.
pub fn theta(e_twisted: bool) -> RibbonGraph {
    RibbonGraph::from_rotation(
        super::enumerate::ground_labels(2)
            .into_iter()
            .chain(["e".to_string()])
            .collect(),
        vec![false, false, e_twisted],
        vec![vec![0, 2, 4], vec![1, 5, 3]],
    )
    .expect("valid theta")
}

/// The half-twisted theta graph.
pub fn g_star() -> RibbonGraph {
    theta(true)
}

pub fn run_counterexample_ribbon() -> CheckReport {
    run_counterexample_ribbon_with(&g_star())
}

/// The six assertions about `G`, `H = G/b\e`, `G/b` and `G\b`.
pub fn run_counterexample_ribbon_with(g: &RibbonGraph) -> CheckReport {
    let start = Instant::now();
    let mut r = CheckReport::new("ribbon-counterexample");
    let gb = g.contract_edge("b").expect("edge b");
    let h = gb.delete_edge("e").expect("edge e");
    let g_del_b = g.delete_edge("b").expect("edge b");

    r.assert(g.is_2_connected(), || json!({"assert": "G 2-connected"}));
    let one_orientable_loop = h.num_vertices() == 1 && h.num_edges() == 1 && h.is_loop(0) && !h.is_twisted(0);
    r.assert(one_orientable_loop, || {
        json!({"assert": "G/b\\e is one vertex with an orientable loop", "got": h.to_string()})
    });
    r.assert(h.is_2_connected(), || json!({"assert": "G/b\\e 2-connected"}));
    r.assert(!gb.is_2_connected(), || json!({"assert": "G/b not 2-connected"}));
    r.assert(g_del_b.is_2_connected(), || json!({"assert": "G\\b 2-connected"}));
    let dh = h.delta_matroid();
    let found = g_del_b.delta_matroid().has_minor(&dh).ok().flatten();
    r.assert(found.is_none(), || {
        json!({"assert": "G\\b has no G/b\\e minor", "found": format!("{found:?}")})
    });
    r.details = Some(json!({
        "G": g.to_string(),
        "G/b": gb.to_string(),
        "G/b\\e": h.to_string(),
        "G\\b": g_del_b.to_string(),
    }));
    r.finish(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_labels() {
        assert_eq!(split_compact("a''bc'"), vec!["a''", "b", "c'"]);
        assert_eq!(split_compact(""), Vec::<String>::new());
    }

    #[test]
    fn table_has_fifty_distinct_bases() {
        let set: BTreeSet<&str> = TABLE_BASES.iter().copied().collect();
        assert_eq!(set.len(), 50);
    }

    #[test]
    fn worked_example_passes() {
        let r = run_paper_example();
        assert!(r.passed(), "{:?}", r.witnesses);
    }

    #[test]
    fn dropping_a_table_row_fails() {
        let table: Vec<&str> = TABLE_BASES[1..].to_vec();
        let r = run_paper_example_with(&d_ex_system(), &table);
        assert!(!r.passed());
        assert_eq!(r.witnesses[0]["assert"], "bases equal the table");
    }

    #[test]
    fn mutated_family_fails() {
        let base = d_ex_system();
        let mut feasible = base.feasible().to_vec();
        feasible.push(0b0101);
        let mutated = SetSystem::new(base.elements().to_vec(), feasible).unwrap();
        assert!(!run_paper_example_with(&mutated, &TABLE_BASES).passed());
    }

    #[test]
    fn ribbon_counterexample_passes() {
        let r = run_counterexample_ribbon();
        assert!(r.passed(), "{:?}", r.witnesses);
    }

    #[test]
    fn untwisted_theta_changes_the_pattern() {
        let r = run_counterexample_ribbon_with(&theta(false));
        assert!(!r.passed());
        let failed: Vec<&str> = r.witnesses.iter().filter_map(|w| w["assert"].as_str()).collect();
        assert_eq!(failed, vec!["G\\b has no G/b\\e minor"]);
    }
}
