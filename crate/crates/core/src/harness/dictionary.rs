//! The delta-matroid to multimatroid dictionary, the axiom suites and the
//! multimatroid lemmas, checked exhaustively.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::json;

use super::enumerate::{enumerate_delta_matroids, DeltaFilter};
use super::HarnessError;
use crate::bits::{self, Mask};
use crate::bridge::{delta_of_q3, q2_of, q3_of, section};
use crate::delta::DeltaMatroid;
use crate::io::{delta_to_value, mm_to_value};
use crate::mm::{Element, Multimatroid, Subtransversal};
use crate::report::CheckReport;

fn all_delta(max_n: usize, filter: DeltaFilter) -> Result<Vec<DeltaMatroid>, HarnessError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_delta_matroids(n, filter)?);
    }
    Ok(out)
}

fn twist_contract_at(d: &DeltaMatroid, i: usize) -> DeltaMatroid {
    DeltaMatroid::from_system_unchecked(d.as_set_system().twist_contract_at(i))
}

fn sorted_family(d: &DeltaMatroid) -> Vec<Mask> {
    let mut f = d.feasible().to_vec();
    f.sort_unstable();
    f
}

/// `Q₂` and `Q₃` minor identities, roundtrips, sections, tightness against
/// evenness and connectivity transfer.
pub fn correspondence(max_q2: usize, max_q3: usize) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let mut r = CheckReport::new("correspondence");
    for d in all_delta(max_q2, DeltaFilter::any())? {
        let q = q2_of(&d)?;
        let dv = || delta_to_value(&d);
        for (i, e) in d.elements().iter().enumerate() {
            let primed = format!("{e}'");
            let via_contract = q2_of(&d.contract_at(i))?;
            let via_delete = q2_of(&d.delete_at(i))?;
            let qe = q.minor_of_labels(&[e.as_str()])?;
            let qe1 = q.minor_of_labels(&[primed.as_str()])?;
            r.assert(via_contract == qe, || json!({"identity": "Q2(D/e) = Q2(D)|e", "delta": dv(), "e": e}));
            r.assert(via_delete == qe1, || json!({"identity": "Q2(D\\e) = Q2(D)|e'", "delta": dv(), "e": e}));
        }
        let n = d.len();
        for unprimed in bits::submasks(bits::full(n)) {
            let picks = (0..n).map(|i| Some(usize::from(!bits::contains(unprimed, i)))).collect();
            let t = Subtransversal::from_picks(picks);
            let s = section(&q, &t)?;
            let twisted = d.twist(bits::full(n) & !unprimed);
            r.assert(sorted_family(&s) == sorted_family(&twisted), || {
                json!({"identity": "section by T equals the twist", "delta": dv(), "T": q.partition().labels_of(&t)})
            });
            r.assert(s.as_set_system().is_delta_matroid(), || {
                json!({"identity": "section is a delta-matroid", "delta": dv(), "T": q.partition().labels_of(&t)})
            });
            r.assert(s.is_even() == q.is_tight(), || {
                json!({"identity": "section even iff Q2 tight", "delta": dv(), "T": q.partition().labels_of(&t)})
            });
            if unprimed == bits::full(n) {
                r.assert(s == d, || json!({"identity": "section(Q2(D), E) = D", "delta": dv()}));
            }
        }
        r.assert(q.is_tight() == d.is_even(), || json!({"identity": "Q2 tight iff D even", "delta": dv()}));
        r.assert(q.is_connected() == d.is_connected(), || {
            json!({"identity": "Q2 connected iff D connected", "delta": dv()})
        });
    }
    for d in all_delta(max_q3, DeltaFilter::any().vf_safe(true))? {
        let q = q3_of(&d)?;
        let dv = || delta_to_value(&d);
        for (i, e) in d.elements().iter().enumerate() {
            let cases = [
                ("Q3(D\\e) = Q3(D)|e", d.delete_at(i), e.clone()),
                ("Q3(D/e) = Q3(D)|e'", d.contract_at(i), format!("{e}'")),
                ("Q3(D+e/e) = Q3(D)|e''", twist_contract_at(&d, i), format!("{e}''")),
            ];
            for (identity, minor, label) in cases {
                let lhs = q3_of(&minor)?;
                let rhs = q.minor_of_labels(&[label.as_str()])?;
                r.assert(lhs == rhs, || json!({"identity": identity, "delta": dv(), "e": e}));
            }
        }
        let back = delta_of_q3(&q);
        r.assert(back.as_ref() == Ok(&d), || json!({"identity": "delta_of_q3(Q3(D)) = D", "delta": dv()}));
        r.assert(q.is_tight(), || json!({"identity": "Q3 tight", "delta": dv()}));
        r.assert(q.is_connected() == d.is_connected(), || {
            json!({"identity": "Q3 connected iff D connected", "delta": dv()})
        });
    }
    Ok(r.finish(start))
}

/// Axiom check on `q` and every minor of `q`, and tightness closure under
/// minors when `q` is tight.
fn axioms_of_all_minors(q: &Multimatroid, r: &mut CheckReport) {
    let p = q.partition();
    let tight = q.is_tight();
    for code in 0..p.table_len() {
        let m = q.minor_code(code);
        let report = m.verify_axioms();
        r.assert(report.passed(), || {
            json!({"assert": "axioms", "multimatroid": mm_to_value(q), "A": p.code_labels(code), "failures": report.witnesses})
        });
        if tight {
            r.assert(m.is_tight(), || {
                json!({"assert": "minor of tight is tight", "multimatroid": mm_to_value(q), "A": p.code_labels(code)})
            });
        }
    }
}

fn exchange(d: &DeltaMatroid, what: &str, r: &mut CheckReport) {
    let v = d.as_set_system().exchange_violation();
    r.assert(v.is_none(), || {
        json!({"assert": "symmetric exchange", "constructed": what, "delta": delta_to_value(d)})
    });
}

/// Multimatroid axioms on every `Q₂`/`Q₃` built and all their minors,
/// symmetric exchange on every delta-matroid the bridge and minor operations
/// produce, and tightness under minors.
pub fn axioms(max_all: usize, max_q3: usize) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let mut r = CheckReport::new("axioms");
    for d in all_delta(max_all, DeltaFilter::any())? {
        let q = q2_of(&d)?;
        if d.len() < max_all || d.is_even() {
            axioms_of_all_minors(&q, &mut r);
        } else {
            let report = q.verify_axioms();
            r.assert(report.passed(), || json!({"assert": "axioms", "multimatroid": mm_to_value(&q)}));
        }
        for i in 0..d.len() {
            exchange(&d.delete_at(i), "deletion", &mut r);
            exchange(&d.contract_at(i), "contraction", &mut r);
        }
        exchange(&d.twist(bits::full(d.len())), "twist", &mut r);
    }
    for d in all_delta(max_q3, DeltaFilter::any().vf_safe(true))? {
        let q = q3_of(&d)?;
        axioms_of_all_minors(&q, &mut r);
        for i in 0..d.len() {
            exchange(&twist_contract_at(&d, i), "twist-contraction", &mut r);
        }
        match delta_of_q3(&q) {
            Ok(back) => exchange(&back, "delta_of_q3", &mut r),
            Err(e) => r.violation(json!({"assert": "delta_of_q3 succeeds", "delta": delta_to_value(&d), "error": e.to_string()})),
        }
        for mask in bits::submasks(bits::full(d.len())) {
            let b = d.bar_star(mask);
            r.assert(b.valid && b.system.is_delta_matroid(), || {
                json!({"assert": "symmetric exchange", "constructed": "bar_star", "delta": delta_to_value(&d), "A": d.labels_of(mask)})
            });
        }
    }
    Ok(r.finish(start))
}

fn class_union(components: &[u32], pick: u32) -> u32 {
    bits::ones(pick).fold(0, |m, i| m | components[i])
}

/// Lemmas used by the splitter proof: singular classes, rank one, minor
/// separators, separator minors, the circuit inside a separator, and both
/// parts of the fundamental-graph theorem.
fn lemmas_for(q: &Multimatroid, r: &mut CheckReport) {
    let p = q.partition();
    let k = p.num_classes();
    let qv = || mm_to_value(q);

    for w in 0..k {
        let size = p.class_size(w);
        let singular = (0..size).any(|j| q.rank_table()[p.elem_code(Element::new(w, j))] == 0);
        if !singular {
            continue;
        }
        let first = q.minor_code(p.elem_code(Element::new(w, 0)));
        for j in 1..size {
            let other = q.minor_code(p.elem_code(Element::new(w, j)));
            r.assert(first == other, || json!({"lemma": "singular class", "multimatroid": qv(), "class": p.classes()[w]}));
        }
    }

    if q.is_connected() && k >= 2 {
        for w in 0..k {
            for j in 0..p.class_size(w) {
                let e = Element::new(w, j);
                r.assert(q.rank_table()[p.elem_code(e)] == 1, || {
                    json!({"lemma": "rank one", "multimatroid": qv(), "e": p.label(e)})
                });
            }
        }
    }

    let separators = q.separators();
    for &x in &separators {
        for code in 0..p.table_len() {
            let ua = p.present(code);
            let keep: Vec<usize> = (0..k).filter(|&c| ua & (1 << c) == 0).collect();
            let reduced = keep
                .iter()
                .enumerate()
                .filter(|&(_, &c)| x & (1 << c) != 0)
                .fold(0u32, |m, (i, _)| m | (1 << i));
            let m = q.minor_code(code);
            r.assert(m.is_separator(reduced), || {
                json!({"lemma": "minor separator", "multimatroid": qv(), "X": p.class_labels(x), "A": p.code_labels(code)})
            });
            if ua == x {
                let ok = (0..m.partition().table_len()).all(|s| {
                    let sub = m.partition().decode(s);
                    let mut picks = vec![None; k];
                    for (i, &c) in keep.iter().enumerate() {
                        picks[c] = sub.pick(i);
                    }
                    let lifted = p.encode(&Subtransversal::from_picks(picks));
                    m.rank_table()[s] == q.rank_table()[lifted]
                });
                r.assert(ok, || {
                    json!({"lemma": "separator minor", "multimatroid": qv(), "X": p.class_labels(x), "A": p.code_labels(code)})
                });
            }
        }
    }

    if !q.is_tight() {
        return;
    }
    let all = p.all_classes();
    if q.is_connected() {
        for w in 0..k {
            for j in 0..p.class_size(w) {
                let e = Element::new(w, j);
                let qe = q.minor_code(p.elem_code(e));
                if qe.is_connected() {
                    continue;
                }
                let keep: Vec<usize> = (0..k).filter(|&c| c != w).collect();
                for y in qe.separators() {
                    if y == 0 || y == bits::full(keep.len()) {
                        continue;
                    }
                    let x = bits::ones(y).fold(0u32, |m, i| m | (1 << keep[i]));
                    let c = q.circuit_in_separator(e, x);
                    let ok = c.as_ref().is_ok_and(|c| {
                        q.is_circuit(c) && c.contains(e) && (p.present(p.encode(c)) & !(x | (1 << w))) == 0
                    });
                    r.assert(ok, || {
                        json!({"lemma": "circuit inside separator", "multimatroid": qv(), "e": p.label(e), "X": p.class_labels(x)})
                    });
                }
            }
        }
    }
    for b in q.bases() {
        let g = match q.fundamental_graph(&b) {
            Ok(g) => g,
            Err(err) => {
                r.violation(json!({"lemma": "fundamental graph", "multimatroid": qv(), "error": err.to_string()}));
                continue;
            }
        };
        r.assert(g.is_connected() == q.is_connected(), || {
            json!({"lemma": "fundamental graph connected iff Q connected", "multimatroid": qv(), "B": p.labels_of(&b)})
        });
        let components = g.components();
        let generated: BTreeSet<u32> = bits::submasks(bits::full(components.len()))
            .map(|pick| class_union(&components, pick))
            .collect();
        let actual: BTreeSet<u32> = separators.iter().copied().collect();
        r.assert(generated == actual, || {
            json!({"lemma": "separators from components", "multimatroid": qv(), "B": p.labels_of(&b)})
        });
        debug_assert!(generated.contains(&all));
        for e in b.elements().collect::<Vec<_>>() {
            let qe = q.minor_code(p.elem_code(e));
            let rest = b.clone().without_class(e.class);
            let rest_labels: Vec<&str> = p.labels_of(&rest);
            let ok = qe
                .subtransversal(&rest_labels)
                .ok()
                .filter(|s| qe.is_basis(s))
                .and_then(|s| qe.fundamental_graph(&s).ok())
                .is_some_and(|ge| {
                    let removed = g.remove_vertex(e.class);
                    ge.labels() == removed.labels() && ge.edge_labels() == removed.edge_labels()
                });
            r.assert(ok, || {
                json!({"lemma": "fundamental graph of Q|e", "multimatroid": qv(), "B": p.labels_of(&b), "e": p.label(e)})
            });
        }
    }
}

/// The lemmas on `Q₂(D)` for all `D` with `|E| ≤ max_q2` and on `Q₃(D)` for
/// vf-safe `D` with `|E| ≤ max_q3`.
pub fn lemmas(max_q2: usize, max_q3: usize) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let mut r = CheckReport::new("lemmas");
    for d in all_delta(max_q2, DeltaFilter::any())? {
        lemmas_for(&q2_of(&d)?, &mut r);
    }
    for d in all_delta(max_q3, DeltaFilter::any().vf_safe(true))? {
        lemmas_for(&q3_of(&d)?, &mut r);
    }
    Ok(r.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_dictionary() {
        let r = correspondence(2, 2).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
        assert!(r.instances > 0);
    }

    #[test]
    fn small_axioms() {
        let r = axioms(2, 2).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
    }

    #[test]
    fn small_lemmas() {
        let r = lemmas(2, 2).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
        assert!(r.instances > 0);
    }
}
