//! Ribbon-graph properties over every small labelled rotation system.

use std::time::Instant;

use serde_json::json;

use super::enumerate::enumerate_ribbon_graphs;
use super::HarnessError;
use crate::bits;
use crate::delta::SetSystem;
use crate::io::ribbon_to_value;
use crate::report::CheckReport;
use crate::ribbon::RibbonGraph;

fn same(lhs: &SetSystem, rhs: &SetSystem) -> bool {
    lhs.same_as(rhs)
}

/// Compatibility of `D(·)` with deletion, contraction, twist-contraction,
/// partial duality and half-twists, together with the structural properties
/// of partial duals, orientability and boundary counts.
pub fn ribbon_compat(max_v: usize, max_e: usize) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let mut r = CheckReport::new("ribbon-compat");
    for g in enumerate_ribbon_graphs(max_v, max_e)? {
        let d = g.delta_matroid();
        let ds = d.as_set_system();
        let gv = || ribbon_to_value(&g);
        let m = g.num_edges();

        r.assert(ds.is_delta_matroid(), || json!({"property": "D(G) is a delta-matroid", "graph": gv()}));
        r.assert(d.is_even() == g.is_orientable(), || json!({"property": "D(G) even iff G orientable", "graph": gv()}));
        r.assert(d.is_connected() == g.is_2_connected() || !g.is_connected(), || {
            json!({"property": "D(G) connected iff G 2-connected", "graph": gv()})
        });

        for (i, label) in g.edge_labels().iter().enumerate() {
            let cases = [
                ("D(G\\e) = D(G)\\e", g.delete_edge(label), ds.delete_at(i)),
                ("D(G/e) = D(G)/e", g.contract_edge(label), ds.contract_at(i)),
                ("D(G+e/e) = D(G)+e/e", g.twist_contract(label), ds.twist_contract_at(i)),
            ];
            for (property, minor, expected) in cases {
                let ok = minor.is_ok_and(|h| same(h.delta_matroid().as_set_system(), &expected));
                r.assert(ok, || json!({"property": property, "graph": gv(), "e": label}));
            }
        }

        let full = bits::full(m);
        for a in bits::submasks(full) {
            let labels = || d.labels_of(a);
            let dual = g.partial_dual(a);
            r.assert(same(dual.delta_matroid().as_set_system(), &ds.twist(a)), || {
                json!({"property": "D(G*A) = D(G)*A", "graph": gv(), "A": labels()})
            });
            let twisted = g.half_twist(a);
            r.assert(same(twisted.delta_matroid().as_set_system(), &ds.loop_complement(a)), || {
                json!({"property": "D(G+A) = D(G)+A", "graph": gv(), "A": labels()})
            });
            r.assert(dual.partial_dual(a) == g, || {
                json!({"property": "partial dual is an involution", "graph": gv(), "A": labels()})
            });
            for b in bits::submasks(full) {
                if a & b != 0 {
                    continue;
                }
                r.assert(dual.partial_dual(b) == g.partial_dual(b).partial_dual(a), || {
                    json!({"property": "partial duals commute", "graph": gv(), "A": labels(), "B": d.labels_of(b)})
                });
            }
            let sub = g.subgraph(a);
            let (bc, c) = (sub.boundary_components(), sub.components());
            r.assert(bc >= c && c >= g.num_components(), || {
                json!({"property": "bc(V,E') >= c(V,E') >= c(G)", "graph": gv(), "E'": labels(), "bc": bc, "c": c})
            });
        }
    }
    Ok(r.finish(start))
}

/// For every 2-connected `G` and edge `e`: at least two of `G\e`, `G/e`,
/// `G+e/e` are 2-connected, hence `G\e` or `G/e` is.
pub fn ribbon_chain(max_v: usize, max_e: usize) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let mut r = CheckReport::new("ribbon-chain");
    for g in enumerate_ribbon_graphs(max_v, max_e)? {
        if !g.is_2_connected() {
            r.skip();
            continue;
        }
        for label in g.edge_labels() {
            let minors: Vec<RibbonGraph> = [g.delete_edge(label), g.contract_edge(label), g.twist_contract(label)]
                .into_iter()
                .collect::<Result<_, _>>()?;
            let flags: Vec<bool> = minors.iter().map(RibbonGraph::is_2_connected).collect();
            r.assert(flags.iter().filter(|&&x| x).count() >= 2, || {
                json!({"property": "two of three 2-connected", "graph": ribbon_to_value(&g), "e": label, "flags": flags})
            });
            r.assert(flags[0] || flags[1], || {
                json!({"property": "G\\e or G/e 2-connected", "graph": ribbon_to_value(&g), "e": label})
            });
        }
    }
    Ok(r.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_edge_graphs() {
        let r = ribbon_compat(2, 1).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
        assert!(r.instances > 0);
    }

    #[test]
    fn small_chain() {
        let r = ribbon_chain(2, 2).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
    }
}
