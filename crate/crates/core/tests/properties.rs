//! Property tests for the invariants of the three structures.

use std::sync::OnceLock;

use mmkit::bits;
use mmkit::bridge::{q2_of, q3_of};
use mmkit::harness::enumerate::{enumerate_delta_matroids, random_ribbon_graph, DeltaFilter};
use mmkit::io::{delta_to_value, mm_to_value, parse_delta, parse_multimatroid};
use mmkit::mm::Subtransversal;
use mmkit::{DeltaMatroid, MinorOp};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small() -> &'static Vec<DeltaMatroid> {
    static ALL: OnceLock<Vec<DeltaMatroid>> = OnceLock::new();
    ALL.get_or_init(|| {
        (1..=3)
            .flat_map(|n| enumerate_delta_matroids(n, DeltaFilter::any()).unwrap())
            .collect()
    })
}

fn vf_safe() -> &'static Vec<DeltaMatroid> {
    static ALL: OnceLock<Vec<DeltaMatroid>> = OnceLock::new();
    ALL.get_or_init(|| small().iter().filter(|d| d.is_vf_safe().unwrap()).cloned().collect())
}

fn delta() -> impl Strategy<Value = DeltaMatroid> {
    (0..small().len()).prop_map(|i| small()[i].clone())
}

fn vf_delta() -> impl Strategy<Value = DeltaMatroid> {
    (0..vf_safe().len()).prop_map(|i| vf_safe()[i].clone())
}

fn op() -> impl Strategy<Value = MinorOp> {
    prop_oneof![Just(MinorOp::Delete), Just(MinorOp::Contract), Just(MinorOp::TwistContract)]
}

/// A random subtransversal code of a partition with `k` classes of size `s`.
fn picks(k: usize, s: usize, seed: &[usize]) -> Subtransversal {
    Subtransversal::from_picks((0..k).map(|c| seed[c] % (s + 1)).map(|d| d.checked_sub(1)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn twist_is_an_involution(d in delta(), a in any::<u32>()) {
        let a = a & bits::full(d.len());
        prop_assert_eq!(d.twist(a).twist(a), d);
    }

    #[test]
    fn twists_compose_by_symmetric_difference(d in delta(), a in any::<u32>(), b in any::<u32>()) {
        let full = bits::full(d.len());
        prop_assert_eq!(d.twist(a & full).twist(b & full), d.twist((a ^ b) & full));
    }

    #[test]
    fn loop_complement_is_an_involution(d in delta(), a in any::<u32>()) {
        let a = a & bits::full(d.len());
        let s = d.as_set_system();
        prop_assert!(s.loop_complement(a).loop_complement(a).same_as(s));
    }

    #[test]
    fn bar_star_is_an_involution(d in vf_delta(), a in any::<u32>()) {
        let a = a & bits::full(d.len());
        let s = d.as_set_system();
        prop_assert!(s.bar_star(a).bar_star(a).same_as(s));
    }

    #[test]
    fn twist_after_loop_complement_has_order_three(d in vf_delta(), a in any::<u32>()) {
        let a = a & bits::full(d.len());
        let s = d.as_set_system();
        let step = |x: &mmkit::SetSystem| x.loop_complement(a).twist(a);
        prop_assert!(step(&step(&step(s))).same_as(s));
    }

    #[test]
    fn minor_order_is_irrelevant(d in vf_delta(), ops in prop::collection::vec(op(), 3)) {
        let plan: Vec<(&str, MinorOp)> = d.elements().iter().map(String::as_str).zip(ops).collect();
        let forward = d.apply_ops(&plan).unwrap();
        let mut reversed = plan.clone();
        reversed.reverse();
        prop_assert_eq!(d.apply_ops(&reversed).unwrap(), forward);
    }

    #[test]
    fn separators_survive_twists(d in delta(), a in any::<u32>()) {
        let a = a & bits::full(d.len());
        let t = d.twist(a);
        for x in d.separators() {
            prop_assert!(t.is_separator(x));
        }
    }

    #[test]
    fn separators_transfer_to_q2(d in delta()) {
        let q = q2_of(&d).unwrap();
        prop_assert_eq!(q.separators(), d.separators());
    }

    #[test]
    fn mm_minors_commute(d in vf_delta(), s1 in prop::collection::vec(0usize..4, 3), s2 in prop::collection::vec(0usize..4, 3)) {
        let q = q3_of(&d).unwrap();
        let k = d.len();
        let a = picks(k, 3, &s1);
        let b = Subtransversal::from_picks(
            (0..k).map(|c| if a.pick(c).is_some() { None } else { picks(k, 3, &s2).pick(c) }).collect(),
        );
        let both: Vec<Option<usize>> = (0..k).map(|c| a.pick(c).or(b.pick(c))).collect();
        let qa = q.minor(&a).unwrap();
        let b_labels: Vec<&str> = q.partition().labels_of(&b);
        let lhs = qa.minor_of_labels(&b_labels).unwrap();
        let rhs = q.minor(&Subtransversal::from_picks(both)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tightness_is_minor_closed(d in delta(), seed in prop::collection::vec(0usize..3, 3)) {
        let q = q2_of(&d).unwrap();
        prop_assume!(q.is_tight());
        let a = picks(d.len(), 2, &seed);
        prop_assert!(q.minor(&a).unwrap().is_tight());
    }

    #[test]
    fn q2_tight_iff_even(d in delta()) {
        prop_assert_eq!(q2_of(&d).unwrap().is_tight(), d.is_even());
    }

    #[test]
    fn json_roundtrips(d in delta()) {
        let back = parse_delta(&delta_to_value(&d).to_string()).unwrap();
        prop_assert_eq!(&back, &d);
        let q = q2_of(&d).unwrap();
        prop_assert_eq!(parse_multimatroid(&mm_to_value(&q).to_string()).unwrap(), q);
    }

    #[test]
    fn ribbon_compatibility_beyond_exhaustive(seed in any::<u64>(), m in 4usize..=5, a in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_ribbon_graph(&mut rng, m);
        let a = a & bits::full(m);
        let d = g.delta_matroid();
        prop_assert!(d.as_set_system().is_delta_matroid());
        prop_assert_eq!(g.partial_dual(a).delta_matroid(), d.twist(a));
        prop_assert!(g.half_twist(a).delta_matroid().as_set_system().same_as(&d.loop_complement(a)));
        prop_assert_eq!(g.partial_dual(a).partial_dual(a), g.clone());
        prop_assert_eq!(d.is_even(), g.is_orientable());
    }
}
