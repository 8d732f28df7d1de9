//! Passing between delta-matroids and tight 2- and 3-matroids.
//!
//! For a delta-matroid `D` on `E` the copies `E₀ = E`, `E₁ = {e'}` and
//! `E₂ = {e''}` are formed by suffixing primes to each label, and every skew
//! class is `{e, e'}` (for `Q₂`) or `{e, e', e''}` (for `Q₃`).

use std::collections::HashMap;

use thiserror::Error;

use crate::bits::{self, FamilyIndex, Mask};
use crate::delta::{DeltaError, DeltaMatroid, SetSystem};
use crate::mm::{Multimatroid, MmError, SkewPartition, Subtransversal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("label `{0}` contains a prime, which is reserved for derived copies")]
    PrimedLabel(String),
    #[error("the delta-matroid is not vf-safe")]
    NotVfSafe,
    #[error("skew class {{{class}}} has {size} elements; a 2-matroid needs 2")]
    ClassSize { class: String, size: usize },
    #[error("the transversal does not pick an element from every class")]
    NotTransversal,
    #[error("not a triple carrier: {0}")]
    NotTripleCarrier(String),
    #[error("the multimatroid is not tight")]
    NotTight,
    #[error("no basis lies inside E₀ ∪ E₁")]
    NoWitness,
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error(transparent)]
    Mm(#[from] MmError),
}

/// The ground set `U = E₀ ∪ E₁ ∪ E₂` built from base labels `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleCarrier {
    base: Vec<String>,
}

impl TripleCarrier {
    pub fn new(base: Vec<String>) -> Result<Self, BridgeError> {
        if let Some(l) = base.iter().find(|l| l.contains('\'')) {
            return Err(BridgeError::PrimedLabel(l.clone()));
        }
        Ok(Self { base })
    }

    /// Recovers the carrier from a partition whose classes are `{e, e', e''}`.
    pub fn from_partition(p: &SkewPartition) -> Result<Self, BridgeError> {
        let mut base = Vec::with_capacity(p.num_classes());
        for class in p.classes() {
            let root = class
                .iter()
                .find(|l| !l.contains('\''))
                .ok_or_else(|| BridgeError::NotTripleCarrier(class.join(",")))?;
            let mut want = vec![root.clone(), copy(root, 1), copy(root, 2)];
            let mut have = class.clone();
            want.sort();
            have.sort();
            if want != have {
                return Err(BridgeError::NotTripleCarrier(class.join(",")));
            }
            base.push(root.clone());
        }
        Ok(Self { base })
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    /// Label of `e` in `E_k`.
    pub fn copy(&self, i: usize, k: usize) -> String {
        copy(&self.base[i], k)
    }

    /// `π`: the base label and the copy index of a ground-set label.
    pub fn project<'a>(&self, label: &'a str) -> Option<(&'a str, usize)> {
        let stripped = label.trim_end_matches('\'');
        let k = label.len() - stripped.len();
        (k <= 2 && self.base.iter().any(|b| b == stripped)).then_some((stripped, k))
    }

    /// Classes `{e, e', e''}` in base order.
    pub fn classes(&self) -> Vec<Vec<String>> {
        (0..self.base.len())
            .map(|i| (0..3).map(|k| self.copy(i, k)).collect())
            .collect()
    }
}

fn copy(label: &str, k: usize) -> String {
    format!("{label}{}", "'".repeat(k))
}

fn unprimed(d: &DeltaMatroid) -> Result<(), BridgeError> {
    match d.elements().iter().find(|l| l.contains('\'')) {
        Some(l) => Err(BridgeError::PrimedLabel(l.clone())),
        None => Ok(()),
    }
}

/// `Q₂(D)`: classes `{e, e'}` and bases `F ∪ (E − F)'` for `F ∈ 𝓕(D)`.
pub fn q2_of(d: &DeltaMatroid) -> Result<Multimatroid, BridgeError> {
    unprimed(d)?;
    let classes: Vec<Vec<String>> = d
        .elements()
        .iter()
        .map(|e| vec![e.clone(), copy(e, 1)])
        .collect();
    let partition = SkewPartition::new(classes)?;
    let n = d.len();
    let bases = d
        .feasible()
        .iter()
        .map(|&f| {
            let picks = (0..n)
                .map(|i| Some(if bits::contains(f, i) { 0 } else { 1 }))
                .collect();
            partition.encode(&Subtransversal::from_picks(picks))
        })
        .collect();
    Ok(Multimatroid::from_basis_codes(partition, bases))
}

/// The section of a 2-matroid by a transversal `T`: ground set `T` (in class
/// order) and feasible sets `B ∩ T`.
pub fn section(q: &Multimatroid, t: &Subtransversal) -> Result<DeltaMatroid, BridgeError> {
    let p = q.partition();
    for class in p.classes() {
        if class.len() != 2 {
            return Err(BridgeError::ClassSize {
                class: class.join(","),
                size: class.len(),
            });
        }
    }
    if t.picks().len() != p.num_classes() || !t.is_transversal() {
        return Err(BridgeError::NotTransversal);
    }
    let elements: Vec<String> = p.labels_of(t).into_iter().map(String::from).collect();
    let feasible: Vec<Mask> = q
        .bases()
        .iter()
        .map(|b| {
            (0..p.num_classes())
                .filter(|&c| b.pick(c) == t.pick(c))
                .fold(0, |m, c| m | bits::bit(c))
        })
        .collect();
    Ok(SetSystem::new(elements, feasible)?.into_delta_matroid()?)
}

/// The section by the transversal given as labels.
pub fn section_of_labels<S: AsRef<str>>(q: &Multimatroid, labels: &[S]) -> Result<DeltaMatroid, BridgeError> {
    let t = q.subtransversal(labels)?;
    section(q, &t)
}

/// `Q₃(D)`: a transversal `B` is a basis iff `π(B ∩ E₁)` is feasible in
/// `D ∗̄ π(B ∩ E₂)`.
pub fn q3_of(d: &DeltaMatroid) -> Result<Multimatroid, BridgeError> {
    unprimed(d)?;
    if !d.is_vf_safe()? {
        return Err(BridgeError::NotVfSafe);
    }
    let carrier = TripleCarrier::new(d.elements().to_vec())?;
    let partition = SkewPartition::new(carrier.classes())?;
    let n = d.len();
    let mut memo: HashMap<Mask, FamilyIndex> = HashMap::new();
    let mut bases = Vec::new();
    for b in partition.transversals_of(partition.all_classes()) {
        let s = partition.decode(b);
        let (mut a1, mut a2) = (0, 0);
        for i in 0..n {
            match s.pick(i) {
                Some(1) => a1 |= bits::bit(i),
                Some(2) => a2 |= bits::bit(i),
                _ => {}
            }
        }
        let twisted = memo
            .entry(a2)
            .or_insert_with(|| FamilyIndex::new(n, d.bar_star(a2).system.feasible()));
        if twisted.contains(a1) {
            bases.push(b);
        }
    }
    Ok(Multimatroid::from_basis_codes(partition, bases))
}

/// Inverts [`q3_of`]: `F` is feasible iff some basis `B ⊆ E₀ ∪ E₁` has
/// `π(B ∩ E₁) = F`. Ground order follows the class order.
pub fn delta_of_q3(q: &Multimatroid) -> Result<DeltaMatroid, BridgeError> {
    let p = q.partition();
    let carrier = TripleCarrier::from_partition(p)?;
    if !q.is_tight() {
        return Err(BridgeError::NotTight);
    }
    // position of each copy within its class
    let slot: Vec<[usize; 3]> = (0..p.num_classes())
        .map(|c| {
            let mut s = [0; 3];
            for (j, l) in p.classes()[c].iter().enumerate() {
                s[carrier.project(l).expect("carrier label").1] = j;
            }
            s
        })
        .collect();
    let feasible: Vec<Mask> = q
        .bases()
        .iter()
        .filter(|b| (0..p.num_classes()).all(|c| b.pick(c) != Some(slot[c][2])))
        .map(|b| {
            (0..p.num_classes())
                .filter(|&c| b.pick(c) == Some(slot[c][1]))
                .fold(0, |m, c| m | bits::bit(c))
        })
        .collect();
    if feasible.is_empty() {
        return Err(BridgeError::NoWitness);
    }
    Ok(SetSystem::new(carrier.base().to_vec(), feasible)?.into_delta_matroid()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm(elements: &[&str], feasible: &[&[&str]]) -> DeltaMatroid {
        let f: Vec<Vec<&str>> = feasible.iter().map(|s| s.to_vec()).collect();
        DeltaMatroid::from_labels(elements, &f).unwrap()
    }

    fn d_ex() -> DeltaMatroid {
        dm(
            &["a", "b", "c", "d"],
            &[
                &[],
                &["a"],
                &["b"],
                &["c"],
                &["d"],
                &["a", "b"],
                &["c", "d"],
                &["a", "b", "c"],
                &["a", "b", "d"],
                &["a", "c", "d"],
                &["b", "c", "d"],
            ],
        )
    }

    #[test]
    fn q2_single_coloop() {
        let q = q2_of(&dm(&["e"], &[&["e"]])).unwrap();
        assert_eq!(q.basis_labels(), vec![vec!["e".to_string()]]);
        assert_eq!(q.rank_of_labels(&["e'"]).unwrap(), 0);
        assert!(q.verify_axioms().passed());
    }

    #[test]
    fn q2_free_element() {
        let q = q2_of(&dm(&["e"], &[&[], &["e"]])).unwrap();
        let mut b = q.basis_labels();
        b.sort();
        assert_eq!(b, vec![vec!["e".to_string()], vec!["e'".to_string()]]);
    }

    #[test]
    fn q2_rejects_primed_labels() {
        let d = dm(&["x'"], &[&[]]);
        assert_eq!(q2_of(&d), Err(BridgeError::PrimedLabel("x'".into())));
    }

    #[test]
    fn section_roundtrip_and_twist() {
        let d = d_ex();
        let q = q2_of(&d).unwrap();
        assert_eq!(section_of_labels(&q, &["a", "b", "c", "d"]).unwrap(), d);
        let primed = section_of_labels(&q, &["a'", "b'", "c'", "d'"]).unwrap();
        let twisted = d.twist(bits::full(4));
        let relabeled: Vec<String> = primed.elements().iter().map(|l| l.trim_end_matches('\'').to_string()).collect();
        let back = DeltaMatroid::new(relabeled, primed.feasible().to_vec()).unwrap();
        assert_eq!(back, twisted);
    }

    #[test]
    fn section_requires_pairs() {
        let q = q3_of(&dm(&["e"], &[&[]])).unwrap();
        let t = q.subtransversal(&["e"]).unwrap();
        assert!(matches!(section(&q, &t), Err(BridgeError::ClassSize { .. })));
        let q2 = q2_of(&dm(&["e", "f"], &[&[]])).unwrap();
        let partial = q2.subtransversal(&["e"]).unwrap();
        assert_eq!(section(&q2, &partial), Err(BridgeError::NotTransversal));
    }

    #[test]
    fn q3_table_membership() {
        let q = q3_of(&d_ex()).unwrap();
        assert_eq!(q.num_bases(), 50);
        assert!(q.is_tight());
        let yes = q.subtransversal(&["a'", "b", "c", "d"]).unwrap();
        let no = q.subtransversal(&["a''", "b", "c", "d"]).unwrap();
        assert!(q.is_basis(&yes));
        assert!(!q.is_basis(&no));
    }

    #[test]
    fn q3_roundtrip_on_example() {
        let q = q3_of(&d_ex()).unwrap();
        assert_eq!(delta_of_q3(&q).unwrap(), d_ex());
    }

    #[test]
    fn delta_of_q3_requires_triples() {
        let q = q2_of(&dm(&["e"], &[&[]])).unwrap();
        assert!(matches!(delta_of_q3(&q), Err(BridgeError::NotTripleCarrier(_))));
    }

    #[test]
    fn carrier_projection() {
        let c = TripleCarrier::new(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(c.project("a''"), Some(("a", 2)));
        assert_eq!(c.project("b"), Some(("b", 0)));
        assert_eq!(c.project("z'"), None);
        assert_eq!(c.project("a'''"), None);
        assert!(TripleCarrier::new(vec!["a'".into()]).is_err());
    }
}
