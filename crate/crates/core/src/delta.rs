//! Delta-matroids over ground sets of at most 16 elements.
//!
//! A [`DeltaMatroid`] is a ground set of labelled elements together with a
//! non-empty family of feasible sets satisfying the symmetric exchange axiom.
//! Elements are identified by position; labels are for presentation and for
//! comparing structures built along different routes.
//!
//! Twisting keeps the class closed, loop complementation does not, so the
//! unvalidated [`SetSystem`] is the carrier for those operations and for the
//! vf-safety closure.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::bits::{self, FamilyIndex, Mask};

pub const MAX_ELEMENTS: usize = 16;

/// Largest ground set accepted by [`DeltaMatroid::is_vf_safe`].
pub const MAX_VF_SAFE_ELEMENTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeltaError {
    #[error("the feasible family is empty")]
    EmptyFamily,
    #[error("ground set has {0} elements; at most {MAX_ELEMENTS} are supported")]
    TooManyElements(usize),
    #[error("feasible set {0:#b} uses bits outside the ground set")]
    OutOfRange(Mask),
    #[error("feasible set {0} listed twice")]
    DuplicateFeasible(String),
    #[error("element label `{0}` used twice")]
    DuplicateLabel(String),
    #[error("invalid element label `{0}`")]
    InvalidLabel(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("symmetric exchange fails: {0}")]
    Exchange(ExchangeViolation),
    #[error("element `{0}` is assigned more than one minor operation")]
    OverlappingMinor(String),
    #[error("label `{0}` occurs in both summands")]
    LabelCollision(String),
    #[error("vf-safety closure is limited to {MAX_VF_SAFE_ELEMENTS} elements, got {0}")]
    VfSafeTooLarge(usize),
    #[error("minor operations left the class of delta-matroids ({0})")]
    LeftClass(ExchangeViolation),
    #[error("ground set of the candidate minor is not contained in the ground set: `{0}` missing")]
    GroundSetMismatch(String),
}

/// A triple witnessing failure of symmetric exchange: no `y` in `F1 △ F2`
/// makes `F1 △ {x, y}` feasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeViolation {
    pub f1: Mask,
    pub f2: Mask,
    pub x: usize,
    labels: Vec<String>,
}

impl ExchangeViolation {
    pub fn f1_labels(&self) -> Vec<&str> {
        label_list(&self.labels, self.f1)
    }

    pub fn f2_labels(&self) -> Vec<&str> {
        label_list(&self.labels, self.f2)
    }

    pub fn x_label(&self) -> &str {
        &self.labels[self.x]
    }
}

impl fmt::Display for ExchangeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F1={{{}}}, F2={{{}}}, x={}",
            self.f1_labels().join(","),
            self.f2_labels().join(","),
            self.x_label()
        )
    }
}

fn label_list(labels: &[String], mask: Mask) -> Vec<&str> {
    bits::ones(mask).map(|i| labels[i].as_str()).collect()
}

/// Outcome of [`check_symmetric_exchange`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationResult {
    Ok,
    Counterexample(ExchangeViolation),
}

impl ValidationResult {
    pub fn is_ok(&self) -> bool {
        matches!(self, ValidationResult::Ok)
    }
}

/// Checks the symmetric exchange axiom, returning the first failing
/// `(F1, F2, x)` with feasible sets ordered by mask value and `x` by index.
pub fn check_symmetric_exchange(
    elements: &[String],
    feasible: &[Mask],
) -> Result<ValidationResult, DeltaError> {
    if feasible.is_empty() {
        return Err(DeltaError::EmptyFamily);
    }
    if elements.len() > MAX_ELEMENTS {
        return Err(DeltaError::TooManyElements(elements.len()));
    }
    let mut family = feasible.to_vec();
    family.sort_unstable();
    family.dedup();
    let limit = bits::full(elements.len());
    if let Some(&f) = family.iter().find(|&&f| f & !limit != 0) {
        return Err(DeltaError::OutOfRange(f));
    }
    Ok(match exchange_failure(elements.len(), &family) {
        None => ValidationResult::Ok,
        Some((f1, f2, x)) => ValidationResult::Counterexample(ExchangeViolation {
            f1,
            f2,
            x,
            labels: elements.to_vec(),
        }),
    })
}

/// Core exchange test on a sorted family.
pub(crate) fn exchange_failure(n: usize, family: &[Mask]) -> Option<(Mask, Mask, usize)> {
    let index = FamilyIndex::new(n, family);
    for &f1 in family {
        for &f2 in family {
            let diff = f1 ^ f2;
            for x in bits::ones(diff) {
                // y = x is allowed and means F1 △ {x}
                let ok = bits::ones(diff).any(|y| {
                    let pair = bits::bit(x) | bits::bit(y);
                    index.contains(f1 ^ pair)
                });
                if !ok {
                    return Some((f1, f2, x));
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementRole {
    Loop,
    Coloop,
    Ordinary,
}

/// The three ways of removing an element in a 3-minor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MinorOp {
    Delete,
    Contract,
    TwistContract,
}

/// A set of deletions, contractions and twist-contractions, keyed by label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MinorSpec {
    pub deletions: BTreeSet<String>,
    pub contractions: BTreeSet<String>,
    pub twist_contractions: BTreeSet<String>,
}

impl MinorSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delete(mut self, label: impl Into<String>) -> Self {
        self.deletions.insert(label.into());
        self
    }

    pub fn contract(mut self, label: impl Into<String>) -> Self {
        self.contractions.insert(label.into());
        self
    }

    pub fn twist_contract(mut self, label: impl Into<String>) -> Self {
        self.twist_contractions.insert(label.into());
        self
    }

    pub fn is_empty(&self) -> bool {
        self.deletions.is_empty() && self.contractions.is_empty() && self.twist_contractions.is_empty()
    }

    pub fn op_for(&self, label: &str) -> Option<MinorOp> {
        if self.deletions.contains(label) {
            Some(MinorOp::Delete)
        } else if self.contractions.contains(label) {
            Some(MinorOp::Contract)
        } else if self.twist_contractions.contains(label) {
            Some(MinorOp::TwistContract)
        } else {
            None
        }
    }

    fn check_disjoint(&self) -> Result<(), DeltaError> {
        for l in &self.deletions {
            if self.contractions.contains(l) || self.twist_contractions.contains(l) {
                return Err(DeltaError::OverlappingMinor(l.clone()));
            }
        }
        if let Some(l) = self.contractions.intersection(&self.twist_contractions).next() {
            return Err(DeltaError::OverlappingMinor(l.clone()));
        }
        Ok(())
    }

    fn labels(&self) -> impl Iterator<Item = &String> {
        self.deletions
            .iter()
            .chain(&self.contractions)
            .chain(&self.twist_contractions)
    }
}

/// A ground set with a non-empty family of subsets, not necessarily a delta-matroid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetSystem {
    elements: Vec<String>,
    feasible: Vec<Mask>,
}

impl SetSystem {
    /// Builds a set system; the family is sorted and duplicates are rejected.
    pub fn new(elements: Vec<String>, feasible: Vec<Mask>) -> Result<Self, DeltaError> {
        if elements.len() > MAX_ELEMENTS {
            return Err(DeltaError::TooManyElements(elements.len()));
        }
        check_labels(&elements)?;
        if feasible.is_empty() {
            return Err(DeltaError::EmptyFamily);
        }
        let limit = bits::full(elements.len());
        let mut family = feasible;
        family.sort_unstable();
        for w in family.windows(2) {
            if w[0] == w[1] {
                return Err(DeltaError::DuplicateFeasible(format!(
                    "{{{}}}",
                    label_list(&elements, w[0]).join(",")
                )));
            }
        }
        if let Some(&f) = family.iter().find(|&&f| f & !limit != 0) {
            return Err(DeltaError::OutOfRange(f));
        }
        Ok(Self {
            elements,
            feasible: family,
        })
    }

    pub(crate) fn from_parts(elements: Vec<String>, mut feasible: Vec<Mask>) -> Self {
        feasible.sort_unstable();
        feasible.dedup();
        debug_assert!(!feasible.is_empty());
        Self { elements, feasible }
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Feasible sets in increasing mask order.
    pub fn feasible(&self) -> &[Mask] {
        &self.feasible
    }

    pub fn index_of(&self, label: &str) -> Result<usize, DeltaError> {
        self.elements
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| DeltaError::UnknownElement(label.to_string()))
    }

    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Mask, DeltaError> {
        labels
            .iter()
            .try_fold(0, |m, l| Ok(m | bits::bit(self.index_of(l.as_ref())?)))
    }

    pub fn labels_of(&self, mask: Mask) -> Vec<&str> {
        label_list(&self.elements, mask)
    }

    pub fn contains(&self, f: Mask) -> bool {
        self.feasible.binary_search(&f).is_ok()
    }

    pub fn exchange_violation(&self) -> Option<ExchangeViolation> {
        exchange_failure(self.len(), &self.feasible).map(|(f1, f2, x)| ExchangeViolation {
            f1,
            f2,
            x,
            labels: self.elements.clone(),
        })
    }

    pub fn is_delta_matroid(&self) -> bool {
        exchange_failure(self.len(), &self.feasible).is_none()
    }

    pub fn into_delta_matroid(self) -> Result<DeltaMatroid, DeltaError> {
        match self.exchange_violation() {
            None => Ok(DeltaMatroid { system: self }),
            Some(v) => Err(DeltaError::Exchange(v)),
        }
    }

    pub fn role_at(&self, i: usize) -> ElementRole {
        let b = bits::bit(i);
        if self.feasible.iter().all(|f| f & b != 0) {
            ElementRole::Coloop
        } else if self.feasible.iter().all(|f| f & b == 0) {
            ElementRole::Loop
        } else {
            ElementRole::Ordinary
        }
    }

    /// `F ↦ F △ A` on every feasible set.
    pub fn twist(&self, a: Mask) -> SetSystem {
        SetSystem::from_parts(
            self.elements.clone(),
            self.feasible.iter().map(|f| f ^ a).collect(),
        )
    }

    /// Loop complementation at a single element: `𝓕 △ {F ∪ e : F ∈ 𝓕, e ∉ F}`.
    pub fn loop_complement_at(&self, i: usize) -> SetSystem {
        let b = bits::bit(i);
        let mut set: BTreeSet<Mask> = self.feasible.iter().copied().collect();
        for &f in &self.feasible {
            if f & b == 0 {
                let g = f | b;
                if !set.remove(&g) {
                    set.insert(g);
                }
            }
        }
        SetSystem::from_parts(self.elements.clone(), set.into_iter().collect())
    }

    /// Loop complementation by every element of `a`, lowest index first.
    pub fn loop_complement(&self, a: Mask) -> SetSystem {
        bits::ones(a).fold(self.clone(), |s, i| s.loop_complement_at(i))
    }

    /// `+A`, then `*A`, then `+A`.
    pub fn bar_star(&self, a: Mask) -> SetSystem {
        self.loop_complement(a).twist(a).loop_complement(a)
    }

    /// Deletion with the coloop convention (a coloop is contracted instead).
    pub fn delete_at(&self, i: usize) -> SetSystem {
        if self.role_at(i) == ElementRole::Coloop {
            return self.contract_at(i);
        }
        let b = bits::bit(i);
        let feasible = self
            .feasible
            .iter()
            .filter(|&&f| f & b == 0)
            .map(|&f| bits::remove_bit(f, i))
            .collect();
        SetSystem::from_parts(self.without_label(i), feasible)
    }

    /// Contraction with the loop convention (a loop is deleted instead).
    pub fn contract_at(&self, i: usize) -> SetSystem {
        if self.role_at(i) == ElementRole::Loop {
            return self.delete_at(i);
        }
        let b = bits::bit(i);
        let feasible = self
            .feasible
            .iter()
            .filter(|&&f| f & b != 0)
            .map(|&f| bits::remove_bit(f, i))
            .collect();
        SetSystem::from_parts(self.without_label(i), feasible)
    }

    /// `(S + e) / e`.
    pub fn twist_contract_at(&self, i: usize) -> SetSystem {
        self.loop_complement_at(i).contract_at(i)
    }

    pub fn apply_at(&self, i: usize, op: MinorOp) -> SetSystem {
        match op {
            MinorOp::Delete => self.delete_at(i),
            MinorOp::Contract => self.contract_at(i),
            MinorOp::TwistContract => self.twist_contract_at(i),
        }
    }

    /// Applies the operations in the order given, locating each element by label.
    pub fn apply_ops(&self, ops: &[(&str, MinorOp)]) -> Result<SetSystem, DeltaError> {
        let mut cur = self.clone();
        for &(label, op) in ops {
            let i = cur.index_of(label)?;
            cur = cur.apply_at(i, op);
        }
        Ok(cur)
    }

    fn without_label(&self, i: usize) -> Vec<String> {
        let mut v = self.elements.clone();
        v.remove(i);
        v
    }

    /// Label-wise equality: same label set and the same family after aligning
    /// element positions.
    pub fn same_as(&self, other: &SetSystem) -> bool {
        if self.elements == other.elements {
            return self.feasible == other.feasible;
        }
        if self.len() != other.len() || self.feasible.len() != other.feasible.len() {
            return false;
        }
        let Some(perm) = other
            .elements
            .iter()
            .map(|l| self.elements.iter().position(|m| m == l))
            .collect::<Option<Vec<usize>>>()
        else {
            return false;
        };
        let mut mapped: Vec<Mask> = other
            .feasible
            .iter()
            .map(|&f| bits::ones(f).fold(0, |m, i| m | bits::bit(perm[i])))
            .collect();
        mapped.sort_unstable();
        mapped == self.feasible
    }
}

fn check_labels(elements: &[String]) -> Result<(), DeltaError> {
    let mut seen = HashSet::new();
    for l in elements {
        if l.is_empty() {
            return Err(DeltaError::InvalidLabel(l.clone()));
        }
        if !seen.insert(l.as_str()) {
            return Err(DeltaError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// A validated delta-matroid.
#[derive(Debug, Clone, Eq)]
pub struct DeltaMatroid {
    system: SetSystem,
}

impl PartialEq for DeltaMatroid {
    fn eq(&self, other: &Self) -> bool {
        self.system.same_as(&other.system)
    }
}

impl fmt::Display for DeltaMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({{{}}}, {{", self.elements().join(","))?;
        for (k, &s) in self.feasible().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{{}}}", self.labels_of(s).join(","))?;
        }
        write!(f, "}})")
    }
}

impl DeltaMatroid {
    /// Validates the family (non-empty, in range, no duplicates, symmetric exchange).
    pub fn new(elements: Vec<String>, feasible: Vec<Mask>) -> Result<Self, DeltaError> {
        SetSystem::new(elements, feasible)?.into_delta_matroid()
    }

    /// Builds from feasible sets given as label lists.
    pub fn from_labels<S: AsRef<str>>(elements: &[S], feasible: &[Vec<S>]) -> Result<Self, DeltaError> {
        let elements: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        check_labels(&elements)?;
        let lookup = |l: &str| {
            elements
                .iter()
                .position(|m| m == l)
                .ok_or_else(|| DeltaError::UnknownElement(l.to_string()))
        };
        let mut masks = Vec::with_capacity(feasible.len());
        for set in feasible {
            let mut m = 0;
            for l in set {
                m |= bits::bit(lookup(l.as_ref())?);
            }
            masks.push(m);
        }
        Self::new(elements, masks)
    }

    /// The delta-matroid with empty ground set and `𝓕 = {∅}`.
    pub fn empty() -> Self {
        Self {
            system: SetSystem::from_parts(Vec::new(), vec![0]),
        }
    }

    pub(crate) fn from_system_unchecked(system: SetSystem) -> Self {
        debug_assert!(system.is_delta_matroid());
        Self { system }
    }

    pub fn as_set_system(&self) -> &SetSystem {
        &self.system
    }

    pub fn into_set_system(self) -> SetSystem {
        self.system
    }

    pub fn elements(&self) -> &[String] {
        self.system.elements()
    }

    pub fn len(&self) -> usize {
        self.system.len()
    }

    pub fn is_empty(&self) -> bool {
        self.system.is_empty()
    }

    pub fn feasible(&self) -> &[Mask] {
        self.system.feasible()
    }

    pub fn index_of(&self, label: &str) -> Result<usize, DeltaError> {
        self.system.index_of(label)
    }

    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Mask, DeltaError> {
        self.system.mask_of(labels)
    }

    pub fn labels_of(&self, mask: Mask) -> Vec<&str> {
        self.system.labels_of(mask)
    }

    pub fn is_feasible(&self, f: Mask) -> bool {
        self.system.contains(f)
    }

    pub fn element_role(&self, label: &str) -> Result<ElementRole, DeltaError> {
        Ok(self.system.role_at(self.index_of(label)?))
    }

    pub fn role_at(&self, i: usize) -> ElementRole {
        self.system.role_at(i)
    }

    pub fn delete(&self, label: &str) -> Result<DeltaMatroid, DeltaError> {
        Ok(self.delete_at(self.index_of(label)?))
    }

    pub fn contract(&self, label: &str) -> Result<DeltaMatroid, DeltaError> {
        Ok(self.contract_at(self.index_of(label)?))
    }

    pub fn delete_at(&self, i: usize) -> DeltaMatroid {
        Self::from_system_unchecked(self.system.delete_at(i))
    }

    pub fn contract_at(&self, i: usize) -> DeltaMatroid {
        Self::from_system_unchecked(self.system.contract_at(i))
    }

    /// `D + e / e`, which is a delta-matroid whenever `D` is vf-safe.
    pub fn twist_contract(&self, label: &str) -> Result<DeltaMatroid, DeltaError> {
        let i = self.index_of(label)?;
        let s = self.system.twist_contract_at(i);
        match s.exchange_violation() {
            None => Ok(Self { system: s }),
            Some(v) => Err(DeltaError::LeftClass(v)),
        }
    }

    /// Restriction `D|A = D \ (E − A)`.
    pub fn restrict(&self, keep: Mask) -> DeltaMatroid {
        let mut cur = self.system.clone();
        for i in (0..self.len()).rev() {
            if !bits::contains(keep, i) {
                cur = cur.delete_at(i);
            }
        }
        Self::from_system_unchecked(cur)
    }

    /// Applies `spec` element by element in ground-set order.
    pub fn apply_minor(&self, spec: &MinorSpec) -> Result<DeltaMatroid, DeltaError> {
        spec.check_disjoint()?;
        for l in spec.labels() {
            self.index_of(l)?;
        }
        let ops: Vec<(&str, MinorOp)> = self
            .elements()
            .iter()
            .filter_map(|l| spec.op_for(l).map(|op| (l.as_str(), op)))
            .collect();
        self.apply_ops(&ops)
    }

    /// Applies operations in the given order.
    pub fn apply_ops(&self, ops: &[(&str, MinorOp)]) -> Result<DeltaMatroid, DeltaError> {
        let s = self.system.apply_ops(ops)?;
        match s.exchange_violation() {
            None => Ok(Self { system: s }),
            Some(v) => Err(DeltaError::LeftClass(v)),
        }
    }

    pub fn direct_sum(&self, other: &DeltaMatroid) -> Result<DeltaMatroid, DeltaError> {
        if let Some(l) = other.elements().iter().find(|l| self.elements().contains(l)) {
            return Err(DeltaError::LabelCollision(l.clone()));
        }
        let n = self.len() + other.len();
        if n > MAX_ELEMENTS {
            return Err(DeltaError::TooManyElements(n));
        }
        let shift = self.len();
        let mut elements = self.elements().to_vec();
        elements.extend(other.elements().iter().cloned());
        let feasible = self
            .feasible()
            .iter()
            .flat_map(|&f1| other.feasible().iter().map(move |&f2| f1 | (f2 << shift)))
            .collect();
        Ok(Self::from_system_unchecked(SetSystem::from_parts(elements, feasible)))
    }

    /// True when `𝓕 = {F ∩ X} × {F − X}`.
    pub fn is_separator(&self, x: Mask) -> bool {
        is_separator(self.feasible(), x)
    }

    /// Every separator, in increasing mask order; always includes `∅` and `E`.
    pub fn separators(&self) -> Vec<Mask> {
        bits::submasks(bits::full(self.len()))
            .filter(|&x| self.is_separator(x))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n <= 1 {
            return true;
        }
        let full = bits::full(n);
        // complements of separators are separators, so fix element 0 on one side
        bits::submasks(full >> 1)
            .map(|x| (x << 1) | 1)
            .filter(|&x| x != full)
            .all(|x| !self.is_separator(x))
    }

    pub fn twist(&self, a: Mask) -> DeltaMatroid {
        Self::from_system_unchecked(self.system.twist(a))
    }

    pub fn loop_complement(&self, a: Mask) -> SetSystem {
        self.system.loop_complement(a)
    }

    /// `D ∗̄ A`, with a flag recording whether every intermediate stage is a delta-matroid.
    pub fn bar_star(&self, a: Mask) -> BarStar {
        let plus = self.system.loop_complement(a);
        let star = plus.twist(a);
        let out = star.loop_complement(a);
        let intermediates_valid = plus.is_delta_matroid() && star.is_delta_matroid();
        BarStar {
            valid: out.is_delta_matroid(),
            intermediates_valid,
            system: out,
        }
    }

    /// Closes `{D}` under `*e` and `+e` for every `e` and checks every member.
    pub fn is_vf_safe(&self) -> Result<bool, DeltaError> {
        let n = self.len();
        if n > MAX_VF_SAFE_ELEMENTS {
            return Err(DeltaError::VfSafeTooLarge(n));
        }
        let start = self.feasible().to_vec();
        let mut seen: HashSet<Vec<Mask>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(self.system.clone());
        while let Some(cur) = queue.pop_front() {
            if !cur.is_delta_matroid() {
                return Ok(false);
            }
            for i in 0..n {
                for next in [cur.twist(bits::bit(i)), cur.loop_complement_at(i)] {
                    if seen.insert(next.feasible.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn is_even(&self) -> bool {
        let p = self.feasible()[0].count_ones() % 2;
        self.feasible().iter().all(|f| f.count_ones() % 2 == p)
    }

    pub fn is_matroid(&self) -> bool {
        let k = self.feasible()[0].count_ones();
        self.feasible().iter().all(|f| f.count_ones() == k)
    }

    /// Searches deletions and contractions of `E(D) − E(D')` for `D'`.
    pub fn has_minor(&self, other: &DeltaMatroid) -> Result<Option<MinorSpec>, DeltaError> {
        self.search_minor(other, &[MinorOp::Delete, MinorOp::Contract])
    }

    /// Searches deletions, contractions and twist-contractions of `E(D) − E(D')` for `D'`.
    pub fn has_3_minor(&self, other: &DeltaMatroid) -> Result<Option<MinorSpec>, DeltaError> {
        self.search_minor(
            other,
            &[MinorOp::Delete, MinorOp::Contract, MinorOp::TwistContract],
        )
    }

    fn search_minor(
        &self,
        other: &DeltaMatroid,
        ops: &[MinorOp],
    ) -> Result<Option<MinorSpec>, DeltaError> {
        for l in other.elements() {
            if !self.elements().contains(l) {
                return Err(DeltaError::GroundSetMismatch(l.clone()));
            }
        }
        let removed: Vec<&str> = self
            .elements()
            .iter()
            .filter(|l| !other.elements().contains(l))
            .map(String::as_str)
            .collect();
        let k = removed.len();
        let total = ops.len().pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let mut plan = Vec::with_capacity(k);
            for &l in &removed {
                plan.push((l, ops[c % ops.len()]));
                c /= ops.len();
            }
            let result = self.system.apply_ops(&plan)?;
            if result.same_as(&other.system) {
                let mut spec = MinorSpec::new();
                for (l, op) in plan {
                    spec = match op {
                        MinorOp::Delete => spec.delete(l),
                        MinorOp::Contract => spec.contract(l),
                        MinorOp::TwistContract => spec.twist_contract(l),
                    };
                }
                return Ok(Some(spec));
            }
        }
        Ok(None)
    }
}

/// Result of [`DeltaMatroid::bar_star`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarStar {
    pub system: SetSystem,
    /// The final set system satisfies symmetric exchange.
    pub valid: bool,
    /// Both `D + A` and `D + A * A` satisfy symmetric exchange.
    pub intermediates_valid: bool,
}

pub(crate) fn is_separator(family: &[Mask], x: Mask) -> bool {
    let mut inside: Vec<Mask> = family.iter().map(|f| f & x).collect();
    let mut outside: Vec<Mask> = family.iter().map(|f| f & !x).collect();
    inside.sort_unstable();
    inside.dedup();
    outside.sort_unstable();
    outside.dedup();
    // family ⊆ inside × outside, so equality is a cardinality check
    inside.len() * outside.len() == family.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    fn dm(elements: &str, sets: &[&str]) -> DeltaMatroid {
        let e = labels(elements);
        let f: Vec<Vec<String>> = sets.iter().map(|s| labels(s)).collect();
        DeltaMatroid::from_labels(&e, &f).unwrap()
    }

    fn d_ex() -> DeltaMatroid {
        dm(
            "abcd",
            &["", "a", "b", "c", "d", "ab", "cd", "abc", "abd", "acd", "bcd"],
        )
    }

    #[test]
    fn exchange_accepts_example_family() {
        let d = d_ex();
        let r = check_symmetric_exchange(d.elements(), d.feasible()).unwrap();
        assert!(r.is_ok());
    }

    #[test]
    fn exchange_single_feasible() {
        let r = check_symmetric_exchange(&labels("e"), &[0]).unwrap();
        assert_eq!(r, ValidationResult::Ok);
    }

    #[test]
    fn exchange_reports_first_counterexample() {
        // {∅, {a}, {c}, {b,c}}
        let r = check_symmetric_exchange(&labels("abc"), &[0b000, 0b001, 0b100, 0b110]).unwrap();
        match r {
            ValidationResult::Counterexample(v) => {
                assert_eq!(v.f1_labels(), vec!["a"]);
                assert_eq!(v.f2_labels(), vec!["b", "c"]);
                assert_eq!(v.x_label(), "b");
            }
            ValidationResult::Ok => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn exchange_rejects_empty_family() {
        assert_eq!(
            check_symmetric_exchange(&labels("a"), &[]),
            Err(DeltaError::EmptyFamily)
        );
        assert_eq!(
            DeltaMatroid::new(labels("a"), vec![]),
            Err(DeltaError::EmptyFamily)
        );
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            DeltaMatroid::new(labels("ab"), vec![0, 0]),
            Err(DeltaError::DuplicateFeasible(_))
        ));
        assert!(matches!(
            DeltaMatroid::new(labels("ab"), vec![0b100]),
            Err(DeltaError::OutOfRange(_))
        ));
        assert!(matches!(
            DeltaMatroid::new(vec!["a".into(), "a".into()], vec![0]),
            Err(DeltaError::DuplicateLabel(_))
        ));
        assert!(matches!(
            DeltaMatroid::new(labels("abcdefghijklmnopq"), vec![0]),
            Err(DeltaError::TooManyElements(17))
        ));
    }

    #[test]
    fn element_roles() {
        assert_eq!(dm("e", &["e"]).element_role("e").unwrap(), ElementRole::Coloop);
        assert_eq!(dm("e", &[""]).element_role("e").unwrap(), ElementRole::Loop);
        assert_eq!(d_ex().element_role("a").unwrap(), ElementRole::Ordinary);
        assert!(matches!(
            d_ex().element_role("z"),
            Err(DeltaError::UnknownElement(_))
        ));
    }

    #[test]
    fn delete_and_contract_d_ex() {
        let d = d_ex();
        assert_eq!(
            d.delete("d").unwrap(),
            dm("abc", &["", "a", "b", "c", "ab", "abc"])
        );
        assert_eq!(
            d.contract("d").unwrap(),
            dm("abc", &["", "c", "ab", "ac", "bc"])
        );
    }

    #[test]
    fn coloop_and_loop_conventions() {
        let coloop = dm("e", &["e"]);
        assert_eq!(coloop.delete("e").unwrap(), DeltaMatroid::empty());
        assert_eq!(coloop.delete("e").unwrap(), coloop.contract("e").unwrap());
        let lp = dm("e", &[""]);
        assert_eq!(lp.contract("e").unwrap(), lp.delete("e").unwrap());
    }

    #[test]
    fn apply_minor_examples() {
        let d = d_ex();
        let spec = MinorSpec::new().delete("d");
        assert_eq!(d.apply_minor(&spec).unwrap(), d.delete("d").unwrap());
        assert_eq!(d.apply_minor(&MinorSpec::new()).unwrap(), d);
        let lp = dm("e", &[""]);
        let r = lp.apply_minor(&MinorSpec::new().twist_contract("e")).unwrap();
        assert_eq!(r, DeltaMatroid::empty());
    }

    #[test]
    fn apply_minor_rejects_overlap_and_unknown() {
        let d = d_ex();
        assert!(matches!(
            d.apply_minor(&MinorSpec::new().delete("a").contract("a")),
            Err(DeltaError::OverlappingMinor(_))
        ));
        assert!(matches!(
            d.apply_minor(&MinorSpec::new().delete("z")),
            Err(DeltaError::UnknownElement(_))
        ));
    }

    #[test]
    fn direct_sum_examples() {
        let s = dm("a", &["a"]).direct_sum(&dm("b", &[""])).unwrap();
        assert_eq!(s, dm("ab", &["a"]));
        let s = dm("a", &["", "a"]).direct_sum(&dm("b", &["", "b"])).unwrap();
        assert_eq!(s, dm("ab", &["", "a", "b", "ab"]));
        let d = d_ex();
        assert_eq!(d.direct_sum(&DeltaMatroid::empty()).unwrap(), d);
        assert!(matches!(
            d.direct_sum(&dm("a", &[""])),
            Err(DeltaError::LabelCollision(_))
        ));
    }

    #[test]
    fn separators_examples() {
        let d = d_ex();
        assert_eq!(d.separators(), vec![0, 0b1111]);
        assert!(d.is_connected());
        let s = dm("ab", &["a"]);
        assert_eq!(s.separators(), vec![0, 1, 2, 3]);
        assert!(!s.is_connected());
        let one = dm("e", &["", "e"]);
        assert_eq!(one.separators(), vec![0, 1]);
        assert!(one.is_connected());
    }

    #[test]
    fn twist_loop_complement_bar_star() {
        let lp = dm("e", &[""]);
        assert_eq!(lp.twist(1), dm("e", &["e"]));
        assert_eq!(lp.loop_complement(1).feasible(), &[0, 1]);
        let d = d_ex();
        let bs = d.bar_star(d.mask_of(&["a"]).unwrap());
        assert!(bs.valid);
        let expected = dm(
            "abcd",
            &["a", "ab", "acd", "bc", "bd", "c", "d", "bcd", "abc", "abd"],
        );
        assert!(bs.system.same_as(expected.as_set_system()));
    }

    #[test]
    fn vf_safe_examples() {
        assert!(d_ex().is_vf_safe().unwrap());
        assert!(dm("e", &[""]).is_vf_safe().unwrap());
        let big = DeltaMatroid::new(labels("abcdefghi"), vec![0]).unwrap();
        assert_eq!(big.is_vf_safe(), Err(DeltaError::VfSafeTooLarge(9)));
    }

    #[test]
    fn parity_predicates() {
        assert!(!d_ex().is_even());
        let u12 = dm("ef", &["e", "f"]);
        assert!(u12.is_matroid());
        assert!(u12.is_even());
    }

    #[test]
    fn minor_search() {
        let d = d_ex();
        assert_eq!(d.has_3_minor(&d).unwrap(), Some(MinorSpec::new()));
        let s = dm("ab", &["a"]);
        let w = s.has_3_minor(&dm("a", &["a"])).unwrap().unwrap();
        assert!(w.deletions.contains("b") || w.contractions.contains("b"));
        assert!(matches!(
            dm("a", &["a"]).has_minor(&s),
            Err(DeltaError::GroundSetMismatch(_))
        ));
    }

    #[test]
    fn equality_is_label_wise() {
        let x = dm("ab", &["a", "ab"]);
        let y = dm("ba", &["a", "ba"]);
        assert_eq!(x, y);
        assert_ne!(x, dm("ab", &["b", "ab"]));
    }
}
