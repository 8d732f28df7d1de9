//! Multimatroids with the rank function stored as a table over all subtransversals.
//!
//! A subtransversal is encoded as a mixed-radix integer: class `i` contributes
//! digit `0` when absent and `j + 1` when its `j`-th element is chosen. The rank
//! table is indexed by that code, so minors, separators and tightness reduce to
//! table lookups.
//!
//! Multimatroids built from a basis list use `r(A) = max_B |A ∩ B|`. Degenerate
//! instances (a class of size one, e.g. matroids as 1-matroids) can also be built
//! from an explicit rank table.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::time::Instant;

use serde_json::json;
use thiserror::Error;

use crate::report::CheckReport;

/// Largest ground set `|U|` accepted.
pub const MAX_GROUND: usize = 18;

/// Largest number of skew classes (class masks are `u32`).
pub const MAX_CLASSES: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MmError {
    #[error("skew class {0} is empty")]
    EmptyClass(usize),
    #[error("element label `{0}` used twice")]
    DuplicateLabel(String),
    #[error("ground set has {0} elements; at most {MAX_GROUND} are supported")]
    TooLarge(usize),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("not a subtransversal: {0}")]
    NotSubtransversal(String),
    #[error("the basis list is empty")]
    NoBases,
    #[error("basis {0} listed twice")]
    DuplicateBasis(String),
    #[error("rank table has {got} entries, expected {expected}")]
    IncompleteTable { expected: usize, got: usize },
    #[error("rank function violates the multimatroid axioms: {0}")]
    Axioms(String),
    #[error("listed bases differ from the maximal independent sets of the derived rank function")]
    BasesMismatch,
    #[error("multimatroid is not tight")]
    NotTight,
    #[error("multimatroid is degenerate (a skew class has one element)")]
    Degenerate,
    #[error("{0} is not a basis")]
    NotABasis(String),
    #[error("no fundamental circuit in B ∪ ω")]
    NoFundamentalCircuit,
    #[error("tightness violated: {0}")]
    TightnessViolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("label `{0}` occurs in both summands")]
    LabelCollision(String),
    #[error("skew class {{{0}}} does not occur in the larger multimatroid")]
    ClassMismatch(String),
}

/// An element addressed by its skew class and position within the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub class: usize,
    pub index: usize,
}

impl Element {
    pub fn new(class: usize, index: usize) -> Self {
        Self { class, index }
    }
}

/// A partial choice of at most one element per skew class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subtransversal {
    picks: Vec<Option<usize>>,
}

impl Subtransversal {
    pub fn empty(classes: usize) -> Self {
        Self {
            picks: vec![None; classes],
        }
    }

    pub fn from_picks(picks: Vec<Option<usize>>) -> Self {
        Self { picks }
    }

    pub fn picks(&self) -> &[Option<usize>] {
        &self.picks
    }

    pub fn pick(&self, class: usize) -> Option<usize> {
        self.picks[class]
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.picks.iter().filter(|p| p.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_transversal(&self) -> bool {
        self.picks.iter().all(Option::is_some)
    }

    pub fn contains(&self, e: Element) -> bool {
        self.picks[e.class] == Some(e.index)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.picks
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|j| Element::new(c, j)))
    }

    pub fn with(mut self, e: Element) -> Self {
        self.picks[e.class] = Some(e.index);
        self
    }

    pub fn without_class(mut self, class: usize) -> Self {
        self.picks[class] = None;
        self
    }
}

/// The partition of the ground set into skew classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewPartition {
    classes: Vec<Vec<String>>,
    strides: Vec<usize>,
    len: usize,
}

impl SkewPartition {
    pub fn new(classes: Vec<Vec<String>>) -> Result<Self, MmError> {
        let total: usize = classes.iter().map(Vec::len).sum();
        if total > MAX_GROUND || classes.len() > MAX_CLASSES {
            return Err(MmError::TooLarge(total));
        }
        let mut seen = HashSet::new();
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(MmError::EmptyClass(i));
            }
            for l in class {
                if !seen.insert(l.as_str()) {
                    return Err(MmError::DuplicateLabel(l.clone()));
                }
            }
        }
        Ok(Self::from_trusted(classes))
    }

    pub(crate) fn from_trusted(classes: Vec<Vec<String>>) -> Self {
        let mut strides = Vec::with_capacity(classes.len());
        let mut len = 1usize;
        for c in &classes {
            strides.push(len);
            len *= c.len() + 1;
        }
        Self {
            classes,
            strides,
            len,
        }
    }

    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn ground_size(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    pub fn label(&self, e: Element) -> &str {
        &self.classes[e.class][e.index]
    }

    pub fn find(&self, label: &str) -> Option<Element> {
        self.classes.iter().enumerate().find_map(|(c, class)| {
            class
                .iter()
                .position(|l| l == label)
                .map(|j| Element::new(c, j))
        })
    }

    pub fn element(&self, label: &str) -> Result<Element, MmError> {
        self.find(label)
            .ok_or_else(|| MmError::UnknownElement(label.to_string()))
    }

    /// Mask with one bit per skew class.
    pub fn all_classes(&self) -> u32 {
        crate::bits::full(self.num_classes())
    }

    /// Number of subtransversals (the rank-table length).
    pub fn table_len(&self) -> usize {
        self.len
    }

    pub fn subtransversal<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subtransversal, MmError> {
        let mut s = Subtransversal::empty(self.num_classes());
        for l in labels {
            let e = self.element(l.as_ref())?;
            if s.picks[e.class].is_some() {
                return Err(MmError::NotSubtransversal(format!(
                    "two elements of skew class {{{}}}",
                    self.classes[e.class].join(",")
                )));
            }
            s.picks[e.class] = Some(e.index);
        }
        Ok(s)
    }

    pub fn labels_of(&self, s: &Subtransversal) -> Vec<&str> {
        s.elements().map(|e| self.label(e)).collect()
    }

    pub fn encode(&self, s: &Subtransversal) -> usize {
        debug_assert_eq!(s.picks.len(), self.num_classes());
        s.picks
            .iter()
            .zip(&self.strides)
            .map(|(p, st)| p.map_or(0, |j| (j + 1) * st))
            .sum()
    }

    pub fn decode(&self, code: usize) -> Subtransversal {
        Subtransversal {
            picks: (0..self.num_classes())
                .map(|c| self.digit(code, c).checked_sub(1))
                .collect(),
        }
    }

    #[inline]
    pub(crate) fn digit(&self, code: usize, c: usize) -> usize {
        (code / self.strides[c]) % (self.classes[c].len() + 1)
    }

    #[inline]
    pub(crate) fn elem_code(&self, e: Element) -> usize {
        (e.index + 1) * self.strides[e.class]
    }

    pub(crate) fn size(&self, code: usize) -> usize {
        (0..self.num_classes())
            .filter(|&c| self.digit(code, c) != 0)
            .count()
    }

    pub(crate) fn present(&self, code: usize) -> u32 {
        (0..self.num_classes())
            .filter(|&c| self.digit(code, c) != 0)
            .fold(0, |m, c| m | (1 << c))
    }

    /// Keeps only the classes in `mask`.
    pub(crate) fn restrict(&self, code: usize, mask: u32) -> usize {
        (0..self.num_classes())
            .filter(|&c| mask & (1 << c) != 0)
            .map(|c| self.digit(code, c) * self.strides[c])
            .sum()
    }

    pub(crate) fn code_labels(&self, code: usize) -> Vec<String> {
        (0..self.num_classes())
            .filter_map(|c| {
                self.digit(code, c)
                    .checked_sub(1)
                    .map(|j| self.classes[c][j].clone())
            })
            .collect()
    }

    pub(crate) fn class_labels(&self, mask: u32) -> Vec<String> {
        crate::bits::ones(mask)
            .flat_map(|c| self.classes[c].iter().cloned())
            .collect()
    }

    /// Codes of all transversals of the classes in `mask` (other classes absent).
    pub(crate) fn transversals_of(&self, mask: u32) -> Vec<usize> {
        let mut out = vec![0usize];
        for c in crate::bits::ones(mask) {
            let mut next = Vec::with_capacity(out.len() * self.class_size(c));
            for &base in &out {
                for j in 0..self.class_size(c) {
                    next.push(base + (j + 1) * self.strides[c]);
                }
            }
            out = next;
        }
        out
    }
}

/// Checks axioms (1)–(4) over every subtransversal.
///
/// Submodularity is checked in its local form `r(A∪x) + r(A∪y) ≥ r(A∪x∪y) + r(A)`,
/// which is equivalent to the global inequality on the Boolean lattice below any
/// transversal.
pub fn verify_axioms(partition: &SkewPartition, rank: &[u8]) -> Result<CheckReport, MmError> {
    let start = Instant::now();
    if rank.len() != partition.table_len() {
        return Err(MmError::IncompleteTable {
            expected: partition.table_len(),
            got: rank.len(),
        });
    }
    let mut report = CheckReport::new("multimatroid-axioms");
    let p = partition;
    let k = p.num_classes();
    let set = |code: usize| p.code_labels(code);
    report.assert(rank[0] == 0, || json!({"axiom": 1, "A": [], "rank": rank[0]}));
    for a in 0..p.table_len() {
        let ra = rank[a] as i32;
        for c in 0..k {
            if p.digit(a, c) != 0 {
                continue;
            }
            for j in 0..p.class_size(c) {
                let x = Element::new(c, j);
                let ax = a + p.elem_code(x);
                let rax = rank[ax] as i32;
                report.assert(ra <= rax && rax <= ra + 1, || {
                    json!({"axiom": 2, "A": set(a), "x": p.label(x), "r(A)": ra, "r(A+x)": rax})
                });
                for j2 in (j + 1)..p.class_size(c) {
                    let y = Element::new(c, j2);
                    let ray = rank[a + p.elem_code(y)] as i32;
                    report.assert(rax - ra + ray - ra >= 1, || {
                        json!({"axiom": 4, "A": set(a), "x": p.label(x), "y": p.label(y)})
                    });
                }
                for d in (c + 1)..k {
                    if p.digit(a, d) != 0 {
                        continue;
                    }
                    for jd in 0..p.class_size(d) {
                        let y = Element::new(d, jd);
                        let ay = a + p.elem_code(y);
                        let axy = ax + p.elem_code(y);
                        report.assert(
                            rax + rank[ay] as i32 >= rank[axy] as i32 + ra,
                            || json!({"axiom": 3, "A": set(a), "x": p.label(x), "y": p.label(y)}),
                        );
                    }
                }
            }
        }
    }
    Ok(report.finish(start))
}

/// A multimatroid `(U, Ω, r)`.
#[derive(Debug, Clone)]
pub struct Multimatroid {
    partition: SkewPartition,
    rank: Vec<u8>,
    bases: Vec<usize>,
}

impl PartialEq for Multimatroid {
    fn eq(&self, other: &Self) -> bool {
        self.eq_labeled(other)
    }
}

impl Eq for Multimatroid {}

impl fmt::Display for Multimatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<String> = self
            .partition
            .classes()
            .iter()
            .map(|c| format!("{{{}}}", c.join(",")))
            .collect();
        write!(f, "classes [{}], {} bases", classes.join(" "), self.bases.len())
    }
}

impl Multimatroid {
    /// Builds from a basis list; the derived rank function must satisfy the
    /// axioms and its maximal independent sets must be exactly the given bases.
    pub fn from_bases(partition: SkewPartition, bases: Vec<Subtransversal>) -> Result<Self, MmError> {
        if bases.is_empty() {
            return Err(MmError::NoBases);
        }
        let mut codes = Vec::with_capacity(bases.len());
        for b in &bases {
            if b.picks.len() != partition.num_classes() {
                return Err(MmError::NotSubtransversal(format!("{b:?}")));
            }
            codes.push(partition.encode(b));
        }
        codes.sort_unstable();
        for w in codes.windows(2) {
            if w[0] == w[1] {
                return Err(MmError::DuplicateBasis(partition.code_labels(w[0]).join(",")));
            }
        }
        let q = Self::from_basis_codes(partition, codes.clone());
        let report = verify_axioms(&q.partition, &q.rank)?;
        if !report.passed() {
            return Err(MmError::Axioms(report.witnesses[0].to_string()));
        }
        if q.bases != codes {
            return Err(MmError::BasesMismatch);
        }
        Ok(q)
    }

    /// Builds from bases given as label lists.
    pub fn from_label_bases<S: AsRef<str>>(
        classes: Vec<Vec<String>>,
        bases: &[Vec<S>],
    ) -> Result<Self, MmError> {
        let partition = SkewPartition::new(classes)?;
        let bases = bases
            .iter()
            .map(|b| partition.subtransversal(b))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_bases(partition, bases)
    }

    /// Builds from an explicit rank table indexed by subtransversal code.
    pub fn from_rank_table(partition: SkewPartition, rank: Vec<u8>) -> Result<Self, MmError> {
        let report = verify_axioms(&partition, &rank)?;
        if !report.passed() {
            return Err(MmError::Axioms(report.witnesses[0].to_string()));
        }
        Ok(Self::from_table_unchecked(partition, rank))
    }

    /// Rank `max_B |A ∩ B|` without axiom verification.
    pub(crate) fn from_basis_codes(partition: SkewPartition, mut bases: Vec<usize>) -> Self {
        bases.sort_unstable();
        bases.dedup();
        let k = partition.num_classes();
        let basis_digits: Vec<Vec<usize>> = bases
            .iter()
            .map(|&b| (0..k).map(|c| partition.digit(b, c)).collect())
            .collect();
        let mut rank = vec![0u8; partition.table_len()];
        let mut digits = vec![0usize; k];
        for (code, slot) in rank.iter_mut().enumerate() {
            if code > 0 {
                // mixed-radix increment
                for c in 0..k {
                    digits[c] += 1;
                    if digits[c] <= partition.class_size(c) {
                        break;
                    }
                    digits[c] = 0;
                }
            }
            *slot = basis_digits
                .iter()
                .map(|bd| {
                    digits
                        .iter()
                        .zip(bd)
                        .filter(|(&a, &b)| a != 0 && a == b)
                        .count()
                })
                .max()
                .unwrap_or(0) as u8;
        }
        Self::from_table_unchecked(partition, rank)
    }

    pub(crate) fn from_table_unchecked(partition: SkewPartition, rank: Vec<u8>) -> Self {
        let bases = derive_bases(&partition, &rank);
        Self {
            partition,
            rank,
            bases,
        }
    }

    pub fn partition(&self) -> &SkewPartition {
        &self.partition
    }

    pub fn rank_table(&self) -> &[u8] {
        &self.rank
    }

    pub fn num_classes(&self) -> usize {
        self.partition.num_classes()
    }

    pub fn element(&self, label: &str) -> Result<Element, MmError> {
        self.partition.element(label)
    }

    pub fn subtransversal<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subtransversal, MmError> {
        self.partition.subtransversal(labels)
    }

    pub fn bases(&self) -> Vec<Subtransversal> {
        self.bases.iter().map(|&b| self.partition.decode(b)).collect()
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn basis_labels(&self) -> Vec<Vec<String>> {
        self.bases
            .iter()
            .map(|&b| self.partition.code_labels(b))
            .collect()
    }

    pub fn is_basis(&self, s: &Subtransversal) -> bool {
        self.bases.binary_search(&self.partition.encode(s)).is_ok()
    }

    pub fn rank(&self, a: &Subtransversal) -> Result<usize, MmError> {
        if a.picks.len() != self.num_classes()
            || a.elements().any(|e| e.index >= self.partition.class_size(e.class))
        {
            return Err(MmError::NotSubtransversal(format!("{a:?}")));
        }
        Ok(self.rank[self.partition.encode(a)] as usize)
    }

    pub fn rank_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize, MmError> {
        self.rank(&self.subtransversal(labels)?)
    }

    pub fn verify_axioms(&self) -> CheckReport {
        verify_axioms(&self.partition, &self.rank).expect("table length matches partition")
    }

    pub fn is_independent(&self, a: &Subtransversal) -> bool {
        let code = self.partition.encode(a);
        self.rank[code] as usize == a.len()
    }

    fn independent_code(&self, code: usize) -> bool {
        self.rank[code] as usize == self.partition.size(code)
    }

    /// All circuits, ordered by size and then by code.
    pub fn circuits(&self) -> Vec<Subtransversal> {
        let p = &self.partition;
        let mut out: Vec<(usize, usize)> = (0..p.table_len())
            .filter(|&c| !self.independent_code(c))
            .filter(|&c| {
                (0..p.num_classes())
                    .filter(|&k| p.digit(c, k) != 0)
                    .all(|k| self.independent_code(c - p.digit(c, k) * p.strides[k]))
            })
            .map(|c| (p.size(c), c))
            .collect();
        out.sort_unstable();
        out.into_iter().map(|(_, c)| p.decode(c)).collect()
    }

    pub fn is_circuit(&self, a: &Subtransversal) -> bool {
        let p = &self.partition;
        let c = p.encode(a);
        !self.independent_code(c)
            && a
                .elements()
                .all(|e| self.independent_code(c - p.elem_code(e)))
    }

    /// `Q|A`: drops the classes meeting `A`, with rank `r'(X) = r(X ∪ A) − r(A)`.
    pub fn minor(&self, a: &Subtransversal) -> Result<Multimatroid, MmError> {
        self.rank(a)?;
        Ok(self.minor_code(self.partition.encode(a)))
    }

    pub fn minor_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Multimatroid, MmError> {
        self.minor(&self.subtransversal(labels)?)
    }

    pub(crate) fn minor_code(&self, a: usize) -> Multimatroid {
        let p = &self.partition;
        let keep: Vec<usize> = (0..p.num_classes()).filter(|&c| p.digit(a, c) == 0).collect();
        let part = SkewPartition::from_trusted(keep.iter().map(|&c| p.classes[c].clone()).collect());
        let ra = self.rank[a];
        let mut table = vec![0u8; part.table_len()];
        let mut digits = vec![0usize; keep.len()];
        let mut parent = a;
        for (code, slot) in table.iter_mut().enumerate() {
            if code > 0 {
                for (i, &c) in keep.iter().enumerate() {
                    digits[i] += 1;
                    parent += p.strides[c];
                    if digits[i] <= p.class_size(c) {
                        break;
                    }
                    parent -= digits[i] * p.strides[c];
                    digits[i] = 0;
                }
            }
            *slot = self.rank[parent] - ra;
        }
        Self::from_table_unchecked(part, table)
    }

    pub fn singular_elements(&self) -> Vec<Element> {
        let p = &self.partition;
        (0..p.num_classes())
            .flat_map(|c| (0..p.class_size(c)).map(move |j| Element::new(c, j)))
            .filter(|&e| self.rank[p.elem_code(e)] == 0)
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.partition.classes.iter().all(|c| c.len() >= 2)
    }

    /// Non-degenerate and every near-transversal `A` avoiding `ω` has
    /// `Σ_{x∈ω} (r(A∪x) − r(A)) = |ω| − 1`.
    pub fn is_tight(&self) -> bool {
        if !self.is_nondegenerate() {
            return false;
        }
        let p = &self.partition;
        let all = p.all_classes();
        (0..p.num_classes()).all(|w| {
            p.transversals_of(all & !(1 << w)).into_iter().all(|a| {
                let ra = self.rank[a] as usize;
                let sum: usize = (0..p.class_size(w))
                    .map(|j| self.rank[a + p.elem_code(Element::new(w, j))] as usize - ra)
                    .sum();
                sum == p.class_size(w) - 1
            })
        })
    }

    /// `X` (a set of classes) is a separator when `r(A) = r(A∩X) + r(A−X)` for every `A`.
    pub fn is_separator(&self, x: u32) -> bool {
        let p = &self.partition;
        let rest = p.all_classes() & !x;
        (0..p.table_len()).all(|a| {
            self.rank[a] == self.rank[p.restrict(a, x)] + self.rank[p.restrict(a, rest)]
        })
    }

    /// Every separator as a class mask, in increasing order.
    pub fn separators(&self) -> Vec<u32> {
        crate::bits::submasks(self.partition.all_classes())
            .filter(|&x| self.is_separator(x))
            .collect()
    }

    /// Separators as label sets (unions of skew classes).
    pub fn separator_labels(&self) -> Vec<Vec<String>> {
        self.separators()
            .into_iter()
            .map(|x| self.partition.class_labels(x))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let k = self.num_classes();
        if k <= 1 {
            return true;
        }
        let all = self.partition.all_classes();
        crate::bits::submasks(all >> 1)
            .map(|x| (x << 1) | 1)
            .filter(|&x| x != all)
            .all(|x| !self.is_separator(x))
    }

    fn basis_code(&self, b: &Subtransversal) -> Result<usize, MmError> {
        let code = self.partition.encode(b);
        if self.bases.binary_search(&code).is_err() {
            return Err(MmError::NotABasis(self.partition.labels_of(b).join(",")));
        }
        Ok(code)
    }

    /// Circuits contained in `(B − ω) ∪ x` for each `x ∈ ω − B`.
    fn fundamental_circuit_codes(&self, b: usize, w: usize) -> Vec<usize> {
        let p = &self.partition;
        let base = b - p.digit(b, w) * p.strides[w];
        let mut out = Vec::new();
        for j in 0..p.class_size(w) {
            if p.digit(b, w) == j + 1 {
                continue;
            }
            let t = base + p.elem_code(Element::new(w, j));
            let size = p.size(t);
            if self.rank[t] as usize == size {
                continue;
            }
            // the unique circuit of t consists of the elements whose removal restores independence
            let circuit: usize = (0..p.num_classes())
                .filter(|&c| p.digit(t, c) != 0)
                .map(|c| p.digit(t, c) * p.strides[c])
                .filter(|&ec| self.rank[t - ec] as usize == size - 1)
                .sum();
            out.push(circuit);
        }
        out
    }

    /// The fundamental circuit `C(B, ω)`.
    pub fn fundamental_circuit(&self, b: &Subtransversal, class: usize) -> Result<FundamentalCircuit, MmError> {
        let code = self.basis_code(b)?;
        let found = self.fundamental_circuit_codes(code, class);
        match found.len() {
            0 => Err(MmError::NoFundamentalCircuit),
            1 => Ok(FundamentalCircuit {
                circuit: self.partition.decode(found[0]),
                unique: true,
            }),
            _ if self.is_tight() => Err(MmError::TightnessViolation(format!(
                "{} circuits in B ∪ ω",
                found.len()
            ))),
            _ => Ok(FundamentalCircuit {
                circuit: self.partition.decode(found[0]),
                unique: false,
            }),
        }
    }

    /// The fundamental graph of a basis of a tight multimatroid; vertex `i` is
    /// the element of `B` in class `i`.
    pub fn fundamental_graph(&self, b: &Subtransversal) -> Result<FundamentalGraph, MmError> {
        if !self.is_tight() {
            return Err(MmError::NotTight);
        }
        let code = self.basis_code(b)?;
        let p = &self.partition;
        let k = p.num_classes();
        let mut circuit_of = Vec::with_capacity(k);
        for w in 0..k {
            let found = self.fundamental_circuit_codes(code, w);
            if found.len() != 1 {
                return Err(MmError::TightnessViolation(format!(
                    "{} circuits in B ∪ {{{}}}",
                    found.len(),
                    p.classes[w].join(",")
                )));
            }
            circuit_of.push(found[0]);
        }
        let mut adjacency = vec![0u32; k];
        for f in 0..k {
            for e in 0..k {
                if e != f && p.digit(circuit_of[f], e) != 0 {
                    adjacency[e] |= 1 << f;
                }
            }
        }
        // e ~ f is recorded in adjacency[e] bit f; symmetry means adjacency[f] bit e too
        for e in 0..k {
            for f in crate::bits::ones(adjacency[e]) {
                if adjacency[f] & (1 << e) == 0 {
                    return Err(MmError::TightnessViolation(format!(
                        "fundamental relation not symmetric at {}, {}",
                        p.label(Element::new(e, p.digit(code, e) - 1)),
                        p.label(Element::new(f, p.digit(code, f) - 1))
                    )));
                }
            }
        }
        Ok(FundamentalGraph {
            basis: p.decode(code),
            labels: (0..k)
                .map(|c| p.classes[c][p.digit(code, c) - 1].clone())
                .collect(),
            adjacency,
        })
    }

    /// An independent set `I` containing `e` with `Q|A = Q|I`, following the
    /// inductive construction on `|A|`.
    pub fn scum_lift(&self, a: &Subtransversal, e: Element) -> Result<Subtransversal, MmError> {
        if !self.is_nondegenerate() {
            return Err(MmError::Degenerate);
        }
        self.rank(a)?;
        if !a.contains(e) {
            return Err(MmError::Precondition("e is not in A".into()));
        }
        let p = &self.partition;
        if self.rank[p.elem_code(e)] != 1 {
            return Err(MmError::Precondition("r(e) must be 1".into()));
        }
        let a_code = p.encode(a);
        let i_code = self.lift(0, a_code, e);
        let lifted = p.decode(i_code);
        if !self.independent_code(i_code)
            || !lifted.contains(e)
            || self.minor_code(a_code) != self.minor_code(i_code)
        {
            return Err(MmError::Precondition(format!(
                "lift {{{}}} fails its postcondition",
                p.code_labels(i_code).join(",")
            )));
        }
        Ok(lifted)
    }

    /// Works in the minor `Q|ctx`; `a` avoids the classes of `ctx`.
    fn lift(&self, ctx: usize, a: usize, e: Element) -> usize {
        let p = &self.partition;
        let r = |s: usize| self.rank[s + ctx] as i32 - self.rank[ctx] as i32;
        let ec = p.elem_code(e);
        if p.size(a) == 1 {
            return a;
        }
        let x_class = (0..p.num_classes())
            .find(|&c| c != e.class && p.digit(a, c) != 0)
            .expect("A has an element other than e");
        let mut x = Element::new(x_class, p.digit(a, x_class) - 1);
        let rest = a - p.elem_code(x);
        if r(ec + p.elem_code(x)) == r(p.elem_code(x)) {
            // e would be singular in Q|x; x is singular in Q|e, so any other y
            // in x's class gives the same minor Q|{e,y} = Q|{e,x}
            x = (0..p.class_size(x_class))
                .map(|j| Element::new(x_class, j))
                .find(|&y| y != x && r(ec + p.elem_code(y)) == r(p.elem_code(y)) + 1)
                .expect("axiom (4) supplies a replacement");
        }
        let xc = p.elem_code(x);
        let inner = self.lift(ctx + xc, rest, e);
        if r(inner + xc) as usize == p.size(inner) + 1 {
            return inner + xc;
        }
        // x is singular: swap for the first other element of its class
        let y = (0..p.class_size(x_class))
            .map(|j| Element::new(x_class, j))
            .find(|&y| y != x)
            .expect("non-degenerate");
        inner + p.elem_code(y)
    }

    /// A circuit `C` with `e ∈ C ⊆ X ∪ e`, where `X` (a class mask over this
    /// multimatroid's classes) is a proper separator of `Q|e`.
    pub fn circuit_in_separator(&self, e: Element, x: u32) -> Result<Subtransversal, MmError> {
        let p = &self.partition;
        let ew = 1u32 << e.class;
        let others = p.all_classes() & !ew;
        if !self.is_tight() {
            return Err(MmError::Precondition("Q is not tight".into()));
        }
        if !self.is_connected() {
            return Err(MmError::Precondition("Q is not connected".into()));
        }
        if x & ew != 0 || x & !p.all_classes() != 0 {
            return Err(MmError::Precondition("X must avoid the class of e".into()));
        }
        if x == 0 || x == others {
            return Err(MmError::Precondition("X is not a proper separator".into()));
        }
        let ec = p.elem_code(e);
        let minor_sep = (0..p.table_len())
            .filter(|&a| p.digit(a, e.class) == 0)
            .all(|a| {
                let r = |s: usize| self.rank[s + ec] as i32;
                r(a) == r(p.restrict(a, x)) + r(p.restrict(a, others & !x)) - r(0)
            });
        if !minor_sep {
            return Err(MmError::Precondition("X is not a separator of Q|e".into()));
        }
        let b = *self
            .bases
            .iter()
            .find(|&&b| p.digit(b, e.class) == e.index + 1)
            .ok_or_else(|| MmError::Precondition("e lies in no basis".into()))?;
        let graph = self.fundamental_graph(&p.decode(b))?;
        let f = crate::bits::ones(graph.adjacency[e.class] & x)
            .next()
            .ok_or_else(|| MmError::Precondition("no element of X adjacent to e".into()))?;
        let c = self.fundamental_circuit_codes(b, f)[0];
        let allowed = x | ew;
        if p.digit(c, e.class) != e.index + 1 || p.present(c) & !allowed != 0 {
            return Err(MmError::Precondition(format!(
                "circuit {{{}}} not inside X ∪ e",
                p.code_labels(c).join(",")
            )));
        }
        Ok(p.decode(c))
    }

    pub fn direct_sum(&self, other: &Multimatroid) -> Result<Multimatroid, MmError> {
        for class in other.partition.classes() {
            for l in class {
                if self.partition.find(l).is_some() {
                    return Err(MmError::LabelCollision(l.clone()));
                }
            }
        }
        let mut classes = self.partition.classes.clone();
        classes.extend(other.partition.classes.iter().cloned());
        let part = SkewPartition::new(classes)?;
        let n1 = self.partition.table_len();
        let mut rank = vec![0u8; part.table_len()];
        for (c2, &r2) in other.rank.iter().enumerate() {
            for (c1, &r1) in self.rank.iter().enumerate() {
                rank[c1 + c2 * n1] = r1 + r2;
            }
        }
        Ok(Self::from_table_unchecked(part, rank))
    }

    /// Labelled equality: same skew classes and same bases, as label sets.
    pub fn eq_labeled(&self, other: &Multimatroid) -> bool {
        if self.partition.classes == other.partition.classes {
            return self.rank == other.rank;
        }
        if self.num_classes() != other.num_classes() || self.bases.len() != other.bases.len() {
            return false;
        }
        let Some(map) = self.class_map_into(other) else {
            return false;
        };
        if map.iter().any(|m| m.is_none()) {
            return false;
        }
        let map: Vec<(usize, Vec<usize>)> = map.into_iter().map(Option::unwrap).collect();
        let mut mapped: Vec<usize> = self
            .bases
            .iter()
            .map(|&b| self.map_code(b, &map, &other.partition))
            .collect();
        mapped.sort_unstable();
        mapped == other.bases
    }

    /// For each class of `self`, the class of `other` with the same label set
    /// and the element permutation; `None` if `self` has a label outside `other`.
    fn class_map_into(&self, other: &Multimatroid) -> Option<Vec<Option<(usize, Vec<usize>)>>> {
        self.partition
            .classes
            .iter()
            .map(|class| {
                let target = other.partition.find(&class[0])?.class;
                let oc = &other.partition.classes[target];
                if oc.len() != class.len() {
                    return None;
                }
                let perm = class
                    .iter()
                    .map(|l| oc.iter().position(|m| m == l))
                    .collect::<Option<Vec<usize>>>()?;
                Some(Some((target, perm)))
            })
            .collect()
    }

    fn map_code(&self, code: usize, map: &[(usize, Vec<usize>)], target: &SkewPartition) -> usize {
        (0..self.num_classes())
            .filter_map(|c| {
                let d = self.partition.digit(code, c);
                (d != 0).then(|| {
                    let (tc, perm) = &map[c];
                    (perm[d - 1] + 1) * target.strides[*tc]
                })
            })
            .sum()
    }

    /// Searches for a subtransversal `S` meeting exactly the classes missing
    /// from `other` with `Q|S = other` (labelled equality).
    pub fn has_minor(&self, other: &Multimatroid) -> Result<Option<Subtransversal>, MmError> {
        let mut used = 0u32;
        for class in &other.partition.classes {
            let e = self
                .partition
                .find(&class[0])
                .ok_or_else(|| MmError::ClassMismatch(class.join(",")))?;
            let mine = &self.partition.classes[e.class];
            let same: BTreeSet<&String> = mine.iter().collect();
            if same != class.iter().collect() {
                return Err(MmError::ClassMismatch(class.join(",")));
            }
            used |= 1 << e.class;
        }
        let missing = self.partition.all_classes() & !used;
        for s in self.partition.transversals_of(missing) {
            if self.minor_code(s) == *other {
                return Ok(Some(self.partition.decode(s)));
            }
        }
        Ok(None)
    }

    /// Brute-force isomorphism: a bijection of classes and of elements within
    /// classes carrying bases onto bases.
    pub fn is_isomorphic(&self, other: &Multimatroid) -> bool {
        let k = self.num_classes();
        if k != other.num_classes() || self.bases.len() != other.bases.len() {
            return false;
        }
        let mut s1: Vec<usize> = self.partition.classes.iter().map(Vec::len).collect();
        let mut s2: Vec<usize> = other.partition.classes.iter().map(Vec::len).collect();
        s1.sort_unstable();
        s2.sort_unstable();
        if s1 != s2 {
            return false;
        }
        let targets: HashSet<usize> = other.bases.iter().copied().collect();
        for class_perm in permutations(k) {
            if (0..k).any(|c| self.partition.class_size(c) != other.partition.class_size(class_perm[c])) {
                continue;
            }
            let elem_perms: Vec<Vec<Vec<usize>>> = (0..k)
                .map(|c| permutations(self.partition.class_size(c)))
                .collect();
            let mut choice = vec![0usize; k];
            loop {
                let map: Vec<(usize, Vec<usize>)> = (0..k)
                    .map(|c| (class_perm[c], elem_perms[c][choice[c]].clone()))
                    .collect();
                if self
                    .bases
                    .iter()
                    .all(|&b| targets.contains(&self.map_code(b, &map, &other.partition)))
                {
                    return true;
                }
                // odometer over within-class permutations
                let mut c = 0;
                while c < k {
                    choice[c] += 1;
                    if choice[c] < elem_perms[c].len() {
                        break;
                    }
                    choice[c] = 0;
                    c += 1;
                }
                if c == k {
                    break;
                }
            }
        }
        false
    }
}

fn derive_bases(p: &SkewPartition, rank: &[u8]) -> Vec<usize> {
    (0..p.table_len())
        .filter(|&a| {
            rank[a] as usize == p.size(a)
                && (0..p.num_classes())
                    .filter(|&c| p.digit(a, c) == 0)
                    .all(|c| {
                        (0..p.class_size(c))
                            .all(|j| rank[a + p.elem_code(Element::new(c, j))] == rank[a])
                    })
        })
        .collect()
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Result of [`Multimatroid::fundamental_circuit`]; `unique` is false only for
/// non-tight input where `B ∪ ω` holds several circuits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalCircuit {
    pub circuit: Subtransversal,
    pub unique: bool,
}

/// The graph of `~_B` on the elements of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalGraph {
    basis: Subtransversal,
    labels: Vec<String>,
    adjacency: Vec<u32>,
}

impl FundamentalGraph {
    pub fn basis(&self) -> &Subtransversal {
        &self.basis
    }

    /// Vertex labels, indexed by skew class.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, e: usize, f: usize) -> bool {
        self.adjacency[e] & (1 << f) != 0
    }

    pub fn neighbours(&self, v: usize) -> u32 {
        self.adjacency[v]
    }

    /// Edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.labels.len())
            .flat_map(|i| crate::bits::ones(self.adjacency[i]).filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    /// Edges as sorted label pairs, for comparison across re-indexed minors.
    pub fn edge_labels(&self) -> BTreeSet<(String, String)> {
        self.edges()
            .into_iter()
            .map(|(i, j)| {
                let (a, b) = (self.labels[i].clone(), self.labels[j].clone());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect()
    }

    /// Connected components as vertex masks, ordered by lowest vertex.
    pub fn components(&self) -> Vec<u32> {
        let n = self.labels.len();
        let mut seen = 0u32;
        let mut out = Vec::new();
        for v in 0..n {
            if seen & (1 << v) != 0 {
                continue;
            }
            let mut comp = 1u32 << v;
            let mut frontier = comp;
            while frontier != 0 {
                let next = crate::bits::ones(frontier).fold(0, |m, u| m | self.adjacency[u]) & !comp;
                comp |= next;
                frontier = next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The graph with vertex `v` and its incident edges removed (remaining
    /// vertices keep their labels).
    pub fn remove_vertex(&self, v: usize) -> FundamentalGraph {
        let keep: Vec<usize> = (0..self.labels.len()).filter(|&u| u != v).collect();
        let adjacency = keep
            .iter()
            .map(|&u| {
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.has_edge(u, w))
                    .fold(0u32, |m, (i, _)| m | (1 << i))
            })
            .collect();
        FundamentalGraph {
            basis: self.basis.clone().without_class(v),
            labels: keep.iter().map(|&u| self.labels[u].clone()).collect(),
            adjacency,
        }
    }
}
