//! JSON documents for delta-matroids, multimatroids and ribbon graphs.
//!
//! Output is canonical: labels inside a set are sorted, sets are sorted
//! lexicographically, and object keys come out sorted because `serde_json`
//! maps are ordered.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bits::Mask;
use crate::delta::{DeltaError, DeltaMatroid, SetSystem};
use crate::mm::{MmError, Multimatroid, SkewPartition, Subtransversal};
use crate::ribbon::{RibbonDoc, RibbonError, RibbonGraph};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("delta-matroid label `{0}` contains a prime, which is reserved for derived copies")]
    PrimedLabel(String),
    #[error("label `{label}` repeated inside feasible set {set}")]
    RepeatedInSet { label: String, set: usize },
    #[error("document is not a delta-matroid, multimatroid or ribbon graph")]
    UnknownKind,
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error(transparent)]
    Mm(#[from] MmError),
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaDoc {
    pub elements: Vec<String>,
    pub feasible: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MmDoc {
    pub classes: Vec<Vec<String>>,
    pub bases: Vec<Vec<String>>,
}

/// A parsed document of any of the three kinds.
#[derive(Debug, Clone)]
pub enum Document {
    Delta(DeltaDoc),
    Multimatroid(MmDoc),
    Ribbon(RibbonDoc),
}

/// Detects the kind from the top-level keys.
pub fn parse_document(text: &str) -> Result<Document, IoError> {
    let v: Value = serde_json::from_str(text)?;
    let has = |k: &str| v.get(k).is_some();
    if has("elements") {
        Ok(Document::Delta(serde_json::from_value(v)?))
    } else if has("classes") {
        Ok(Document::Multimatroid(serde_json::from_value(v)?))
    } else if has("vertices") {
        Ok(Document::Ribbon(serde_json::from_value(v)?))
    } else {
        Err(IoError::UnknownKind)
    }
}

impl DeltaDoc {
    /// The set system, before the exchange axiom is checked.
    pub fn to_set_system(&self) -> Result<SetSystem, IoError> {
        if let Some(l) = self.elements.iter().find(|l| l.contains('\'')) {
            return Err(IoError::PrimedLabel(l.clone()));
        }
        let index = |l: &str| {
            self.elements
                .iter()
                .position(|e| e == l)
                .ok_or_else(|| DeltaError::UnknownElement(l.to_string()))
        };
        let mut feasible = Vec::with_capacity(self.feasible.len());
        for (i, set) in self.feasible.iter().enumerate() {
            let mut mask: Mask = 0;
            for l in set {
                let bit = 1 << index(l)?;
                if mask & bit != 0 {
                    return Err(IoError::RepeatedInSet {
                        label: l.clone(),
                        set: i,
                    });
                }
                mask |= bit;
            }
            feasible.push(mask);
        }
        Ok(SetSystem::new(self.elements.clone(), feasible)?)
    }

    pub fn to_delta_matroid(&self) -> Result<DeltaMatroid, IoError> {
        Ok(self.to_set_system()?.into_delta_matroid()?)
    }

    pub fn from_set_system(s: &SetSystem) -> Self {
        let mut feasible: Vec<Vec<String>> = s
            .feasible()
            .iter()
            .map(|&f| sorted(s.labels_of(f).into_iter().map(String::from).collect()))
            .collect();
        feasible.sort();
        Self {
            elements: s.elements().to_vec(),
            feasible,
        }
    }

    pub fn from_delta_matroid(d: &DeltaMatroid) -> Self {
        Self::from_set_system(d.as_set_system())
    }
}

impl MmDoc {
    /// The partition and basis list, before the axioms are checked.
    pub fn to_parts(&self) -> Result<(SkewPartition, Vec<Subtransversal>), IoError> {
        let partition = SkewPartition::new(self.classes.clone())?;
        let bases = self
            .bases
            .iter()
            .map(|b| partition.subtransversal(b))
            .collect::<Result<Vec<_>, _>>()?;
        let mut seen = HashSet::new();
        for b in &bases {
            if !seen.insert(b.clone()) {
                return Err(MmError::DuplicateBasis(partition.labels_of(b).join(",")).into());
            }
        }
        Ok((partition, bases))
    }

    pub fn to_multimatroid(&self) -> Result<Multimatroid, IoError> {
        let (partition, bases) = self.to_parts()?;
        Ok(Multimatroid::from_bases(partition, bases)?)
    }

    pub fn from_multimatroid(q: &Multimatroid) -> Self {
        let mut bases: Vec<Vec<String>> = q.basis_labels().into_iter().map(sorted).collect();
        bases.sort();
        Self {
            classes: q.partition().classes().to_vec(),
            bases,
        }
    }
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

pub fn delta_to_value(d: &DeltaMatroid) -> Value {
    serde_json::to_value(DeltaDoc::from_delta_matroid(d)).expect("serializable")
}

pub fn set_system_to_value(s: &SetSystem) -> Value {
    serde_json::to_value(DeltaDoc::from_set_system(s)).expect("serializable")
}

pub fn mm_to_value(q: &Multimatroid) -> Value {
    serde_json::to_value(MmDoc::from_multimatroid(q)).expect("serializable")
}

pub fn ribbon_to_value(g: &RibbonGraph) -> Value {
    serde_json::to_value(g.to_doc()).expect("serializable")
}

pub fn parse_delta(text: &str) -> Result<DeltaMatroid, IoError> {
    serde_json::from_str::<DeltaDoc>(text)?.to_delta_matroid()
}

pub fn parse_multimatroid(text: &str) -> Result<Multimatroid, IoError> {
    serde_json::from_str::<MmDoc>(text)?.to_multimatroid()
}

pub fn parse_ribbon(text: &str) -> Result<RibbonGraph, IoError> {
    Ok(RibbonGraph::from_doc(serde_json::from_str(text)?)?)
}

/// Label lists of the feasible sets, each sorted, in sorted order.
pub fn feasible_labels(d: &DeltaMatroid) -> Vec<Vec<String>> {
    DeltaDoc::from_delta_matroid(d).feasible
}

#[cfg(test)]
mod tests {
    use super::*;

    const D_EX: &str = r#"{"elements":["a","b","c","d"],"feasible":[[],["a"],["b"],["c"],["d"],["a","b"],["c","d"],["a","b","c"],["a","b","d"],["a","c","d"],["b","c","d"]]}"#;

    #[test]
    fn delta_roundtrip_is_canonical() {
        let d = parse_delta(D_EX).unwrap();
        let v = delta_to_value(&d);
        let again = parse_delta(&v.to_string()).unwrap();
        assert_eq!(again, d);
        assert_eq!(v["feasible"][0], serde_json::json!([]));
        assert_eq!(v["feasible"][1], serde_json::json!(["a"]));
    }

    #[test]
    fn delta_parse_errors() {
        let primed = r#"{"elements":["a'"],"feasible":[[]]}"#;
        assert!(matches!(parse_delta(primed), Err(IoError::PrimedLabel(_))));
        let dup = r#"{"elements":["a"],"feasible":[[],[]]}"#;
        assert!(matches!(parse_delta(dup), Err(IoError::Delta(DeltaError::DuplicateFeasible(_)))));
        let unknown = r#"{"elements":["a"],"feasible":[["z"]]}"#;
        assert!(matches!(parse_delta(unknown), Err(IoError::Delta(DeltaError::UnknownElement(_)))));
        let repeated = r#"{"elements":["a"],"feasible":[["a","a"]]}"#;
        assert!(matches!(parse_delta(repeated), Err(IoError::RepeatedInSet { .. })));
        assert!(matches!(parse_delta("{"), Err(IoError::Json(_))));
    }

    #[test]
    fn mm_roundtrip() {
        let text = r#"{"classes":[["e","e'"]],"bases":[["e"],["e'"]]}"#;
        let q = parse_multimatroid(text).unwrap();
        let back = parse_multimatroid(&mm_to_value(&q).to_string()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn document_kind_detection() {
        assert!(matches!(parse_document(D_EX).unwrap(), Document::Delta(_)));
        let mm = r#"{"classes":[["e","e'"]],"bases":[["e"]]}"#;
        assert!(matches!(parse_document(mm).unwrap(), Document::Multimatroid(_)));
        let rg = r#"{"vertices":[["h1","h2"]],"edges":{"a":{"halves":["h1","h2"],"twisted":true}}}"#;
        assert!(matches!(parse_document(rg).unwrap(), Document::Ribbon(_)));
        assert!(matches!(parse_document("{}"), Err(IoError::UnknownKind)));
    }
}
