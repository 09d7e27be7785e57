//! Severity-parametric synonymy and homonymy extraction.
//!
//! Two components are synonymous at severity u when, for every v <= u, the
//! bipartite graph spanned by their v-neighborhoods (arcs = lexical name
//! synonymies) admits a matching covering more than half of all nodes:
//! phi = 2|A'| / (|P| + |Q|) > 1/2. A homonymy is a same-named pair that
//! fails that test.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, XsGraph};
use crate::matching::maximum_cardinality;
use crate::model::{SchemaModel, XComponent};
use crate::thesaurus::Thesaurus;

#[derive(Debug, Error)]
pub enum InterschemeError {
    #[error("cannot compare empty neighborhoods")]
    EmptyNeighborhood,
    #[error("severity {requested} out of range; the maximum severity level for these schemas is {max}")]
    SeverityOutOfRange { requested: u32, max: u32 },
    #[error(transparent)]
    UnknownComponent(#[from] GraphError),
}

/// Similarity of two component sets: 2|A'| / (|P| + |Q|) for a maximum
/// matching A' over lexical name synonymies. Exact rational in [0, 1].
pub fn phi(
    left: &BTreeSet<&XComponent>,
    right: &BTreeSet<&XComponent>,
    thesaurus: &Thesaurus,
) -> Result<BigRational, InterschemeError> {
    if left.is_empty() || right.is_empty() {
        return Err(InterschemeError::EmptyNeighborhood);
    }
    let left: Vec<&XComponent> = left.iter().copied().collect();
    let right: Vec<&XComponent> = right.iter().copied().collect();
    let mut arcs = Vec::new();
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            if thesaurus.lexical_synonym(&l.name, &r.name) {
                arcs.push((i, j));
            }
        }
    }
    let matched = maximum_cardinality(left.len(), right.len(), &arcs);
    Ok(BigRational::new(
        (2 * matched).into(),
        (left.len() + right.len()).into(),
    ))
}

/// Renders a rational the way the similarity values are reported: two
/// decimal places.
pub fn display_phi(value: &BigRational) -> String {
    format!("{:.2}", value.to_f64().unwrap_or(0.0))
}

/// The largest severity level worth asking about: m - 1 where m is the
/// larger complex-element count of the two schemas (never below 0).
pub fn max_severity(s1: &SchemaModel, s2: &SchemaModel) -> u32 {
    let m = s1
        .complex_elements()
        .count()
        .max(s2.complex_elements().count());
    (m as u32).saturating_sub(1)
}

fn max_severity_of_graphs(g1: &XsGraph, g2: &XsGraph) -> u32 {
    let m = g1.complex_element_count().max(g2.complex_element_count());
    (m as u32).saturating_sub(1)
}

fn check_severity(u: u32, max: u32) -> Result<(), InterschemeError> {
    if u > max {
        Err(InterschemeError::SeverityOutOfRange { requested: u, max })
    } else {
        Ok(())
    }
}

/// The phi values for v = 0..=u, or None as soon as a level fails the
/// strict > 1/2 test.
pub(crate) fn phi_profile(
    x1: &XComponent,
    x2: &XComponent,
    u: u32,
    g1: &XsGraph,
    g2: &XsGraph,
    thesaurus: &Thesaurus,
) -> Result<Option<Vec<BigRational>>, InterschemeError> {
    let half = BigRational::new(1.into(), 2.into());
    let mut profile = Vec::with_capacity(u as usize + 1);
    for v in 0..=u {
        let left = g1.neighborhood(x1, v)?;
        let right = g2.neighborhood(x2, v)?;
        let value = phi(&left, &right, thesaurus)?;
        if value <= half {
            return Ok(None);
        }
        profile.push(value);
    }
    Ok(Some(profile))
}

/// True iff the neighborhoods of `x1` and `x2` are similar at every level
/// v <= u.
pub fn synonymous(
    x1: &XComponent,
    x2: &XComponent,
    u: u32,
    g1: &XsGraph,
    g2: &XsGraph,
    thesaurus: &Thesaurus,
) -> Result<bool, InterschemeError> {
    check_severity(u, max_severity_of_graphs(g1, g2))?;
    Ok(phi_profile(x1, x2, u, g1, g2, thesaurus)?.is_some())
}

/// True iff the names agree (case-insensitively) but the components are not
/// synonymous at severity `u`.
pub fn homonymous(
    x1: &XComponent,
    x2: &XComponent,
    u: u32,
    g1: &XsGraph,
    g2: &XsGraph,
    thesaurus: &Thesaurus,
) -> Result<bool, InterschemeError> {
    if x1.lower_name() != x2.lower_name() {
        check_severity(u, max_severity_of_graphs(g1, g2))?;
        return Ok(false);
    }
    Ok(!synonymous(x1, x2, u, g1, g2, thesaurus)?)
}

/// A synonymy with the phi values that established it (one per level).
#[derive(Debug, Clone, PartialEq)]
pub struct Synonymy {
    pub left: XComponent,
    pub right: XComponent,
    pub phi_profile: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homonymy {
    pub left: XComponent,
    pub right: XComponent,
}

/// All synonymies and homonymies between two schemas at one severity level.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertySet {
    pub severity: u32,
    pub synonymies: Vec<Synonymy>,
    pub homonymies: Vec<Homonymy>,
}

/// Extracts the full property set: every complex-element pair is compared
/// through neighborhoods; attributes and simple elements are paired when
/// their names are lexical synonyms (their neighborhoods are singletons, so
/// the comparison degenerates to the name test).
pub fn extract_properties(
    s1: &SchemaModel,
    s2: &SchemaModel,
    u: u32,
    g1: &XsGraph,
    g2: &XsGraph,
    thesaurus: &Thesaurus,
) -> Result<PropertySet, InterschemeError> {
    check_severity(u, max_severity(s1, s2))?;
    let mut synonymies = Vec::new();
    let mut homonymies = Vec::new();

    for e1 in s1.complex_elements() {
        for e2 in s2.complex_elements() {
            match phi_profile(e1, e2, u, g1, g2, thesaurus)? {
                Some(profile) => synonymies.push(Synonymy {
                    left: e1.clone(),
                    right: e2.clone(),
                    phi_profile: profile,
                }),
                None if e1.lower_name() == e2.lower_name() => homonymies.push(Homonymy {
                    left: e1.clone(),
                    right: e2.clone(),
                }),
                None => {}
            }
        }
    }

    for x1 in s1.attributes_and_simple_elements() {
        for x2 in s2.attributes_and_simple_elements() {
            if !thesaurus.lexical_synonym(&x1.name, &x2.name) {
                continue;
            }
            match phi_profile(x1, x2, u, g1, g2, thesaurus)? {
                Some(profile) => synonymies.push(Synonymy {
                    left: x1.clone(),
                    right: x2.clone(),
                    phi_profile: profile,
                }),
                None if x1.lower_name() == x2.lower_name() => homonymies.push(Homonymy {
                    left: x1.clone(),
                    right: x2.clone(),
                }),
                None => {}
            }
        }
    }

    let pair_key = |l: &XComponent, r: &XComponent| {
        (
            l.lower_name(),
            r.lower_name(),
            l.name.clone(),
            r.name.clone(),
            l.typology,
            r.typology,
        )
    };
    synonymies.sort_by_key(|s| pair_key(&s.left, &s.right));
    homonymies.sort_by_key(|h| pair_key(&h.left, &h.right));

    Ok(PropertySet {
        severity: u,
        synonymies,
        homonymies,
    })
}

/// Wire form of a property set, as written by the `match` command.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PropertySetDoc {
    pub severity: u32,
    pub synonymies: Vec<SynonymyDoc>,
    pub homonymies: Vec<PairDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SynonymyDoc {
    pub left: String,
    pub right: String,
    /// Exact rationals, one per severity level 0..=u, e.g. `"2/3"`.
    pub phi: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairDoc {
    pub left: String,
    pub right: String,
}

impl PropertySet {
    pub fn to_doc(&self) -> PropertySetDoc {
        PropertySetDoc {
            severity: self.severity,
            synonymies: self
                .synonymies
                .iter()
                .map(|s| SynonymyDoc {
                    left: s.left.name.clone(),
                    right: s.right.name.clone(),
                    phi: s.phi_profile.iter().map(|p| p.to_string()).collect(),
                })
                .collect(),
            homonymies: self
                .homonymies
                .iter()
                .map(|h| PairDoc {
                    left: h.left.name.clone(),
                    right: h.right.name.clone(),
                })
                .collect(),
        }
    }
}
