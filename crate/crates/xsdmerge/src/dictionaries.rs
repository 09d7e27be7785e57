//! Merge and Rename Dictionaries.
//!
//! The Merge Dictionary is the one-to-one filtering of raw synonymies that
//! drives integration: complex elements are paired by a maximum-weight
//! matching over the similarity graph SimG(u); attributes and simple
//! elements are paired by name/thesaurus rules and reduced to one-to-one by
//! a maximum-cardinality matching. The Rename Dictionary collects same-named
//! pairs left over, which integration must disambiguate.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datatype::compatible;
use crate::graph::XsGraph;
use crate::interscheme::{self, InterschemeError};
use crate::matching::{canonical_maximum_cardinality, canonical_maximum_weight};
use crate::model::{SchemaModel, Typology, XComponent};
use crate::thesaurus::Thesaurus;

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error(transparent)]
    Interscheme(#[from] InterschemeError),
}

/// Weighted arc of the similarity graph: a synonymous complex pair and its
/// phi value at the chosen severity level.
#[derive(Debug, Clone, PartialEq)]
pub struct SimArc {
    pub left: XComponent,
    pub right: XComponent,
    pub weight: BigRational,
}

/// Support bipartite graph over the complex elements of the two schemas.
#[derive(Debug, Clone, PartialEq)]
pub struct SimGraph {
    pub left: Vec<XComponent>,
    pub right: Vec<XComponent>,
    pub arcs: Vec<SimArc>,
}

/// Builds SimG(u): an arc per synonymous complex pair, weighted by phi at
/// level u.
pub fn build_simg(
    s1: &SchemaModel,
    s2: &SchemaModel,
    u: u32,
    g1: &XsGraph,
    g2: &XsGraph,
    thesaurus: &Thesaurus,
) -> Result<SimGraph, DictionaryError> {
    let props = interscheme::extract_properties(s1, s2, u, g1, g2, thesaurus)?;
    let left: Vec<XComponent> = s1.complex_elements().cloned().collect();
    let right: Vec<XComponent> = s2.complex_elements().cloned().collect();
    let arcs = props
        .synonymies
        .into_iter()
        .filter(|s| s.left.typology == Typology::ComplexElement)
        .map(|s| SimArc {
            weight: s
                .phi_profile
                .last()
                .cloned()
                .expect("profile holds at least level 0"),
            left: s.left,
            right: s.right,
        })
        .collect();
    Ok(SimGraph { left, right, arcs })
}

/// Maximum-weight matching on a similarity graph, ties broken toward
/// lexicographically smaller (left, right) name pairs.
pub fn max_weight_matching(graph: &SimGraph) -> Vec<(XComponent, XComponent)> {
    let index_of = |side: &[XComponent], c: &XComponent| {
        side.iter()
            .position(|x| x.name == c.name)
            .expect("arc endpoints are graph nodes")
    };
    let mut order: Vec<usize> = (0..graph.arcs.len()).collect();
    order.sort_by_key(|&k| {
        let a = &graph.arcs[k];
        (
            a.left.lower_name(),
            a.right.lower_name(),
            a.left.name.clone(),
            a.right.name.clone(),
        )
    });
    let weighted: Vec<(usize, usize, BigRational)> = order
        .iter()
        .map(|&k| {
            let a = &graph.arcs[k];
            (
                index_of(&graph.left, &a.left),
                index_of(&graph.right, &a.right),
                a.weight.clone(),
            )
        })
        .collect();
    canonical_maximum_weight(graph.left.len(), graph.right.len(), &weighted)
        .into_iter()
        .map(|k| {
            let a = &graph.arcs[order[k]];
            (a.left.clone(), a.right.clone())
        })
        .collect()
}

/// One merge pair. `left` always comes from the first schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergePair {
    pub left: XComponent,
    pub right: XComponent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeDictionary {
    pub severity: u32,
    pub pairs: Vec<MergePair>,
}

impl MergeDictionary {
    pub fn contains(&self, left: &XComponent, right: &XComponent) -> bool {
        self.pairs.iter().any(|p| {
            p.left.name == left.name
                && p.left.typology == left.typology
                && p.right.name == right.name
                && p.right.typology == right.typology
        })
    }

    pub fn complex_pairs(&self) -> impl Iterator<Item = &MergePair> {
        self.pairs
            .iter()
            .filter(|p| p.left.typology == Typology::ComplexElement)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RenameDictionary {
    pub pairs: Vec<MergePair>,
}

fn sort_pairs(pairs: &mut [MergePair]) {
    pairs.sort_by_key(|p| {
        (
            p.left.typology,
            p.left.lower_name(),
            p.right.lower_name(),
            p.left.name.clone(),
            p.right.name.clone(),
        )
    });
}

/// Builds MD(u).
///
/// Complex pairs come from the maximum-weight matching on SimG(u). An
/// attribute / simple-element pair qualifies when its data types are
/// compatible and either (i) the names are thesaurus synonyms and the two
/// components hang off a matched complex pair, or (ii) the names and
/// typologies are equal. Multiple candidates per component are reduced to a
/// one-to-one map by a maximum-cardinality matching.
pub fn build_md(
    s1: &SchemaModel,
    s2: &SchemaModel,
    u: u32,
    g1: &XsGraph,
    g2: &XsGraph,
    thesaurus: &Thesaurus,
) -> Result<MergeDictionary, DictionaryError> {
    let simg = build_simg(s1, s2, u, g1, g2, thesaurus)?;
    let complex_pairs = max_weight_matching(&simg);

    type Member = (String, Typology);
    let members = |s: &SchemaModel, parent: &str| -> Vec<Member> {
        let mut out: Vec<Member> = s
            .attribute_uses(parent)
            .iter()
            .map(|a| (a.target.clone(), Typology::Attribute))
            .collect();
        out.extend(s.child_refs(parent).iter().filter_map(|r| {
            s.element(&r.target)
                .filter(|e| e.typology == Typology::SimpleElement)
                .map(|e| (e.name.clone(), Typology::SimpleElement))
        }));
        out
    };
    let matched_members: Vec<(Vec<Member>, Vec<Member>)> = complex_pairs
        .iter()
        .map(|(e1, e2)| (members(s1, &e1.name), members(s2, &e2.name)))
        .collect();

    let left_nodes: Vec<&XComponent> = s1.attributes_and_simple_elements().collect();
    let right_nodes: Vec<&XComponent> = s2.attributes_and_simple_elements().collect();
    let mut candidate_arcs: Vec<(usize, usize)> = Vec::new();
    for (i, x1) in left_nodes.iter().enumerate() {
        for (j, x2) in right_nodes.iter().enumerate() {
            let (t1, t2) = (
                x1.data_type.as_deref().unwrap_or_default(),
                x2.data_type.as_deref().unwrap_or_default(),
            );
            if !compatible(t1, t2) {
                continue;
            }
            let same_name_same_typology =
                x1.lower_name() == x2.lower_name() && x1.typology == x2.typology;
            let thesaurus_under_matched_parents = thesaurus
                .lexical_synonym(&x1.name, &x2.name)
                && matched_members.iter().any(|(m1, m2)| {
                    m1.contains(&(x1.name.clone(), x1.typology))
                        && m2.contains(&(x2.name.clone(), x2.typology))
                });
            if same_name_same_typology || thesaurus_under_matched_parents {
                candidate_arcs.push((i, j));
            }
        }
    }
    candidate_arcs.sort_by_key(|&(i, j)| {
        (
            left_nodes[i].lower_name(),
            right_nodes[j].lower_name(),
            left_nodes[i].name.clone(),
            right_nodes[j].name.clone(),
            left_nodes[i].typology,
            right_nodes[j].typology,
        )
    });
    let kept = canonical_maximum_cardinality(left_nodes.len(), right_nodes.len(), &candidate_arcs);

    let mut pairs: Vec<MergePair> = complex_pairs
        .into_iter()
        .map(|(left, right)| MergePair { left, right })
        .collect();
    pairs.extend(kept.into_iter().map(|k| {
        let (i, j) = candidate_arcs[k];
        MergePair {
            left: left_nodes[i].clone(),
            right: right_nodes[j].clone(),
        }
    }));
    sort_pairs(&mut pairs);
    Ok(MergeDictionary { severity: u, pairs })
}

/// Builds RD(u): every same-named element/element or attribute/attribute
/// cross-schema pair that did not make it into MD(u).
pub fn build_rd(s1: &SchemaModel, s2: &SchemaModel, md: &MergeDictionary) -> RenameDictionary {
    let mut pairs = Vec::new();
    for x1 in s1.xcomponents() {
        for x2 in s2.xcomponents() {
            if x1.lower_name() != x2.lower_name() {
                continue;
            }
            let same_space = (x1.typology.is_element() && x2.typology.is_element())
                || (x1.typology == Typology::Attribute && x2.typology == Typology::Attribute);
            if same_space && !md.contains(x1, x2) {
                pairs.push(MergePair {
                    left: x1.clone(),
                    right: x2.clone(),
                });
            }
        }
    }
    sort_pairs(&mut pairs);
    RenameDictionary { pairs }
}

/// Wire form of the two dictionaries, written when `match --dictionaries`
/// is requested.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DictPairDoc {
    pub left: String,
    pub right: String,
    pub kind: String,
    pub left_parents: Vec<String>,
    pub right_parents: Vec<String>,
}

fn parents_doc(s: &SchemaModel, x: &XComponent) -> Vec<String> {
    let parents = match x.typology {
        Typology::Attribute => s.parents_of_attribute(&x.name),
        _ => s.parents_of_element(&x.name),
    };
    parents.into_iter().map(|p| p.name.clone()).collect()
}

fn kind_str(left: &XComponent, right: &XComponent) -> String {
    if left.typology == right.typology {
        match left.typology {
            Typology::ComplexElement => "complex".into(),
            Typology::SimpleElement => "simple-element".into(),
            Typology::Attribute => "attribute".into(),
        }
    } else {
        "mixed".into()
    }
}

pub fn dictionary_docs(
    s1: &SchemaModel,
    s2: &SchemaModel,
    md: &MergeDictionary,
    rd: &RenameDictionary,
) -> (Vec<DictPairDoc>, Vec<DictPairDoc>) {
    let to_doc = |p: &MergePair| DictPairDoc {
        left: p.left.name.clone(),
        right: p.right.name.clone(),
        kind: kind_str(&p.left, &p.right),
        left_parents: parents_doc(s1, &p.left),
        right_parents: parents_doc(s2, &p.right),
    };
    (
        md.pairs.iter().map(to_doc).collect(),
        rd.pairs.iter().map(to_doc).collect(),
    )
}
