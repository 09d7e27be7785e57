//! Construction of the global schema.
//!
//! Starting from the concatenation of both component lists, every Merge
//! Dictionary pair is fused (one declaration, most general type, S1's name),
//! references to removed declarations are rewritten, Rename Dictionary pairs
//! are resolved by renaming the surviving second-schema side, and the two
//! roots are unified, either by their own merge pair or by a fresh synthetic
//! root.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datatype::{merge_type, IncompatibleTypes};
use crate::dictionaries::{MergeDictionary, MergePair, RenameDictionary};
use crate::model::{
    AttributeUse, ChildRef, ComplexContent, Compositor, ModelError, SchemaModel, Typology,
    XComponent,
};

#[derive(Debug, Error)]
pub enum IntegrateError {
    #[error(transparent)]
    IncompatibleTypes(#[from] IncompatibleTypes),
    #[error("pair ({left}, {right}) is not in the merge dictionary")]
    NotMerged { left: String, right: String },
    #[error("inconsistent dictionary: {0}")]
    InconsistentDictionary(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone)]
pub struct IntegrateOptions {
    /// Name given to a synthetic root when the two schema roots do not merge.
    pub root_name: String,
    /// Schema id of the output; defaults to `<id1>+<id2>`.
    pub schema_id: Option<String>,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            root_name: "root".to_string(),
            schema_id: None,
        }
    }
}

/// What happened to one input component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disposition {
    Kept,
    Merged,
    Renamed,
}

/// Audit record: how an input x-component is represented in the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub schema: String,
    pub name: String,
    pub typology: Typology,
    pub disposition: Disposition,
    pub final_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<String>,
}

#[derive(Debug)]
pub struct IntegrationOutcome {
    pub schema: SchemaModel,
    pub audit: Vec<AuditEntry>,
}

/// Final names of second-schema components, plus the pair classification
/// derived from the dictionaries.
struct MergeMaps {
    /// (name, typology) of an S2 component -> final name, for components
    /// merged into an S1 declaration.
    merged_right: BTreeMap<(String, Typology), String>,
    /// Complex pairs as (left name, right name).
    complex_pairs: Vec<(String, String)>,
    /// Element-element pairs (left name, right name), complex or simple.
    element_pairs: Vec<(String, String)>,
    /// Attribute-attribute pairs.
    attribute_pairs: Vec<(String, String)>,
    /// Mixed pairs as (element is from S1, element name, attribute name).
    mixed_pairs: Vec<(bool, String, String)>,
}

fn classify(
    s1: &SchemaModel,
    s2: &SchemaModel,
    md: &MergeDictionary,
) -> Result<MergeMaps, IntegrateError> {
    let mut maps = MergeMaps {
        merged_right: BTreeMap::new(),
        complex_pairs: Vec::new(),
        element_pairs: Vec::new(),
        attribute_pairs: Vec::new(),
        mixed_pairs: Vec::new(),
    };
    let mut seen_left: BTreeSet<(String, Typology)> = BTreeSet::new();
    let mut seen_right: BTreeSet<(String, Typology)> = BTreeSet::new();
    for MergePair { left, right } in &md.pairs {
        if s1.component(&left.name, left.typology).is_none() {
            return Err(IntegrateError::InconsistentDictionary(format!(
                "{} is not declared in {}",
                left.name,
                s1.schema_id()
            )));
        }
        if s2.component(&right.name, right.typology).is_none() {
            return Err(IntegrateError::InconsistentDictionary(format!(
                "{} is not declared in {}",
                right.name,
                s2.schema_id()
            )));
        }
        if !seen_left.insert((left.name.clone(), left.typology)) {
            return Err(IntegrateError::InconsistentDictionary(format!(
                "{} appears in more than one merge pair",
                left.name
            )));
        }
        if !seen_right.insert((right.name.clone(), right.typology)) {
            return Err(IntegrateError::InconsistentDictionary(format!(
                "{} appears in more than one merge pair",
                right.name
            )));
        }
        match (left.typology, right.typology) {
            (Typology::ComplexElement, Typology::ComplexElement) => {
                maps.complex_pairs
                    .push((left.name.clone(), right.name.clone()));
                maps.element_pairs
                    .push((left.name.clone(), right.name.clone()));
                maps.merged_right.insert(
                    (right.name.clone(), Typology::ComplexElement),
                    left.name.clone(),
                );
            }
            (Typology::SimpleElement, Typology::SimpleElement) => {
                maps.element_pairs
                    .push((left.name.clone(), right.name.clone()));
                maps.merged_right.insert(
                    (right.name.clone(), Typology::SimpleElement),
                    left.name.clone(),
                );
            }
            (Typology::Attribute, Typology::Attribute) => {
                maps.attribute_pairs
                    .push((left.name.clone(), right.name.clone()));
                maps.merged_right.insert(
                    (right.name.clone(), Typology::Attribute),
                    left.name.clone(),
                );
            }
            (Typology::SimpleElement, Typology::Attribute) => {
                // Mixed pair: both declarations survive; the attribute use is
                // dropped inside merged elements holding both.
                maps.mixed_pairs
                    .push((true, left.name.clone(), right.name.clone()));
            }
            (Typology::Attribute, Typology::SimpleElement) => {
                maps.mixed_pairs
                    .push((false, right.name.clone(), left.name.clone()));
            }
            (l, r) => {
                return Err(IntegrateError::InconsistentDictionary(format!(
                    "cannot merge a {l} with a {r}"
                )));
            }
        }
    }
    Ok(maps)
}

/// Merges a complex pair of the dictionary into one element: children are
/// E1's refs followed by E2's leftover refs, dictionary-paired children
/// collapse with combined occurrence indicators, children present in only
/// one parent become optional, and paired attributes fuse (required only
/// when required on both sides).
pub fn merge_complex(
    s1: &SchemaModel,
    s2: &SchemaModel,
    e1: &XComponent,
    e2: &XComponent,
    md: &MergeDictionary,
) -> Result<(XComponent, ComplexContent), IntegrateError> {
    let maps = classify(s1, s2, md)?;
    if !maps
        .complex_pairs
        .iter()
        .any(|(l, r)| *l == e1.name && *r == e2.name)
    {
        return Err(IntegrateError::NotMerged {
            left: e1.name.clone(),
            right: e2.name.clone(),
        });
    }
    let content = merged_content(s1, s2, &e1.name, &e2.name, &maps, &BTreeMap::new());
    Ok((
        XComponent::new(s1.schema_id(), e1.name.clone(), Typology::ComplexElement, None),
        content,
    ))
}

fn final_s2_name(
    maps: &MergeMaps,
    renames: &BTreeMap<(String, Typology), String>,
    name: &str,
    typology_options: &[Typology],
) -> String {
    for t in typology_options {
        if let Some(n) = maps.merged_right.get(&(name.to_string(), *t)) {
            return n.clone();
        }
        if let Some(n) = renames.get(&(name.to_string(), *t)) {
            return n.clone();
        }
    }
    name.to_string()
}

fn merged_content(
    s1: &SchemaModel,
    s2: &SchemaModel,
    e1: &str,
    e2: &str,
    maps: &MergeMaps,
    renames: &BTreeMap<(String, Typology), String>,
) -> ComplexContent {
    let element_typologies = [Typology::SimpleElement, Typology::ComplexElement];
    let e2_children = s2.child_refs(e2);
    let mut consumed = vec![false; e2_children.len()];
    let mut children: Vec<ChildRef> = Vec::new();
    for r1 in s1.child_refs(e1) {
        let paired = e2_children.iter().enumerate().find(|(j, r2)| {
            !consumed[*j]
                && maps
                    .element_pairs
                    .iter()
                    .any(|(l, r)| *l == r1.target && *r == r2.target)
        });
        match paired {
            Some((j, r2)) => {
                consumed[j] = true;
                children.push(ChildRef {
                    target: r1.target.clone(),
                    min_occurs: r1.min_occurs.min(r2.min_occurs),
                    max_occurs: r1.max_occurs.max(r2.max_occurs),
                });
            }
            None => children.push(ChildRef {
                target: r1.target.clone(),
                min_occurs: 0,
                max_occurs: r1.max_occurs,
            }),
        }
    }
    for (j, r2) in e2_children.iter().enumerate() {
        if consumed[j] {
            continue;
        }
        children.push(ChildRef {
            target: final_s2_name(maps, renames, &r2.target, &element_typologies),
            min_occurs: 0,
            max_occurs: r2.max_occurs,
        });
    }

    let e2_attrs = s2.attribute_uses(e2);
    let mut consumed = vec![false; e2_attrs.len()];
    let mut attributes: Vec<AttributeUse> = Vec::new();
    for a1 in s1.attribute_uses(e1) {
        let paired = e2_attrs.iter().enumerate().find(|(j, a2)| {
            !consumed[*j]
                && maps
                    .attribute_pairs
                    .iter()
                    .any(|(l, r)| *l == a1.target && *r == a2.target)
        });
        match paired {
            Some((j, a2)) => {
                consumed[j] = true;
                attributes.push(AttributeUse {
                    target: a1.target.clone(),
                    required: a1.required && a2.required,
                });
            }
            None => attributes.push(AttributeUse {
                target: a1.target.clone(),
                required: false,
            }),
        }
    }
    for (j, a2) in e2_attrs.iter().enumerate() {
        if consumed[j] {
            continue;
        }
        attributes.push(AttributeUse {
            target: final_s2_name(maps, renames, &a2.target, &[Typology::Attribute]),
            required: false,
        });
    }

    // A dictionary pair of a simple element and an attribute: the element
    // subsumes the attribute, so its use is dropped here.
    for (elem_is_left, elem, attr) in &maps.mixed_pairs {
        let elem_final = if *elem_is_left {
            elem.clone()
        } else {
            final_s2_name(maps, renames, elem, &[Typology::SimpleElement])
        };
        let attr_final = if *elem_is_left {
            final_s2_name(maps, renames, attr, &[Typology::Attribute])
        } else {
            attr.clone()
        };
        if children.iter().any(|r| r.target == elem_final) {
            attributes.retain(|a| a.target != attr_final);
        }
    }

    ComplexContent {
        compositor: Compositor::Sequence,
        children,
        attributes,
    }
}

/// Integrates two schemas under previously built dictionaries.
pub fn integrate(
    s1: &SchemaModel,
    s2: &SchemaModel,
    md: &MergeDictionary,
    rd: &RenameDictionary,
    options: &IntegrateOptions,
) -> Result<IntegrationOutcome, IntegrateError> {
    let maps = classify(s1, s2, md)?;
    let out_id = options
        .schema_id
        .clone()
        .unwrap_or_else(|| format!("{}+{}", s1.schema_id(), s2.schema_id()));

    // Resolve renames for surviving same-named second-schema components.
    let mut occupied_elements: BTreeSet<String> = s1
        .xcomponents()
        .iter()
        .filter(|c| c.typology.is_element())
        .map(|c| c.name.clone())
        .collect();
    let mut occupied_attributes: BTreeSet<String> = s1
        .xcomponents()
        .iter()
        .filter(|c| c.typology == Typology::Attribute)
        .map(|c| c.name.clone())
        .collect();
    for c in s2.xcomponents() {
        if maps
            .merged_right
            .contains_key(&(c.name.clone(), c.typology))
        {
            continue;
        }
        if c.typology.is_element() {
            occupied_elements.insert(c.name.clone());
        } else {
            occupied_attributes.insert(c.name.clone());
        }
    }
    let mut renames: BTreeMap<(String, Typology), String> = BTreeMap::new();
    for pair in &rd.pairs {
        let right = &pair.right;
        if s2.component(&right.name, right.typology).is_none() {
            return Err(IntegrateError::InconsistentDictionary(format!(
                "{} is not declared in {}",
                right.name,
                s2.schema_id()
            )));
        }
        let key = (right.name.clone(), right.typology);
        if maps.merged_right.contains_key(&key) || renames.contains_key(&key) {
            continue; // merged away or already renamed through another pair
        }
        let occupied = if right.typology.is_element() {
            &mut occupied_elements
        } else {
            &mut occupied_attributes
        };
        let mut n = 2;
        let new_name = loop {
            let candidate = format!("{}_{n}", right.name);
            if !occupied.contains(&candidate) {
                break candidate;
            }
            n += 1;
        };
        occupied.insert(new_name.clone());
        renames.insert(key, new_name);
    }

    let element_typologies = [Typology::SimpleElement, Typology::ComplexElement];
    let rewrite_content = |content: &ComplexContent| ComplexContent {
        compositor: content.compositor,
        children: content
            .children
            .iter()
            .map(|r| ChildRef {
                target: final_s2_name(&maps, &renames, &r.target, &element_typologies),
                min_occurs: r.min_occurs,
                max_occurs: r.max_occurs,
            })
            .collect(),
        attributes: content
            .attributes
            .iter()
            .map(|a| AttributeUse {
                target: final_s2_name(&maps, &renames, &a.target, &[Typology::Attribute]),
                required: a.required,
            })
            .collect(),
    };

    let mut audit: Vec<AuditEntry> = Vec::new();
    let mut components: Vec<XComponent> = Vec::new();
    let mut content: BTreeMap<String, ComplexContent> = BTreeMap::new();

    let md_partner_of_left = |c: &XComponent| -> Option<&MergePair> {
        md.pairs
            .iter()
            .find(|p| p.left.name == c.name && p.left.typology == c.typology)
    };

    for c in s1.xcomponents() {
        match md_partner_of_left(c) {
            Some(pair) if c.typology == pair.right.typology => {
                // Same-kind pair: one merged declaration named after S1.
                if c.typology == Typology::ComplexElement {
                    components.push(XComponent::new(
                        &out_id,
                        c.name.clone(),
                        Typology::ComplexElement,
                        None,
                    ));
                    content.insert(
                        c.name.clone(),
                        merged_content(s1, s2, &c.name, &pair.right.name, &maps, &renames),
                    );
                } else {
                    let t1 = c.data_type.as_deref().unwrap_or_default();
                    let right = s2
                        .component(&pair.right.name, pair.right.typology)
                        .expect("validated by classify");
                    let t2 = right.data_type.as_deref().unwrap_or_default();
                    components.push(XComponent::new(
                        &out_id,
                        c.name.clone(),
                        c.typology,
                        Some(merge_type(t1, t2)?),
                    ));
                }
                audit.push(AuditEntry {
                    schema: s1.schema_id().to_string(),
                    name: c.name.clone(),
                    typology: c.typology,
                    disposition: Disposition::Merged,
                    final_name: c.name.clone(),
                    partner: Some(pair.right.name.clone()),
                });
            }
            _ => {
                // Kept as-is (mixed pairs keep both declarations).
                components.push(XComponent::new(
                    &out_id,
                    c.name.clone(),
                    c.typology,
                    c.data_type.clone(),
                ));
                if c.typology == Typology::ComplexElement {
                    content.insert(
                        c.name.clone(),
                        s1.content_of(&c.name).cloned().unwrap_or_default(),
                    );
                }
                audit.push(AuditEntry {
                    schema: s1.schema_id().to_string(),
                    name: c.name.clone(),
                    typology: c.typology,
                    disposition: Disposition::Kept,
                    final_name: c.name.clone(),
                    partner: None,
                });
            }
        }
    }

    for c in s2.xcomponents() {
        let key = (c.name.clone(), c.typology);
        if let Some(final_name) = maps.merged_right.get(&key) {
            let partner = md
                .pairs
                .iter()
                .find(|p| p.right.name == c.name && p.right.typology == c.typology)
                .map(|p| p.left.name.clone());
            audit.push(AuditEntry {
                schema: s2.schema_id().to_string(),
                name: c.name.clone(),
                typology: c.typology,
                disposition: Disposition::Merged,
                final_name: final_name.clone(),
                partner,
            });
            continue;
        }
        let (final_name, disposition) = match renames.get(&key) {
            Some(renamed) => (renamed.clone(), Disposition::Renamed),
            None => (c.name.clone(), Disposition::Kept),
        };
        components.push(XComponent::new(
            &out_id,
            final_name.clone(),
            c.typology,
            c.data_type.clone(),
        ));
        if c.typology == Typology::ComplexElement {
            content.insert(
                final_name.clone(),
                rewrite_content(&s2.content_of(&c.name).cloned().unwrap_or_default()),
            );
        }
        audit.push(AuditEntry {
            schema: s2.schema_id().to_string(),
            name: c.name.clone(),
            typology: c.typology,
            disposition,
            final_name,
            partner: None,
        });
    }

    // Root unification.
    let r1 = s1.root_element()?.name.clone();
    let r2 = s2.root_element()?.name.clone();
    let roots_merged = maps
        .complex_pairs
        .iter()
        .any(|(l, r)| *l == r1 && *r == r2);
    if !roots_merged {
        let r2_final = final_s2_name(&maps, &renames, &r2, &[Typology::ComplexElement]);
        let mut root_name = options.root_name.clone();
        let mut n = 2;
        while occupied_elements.contains(&root_name) {
            root_name = format!("{}_{n}", options.root_name);
            n += 1;
        }
        components.push(XComponent::new(
            &out_id,
            root_name.clone(),
            Typology::ComplexElement,
            None,
        ));
        content.insert(
            root_name,
            ComplexContent {
                compositor: Compositor::All,
                children: vec![
                    ChildRef::with_occurs(r1, 0, crate::model::MaxOccurs::Bounded(1)),
                    ChildRef::with_occurs(r2_final, 0, crate::model::MaxOccurs::Bounded(1)),
                ],
                attributes: Vec::new(),
            },
        );
    }

    // Canonical grouped order: attributes, simple elements, complex elements.
    let group = |c: &XComponent| match c.typology {
        Typology::Attribute => 0u8,
        Typology::SimpleElement => 1,
        Typology::ComplexElement => 2,
    };
    let mut ordered: Vec<(usize, XComponent)> = components.into_iter().enumerate().collect();
    ordered.sort_by_key(|(i, c)| (group(c), *i));
    let components = ordered.into_iter().map(|(_, c)| c).collect();

    let schema = SchemaModel::from_parts(&out_id, components, content);
    schema.validate().map_err(|e| {
        IntegrateError::InconsistentDictionary(format!("integration produced an invalid schema: {e}"))
    })?;
    Ok(IntegrationOutcome { schema, audit })
}
