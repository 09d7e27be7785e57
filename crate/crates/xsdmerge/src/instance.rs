//! Best-effort scan of XML instance documents to discover which complex
//! elements the schema's IDREF/IDREFS attributes actually refer to. The
//! schema alone cannot tell; only instances carry the ID values.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use roxmltree::Document;
use thiserror::Error;

use crate::model::{SchemaModel, Typology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("instance document #{doc_index}: {message}")]
pub struct InstanceParseError {
    pub doc_index: usize,
    pub message: String,
}

/// Targets resolved from instance evidence: for each IDREF/IDREFS attribute
/// declaration, the set of complex-element declarations its values point at.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RefTargetMap {
    targets: BTreeMap<String, BTreeSet<String>>,
    /// Element instances examined across all documents.
    pub instances_scanned: usize,
    /// IDREF tokens that matched no ID value (skipped, not errors).
    pub unresolved_refs: usize,
    /// Documents that failed to parse; the rest were still processed.
    pub failed_documents: Vec<InstanceParseError>,
}

impl RefTargetMap {
    pub fn empty() -> Self {
        RefTargetMap::default()
    }

    /// Builds a map directly from (attribute, targets) entries. Useful for
    /// synthetic graphs and tests.
    pub fn from_entries<I, T>(entries: I) -> Self
    where
        I: IntoIterator<Item = (String, T)>,
        T: IntoIterator<Item = String>,
    {
        let mut map = RefTargetMap::default();
        for (attr, targets) in entries {
            map.targets.entry(attr).or_default().extend(targets);
        }
        map
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn targets_of(&self, attribute: &str) -> impl Iterator<Item = &str> {
        self.targets
            .get(attribute)
            .into_iter()
            .flat_map(|s| s.iter().map(String::as_str))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.targets.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Scans `documents` and records, for every IDREF/IDREFS attribute
/// occurrence, the declaration names of the elements whose ID values it
/// references. Resolution is per document; results are set-unioned.
pub fn resolve_idrefs(model: &SchemaModel, documents: &[&str]) -> RefTargetMap {
    let id_attrs: BTreeSet<&str> = typed_attributes(model, "ID");
    let idref_attrs: BTreeSet<&str> = typed_attributes(model, "IDREF");
    let idrefs_attrs: BTreeSet<&str> = typed_attributes(model, "IDREFS");
    let complex: BTreeSet<&str> = model.complex_elements().map(|c| c.name.as_str()).collect();

    let mut map = RefTargetMap::default();
    for (doc_index, text) in documents.iter().enumerate() {
        let doc = match Document::parse(text) {
            Ok(doc) => doc,
            Err(e) => {
                map.failed_documents.push(InstanceParseError {
                    doc_index,
                    message: e.to_string(),
                });
                continue;
            }
        };

        // First pass: hash index of ID value -> declaring element names.
        let mut ids: HashMap<&str, BTreeSet<&str>> = HashMap::new();
        let mut instances = 0usize;
        for node in doc.descendants().filter(|n| n.is_element()) {
            instances += 1;
            let elem = node.tag_name().name();
            if !complex.contains(elem) {
                continue;
            }
            for attr in node.attributes() {
                if id_attrs.contains(attr.name()) {
                    ids.entry(attr.value()).or_default().insert(elem);
                }
            }
        }
        map.instances_scanned += instances;

        // Second pass: resolve every IDREF/IDREFS occurrence against it.
        for node in doc.descendants().filter(|n| n.is_element()) {
            for attr in node.attributes() {
                let tokens: Vec<&str> = if idref_attrs.contains(attr.name()) {
                    vec![attr.value().trim()]
                } else if idrefs_attrs.contains(attr.name()) {
                    attr.value().split_whitespace().collect()
                } else {
                    continue;
                };
                for token in tokens.into_iter().filter(|t| !t.is_empty()) {
                    match ids.get(token) {
                        Some(elems) => {
                            map.targets
                                .entry(attr.name().to_string())
                                .or_default()
                                .extend(elems.iter().map(|e| e.to_string()));
                        }
                        None => map.unresolved_refs += 1,
                    }
                }
            }
        }
    }
    map
}

fn typed_attributes<'m>(model: &'m SchemaModel, data_type: &str) -> BTreeSet<&'m str> {
    model
        .xcomponents()
        .iter()
        .filter(|c| c.typology == Typology::Attribute && c.data_type.as_deref() == Some(data_type))
        .map(|c| c.name.as_str())
        .collect()
}
