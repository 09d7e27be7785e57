//! The x-component model of a referenced-style XML Schema.
//!
//! A schema is a flat, ordered list of declarations (attributes, simple
//! elements, complex elements) plus, for every complex element, the ordered
//! element refs and attribute refs that make up its content. Everything else
//! in the artifact (graphs, matching, integration) is built on this model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// What kind of declaration an x-component is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Typology {
    ComplexElement,
    SimpleElement,
    Attribute,
}

impl Typology {
    /// Attributes and simple elements carry a data type; complex elements do not.
    pub fn has_data_type(self) -> bool {
        !matches!(self, Typology::ComplexElement)
    }

    /// Both element typologies share the XSD element symbol space.
    pub fn is_element(self) -> bool {
        matches!(self, Typology::ComplexElement | Typology::SimpleElement)
    }
}

impl fmt::Display for Typology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Typology::ComplexElement => write!(f, "complex element"),
            Typology::SimpleElement => write!(f, "simple element"),
            Typology::Attribute => write!(f, "attribute"),
        }
    }
}

/// A named element or attribute declaration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XComponent {
    /// Identifier of the owning schema.
    pub schema_id: String,
    /// Declaration name, stored verbatim.
    pub name: String,
    pub typology: Typology,
    /// Built-in type local name (e.g. `string`, `IDREFS`); present iff the
    /// typology is not `ComplexElement`.
    pub data_type: Option<String>,
}

impl XComponent {
    pub fn new(
        schema_id: impl Into<String>,
        name: impl Into<String>,
        typology: Typology,
        data_type: Option<String>,
    ) -> Self {
        XComponent {
            schema_id: schema_id.into(),
            name: name.into(),
            typology,
            data_type,
        }
    }

    /// Key used whenever names are compared case-insensitively downstream.
    pub fn lower_name(&self) -> String {
        self.name.to_lowercase()
    }
}

impl fmt::Display for XComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.name, self.typology)
    }
}

/// Upper occurrence bound of an element reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxOccurs {
    Bounded(u32),
    Unbounded,
}

impl PartialOrd for MaxOccurs {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MaxOccurs {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use MaxOccurs::*;
        match (self, other) {
            (Unbounded, Unbounded) => std::cmp::Ordering::Equal,
            (Unbounded, Bounded(_)) => std::cmp::Ordering::Greater,
            (Bounded(_), Unbounded) => std::cmp::Ordering::Less,
            (Bounded(a), Bounded(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for MaxOccurs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxOccurs::Bounded(n) => write!(f, "{n}"),
            MaxOccurs::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// A `<xs:element ref="..."/>` inside a complex element's content model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChildRef {
    pub target: String,
    pub min_occurs: u32,
    pub max_occurs: MaxOccurs,
}

impl ChildRef {
    pub fn new(target: impl Into<String>) -> Self {
        ChildRef {
            target: target.into(),
            min_occurs: 1,
            max_occurs: MaxOccurs::Bounded(1),
        }
    }

    pub fn with_occurs(target: impl Into<String>, min_occurs: u32, max_occurs: MaxOccurs) -> Self {
        ChildRef {
            target: target.into(),
            min_occurs,
            max_occurs,
        }
    }
}

/// A `<xs:attribute ref="..."/>` use inside a complex element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AttributeUse {
    pub target: String,
    pub required: bool,
}

impl AttributeUse {
    pub fn new(target: impl Into<String>, required: bool) -> Self {
        AttributeUse {
            target: target.into(),
            required,
        }
    }
}

/// Group indicator of a complex element's children.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Compositor {
    #[default]
    Sequence,
    All,
}

/// Content model of one complex element: child element refs under a
/// compositor, followed by attribute refs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComplexContent {
    pub compositor: Compositor,
    pub children: Vec<ChildRef>,
    pub attributes: Vec<AttributeUse>,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed XML: {0}")]
    Parse(String),
    #[error("unsupported schema style: {0}")]
    UnsupportedStyle(String),
    #[error("dangling reference: {referrer} refers to undeclared {kind} \"{target}\"")]
    DanglingReference {
        referrer: String,
        kind: &'static str,
        target: String,
    },
    #[error("cannot serialize: {0}")]
    Serialize(String),
    #[error("cannot determine root: found {candidates} unreferenced complex elements")]
    AmbiguousRoot { candidates: usize },
    #[error("invalid model: {0}")]
    Invariant(String),
}

/// A parsed referenced-style XML Schema.
///
/// Immutable after construction; all accessors borrow. Declarations keep the
/// order they were supplied in (document order when parsed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaModel {
    schema_id: String,
    components: Vec<XComponent>,
    content: BTreeMap<String, ComplexContent>,
}

impl SchemaModel {
    /// Assembles a model without checking invariants; call [`validate`]
    /// (or let the serializer do it) when the parts come from untrusted code.
    ///
    /// [`validate`]: SchemaModel::validate
    pub fn from_parts(
        schema_id: impl Into<String>,
        components: Vec<XComponent>,
        content: BTreeMap<String, ComplexContent>,
    ) -> Self {
        SchemaModel {
            schema_id: schema_id.into(),
            components,
            content,
        }
    }

    pub fn schema_id(&self) -> &str {
        &self.schema_id
    }

    /// All declared x-components, in declaration order.
    pub fn xcomponents(&self) -> &[XComponent] {
        &self.components
    }

    pub fn component(&self, name: &str, typology: Typology) -> Option<&XComponent> {
        self.components
            .iter()
            .find(|c| c.typology == typology && c.name == name)
    }

    /// The element (simple or complex) declared under `name`, if any.
    pub fn element(&self, name: &str) -> Option<&XComponent> {
        self.components
            .iter()
            .find(|c| c.typology.is_element() && c.name == name)
    }

    pub fn attribute(&self, name: &str) -> Option<&XComponent> {
        self.component(name, Typology::Attribute)
    }

    /// Looks a component up by name alone, preferring complex elements, then
    /// simple elements, then attributes.
    pub fn component_by_name(&self, name: &str) -> Option<&XComponent> {
        self.component(name, Typology::ComplexElement)
            .or_else(|| self.component(name, Typology::SimpleElement))
            .or_else(|| self.component(name, Typology::Attribute))
    }

    pub fn complex_elements(&self) -> impl Iterator<Item = &XComponent> {
        self.components
            .iter()
            .filter(|c| c.typology == Typology::ComplexElement)
    }

    pub fn attributes_and_simple_elements(&self) -> impl Iterator<Item = &XComponent> {
        self.components
            .iter()
            .filter(|c| c.typology != Typology::ComplexElement)
    }

    /// Content model of a complex element. Empty content for complex elements
    /// declared without children or attributes.
    pub fn content_of(&self, complex_name: &str) -> Option<&ComplexContent> {
        self.content.get(complex_name)
    }

    pub fn child_refs(&self, complex_name: &str) -> &[ChildRef] {
        self.content
            .get(complex_name)
            .map(|c| c.children.as_slice())
            .unwrap_or(&[])
    }

    pub fn attribute_uses(&self, complex_name: &str) -> &[AttributeUse] {
        self.content
            .get(complex_name)
            .map(|c| c.attributes.as_slice())
            .unwrap_or(&[])
    }

    /// The unique complex element not referenced by any child ref.
    pub fn root_element(&self) -> Result<&XComponent, ModelError> {
        let referenced: BTreeSet<&str> = self
            .content
            .values()
            .flat_map(|c| c.children.iter())
            .map(|r| r.target.as_str())
            .collect();
        let mut roots = self
            .complex_elements()
            .filter(|c| !referenced.contains(c.name.as_str()));
        match (roots.next(), roots.next()) {
            (Some(root), None) => Ok(root),
            (None, _) => Err(ModelError::AmbiguousRoot { candidates: 0 }),
            (Some(_), Some(_)) => Err(ModelError::AmbiguousRoot {
                candidates: 2 + roots.count(),
            }),
        }
    }

    /// Parents (complex elements) that reference `target` as a child element.
    pub fn parents_of_element(&self, target: &str) -> Vec<&XComponent> {
        self.complex_elements()
            .filter(|e| self.child_refs(&e.name).iter().any(|r| r.target == target))
            .collect()
    }

    /// Parents (complex elements) that reference `target` as an attribute.
    pub fn parents_of_attribute(&self, target: &str) -> Vec<&XComponent> {
        self.complex_elements()
            .filter(|e| {
                self.attribute_uses(&e.name)
                    .iter()
                    .any(|u| u.target == target)
            })
            .collect()
    }

    /// Checks every stored-model invariant, returning the first violation.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut elements = BTreeSet::new();
        let mut attributes = BTreeSet::new();
        for c in &self.components {
            if !is_ncname(&c.name) {
                return Err(ModelError::Invariant(format!(
                    "\"{}\" is not a valid declaration name",
                    c.name
                )));
            }
            match c.typology {
                Typology::ComplexElement => {
                    if c.data_type.is_some() {
                        return Err(ModelError::Invariant(format!(
                            "complex element {} must not carry a data type",
                            c.name
                        )));
                    }
                    if !elements.insert(c.name.clone()) {
                        return Err(ModelError::Invariant(format!(
                            "duplicate element declaration {}",
                            c.name
                        )));
                    }
                }
                Typology::SimpleElement => {
                    if c.data_type.is_none() {
                        return Err(ModelError::Invariant(format!(
                            "simple element {} must carry a data type",
                            c.name
                        )));
                    }
                    if !elements.insert(c.name.clone()) {
                        return Err(ModelError::Invariant(format!(
                            "duplicate element declaration {}",
                            c.name
                        )));
                    }
                }
                Typology::Attribute => {
                    if c.data_type.is_none() {
                        return Err(ModelError::Invariant(format!(
                            "attribute {} must carry a data type",
                            c.name
                        )));
                    }
                    if !attributes.insert(c.name.clone()) {
                        return Err(ModelError::Invariant(format!(
                            "duplicate attribute declaration {}",
                            c.name
                        )));
                    }
                }
            }
        }
        for name in self.content.keys() {
            if self.component(name, Typology::ComplexElement).is_none() {
                return Err(ModelError::Invariant(format!(
                    "content recorded for undeclared complex element {name}"
                )));
            }
        }
        for (owner, content) in &self.content {
            for r in &content.children {
                match self.element(&r.target) {
                    Some(_) => {}
                    None => {
                        return Err(ModelError::DanglingReference {
                            referrer: owner.clone(),
                            kind: "element",
                            target: r.target.clone(),
                        })
                    }
                }
                if let MaxOccurs::Bounded(max) = r.max_occurs {
                    if max == 0 {
                        return Err(ModelError::Invariant(format!(
                            "{owner}: maxOccurs of {} must be positive",
                            r.target
                        )));
                    }
                    if r.min_occurs > max {
                        return Err(ModelError::Invariant(format!(
                            "{owner}: minOccurs {} exceeds maxOccurs {} on {}",
                            r.min_occurs, max, r.target
                        )));
                    }
                }
            }
            for u in &content.attributes {
                if self.attribute(&u.target).is_none() {
                    return Err(ModelError::DanglingReference {
                        referrer: owner.clone(),
                        kind: "attribute",
                        target: u.target.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Structural equality: same declarations (name, typology, data type,
    /// content models) regardless of schema id and top-level declaration
    /// order. Child and attribute ref lists stay order-sensitive because
    /// sequence order is meaningful.
    pub fn structurally_equal(&self, other: &SchemaModel) -> bool {
        let key = |c: &XComponent| (c.typology, c.name.clone(), c.data_type.clone());
        let mut left: Vec<_> = self.components.iter().map(key).collect();
        let mut right: Vec<_> = other.components.iter().map(key).collect();
        left.sort();
        right.sort();
        if left != right {
            return false;
        }
        self.complex_elements().all(|e| {
            let ours = self.content_of(&e.name);
            let theirs = other.content_of(&e.name);
            match (ours, theirs) {
                (Some(a), Some(b)) => a == b,
                (None, None) => true,
                (a, b) => {
                    a.cloned().unwrap_or_default() == b.cloned().unwrap_or_default()
                }
            }
        })
    }
}

/// XML NCName check (no colon, not starting with a digit).
pub fn is_ncname(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> SchemaModel {
        let mut content = BTreeMap::new();
        content.insert("r".to_string(), ComplexContent::default());
        SchemaModel::from_parts(
            "t",
            vec![XComponent::new("t", "r", Typology::ComplexElement, None)],
            content,
        )
    }

    #[test]
    fn minimal_schema_has_single_component_and_root() {
        let m = minimal();
        assert!(m.validate().is_ok());
        assert_eq!(m.xcomponents().len(), 1);
        assert_eq!(m.root_element().unwrap().name, "r");
    }

    #[test]
    fn root_is_ambiguous_with_two_unreferenced_complexes() {
        let mut content = BTreeMap::new();
        content.insert("a".to_string(), ComplexContent::default());
        content.insert("b".to_string(), ComplexContent::default());
        let m = SchemaModel::from_parts(
            "t",
            vec![
                XComponent::new("t", "a", Typology::ComplexElement, None),
                XComponent::new("t", "b", Typology::ComplexElement, None),
            ],
            content,
        );
        assert!(matches!(
            m.root_element(),
            Err(ModelError::AmbiguousRoot { candidates: 2 })
        ));
    }

    #[test]
    fn root_is_ambiguous_when_all_complexes_are_referenced() {
        let mut content = BTreeMap::new();
        let mut a = ComplexContent::default();
        a.children.push(ChildRef::new("b"));
        let mut b = ComplexContent::default();
        b.children.push(ChildRef::new("a"));
        content.insert("a".to_string(), a);
        content.insert("b".to_string(), b);
        let m = SchemaModel::from_parts(
            "t",
            vec![
                XComponent::new("t", "a", Typology::ComplexElement, None),
                XComponent::new("t", "b", Typology::ComplexElement, None),
            ],
            content,
        );
        assert!(matches!(
            m.root_element(),
            Err(ModelError::AmbiguousRoot { candidates: 0 })
        ));
    }

    #[test]
    fn validate_rejects_complex_with_data_type() {
        let mut content = BTreeMap::new();
        content.insert("r".to_string(), ComplexContent::default());
        let m = SchemaModel::from_parts(
            "t",
            vec![XComponent::new(
                "t",
                "r",
                Typology::ComplexElement,
                Some("string".into()),
            )],
            content,
        );
        assert!(matches!(m.validate(), Err(ModelError::Invariant(_))));
    }

    #[test]
    fn validate_rejects_duplicate_element_names_across_typologies() {
        let mut content = BTreeMap::new();
        content.insert("x".to_string(), ComplexContent::default());
        let m = SchemaModel::from_parts(
            "t",
            vec![
                XComponent::new("t", "x", Typology::SimpleElement, Some("string".into())),
                XComponent::new("t", "x", Typology::ComplexElement, None),
            ],
            content,
        );
        assert!(matches!(m.validate(), Err(ModelError::Invariant(_))));
    }

    #[test]
    fn validate_rejects_min_occurs_above_max() {
        let mut content = BTreeMap::new();
        let mut r = ComplexContent::default();
        r.children
            .push(ChildRef::with_occurs("s", 3, MaxOccurs::Bounded(2)));
        content.insert("r".to_string(), r);
        let m = SchemaModel::from_parts(
            "t",
            vec![
                XComponent::new("t", "r", Typology::ComplexElement, None),
                XComponent::new("t", "s", Typology::SimpleElement, Some("string".into())),
            ],
            content,
        );
        assert!(matches!(m.validate(), Err(ModelError::Invariant(_))));
    }

    #[test]
    fn unbounded_compares_greater_than_any_integer() {
        assert!(MaxOccurs::Unbounded > MaxOccurs::Bounded(u32::MAX));
        assert!(MaxOccurs::Bounded(2) > MaxOccurs::Bounded(1));
        assert_eq!(MaxOccurs::Unbounded, MaxOccurs::Unbounded);
    }

    #[test]
    fn ncname_rules() {
        assert!(is_ncname("bookAcquirement"));
        assert!(is_ncname("_x-1.y"));
        assert!(!is_ncname(""));
        assert!(!is_ncname("1abc"));
        assert!(!is_ncname("xs:element"));
        assert!(!is_ncname("a b"));
    }
}
