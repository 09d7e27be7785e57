//! Parser for the referenced-style XSD subset.
//!
//! Supported constructs: top-level `xs:attribute` / `xs:element`
//! declarations, anonymous `xs:complexType` immediately inside a named
//! element, `xs:sequence` / `xs:all` of element refs, attribute refs with
//! `use="required"`, `minOccurs` / `maxOccurs`, built-in data types. Anything
//! nested deeper than the immediate complexType wrapper is rejected as
//! inline style.

use std::collections::BTreeMap;

use roxmltree::{Document, Node};

use crate::model::{
    is_ncname, AttributeUse, ChildRef, ComplexContent, Compositor, MaxOccurs, ModelError,
    SchemaModel, Typology, XComponent,
};

pub const XS_NAMESPACE: &str = "http://www.w3.org/2001/XMLSchema";

/// Parses referenced-style schema text into a [`SchemaModel`].
pub fn parse_schema(schema_text: &str, schema_id: &str) -> Result<SchemaModel, ModelError> {
    let doc = Document::parse(schema_text).map_err(|e| ModelError::Parse(e.to_string()))?;
    let root = doc.root_element();
    expect_xs(&root, "schema")?;

    let mut components = Vec::new();
    let mut content = BTreeMap::new();

    for node in root.children() {
        if !node.is_element() {
            continue;
        }
        match xs_local_name(&node)? {
            "attribute" => {
                let (name, data_type) = named_typed_declaration(&node)?;
                components.push(XComponent::new(
                    schema_id,
                    name,
                    Typology::Attribute,
                    Some(data_type),
                ));
            }
            "element" => {
                let name = declaration_name(&node)?;
                match (node.attribute("type"), complex_type_child(&node)?) {
                    (Some(t), None) => {
                        components.push(XComponent::new(
                            schema_id,
                            name,
                            Typology::SimpleElement,
                            Some(builtin_type(&node, t)?),
                        ));
                    }
                    (None, Some(ct)) => {
                        let model = parse_complex_type(&ct, &name)?;
                        components.push(XComponent::new(
                            schema_id,
                            name.clone(),
                            Typology::ComplexElement,
                            None,
                        ));
                        content.insert(name, model);
                    }
                    (Some(_), Some(_)) => {
                        return Err(ModelError::UnsupportedStyle(format!(
                            "element {name} has both a type attribute and a complexType child"
                        )));
                    }
                    (None, None) => {
                        return Err(ModelError::UnsupportedStyle(format!(
                            "element {name} declares neither a built-in type nor a complexType"
                        )));
                    }
                }
            }
            other => {
                return Err(ModelError::UnsupportedStyle(format!(
                    "unexpected top-level xs:{other}"
                )));
            }
        }
    }

    let model = SchemaModel::from_parts(schema_id, components, content);
    model.validate().map_err(promote_validation)?;
    Ok(model)
}

/// Validation failures on freshly parsed text are reported as parse-level
/// errors; dangling refs keep their own variant.
fn promote_validation(err: ModelError) -> ModelError {
    match err {
        ModelError::DanglingReference { .. } => err,
        ModelError::Invariant(msg) => ModelError::Parse(msg),
        other => other,
    }
}

fn expect_xs(node: &Node, local: &str) -> Result<(), ModelError> {
    if node.tag_name().namespace() == Some(XS_NAMESPACE) && node.tag_name().name() == local {
        Ok(())
    } else {
        Err(ModelError::UnsupportedStyle(format!(
            "expected xs:{local}, found {}",
            node.tag_name().name()
        )))
    }
}

fn xs_local_name<'a>(node: &'a Node) -> Result<&'a str, ModelError> {
    if node.tag_name().namespace() == Some(XS_NAMESPACE) {
        Ok(node.tag_name().name())
    } else {
        Err(ModelError::UnsupportedStyle(format!(
            "non-schema element <{}>",
            node.tag_name().name()
        )))
    }
}

fn declaration_name(node: &Node) -> Result<String, ModelError> {
    let name = node.attribute("name").ok_or_else(|| {
        ModelError::UnsupportedStyle(format!(
            "top-level xs:{} without a name attribute",
            node.tag_name().name()
        ))
    })?;
    if !is_ncname(name) {
        return Err(ModelError::Parse(format!(
            "\"{name}\" is not a valid declaration name"
        )));
    }
    Ok(name.to_string())
}

fn named_typed_declaration(node: &Node) -> Result<(String, String), ModelError> {
    let name = declaration_name(node)?;
    if node.children().any(|c| c.is_element()) {
        return Err(ModelError::UnsupportedStyle(format!(
            "attribute {name} must use a built-in type, not nested content"
        )));
    }
    let raw = node.attribute("type").ok_or_else(|| {
        ModelError::UnsupportedStyle(format!("attribute {name} lacks a type attribute"))
    })?;
    Ok((name, builtin_type(node, raw)?))
}

/// Resolves `xs:NAME` type references to the built-in local name.
fn builtin_type(node: &Node, raw: &str) -> Result<String, ModelError> {
    let (prefix, local) = match raw.split_once(':') {
        Some((p, l)) => (Some(p), l),
        None => (None, raw),
    };
    let ns = node.lookup_namespace_uri(prefix);
    if ns != Some(XS_NAMESPACE) {
        return Err(ModelError::UnsupportedStyle(format!(
            "type \"{raw}\" does not name an XML Schema built-in"
        )));
    }
    if !is_ncname(local) {
        return Err(ModelError::Parse(format!("invalid type name \"{raw}\"")));
    }
    Ok(local.to_string())
}

/// The immediate anonymous complexType wrapper, if present.
fn complex_type_child<'a, 'input>(
    node: &'a Node<'a, 'input>,
) -> Result<Option<Node<'a, 'input>>, ModelError> {
    let mut found = None;
    for child in node.children().filter(|c| c.is_element()) {
        if xs_local_name(&child)? == "complexType" {
            if child.attribute("name").is_some() {
                return Err(ModelError::UnsupportedStyle(
                    "named complexType definitions are not supported".into(),
                ));
            }
            if found.is_some() {
                return Err(ModelError::Parse(
                    "element with more than one complexType child".into(),
                ));
            }
            found = Some(child);
        } else {
            return Err(ModelError::UnsupportedStyle(format!(
                "unexpected xs:{} inside an element declaration",
                child.tag_name().name()
            )));
        }
    }
    Ok(found)
}

fn parse_complex_type(ct: &Node, owner: &str) -> Result<ComplexContent, ModelError> {
    let mut model = ComplexContent::default();
    let mut seen_group = false;
    for child in ct.children().filter(|c| c.is_element()) {
        match xs_local_name(&child)? {
            group @ ("sequence" | "all") => {
                if seen_group {
                    return Err(ModelError::UnsupportedStyle(format!(
                        "{owner}: more than one content group"
                    )));
                }
                seen_group = true;
                model.compositor = if group == "all" {
                    Compositor::All
                } else {
                    Compositor::Sequence
                };
                for item in child.children().filter(|c| c.is_element()) {
                    expect_xs(&item, "element").map_err(|_| {
                        ModelError::UnsupportedStyle(format!(
                            "{owner}: content groups may only hold element refs"
                        ))
                    })?;
                    model.children.push(parse_child_ref(&item, owner)?);
                }
            }
            "attribute" => {
                model.attributes.push(parse_attribute_use(&child, owner)?);
            }
            other => {
                return Err(ModelError::UnsupportedStyle(format!(
                    "{owner}: unsupported xs:{other} inside complexType"
                )));
            }
        }
    }
    Ok(model)
}

fn parse_child_ref(node: &Node, owner: &str) -> Result<ChildRef, ModelError> {
    if node.attribute("name").is_some() {
        return Err(ModelError::UnsupportedStyle(format!(
            "{owner}: inline element declaration; only refs are supported here"
        )));
    }
    let target = ref_target(node, owner)?;
    let min_occurs = match node.attribute("minOccurs") {
        None => 1,
        Some(raw) => raw
            .parse::<u32>()
            .map_err(|_| ModelError::Parse(format!("{owner}: invalid minOccurs \"{raw}\"")))?,
    };
    let max_occurs = match node.attribute("maxOccurs") {
        None => MaxOccurs::Bounded(1),
        Some("unbounded") => MaxOccurs::Unbounded,
        Some(raw) => {
            let n = raw
                .parse::<u32>()
                .map_err(|_| ModelError::Parse(format!("{owner}: invalid maxOccurs \"{raw}\"")))?;
            if n == 0 {
                return Err(ModelError::Parse(format!(
                    "{owner}: maxOccurs must be positive"
                )));
            }
            MaxOccurs::Bounded(n)
        }
    };
    if let MaxOccurs::Bounded(max) = max_occurs {
        if min_occurs > max {
            return Err(ModelError::Parse(format!(
                "{owner}: minOccurs {min_occurs} exceeds maxOccurs {max} on {target}"
            )));
        }
    }
    Ok(ChildRef {
        target,
        min_occurs,
        max_occurs,
    })
}

fn parse_attribute_use(node: &Node, owner: &str) -> Result<AttributeUse, ModelError> {
    if node.attribute("name").is_some() {
        return Err(ModelError::UnsupportedStyle(format!(
            "{owner}: inline attribute declaration; only refs are supported here"
        )));
    }
    let target = ref_target(node, owner)?;
    let required = match node.attribute("use") {
        None | Some("optional") => false,
        Some("required") => true,
        Some(other) => {
            return Err(ModelError::UnsupportedStyle(format!(
                "{owner}: unsupported use=\"{other}\""
            )));
        }
    };
    Ok(AttributeUse { target, required })
}

fn ref_target(node: &Node, owner: &str) -> Result<String, ModelError> {
    let raw = node
        .attribute("ref")
        .ok_or_else(|| ModelError::UnsupportedStyle(format!("{owner}: ref attribute missing")))?;
    if !is_ncname(raw) {
        return Err(ModelError::Parse(format!(
            "{owner}: \"{raw}\" is not a valid reference"
        )));
    }
    Ok(raw.to_string())
}
