//! Serializer producing referenced-style schema text.
//!
//! Declarations are written grouped the way the sample schemas lay them out:
//! attributes, simple elements, complex elements, root last. Re-parsing the
//! output yields a model structurally equal to the input.

use std::fmt::Write as _;

use crate::model::{Compositor, MaxOccurs, ModelError, SchemaModel, Typology, XComponent};
use crate::parse::XS_NAMESPACE;

/// Renders `model` as schema text. Fails with `Serialize` when a model
/// invariant is violated.
pub fn serialize_schema(model: &SchemaModel) -> Result<String, ModelError> {
    model
        .validate()
        .map_err(|e| ModelError::Serialize(e.to_string()))?;

    let root_name = match model.root_element() {
        Ok(root) => Some(root.name.clone()),
        // A missing or ambiguous root is not a serialization blocker; the
        // root comment is simply dropped and groups are written in order.
        Err(_) => None,
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<xs:schema xmlns:xs=\"{XS_NAMESPACE}\">");

    let attributes: Vec<&XComponent> = model
        .xcomponents()
        .iter()
        .filter(|c| c.typology == Typology::Attribute)
        .collect();
    let simple: Vec<&XComponent> = model
        .xcomponents()
        .iter()
        .filter(|c| c.typology == Typology::SimpleElement)
        .collect();
    let complex: Vec<&XComponent> = model
        .complex_elements()
        .filter(|c| Some(&c.name) != root_name.as_ref())
        .collect();

    if !attributes.is_empty() {
        out.push_str("    <!-- Definition of attributes -->\n");
        for a in attributes {
            let _ = writeln!(
                out,
                "    <xs:attribute name=\"{}\" type=\"xs:{}\"/>",
                a.name,
                a.data_type.as_deref().unwrap_or_default()
            );
        }
    }
    if !simple.is_empty() {
        out.push_str("    <!-- Definition of simple elements -->\n");
        for s in simple {
            let _ = writeln!(
                out,
                "    <xs:element name=\"{}\" type=\"xs:{}\"/>",
                s.name,
                s.data_type.as_deref().unwrap_or_default()
            );
        }
    }
    if !complex.is_empty() {
        out.push_str("    <!-- Definition of complex elements -->\n");
        for e in complex {
            write_complex(&mut out, model, &e.name);
        }
    }
    if let Some(root) = &root_name {
        out.push_str("    <!-- Definition of root element -->\n");
        write_complex(&mut out, model, root);
    }
    out.push_str("</xs:schema>\n");
    Ok(out)
}

fn write_complex(out: &mut String, model: &SchemaModel, name: &str) {
    let children = model.child_refs(name);
    let attributes = model.attribute_uses(name);
    let _ = writeln!(out, "    <xs:element name=\"{name}\">");
    if children.is_empty() && attributes.is_empty() {
        out.push_str("        <xs:complexType/>\n");
    } else {
        out.push_str("        <xs:complexType>\n");
        if !children.is_empty() {
            let group = match model
                .content_of(name)
                .map(|c| c.compositor)
                .unwrap_or_default()
            {
                Compositor::Sequence => "sequence",
                Compositor::All => "all",
            };
            let _ = writeln!(out, "            <xs:{group}>");
            for r in children {
                let mut line = format!("                <xs:element ref=\"{}\"", r.target);
                if r.min_occurs != 1 {
                    let _ = write!(line, " minOccurs=\"{}\"", r.min_occurs);
                }
                if r.max_occurs != MaxOccurs::Bounded(1) {
                    let _ = write!(line, " maxOccurs=\"{}\"", r.max_occurs);
                }
                line.push_str("/>\n");
                out.push_str(&line);
            }
            let _ = writeln!(out, "            </xs:{group}>");
        }
        for u in attributes {
            let use_part = if u.required { " use=\"required\"" } else { "" };
            let _ = writeln!(
                out,
                "            <xs:attribute ref=\"{}\"{use_part}/>",
                u.target
            );
        }
        out.push_str("        </xs:complexType>\n");
    }
    out.push_str("    </xs:element>\n");
}
