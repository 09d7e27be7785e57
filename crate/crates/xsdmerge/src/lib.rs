//! Matching and integration of referenced-style XML Schemas at a chosen
//! severity level.
//!
//! The pipeline: parse both schemas into x-component models, build the
//! XS-Graphs (optionally enriched with IDREF/IDREFS evidence from instance
//! documents), extract severity-parametric synonymies and homonymies by
//! comparing neighborhoods through bipartite matching, filter them into
//! one-to-one Merge/Rename Dictionaries, and fuse everything into a single
//! global schema.

pub mod cli;
pub mod datatype;
pub mod dictionaries;
pub mod eval;
pub mod graph;
pub mod instance;
pub mod interscheme;
pub mod matching;
pub mod model;
pub mod parse;
pub mod serialize;
pub mod thesaurus;

mod integrate;

pub use datatype::merge_type;
pub use dictionaries::{build_md, build_rd, build_simg, MergeDictionary, RenameDictionary};
pub use graph::{proximity, Cost, Proximity, XsGraph};
pub use instance::{resolve_idrefs, RefTargetMap};
pub use integrate::{
    integrate, merge_complex, AuditEntry, Disposition, IntegrateError, IntegrateOptions,
    IntegrationOutcome,
};
pub use interscheme::{
    extract_properties, homonymous, max_severity, phi, synonymous, PropertySet,
};
pub use model::{ModelError, SchemaModel, Typology, XComponent};
pub use parse::parse_schema;
pub use serialize::serialize_schema;
pub use thesaurus::Thesaurus;
