//! Built-in data-type compatibility and the most-general-type rule used when
//! declarations merge. Compatibility follows the usual widening rules of
//! typed programming languages: the integer chain widens byte through
//! decimal, float widens to double, string-kind types widen to string, and
//! the identifier types (ID, IDREF, IDREFS) match only themselves.

use thiserror::Error;

#[derive(Debug, Error)]
#[error("incompatible data types: {left} and {right}")]
pub struct IncompatibleTypes {
    pub left: String,
    pub right: String,
}

/// Widening chains, least general first. Types not listed here are
/// compatible only with themselves.
const CHAINS: &[&[&str]] = &[
    &["byte", "short", "int", "long", "integer", "decimal"],
    &["float", "double"],
    &["normalizedString", "token", "string"],
];

fn chain_position(name: &str) -> Option<(usize, usize)> {
    CHAINS.iter().enumerate().find_map(|(c, chain)| {
        chain
            .iter()
            .position(|t| *t == name)
            .map(|p| (c, p))
    })
}

/// True when a value of either type can be treated as a value of the other's
/// most general type.
pub fn compatible(left: &str, right: &str) -> bool {
    if left == right {
        return true;
    }
    match (chain_position(left), chain_position(right)) {
        (Some((c1, _)), Some((c2, _))) => c1 == c2,
        _ => false,
    }
}

/// The most general of two compatible types.
pub fn merge_type(left: &str, right: &str) -> Result<String, IncompatibleTypes> {
    if left == right {
        return Ok(left.to_string());
    }
    match (chain_position(left), chain_position(right)) {
        (Some((c1, p1)), Some((c2, p2))) if c1 == c2 => {
            Ok(CHAINS[c1][p1.max(p2)].to_string())
        }
        _ => Err(IncompatibleTypes {
            left: left.to_string(),
            right: right.to_string(),
        }),
    }
}
