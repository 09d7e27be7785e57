//! Flat-file thesaurus of lexical synonym pairs.
//!
//! One pair per line, tab-separated; `#` starts a comment. Terms are
//! lowercased and trimmed, the stored relation is the symmetric closure of
//! the listed pairs, and identical names always count as synonyms without
//! being stored. No transitive closure is taken.

use std::collections::BTreeSet;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThesaurusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected exactly one tab separating two terms")]
    Format { line: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Thesaurus {
    pairs: BTreeSet<(String, String)>,
}

impl Thesaurus {
    /// A thesaurus relating only identical names.
    pub fn empty() -> Self {
        Thesaurus::default()
    }

    pub fn load(path: &Path) -> Result<Thesaurus, ThesaurusError> {
        let text = std::fs::read_to_string(path).map_err(|source| ThesaurusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Thesaurus::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Thesaurus, ThesaurusError> {
        let mut pairs = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (a, b) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => (a.trim(), b.trim()),
                _ => return Err(ThesaurusError::Format { line: i + 1 }),
            };
            if a.is_empty() || b.is_empty() {
                return Err(ThesaurusError::Format { line: i + 1 });
            }
            let (a, b) = (a.to_lowercase(), b.to_lowercase());
            pairs.insert((b.clone(), a.clone()));
            pairs.insert((a, b));
        }
        Ok(Thesaurus { pairs })
    }

    pub fn from_pairs<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str)>) -> Thesaurus {
        let mut pairs = BTreeSet::new();
        for (a, b) in entries {
            let (a, b) = (a.to_lowercase(), b.to_lowercase());
            pairs.insert((b.clone(), a.clone()));
            pairs.insert((a, b));
        }
        Thesaurus { pairs }
    }

    /// True iff the names are equal case-insensitively or the pair is listed.
    pub fn lexical_synonym(&self, a: &str, b: &str) -> bool {
        let (a, b) = (a.to_lowercase(), b.to_lowercase());
        a == b || self.pairs.contains(&(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}
