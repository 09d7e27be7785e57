//! Correctness / completeness scoring of extracted properties against a
//! human gold standard. Correctness is the fraction of returned properties
//! the gold set confirms; completeness is the fraction of gold properties
//! the tool returned. Property identity is the unordered, case-insensitive
//! name pair plus its kind.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interscheme::{PairDoc, PropertySetDoc};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("gold standard contains no properties")]
    EmptyGold,
}

/// Gold property file: the expected synonymies and homonymies as name pairs.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct GoldStandard {
    #[serde(default)]
    pub synonymies: Vec<PairDoc>,
    #[serde(default)]
    pub homonymies: Vec<PairDoc>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub correctness: f64,
    pub completeness: f64,
    /// Set when the returned property set was empty and correctness
    /// defaulted to 1.00.
    pub empty_returned: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Synonymy,
    Homonymy,
}

fn keys(kind: Kind, pairs: &[PairDoc]) -> impl Iterator<Item = (Kind, String, String)> + '_ {
    pairs.iter().map(move |p| {
        let (a, b) = (p.left.to_lowercase(), p.right.to_lowercase());
        if a <= b {
            (kind, a, b)
        } else {
            (kind, b, a)
        }
    })
}

/// Scores `returned` against `gold`.
pub fn evaluate(returned: &PropertySetDoc, gold: &GoldStandard) -> Result<Metrics, EvalError> {
    let gold_set: BTreeSet<(Kind, String, String)> = keys(Kind::Synonymy, &gold.synonymies)
        .chain(keys(Kind::Homonymy, &gold.homonymies))
        .collect();
    if gold_set.is_empty() {
        return Err(EvalError::EmptyGold);
    }
    let returned_pairs: Vec<PairDoc> = returned
        .synonymies
        .iter()
        .map(|s| PairDoc {
            left: s.left.clone(),
            right: s.right.clone(),
        })
        .collect();
    let returned_set: BTreeSet<(Kind, String, String)> = keys(Kind::Synonymy, &returned_pairs)
        .chain(keys(Kind::Homonymy, &returned.homonymies))
        .collect();

    let agreed = returned_set.intersection(&gold_set).count() as f64;
    let empty_returned = returned_set.is_empty();
    let correctness = if empty_returned {
        1.0
    } else {
        agreed / returned_set.len() as f64
    };
    let completeness = agreed / gold_set.len() as f64;
    Ok(Metrics {
        correctness,
        completeness,
        empty_returned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(l: &str, r: &str) -> PairDoc {
        PairDoc {
            left: l.to_string(),
            right: r.to_string(),
        }
    }

    fn doc(synonymies: Vec<PairDoc>) -> PropertySetDoc {
        PropertySetDoc {
            severity: 0,
            synonymies: synonymies
                .into_iter()
                .map(|p| crate::interscheme::SynonymyDoc {
                    left: p.left,
                    right: p.right,
                    phi: vec!["1".to_string()],
                })
                .collect(),
            homonymies: vec![],
        }
    }

    #[test]
    fn perfect_agreement_scores_one_one() {
        let returned = doc(vec![pair("a", "b"), pair("c", "d")]);
        let gold = GoldStandard {
            synonymies: vec![pair("a", "b"), pair("c", "d")],
            homonymies: vec![],
        };
        let m = evaluate(&returned, &gold).unwrap();
        assert_eq!(m.correctness, 1.0);
        assert_eq!(m.completeness, 1.0);
    }

    #[test]
    fn eight_of_ten_gold_without_spurious() {
        let gold = GoldStandard {
            synonymies: (0..10).map(|i| pair(&format!("g{i}"), "x")).collect(),
            homonymies: vec![],
        };
        let returned = doc((0..8).map(|i| pair(&format!("g{i}"), "x")).collect());
        let m = evaluate(&returned, &gold).unwrap();
        assert_eq!(m.correctness, 1.0);
        assert!((m.completeness - 0.8).abs() < 1e-12);
    }

    #[test]
    fn nine_overlap_of_ten_each() {
        let gold = GoldStandard {
            synonymies: (0..10).map(|i| pair(&format!("g{i}"), "x")).collect(),
            homonymies: vec![],
        };
        let mut returned_pairs: Vec<PairDoc> =
            (0..9).map(|i| pair(&format!("g{i}"), "x")).collect();
        returned_pairs.push(pair("spurious", "x"));
        let returned = doc(returned_pairs);
        let m = evaluate(&returned, &gold).unwrap();
        assert!((m.correctness - 0.9).abs() < 1e-12);
        assert!((m.completeness - 0.9).abs() < 1e-12);
    }

    #[test]
    fn identity_is_unordered_and_case_insensitive() {
        let returned = doc(vec![pair("Client", "customer")]);
        let gold = GoldStandard {
            synonymies: vec![pair("CUSTOMER", "client")],
            homonymies: vec![],
        };
        let m = evaluate(&returned, &gold).unwrap();
        assert_eq!(m.correctness, 1.0);
    }

    #[test]
    fn kinds_are_distinguished() {
        let mut returned = doc(vec![]);
        returned.homonymies.push(pair("code", "code"));
        let gold = GoldStandard {
            synonymies: vec![pair("code", "code")],
            homonymies: vec![],
        };
        let m = evaluate(&returned, &gold).unwrap();
        assert_eq!(m.correctness, 0.0);
        assert_eq!(m.completeness, 0.0);
    }

    #[test]
    fn empty_gold_is_an_error() {
        let returned = doc(vec![pair("a", "b")]);
        assert!(matches!(
            evaluate(&returned, &GoldStandard::default()),
            Err(EvalError::EmptyGold)
        ));
    }

    #[test]
    fn empty_returned_defaults_correctness_to_one_with_flag() {
        let returned = doc(vec![]);
        let gold = GoldStandard {
            synonymies: vec![pair("a", "b")],
            homonymies: vec![],
        };
        let m = evaluate(&returned, &gold).unwrap();
        assert!(m.empty_returned);
        assert_eq!(m.correctness, 1.0);
        assert_eq!(m.completeness, 0.0);
    }
}
