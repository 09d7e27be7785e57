//! Shared fixtures, independent oracles and random generators for the
//! integration suites. Oracles stay deliberately brute-force so they cannot
//! share a failure mode with the implementations they check.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use xsdmerge::model::{
    AttributeUse, ChildRef, ComplexContent, MaxOccurs, SchemaModel, Typology, XComponent,
};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .canonicalize()
        .expect("fixtures directory exists")
}

pub fn fixture(name: &str) -> String {
    let path = fixtures_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("cannot read {path:?}: {e}"))
}

pub fn s1() -> SchemaModel {
    xsdmerge::parse_schema(&fixture("s1.xsd"), "s1").unwrap()
}

pub fn s2() -> SchemaModel {
    xsdmerge::parse_schema(&fixture("s2.xsd"), "s2").unwrap()
}

pub fn thesaurus() -> xsdmerge::Thesaurus {
    xsdmerge::Thesaurus::parse(&fixture("thesaurus.tsv")).unwrap()
}

/// Maximum matching size by exhaustive recursion over the arc list.
pub fn brute_force_max_cardinality(arcs: &[(usize, usize)]) -> usize {
    fn go(arcs: &[(usize, usize)], k: usize, used_l: &mut Vec<usize>, used_r: &mut Vec<usize>) -> usize {
        if k == arcs.len() {
            return 0;
        }
        let skip = go(arcs, k + 1, used_l, used_r);
        let (i, j) = arcs[k];
        if used_l.contains(&i) || used_r.contains(&j) {
            return skip;
        }
        used_l.push(i);
        used_r.push(j);
        let take = 1 + go(arcs, k + 1, used_l, used_r);
        used_l.pop();
        used_r.pop();
        take.max(skip)
    }
    go(arcs, 0, &mut Vec::new(), &mut Vec::new())
}

/// Maximum matching weight by exhaustive recursion over the arc list.
pub fn brute_force_max_weight(arcs: &[(usize, usize, BigRational)]) -> BigRational {
    fn go(
        arcs: &[(usize, usize, BigRational)],
        k: usize,
        used_l: &mut Vec<usize>,
        used_r: &mut Vec<usize>,
    ) -> BigRational {
        if k == arcs.len() {
            return BigRational::zero();
        }
        let skip = go(arcs, k + 1, used_l, used_r);
        let (i, j, w) = &arcs[k];
        if used_l.contains(i) || used_r.contains(j) {
            return skip;
        }
        used_l.push(*i);
        used_r.push(*j);
        let take = go(arcs, k + 1, used_l, used_r) + w;
        used_l.pop();
        used_r.pop();
        take.max(skip)
    }
    go(arcs, 0, &mut Vec::new(), &mut Vec::new())
}

/// Minimum path cost from `s` to `t` over all simple paths, by depth-first
/// enumeration. `None` when `t` is unreachable. Cost of the empty path
/// (s == t) is 0.
pub fn min_simple_path_cost(
    n: usize,
    arcs: &[(usize, usize, u8)],
    s: usize,
    t: usize,
) -> Option<u32> {
    if s == t {
        return Some(0);
    }
    let mut adjacency = vec![Vec::new(); n];
    for &(a, b, w) in arcs {
        adjacency[a].push((b, w as u32));
    }
    fn dfs(
        adjacency: &[Vec<(usize, u32)>],
        here: usize,
        t: usize,
        visited: &mut Vec<bool>,
        cost: u32,
        best: &mut Option<u32>,
    ) {
        if here == t {
            *best = Some(best.map_or(cost, |b| b.min(cost)));
            return;
        }
        for &(next, w) in &adjacency[here] {
            if !visited[next] {
                visited[next] = true;
                dfs(adjacency, next, t, visited, cost + w, best);
                visited[next] = false;
            }
        }
    }
    let mut visited = vec![false; n];
    visited[s] = true;
    let mut best = None;
    dfs(&adjacency, s, t, &mut visited, 0, &mut best);
    best
}

const DATA_TYPES: &[&str] = &["string", "integer", "date", "int", "byte", "ID", "IDREF"];

/// A random valid referenced-style schema with at most 15 components:
/// the first complex element is the root, every other complex element is
/// referenced by an earlier one.
pub fn random_schema(rng: &mut ChaCha8Rng, id: &str) -> SchemaModel {
    let n_attr = rng.gen_range(0..=4usize);
    let n_simple = rng.gen_range(0..=5usize);
    let n_complex = rng.gen_range(1..=5usize);

    let mut components = Vec::new();
    let attr_names: Vec<String> = (0..n_attr).map(|i| format!("a{i}")).collect();
    let simple_names: Vec<String> = (0..n_simple).map(|i| format!("s{i}")).collect();
    let complex_names: Vec<String> = (0..n_complex).map(|i| format!("c{i}")).collect();
    for name in &attr_names {
        let dt = DATA_TYPES[rng.gen_range(0..DATA_TYPES.len())];
        components.push(XComponent::new(id, name, Typology::Attribute, Some(dt.into())));
    }
    for name in &simple_names {
        let dt = DATA_TYPES[rng.gen_range(0..5)];
        components.push(XComponent::new(
            id,
            name,
            Typology::SimpleElement,
            Some(dt.into()),
        ));
    }

    let mut content: BTreeMap<String, ComplexContent> = BTreeMap::new();
    for name in &complex_names {
        content.insert(name.clone(), ComplexContent::default());
    }
    let random_occurs = |rng: &mut ChaCha8Rng| {
        let min = rng.gen_range(0..=2u32);
        let max = if rng.gen_bool(0.3) {
            MaxOccurs::Unbounded
        } else {
            MaxOccurs::Bounded(rng.gen_range(min.max(1)..=min.max(1) + 2))
        };
        (min, max)
    };
    // keep the reference structure a DAG rooted at c0
    for i in 1..n_complex {
        let parent = complex_names[rng.gen_range(0..i)].clone();
        let (min, max) = random_occurs(rng);
        content
            .get_mut(&parent)
            .unwrap()
            .children
            .push(ChildRef::with_occurs(complex_names[i].clone(), min, max));
    }
    for name in &complex_names {
        let c = content.get_mut(name).unwrap();
        for s in &simple_names {
            if rng.gen_bool(0.4) {
                let (min, max) = random_occurs(rng);
                c.children.push(ChildRef::with_occurs(s.clone(), min, max));
            }
        }
        for a in &attr_names {
            if rng.gen_bool(0.4) {
                c.attributes.push(AttributeUse::new(a.clone(), rng.gen_bool(0.5)));
            }
        }
    }
    // root written last, matching the canonical serialization order
    for name in complex_names.iter().skip(1) {
        components.push(XComponent::new(id, name, Typology::ComplexElement, None));
    }
    components.push(XComponent::new(
        id,
        &complex_names[0],
        Typology::ComplexElement,
        None,
    ));

    let model = SchemaModel::from_parts(id, components, content);
    model.validate().expect("generator builds valid schemas");
    model
}

/// Random 0/1-cost digraph over complex-element nodes (no self arcs).
pub fn random_digraph(
    rng: &mut ChaCha8Rng,
    max_nodes: usize,
) -> (Vec<XComponent>, Vec<(usize, usize, u8)>) {
    let n = rng.gen_range(2..=max_nodes);
    let nodes: Vec<XComponent> = (0..n)
        .map(|i| XComponent::new("g", format!("n{i}"), Typology::ComplexElement, None))
        .collect();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(0.18) {
                arcs.push((i, j, rng.gen_range(0..=1u8)));
            }
        }
    }
    (nodes, arcs)
}

/// Random bipartite graph with rational weights in (0, 3].
pub fn random_weighted_bipartite(
    rng: &mut ChaCha8Rng,
    max_side: usize,
) -> (usize, usize, Vec<(usize, usize, BigRational)>) {
    let left = rng.gen_range(1..=max_side);
    let right = rng.gen_range(1..=max_side);
    let mut arcs = Vec::new();
    for i in 0..left {
        for j in 0..right {
            if rng.gen_bool(0.5) {
                let num = rng.gen_range(1..=21i64);
                arcs.push((i, j, BigRational::new(num.into(), 7.into())));
            }
        }
    }
    (left, right, arcs)
}
