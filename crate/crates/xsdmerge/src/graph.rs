//! The XS-Graph: one node per x-component, one arc per `near` pair, arc cost
//! 0 for `veryclose` pairs and 1 for `close` pairs. Connection costs are
//! minimum path costs computed with per-source 0/1 breadth-first search and
//! memoized per row.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::instance::RefTargetMap;
use crate::model::{SchemaModel, Typology, XComponent};

/// Strength of the relationship between two x-components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proximity {
    VeryClose,
    Close,
    Reachable,
    Unreachable,
}

/// A connection cost: a non-negative integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cost {
    Finite(u32),
    Infinite,
}

impl Cost {
    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    fn plus(self, step: u32) -> Cost {
        match self {
            Cost::Finite(v) => Cost::Finite(v + step),
            Cost::Infinite => Cost::Infinite,
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Cost::Infinite, Cost::Infinite) => std::cmp::Ordering::Equal,
            (Cost::Infinite, Cost::Finite(_)) => std::cmp::Ordering::Greater,
            (Cost::Finite(_), Cost::Infinite) => std::cmp::Ordering::Less,
            (Cost::Finite(a), Cost::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown component: {0}")]
    UnknownComponent(String),
}

/// A directed arc with its 0/1 cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arc {
    pub source: usize,
    pub target: usize,
    pub cost: u8,
}

/// Immutable after construction; connection-cost rows are memoized behind
/// `OnceLock`, so concurrent readers are fine.
#[derive(Debug)]
pub struct XsGraph {
    nodes: Vec<XComponent>,
    arcs: Vec<Arc>,
    adjacency: Vec<Vec<(usize, u8)>>,
    index: BTreeMap<(String, Typology), usize>,
    rows: Vec<OnceLock<Box<[Cost]>>>,
}

impl XsGraph {
    /// Builds the XS-Graph for `model`, using `refmap` for IDREF/IDREFS
    /// evidence. Arcs are ordered by (source name, target name).
    pub fn build(model: &SchemaModel, refmap: &RefTargetMap) -> XsGraph {
        let nodes: Vec<XComponent> = model.xcomponents().to_vec();
        let position: BTreeMap<(&str, Typology), usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.name.as_str(), c.typology), i))
            .collect();

        let mut arc_set: BTreeSet<(String, String, u8, usize, usize)> = BTreeSet::new();
        for source in model.complex_elements() {
            let s_idx = position[&(source.name.as_str(), Typology::ComplexElement)];
            // Attributes and simple sub-elements are veryclose (cost 0),
            // complex sub-elements are close (cost 1).
            for u in model.attribute_uses(&source.name) {
                if let Some(&t_idx) = position.get(&(u.target.as_str(), Typology::Attribute)) {
                    arc_set.insert((source.name.clone(), u.target.clone(), 0, s_idx, t_idx));
                }
            }
            for r in model.child_refs(&source.name) {
                if let Some(&t_idx) = position.get(&(r.target.as_str(), Typology::SimpleElement)) {
                    arc_set.insert((source.name.clone(), r.target.clone(), 0, s_idx, t_idx));
                } else if let Some(&t_idx) =
                    position.get(&(r.target.as_str(), Typology::ComplexElement))
                {
                    if t_idx != s_idx {
                        arc_set.insert((source.name.clone(), r.target.clone(), 1, s_idx, t_idx));
                    }
                }
            }
            // IDREF/IDREFS attribute of the source referring to an element.
            for u in model.attribute_uses(&source.name) {
                let is_ref_attr = model
                    .attribute(&u.target)
                    .and_then(|a| a.data_type.as_deref())
                    .map(|t| t == "IDREF" || t == "IDREFS")
                    .unwrap_or(false);
                if !is_ref_attr {
                    continue;
                }
                for target in refmap.targets_of(&u.target) {
                    if let Some(&t_idx) = position.get(&(target, Typology::ComplexElement)) {
                        if t_idx != s_idx {
                            arc_set.insert((
                                source.name.clone(),
                                target.to_string(),
                                1,
                                s_idx,
                                t_idx,
                            ));
                        }
                    }
                }
            }
        }

        // A pair can qualify through several clauses; keep the cheapest arc.
        let mut cheapest: BTreeMap<(usize, usize), u8> = BTreeMap::new();
        for (_, _, cost, s, t) in &arc_set {
            let entry = cheapest.entry((*s, *t)).or_insert(*cost);
            *entry = (*entry).min(*cost);
        }
        let arcs: Vec<Arc> = arc_set
            .iter()
            .filter(|(_, _, cost, s, t)| cheapest[&(*s, *t)] == *cost)
            .map(|(_, _, cost, s, t)| Arc {
                source: *s,
                target: *t,
                cost: *cost,
            })
            .collect();

        XsGraph::from_nodes_and_arcs(nodes, arcs)
    }

    /// Builds a graph directly from nodes and 0/1-cost arcs. Intended for
    /// synthetic graphs in tests and experiments.
    pub fn from_arcs(nodes: Vec<XComponent>, arcs: Vec<(usize, usize, u8)>) -> XsGraph {
        let arcs = arcs
            .into_iter()
            .map(|(source, target, cost)| Arc {
                source,
                target,
                cost: cost.min(1),
            })
            .collect();
        XsGraph::from_nodes_and_arcs(nodes, arcs)
    }

    fn from_nodes_and_arcs(nodes: Vec<XComponent>, arcs: Vec<Arc>) -> XsGraph {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for arc in &arcs {
            adjacency[arc.source].push((arc.target, arc.cost));
        }
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.name.clone(), c.typology), i))
            .collect();
        let rows = (0..nodes.len()).map(|_| OnceLock::new()).collect();
        XsGraph {
            nodes,
            arcs,
            adjacency,
            index,
            rows,
        }
    }

    pub fn nodes(&self) -> &[XComponent] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn node_index(&self, x: &XComponent) -> Result<usize, GraphError> {
        self.index
            .get(&(x.name.clone(), x.typology))
            .copied()
            .ok_or_else(|| GraphError::UnknownComponent(x.name.clone()))
    }

    /// Minimum-cost row from `src`, one 0/1 BFS per source, memoized.
    fn cost_row(&self, src: usize) -> &[Cost] {
        self.rows[src].get_or_init(|| {
            let mut dist = vec![Cost::Infinite; self.nodes.len()];
            dist[src] = Cost::Finite(0);
            let mut deque = VecDeque::new();
            deque.push_back(src);
            while let Some(u) = deque.pop_front() {
                let du = dist[u];
                for &(v, w) in &self.adjacency[u] {
                    let nd = du.plus(w as u32);
                    if nd < dist[v] {
                        dist[v] = nd;
                        if w == 0 {
                            deque.push_front(v);
                        } else {
                            deque.push_back(v);
                        }
                    }
                }
            }
            dist.into_boxed_slice()
        })
    }

    /// Connection cost CC(x_s, x_t): 0 when veryclose, 1 when close,
    /// otherwise the minimum total arc cost over directed paths, infinity
    /// when unreachable.
    pub fn connection_cost(&self, x_s: &XComponent, x_t: &XComponent) -> Result<Cost, GraphError> {
        let s = self.node_index(x_s)?;
        let t = self.node_index(x_t)?;
        Ok(self.cost_row(s)[t])
    }

    /// The j-th neighborhood of `x`: every component with CC(x, ·) <= j,
    /// always including `x` itself.
    pub fn neighborhood(
        &self,
        x: &XComponent,
        j: u32,
    ) -> Result<BTreeSet<&XComponent>, GraphError> {
        let s = self.node_index(x)?;
        let row = self.cost_row(s);
        Ok(row
            .iter()
            .enumerate()
            .filter(|(_, c)| **c <= Cost::Finite(j))
            .map(|(i, _)| &self.nodes[i])
            .collect())
    }

    pub fn complex_element_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|c| c.typology == Typology::ComplexElement)
            .count()
    }
}

/// Evaluates the proximity predicates between two components of `model`.
pub fn proximity(
    model: &SchemaModel,
    refmap: &RefTargetMap,
    x_s: &XComponent,
    x_t: &XComponent,
) -> Result<Proximity, GraphError> {
    let graph = XsGraph::build(model, refmap);
    let s = graph.node_index(x_s)?;
    let t = graph.node_index(x_t)?;
    if s == t {
        return Ok(Proximity::VeryClose);
    }
    if let Some(&(_, cost)) = graph.adjacency[s].iter().find(|(v, _)| *v == t) {
        return Ok(if cost == 0 {
            Proximity::VeryClose
        } else {
            Proximity::Close
        });
    }
    match graph.cost_row(s)[t] {
        Cost::Finite(_) => Ok(Proximity::Reachable),
        Cost::Infinite => Ok(Proximity::Unreachable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::resolve_idrefs;
    use crate::parse::parse_schema;

    const S1: &str = include_str!("../../../fixtures/s1.xsd");
    const S2: &str = include_str!("../../../fixtures/s2.xsd");
    const SALES: &str = include_str!("../../../fixtures/instances/s1_sales.xml");

    fn s1() -> SchemaModel {
        parse_schema(S1, "s1").unwrap()
    }

    fn names(set: &BTreeSet<&XComponent>) -> Vec<String> {
        set.iter().map(|c| c.name.clone()).collect()
    }

    #[test]
    fn example_proximities() {
        let model = s1();
        let refmap = RefTargetMap::empty();
        let customer = model.component_by_name("customer").unwrap();
        let first_name = model.component_by_name("firstName").unwrap();
        let music_acq = model.component_by_name("musicAcquirement").unwrap();
        let ssn = model.component_by_name("SSN").unwrap();
        assert_eq!(
            proximity(&model, &refmap, customer, first_name).unwrap(),
            Proximity::VeryClose
        );
        assert_eq!(
            proximity(&model, &refmap, customer, ssn).unwrap(),
            Proximity::VeryClose
        );
        assert_eq!(
            proximity(&model, &refmap, customer, music_acq).unwrap(),
            Proximity::Close
        );
        assert_eq!(
            proximity(&model, &refmap, customer, customer).unwrap(),
            Proximity::VeryClose
        );
        // shop -> customer -> bookAcquirement is a near-chain.
        let shop = model.component_by_name("shop").unwrap();
        let book_acq = model.component_by_name("bookAcquirement").unwrap();
        assert_eq!(
            proximity(&model, &refmap, shop, book_acq).unwrap(),
            Proximity::Reachable
        );
        assert_eq!(
            proximity(&model, &refmap, first_name, customer).unwrap(),
            Proximity::Unreachable
        );
    }

    #[test]
    fn unknown_component_is_an_error() {
        let model = s1();
        let graph = XsGraph::build(&model, &RefTargetMap::empty());
        let ghost = XComponent::new("s2", "ghost", Typology::SimpleElement, Some("string".into()));
        assert!(matches!(
            graph.neighborhood(&ghost, 0),
            Err(GraphError::UnknownComponent(_))
        ));
    }

    #[test]
    fn s1_graph_shape_without_instances() {
        let model = s1();
        let graph = XsGraph::build(&model, &RefTargetMap::empty());
        assert_eq!(graph.nodes().len(), 24);
        let customer = model.component_by_name("customer").unwrap();
        let c = graph.node_index(customer).unwrap();
        let mut zero = 0;
        let mut one = 0;
        for arc in graph.arcs().iter().filter(|a| a.source == c) {
            match arc.cost {
                0 => zero += 1,
                _ => one += 1,
            }
        }
        // SSN + six simple children at cost 0; two complex children at cost 1.
        assert_eq!(zero, 7);
        assert_eq!(one, 2);
    }

    #[test]
    fn idrefs_evidence_adds_close_arcs() {
        let model = s1();
        let refmap = resolve_idrefs(&model, &[SALES]);
        let graph = XsGraph::build(&model, &refmap);
        let book_acq = model.component_by_name("bookAcquirement").unwrap();
        let book = model.component_by_name("book").unwrap();
        let cost = graph.connection_cost(book_acq, book).unwrap();
        assert_eq!(cost, Cost::Finite(1));
        let music_acq = model.component_by_name("musicAcquirement").unwrap();
        let music = model.component_by_name("music").unwrap();
        assert_eq!(
            graph.connection_cost(music_acq, music).unwrap(),
            Cost::Finite(1)
        );
    }

    #[test]
    fn neighborhood_of_customer_at_level_zero() {
        let model = s1();
        let graph = XsGraph::build(&model, &RefTargetMap::empty());
        let customer = model.component_by_name("customer").unwrap();
        let n0 = graph.neighborhood(customer, 0).unwrap();
        assert_eq!(
            names(&n0),
            vec![
                "SSN",
                "address",
                "birthDate",
                "customer",
                "firstName",
                "gender",
                "lastName",
                "profession"
            ]
        );
    }

    #[test]
    fn neighborhood_of_client_at_level_zero() {
        let model = parse_schema(S2, "s2").unwrap();
        let graph = XsGraph::build(&model, &RefTargetMap::empty());
        let client = model.component_by_name("client").unwrap();
        let n0 = graph.neighborhood(client, 0).unwrap();
        assert_eq!(
            names(&n0),
            vec![
                "SSN",
                "address",
                "client",
                "email",
                "firstName",
                "lastName",
                "phone"
            ]
        );
    }

    #[test]
    fn attribute_neighborhood_stays_singleton() {
        let model = s1();
        let graph = XsGraph::build(&model, &RefTargetMap::empty());
        let ssn = model.component_by_name("SSN").unwrap();
        for j in [0, 1, 5, 100] {
            let n = graph.neighborhood(ssn, j).unwrap();
            assert_eq!(names(&n), vec!["SSN"]);
        }
    }

    #[test]
    fn connection_cost_examples() {
        let model = s1();
        let graph = XsGraph::build(&model, &RefTargetMap::empty());
        let customer = model.component_by_name("customer").unwrap();
        let first_name = model.component_by_name("firstName").unwrap();
        let date = model.component_by_name("acquirementDate").unwrap();
        assert_eq!(
            graph.connection_cost(customer, first_name).unwrap(),
            Cost::Finite(0)
        );
        assert_eq!(
            graph.connection_cost(customer, date).unwrap(),
            Cost::Finite(1)
        );
        assert_eq!(
            graph.connection_cost(first_name, customer).unwrap(),
            Cost::Infinite
        );
        assert_eq!(
            graph.connection_cost(customer, customer).unwrap(),
            Cost::Finite(0)
        );
    }

    #[test]
    fn neighborhoods_grow_monotonically() {
        let model = s1();
        let graph = XsGraph::build(&model, &RefTargetMap::empty());
        for x in model.xcomponents() {
            let mut previous = graph.neighborhood(x, 0).unwrap();
            for j in 1..6 {
                let next = graph.neighborhood(x, j).unwrap();
                assert!(previous.is_subset(&next), "{} at level {j}", x.name);
                previous = next;
            }
        }
    }

    #[test]
    fn empty_root_schema_has_one_node_and_no_arcs() {
        let model = parse_schema(
            r#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
                   <xs:element name="r"><xs:complexType/></xs:element>
               </xs:schema>"#,
            "t",
        )
        .unwrap();
        let graph = XsGraph::build(&model, &RefTargetMap::empty());
        assert_eq!(graph.nodes().len(), 1);
        assert!(graph.arcs().is_empty());
    }

    #[test]
    fn connection_costs_satisfy_the_triangle_property() {
        let model = s1();
        let graph = XsGraph::build(&model, &RefTargetMap::empty());
        let nodes = model.xcomponents();
        for x in nodes {
            for y in nodes {
                for z in nodes {
                    let (xy, yz, xz) = (
                        graph.connection_cost(x, y).unwrap(),
                        graph.connection_cost(y, z).unwrap(),
                        graph.connection_cost(x, z).unwrap(),
                    );
                    if let (Cost::Finite(a), Cost::Finite(b)) = (xy, yz) {
                        assert!(
                            xz <= Cost::Finite(a + b),
                            "cc({},{}) > cc(..,{}) + cc({},..)",
                            x.name,
                            z.name,
                            y.name,
                            y.name
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn synthetic_graph_costs() {
        let mk = |n: &str| XComponent::new("t", n, Typology::ComplexElement, None);
        let nodes = vec![mk("a"), mk("b"), mk("c"), mk("d")];
        // a -0-> b -1-> c; a -1-> c is not present; d isolated.
        let graph = XsGraph::from_arcs(nodes.clone(), vec![(0, 1, 0), (1, 2, 1)]);
        assert_eq!(
            graph.connection_cost(&nodes[0], &nodes[2]).unwrap(),
            Cost::Finite(1)
        );
        assert_eq!(
            graph.connection_cost(&nodes[0], &nodes[3]).unwrap(),
            Cost::Infinite
        );
        assert_eq!(
            graph.connection_cost(&nodes[3], &nodes[3]).unwrap(),
            Cost::Finite(0)
        );
    }
}
