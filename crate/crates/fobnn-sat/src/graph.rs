//! State transition graphs: construction, metrics, comparison and
//! serialization.
//!
//! Nodes are rendered states (`S=+,E=0,...`), held sorted and
//! deduplicated; edges are index pairs into the node list, also sorted.
//! Everything here is deterministic so graph output can be diffed and
//! golden-tested.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::backend::SatBackend;
use crate::error::{Error, Result};
use crate::fobnn::Fobnn;
use crate::session::open_session;

/// Largest species count for which a full graph is built without
/// `force`: beyond this the state space (`2^n` nodes) stops being useful.
pub const STG_SPECIES_LIMIT: usize = 12;

/// What a graph's nodes and edges mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    /// Boolean states under the sign-abstracted semantics.
    FobnnBase,
    /// Boolean states extended with derivative signs.
    FobnnExtended,
    /// Boolean states under the classic all-or-nothing firing semantics.
    Classic,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::FobnnBase => "fobnn-base",
            GraphKind::FobnnExtended => "fobnn-extended",
            GraphKind::Classic => "classic",
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A directed graph over rendered states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionGraph {
    pub kind: GraphKind,
    pub species: Vec<String>,
    pub nodes: Vec<String>,
    pub edges: Vec<(u32, u32)>,
    pub metadata: BTreeMap<String, String>,
}

impl TransitionGraph {
    /// Build from named endpoints. Nodes are sorted; every edge endpoint
    /// must be listed among the nodes.
    pub fn from_named_edges(
        kind: GraphKind,
        species: Vec<String>,
        nodes: BTreeSet<String>,
        edges: BTreeSet<(String, String)>,
    ) -> Result<TransitionGraph> {
        let nodes: Vec<String> = nodes.into_iter().collect();
        let index: BTreeMap<&str, u32> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i as u32))
            .collect();
        let mut edge_list = Vec::with_capacity(edges.len());
        for (from, to) in &edges {
            let lookup = |name: &str| {
                index.get(name).copied().ok_or_else(|| {
                    Error::Graph(format!("edge endpoint `{name}` is not a node"))
                })
            };
            edge_list.push((lookup(from)?, lookup(to)?));
        }
        edge_list.sort_unstable();
        Ok(TransitionGraph {
            kind,
            species,
            nodes,
            edges: edge_list,
            metadata: BTreeMap::new(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as rendered state pairs.
    pub fn named_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a as usize].as_str(), self.nodes[b as usize].as_str()))
    }

    /// Edge density `|E| / |V|^2`, exact.
    pub fn density(&self) -> Result<BigRational> {
        if self.nodes.is_empty() {
            return Err(Error::Graph("an empty graph has no density".into()));
        }
        let v = BigRational::from_integer((self.nodes.len() as i64).into());
        let e = BigRational::from_integer((self.edges.len() as i64).into());
        Ok(e / (v.clone() * v))
    }

    pub fn density_f64(&self) -> Result<f64> {
        Ok(self.density()?.to_f64().expect("density fits in f64"))
    }

    /// Nodes whose only outgoing edge is the self-loop.
    pub fn fixed_points(&self) -> Vec<&str> {
        let mut out_degree = vec![0usize; self.nodes.len()];
        let mut self_loop = vec![false; self.nodes.len()];
        for &(a, b) in &self.edges {
            out_degree[a as usize] += 1;
            if a == b {
                self_loop[a as usize] = true;
            }
        }
        self.nodes
            .iter()
            .enumerate()
            .filter(|&(i, _)| out_degree[i] == 1 && self_loop[i])
            .map(|(_, n)| n.as_str())
            .collect()
    }

    /// Graphviz rendering. With `trim_zeros`, node labels drop their
    /// `=0` entries (an all-zero state is labelled `0`); node identifiers
    /// stay full either way.
    pub fn to_dot(&self, trim_zeros: bool) -> String {
        let mut out = String::from("digraph stg {\n");
        out.push_str(&format!("  // kind: {}\n", self.kind));
        out.push_str(&format!("  // species: {}\n", self.species.join(", ")));
        for (k, v) in &self.metadata {
            out.push_str(&format!("  // {k}: {v}\n"));
        }
        for node in &self.nodes {
            if trim_zeros {
                let label = trim_zero_entries(node);
                if label != *node {
                    out.push_str(&format!("  \"{node}\" [label=\"{label}\"];\n"));
                    continue;
                }
            }
            out.push_str(&format!("  \"{node}\";\n"));
        }
        for (from, to) in self.named_edges() {
            out.push_str(&format!("  \"{from}\" -> \"{to}\";\n"));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<TransitionGraph> {
        serde_json::from_str(text)
            .map_err(|e| Error::Graph(format!("invalid graph JSON: {e}")))
    }
}

/// Drop `name=0` entries from a rendered state, keeping the rest; a
/// state of nothing but zeros becomes `0`.
fn trim_zero_entries(render: &str) -> String {
    let kept: Vec<&str> =
        render.split(',').filter(|part| !part.ends_with("=0")).collect();
    if kept.is_empty() {
        "0".to_string()
    } else {
        kept.join(",")
    }
}

/// Build the boolean state transition graph of a formula by exhaustive
/// SAT enumeration.
///
/// Nodes are the states occurring in at least one transition: a state
/// that falsifies the formula in both positions — say, by zeroing a
/// species the kinetics divide by — is impossible and does not appear.
/// Guarded at [`STG_SPECIES_LIMIT`] species unless `force` is set.
pub fn build_stg(
    f: &Fobnn,
    backend: Box<dyn SatBackend>,
    extended: bool,
    force: bool,
) -> Result<TransitionGraph> {
    if !force && f.species.len() > STG_SPECIES_LIMIT {
        return Err(Error::SizeGuard {
            what: "state transition graph species count",
            limit: STG_SPECIES_LIMIT,
            actual: f.species.len(),
        });
    }
    let mut session = open_session(f, backend);
    let backend_name = session.backend_name().to_string();
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let kind = if extended {
        for t in session.enumerate_extended_transitions(None, None)? {
            let from = t.from.render(&f.species);
            let to = t.to.render(&f.species);
            nodes.insert(from.clone());
            nodes.insert(to.clone());
            edges.insert((from, to));
        }
        GraphKind::FobnnExtended
    } else {
        for t in session.enumerate_transitions(None, None)? {
            let from = t.from.render(&f.species);
            let to = t.to.render(&f.species);
            nodes.insert(from.clone());
            nodes.insert(to.clone());
            edges.insert((from, to));
        }
        GraphKind::FobnnBase
    };
    let mut graph = TransitionGraph::from_named_edges(kind, f.species.clone(), nodes, edges)?;
    graph.metadata.insert("backend".into(), backend_name);
    Ok(graph)
}

/// A structural comparison of two graphs over the same species.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub left_kind: GraphKind,
    pub right_kind: GraphKind,
    pub left_nodes: usize,
    pub right_nodes: usize,
    pub shared_nodes: usize,
    pub left_edges: usize,
    pub right_edges: usize,
    pub shared_edges: usize,
    pub left_only_nodes: Vec<String>,
    pub right_only_nodes: Vec<String>,
    pub left_only_edges: Vec<(String, String)>,
    pub right_only_edges: Vec<(String, String)>,
    pub left_fixed_points: Vec<String>,
    pub right_fixed_points: Vec<String>,
}

/// Compare two graphs node-by-node and edge-by-edge (by rendered state,
/// so differing node index spaces do not matter).
pub fn compare(left: &TransitionGraph, right: &TransitionGraph) -> Result<ComparisonReport> {
    if left.species != right.species {
        return Err(Error::Graph(format!(
            "species mismatch: [{}] vs [{}]",
            left.species.join(", "),
            right.species.join(", ")
        )));
    }
    let ln: BTreeSet<&str> = left.nodes.iter().map(String::as_str).collect();
    let rn: BTreeSet<&str> = right.nodes.iter().map(String::as_str).collect();
    let le: BTreeSet<(&str, &str)> = left.named_edges().collect();
    let re: BTreeSet<(&str, &str)> = right.named_edges().collect();
    let to_owned_pair =
        |(a, b): &(&str, &str)| (a.to_string(), b.to_string());
    Ok(ComparisonReport {
        left_kind: left.kind,
        right_kind: right.kind,
        left_nodes: ln.len(),
        right_nodes: rn.len(),
        shared_nodes: ln.intersection(&rn).count(),
        left_edges: le.len(),
        right_edges: re.len(),
        shared_edges: le.intersection(&re).count(),
        left_only_nodes: ln.difference(&rn).map(|s| s.to_string()).collect(),
        right_only_nodes: rn.difference(&ln).map(|s| s.to_string()).collect(),
        left_only_edges: le.difference(&re).map(to_owned_pair).collect(),
        right_only_edges: re.difference(&le).map(to_owned_pair).collect(),
        left_fixed_points: left.fixed_points().iter().map(|s| s.to_string()).collect(),
        right_fixed_points: right.fixed_points().iter().map(|s| s.to_string()).collect(),
    })
}

impl std::fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "left:  {} ({} nodes, {} edges, {} fixed points)",
            self.left_kind,
            self.left_nodes,
            self.left_edges,
            self.left_fixed_points.len()
        )?;
        writeln!(
            f,
            "right: {} ({} nodes, {} edges, {} fixed points)",
            self.right_kind,
            self.right_nodes,
            self.right_edges,
            self.right_fixed_points.len()
        )?;
        writeln!(f, "shared: {} nodes, {} edges", self.shared_nodes, self.shared_edges)?;
        writeln!(
            f,
            "only left: {} nodes, {} edges",
            self.left_only_nodes.len(),
            self.left_only_edges.len()
        )?;
        write!(
            f,
            "only right: {} nodes, {} edges",
            self.right_only_nodes.len(),
            self.right_only_edges.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::VarisatBackend;
    use crate::fixtures::renz;
    use crate::fobnn::build_fobnn;
    use crate::oracle::brute_force_base_transitions;
    use crate::parse_native;
    use crate::session::DEFAULT_LOOP_LIMIT;

    fn varisat() -> Box<dyn SatBackend> {
        Box::new(VarisatBackend::new())
    }

    fn decay_graph() -> TransitionGraph {
        let f = build_fobnn(
            &parse_native("species: A\nconst k > 0\nr: A => @ k*A\n").unwrap(),
        )
        .unwrap();
        build_stg(&f, varisat(), false, false).unwrap()
    }

    #[test]
    fn base_graph_matches_the_oracle_on_the_enzyme_network() {
        let f = build_fobnn(&renz()).unwrap();
        let g = build_stg(&f, varisat(), false, false).unwrap();
        assert_eq!(g.kind, GraphKind::FobnnBase);
        // Every boolean state of this network occurs in some transition.
        assert_eq!(g.node_count(), 16);
        let expected: BTreeSet<(String, String)> = brute_force_base_transitions(&f)
            .unwrap()
            .into_iter()
            .map(|t| (t.from.render(&f.species), t.to.render(&f.species)))
            .collect();
        let got: BTreeSet<(String, String)> = g
            .named_edges()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn impossible_states_are_omitted_from_fobnn_graphs() {
        // B sits in a denominator: any state with B absent falsifies the
        // formula in both positions and must not appear as a node.
        let rn =
            parse_native("species: A, B\nconst k > 0\nr1: A => @ k*A/B\n").unwrap();
        let f = build_fobnn(&rn).unwrap();
        let g = build_stg(&f, varisat(), false, false).unwrap();
        assert_eq!(g.nodes, vec!["A=+,B=+".to_string(), "A=0,B=+".to_string()]);
        // The classic semantics keeps all boolean states regardless.
        let c = crate::classic::classic_stg(&rn, false).unwrap();
        assert_eq!(c.node_count(), 4);
    }

    #[test]
    fn graph_fixed_points_agree_with_the_solver() {
        let f = build_fobnn(&renz()).unwrap();
        let g = build_stg(&f, varisat(), false, false).unwrap();
        let mut session = open_session(&f, varisat());
        let from_solver: BTreeSet<String> = session
            .find_fixed_points(DEFAULT_LOOP_LIMIT)
            .unwrap()
            .into_iter()
            .map(|s| s.render(&f.species))
            .collect();
        let from_graph: BTreeSet<String> =
            g.fixed_points().into_iter().map(|s| s.to_string()).collect();
        assert_eq!(from_graph, from_solver);
    }

    #[test]
    fn density_is_edges_over_squared_nodes() {
        let g = decay_graph();
        // A=+ -> {A=+, A=0}, A=0 -> {A=0}: three edges over four slots.
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(
            g.density().unwrap(),
            BigRational::new(3.into(), 4.into())
        );
        assert!((g.density_f64().unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn empty_graphs_have_no_density() {
        let g = TransitionGraph {
            kind: GraphKind::Classic,
            species: vec![],
            nodes: vec![],
            edges: vec![],
            metadata: BTreeMap::new(),
        };
        assert!(g.density().is_err());
    }

    #[test]
    fn dot_rendering_is_stable() {
        let mut g = decay_graph();
        g.metadata.clear();
        assert_eq!(
            g.to_dot(false),
            "digraph stg {\n\
            \x20 // kind: fobnn-base\n\
            \x20 // species: A\n\
            \x20 \"A=+\";\n\
            \x20 \"A=0\";\n\
            \x20 \"A=+\" -> \"A=+\";\n\
            \x20 \"A=+\" -> \"A=0\";\n\
            \x20 \"A=0\" -> \"A=0\";\n\
            }\n"
        );
    }

    #[test]
    fn dot_zero_trimming_relabels_nodes() {
        let mut g = decay_graph();
        g.metadata.clear();
        let dot = g.to_dot(true);
        assert!(dot.contains("\"A=0\" [label=\"0\"];"));
        assert!(dot.contains("\"A=+\";"));
    }

    #[test]
    fn json_round_trips() {
        let g = decay_graph();
        let back = TransitionGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn extended_graphs_use_witness_states() {
        let f = build_fobnn(
            &parse_native("species: A\nconst k > 0\nr: A => @ k*A\n").unwrap(),
        )
        .unwrap();
        let g = build_stg(&f, varisat(), true, false).unwrap();
        assert_eq!(g.kind, GraphKind::FobnnExtended);
        // Every node carries derivative annotations.
        assert!(g.nodes.iter().all(|n| n.contains("A.=")));
        // Projecting extended edges to their base part recovers the base
        // graph's edges.
        let base = decay_graph();
        let project = |s: &str| {
            s.split(',')
                .filter(|part| !part.starts_with("A."))
                .collect::<Vec<_>>()
                .join(",")
        };
        let projected: BTreeSet<(String, String)> =
            g.named_edges().map(|(a, b)| (project(a), project(b))).collect();
        let base_edges: BTreeSet<(String, String)> = base
            .named_edges()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(projected, base_edges);
    }

    #[test]
    fn species_guard_blocks_large_graphs() {
        let names: Vec<String> = (0..13).map(|i| format!("X{i}")).collect();
        let src = format!("species: {}\n", names.join(", "));
        let f = build_fobnn(&parse_native(&src).unwrap()).unwrap();
        let err = build_stg(&f, varisat(), false, false).unwrap_err();
        assert!(err.is_guard());
    }

    #[test]
    fn comparison_is_symmetric() {
        let f = build_fobnn(&renz()).unwrap();
        let g = build_stg(&f, varisat(), false, false).unwrap();
        let mut f2 = build_fobnn(&renz()).unwrap();
        let all = f2.species.clone();
        f2.add_mass_action_constraints(&all).unwrap();
        let h = build_stg(&f2, varisat(), false, false).unwrap();

        let ab = compare(&g, &h).unwrap();
        let ba = compare(&h, &g).unwrap();
        assert_eq!(ab.left_edges, ba.right_edges);
        assert_eq!(ab.right_only_edges, ba.left_only_edges);
        assert_eq!(ab.shared_edges, ba.shared_edges);
        // Mass action constraints only remove transitions.
        assert_eq!(ab.right_only_edges.len(), 0);
        assert!(ab.left_only_edges.len() > 0);
        assert_eq!(ab.shared_edges, h.edge_count());
    }

    #[test]
    fn comparing_different_species_fails() {
        let f = build_fobnn(
            &parse_native("species: A\nconst k > 0\nr: A => @ k*A\n").unwrap(),
        )
        .unwrap();
        let g = build_stg(&f, varisat(), false, false).unwrap();
        let f2 = build_fobnn(
            &parse_native("species: B\nconst k > 0\nr: B => @ k*B\n").unwrap(),
        )
        .unwrap();
        let h = build_stg(&f2, varisat(), false, false).unwrap();
        assert!(compare(&g, &h).is_err());
    }
}
