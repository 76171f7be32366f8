//! The clustered graph of overlapping permutations.
//!
//! Every `n`-permutation is an edge from the cluster of its first `n − 1`
//! letters to the cluster of its last `n − 1` letters. Clusters are keyed by
//! their reduced signature, an `(n − 1)`-permutation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{all_permutations, extend, Extension, Pattern};

/// Largest `n` for which the graph is built (`8! = 40320` edges).
pub const MAX_GRAPH_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: Pattern,
    pub to: Pattern,
    pub label: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub signature: Pattern,
    /// Labels of the out-edges, sorted.
    pub members: Vec<Pattern>,
}

impl Cluster {
    /// A cluster is collapsed once a twin pair has been merged into a single
    /// label with a repeated letter.
    pub fn is_collapsed(&self) -> bool {
        self.members.iter().any(|m| !m.is_permutation())
    }
}

/// The two members of a cluster whose last letter is adjacent in value to
/// the first: `x₁…x_{n−1}x₁⁺` and `x₁…x_{n−1}x₁⁻`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwinPair {
    pub plus: Pattern,
    pub minus: Pattern,
}

impl TwinPair {
    pub fn contains(&self, label: &Pattern) -> bool {
        &self.plus == label || &self.minus == label
    }
}

/// A cycle of clusters joined by double edges, starting at its least signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleEdgeCycle {
    pub signatures: Vec<Pattern>,
    /// `twins[i]` realizes the double edge leaving `signatures[i]`.
    pub twins: Vec<TwinPair>,
}

impl DoubleEdgeCycle {
    pub fn key(&self) -> &Pattern {
        &self.signatures[0]
    }

    pub fn len(&self) -> usize {
        self.signatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusteredGraph {
    n: usize,
    clusters: BTreeMap<Pattern, Cluster>,
    /// Sorted by source signature, then label.
    edges: Vec<Edge>,
}

/// Builds the clustered graph of overlapping `n`-permutations.
pub fn build_clustered_graph(n: usize) -> Result<ClusteredGraph> {
    if !(2..=MAX_GRAPH_N).contains(&n) {
        return Err(Error::WindowSizeOutOfRange {
            n,
            min: 2,
            max: MAX_GRAPH_N,
        });
    }
    let edges = all_permutations(n)
        .into_iter()
        .map(|label| Edge {
            from: label.prefix(n - 1),
            to: label.suffix(n - 1),
            label,
        })
        .collect();
    Ok(ClusteredGraph::from_edges(n, edges))
}

impl ClusteredGraph {
    pub(crate) fn from_edges(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort();
        let mut clusters: BTreeMap<Pattern, Cluster> = BTreeMap::new();
        for e in &edges {
            for sig in [&e.from, &e.to] {
                clusters.entry(sig.clone()).or_insert_with(|| Cluster {
                    signature: sig.clone(),
                    members: Vec::new(),
                });
            }
            clusters
                .get_mut(&e.from)
                .expect("inserted above")
                .members
                .push(e.label.clone());
        }
        ClusteredGraph { n, clusters, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clusters(&self) -> impl Iterator<Item = &Cluster> {
        self.clusters.values()
    }

    pub fn cluster(&self, signature: &Pattern) -> Option<&Cluster> {
        self.clusters.get(signature)
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges<'a>(&'a self, from: &'a Pattern) -> impl Iterator<Item = &'a Edge> + 'a {
        let start = self.edges.partition_point(|e| &e.from < from);
        self.edges[start..].iter().take_while(move |e| &e.from == from)
    }

    pub fn is_collapsed(&self) -> bool {
        self.clusters.values().any(Cluster::is_collapsed)
    }

    /// Out-degree minus in-degree for every cluster.
    pub fn degree_imbalance(&self) -> BTreeMap<Pattern, i64> {
        let mut diff: BTreeMap<Pattern, i64> =
            self.clusters.keys().map(|k| (k.clone(), 0)).collect();
        for e in &self.edges {
            *diff.get_mut(&e.from).unwrap() += 1;
            *diff.get_mut(&e.to).unwrap() -= 1;
        }
        diff
    }

    pub fn is_balanced(&self) -> bool {
        self.degree_imbalance().values().all(|&d| d == 0)
    }

    /// Every cluster reaches every other cluster along directed edges.
    pub fn is_strongly_connected(&self) -> bool {
        let Some(root) = self.clusters.keys().next() else {
            return true;
        };
        let mut forward: BTreeMap<&Pattern, Vec<&Pattern>> = BTreeMap::new();
        let mut backward: BTreeMap<&Pattern, Vec<&Pattern>> = BTreeMap::new();
        for e in &self.edges {
            forward.entry(&e.from).or_default().push(&e.to);
            backward.entry(&e.to).or_default().push(&e.from);
        }
        let reach = |adj: &BTreeMap<&Pattern, Vec<&Pattern>>| {
            let mut seen = BTreeSet::from([root]);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &w in adj.get(v).into_iter().flatten() {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            seen.len()
        };
        reach(&forward) == self.clusters.len() && reach(&backward) == self.clusters.len()
    }

    /// Number of parallel edges for every ordered pair of clusters that has any.
    pub fn edge_multiplicities(&self) -> BTreeMap<(Pattern, Pattern), usize> {
        let mut out = BTreeMap::new();
        for e in &self.edges {
            *out.entry((e.from.clone(), e.to.clone())).or_insert(0) += 1;
        }
        out
    }

    /// Replaces the twin pair leaving `signature` by the single label
    /// `x₁…x_{n−1}x₁`.
    pub(crate) fn merge_twins(&mut self, signature: &Pattern) -> Result<()> {
        let cluster = self
            .clusters
            .get(signature)
            .ok_or_else(|| Error::InvalidSelection(format!("no cluster {signature}")))?;
        let twins = find_twins(cluster)?;
        let mut letters = signature.letters().to_vec();
        letters.push(letters[0]);
        let merged = Pattern::from_reduced_unchecked(letters);
        let to = self
            .edges
            .iter()
            .find(|e| e.label == twins.plus)
            .expect("twin is an edge")
            .to
            .clone();
        self.edges.retain(|e| !twins.contains(&e.label));
        self.edges.push(Edge {
            from: signature.clone(),
            to,
            label: merged,
        });
        *self = ClusteredGraph::from_edges(self.n, std::mem::take(&mut self.edges));
        Ok(())
    }

    /// A copy without the edges carrying the given labels.
    pub(crate) fn without_labels(&self, labels: &[Pattern]) -> ClusteredGraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| !labels.contains(&e.label))
            .cloned()
            .collect();
        ClusteredGraph::from_edges(self.n, edges)
    }

    /// Graphviz rendering; node labels are quoted signatures and every edge
    /// carries its permutation label, so double edges show as two arcs.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph clustered {\n");
        for c in self.clusters.values() {
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"\\\"{}\\\"\"];",
                c.signature, c.signature
            );
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                e.from, e.to, e.label
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Two distinct permutations with the same reduced prefix whose last letters
/// differ from their first letters by exactly one.
pub fn is_twins(a: &Pattern, b: &Pattern) -> bool {
    let n = a.len();
    if n < 2 || b.len() != n || a == b || !a.is_permutation() || !b.is_permutation() {
        return false;
    }
    let adjacent = |p: &Pattern| p.letters()[0].abs_diff(p.letters()[n - 1]) == 1;
    a.prefix(n - 1) == b.prefix(n - 1) && adjacent(a) && adjacent(b)
}

/// The unique twin pair of an uncollapsed cluster.
pub fn find_twins(cluster: &Cluster) -> Result<TwinPair> {
    if cluster.is_collapsed() {
        return Err(Error::CollapsedCluster(cluster.signature.clone()));
    }
    let members = &cluster.members;
    let mut found = None;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if is_twins(&members[i], &members[j]) {
                assert!(
                    found.is_none(),
                    "cluster {} has more than one twin pair",
                    cluster.signature
                );
                found = Some((i, j));
            }
        }
    }
    let (i, j) = found.ok_or_else(|| Error::CollapsedCluster(cluster.signature.clone()))?;
    let first = cluster.signature.letters()[0];
    let plus = extend(&cluster.signature, Extension::above(first))?;
    let (a, b) = (&members[i], &members[j]);
    let (plus, minus) = if *a == plus {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    Ok(TwinPair { plus, minus })
}

/// Partitions the clusters into cycles of double edges.
pub fn double_edge_cycles(g: &ClusteredGraph) -> Result<Vec<DoubleEdgeCycle>> {
    if g.is_collapsed() {
        return Err(Error::CollapsedGraph);
    }
    let mut successor: BTreeMap<&Pattern, &Pattern> = BTreeMap::new();
    for ((from, to), count) in g.edge_multiplicities() {
        assert!(count <= 2, "triple edge {from} -> {to}");
        if count == 2 {
            let from = g.clusters.get_key_value(&from).unwrap().0;
            let to = g.clusters.get_key_value(&to).unwrap().0;
            let previous = successor.insert(from, to);
            assert!(previous.is_none(), "cluster {from} has two double edges");
        }
    }
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for start in g.clusters.keys() {
        if seen.contains(start) {
            continue;
        }
        let mut signatures = Vec::new();
        let mut twins = Vec::new();
        let mut current = start;
        loop {
            seen.insert(current);
            signatures.push(current.clone());
            twins.push(find_twins(&g.clusters[current])?);
            current = successor
                .get(current)
                .unwrap_or_else(|| panic!("cluster {current} has no double edge"));
            if current == start {
                break;
            }
            assert!(!seen.contains(current), "double edges do not form disjoint cycles");
        }
        cycles.push(DoubleEdgeCycle { signatures, twins });
    }
    Ok(cycles)
}
