//! Shortened universal words and cycles from the collapsed clustered graph.
//!
//! Collapsing a double-edge cycle replaces each of its twin pairs by one
//! edge whose label repeats the first letter at distance `n − 1`. An
//! Eulerian circuit of the collapsed graph is a window sequence, and
//! [`realize`] turns it into integers by ranking the forced equalities and
//! inequalities.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_clustered_graph, double_edge_cycles, ClusteredGraph, Edge};
use crate::pattern::{reduce, Pattern};
use crate::pword::{PWord, RankSet, Symbol};

/// Largest `n` accepted by the generators.
pub const MAX_GENERATE_N: usize = 7;

/// Default number of Eulerian circuits tried by [`generate_ucycle`].
pub const DEFAULT_CIRCUIT_BUDGET: u64 = 1000;

/// Double-edge cycles to collapse, keyed by their least signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseSelection {
    chosen: BTreeSet<Pattern>,
}

impl CollapseSelection {
    pub fn new(g: &ClusteredGraph, keys: impl IntoIterator<Item = Pattern>) -> Result<Self> {
        let cycles = double_edge_cycles(g)?;
        let valid: BTreeSet<&Pattern> = cycles.iter().map(|c| c.key()).collect();
        let chosen: BTreeSet<Pattern> = keys.into_iter().collect();
        if let Some(bad) = chosen.iter().find(|k| !valid.contains(k)) {
            return Err(Error::InvalidSelection(format!(
                "{bad} is not the least signature of a double-edge cycle"
            )));
        }
        Ok(CollapseSelection { chosen })
    }

    /// The `k` cycles with the least keys.
    pub fn first_k(g: &ClusteredGraph, k: usize) -> Result<Self> {
        let cycles = double_edge_cycles(g)?;
        if k > cycles.len() {
            return Err(Error::InvalidSelection(format!(
                "k = {k} but the graph has only {} double-edge cycles",
                cycles.len()
            )));
        }
        Ok(CollapseSelection {
            chosen: cycles.iter().take(k).map(|c| c.key().clone()).collect(),
        })
    }

    pub fn chosen(&self) -> &BTreeSet<Pattern> {
        &self.chosen
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }
}

/// Merges every twin pair on the selected cycles.
pub fn collapse(g: &ClusteredGraph, sel: &CollapseSelection) -> Result<ClusteredGraph> {
    let cycles = double_edge_cycles(g)?;
    for key in &sel.chosen {
        if !cycles.iter().any(|c| c.key() == key) {
            return Err(Error::InvalidSelection(format!("no cycle with key {key}")));
        }
    }
    let mut out = g.clone();
    for cycle in cycles.iter().filter(|c| sel.chosen.contains(c.key())) {
        for sig in &cycle.signatures {
            out.merge_twins(sig)?;
        }
    }
    assert!(
        out.is_balanced() && out.is_strongly_connected(),
        "collapse broke balance or connectivity"
    );
    Ok(out)
}

/// Consecutive windows overlap in `n − 1` positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSequence {
    windows: Vec<Pattern>,
    cyclic: bool,
}

impl WindowSequence {
    pub fn new(windows: Vec<Pattern>, cyclic: bool) -> Result<Self> {
        let Some(first) = windows.first() else {
            return Err(Error::EmptyWord);
        };
        let n = first.len();
        if n < 2 {
            return Err(Error::MalformedWindow("windows must have length at least 2".into()));
        }
        if let Some(w) = windows.iter().find(|w| w.len() != n) {
            return Err(Error::LengthMismatch {
                left: n,
                right: w.len(),
            });
        }
        let pairs = windows.len() - usize::from(!cyclic);
        for i in 0..pairs {
            let j = (i + 1) % windows.len();
            if windows[i].suffix(n - 1) != windows[j].prefix(n - 1) {
                return Err(Error::BrokenOverlap(i, j));
            }
        }
        Ok(WindowSequence { windows, cyclic })
    }

    pub fn windows(&self) -> &[Pattern] {
        &self.windows
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn n(&self) -> usize {
        self.windows[0].len()
    }

    /// Length of the realized word.
    pub fn word_len(&self) -> usize {
        if self.cyclic {
            self.windows.len()
        } else {
            self.windows.len() + self.n() - 1
        }
    }

    /// Cuts a cyclic sequence open so that it starts at window `start`.
    pub fn rotate_open(&self, start: usize) -> WindowSequence {
        let mut windows = self.windows.clone();
        let len = windows.len();
        windows.rotate_left(start % len);
        WindowSequence {
            windows,
            cyclic: false,
        }
    }
}

/// Equalities and strict inequalities between word positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationConstraints {
    len: usize,
    cyclic: bool,
    equal: Vec<(usize, usize)>,
    less: Vec<(usize, usize)>,
}

impl RealizationConstraints {
    pub fn new(len: usize, cyclic: bool) -> Self {
        RealizationConstraints {
            len,
            cyclic,
            equal: Vec::new(),
            less: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Requires the letters at `start..start + window.len()` to be ordered as
    /// `window`; `None` entries are left free. Cyclic positions wrap.
    pub fn add_window(&mut self, start: usize, window: &[Option<u32>]) {
        let mut placed: Vec<(u32, usize)> = window
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (v, self.position(start + i))))
            .collect();
        placed.sort_unstable();
        for pair in placed.windows(2) {
            let ((a, i), (b, j)) = (pair[0], pair[1]);
            if a == b {
                self.equal.push((i, j));
            } else {
                self.less.push((i, j));
            }
        }
    }

    fn position(&self, i: usize) -> usize {
        if self.cyclic {
            i % self.len
        } else {
            assert!(i < self.len, "window runs past the end of the word");
            i
        }
    }

    /// Representative class of every position after merging equalities.
    pub fn classes(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.len).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j) in &self.equal {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..self.len).map(|i| find(&mut parent, i)).collect()
    }

    /// Strict relations between classes, as representative pairs.
    pub fn strict_pairs(&self) -> BTreeSet<(usize, usize)> {
        let classes = self.classes();
        self.less
            .iter()
            .map(|&(i, j)| (classes[i], classes[j]))
            .collect()
    }

    /// Assigns `1 +` the longest strict chain below each class, or fails if
    /// the strict relation has a cycle.
    pub fn solve(&self) -> Result<Vec<u32>> {
        let classes = self.classes();
        let mut succ: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut indegree = vec![0usize; self.len];
        for (a, b) in self.strict_pairs() {
            if a == b {
                return Err(Error::InfeasibleRealization);
            }
            succ.entry(a).or_default().push(b);
            indegree[b] += 1;
        }
        let reps: Vec<usize> = (0..self.len).filter(|&i| classes[i] == i).collect();
        let mut layer = vec![0u32; self.len];
        let mut queue: VecDeque<usize> = reps.iter().copied().filter(|&r| indegree[r] == 0).collect();
        let mut done = 0;
        while let Some(v) = queue.pop_front() {
            done += 1;
            for &w in succ.get(&v).into_iter().flatten() {
                layer[w] = layer[w].max(layer[v] + 1);
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if done != reps.len() {
            return Err(Error::InfeasibleRealization);
        }
        Ok(classes.iter().map(|&c| layer[c] + 1).collect())
    }
}

/// Builds the constraints of a window sequence.
pub fn constraints(ws: &WindowSequence) -> RealizationConstraints {
    let mut rc = RealizationConstraints::new(ws.word_len(), ws.cyclic);
    for (i, w) in ws.windows.iter().enumerate() {
        let letters: Vec<Option<u32>> = w.letters().iter().map(|&v| Some(v)).collect();
        rc.add_window(i, &letters);
    }
    rc
}

/// Integer word whose windows reduce to the windows of `ws`.
pub fn realize(ws: &WindowSequence) -> Result<Vec<u32>> {
    let word = constraints(ws).solve();
    if !ws.cyclic {
        assert!(word.is_ok(), "non-cyclic window sequence must be realizable");
    }
    word
}

fn cluster_indices(g: &ClusteredGraph) -> (BTreeMap<&Pattern, usize>, Vec<Vec<usize>>, Vec<usize>) {
    let index: BTreeMap<&Pattern, usize> = g
        .clusters()
        .enumerate()
        .map(|(i, c)| (&c.signature, i))
        .collect();
    let mut out = vec![Vec::new(); index.len()];
    let mut to = Vec::with_capacity(g.edges().len());
    for (e, edge) in g.edges().iter().enumerate() {
        out[index[&edge.from]].push(e);
        to.push(index[&edge.to]);
    }
    (index, out, to)
}

/// Hierholzer's algorithm, always leaving a cluster by its least unused label.
fn hierholzer(g: &ClusteredGraph, start: &Pattern) -> Result<Vec<Edge>> {
    let (index, out, to) = cluster_indices(g);
    let &s = index
        .get(start)
        .ok_or_else(|| Error::NotEulerian(format!("no cluster {start}")))?;
    let mut next = vec![0usize; out.len()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(s, None)];
    let mut trail = Vec::with_capacity(g.edges().len());
    while let Some(&(v, _)) = stack.last() {
        if next[v] < out[v].len() {
            let e = out[v][next[v]];
            next[v] += 1;
            stack.push((to[e], Some(e)));
        } else if let Some((_, Some(e))) = stack.pop() {
            trail.push(e);
        }
    }
    if trail.len() != g.edges().len() {
        return Err(Error::NotEulerian("edges are not all reachable from the start".into()));
    }
    trail.reverse();
    Ok(trail.into_iter().map(|e| g.edges()[e].clone()).collect())
}

fn labels(edges: Vec<Edge>) -> Vec<Pattern> {
    edges.into_iter().map(|e| e.label).collect()
}

/// Eulerian circuit from `start`, as a cyclic window sequence.
pub fn eulerian_circuit(g: &ClusteredGraph, start: &Pattern) -> Result<WindowSequence> {
    if !g.is_balanced() {
        return Err(Error::NotEulerian("graph is not balanced".into()));
    }
    WindowSequence::new(labels(hierholzer(g, start)?), true)
}

/// Eulerian path from `from` to `to`, as a non-cyclic window sequence.
pub fn eulerian_path(g: &ClusteredGraph, from: &Pattern, to: &Pattern) -> Result<WindowSequence> {
    for (sig, diff) in g.degree_imbalance() {
        let expected = match (&sig == from, &sig == to) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        };
        if diff != expected {
            return Err(Error::NotEulerian(format!(
                "cluster {sig} has out-degree minus in-degree {diff}, expected {expected}"
            )));
        }
    }
    WindowSequence::new(labels(hierholzer(g, from)?), false)
}

fn check_nk(n: usize, k: usize) -> Result<ClusteredGraph> {
    if !(2..=MAX_GENERATE_N).contains(&n) {
        return Err(Error::WindowSizeOutOfRange {
            n,
            min: 2,
            max: MAX_GENERATE_N,
        });
    }
    let g = build_clustered_graph(n)?;
    let sel = CollapseSelection::first_k(&g, k)?;
    collapse(&g, &sel)
}

/// A u-word for `n`-permutations of length `n! + (1 − k)(n − 1)`.
///
/// The `k` least double-edge cycles are collapsed, and the Eulerian circuit
/// is opened at the window `12…n`.
pub fn generate_uword(n: usize, k: usize) -> Result<Vec<u32>> {
    let g = check_nk(n, k)?;
    let circuit = eulerian_circuit(&g, &Pattern::increasing(n - 1))?;
    let identity = Pattern::increasing(n);
    let start = circuit
        .windows()
        .iter()
        .position(|w| *w == identity)
        .unwrap_or(0);
    realize(&circuit.rotate_open(start))
}

/// Result of searching Eulerian circuits for a realizable u-cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CircuitProbe {
    Found { word: Vec<u32>, circuits: u64 },
    /// Every Eulerian circuit was tried and none is cyclically realizable.
    Exhausted { circuits: u64 },
    BudgetExceeded { circuits: u64 },
}

struct CircuitWalk<'a> {
    g: &'a ClusteredGraph,
    out: Vec<Vec<usize>>,
    to: Vec<usize>,
    used: Vec<bool>,
    path: Vec<usize>,
    circuits: u64,
    steps: u64,
    budget: u64,
    step_cap: u64,
}

enum Flow {
    Continue,
    Found(Vec<u32>),
    Stop,
}

impl CircuitWalk<'_> {
    fn walk(&mut self, v: usize) -> Flow {
        if self.path.len() == self.used.len() {
            self.circuits += 1;
            let windows = self.path.iter().map(|&e| self.g.edges()[e].label.clone()).collect();
            let ws = WindowSequence::new(windows, true).expect("a circuit overlaps consistently");
            if let Ok(word) = realize(&ws) {
                return Flow::Found(word);
            }
            return if self.circuits >= self.budget {
                Flow::Stop
            } else {
                Flow::Continue
            };
        }
        for i in 0..self.out[v].len() {
            let e = self.out[v][i];
            if self.used[e] {
                continue;
            }
            self.steps += 1;
            if self.steps > self.step_cap {
                return Flow::Stop;
            }
            self.used[e] = true;
            self.path.push(e);
            let flow = self.walk(self.to[e]);
            self.path.pop();
            self.used[e] = false;
            if !matches!(flow, Flow::Continue) {
                return flow;
            }
        }
        Flow::Continue
    }
}

/// Enumerates Eulerian circuits of the `k`-collapsed graph in label order and
/// returns the first one that is realizable as a cyclic word.
///
/// Circuits are taken up to rotation by fixing the first window to `12…n`;
/// a rotation of a cyclic sequence carries the same constraints, so only
/// distinct circuits are counted against `budget`.
pub fn probe_ucycles(n: usize, k: usize, budget: u64) -> Result<CircuitProbe> {
    let g = check_nk(n, k)?;
    let (index, out, to) = cluster_indices(&g);
    let first = g
        .edges()
        .iter()
        .position(|e| e.label == Pattern::increasing(n))
        .unwrap_or(0);
    let start = index[&g.edges()[first].from];
    let mut walk = CircuitWalk {
        g: &g,
        out,
        to,
        used: vec![false; g.edges().len()],
        path: vec![first],
        circuits: 0,
        steps: 0,
        budget: budget.max(1),
        step_cap: budget.max(1).saturating_mul(100_000),
    };
    walk.used[first] = true;
    let next = walk.to[first];
    debug_assert!(walk.out[start].contains(&first));
    Ok(match walk.walk(next) {
        Flow::Found(word) => CircuitProbe::Found {
            word,
            circuits: walk.circuits,
        },
        Flow::Continue => CircuitProbe::Exhausted {
            circuits: walk.circuits,
        },
        Flow::Stop => CircuitProbe::BudgetExceeded {
            circuits: walk.circuits,
        },
    })
}

/// A u-cycle of length `n! − k(n − 1)`, if one of the first `budget`
/// Eulerian circuits is realizable.
pub fn generate_ucycle(n: usize, k: usize, budget: u64) -> Result<Vec<u32>> {
    match probe_ucycles(n, k, budget)? {
        CircuitProbe::Found { word, .. } => Ok(word),
        CircuitProbe::Exhausted { circuits } | CircuitProbe::BudgetExceeded { circuits } => {
            Err(Error::NotFoundWithinBudget { attempts: circuits })
        }
    }
}

/// Shape of the prefix covered by the leading restricted diamond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// The letters after the diamond start with `12…(n−1)`.
    Increasing,
    /// The letters after the diamond start with `(n−1)…1`.
    Decreasing,
}

/// A u-p-word `◊_{1,n} u₂…u_N` of length `n! + n − 2`.
///
/// The diamond covers the loop at the monotone cluster `C` (rank 1 or `n`
/// depending on the mode) and the twin in-edge of `C` (the other rank).
/// Both edges are removed and the rest of the graph is traversed by an
/// Eulerian path from `C` to the source of the removed in-edge.
pub fn construct_restricted(n: usize, mode: Mode) -> Result<PWord> {
    let g = build_clustered_graph(n)?;
    let (cluster, in_edge) = match mode {
        Mode::Increasing => {
            let mut e = vec![n as u32];
            e.extend(1..n as u32);
            (Pattern::increasing(n - 1), e)
        }
        Mode::Decreasing => {
            let mut e = vec![1];
            e.extend((2..=n as u32).rev());
            (Pattern::decreasing(n - 1), e)
        }
    };
    let in_edge = reduce(&in_edge)?;
    let loop_edge = match mode {
        Mode::Increasing => Pattern::increasing(n),
        Mode::Decreasing => Pattern::decreasing(n),
    };
    let source = in_edge.prefix(n - 1);
    let rest = g.without_labels(&[loop_edge, in_edge]);
    let letters = if rest.edges().is_empty() {
        cluster.letters().to_vec()
    } else {
        realize(&eulerian_path(&rest, &cluster, &source)?)?
    };
    let mut symbols = vec![Symbol::Restricted(RankSet::from_ranks([1, n as u32]))];
    symbols.extend(letters.into_iter().map(Symbol::Letter));
    PWord::new(symbols, n, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::factorial;
    use crate::pword::verify;

    fn p(s: &str) -> Pattern {
        Pattern::from_digits(s).unwrap()
    }

    fn members(g: &ClusteredGraph, sig: &str) -> BTreeSet<Pattern> {
        g.cluster(&p(sig)).unwrap().members.iter().cloned().collect()
    }

    fn set(list: &[&str]) -> BTreeSet<Pattern> {
        list.iter().map(|s| p(s)).collect()
    }

    fn windows_of(word: &[u32], n: usize, cyclic: bool) -> WindowSequence {
        let count = if cyclic { word.len() } else { word.len() - n + 1 };
        let windows = (0..count)
            .map(|i| {
                let w: Vec<u32> = (0..n).map(|j| word[(i + j) % word.len()]).collect();
                reduce(&w).unwrap()
            })
            .collect();
        WindowSequence::new(windows, cyclic).unwrap()
    }

    #[test]
    fn collapse_three() {
        let g = build_clustered_graph(3).unwrap();
        let c = collapse(&g, &CollapseSelection::first_k(&g, 1).unwrap()).unwrap();
        assert_eq!(members(&c, "12"), set(&["123", "121"]));
        assert_eq!(members(&c, "21"), set(&["212", "321"]));
        assert_eq!(c.edges().len(), 4);
    }

    #[test]
    fn collapse_four() {
        let g = build_clustered_graph(4).unwrap();
        let c = collapse(&g, &CollapseSelection::first_k(&g, 2).unwrap()).unwrap();
        assert_eq!(c.edges().len(), 18);
        assert!(c.clusters().all(|cl| cl.members.len() == 3));
        assert_eq!(members(&c, "123"), set(&["1234", "1243", "1231"]));
        assert!(c.is_balanced() && c.is_strongly_connected());
    }

    #[test]
    fn collapse_nothing() {
        let g = build_clustered_graph(4).unwrap();
        let c = collapse(&g, &CollapseSelection::first_k(&g, 0).unwrap()).unwrap();
        assert_eq!(c, g);
    }

    #[test]
    fn invalid_selection() {
        let g = build_clustered_graph(4).unwrap();
        assert!(CollapseSelection::first_k(&g, 3).is_err());
        assert!(CollapseSelection::new(&g, [p("321")]).is_err());
        let collapsed = collapse(&g, &CollapseSelection::first_k(&g, 1).unwrap()).unwrap();
        assert_eq!(
            CollapseSelection::first_k(&collapsed, 1),
            Err(Error::CollapsedGraph)
        );
    }

    #[test]
    fn circuits() {
        let g = build_clustered_graph(4).unwrap();
        let ws = eulerian_circuit(&g, &p("123")).unwrap();
        assert_eq!(ws.windows().len(), 24);
        let distinct: BTreeSet<&Pattern> = ws.windows().iter().collect();
        assert_eq!(distinct.len(), 24);

        let c = collapse(&g, &CollapseSelection::first_k(&g, 2).unwrap()).unwrap();
        assert_eq!(eulerian_circuit(&c, &p("123")).unwrap().windows().len(), 18);

        let g3 = build_clustered_graph(3).unwrap();
        let c3 = collapse(&g3, &CollapseSelection::first_k(&g3, 1).unwrap()).unwrap();
        let ws = eulerian_circuit(&c3, &p("12")).unwrap();
        assert_eq!(ws.windows().len(), 4);
        let expected = windows_of(&[1, 2, 3, 2, 1, 2], 3, false);
        let start = ws.windows().iter().position(|w| *w == p("123")).unwrap();
        assert_eq!(ws.rotate_open(start), expected);
    }

    #[test]
    fn unbalanced_graph_is_rejected() {
        let g = build_clustered_graph(3).unwrap().without_labels(&[p("132")]);
        assert!(matches!(eulerian_circuit(&g, &p("12")), Err(Error::NotEulerian(_))));
        assert!(eulerian_path(&g, &p("12"), &p("21")).is_err());
        assert_eq!(eulerian_path(&g, &p("21"), &p("12")).unwrap().windows().len(), 5);
    }

    #[test]
    fn realize_examples() {
        assert_eq!(realize(&windows_of(&[1, 2, 3, 2, 1, 2], 3, false)).unwrap(), vec![1, 2, 3, 2, 1, 2]);
        let ws = WindowSequence::new(vec![p("112")], false).unwrap();
        assert_eq!(realize(&ws).unwrap(), vec![1, 1, 2]);

        let printed = [1, 2, 3, 8, 4, 7, 6, 8, 7, 6, 5, 7, 8, 5, 9, 4, 2, 3, 1, 2, 3];
        let ws = windows_of(&printed, 4, false);
        let word = realize(&ws).unwrap();
        assert_eq!(word.len(), 21);
        assert_eq!(windows_of(&word, 4, false), ws);
        let u = PWord::from_letters(&word, 4, false).unwrap();
        assert!(verify(&u).is_exact_cover());

        let ws = windows_of(&printed[..18], 4, true);
        let word = realize(&ws).unwrap();
        assert_eq!(windows_of(&word, 4, true), ws);
    }

    #[test]
    fn cyclic_constraints_can_be_infeasible() {
        // Reading 12 from both positions of a length-2 cycle forces x < y < x.
        let ws = WindowSequence::new(vec![p("12"), p("12")], true).unwrap();
        assert_eq!(realize(&ws), Err(Error::InfeasibleRealization));
    }

    #[test]
    fn broken_overlap() {
        assert_eq!(
            WindowSequence::new(vec![p("123"), p("123"), p("321")], false),
            Err(Error::BrokenOverlap(1, 2))
        );
    }

    #[test]
    fn uword_123212() {
        assert_eq!(generate_uword(3, 1).unwrap(), vec![1, 2, 3, 2, 1, 2]);
    }

    #[test]
    fn uword_lengths_and_cover() {
        for n in 3..=5 {
            for k in 0..=factorial(n - 2) {
                let word = generate_uword(n, k).unwrap();
                let expected = factorial(n) + n - 1 - k * (n - 1);
                assert_eq!(word.len(), expected, "n={n} k={k}");
                let u = PWord::from_letters(&word, n, false).unwrap();
                assert!(verify(&u).is_exact_cover(), "n={n} k={k}");
                let mut equal_pairs = 0;
                for i in 0..word.len() {
                    for j in i + 1..(i + n).min(word.len()) {
                        if word[i] == word[j] {
                            assert_eq!(j - i, n - 1, "n={n} k={k}");
                            equal_pairs += 1;
                        }
                    }
                }
                assert_eq!(equal_pairs, k * (n - 1), "n={n} k={k}");
            }
        }
        assert!(generate_uword(3, 2).is_err());
        assert!(generate_uword(8, 0).is_err());
    }

    #[test]
    fn ucycles() {
        for (n, k, len) in [(3, 1, 4), (4, 2, 18), (3, 0, 6)] {
            let word = generate_ucycle(n, k, DEFAULT_CIRCUIT_BUDGET).unwrap();
            assert_eq!(word.len(), len);
            let u = PWord::from_letters(&word, n, true).unwrap();
            assert!(verify(&u).is_exact_cover(), "n={n} k={k}");
        }
    }

    #[test]
    fn restricted_words() {
        for n in 2..=5 {
            for mode in [Mode::Increasing, Mode::Decreasing] {
                let u = construct_restricted(n, mode).unwrap();
                assert_eq!(u.len(), factorial(n) + n - 2, "n={n} {mode:?}");
                assert!(verify(&u).is_exact_cover(), "n={n} {mode:?}\n{u}");
            }
        }
        let u = construct_restricted(2, Mode::Increasing).unwrap();
        assert_eq!(u.to_string(), "n=2 cyclic=0\n*{1,2} 1\n");
    }
}
