//! Universal cycles and words for permutations.
//!
//! [`pattern`] holds order-isomorphism primitives, [`pword`] the partial-word
//! model and its coverage verifier, [`graph`] the clustered overlap graph,
//! [`shortener`] the Eulerian constructions and [`search`] the exhaustive
//! search for words with diamonds.

pub mod error;
pub mod graph;
pub mod pattern;
pub mod pword;
pub mod search;
pub mod shortener;

pub use error::{Error, ParseError, Result};
pub use graph::{
    build_clustered_graph, double_edge_cycles, find_twins, is_twins, Cluster, ClusteredGraph,
    DoubleEdgeCycle, Edge, TwinPair,
};
pub use pattern::{
    all_permutations, extend, factorial, linear_extensions, order_isomorphic, reduce, Extension,
    Pattern, PermSet,
};
pub use pword::{
    coverage_count, diamondicity, structural_feasibility, verify, window_coverage, CoverageReport,
    PWord, RankSet, Symbol, Verdict, Violation,
};
pub use shortener::{
    collapse, construct_restricted, eulerian_circuit, eulerian_path, generate_ucycle,
    generate_uword, probe_ucycles, realize, CircuitProbe, CollapseSelection, Mode,
    RealizationConstraints, WindowSequence,
};
pub use search::{
    confirm_nonexistence, probe_conjecture1, search, search_all, search_parallel, CaseReport,
    DiamondPolicy, NonexistenceReport, PruneCounts, SearchOutcome, SearchResult, SearchSpec,
    SearchStats, Slot, TheoremId, TheoremOptions, Ties,
};
