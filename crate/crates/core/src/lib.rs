//! Exact model counting for dense CNF formulas by inclusion-exclusion over
//! clause intersections, plus the tooling around it: instance generators, a
//! truth-table oracle, DIMACS I/O, overlap combinatorics and a benchmark
//! harness.
//!
//! ```
//! use densesat_core::{count_models, EngineConfig, Formula};
//!
//! let f = Formula::from_dimacs(3, &[&[-1, 2], &[2, 3], &[-2, -3], &[1, -2, 3]]).unwrap();
//! let count = count_models(&f, &EngineConfig::default()).unwrap();
//! assert_eq!(count.solutions, 2u32.into());
//! ```

pub mod combinatorics;
pub mod dimacs;
pub mod engine;
pub mod error;
pub mod generator;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod solutions;

pub use combinatorics::{
    classify_density, expected_overlaps, p_overlap, DensityReport, OverlapQuery, TripleModel,
    TupleSize,
};
pub use dimacs::{
    parse_dimacs, write_dimacs, Diagnostic, DiagnosticKind, ParseDiagnostics, Parsed,
};
pub use engine::{count_clauses, count_models, intersect, CountAccumulator, EngineConfig};
pub use error::{Error, Result};
pub use generator::{
    best_case_instance, random_instance, worst_case_instance, ClauseWidth, DensityType, GenSpec,
    SplitMix64,
};
pub use harness::{
    read_rows, run_grid, scaling_report, write_rows, BenchGrid, BenchRow, ScalingReport,
};
pub use model::{
    evaluate, Assignment, Clause, Formula, Lit, ModelCount, Pattern, RunStats, Sign, SignedPattern,
    Verdict,
};
pub use oracle::{brute_force_count, brute_force_models, OracleLimit};
pub use solutions::{
    filter_clauses, find_solution, per_literal_counts, LiteralCount, LiteralCountReport,
    LiteralPriority, Solution,
};
