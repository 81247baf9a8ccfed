//! Exact engine for Ramsey achievement games on `K_n` and `K_{n1,n2}`.
//!
//! Modules, bottom-up:
//! - [`pattern`]: target graphs, the pattern DSL and subgraph containment;
//! - [`arena`]: boards, positions, moves and terminal status;
//! - [`canonical`]: symmetry-invariant position keys;
//! - [`solver`]: exact game values, achievement numbers and the cache file;
//! - [`strategies`]: explicit player strategies as move functions;
//! - [`verifier`]: exhaustive certification of strategies, with traces.

pub mod arena;
pub mod canonical;
pub mod pattern;
pub mod solver;
pub mod strategies;
pub mod verifier;

pub use arena::{Board, BoardKind, Color, Coloring, Game, GameStatus, MoveRecord, Player, Position};
pub use canonical::{canonical_key, CanonicalKey};
pub use pattern::{parse_pattern, Family, HostGraph, PatternGraph};
pub use solver::{
    achievement_number, best_move, solve, winnability_profile, BoardFamily, Limits, Outcome, SolveError, SolveStats,
    Solver, Symmetry, TranspositionTable,
};
pub use strategies::{strategy_move, StrategyError, StrategyId, StrategyMemory, StrategyPlayer};
pub use verifier::{
    verify_blocking, verify_winning, Certificate, CounterexampleTrace, DomainPolicy, TraceResult, Verdict,
    VerifyError, VerifyMode,
};
