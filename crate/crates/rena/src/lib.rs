// SPDX-License-Identifier: Apache-2.0

//! Exact and asymptotic analysis of regular-expression classes.
//!
//! The crate works with two classes of expressions over a `k`-letter
//! alphabet: the full class, and the restricted class in which the
//! absorbing pattern `(σ_{i_1}+⋯+σ_{i_k})*` never appears as a union
//! operand (writing `α + Σ* = Σ*` makes such expressions collapse under
//! simplification, so the restricted class removes that redundancy).
//!
//! What's here:
//!
//! - [`expr`] — syntax trees, the text format, and the class predicates;
//! - [`series`] — exact arbitrary-precision counting series for both
//!   classes and for the letter/First/Follow/transition aggregates;
//! - [`enumeration`] — the exhaustive brute-force oracle;
//! - [`glushkov`] — position automata, set- and count-level;
//! - [`sampler`] — exact uniform random generation by the recursive method;
//! - [`asymptotics`] — dominant singularities, asymptotic constants and the
//!   per-size transition slope;
//! - [`stats`] — the small statistics kit used by the test harnesses.
//!
//! The `rena` binary exposes all of it as subcommands; see the README.

pub mod asymptotics;
pub mod enumeration;
pub mod expr;
pub mod glushkov;
pub mod hp;
pub mod sampler;
pub mod series;
pub mod stats;

pub use expr::{parse, Expr, ParseError, SizeMetrics};
pub use glushkov::{build_glushkov, count_functions, position_sets, GlushkovNfa, PositionSets};
pub use series::CoeffTable;
