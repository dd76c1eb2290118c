//! Definable set systems on trees and tree-like graphs.
//!
//! This crate compiles CMSO formulas over labeled binary trees into
//! deterministic bottom-up tree automata, derives formula-definable set
//! systems on finite relational structures, and verifies polynomial growth
//! bounds for those systems on trees, bounded-cliquewidth graphs and
//! bounded-treewidth graphs, together with the grid-based shattering
//! constructions that show the bounds are tight.
//!
//! The main pipelines are:
//!
//! * [`logic`]: CMSO abstract syntax, a text parser, and a brute-force
//!   model checker that serves as the correctness oracle everywhere else.
//! * [`automata`] + [`compiler`]: the algebra of deterministic bottom-up
//!   tree automata and the formula-to-automaton translation over augmented
//!   trees.
//! * [`compression`]: anchor sets, contracted trees, context state
//!   transformations and the emulation automaton that yield the explicit
//!   `c * |A|^|y|` bound on restrictions of definable set systems.
//! * [`transduce`] + [`width`]: logical transductions, backwards
//!   translation, cliquewidth k-expressions and the tree interpretation
//!   that lifts the tree bound to graph classes.
//! * [`gridlab`]: the binary-counter shattering construction on grids and
//!   its pull-backs.
//!
//! Enumeration-heavy inner loops (parameter tuples, marker valuations,
//! subset scans) run through [`exec`], which is backed by rayon when the
//! default `parallel` feature is enabled and by plain loops otherwise.

pub mod exec;
pub mod logic;
pub mod setsys;
pub mod structures;
pub mod util;
