//! Exact metric constructions on spaces of continuous functions with open
//! domains over the real line or the unit interval.
//!
//! Everything is computed with exact rationals. Infinite series (the metrics
//! `β`, `d_γ`, `d_Fell`) are returned as certified [`Enclosure`]s.

// Errors carry exact rational witnesses.
#![allow(clippy::result_large_err)]

pub mod basis;
pub mod convergence;
pub mod error;
pub mod expr;
pub mod hyperspace;
pub mod interval;
pub mod metric;
pub mod partial_map;
pub mod rational;
pub mod sets;
pub mod space;
pub mod suites;

pub use basis::{basis_element, compact_exhaustion, enumerate_rational, BasisIndex};
pub use convergence::{
    beta_decay_report, counterexample_gamma, gamma_cauchy_check, inverse_limit_check, limit_candidate, CauchyReport,
    SequenceSpec, Verdict,
};
pub use error::{Error, Result};
pub use hyperspace::{complement_of_domain, complement_of_image, d_fell, fell_hit, fell_miss, ClosedSet};
pub use interval::{Endpoint, Interval, IntervalUnion};
pub use metric::{
    beta, beta_mn, d_gamma, empty_separation_witness, in_ball, in_compact_open, in_compact_open_inv,
    separation_radius, sup_distance, Enclosure, TruncationPlan,
};
pub use partial_map::{compose, invert, join, GammaMap, Node, PartialMap, Piece};
pub use rational::{format_rational, parse_rational, Rational};
pub use sets::{CompactSet, OpenSet, PointSet};
pub use space::AmbientSpace;
