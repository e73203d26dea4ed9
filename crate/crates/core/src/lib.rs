//! Quasi-set theory with indistinguishable micro-atoms, axiomatic
//! classical mechanics over sampled trajectories, a quasi-set variant
//! where particle identity is dynamical, and finite-dimensional quantum
//! measurement with ensemble collapse — plus a scenario runner that
//! drives all of it from config files.

// `!(x > 0.0)` guards reject NaN as well; `partial_cmp` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod mss;
pub mod qmss;
pub mod qset;
pub mod quantum;
pub mod scenario;
pub mod seeding;
pub mod vec3;
