//! Sigma_3 Scott sentences for TFAb_r and FD_r and their bounded evaluation.

pub mod build;
pub mod corpus;
pub mod eval;
pub mod sentence;

pub use build::{
    field_axioms, group_axioms, scott_fd, scott_fd_with, scott_tfab, scott_tfab_with, FdBuilder,
    FdConfig, Lambda, PolyFormula, ScottError, TfabBuilder, TfabConfig,
};
pub use corpus::{
    structure, Kind, Structure, CORPUS, DISCRIMINATING_PAIRS, DISCRIMINATION_BOUNDS,
    DISCRIMINATION_STAGE,
};
pub use eval::{eval_bounded, eval_node, eval_node_at, Bounds, Verdict};
pub use sentence::{Atom, Complexity, Family, Gen, InfSentence, Node, Size, Term, Var};
