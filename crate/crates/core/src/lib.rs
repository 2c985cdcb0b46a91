//! Semantic-preserving perturbations of Java code, a repair harness for
//! LLM-backed program repair, and the robustness metrics built on top.

pub mod harness;
pub mod metrics;
pub mod mr;
pub mod mutant;
pub mod syntax;
