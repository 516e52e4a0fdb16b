//! Exact symbolic workbench for Leavitt path algebras of finite graphs.
//!
//! * [`graph`]: finite directed multigraphs, paths, structural predicates.
//! * [`qfield`]: exact arithmetic and order on ℚ(√2).
//! * [`branching`]: algebraic branching systems on half-open intervals.
//! * [`algebra`]: elements of `L_ℚ(E)`, products and a canonical normal form.
//! * [`rep`]: the induced representation on finitely supported functions and
//!   the semantic zero test.
//! * [`equivrep`]: finite-dimensional matrix representations, B2B bases and
//!   intertwiners.

#![allow(clippy::len_without_is_empty, clippy::result_large_err, clippy::large_enum_variant)]

pub mod algebra;
pub mod gen;
pub mod graph;
pub mod branching;
pub mod equivrep;
pub mod par;
pub mod qfield;
pub mod rep;
