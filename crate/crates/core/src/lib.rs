//! Exact computations with Tate objects over concrete bases.
//!
//! The crate is organised bottom-up:
//!
//! - [`kernel`]: finite/rational fields, polynomials, Laurent polynomials and
//!   precision-tracked Laurent series;
//! - [`linalg`]: matrices over fields and over `k((t))`, with the canonical
//!   column-Hermite form over the valuation ring `k[[t]]`;
//! - [`exact`]: the split exact category of finite-dimensional vector spaces;
//! - [`diagram`]: admissible Ind/Pro diagrams, their hom spaces and straightening;
//! - [`lattice`]: lattices in `k((t))^n` (the Sato Grassmannian) and the index bundle;
//! - [`tate2`]: monomial lattices in the 2-Tate space `k((t1))((t2))`;
//! - [`places`]: places of `F_q(x)`, local expansions and residues;
//! - [`adeles`]: truncated adeles of the projective line and their cohomology;
//! - [`cli`]: the `tate` command-line front end.

pub mod kernel;
pub mod linalg;
pub mod exact;
pub mod diagram;
pub mod lattice;
pub mod tate2;
pub mod places;
pub mod adeles;
pub mod cli;
