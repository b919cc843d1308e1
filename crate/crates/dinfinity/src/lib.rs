//! Scott-topology c.p.o.s, the D-infinity function-space tower as a
//! lambda-model, strict infinity-groupoids built from homotopy groups, exact
//! symbolic step paths on finite spaces, and the path-length semantics of
//! beta-conversion proofs — all executable and checked against independent
//! brute-force oracles at desk scale.
//!
//! The crate is organized in layers:
//!
//! - [`order`] — finite posets, c.p.o. certification, Scott opens,
//!   continuity, and monotone function-space enumeration;
//! - [`tower`] — the truncated tower `D_0, [D_0 -> D_0], ...` with its
//!   projection pairs and application;
//! - [`lambda`] — untyped lambda terms, beta conversion proofs, and the
//!   denotational interpretation into a tower;
//! - [`steppath`] — exact piecewise-constant paths on finite spaces, with
//!   symbolic continuity checking and the path products;
//! - [`homotopy`] — the independent homotopy oracle: order complexes, path
//!   components, fundamental-group presentations, contractibility;
//! - [`groupoid`] — globular sets, the strict-axiom checker, and the
//!   groupoid of homotopy-group cells over a space;
//! - [`proofpath`] — proof chains interpreted as concatenated paths with
//!   time-period counting;
//! - [`corpus`] — the fixed spaces, terms, paths, and proof chains shipped
//!   with the crate;
//! - [`verify`] — the acceptance checks behind `dinfinity verify all`.
//!
//! See the `examples/` directory for one runnable walk-through per
//! capability, and the `dinfinity` binary for the file-driven CLI.

pub mod corpus;
pub mod homotopy;
pub mod lambda;
pub mod tower;
pub mod order;
