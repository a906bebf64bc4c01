//! Exact-arithmetic workbench for algebraic combinatorics around branching
//! of level-zero representations of quantum affine algebras.
//!
//! Everything is computed over exact big-rational coefficients; there is no
//! floating point anywhere in this crate. The main layers, bottom up:
//!
//! - [`exactring`]: Laurent polynomials in `q`, bivariate polynomials and
//!   rational functions in `(q, t)`, and truncated series in `q^{-1}`.
//! - [`shapes`]: partitions, horizontal strips, Gaussian binomials.
//! - [`symfun`]: Schur and Macdonald polynomials via branching recursions,
//!   Littlewood-Richardson coefficients, and the class-ring projections.
//! - [`afflattice`]: the affine weight/coweight lattices of type A, the
//!   affine Weyl group, and the rank-raising embedding maps.
//! - [`demchar`]: graded characters of level-zero Demazure submodules and
//!   the direct-sum/branching verifiers built on them.
//! - [`qrep`]: an explicit truncated model of affinized fundamental modules
//!   with Chevalley generator actions, divided powers, the rank-raising
//!   pullback action, and structural verifiers.
//! - [`suite`]: the full verification matrix used by the CLI and the
//!   acceptance tests.
//!
//! Reference implementations used to cross-check derived formulas live in
//! [`oracles`]; they are deliberately naive and independent of the main
//! code paths.

pub mod afflattice;
pub mod demchar;
pub mod exactring;
pub mod oracles;
pub mod qrep;
pub mod report;
pub mod shapes;
pub mod suite;
pub mod symfun;
