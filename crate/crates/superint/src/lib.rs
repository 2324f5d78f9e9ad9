//! Symbolic–numeric toolkit for fifth-order integrals of motion of
//! two-dimensional Cartesian-separable quantum Hamiltonians
//! H = p₁² + p₂² + V₁(x) + V₂(y).
//!
//! The symbolic layer regenerates the determining equations for a general
//! fifth-order integral, specializes them to doubly exotic potentials, and
//! verifies the resulting catalogue of nine quantum systems Q1–Q9 by exact
//! operator arithmetic. The numeric layer integrates the defining nonlinear
//! ODEs of the potentials (Painlevé transcendents, elliptic and
//! polynomial-class equations), cross-checks commutation on grids, and
//! computes the bound-state spectrum of the confining system Q2.

pub mod determining;
pub mod error;
pub mod exotic;
pub mod expr;
pub mod opalg;

pub use error::{Error, Result};
pub use expr::{Atom, Coord, Dep, Expr, FunAtom, GRat, Mono, ReductionRule, RuleSet, Sym, SymbolTable};
