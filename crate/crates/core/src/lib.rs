//! Higher-spin XXZ systems on finite graphs, viewed as many-particle
//! Schrödinger operators on configuration graphs.
//!
//! The crate builds the anisotropic spin-J Heisenberg Hamiltonian
//!
//! ```text
//!   H_G = Σ_{x~y} h_xy,    h_xy = J² − (1/2Δ)(S⁺ₓS⁻ᵧ + S⁻ₓS⁺ᵧ) − S³ₓS³ᵧ
//! ```
//!
//! on a finite graph G, and the unitarily equivalent operator
//! `−(1/2Δ)·A_N + V_N` on the N-particle configuration graph with maximal
//! local occupation M = 2J: vertices are occupation functions summing to N,
//! edges move a single particle along a base edge with a weight derived from
//! the spin raising/lowering matrix elements, and `V_N` is the interaction
//! potential that energetically favors droplet configurations.
//!
//! On top of that sit symmetric eigensolvers (dense and block Krylov),
//! exact eigenvalue counting by matrix inertia, and gap certificates: energy
//! intervals above the droplet band that are provably free of spectrum,
//! obtained from a two-set partition of the configuration space via the
//! boundary-hopping norm bound `‖B‖ ≤ √(d₁d₂)`.
//!
//! Modules:
//! - [`spin`]: single-site spin matrices and the two-site Hamiltonian
//! - [`lattice`]: finite base graphs (paths, cycles, strips, cylinders, edge lists)
//! - [`config`]: configuration-graph enumeration, weights, potential, assembly
//! - [`sparse`]: row-compressed symmetric matrices with block mat-vec
//! - [`hamiltonian`]: full-space spin Hamiltonians, sector restriction,
//!   and the numerical unitary-equivalence check
//! - [`spectral`]: dense and iterative symmetric eigensolvers, inertia counts,
//!   droplet-band extraction
//! - [`gap`]: droplet sets, boundary quantities, and certified gap intervals
//! - [`io`]: serialization of configuration spaces and operators

pub use nalgebra;

pub mod config;
pub mod error;
pub mod gap;
pub mod hamiltonian;
pub mod io;
pub mod lattice;
pub mod sparse;
pub mod spectral;
pub mod spin;

pub use config::{Caps, ConfigSpace, PotentialVector, SchrodingerOps, WeightedConfigEdge};
pub use error::{Error, Result};
pub use gap::{BoundaryQuantities, GapCertificate, Partition, VerifyReport};
pub use lattice::BaseGraph;
pub use sparse::SparseSym;
pub use spectral::{SpectrumResult, SymOp};
pub use spin::SpinParams;
