//! Numerical kernels for squeezed-light generation in coupled microring
//! add-drop filters.
//!
//! * [`fock`]: truncated-Fock-space ladder algebra, displacement and squeeze
//!   operators, displaced squeezed vacua and their observables.
//! * [`wigner`]: phase-space quasi-probability of a pure state.
//! * [`wavepacket`]: Gaussian slowly varying envelope on a displacement grid.
//! * [`sfg`]: signal-flow graphs, simple-cycle enumeration and Mason's gain
//!   rule, with a direct linear solve as a cross-check.
//! * [`netlist`]: line-oriented ring circuit description.
//! * [`ring`]: lowering of ring circuits to signal-flow graphs, wavelength
//!   sweeps and the pump-to-squeeze mapping.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `Float` is redundant whenever std float methods are in scope (tests, or
// dev-dependencies enabling num-traits/std)
#![allow(unused_imports)]

extern crate alloc;

pub mod expm;
pub mod fock;
pub mod linalg;
pub mod netlist;
pub mod ring;
pub mod sfg;
pub mod wavepacket;
pub mod wigner;

pub use num_complex::Complex64;
