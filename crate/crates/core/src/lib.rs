//! Exact arithmetic for the space of integral binary cubic forms.
//!
//! The crate covers, at desk scale, the finite computations attached to the
//! prehomogeneous vector space of binary cubic forms:
//!
//! - [`forms`]: the twisted `GL2` action, covariants, pairings and the
//!   Delone-Faddeev cubic-ring construction, generic over `Z` and `Z/NZ`;
//! - [`residue`]: Dirichlet characters with conductor data, classical Gauss
//!   and Jacobi sums, and p-adic character lifts;
//! - [`cyclotomic`]: exact sums of roots of unity with a rational-equality
//!   decision procedure;
//! - [`atlas`]: orbit classification of `V(Z/p^eZ)`, stabilizers, censuses
//!   and maximality detectors;
//! - [`gauss`]: orbital Gauss sums, finite Fourier transforms and the table
//!   verification drivers;
//! - [`shintani`]: class-number enumeration by bounded discriminant with the
//!   Ohno-Nakagawa cross-check;
//! - [`density`]: local densities, residue assembly, gamma-factor matrices
//!   and progression bias constants;
//! - [`report`]: verification report plumbing shared by the CLI.

pub mod atlas;
pub mod cyclotomic;
pub mod density;
pub mod forms;
pub mod gauss;
pub mod report;
pub mod residue;
pub mod ring;
pub mod shintani;
pub mod special;

pub use report::{Cell, VerificationReport};
