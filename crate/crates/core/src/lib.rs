//! Tropical hypersurfaces in R^2 and R^3, their piecewise-linear Lagrangian
//! lifts in M_R x T, and smooth Lagrangian lifts built from pairs of pants.
//!
//! The crate is split in two layers. The exact layer ([`exact`], [`polyhedral`],
//! [`tropical`]) does all polytope and duality work in rational arithmetic.
//! The analytic layer ([`coamoeba`], [`pants`], [`projections`], [`lift`])
//! works in f64 and is validated by the sampling batteries in [`verify`].

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod coamoeba;
pub mod exact;
pub mod export;
pub mod lift;
pub mod numerics;
pub mod pants;
pub mod polyhedral;
pub mod projections;
pub mod tropical;
pub mod verify;

pub use polyhedral::{LatticePoint, LatticePolytope, LiftingFunction, Subdivision};
pub use tropical::{StandardHyperplane, TropicalCell, TropicalComplex};
