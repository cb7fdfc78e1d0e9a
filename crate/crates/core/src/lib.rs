//! Finite-group obstructions for smooth actions on homology 3- and 4-spheres.
//!
//! The crate builds permutation representations of small groups, probes
//! their subgroup structure, enumerates Borel-consistent fixed-point
//! dimension functions, and combines everything into per-group verdicts.

pub mod cli;
pub mod constructors;
pub mod fixdim;
pub mod gf;
pub mod group;
pub mod perm;
pub mod subgroups;
pub mod rules;
pub mod structure;
