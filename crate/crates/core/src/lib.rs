//! Exact and numerical tools for tropical hypersurface geometry.
//!
//! The crate is organised in layers. At the bottom sit exact rational
//! linear algebra ([`exact`]) and a small-dimension convex hull engine
//! ([`hull`]). On top of those, [`lattice`] builds Newton polytopes and
//! regular subdivisions from lifting functions, and [`tropical`] extracts
//! corner loci of tropical polynomials as weighted polyhedral complexes,
//! checks balancing, and tests smoothness of the dual subdivision.
//!
//! The numerical layer works over the complex torus: [`puiseux`] provides
//! truncated Puiseux series, valuations, and root solving; [`amoeba`]
//! samples hypersurfaces, estimates spine coefficients by torus averages,
//! builds one-parameter coefficient families, and checks tropical
//! localization; [`hausdorff`] measures distances between sampled sets and
//! polyhedral complexes; [`pants`] and [`moment`] describe phase-space
//! fibers, pants decompositions of smooth tropical curves, and the
//! moment-map compactification.
//!
//! All randomised routines take an explicit seed and are deterministic for
//! a fixed seed, platform-independently.

pub mod amoeba;
pub mod error;
pub mod exact;
pub mod formats;
pub mod hausdorff;
pub mod hull;
pub mod lattice;
pub mod moment;
pub mod pants;
pub mod puiseux;
mod rng;
pub mod roots;
pub mod svg;
pub mod tropical;

pub use error::{Error, Result};
