//! Computational toolkit for word metrics and Assouad-Nagata dimension
//! control on wreath products `H ≀ G` with `H` finite.
//!
//! * [`group`]: marked groups, canonical encodings, virtually-ℤ structures.
//! * [`cayley`]: ball enumeration and exact word lengths by BFS.
//! * [`wreath`]: `H ≀ G` elements, bulbs and the bulb normal form.
//! * [`covers`]: r-components, Lebesgue numbers, control functions.
//! * [`cubes`]: lattice covers and r-cube lower-bound certificates.
//! * [`ballstore`]: content-addressed cache of enumerated balls.

pub mod ballstore;
pub mod cayley;
pub mod config;
pub mod covers;
pub mod cubes;
pub mod error;
pub mod group;
pub mod rational;
pub mod suite;

pub use cayley::{Ball, CayleyGraph, Explorer, SpecHash};
pub use error::{Error, Result};
pub use group::{GroupElement, MarkedGroup, VirtuallyZStructure};
pub use rational::Rational;
pub mod wreath;
pub use wreath::{WreathContext, WreathElement};
