//! Many-particle interference hierarchies behind multi-slit gratings.
//!
//! The crate computes M-particle correlation signals `G⁽ᴹ⁾` of N-slit
//! gratings, the Nth-order M-particle interference terms `I⁽ᴹ⁾_N` obtained by
//! inclusion-exclusion over slit sub-combinations, and the generalized Sorkin
//! parameters `κ⁽ᴹ⁾` built from them. Every hierarchy quantity has a second,
//! brute-force route through explicit path-pair enumeration ([`paths`]).
//!
//! ```
//! use born_hierarchy::{hierarchy, optics::{DetectorPhases, SlitSet}};
//!
//! let slits = SlitSet::contiguous(5).unwrap();
//! let phases = DetectorPhases::fixed_scan(2, 1.3).unwrap();
//! let i5 = hierarchy::interference(2, &slits, &phases).unwrap();
//! assert!(i5.value.abs() < 1e-9);
//! ```

pub mod combinatorics;
pub mod correlation;
pub mod error;
pub mod hierarchy;
pub mod optics;
pub mod paths;
pub mod sensitivity;
pub mod summation;

pub use error::{Error, Result};
