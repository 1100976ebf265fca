//! Shortest-fence Poincaré constants of convex planar bodies.
//!
//! Modules:
//! - [`convex2d`]: convex bodies and their scalar functionals;
//! - [`widthbody`]: curvature functions of unit-width bodies;
//! - [`fencesolver`]: optimal chord/arc fences and closed forms;
//! - [`weighted1d`]: weighted one-dimensional bounds and constants;
//! - [`equipartition`]: balanced recursive bisection of a field;
//! - [`harness`]: body specs, campaigns and result emission.

pub mod convex2d;
pub mod fencesolver;
pub mod harness;
pub mod equipartition;
pub mod error;
pub mod weighted1d;
pub mod widthbody;

pub use error::{Error, Result};
