//! Zero-entropy dynamics: unipotent torus maps, the Furstenberg encoding of
//! polynomial phases, quasi-discrete-spectrum samples, nilrotations, and
//! expanding maps.

mod expanding;
mod nil;
mod poly;
mod quasi;
mod torus;

pub use expanding::{expanding_orbit, ExpandingMap, OrbitStart};
pub use nil::{heisenberg_orbit, heisenberg_start, UnipotentElement, MAX_NIL_SIZE};
pub use poly::{binomial_big, Basis, PhaseStepper, RealPoly, MAX_POLY_DEGREE};
pub use quasi::{quasi_eigen_eval, QuasiEigenData};
pub use torus::{
    furstenberg_encode, iterate, poly_orbit_eval, skew_product, write_orbit_csv, AffineTorusMap,
    Character, FurstenbergEncoding, TorusPoint,
};
