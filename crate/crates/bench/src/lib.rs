//! Shared fixtures for the criterion benchmarks.

use birkhoff::{build_nodoid, build_unduloid, NormSpace, PeriodicCurve, ProfilePoint};

pub fn space(m: u32) -> NormSpace {
    NormSpace::new(m).expect("valid exponent")
}

pub fn unduloid(m: u32) -> PeriodicCurve {
    build_unduloid(&space(m), 0.1, 0.0).expect("standard unduloid")
}

pub fn nodoid(m: u32) -> PeriodicCurve {
    build_nodoid(&space(m), 2.0, 0.0).expect("standard nodoid")
}

/// A well-conditioned profile jet away from folds and the axis.
pub fn generic_jet() -> ProfilePoint {
    ProfilePoint::new(1.3, 0.7, -0.4, 1.0, 0.2)
}
