//! Geometry of rotational surfaces in a family of smooth normed spaces.
//!
//! The ambient norm has unit sphere `(x1^2 + x2^2)^m + x3^(2m) = 1` for an
//! integer `m >= 1`. This crate computes the Birkhoff normal field of
//! surfaces of revolution about the `x3`-axis, the induced Minkowski
//! curvatures, and the profile curves with constant or vanishing curvature:
//! catenoid-like minimal profiles, spheres, spindles, barrels, cones,
//! pseudo-spheres, hyperboloid bands, lobes, unduloid-type waves and
//! nodoid-type loops. Profiles are built from their exact first integrals
//! with fold-aware quadrature, so fold radii, junction limits and periods
//! carry quadrature-grade accuracy rather than ODE-stepper accuracy.

// Reference values are written with their full printed precision, and
// validation guards use `!(x > 0.0)` deliberately so that NaN fails them.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cases;
pub mod curvature;
pub mod error;
pub mod mesh;
pub mod oracle;
pub mod profile;
pub mod quad;
pub mod space;
pub mod suite;

pub use cases::Sign;
pub use curvature::{
    a_quantity, birkhoff_gauss, curvatures_general, curvatures_graph, is_flat,
    shape_coefficients, CurvaturePair, ProfilePoint, ShapeCoefficients,
};
pub use error::{Error, Result};
pub use mesh::{
    read_obj, tessellate, tessellate_graph, tessellate_periodic, write_mesh_attributes_csv,
    write_obj, write_profile_csv, write_profile_csv_periodic, ObjData, SurfaceMesh,
};
pub use profile::{
    build_constant_h_curve, build_constant_k_curve, build_minimal_catenoid, build_nodoid,
    build_unduloid, classify_constant_h, classify_constant_k, invert_branch, verify_c2_junction,
    CaseTag, GluedCurve, Jet1D, JunctionCheck, JunctionRecord, MonotoneBranch, PeriodicCurve,
    ProfileFrame, ProfileJet, SingularEnd, SingularKind,
};
pub use quad::{
    constant_h_d1, constant_h_profile_u, constant_k_d1, constant_k_d2, constant_k_profile_u,
    integrate_endpoint_singular, minimal_d1, minimal_profile_u, nodoid_d3, tanh_sinh,
    unduloid_d2, QuadratureResult, SingularIntegrand, DEFAULT_TOL,
};
pub use space::{NormSpace, Vec3};
pub use suite::{run_suite, CheckResult, Suite};
