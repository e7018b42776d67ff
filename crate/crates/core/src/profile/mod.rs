//! Construction and evaluation of the complete profile curves.
//!
//! A profile curve is assembled from monotone graph branches `u -> alpha(u)`
//! (each governed by one family first integral) glued at folds where
//! `alpha' = 0`. The glue is C^2: the quantity
//! `g = alpha'' * |alpha'|^(-(2m-2)/(2m-1))` extends continuously across a
//! fold with a computable limit, and the junction checks here verify that
//! numerically from both sides. Curves that close up periodically (unduloid-
//! and nodoid-type) get a dedicated wrapper that reduces parameters modulo
//! the period and tracks the height shift per period.

mod branch;
mod glued;
mod periodic;

pub use branch::{invert_branch, MonotoneBranch};
pub use glued::{
    build_constant_h_curve, build_constant_k_curve, build_minimal_catenoid, GluedCurve,
};
pub(crate) use glued::sphere_dome_jet;
pub use periodic::{build_nodoid, build_unduloid, PeriodicCurve};

use crate::cases::Sign;
use crate::error::{Error, Result};
use crate::space::NormSpace;

/// Second-order jet of the radius as a graph over the height parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileJet {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub alpha_second: f64,
}

/// Full second-order frame of a parametrized profile curve
/// `t -> (alpha(t), beta(t))`. Graph curves have `beta = t`; arc-assembled
/// curves use whichever of radius or height is the regular local parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileFrame {
    pub alpha: f64,
    pub beta: f64,
    pub dalpha: f64,
    pub dbeta: f64,
    pub ddalpha: f64,
    pub ddbeta: f64,
}

impl ProfileFrame {
    /// Position `(alpha, beta)` of the profile point.
    pub fn point(&self) -> (f64, f64) {
        (self.alpha, self.beta)
    }

    /// The frame as curvature-formula input.
    pub fn profile_point(&self) -> crate::curvature::ProfilePoint {
        crate::curvature::ProfilePoint::new(
            self.alpha,
            self.dalpha,
            self.ddalpha,
            self.dbeta,
            self.ddbeta,
        )
    }
}

/// Anything that can produce the jet `(alpha, alpha', alpha'')` at a
/// parameter value. Implemented by curves and by plain closures, which makes
/// the verification helpers usable on synthetic profiles in tests.
pub trait Jet1D {
    fn jet1d(&self, x: f64) -> Result<(f64, f64, f64)>;
}

impl<F> Jet1D for F
where
    F: Fn(f64) -> (f64, f64, f64),
{
    fn jet1d(&self, x: f64) -> Result<(f64, f64, f64)> {
        Ok(self(x))
    }
}

/// Which of the classified profile shapes a built curve realises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// Catenoid-like minimal profile with a waist and bounded height.
    Minimal,
    /// Unit-curvature sphere profile (k = +1, c1 = 0).
    KSphere,
    /// Closed spindle through the axis (k = +1, 0 < c1 < 1).
    KSpindle,
    /// Barrel between two rim circles (k = +1, c1 < 0).
    KBarrel,
    /// Pseudo-sphere-like profile with unbounded height (k = -1, c1 = 1).
    KPseudosphere,
    /// Cone-to-rim profile of finite height (k = -1, 0 < c1 < 1).
    KConic,
    /// Hyperboloid-like band between rims (k = -1, c1 > 1).
    KHyperboloid,
    /// Single lobe of the h = +1 profile between rim and fold.
    HLobe,
    /// Unit sphere as the c = 0 member of the h = -1 family.
    HSphere,
    /// Periodic wave between two fold radii (h = -1, 0 < c3 < 1/4).
    HUnduloid,
    /// Overlapping periodic profile assembled from four arcs
    /// (h = -1 legs with c = -c1 joined to h = +1 legs).
    HNodoid,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseTag::Minimal => "minimal",
            CaseTag::KSphere => "k-sphere",
            CaseTag::KSpindle => "k-spindle",
            CaseTag::KBarrel => "k-barrel",
            CaseTag::KPseudosphere => "k-pseudosphere",
            CaseTag::KConic => "k-conic",
            CaseTag::KHyperboloid => "k-hyperboloid",
            CaseTag::HLobe => "h-lobe",
            CaseTag::HSphere => "h-sphere",
            CaseTag::HUnduloid => "h-unduloid",
            CaseTag::HNodoid => "h-nodoid",
        };
        f.write_str(s)
    }
}

/// Classify the constant-k case by the sign of k and the first-integral
/// constant `c1`.
pub fn classify_constant_k(space: &NormSpace, k: Sign, c1: f64) -> Result<CaseTag> {
    let _ = space;
    if !c1.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    match k {
        Sign::Plus => {
            if c1 == 0.0 {
                Ok(CaseTag::KSphere)
            } else if c1 > 0.0 && c1 < 1.0 {
                Ok(CaseTag::KSpindle)
            } else if c1 < 0.0 {
                Ok(CaseTag::KBarrel)
            } else {
                Err(Error::domain(format!("k = +1 profiles need c1 < 1, got {c1}")))
            }
        }
        Sign::Minus => {
            if c1 == 1.0 {
                Ok(CaseTag::KPseudosphere)
            } else if c1 > 0.0 && c1 < 1.0 {
                Ok(CaseTag::KConic)
            } else if c1 > 1.0 {
                Ok(CaseTag::KHyperboloid)
            } else {
                Err(Error::domain(format!("k = -1 profiles need c1 > 0, got {c1}")))
            }
        }
    }
}

/// Classify the constant-h case by the sign of h and the first-integral
/// constant.
pub fn classify_constant_h(space: &NormSpace, h: Sign, c: f64) -> Result<CaseTag> {
    let _ = space;
    if !c.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    match h {
        Sign::Plus => {
            if c > 0.0 {
                Ok(CaseTag::HLobe)
            } else {
                Err(Error::domain(format!("h = +1 profiles need c > 0, got {c}")))
            }
        }
        Sign::Minus => {
            if c == 0.0 {
                Ok(CaseTag::HSphere)
            } else if c > 0.0 && c < 0.25 {
                Ok(CaseTag::HUnduloid)
            } else if c < 0.0 {
                Ok(CaseTag::HNodoid)
            } else {
                Err(Error::domain(format!("h = -1 profiles need c < 1/4, got {c}")))
            }
        }
    }
}

/// A fold where two branches are glued, with the expected two-sided limit of
/// `g = alpha'' |alpha'|^(-(2m-2)/(2m-1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionRecord {
    /// Parameter value of the junction (u for glued curves, t for periodic).
    pub u: f64,
    /// Fold radius.
    pub alpha: f64,
    /// Expected limit of g from both sides.
    pub expected_g: f64,
}

/// Result of a two-sided C^2 junction probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionCheck {
    pub expected: f64,
    /// Extrapolated limit of g from below / above the junction.
    pub left: f64,
    pub right: f64,
    /// Extrapolated one-sided limits of alpha''; zero at a fold.
    pub alpha_second_left: f64,
    pub alpha_second_right: f64,
    pub within: bool,
}

impl JunctionCheck {
    /// Largest deviation of the two one-sided limits from the expectation.
    pub fn deviation(&self) -> f64 {
        (self.left - self.expected).abs().max((self.right - self.expected).abs())
    }
}

/// How a profile curve ends at a boundary of its maximal domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularKind {
    /// Meets the axis with a finite slope: an actual cone vertex.
    ConePoint { slope: f64 },
    /// Meets the axis with a vertical profile tangent (smooth surface pole).
    Pole,
    /// Vertical profile tangent at positive radius: cusp edge of the
    /// revolved surface.
    Rim,
    /// The radius is unbounded while the height converges.
    UnboundedRadius,
    /// The height diverges while the radius approaches the axis.
    UnboundedHeight,
}

/// A singular endpoint of the curve's maximal domain. `u` or `alpha` may be
/// infinite for unbounded ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularEnd {
    pub u: f64,
    pub alpha: f64,
    pub kind: SingularKind,
}

/// The fold-continuity quantity `g = alpha'' |alpha'|^(-(2m-2)/(2m-1))`.
pub(crate) fn g_of_jet(space: &NormSpace, alpha_prime: f64, alpha_second: f64) -> f64 {
    let e = (2.0 * space.mf() - 2.0) / space.qf();
    alpha_second * alpha_prime.abs().powf(-e)
}

/// Curvature pair at a fold, obtained from the g-limit: the graph-form
/// curvature expressions extend continuously to `alpha' = 0` with
/// `k = -g/((2m-1) alpha)` and `h = (alpha g - (2m-1)) / (2 (2m-1) alpha)`.
pub(crate) fn junction_curvatures(
    space: &NormSpace,
    alpha: f64,
    g: f64,
) -> crate::curvature::CurvaturePair {
    let q = space.qf();
    crate::curvature::CurvaturePair {
        k: -g / (q * alpha),
        h: (alpha * g - q) / (2.0 * q * alpha),
    }
}

/// Aitken-accelerated one-sided limit of a sampled quantity at geometrically
/// shrinking offsets h, h/2, h/4.
fn aitken_limit(g1: f64, g2: f64, g3: f64) -> f64 {
    let d1 = g2 - g1;
    let d2 = g3 - g2;
    let dd = d2 - d1;
    if dd.abs() > 1e-300 * d2.abs().max(1.0) {
        let acc = g3 - d2 * d2 / dd;
        if acc.is_finite() {
            return acc;
        }
    }
    g3
}

/// Probe the C^2 gluing condition at `x0`: extrapolate
/// `g = alpha'' |alpha'|^(-(2m-2)/(2m-1))` from both sides using offsets
/// `probe`, `probe/2`, `probe/4`, and compare with `expected`. `tol` is
/// relative to `max(1, |expected|)`.
pub fn verify_c2_junction<J: Jet1D + ?Sized>(
    space: &NormSpace,
    source: &J,
    x0: f64,
    probe: f64,
    expected: f64,
    tol: f64,
) -> Result<JunctionCheck> {
    if !(probe > 0.0) || !x0.is_finite() || !expected.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let side = |dir: f64| -> Result<(f64, f64)> {
        let mut gs = [0.0; 3];
        let mut dds = [0.0; 3];
        for (i, scale) in [1.0, 0.5, 0.25].iter().enumerate() {
            let (_, da, dda) = source.jet1d(x0 + dir * probe * scale)?;
            gs[i] = g_of_jet(space, da, dda);
            dds[i] = dda;
        }
        Ok((aitken_limit(gs[0], gs[1], gs[2]), aitken_limit(dds[0], dds[1], dds[2])))
    };
    let (left, dd_left) = side(-1.0)?;
    let (right, dd_right) = side(1.0)?;
    let scale = expected.abs().max(1.0);
    let within = (left - expected).abs() <= tol * scale && (right - expected).abs() <= tol * scale;
    Ok(JunctionCheck {
        expected,
        left,
        right,
        alpha_second_left: dd_left,
        alpha_second_right: dd_right,
        within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn classification_covers_the_parameter_line() {
        let space = NormSpace::new(2).unwrap();
        assert_eq!(classify_constant_k(&space, Sign::Plus, 0.0).unwrap(), CaseTag::KSphere);
        assert_eq!(classify_constant_k(&space, Sign::Plus, 0.3).unwrap(), CaseTag::KSpindle);
        assert_eq!(classify_constant_k(&space, Sign::Plus, -2.0).unwrap(), CaseTag::KBarrel);
        assert!(classify_constant_k(&space, Sign::Plus, 1.0).is_err());
        assert_eq!(classify_constant_k(&space, Sign::Minus, 1.0).unwrap(), CaseTag::KPseudosphere);
        assert_eq!(classify_constant_k(&space, Sign::Minus, 0.8).unwrap(), CaseTag::KConic);
        assert_eq!(classify_constant_k(&space, Sign::Minus, 4.0).unwrap(), CaseTag::KHyperboloid);
        assert!(classify_constant_k(&space, Sign::Minus, -0.5).is_err());
        assert_eq!(classify_constant_h(&space, Sign::Plus, 2.0).unwrap(), CaseTag::HLobe);
        assert!(classify_constant_h(&space, Sign::Plus, 0.0).is_err());
        assert_eq!(classify_constant_h(&space, Sign::Minus, 0.0).unwrap(), CaseTag::HSphere);
        assert_eq!(classify_constant_h(&space, Sign::Minus, 0.1).unwrap(), CaseTag::HUnduloid);
        assert_eq!(classify_constant_h(&space, Sign::Minus, -2.0).unwrap(), CaseTag::HNodoid);
        assert!(classify_constant_h(&space, Sign::Minus, 0.25).is_err());
    }

    #[test]
    fn junction_probe_recovers_a_synthetic_fold() {
        // alpha(u) = 1 + u^(2m) folds at u = 0 with
        // g -> (2m-1) * (2m)^(1/(2m-1)) there
        let space = NormSpace::new(2).unwrap();
        let tm = 4.0_f64;
        let profile = move |u: f64| {
            (1.0 + u.powi(4), tm * u.powi(3), tm * 3.0 * u * u)
        };
        let expected = 3.0 * tm.powf(1.0 / 3.0);
        let check = verify_c2_junction(&space, &profile, 0.0, 1e-2, expected, 1e-6).unwrap();
        assert!(check.within, "left {} right {} expected {}", check.left, check.right, expected);
        assert_relative_eq!(check.left, expected, max_relative = 1e-7);
        assert!(check.alpha_second_left.abs() < 1e-3);
    }

    #[test]
    fn junction_curvature_extension_matches_graph_limit() {
        // approach a fold along the synthetic profile above and compare the
        // graph curvature formulas with the junction extension
        let space = NormSpace::new(2).unwrap();
        let u = 1e-3_f64;
        let (al, da, dda) = (1.0 + u.powi(4), 4.0 * u.powi(3), 12.0 * u * u);
        let near = crate::curvature::curvatures_graph(&space, al, da, dda).unwrap();
        let g = g_of_jet(&space, da, dda);
        let at = junction_curvatures(&space, 1.0, 3.0 * 4.0_f64.powf(1.0 / 3.0));
        assert_relative_eq!(near.k, at.k, max_relative = 1e-2);
        assert_relative_eq!(near.h, at.h, max_relative = 1e-2);
        assert_relative_eq!(g, 3.0 * 4.0_f64.powf(1.0 / 3.0), max_relative = 1e-5);
    }
}
