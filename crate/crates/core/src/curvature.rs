//! Curvature of rotational surfaces with respect to the Birkhoff normal.
//!
//! A rotational surface is parametrised as
//! `f(u, v) = (alpha(u) cos v, alpha(u) sin v, beta(u))` with `alpha > 0`.
//! Its transversal direction is not the Euclidean normal but the Birkhoff
//! normal: the direction eta(u) with unit norm that is Birkhoff-orthogonal
//! to the tangent plane. All exponents below have the odd denominator
//! `2m - 1`, taken with the real-branch convention of
//! [`signed_frac_pow`](crate::space::signed_frac_pow); this is what makes the
//! formulas valid on profile arcs where `alpha'` or `beta'` change sign.

use crate::error::{Error, Result};
use crate::space::{NormSpace, Vec3};

/// Second-order data of a profile curve `u -> (alpha(u), beta(u))` at one
/// parameter value. `graph` builds the common case `beta(u) = u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub alpha_second: f64,
    pub beta_prime: f64,
    pub beta_second: f64,
}

impl ProfilePoint {
    pub fn new(alpha: f64, alpha_prime: f64, alpha_second: f64, beta_prime: f64, beta_second: f64) -> Self {
        ProfilePoint { alpha, alpha_prime, alpha_second, beta_prime, beta_second }
    }

    /// Profile in graph form: `beta(u) = u`.
    pub fn graph(alpha: f64, alpha_prime: f64, alpha_second: f64) -> Self {
        ProfilePoint::new(alpha, alpha_prime, alpha_second, 1.0, 0.0)
    }

    fn validate(&self, space: &NormSpace) -> Result<()> {
        if !(self.alpha.is_finite()
            && self.alpha_prime.is_finite()
            && self.alpha_second.is_finite()
            && self.beta_prime.is_finite()
            && self.beta_second.is_finite())
        {
            return Err(Error::NonFiniteInput);
        }
        if self.alpha <= 0.0 {
            return Err(Error::InvalidJet { reason: "alpha must be positive" });
        }
        if space.m() >= 2 && (self.alpha_prime == 0.0 || self.beta_prime == 0.0) {
            return Err(Error::InvalidJet {
                reason: "alpha' and beta' must be nonzero for m >= 2; fold points are handled by curve-level limits",
            });
        }
        if space.m() == 1 && self.alpha_prime == 0.0 && self.beta_prime == 0.0 {
            return Err(Error::InvalidJet { reason: "profile tangent must be nonzero" });
        }
        Ok(())
    }
}

/// Principal curvature-like coefficients of the shape operator along the
/// profile (`k_u`) and parallel (`k_v`) directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeCoefficients {
    pub k_u: f64,
    pub k_v: f64,
}

/// Gauss-like curvature `k` and mean-like curvature `h` with respect to the
/// Birkhoff normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvaturePair {
    pub k: f64,
    pub h: f64,
}

/// The combination `A = |alpha'|^(2m/(2m-1)) + |beta'|^(2m/(2m-1))` that
/// normalises the Birkhoff normal. Zero exactly when both derivatives vanish.
pub fn a_quantity(space: &NormSpace, alpha_prime: f64, beta_prime: f64) -> Result<f64> {
    if !alpha_prime.is_finite() || !beta_prime.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let e = 2.0 * space.mf() / space.qf();
    Ok(alpha_prime.abs().powf(e) + beta_prime.abs().powf(e))
}

/// Birkhoff normal of the rotational surface at a point with profile
/// derivatives `(alpha', beta')` and angle `v`:
///
/// ```text
/// eta = A^(-1/(2m)) * ( -beta'^(1/(2m-1)) cos v,
///                       -beta'^(1/(2m-1)) sin v,
///                        alpha'^(1/(2m-1)) )
/// ```
///
/// It has unit norm and is Birkhoff-orthogonal to the tangent plane, with
/// the orientation that makes the gauge gradient at eta a positive multiple
/// of `f_u x f_v`. Requires `(alpha', beta') != (0, 0)`.
pub fn birkhoff_gauss(space: &NormSpace, alpha_prime: f64, beta_prime: f64, v: f64) -> Result<Vec3> {
    if !(alpha_prime.is_finite() && beta_prime.is_finite() && v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    if alpha_prime == 0.0 && beta_prime == 0.0 {
        return Err(Error::InvalidJet { reason: "profile tangent must be nonzero" });
    }
    let a = a_quantity(space, alpha_prime, beta_prime)?;
    let pref = a.powf(-1.0 / (2.0 * space.mf()));
    let bu = space.spow(beta_prime, 1);
    let au = space.spow(alpha_prime, 1);
    Ok(Vec3::new(-pref * bu * v.cos(), -pref * bu * v.sin(), pref * au))
}

/// Shape coefficients of a general (not necessarily graph) profile point.
pub fn shape_coefficients(space: &NormSpace, p: ProfilePoint) -> Result<ShapeCoefficients> {
    p.validate(space)?;
    let (da, db) = (p.alpha_prime, p.beta_prime);
    let w = da * p.beta_second - p.alpha_second * db;
    let a = a_quantity(space, da, db)?;
    let tm = 2.0 * space.mf();
    let e2 = 2 * space.mi() - 2;
    let k_u = -(1.0 / space.qf())
        * a.powf(-(tm + 1.0) / tm)
        * space.spow(da, -e2)
        * space.spow(db, -e2)
        * w;
    let k_v = -(1.0 / p.alpha) * a.powf(-1.0 / tm) * space.spow(db, 1);
    Ok(ShapeCoefficients { k_u, k_v })
}

/// Curvatures of a general profile point: `k = k_u k_v`, `h = (k_u + k_v)/2`,
/// evaluated through cancellation-free closed forms.
pub fn curvatures_general(space: &NormSpace, p: ProfilePoint) -> Result<CurvaturePair> {
    p.validate(space)?;
    let (da, db) = (p.alpha_prime, p.beta_prime);
    let w = da * p.beta_second - p.alpha_second * db;
    let a = a_quantity(space, da, db)?;
    let mf = space.mf();
    let tm = 2.0 * mf;
    let e2 = 2 * space.mi() - 2;
    let k = (1.0 / (space.qf() * p.alpha))
        * a.powf(-(mf + 1.0) / mf)
        * space.spow(da, -e2)
        * space.spow(db, -(e2 - 1))
        * w;
    let h = -(1.0 / (2.0 * space.qf() * p.alpha))
        * a.powf(-(tm + 1.0) / tm)
        * space.spow(db, -e2)
        * (p.alpha * space.spow(da, -e2) * w + space.qf() * a * db);
    Ok(CurvaturePair { k, h })
}

/// Curvatures for a graph profile `beta(u) = u`; same values as
/// [`curvatures_general`] with `beta' = 1`, `beta'' = 0`, via the reduced
/// expressions.
pub fn curvatures_graph(space: &NormSpace, alpha: f64, alpha_prime: f64, alpha_second: f64) -> Result<CurvaturePair> {
    let p = ProfilePoint::graph(alpha, alpha_prime, alpha_second);
    p.validate(space)?;
    let mf = space.mf();
    let tm = 2.0 * mf;
    let e2 = 2 * space.mi() - 2;
    let a = alpha_prime.abs().powf(tm / space.qf()) + 1.0;
    let dpow = space.spow(alpha_prime, -e2);
    let k = -(1.0 / (space.qf() * alpha)) * a.powf(-(mf + 1.0) / mf) * dpow * alpha_second;
    let h = (1.0 / (2.0 * space.qf() * alpha))
        * a.powf(-(tm + 1.0) / tm)
        * (alpha * dpow * alpha_second - space.qf() * a);
    Ok(CurvaturePair { k, h })
}

/// Whether every sampled graph jet has vanishing Gauss-like curvature
/// (|k| <= 1e-12), i.e. the sampled surface strip is flat in the Birkhoff
/// sense. Samples are `(alpha, alpha', alpha'')` triples.
pub fn is_flat(space: &NormSpace, samples: &[(f64, f64, f64)]) -> Result<bool> {
    if samples.is_empty() {
        return Err(Error::InvalidJet { reason: "need at least one sample" });
    }
    let mut max_abs = 0.0_f64;
    for &(al, da, dda) in samples {
        let c = curvatures_graph(space, al, da, dda)?;
        max_abs = max_abs.max(c.k.abs());
    }
    Ok(max_abs <= 1e-12)
}
