//! Monotone graph branches `u -> alpha(u)` backed by knot tables.
//!
//! A branch stores a strictly increasing grid of radii together with the
//! accumulated parameter values `u(alpha_i)`, obtained by integrating the
//! family's `du/dalpha` over each panel with fold-aware quadrature. Point
//! queries never interpolate: `u_of_alpha` integrates from the nearest knot
//! and `alpha_of_u` root-solves the same panel integral with a safeguarded
//! Newton iteration, so the table only provides brackets and the accuracy is
//! that of the quadrature itself.

use crate::cases::{Family, Sign};
use crate::error::{Error, Result};
use crate::profile::ProfileJet;
use crate::space::NormSpace;

/// Tolerance used for the per-panel integrals backing the tables.
const PANEL_TOL: f64 = 1e-13;
/// Iteration cap for the inversion loop.
const MAX_NEWTON: usize = 100;

#[derive(Debug, Clone)]
pub struct MonotoneBranch {
    space: NormSpace,
    family: Family,
    sign: Sign,
    /// Strictly increasing radii; first/last are the branch endpoints.
    alphas: Vec<f64>,
    /// us[i] = u(alphas[i]); strictly monotone with direction `sign`.
    us: Vec<f64>,
}

impl MonotoneBranch {
    /// Build a branch over the given ascending knot radii, anchoring the
    /// parameter so that `u(anchor_alpha) = anchor_u`. The anchor must be one
    /// of the knots (exactly). `sign` is the sign of `alpha'` on the branch.
    pub(crate) fn build(
        space: NormSpace,
        family: Family,
        sign: Sign,
        knots: Vec<f64>,
        anchor_alpha: f64,
        anchor_u: f64,
    ) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::domain("a branch needs at least two knots"));
        }
        if !anchor_u.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        for w in knots.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::domain("branch knots must be strictly increasing"));
            }
        }
        let ai = knots
            .iter()
            .position(|&a| a == anchor_alpha)
            .ok_or_else(|| Error::domain("anchor radius must be one of the knots"))?;
        let f = sign.factor();
        let mut us = vec![0.0; knots.len()];
        us[ai] = anchor_u;
        for i in (ai + 1)..knots.len() {
            let (seg, _, _) = family.segment(&space, knots[i - 1], knots[i], PANEL_TOL)?;
            us[i] = us[i - 1] + f * seg;
        }
        for i in (0..ai).rev() {
            let (seg, _, _) = family.segment(&space, knots[i], knots[i + 1], PANEL_TOL)?;
            us[i] = us[i + 1] - f * seg;
        }
        Ok(MonotoneBranch { space, family, sign, alphas: knots, us })
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Covered radii, `(lowest, highest)`.
    pub fn alpha_range(&self) -> (f64, f64) {
        (self.alphas[0], *self.alphas.last().unwrap())
    }

    /// Covered parameter values, `(lowest, highest)`.
    pub fn u_range(&self) -> (f64, f64) {
        let (a, b) = (self.us[0], *self.us.last().unwrap());
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// u at the lowest radius knot.
    pub(crate) fn u_at_alpha_lo(&self) -> f64 {
        self.us[0]
    }

    /// u at the highest radius knot.
    pub(crate) fn u_at_alpha_hi(&self) -> f64 {
        *self.us.last().unwrap()
    }

    fn u_increasing(&self) -> bool {
        matches!(self.sign, Sign::Plus)
    }

    /// Parameter value of a radius inside the covered range, computed by
    /// integrating from the nearest knot.
    pub fn u_of_alpha(&self, alpha: f64) -> Result<f64> {
        if !alpha.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        let (lo, hi) = self.alpha_range();
        let slack = 1e-9 * (1.0 + hi - lo);
        if alpha < lo - slack || alpha > hi + slack {
            return Err(Error::OutOfRange { value: alpha, lo, hi });
        }
        let a = alpha.clamp(lo, hi);
        // panel index: largest i with alphas[i] <= a
        let i = match self.alphas.binary_search_by(|k| k.partial_cmp(&a).unwrap()) {
            Ok(i) => return Ok(self.us[i]),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.alphas.len() - 2),
        };
        let f = self.sign.factor();
        // integrate from whichever panel edge is closer
        if a - self.alphas[i] <= self.alphas[i + 1] - a {
            let (seg, _, _) = self.family.segment(&self.space, self.alphas[i], a, PANEL_TOL)?;
            Ok(self.us[i] + f * seg)
        } else {
            let (seg, _, _) = self.family.segment(&self.space, a, self.alphas[i + 1], PANEL_TOL)?;
            Ok(self.us[i + 1] - f * seg)
        }
    }

    /// Radius at a parameter value inside the covered range. Solves
    /// `u(alpha) = u` on the bracketing panel with a bisection-safeguarded
    /// Newton iteration on the panel integral, so the result is quadrature-
    /// accurate and in particular exact at the knots.
    pub fn alpha_of_u(&self, u: f64, tol: f64) -> Result<f64> {
        if !u.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        let (ulo, uhi) = self.u_range();
        let span = uhi - ulo;
        let slack = 1e-9 * (1.0 + span);
        if u < ulo - slack || u > uhi + slack {
            return Err(Error::OutOfRange { value: u, lo: ulo, hi: uhi });
        }
        let u = u.clamp(ulo, uhi);
        let inc = self.u_increasing();
        // locate the panel in the (monotone) us table
        let n = self.us.len();
        let mut i = {
            let pos = self
                .us
                .partition_point(|&v| if inc { v < u } else { v > u });
            pos.min(n - 1).max(1) - 1
        };
        if i > n - 2 {
            i = n - 2;
        }
        // exact knot hits (this is what makes fold jets exact at the ends)
        if u == self.us[i] {
            return Ok(self.alphas[i]);
        }
        if u == self.us[i + 1] {
            return Ok(self.alphas[i + 1]);
        }
        let (mut alo, mut ahi) = (self.alphas[i], self.alphas[i + 1]);
        let (ulo_p, uhi_p) = (self.us[i], self.us[i + 1]);
        let f = self.sign.factor();
        let tol_u = tol.max(1e-13 * (1.0 + u.abs()));
        // residual of the panel equation at radius x
        let eval = |x: f64| -> Result<f64> {
            let (seg, _, _) = self.family.segment(&self.space, self.alphas[i], x, PANEL_TOL)?;
            Ok(ulo_p + f * seg - u)
        };
        // initial guess: linear in the panel's u-extent
        let frac = ((u - ulo_p) / (uhi_p - ulo_p)).clamp(0.0, 1.0);
        let mut x = alo + (ahi - alo) * frac;
        if !(x > alo) || !(x < ahi) {
            x = 0.5 * (alo + ahi);
        }
        let residual_increasing = f > 0.0;
        let mut fx = eval(x)?;
        for _ in 0..MAX_NEWTON {
            if fx.abs() <= tol_u {
                return Ok(x);
            }
            if (fx > 0.0) == residual_increasing {
                ahi = x;
            } else {
                alo = x;
            }
            if ahi - alo <= 1e-15 * (1.0 + x.abs()) {
                return Ok(x);
            }
            // Newton step with du/dalpha; infinite slope near a fold simply
            // produces a zero step, which the bisection fallback catches
            let slope = f * self.family.integrand(&self.space, x);
            let mut xn = x - fx / slope;
            if !xn.is_finite() || xn <= alo || xn >= ahi {
                xn = 0.5 * (alo + ahi);
            }
            let fxn = eval(xn)?;
            if fxn.abs() >= fx.abs() && (ahi - alo) > 1e-12 * (1.0 + x.abs()) {
                // no progress: force a bisection step
                let xb = 0.5 * (alo + ahi);
                if xb != xn {
                    let fxb = eval(xb)?;
                    if fxb.abs() < fxn.abs() {
                        x = xb;
                        fx = fxb;
                        continue;
                    }
                }
            }
            x = xn;
            fx = fxn;
        }
        Err(Error::DidNotConverge { iterations: MAX_NEWTON as u32, residual: fx.abs() })
    }

    /// Full jet at a parameter value. At fold knots the derivative is an
    /// exact zero because `alpha_of_u` returns the knot radius exactly.
    pub fn jet_of_u(&self, u: f64) -> Result<ProfileJet> {
        let alpha = self.alpha_of_u(u, 0.0)?;
        let da = self.sign.factor() * self.family.alpha_prime_abs(&self.space, alpha);
        let dda = self.family.alpha_second(&self.space, alpha);
        Ok(ProfileJet { alpha, alpha_prime: da, alpha_second: dda })
    }
}

/// Invert a branch: radius at the given parameter value.
pub fn invert_branch(branch: &MonotoneBranch, u: f64, tol: f64) -> Result<f64> {
    branch.alpha_of_u(u, tol)
}

/// Uniform grid from a to b inclusive.
pub(crate) fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = i as f64 / n as f64;
        v.push(a + (b - a) * t);
    }
    *v.last_mut().unwrap() = b;
    v
}

/// Grid on [a, b] clustered toward `a` with the given power (> 1), returned
/// ascending with both ends exact.
pub(crate) fn powered_grid_toward_lo(a: f64, b: f64, n: usize, power: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = i as f64 / n as f64;
        v.push(a + (b - a) * t.powf(power));
    }
    v[0] = a;
    *v.last_mut().unwrap() = b;
    v
}

/// Grid on [a, b] clustered toward `b`, ascending, ends exact.
pub(crate) fn powered_grid_toward_hi(a: f64, b: f64, n: usize, power: f64) -> Vec<f64> {
    let mut v: Vec<f64> = powered_grid_toward_lo(0.0, b - a, n, power)
        .into_iter()
        .rev()
        .map(|d| b - d)
        .collect();
    v[0] = a;
    *v.last_mut().unwrap() = b;
    v
}

/// Geometric grid on [a, b] (both positive), ascending, ends exact.
pub(crate) fn geometric_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let ratio = (b / a).ln();
    let mut v = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = i as f64 / n as f64;
        v.push(a * (ratio * t).exp());
    }
    v[0] = a;
    *v.last_mut().unwrap() = b;
    v
}

/// Concatenate grids that share their junction point, dropping duplicates.
pub(crate) fn join_grids(mut parts: Vec<Vec<f64>>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for part in parts.drain(..) {
        for x in part {
            if out.last().is_none_or(|&l| x > l) {
                out.push(x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn catenoid_branch(sign: Sign) -> MonotoneBranch {
        let space = NormSpace::new(2).unwrap();
        let family = Family::Minimal { c2: 1.0 };
        let knots = join_grids(vec![
            powered_grid_toward_lo(1.0, 2.0, 48, 4.0),
            geometric_grid(2.0, 50.0, 40),
        ]);
        MonotoneBranch::build(space, family, sign, knots, 1.0, 0.0).unwrap()
    }

    #[test]
    fn table_matches_direct_quadrature() {
        let branch = catenoid_branch(Sign::Plus);
        let space = NormSpace::new(2).unwrap();
        let direct = crate::quad::minimal_profile_u(&space, 1.0, 7.5, Sign::Plus, 0.0).unwrap();
        assert_relative_eq!(branch.u_of_alpha(7.5).unwrap(), direct, epsilon = 1e-11);
    }

    #[test]
    fn inversion_round_trips() {
        let branch = catenoid_branch(Sign::Plus);
        for &alpha in &[1.0 + 1e-10, 1.003, 1.4, 2.0, 9.0, 43.0] {
            let u = branch.u_of_alpha(alpha).unwrap();
            let back = branch.alpha_of_u(u, 0.0).unwrap();
            assert_relative_eq!(back, alpha, max_relative = 1e-9);
        }
    }

    #[test]
    fn inversion_near_fold_is_well_conditioned() {
        // near the fold the radius leaves like alpha - 1 = u^4/4 + O(u^8), so
        // a u -> alpha -> u round trip is hopeless in f64 (du = 1e-12 puts the
        // radius 1e-48 above the fold, far below an ulp). The meaningful
        // conditioning statements are in the radius direction: alpha_of_u
        // lands within a few ulps of the true radius, and the inverse maps
        // stay mutually consistent arbitrarily close to the fold.
        let branch = catenoid_branch(Sign::Plus);
        let space = NormSpace::new(2).unwrap();
        let (ulo, _) = branch.u_range();
        assert_eq!(ulo, 0.0);
        for &du in &[1e-12, 1e-9, 1e-6, 1e-3] {
            let alpha = branch.alpha_of_u(du, 0.0).unwrap();
            let expected = 1.0 + du.powi(4) / 4.0;
            assert!((alpha - expected).abs() <= 5e-15, "du {du}: alpha {alpha} vs {expected}");
        }
        // the forward map agrees with direct quadrature right next to the fold
        let close = 1.0 + 1e-8;
        let direct = crate::quad::minimal_profile_u(&space, 1.0, close, Sign::Plus, 0.0).unwrap();
        let u = branch.u_of_alpha(close).unwrap();
        assert_relative_eq!(u, direct, max_relative = 1e-10);
        // and an alpha -> u -> alpha round trip holds at bracket accuracy
        let back = branch.alpha_of_u(u, 0.0).unwrap();
        assert_relative_eq!(back, close, max_relative = 1e-12);
    }

    #[test]
    fn fold_knot_jets_are_exact() {
        let plus = catenoid_branch(Sign::Plus);
        let jet = plus.jet_of_u(0.0).unwrap();
        assert_eq!(jet.alpha, 1.0);
        assert_eq!(jet.alpha_prime, 0.0);
        assert_eq!(jet.alpha_second, 0.0);
        let minus = catenoid_branch(Sign::Minus);
        let jet = minus.jet_of_u(0.0).unwrap();
        assert_eq!(jet.alpha_prime, -0.0);
        assert_eq!(jet.alpha, 1.0);
    }

    #[test]
    fn signs_orient_the_table() {
        let plus = catenoid_branch(Sign::Plus);
        let minus = catenoid_branch(Sign::Minus);
        let (plo, phi) = plus.u_range();
        let (mlo, mhi) = minus.u_range();
        assert_eq!(plo, 0.0);
        assert!(phi > 1.3);
        assert_eq!(mhi, 0.0);
        assert_relative_eq!(mlo, -phi, epsilon = 1e-12);
        // mirrored radii agree
        let a_plus = plus.alpha_of_u(0.7, 0.0).unwrap();
        let a_minus = minus.alpha_of_u(-0.7, 0.0).unwrap();
        assert_relative_eq!(a_plus, a_minus, epsilon = 1e-11);
        // and the jets mirror
        let jp = plus.jet_of_u(0.7).unwrap();
        let jm = minus.jet_of_u(-0.7).unwrap();
        assert_relative_eq!(jp.alpha_prime, -jm.alpha_prime, epsilon = 1e-9);
        assert_relative_eq!(jp.alpha_second, jm.alpha_second, epsilon = 1e-9);
    }

    #[test]
    fn out_of_range_is_rejected() {
        let branch = catenoid_branch(Sign::Plus);
        assert!(matches!(branch.alpha_of_u(-0.5, 0.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(branch.u_of_alpha(0.9), Err(Error::OutOfRange { .. })));
        assert!(matches!(branch.u_of_alpha(51.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn jets_satisfy_the_first_integral() {
        let branch = catenoid_branch(Sign::Plus);
        let space = NormSpace::new(2).unwrap();
        for &u in &[0.05, 0.3, 0.9, 1.2] {
            let jet = branch.jet_of_u(u).unwrap();
            // for the waist family: alpha^(2m) / a_g^... reduces to
            // |alpha'|^(2m/(2m-1)) + 1 == (alpha/c2)^(2m)
            let lhs = jet.alpha_prime.abs().powf(4.0 / 3.0) + 1.0;
            let rhs = jet.alpha.powi(4);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
            let _ = space;
        }
    }
}
