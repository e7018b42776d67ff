//! The three reduced profile families and their shared first-integral
//! structure.
//!
//! Every rotational profile built by this crate comes from one scalar ODE
//! reduction: along a graph branch `u -> alpha(u)` the height satisfies
//! `du/d(alpha) = I(alpha)` for a positive integrand `I` determined by the
//! family:
//!
//! ```text
//! minimal:     I = c2^(2m-1) * W^(-p),        W = rho^(2m) - c2^(2m)
//! constant k:  I = P^((2m-1)/2) * D^(-p),     P = k rho^2 + c1,  D = 1 - P^m
//! constant h:  I = Q^(2m-1) * W^(-p),         Q = c - h rho^2,   W = rho^(2m) - Q^(2m)
//! ```
//!
//! with `p = (2m-1)/(2m)`. The zeros of `W` (resp. `D`) are folds of the
//! profile where `alpha' = 0`; there the integrand has an exact algebraic
//! factorisation `W = (rho - fold) * cofactor` with a cofactor bounded away
//! from zero, which the quadrature layer uses to remove the singularity by
//! the substitution `rho = fold +/- s^(2m)` instead of fighting it
//! numerically.

use crate::error::{Error, Result};
use crate::quad;
use crate::space::NormSpace;

/// Branch selector: which sign of `u(alpha) = anchor +/- integral` a branch
/// uses, equivalently the sign of `alpha'` along it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// What happens to the profile at an end of the radius interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EndKind {
    /// `alpha' = 0` there: the profile folds back smoothly and two branches
    /// glue to a C^2 curve. `W` (or `D`) has a simple zero.
    Fold,
    /// The integrand vanishes: `alpha'` blows up and the profile has a
    /// vertical tangent (a cusp edge of the surface of revolution).
    Rim,
    /// The profile reaches the rotation axis `alpha = 0` at finite height.
    Axis,
    /// `alpha` is unbounded on this side while the height stays finite.
    UnboundedAlpha,
    /// The height integral diverges as this end is approached.
    UnboundedU,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_kind: EndKind,
    pub hi_kind: EndKind,
}

/// One of the three reduced families, with its first integral constant(s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Family {
    Minimal { c2: f64 },
    /// `k` is +1.0 or -1.0.
    ConstK { k: f64, c1: f64 },
    /// `h` is +1.0 or -1.0.
    ConstH { h: f64, c: f64 },
}

impl Family {
    /// The exponent `p = (2m-1)/(2m)` of the fold singularity.
    fn p(space: &NormSpace) -> f64 {
        space.qf() / (2.0 * space.mf())
    }

    /// Admissible open radius interval and the nature of its ends.
    pub(crate) fn interval(&self, space: &NormSpace) -> Result<Interval> {
        let _ = space;
        match *self {
            Family::Minimal { c2 } => {
                if !(c2 > 0.0) || !c2.is_finite() {
                    return Err(Error::domain(format!("waist radius must be positive, got {c2}")));
                }
                Ok(Interval { lo: c2, hi: f64::INFINITY, lo_kind: EndKind::Fold, hi_kind: EndKind::UnboundedAlpha })
            }
            Family::ConstK { k, c1 } => {
                if !c1.is_finite() || (k != 1.0 && k != -1.0) {
                    return Err(Error::domain("constant-k family needs k = +/-1 and finite c1"));
                }
                if k == 1.0 {
                    if c1 >= 1.0 {
                        return Err(Error::domain(format!("k = +1 needs c1 < 1, got {c1}")));
                    }
                    let hi = (1.0 - c1).sqrt();
                    if c1 >= 0.0 {
                        Ok(Interval { lo: 0.0, hi, lo_kind: EndKind::Axis, hi_kind: EndKind::Fold })
                    } else {
                        Ok(Interval { lo: (-c1).sqrt(), hi, lo_kind: EndKind::Rim, hi_kind: EndKind::Fold })
                    }
                } else {
                    if c1 <= 0.0 {
                        return Err(Error::domain(format!("k = -1 needs c1 > 0, got {c1}")));
                    }
                    let hi = c1.sqrt();
                    if c1 < 1.0 {
                        Ok(Interval { lo: 0.0, hi, lo_kind: EndKind::Axis, hi_kind: EndKind::Rim })
                    } else if c1 == 1.0 {
                        Ok(Interval { lo: 0.0, hi, lo_kind: EndKind::UnboundedU, hi_kind: EndKind::Rim })
                    } else {
                        Ok(Interval { lo: (c1 - 1.0).sqrt(), hi, lo_kind: EndKind::Fold, hi_kind: EndKind::Rim })
                    }
                }
            }
            Family::ConstH { h, c } => {
                if !c.is_finite() || (h != 1.0 && h != -1.0) {
                    return Err(Error::domain("constant-h family needs h = +/-1 and finite c"));
                }
                if h == 1.0 {
                    if c <= 0.0 {
                        return Err(Error::domain(format!("h = +1 needs c > 0, got {c}")));
                    }
                    // lower root of rho^2 + rho - c, written cancellation-free
                    let b1 = 2.0 * c / (1.0 + (1.0 + 4.0 * c).sqrt());
                    Ok(Interval { lo: b1, hi: c.sqrt(), lo_kind: EndKind::Fold, hi_kind: EndKind::Rim })
                } else if c >= 0.25 {
                    Err(Error::domain(format!("h = -1 needs c < 1/4, got {c}")))
                } else if c > 0.0 {
                    let root = (1.0 - 4.0 * c).sqrt();
                    let b2 = 2.0 * c / (1.0 + root);
                    let b3 = 0.5 * (1.0 + root);
                    Ok(Interval { lo: b2, hi: b3, lo_kind: EndKind::Fold, hi_kind: EndKind::Fold })
                } else if c == 0.0 {
                    Ok(Interval { lo: 0.0, hi: 1.0, lo_kind: EndKind::Axis, hi_kind: EndKind::Fold })
                } else {
                    let b4 = 0.5 * (1.0 + (1.0 - 4.0 * c).sqrt());
                    Ok(Interval { lo: (-c).sqrt(), hi: b4, lo_kind: EndKind::Rim, hi_kind: EndKind::Fold })
                }
            }
        }
    }

    /// `du/d(alpha)` along a branch; positive on the open interval.
    pub(crate) fn integrand(&self, space: &NormSpace, rho: f64) -> f64 {
        let p = Self::p(space);
        let tm = 2 * space.mi();
        match *self {
            Family::Minimal { c2 } => {
                let w = rho.powi(tm) - c2.powi(tm);
                c2.powi(space.q()) * w.powf(-p)
            }
            Family::ConstK { k, c1 } => {
                let pp = k * rho * rho + c1;
                // 1 - P^m factored as (1 - P) sum_j P^j with the linear factor
                // computed cancellation-free; the naive difference turns into
                // pure noise near the axis where P -> 1
                let lin = (1.0 - c1) - k * rho * rho;
                let mut u = 0.0;
                for j in 0..space.mi() {
                    u += pp.powi(j);
                }
                pp.powf(0.5 * space.qf()) * (lin * u).powf(-p)
            }
            Family::ConstH { h, c } => {
                let q = c - h * rho * rho;
                let w = rho.powi(tm) - q.powi(tm);
                q.powi(space.q()) * w.powf(-p)
            }
        }
    }

    /// The integrand with the fold factor `|rho - fold|^(-p)` removed, using
    /// the exact cofactor. Finite on the closed interval side containing
    /// `fold`, including at the fold itself.
    pub(crate) fn fold_regular_part(&self, space: &NormSpace, rho: f64, fold: f64) -> f64 {
        let p = Self::p(space);
        match *self {
            Family::Minimal { c2 } => {
                // W = (rho - c2) * sum_j rho^j c2^(2m-1-j)
                let mut t = 0.0;
                for j in 0..(2 * space.mi()) {
                    t += rho.powi(j) * c2.powi(2 * space.mi() - 1 - j);
                }
                c2.powi(space.q()) * t.powf(-p)
            }
            Family::ConstK { k, c1 } => {
                // D = 1 - P^m = |rho - fold| (rho + fold) * sum_{j<m} P^j
                let pp = k * rho * rho + c1;
                let mut u = 0.0;
                for j in 0..space.mi() {
                    u += pp.powi(j);
                }
                pp.powf(0.5 * space.qf()) * ((rho + fold) * u).powf(-p)
            }
            Family::ConstH { h, c } => {
                // W = (rho - Q) V with rho - Q = h (rho - fold)(rho - other),
                // other = -c / (h * fold), V = sum_j rho^j Q^(2m-1-j)
                let q = c - h * rho * rho;
                let other = -c / (h * fold);
                let mut v = 0.0;
                for j in 0..(2 * space.mi()) {
                    v += rho.powi(j) * q.powi(2 * space.mi() - 1 - j);
                }
                q.powi(space.q()) * ((rho - other).abs() * v).powf(-p)
            }
        }
    }

    /// `|alpha'(u)|` expressed through alpha alone (first integral). Exactly
    /// the reciprocal of [`integrand`], but written in the form that is
    /// stable at folds (where it vanishes).
    pub(crate) fn alpha_prime_abs(&self, space: &NormSpace, rho: f64) -> f64 {
        let p = Self::p(space);
        let tm = 2 * space.mi();
        match *self {
            Family::Minimal { c2 } => {
                let w = rho.powi(tm) - c2.powi(tm);
                w.max(0.0).powf(p) / c2.powi(space.q())
            }
            Family::ConstK { k, c1 } => {
                let pp = k * rho * rho + c1;
                let d = 1.0 - pp.powi(space.mi());
                d.max(0.0).powf(p) / pp.powf(0.5 * space.qf())
            }
            Family::ConstH { h, c } => {
                let q = c - h * rho * rho;
                let w = rho.powi(tm) - q.powi(tm);
                w.max(0.0).powf(p) / q.powi(space.q())
            }
        }
    }

    /// `alpha''(u)` through alpha alone; independent of the branch sign.
    pub(crate) fn alpha_second(&self, space: &NormSpace, rho: f64) -> f64 {
        let tm = 2 * space.mi();
        let e = (2.0 * space.mf() - 2.0) / (2.0 * space.mf());
        match *self {
            Family::Minimal { c2 } => {
                let w = rho.powi(tm) - c2.powi(tm);
                space.qf() * rho.powi(tm - 1) * w.max(0.0).powf(e) / c2.powi(2 * space.q())
            }
            Family::ConstK { k, c1 } => {
                let pp = k * rho * rho + c1;
                let d = 1.0 - pp.powi(space.mi());
                -space.qf() * k * rho * d.max(0.0).powf((space.mf() - 1.0) / space.mf()) / pp.powi(tm)
            }
            Family::ConstH { h, c } => {
                let q = c - h * rho * rho;
                let w = rho.powi(tm) - q.powi(tm);
                space.qf() * (2.0 * h * rho * rho + q) * rho.powi(tm - 1) * w.max(0.0).powf(e)
                    / q.powi(2 * space.q() + 1)
            }
        }
    }

    /// The normalising quantity `A = |alpha'|^(2m/(2m-1)) + 1` along a graph
    /// branch, through alpha alone.
    pub(crate) fn a_quantity_graph(&self, space: &NormSpace, rho: f64) -> f64 {
        match *self {
            Family::Minimal { c2 } => (rho / c2).powi(2 * space.mi()),
            Family::ConstK { k, c1 } => (k * rho * rho + c1).powi(-space.mi()),
            Family::ConstH { h, c } => (rho / (c - h * rho * rho)).powi(2 * space.mi()),
        }
    }

    /// Two-sided limit of `g = alpha'' * |alpha'|^(-(2m-2)/(2m-1))` at a fold
    /// radius. This is the quantity whose finite limit makes the glued curve
    /// C^2 across the fold.
    pub(crate) fn fold_g_limit(&self, space: &NormSpace, fold: f64) -> f64 {
        match *self {
            Family::Minimal { c2 } => space.qf() / c2,
            Family::ConstK { k, .. } => -space.qf() * k * fold,
            Family::ConstH { h, .. } => space.qf() * (2.0 * h * fold + 1.0) / fold,
        }
    }

    /// First and second derivative of `u` with respect to alpha (the jet of
    /// the height viewed as a graph over the radius), up to the branch sign:
    /// returns `(I, I')` with `u' = sign * I`, `u'' = sign * I'`.
    pub(crate) fn u_jet_by_alpha(&self, space: &NormSpace, rho: f64) -> (f64, f64) {
        let p = Self::p(space);
        let tm = 2 * space.mi();
        match *self {
            Family::Minimal { c2 } => {
                let w = rho.powi(tm) - c2.powi(tm);
                let i = c2.powi(space.q()) * w.powf(-p);
                let di = -p * c2.powi(space.q()) * w.powf(-p - 1.0) * f64::from(tm) * rho.powi(tm - 1);
                (i, di)
            }
            Family::ConstK { k, c1 } => {
                let pp = k * rho * rho + c1;
                let d = 1.0 - pp.powi(space.mi());
                let dp = 2.0 * k * rho;
                let dd = -space.mf() * pp.powi(space.mi() - 1) * dp;
                let i = pp.powf(0.5 * space.qf()) * d.powf(-p);
                let di = 0.5 * space.qf() * pp.powf(0.5 * space.qf() - 1.0) * dp * d.powf(-p)
                    - p * pp.powf(0.5 * space.qf()) * d.powf(-p - 1.0) * dd;
                (i, di)
            }
            Family::ConstH { h, c } => {
                let q = c - h * rho * rho;
                let w = rho.powi(tm) - q.powi(tm);
                let dq = -2.0 * h * rho;
                let dw = f64::from(tm) * (rho.powi(tm - 1) - q.powi(tm - 1) * dq);
                let i = q.powi(space.q()) * w.powf(-p);
                let di = space.qf() * q.powi(space.q() - 1) * dq * w.powf(-p)
                    - p * q.powi(space.q()) * w.powf(-p - 1.0) * dw;
                (i, di)
            }
        }
    }

    /// Oriented integral of the profile integrand from `x0` to `x1`, both in
    /// the closed admissible interval. Fold-adjacent parts are computed with
    /// the exact regularising substitution `rho = fold +/- s^(2m)`, so the
    /// result converges at ordinary quadrature rates all the way to folds.
    pub(crate) fn segment(&self, space: &NormSpace, x0: f64, x1: f64, tol: f64) -> Result<(f64, f64, u64)> {
        if !x0.is_finite() || !x1.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        if x0 == x1 {
            return Ok((0.0, 0.0, 0));
        }
        if x1 < x0 {
            let (v, e, n) = self.segment(space, x1, x0, tol)?;
            return Ok((-v, e, n));
        }
        let iv = self.interval(space)?;
        let slack = 1e-12 * (1.0 + x0.abs().max(x1.abs()).max(iv.lo.abs()));
        if x0 < iv.lo - slack {
            return Err(Error::OutOfRange { value: x0, lo: iv.lo, hi: iv.hi });
        }
        if iv.hi.is_finite() && x1 > iv.hi + slack {
            return Err(Error::OutOfRange { value: x1, lo: iv.lo, hi: iv.hi });
        }
        let x0 = x0.max(iv.lo);
        let x1 = if iv.hi.is_finite() { x1.min(iv.hi) } else { x1 };
        if iv.lo_kind == EndKind::UnboundedU && x0 <= iv.lo {
            return Err(Error::DivergentIntegral {
                reason: "height integral diverges at the axis end of this case",
            });
        }

        let lo_fold = iv.lo_kind == EndKind::Fold;
        let hi_fold = iv.hi_kind == EndKind::Fold;
        let mut value = 0.0;
        let mut err = 0.0;
        let mut evals = 0u64;
        let mut add = |part: (f64, f64, u64)| {
            value += part.0;
            err += part.1;
            evals += part.2;
        };
        if lo_fold && hi_fold {
            let mid = 0.5 * (iv.lo + iv.hi);
            if x1 <= mid {
                add(self.fold_piece(space, iv.lo, x0, x1, tol)?);
            } else if x0 >= mid {
                add(self.fold_piece(space, iv.hi, x0, x1, tol)?);
            } else {
                add(self.fold_piece(space, iv.lo, x0, mid, 0.5 * tol)?);
                add(self.fold_piece(space, iv.hi, mid, x1, 0.5 * tol)?);
            }
        } else if lo_fold {
            add(self.fold_piece(space, iv.lo, x0, x1, tol)?);
        } else if hi_fold {
            add(self.fold_piece(space, iv.hi, x0, x1, tol)?);
        } else {
            add(self.plain_piece(space, x0, x1, tol)?);
        }
        Ok((value, err, evals))
    }

    /// Integral over `[a, b]` written as a difference of two substituted
    /// integrals anchored at `fold`.
    fn fold_piece(&self, space: &NormSpace, fold: f64, a: f64, b: f64, tol: f64) -> Result<(f64, f64, u64)> {
        let psi_b = self.fold_cumulative(space, fold, b, 0.5 * tol)?;
        let psi_a = self.fold_cumulative(space, fold, a, 0.5 * tol)?;
        Ok((psi_b.0 - psi_a.0, psi_b.1 + psi_a.1, psi_b.2 + psi_a.2))
    }

    /// `integral_fold^x I drho` via `rho = fold + sgn * s^(2m)`; the
    /// substituted integrand `2m * fold_regular_part` is smooth on `[0, s_max]`.
    fn fold_cumulative(&self, space: &NormSpace, fold: f64, x: f64, tol: f64) -> Result<(f64, f64, u64)> {
        let d = x - fold;
        if d == 0.0 {
            return Ok((0.0, 0.0, 0));
        }
        let tm = 2 * space.mi();
        let sgn = d.signum();
        let s_max = d.abs().powf(1.0 / f64::from(tm));
        let fam = *self;
        let space_c = *space;
        // with p = (2m-1)/(2m) the substitution leaves no power of s behind:
        // d(rho) |rho-fold|^(-p) = 2m ds
        let mut f = move |s: f64| {
            let rho = fold + sgn * s.powi(tm);
            f64::from(tm) * fam.fold_regular_part(&space_c, rho, fold)
        };
        let (v, e, n) = quad::adaptive(&mut f, 0.0, s_max, tol, quad::EVAL_BUDGET)?;
        Ok((sgn * v, e, n))
    }

    fn plain_piece(&self, space: &NormSpace, a: f64, b: f64, tol: f64) -> Result<(f64, f64, u64)> {
        let fam = *self;
        let space_c = *space;
        let mut f = move |rho: f64| fam.integrand(&space_c, rho);
        quad::adaptive(&mut f, a, b, tol, quad::EVAL_BUDGET)
    }
}
