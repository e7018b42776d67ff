//! Periodic profile curves: the unduloid-type wave and the nodoid-type loop.
//!
//! The unduloid is a graph `u -> alpha(u)` that repeats with the distance
//! between alternate folds. The nodoid is not a graph: one period consists of
//! four arcs (two graph legs from the mean-convex family, glued through two
//! legs of the opposite family), traversed by a parameter `t` that advances
//! monotonically along the curve. Each period shifts the height by a fixed
//! amount; the curve closes up only if that shift vanishes, and the shift is
//! tracked explicitly so closure can be tested.

use crate::cases::{Family, Sign};
use crate::curvature::{curvatures_general, CurvaturePair};
use crate::error::{Error, Result};
use crate::oracle::{ode_residual, OdeKind};
use crate::profile::branch::{powered_grid_toward_hi, powered_grid_toward_lo, MonotoneBranch};
use crate::profile::glued::GluedCurve;
use crate::profile::{
    aitken_limit, build_constant_h_curve, g_of_jet, junction_curvatures, verify_c2_junction,
    CaseTag, Jet1D, JunctionCheck, JunctionRecord, ProfileFrame, ProfileJet,
};
use crate::space::NormSpace;

const REGION_KNOTS: usize = 160;

#[derive(Debug, Clone)]
enum PeriodicKind {
    /// Radius is a periodic graph over the height.
    Graph { fundamental: GluedCurve },
    /// Four-arc nodoid period.
    Arcs(Box<NodoidArcs>),
}

#[derive(Debug, Clone)]
struct NodoidArcs {
    space: NormSpace,
    /// Mean-convex leg `b1 -> rim`, height rising to `c2p`.
    g1: MonotoneBranch,
    /// Opposite-family leg `rim -> b4`, height falling from `c2p`.
    g2: MonotoneBranch,
    /// Opposite-family leg back down `b4 -> rim`.
    g3: MonotoneBranch,
    /// Mean-convex leg `rim -> b1`, closing the period.
    g4: MonotoneBranch,
    fam_plus: Family,
    fam_minus: Family,
    d1: f64,
    d3: f64,
    b1: f64,
    rim: f64,
    b4: f64,
    c2p: f64,
    /// Exact parameter table endpoints of the legs, so arc formulas hit the
    /// fold knots bitwise and the exact-fold jets fire.
    u1_fold: f64,
    u3_fold: f64,
    u4_lo: f64,
    /// Arc boundaries in t: 0 < t1 < t2 < t3 < period.
    t1: f64,
    t2: f64,
    t3: f64,
}

/// A profile curve that repeats: `alpha(t + T) = alpha(t)` and
/// `beta(t + T) = beta(t) + shift`.
#[derive(Debug, Clone)]
pub struct PeriodicCurve {
    space: NormSpace,
    tag: CaseTag,
    period: f64,
    beta_shift: f64,
    t_start: f64,
    kind: PeriodicKind,
    junction_records: Vec<JunctionRecord>,
}

impl PeriodicCurve {
    pub fn space(&self) -> NormSpace {
        self.space
    }

    pub fn tag(&self) -> CaseTag {
        self.tag
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Height gained per period.
    pub fn beta_shift(&self) -> f64 {
        self.beta_shift
    }

    /// One representative parameter interval `[start, start + period)`.
    pub fn fundamental_domain(&self) -> (f64, f64) {
        (self.t_start, self.t_start + self.period)
    }

    /// Fold junctions within the fundamental domain.
    pub fn junctions(&self) -> &[JunctionRecord] {
        &self.junction_records
    }

    /// Parameter values (within the fundamental domain) where the curve has
    /// a fold or a rim joint; useful for splicing exact rows into exports.
    pub fn special_ts(&self) -> Vec<f64> {
        match &self.kind {
            PeriodicKind::Graph { .. } => self.junction_records.iter().map(|r| r.u).collect(),
            PeriodicKind::Arcs(a) => vec![0.0, a.t1, a.t2, a.t3],
        }
    }

    /// Obstruction to the curve closing up after one period: the absolute
    /// height mismatch of the two leg pairs. `None` for graph-type curves,
    /// which never close.
    pub fn closure_gap(&self) -> Option<f64> {
        match &self.kind {
            PeriodicKind::Graph { .. } => None,
            PeriodicKind::Arcs(a) => Some((a.d1 - a.d3).abs()),
        }
    }

    /// Reduce `t` into the fundamental domain: `t = t0 + k * period` with
    /// `t0` in `[start, start + period)`.
    pub fn reduce(&self, t: f64) -> (f64, i64) {
        let rel = (t - self.t_start) / self.period;
        let mut k = rel.floor();
        let mut t0 = t - k * self.period;
        if t0 - self.t_start >= self.period {
            k += 1.0;
            t0 -= self.period;
        }
        if t0 < self.t_start {
            k -= 1.0;
            t0 += self.period;
        }
        (t0, k as i64)
    }

    fn arcs(&self) -> Option<&NodoidArcs> {
        match &self.kind {
            PeriodicKind::Arcs(a) => Some(a),
            PeriodicKind::Graph { .. } => None,
        }
    }

    /// Full second-order frame of the curve at `t`.
    pub fn frame(&self, t: f64) -> Result<ProfileFrame> {
        if !t.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        let (t0, k) = self.reduce(t);
        match &self.kind {
            PeriodicKind::Graph { fundamental } => {
                let jet = fundamental.jet(t0)?;
                Ok(ProfileFrame {
                    alpha: jet.alpha,
                    beta: t,
                    dalpha: jet.alpha_prime,
                    dbeta: 1.0,
                    ddalpha: jet.alpha_second,
                    ddbeta: 0.0,
                })
            }
            PeriodicKind::Arcs(a) => {
                let mut frame = a.frame_in_period(t0)?;
                frame.beta += k as f64 * self.beta_shift;
                Ok(frame)
            }
        }
    }

    /// Profile position `(alpha, beta)` at `t`.
    pub fn point(&self, t: f64) -> Result<(f64, f64)> {
        Ok(self.frame(t)?.point())
    }

    /// Curvatures at `t`, using fold extensions at junctions and the joint
    /// values at rim joints.
    pub fn curvatures_at(&self, t: f64) -> Result<CurvaturePair> {
        let (t0, _) = self.reduce(t);
        match &self.kind {
            PeriodicKind::Graph { fundamental } => fundamental.curvatures_at(t0),
            PeriodicKind::Arcs(a) => {
                let eps = 1e-12 * (1.0 + self.period);
                let rel = t0 - self.t_start;
                if rel.abs() <= eps || (rel - self.period).abs() <= eps {
                    let g = a.fam_plus.fold_g_limit(&self.space, a.b1);
                    return Ok(junction_curvatures(&self.space, a.b1, g));
                }
                if (rel - a.t2).abs() <= eps {
                    // the u-chart at this fold runs against the arc order,
                    // which flips the mean curvature's sign
                    let g = a.fam_minus.fold_g_limit(&self.space, a.b4);
                    let c = junction_curvatures(&self.space, a.b4, g);
                    return Ok(CurvaturePair { k: c.k, h: -c.h });
                }
                if (rel - a.t1).abs() <= eps || (rel - a.t3).abs() <= eps {
                    // rim joints: the parallel shape coefficient vanishes and
                    // the profile one carries the full (constant) mean value
                    return Ok(CurvaturePair { k: 0.0, h: 1.0 });
                }
                let frame = a.frame_in_period(t0)?;
                curvatures_general(&self.space, frame.profile_point())
            }
        }
    }

    /// Two-sided C^2 probe of the fold junction near `t`.
    pub fn junction_check(&self, t: f64, tol: f64) -> Result<JunctionCheck> {
        let (t0, _) = self.reduce(t);
        let eps = 1e-9 * (1.0 + self.period);
        let rec = self
            .junction_records
            .iter()
            .find(|r| (t0 - r.u).abs() <= eps || (t0 - r.u - self.period).abs() <= eps)
            .copied()
            .ok_or(Error::NotAJunction { u: t })?;
        match &self.kind {
            PeriodicKind::Graph { fundamental } => {
                let (lo, hi) = fundamental.evaluable_domain();
                if rec.u > lo + eps && rec.u < hi - eps {
                    // interior junction of the fundamental piece
                    return fundamental.junction_check(rec.u, tol);
                }
                // seam fold: probe through the periodic reduction
                let probe = 1e-2 * self.period / 4.0;
                verify_c2_junction(&self.space, self, rec.u, probe, rec.expected_g, tol)
            }
            PeriodicKind::Arcs(a) => {
                let h0 = 1e-2 * a.d1.min(a.d3);
                let (left, right) = if (rec.u - self.t_start).abs() <= eps {
                    // closing fold at b1: previous period's last leg | first leg
                    (
                        branch_g_probe(&self.space, &a.g4, a.g4.u_at_alpha_lo(), -1.0, h0)?,
                        branch_g_probe(&self.space, &a.g1, a.g1.u_at_alpha_lo(), 1.0, h0)?,
                    )
                } else {
                    // outer fold at b4, shared by the two opposite-family legs
                    (
                        branch_g_probe(&self.space, &a.g2, a.g2.u_at_alpha_hi(), 1.0, h0)?,
                        branch_g_probe(&self.space, &a.g3, a.g3.u_at_alpha_hi(), -1.0, h0)?,
                    )
                };
                let scale = rec.expected_g.abs().max(1.0);
                let within = (left.0 - rec.expected_g).abs() <= tol * scale
                    && (right.0 - rec.expected_g).abs() <= tol * scale;
                Ok(JunctionCheck {
                    expected: rec.expected_g,
                    left: left.0,
                    right: right.0,
                    alpha_second_left: left.1,
                    alpha_second_right: right.1,
                    within,
                })
            }
        }
    }

    /// C^2 probes of the two rim joints of a nodoid period, in the chart
    /// where the height is a graph over the radius. The expected one-sided
    /// limits are `-2(2m-1)` at the rising joint and `+2(2m-1)` at the
    /// falling one, independent of the case parameters.
    pub fn rim_joint_checks(&self, tol: f64) -> Result<[JunctionCheck; 2]> {
        let a = self.arcs().ok_or(Error::WrongCase {
            reason: "rim joints exist only on the four-arc periodic curve",
        })?;
        let q = self.space.qf();
        let h0 = 1e-3 * (a.rim - a.b1).min(a.b4 - a.rim);
        let space = self.space;
        // one-sided g in the radius chart from family jets (I, I') and the
        // sign of du/dalpha on the leg
        let side = |fam: &Family, sign: f64, dir: f64| -> (f64, f64) {
            let mut gs = [0.0; 3];
            let mut last_dd = 0.0;
            for (i, s) in [1.0, 0.5, 0.25].iter().enumerate() {
                let alpha = a.rim + dir * h0 * s;
                let (i_val, di_val) = fam.u_jet_by_alpha(&space, alpha);
                gs[i] = g_of_jet(&space, sign * i_val, sign * di_val);
                last_dd = sign * di_val;
            }
            (aitken_limit(gs[0], gs[1], gs[2]), last_dd)
        };
        let make = |below: (f64, f64), above: (f64, f64), expected: f64| {
            let scale = expected.abs().max(1.0);
            JunctionCheck {
                expected,
                left: below.0,
                right: above.0,
                alpha_second_left: below.1,
                alpha_second_right: above.1,
                within: (below.0 - expected).abs() <= tol * scale
                    && (above.0 - expected).abs() <= tol * scale,
            }
        };
        // rising joint: legs approach the rim with height still increasing
        let rising = make(
            side(&a.fam_plus, 1.0, -1.0),
            side(&a.fam_minus, -1.0, 1.0),
            -2.0 * q,
        );
        // falling joint: both legs pass the rim with height decreasing
        let falling = make(
            side(&a.fam_plus, -1.0, -1.0),
            side(&a.fam_minus, 1.0, 1.0),
            2.0 * q,
        );
        Ok([rising, falling])
    }

    /// Largest normalized residual of the appropriate constant-h equation
    /// over interior samples of every leg.
    pub fn max_ode_residual(&self, n: usize) -> Result<f64> {
        match &self.kind {
            PeriodicKind::Graph { fundamental } => fundamental.max_ode_residual(n),
            PeriodicKind::Arcs(a) => {
                let mut worst = 0.0_f64;
                let legs: [(&MonotoneBranch, OdeKind); 4] = [
                    (&a.g1, OdeKind::ConstantH { h: 1.0 }),
                    (&a.g2, OdeKind::ConstantH { h: -1.0 }),
                    (&a.g3, OdeKind::ConstantH { h: -1.0 }),
                    (&a.g4, OdeKind::ConstantH { h: 1.0 }),
                ];
                let per_leg = (n / 4).max(2);
                for (leg, kind) in legs {
                    let (lo, hi) = leg.u_range();
                    let span = hi - lo;
                    let margin = 1e-3 * span;
                    for i in 0..per_leg {
                        let u = lo + span * (i as f64 + 0.5) / per_leg as f64;
                        if u - lo < margin || hi - u < margin {
                            continue;
                        }
                        let jet = leg.jet_of_u(u)?;
                        let r = ode_residual(&self.space, kind, &jet);
                        if r.is_finite() {
                            worst = worst.max(r.abs());
                        }
                    }
                }
                Ok(worst)
            }
        }
    }
}

impl Jet1D for PeriodicCurve {
    /// Radius jets in the curve parameter. On arc legs that are not height
    /// graphs this is the jet of the arc's own parametrization.
    fn jet1d(&self, t: f64) -> Result<(f64, f64, f64)> {
        let frame = self.frame(t)?;
        Ok((frame.alpha, frame.dalpha, frame.ddalpha))
    }
}

fn branch_g_probe(
    space: &NormSpace,
    branch: &MonotoneBranch,
    u_fold: f64,
    dir: f64,
    h0: f64,
) -> Result<(f64, f64)> {
    let mut gs = [0.0; 3];
    let mut last_dd = 0.0;
    for (i, s) in [1.0, 0.5, 0.25].iter().enumerate() {
        let jet = branch.jet_of_u(u_fold + dir * h0 * s)?;
        gs[i] = g_of_jet(space, jet.alpha_prime, jet.alpha_second);
        last_dd = jet.alpha_second;
    }
    Ok((aitken_limit(gs[0], gs[1], gs[2]), last_dd))
}

impl NodoidArcs {
    fn frame_in_period(&self, t0: f64) -> Result<ProfileFrame> {
        let t1 = self.t1;
        let t2 = self.t2;
        let t3 = self.t3;
        let eps = 1e-12 * (1.0 + t3 + self.d1);
        if (t0 - t1).abs() <= eps {
            // rim joint with the height at a local maximum
            return Ok(ProfileFrame {
                alpha: self.rim,
                beta: self.c2p,
                dalpha: 1.0,
                dbeta: 0.0,
                ddalpha: 0.0,
                ddbeta: 0.0,
            });
        }
        if (t0 - t3).abs() <= eps {
            return Ok(ProfileFrame {
                alpha: self.rim,
                beta: self.u4_lo,
                dalpha: -1.0,
                dbeta: 0.0,
                ddalpha: 0.0,
                ddbeta: 0.0,
            });
        }
        if t0 < t1 {
            // height graph, rising along the mean-convex leg
            let u = self.u1_fold + t0;
            let jet = self.g1.jet_of_u(u)?;
            Ok(graph_frame(jet, u, 1.0))
        } else if t0 < t2 {
            // radius is the parameter; height falls along the outer leg
            let alpha = self.rim + (t0 - t1);
            let beta = self.g2.u_of_alpha(alpha)?;
            let (i_val, di_val) = self.fam_minus.u_jet_by_alpha(&self.space, alpha);
            Ok(ProfileFrame {
                alpha,
                beta,
                dalpha: 1.0,
                dbeta: -i_val,
                ddalpha: 0.0,
                ddbeta: -di_val,
            })
        } else if t0 < t3 {
            // height graph traversed downward
            let u = self.u3_fold - (t0 - t2);
            let jet = self.g3.jet_of_u(u)?;
            Ok(graph_frame(jet, u, -1.0))
        } else {
            let u = self.u4_lo + (t0 - t3);
            let jet = self.g4.jet_of_u(u)?;
            Ok(graph_frame(jet, u, 1.0))
        }
    }
}

fn graph_frame(jet: ProfileJet, u: f64, dir: f64) -> ProfileFrame {
    ProfileFrame {
        alpha: jet.alpha,
        beta: u,
        dalpha: dir * jet.alpha_prime,
        dbeta: dir,
        ddalpha: jet.alpha_second,
        ddbeta: 0.0,
    }
}

/// Build the periodic unduloid-type wave (h = -1, 0 < c3 < 1/4) with its
/// waist fold at height `c5`.
pub fn build_unduloid(space: &NormSpace, c3: f64, c5: f64) -> Result<PeriodicCurve> {
    let fundamental = build_constant_h_curve(space, Sign::Minus, c3, c5)?;
    if fundamental.tag() != CaseTag::HUnduloid {
        return Err(Error::WrongCase {
            reason: "these parameters build a non-periodic curve; use the direct builder",
        });
    }
    let (lo, hi) = fundamental.evaluable_domain();
    let period = hi - lo;
    let family = fundamental.family();
    let iv = family.interval(space)?;
    let records = vec![
        JunctionRecord {
            u: lo,
            alpha: iv.hi,
            expected_g: family.fold_g_limit(space, iv.hi),
        },
        JunctionRecord {
            u: c5,
            alpha: iv.lo,
            expected_g: family.fold_g_limit(space, iv.lo),
        },
    ];
    Ok(PeriodicCurve {
        space: *space,
        tag: CaseTag::HUnduloid,
        period,
        beta_shift: period,
        t_start: lo,
        kind: PeriodicKind::Graph { fundamental },
        junction_records: records,
    })
}

/// Build one period of the nodoid-type curve from its leg constant `c1 > 0`,
/// placing the first rim joint at height `c2p`. The parameter starts at the
/// closing fold and runs through rim, outer fold, rim, and back to the fold.
pub fn build_nodoid(space: &NormSpace, c1: f64, c2p: f64) -> Result<PeriodicCurve> {
    if !c1.is_finite() || !c2p.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    if !(c1 > 0.0) {
        return Err(Error::domain(format!("the nodoid leg constant must be positive, got {c1}")));
    }
    let fam_plus = Family::ConstH { h: 1.0, c: c1 };
    let fam_minus = Family::ConstH { h: -1.0, c: -c1 };
    let iv2 = fam_plus.interval(space)?;
    let iv3 = fam_minus.interval(space)?;
    let (b1, rim, b4) = (iv2.lo, iv2.hi, iv3.hi);
    debug_assert_eq!(rim, iv3.lo);
    let power = 2.0 * space.mf();
    let knots_plus = powered_grid_toward_lo(b1, rim, 2 * REGION_KNOTS, power);
    let knots_minus = powered_grid_toward_hi(rim, b4, 2 * REGION_KNOTS, power);
    let g1 = MonotoneBranch::build(*space, fam_plus, Sign::Plus, knots_plus.clone(), rim, c2p)?;
    let g2 = MonotoneBranch::build(*space, fam_minus, Sign::Minus, knots_minus.clone(), rim, c2p)?;
    let u1_fold = g1.u_at_alpha_lo();
    let d1 = c2p - u1_fold;
    let d3 = c2p - g2.u_at_alpha_hi();
    let u4_lo = c2p - 2.0 * d3;
    let g3 = MonotoneBranch::build(*space, fam_minus, Sign::Plus, knots_minus, rim, u4_lo)?;
    let g4 = MonotoneBranch::build(*space, fam_plus, Sign::Minus, knots_plus, rim, u4_lo)?;
    let u3_fold = g3.u_at_alpha_hi();
    let t1 = d1;
    let t2 = t1 + (b4 - rim);
    let t3 = t2 + (u3_fold - u4_lo);
    let period = t3 + (g4.u_at_alpha_lo() - u4_lo);
    let records = vec![
        JunctionRecord { u: 0.0, alpha: b1, expected_g: fam_plus.fold_g_limit(space, b1) },
        JunctionRecord { u: t2, alpha: b4, expected_g: fam_minus.fold_g_limit(space, b4) },
    ];
    Ok(PeriodicCurve {
        space: *space,
        tag: CaseTag::HNodoid,
        period,
        beta_shift: 2.0 * (d1 - d3),
        t_start: 0.0,
        kind: PeriodicKind::Arcs(Box::new(NodoidArcs {
            space: *space,
            g1,
            g2,
            g3,
            g4,
            fam_plus,
            fam_minus,
            d1,
            d3,
            b1,
            rim,
            b4,
            c2p,
            u1_fold,
            u3_fold,
            u4_lo,
            t1,
            t2,
            t3,
        })),
        junction_records: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn sp(m: u32) -> NormSpace {
        NormSpace::new(m).unwrap()
    }

    #[test]
    fn unduloid_period_matches_the_fold_distance() {
        let space = sp(2);
        let curve = build_unduloid(&space, 0.2, 0.0).unwrap();
        let d2 = crate::quad::unduloid_d2(&space, 0.2).unwrap();
        assert_relative_eq!(curve.period(), 2.0 * d2.value, epsilon = 1e-10);
        assert_eq!(curve.beta_shift(), curve.period());
        assert!(curve.closure_gap().is_none());
    }

    #[test]
    fn unduloid_repeats() {
        let space = sp(2);
        let curve = build_unduloid(&space, 0.1, 0.25).unwrap();
        let t0 = curve.fundamental_domain().0;
        let tt = curve.period();
        for i in 0..40 {
            let t = t0 + tt * (i as f64 + 0.37) / 13.0;
            let a = curve.frame(t).unwrap();
            let b = curve.frame(t + tt).unwrap();
            let c = curve.frame(t - 3.0 * tt).unwrap();
            // reduction rounds t at the ulp level, so repeats are tight but
            // not bitwise
            assert_relative_eq!(a.alpha, b.alpha, max_relative = 1e-13);
            assert_relative_eq!(a.alpha, c.alpha, max_relative = 1e-13);
            assert_abs_diff_eq!(a.dalpha, b.dalpha, epsilon = 1e-11);
            assert_relative_eq!(b.beta - a.beta, tt, epsilon = 1e-12);
        }
    }

    #[test]
    fn unduloid_junctions_hold_on_both_fold_kinds() {
        let space = sp(2);
        let curve = build_unduloid(&space, 0.2, 0.0).unwrap();
        // waist fold, interior to the fundamental piece
        let check = curve.junction_check(0.0, 1e-5).unwrap();
        assert!(check.within, "waist {check:?}");
        // crest fold, on the periodic seam (probe wraps around)
        let (lo, _) = curve.fundamental_domain();
        let check = curve.junction_check(lo, 1e-4).unwrap();
        assert!(check.within, "crest {check:?}");
        // mean curvature is the family constant at folds and between them
        for &t in &[lo, 0.0, 0.3 * curve.period(), lo + 2.0 * curve.period()] {
            let cv = curve.curvatures_at(t).unwrap();
            assert_relative_eq!(cv.h, -1.0, epsilon = 1e-8);
        }
        assert!(curve.max_ode_residual(120).unwrap() < 1e-9);
        assert!(curve.rim_joint_checks(1e-3).is_err());
    }

    fn nodoid_m2() -> (NormSpace, PeriodicCurve) {
        let space = sp(2);
        let curve = build_nodoid(&space, 2.0, 0.0).unwrap();
        (space, curve)
    }

    #[test]
    fn nodoid_leg_heights_match_the_named_integrals() {
        let (space, curve) = nodoid_m2();
        let a = match &curve.kind {
            PeriodicKind::Arcs(a) => a,
            _ => panic!(),
        };
        let d1 = crate::quad::constant_h_d1(&space, 2.0).unwrap();
        let d3 = crate::quad::nodoid_d3(&space, 2.0).unwrap();
        assert_relative_eq!(a.d1, d1.value, epsilon = 1e-10);
        assert_relative_eq!(a.d3, d3.value, epsilon = 1e-10);
        assert_relative_eq!(curve.beta_shift(), 2.0 * (d1.value - d3.value), epsilon = 1e-9);
        assert!(curve.closure_gap().unwrap() > 0.1);
    }

    #[test]
    fn nodoid_arcs_join_continuously() {
        let (_, curve) = nodoid_m2();
        let a = match &curve.kind {
            PeriodicKind::Arcs(a) => a,
            _ => panic!(),
        };
        let eps = 1e-12;
        // whichever coordinate is not the chart parameter leaves a joint like
        // a (2m)-th root of the offset, so it gets a coarser tolerance
        let joints = [
            (a.t1, 1e-2, 1e-8),
            (a.t2, 1e-8, 1e-2),
            (a.t3, 1e-2, 1e-8),
            (curve.period(), 1e-8, 1e-8),
        ];
        for (tj, alpha_tol, beta_tol) in joints {
            let before = curve.point(tj - eps).unwrap();
            let at = curve.point(tj).unwrap();
            let after = curve.point(tj + eps).unwrap();
            for (p, q) in [(before, at), (at, after)] {
                assert!(
                    (p.0 - q.0).abs() < alpha_tol && (p.1 - q.1).abs() < beta_tol,
                    "jump at t = {tj}: {p:?} vs {q:?}"
                );
            }
        }
        // the period closes onto the shifted start point
        let start = curve.point(0.0).unwrap();
        let wrap = curve.point(curve.period()).unwrap();
        assert_eq!(start.0, wrap.0);
        assert_relative_eq!(wrap.1 - start.1, curve.beta_shift(), epsilon = 1e-12);
    }

    #[test]
    fn nodoid_fold_junctions_and_rim_joints() {
        let (space, curve) = nodoid_m2();
        let recs: Vec<_> = curve.junctions().to_vec();
        assert_eq!(recs.len(), 2);
        for rec in recs {
            let check = curve.junction_check(rec.u, 1e-4).unwrap();
            assert!(check.within, "fold at t = {}: {check:?}", rec.u);
        }
        let [rising, falling] = curve.rim_joint_checks(1e-4).unwrap();
        assert!(rising.within, "rising {rising:?}");
        assert!(falling.within, "falling {falling:?}");
        assert_relative_eq!(rising.expected, -6.0, epsilon = 1e-12); // -2(2m-1)
        assert_relative_eq!(falling.expected, 6.0, epsilon = 1e-12);
        let _ = space;
    }

    #[test]
    fn nodoid_mean_curvature_is_one_everywhere() {
        let (_, curve) = nodoid_m2();
        let tt = curve.period();
        // interior of all four arcs plus the special points
        for i in 0..60 {
            let t = tt * (i as f64 + 0.5) / 60.0;
            let cv = curve.curvatures_at(t).unwrap();
            assert!((cv.h - 1.0).abs() < 1e-7, "h = {} at t = {t}", cv.h);
        }
        for &t in &curve.special_ts() {
            let cv = curve.curvatures_at(t).unwrap();
            assert!((cv.h - 1.0).abs() < 1e-12, "h = {} at joint t = {t}", cv.h);
        }
        assert!(curve.max_ode_residual(160).unwrap() < 1e-9);
    }

    #[test]
    fn nodoid_frames_at_folds_are_exact() {
        let (_, curve) = nodoid_m2();
        let f0 = curve.frame(0.0).unwrap();
        assert_eq!(f0.dalpha, 0.0);
        assert_eq!(f0.dbeta, 1.0);
        let a = match &curve.kind {
            PeriodicKind::Arcs(a) => a,
            _ => panic!(),
        };
        assert_eq!(f0.alpha, a.b1);
        let f2 = curve.frame(a.t2).unwrap();
        assert_eq!(f2.alpha, a.b4);
        assert_eq!(f2.dalpha, 0.0);
        assert_eq!(f2.dbeta, -1.0);
        // rim joints carry the radius-chart frame
        let fr = curve.frame(a.t1).unwrap();
        assert_eq!((fr.alpha, fr.dbeta), (a.rim, 0.0));
    }

    #[test]
    fn nodoid_rejects_bad_constants() {
        let space = sp(2);
        assert!(build_nodoid(&space, 0.0, 0.0).is_err());
        assert!(build_nodoid(&space, -1.0, 0.0).is_err());
        assert!(build_nodoid(&space, f64::NAN, 0.0).is_err());
        assert!(build_unduloid(&space, 0.0, 0.0).is_err());
        assert!(build_unduloid(&space, 0.25, 0.0).is_err());
    }
}
