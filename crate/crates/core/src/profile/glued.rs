//! Complete profile curves assembled from branches glued at folds.

use crate::cases::{Family, Sign};
use crate::curvature::{curvatures_graph, CurvaturePair};
use crate::error::{Error, Result};
use crate::oracle::{ode_residual, OdeKind};
use crate::profile::branch::{
    geometric_grid, join_grids, powered_grid_toward_hi, powered_grid_toward_lo, uniform_grid,
    MonotoneBranch,
};
use crate::profile::{
    classify_constant_h, classify_constant_k, junction_curvatures, verify_c2_junction, CaseTag,
    Jet1D, JunctionCheck, JunctionRecord, ProfileJet, SingularEnd, SingularKind,
};
use crate::space::NormSpace;

/// Knots per grid region; most branches join two regions.
const REGION_KNOTS: usize = 160;
/// The unbounded minimal branch is tabulated out to this multiple of the
/// waist radius; beyond it the remaining height is O(cap^-(2m-2)).
const ALPHA_CAP_FACTOR: f64 = 1.0e5;
/// The pseudo-sphere-type branch is tabulated down to this multiple of the
/// rim radius; the height diverges as the axis is approached.
const PSEUDOSPHERE_FLOOR: f64 = 1.0e-6;

#[derive(Debug, Clone)]
pub(crate) enum PieceKind {
    Branch(MonotoneBranch),
    /// Closed-form dome `alpha = (1 - (u - center)^(2m))^(1/(2m))`: the
    /// profile of the gauge unit sphere.
    SphereDome { center: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct Piece {
    pub u_lo: f64,
    pub u_hi: f64,
    pub kind: PieceKind,
}

/// A maximal profile curve `u -> alpha(u)` of one of the classified shapes,
/// glued C^2 at its folds.
#[derive(Debug, Clone)]
pub struct GluedCurve {
    space: NormSpace,
    tag: CaseTag,
    family: Family,
    pieces: Vec<Piece>,
    junctions: Vec<JunctionRecord>,
    singular_ends: Vec<SingularEnd>,
    sphere_center: Option<f64>,
    evaluable: (f64, f64),
    math_domain: (f64, f64),
}

impl GluedCurve {
    pub fn space(&self) -> NormSpace {
        self.space
    }

    pub fn tag(&self) -> CaseTag {
        self.tag
    }

    pub(crate) fn family(&self) -> Family {
        self.family
    }

    /// Fold junctions interior to the curve.
    pub fn junctions(&self) -> &[JunctionRecord] {
        &self.junctions
    }

    /// Singular boundary points of the maximal domain (may be at infinity).
    pub fn singular_ends(&self) -> &[SingularEnd] {
        &self.singular_ends
    }

    /// Center height of the profile when the curve is the gauge sphere.
    pub fn sphere_center(&self) -> Option<f64> {
        self.sphere_center
    }

    /// Parameter range over which jets can be evaluated (always finite).
    pub fn evaluable_domain(&self) -> (f64, f64) {
        self.evaluable
    }

    /// Maximal domain of the underlying solution; ends may be infinite.
    pub fn math_domain(&self) -> (f64, f64) {
        self.math_domain
    }

    /// Which reduced equation the curve solves, for residual checks.
    pub fn ode_kind(&self) -> OdeKind {
        match self.family {
            Family::Minimal { .. } => OdeKind::Minimal,
            Family::ConstK { k, .. } => OdeKind::ConstantK { k },
            Family::ConstH { h, .. } => OdeKind::ConstantH { h },
        }
    }

    /// Jet of the radius graph at `u`. Exact fold data at junctions; jets at
    /// rim or axis ends may contain infinities, which callers must handle.
    pub fn jet(&self, u: f64) -> Result<ProfileJet> {
        if !u.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        let (lo, hi) = self.evaluable;
        let slack = 1e-9 * (1.0 + hi - lo);
        if u < lo - slack || u > hi + slack {
            return Err(Error::OutOfRange { value: u, lo, hi });
        }
        let u = u.clamp(lo, hi);
        for j in &self.junctions {
            if u == j.u {
                return Ok(ProfileJet {
                    alpha: j.alpha,
                    alpha_prime: 0.0,
                    alpha_second: self.family.alpha_second(&self.space, j.alpha),
                });
            }
        }
        let piece = self
            .pieces
            .iter()
            .find(|p| u >= p.u_lo && u <= p.u_hi)
            .ok_or(Error::OutOfRange { value: u, lo, hi })?;
        match &piece.kind {
            PieceKind::Branch(b) => b.jet_of_u(u),
            PieceKind::SphereDome { center } => Ok(sphere_dome_jet(&self.space, u - center)),
        }
    }

    /// Curvatures at `u`, with the fold-extension used at junctions (where
    /// the graph formulas are 0/0) and an error at singular ends.
    pub fn curvatures_at(&self, u: f64) -> Result<CurvaturePair> {
        let scale = 1.0 + u.abs();
        for j in &self.junctions {
            if (u - j.u).abs() <= 1e-12 * scale {
                return Ok(junction_curvatures(&self.space, j.alpha, j.expected_g));
            }
        }
        let jet = self.jet(u)?;
        if !jet.alpha_prime.is_finite() || !jet.alpha_second.is_finite() {
            return Err(Error::domain(format!("curvatures are undefined at the singular end u = {u}")));
        }
        if jet.alpha_prime == 0.0 {
            let g = self.family.fold_g_limit(&self.space, jet.alpha);
            return Ok(junction_curvatures(&self.space, jet.alpha, g));
        }
        curvatures_graph(&self.space, jet.alpha, jet.alpha_prime, jet.alpha_second)
    }

    /// Two-sided C^2 probe of the junction nearest to `u0`.
    pub fn junction_check(&self, u0: f64, tol: f64) -> Result<JunctionCheck> {
        let (lo, hi) = self.evaluable;
        let scale = 1.0 + (hi - lo).abs();
        let rec = self
            .junctions
            .iter()
            .find(|j| (u0 - j.u).abs() <= 1e-9 * scale)
            .ok_or(Error::NotAJunction { u: u0 })?;
        let room = (rec.u - lo).min(hi - rec.u);
        let probe = 1e-2 * room;
        verify_c2_junction(&self.space, self, rec.u, probe, rec.expected_g, tol)
    }

    /// Largest normalized residual of the defining equation over `n` interior
    /// sample points (margins near junctions and domain ends are skipped).
    pub fn max_ode_residual(&self, n: usize) -> Result<f64> {
        let (lo, hi) = self.evaluable;
        let span = hi - lo;
        let margin = 1e-3 * span;
        let kind = self.ode_kind();
        let mut worst = 0.0_f64;
        for i in 0..n {
            let u = lo + span * (i as f64 + 0.5) / n as f64;
            if u - lo < margin || hi - u < margin {
                continue;
            }
            if self.junctions.iter().any(|j| (u - j.u).abs() < margin) {
                continue;
            }
            let jet = self.jet(u)?;
            let r = ode_residual(&self.space, kind, &jet);
            if r.is_finite() {
                worst = worst.max(r.abs());
            }
        }
        Ok(worst)
    }
}

impl Jet1D for GluedCurve {
    fn jet1d(&self, x: f64) -> Result<(f64, f64, f64)> {
        let jet = self.jet(x)?;
        Ok((jet.alpha, jet.alpha_prime, jet.alpha_second))
    }
}

/// Closed-form jet of the gauge-sphere profile at offset `w` from the center.
pub(crate) fn sphere_dome_jet(space: &NormSpace, w: f64) -> ProfileJet {
    let tm = 2 * space.mi();
    let q = space.qf();
    let alpha = (1.0 - w.powi(tm)).max(0.0).powf(1.0 / f64::from(tm));
    let da = -(w / alpha).powi(tm - 1);
    let dda = -q * w.powi(tm - 2) * (alpha - w * da) / alpha.powi(tm);
    ProfileJet { alpha, alpha_prime: da, alpha_second: dda }
}

fn check_anchor(anchor: f64) -> Result<()> {
    if anchor.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteInput)
    }
}

fn dome_curve(space: &NormSpace, family: Family, tag: CaseTag, center: f64) -> GluedCurve {
    let g = family.fold_g_limit(space, 1.0);
    GluedCurve {
        space: *space,
        tag,
        family,
        pieces: vec![Piece {
            u_lo: center - 1.0,
            u_hi: center + 1.0,
            kind: PieceKind::SphereDome { center },
        }],
        junctions: vec![JunctionRecord { u: center, alpha: 1.0, expected_g: g }],
        singular_ends: vec![
            SingularEnd { u: center - 1.0, alpha: 0.0, kind: SingularKind::Pole },
            SingularEnd { u: center + 1.0, alpha: 0.0, kind: SingularKind::Pole },
        ],
        sphere_center: Some(center),
        evaluable: (center - 1.0, center + 1.0),
        math_domain: (center - 1.0, center + 1.0),
    }
}

/// Build the catenoid-like minimal profile with waist radius `c2` at height
/// `c3`. The height span is finite for `m >= 2`; the Euclidean case is
/// rejected because its span is infinite.
pub fn build_minimal_catenoid(space: &NormSpace, c2: f64, c3: f64) -> Result<GluedCurve> {
    check_anchor(c3)?;
    if space.m() == 1 {
        return Err(Error::DivergentIntegral {
            reason: "the Euclidean catenoid has unbounded height; only m >= 2 folds up",
        });
    }
    let family = Family::Minimal { c2 };
    family.interval(space)?;
    let d1 = crate::quad::minimal_d1(space, c2)?;
    let power = 2.0 * space.mf();
    let knots = join_grids(vec![
        powered_grid_toward_lo(c2, 2.0 * c2, REGION_KNOTS, power),
        geometric_grid(2.0 * c2, ALPHA_CAP_FACTOR * c2, REGION_KNOTS),
    ]);
    let minus = MonotoneBranch::build(*space, family, Sign::Minus, knots.clone(), c2, c3)?;
    let plus = MonotoneBranch::build(*space, family, Sign::Plus, knots, c2, c3)?;
    let evaluable = (minus.u_range().0, plus.u_range().1);
    let g = family.fold_g_limit(space, c2);
    Ok(GluedCurve {
        space: *space,
        tag: CaseTag::Minimal,
        family,
        pieces: vec![
            Piece { u_lo: evaluable.0, u_hi: c3, kind: PieceKind::Branch(minus) },
            Piece { u_lo: c3, u_hi: evaluable.1, kind: PieceKind::Branch(plus) },
        ],
        junctions: vec![JunctionRecord { u: c3, alpha: c2, expected_g: g }],
        singular_ends: vec![
            SingularEnd {
                u: c3 - d1.value,
                alpha: f64::INFINITY,
                kind: SingularKind::UnboundedRadius,
            },
            SingularEnd {
                u: c3 + d1.value,
                alpha: f64::INFINITY,
                kind: SingularKind::UnboundedRadius,
            },
        ],
        sphere_center: None,
        evaluable,
        math_domain: (c3 - d1.value, c3 + d1.value),
    })
}

/// Build the maximal constant-k profile for `k = +/-1` and first-integral
/// constant `c1`, anchored at height `anchor` (the fold height when the case
/// has a fold, the rim height otherwise).
pub fn build_constant_k_curve(
    space: &NormSpace,
    k: Sign,
    c1: f64,
    anchor: f64,
) -> Result<GluedCurve> {
    check_anchor(anchor)?;
    let tag = classify_constant_k(space, k, c1)?;
    let family = Family::ConstK { k: k.factor(), c1 };
    let iv = family.interval(space)?;
    let power = 2.0 * space.mf();
    match tag {
        CaseTag::KSphere => Ok(dome_curve(space, family, tag, anchor)),
        CaseTag::KSpindle | CaseTag::KBarrel => {
            // fold at the high end; the left piece rises toward it
            let fold = iv.hi;
            let knots = powered_grid_toward_hi(iv.lo, iv.hi, 2 * REGION_KNOTS, power);
            let plus = MonotoneBranch::build(*space, family, Sign::Plus, knots.clone(), fold, anchor)?;
            let minus = MonotoneBranch::build(*space, family, Sign::Minus, knots, fold, anchor)?;
            let evaluable = (plus.u_range().0, minus.u_range().1);
            let g = family.fold_g_limit(space, fold);
            let singular_ends = if tag == CaseTag::KSpindle {
                let slope = 1.0 / family.integrand(space, 0.0);
                vec![
                    SingularEnd {
                        u: evaluable.0,
                        alpha: 0.0,
                        kind: SingularKind::ConePoint { slope },
                    },
                    SingularEnd {
                        u: evaluable.1,
                        alpha: 0.0,
                        kind: SingularKind::ConePoint { slope: -slope },
                    },
                ]
            } else {
                vec![
                    SingularEnd { u: evaluable.0, alpha: iv.lo, kind: SingularKind::Rim },
                    SingularEnd { u: evaluable.1, alpha: iv.lo, kind: SingularKind::Rim },
                ]
            };
            Ok(GluedCurve {
                space: *space,
                tag,
                family,
                pieces: vec![
                    Piece { u_lo: evaluable.0, u_hi: anchor, kind: PieceKind::Branch(plus) },
                    Piece { u_lo: anchor, u_hi: evaluable.1, kind: PieceKind::Branch(minus) },
                ],
                junctions: vec![JunctionRecord { u: anchor, alpha: fold, expected_g: g }],
                singular_ends,
                sphere_center: None,
                evaluable,
                math_domain: evaluable,
            })
        }
        CaseTag::KPseudosphere => {
            let knots = join_grids(vec![
                geometric_grid(PSEUDOSPHERE_FLOOR, 0.5, REGION_KNOTS),
                uniform_grid(0.5, 1.0, REGION_KNOTS),
            ]);
            let plus = MonotoneBranch::build(*space, family, Sign::Plus, knots, 1.0, anchor)?;
            let evaluable = plus.u_range();
            Ok(GluedCurve {
                space: *space,
                tag,
                family,
                pieces: vec![Piece {
                    u_lo: evaluable.0,
                    u_hi: evaluable.1,
                    kind: PieceKind::Branch(plus),
                }],
                junctions: vec![],
                singular_ends: vec![
                    SingularEnd {
                        u: f64::NEG_INFINITY,
                        alpha: 0.0,
                        kind: SingularKind::UnboundedHeight,
                    },
                    SingularEnd { u: anchor, alpha: 1.0, kind: SingularKind::Rim },
                ],
                sphere_center: None,
                evaluable,
                math_domain: (f64::NEG_INFINITY, anchor),
            })
        }
        CaseTag::KConic => {
            let rim = iv.hi;
            let knots = uniform_grid(0.0, rim, 2 * REGION_KNOTS);
            let plus = MonotoneBranch::build(*space, family, Sign::Plus, knots, rim, anchor)?;
            let evaluable = plus.u_range();
            let slope = 1.0 / family.integrand(space, 0.0);
            Ok(GluedCurve {
                space: *space,
                tag,
                family,
                pieces: vec![Piece {
                    u_lo: evaluable.0,
                    u_hi: evaluable.1,
                    kind: PieceKind::Branch(plus),
                }],
                junctions: vec![],
                singular_ends: vec![
                    SingularEnd {
                        u: evaluable.0,
                        alpha: 0.0,
                        kind: SingularKind::ConePoint { slope },
                    },
                    SingularEnd { u: anchor, alpha: rim, kind: SingularKind::Rim },
                ],
                sphere_center: None,
                evaluable,
                math_domain: evaluable,
            })
        }
        CaseTag::KHyperboloid => {
            // fold at the low end; the left piece descends into it
            let fold = iv.lo;
            let knots = powered_grid_toward_lo(iv.lo, iv.hi, 2 * REGION_KNOTS, power);
            let minus = MonotoneBranch::build(*space, family, Sign::Minus, knots.clone(), fold, anchor)?;
            let plus = MonotoneBranch::build(*space, family, Sign::Plus, knots, fold, anchor)?;
            let evaluable = (minus.u_range().0, plus.u_range().1);
            let g = family.fold_g_limit(space, fold);
            Ok(GluedCurve {
                space: *space,
                tag,
                family,
                pieces: vec![
                    Piece { u_lo: evaluable.0, u_hi: anchor, kind: PieceKind::Branch(minus) },
                    Piece { u_lo: anchor, u_hi: evaluable.1, kind: PieceKind::Branch(plus) },
                ],
                junctions: vec![JunctionRecord { u: anchor, alpha: fold, expected_g: g }],
                singular_ends: vec![
                    SingularEnd { u: evaluable.0, alpha: iv.hi, kind: SingularKind::Rim },
                    SingularEnd { u: evaluable.1, alpha: iv.hi, kind: SingularKind::Rim },
                ],
                sphere_center: None,
                evaluable,
                math_domain: evaluable,
            })
        }
        _ => unreachable!("constant-k classification"),
    }
}

/// Build the maximal constant-h profile for `h = +/-1` and first-integral
/// constant `c`, anchored at height `anchor` (fold height where a fold
/// exists; sphere center for c = 0).
pub fn build_constant_h_curve(
    space: &NormSpace,
    h: Sign,
    c: f64,
    anchor: f64,
) -> Result<GluedCurve> {
    check_anchor(anchor)?;
    let tag = classify_constant_h(space, h, c)?;
    let family = Family::ConstH { h: h.factor(), c };
    let power = 2.0 * space.mf();
    match tag {
        CaseTag::HSphere => Ok(dome_curve(space, family, tag, anchor)),
        CaseTag::HLobe => {
            // fold at the low end, rims above on both sides
            let iv = family.interval(space)?;
            let fold = iv.lo;
            let knots = powered_grid_toward_lo(iv.lo, iv.hi, 2 * REGION_KNOTS, power);
            let minus = MonotoneBranch::build(*space, family, Sign::Minus, knots.clone(), fold, anchor)?;
            let plus = MonotoneBranch::build(*space, family, Sign::Plus, knots, fold, anchor)?;
            let evaluable = (minus.u_range().0, plus.u_range().1);
            let g = family.fold_g_limit(space, fold);
            Ok(GluedCurve {
                space: *space,
                tag,
                family,
                pieces: vec![
                    Piece { u_lo: evaluable.0, u_hi: anchor, kind: PieceKind::Branch(minus) },
                    Piece { u_lo: anchor, u_hi: evaluable.1, kind: PieceKind::Branch(plus) },
                ],
                junctions: vec![JunctionRecord { u: anchor, alpha: fold, expected_g: g }],
                singular_ends: vec![
                    SingularEnd { u: evaluable.0, alpha: iv.hi, kind: SingularKind::Rim },
                    SingularEnd { u: evaluable.1, alpha: iv.hi, kind: SingularKind::Rim },
                ],
                sphere_center: None,
                evaluable,
                math_domain: evaluable,
            })
        }
        CaseTag::HUnduloid => {
            // one period-half between the two folds, waist at the anchor
            let iv = family.interval(space)?;
            let mid = 0.5 * (iv.lo + iv.hi);
            let knots = join_grids(vec![
                powered_grid_toward_lo(iv.lo, mid, REGION_KNOTS, power),
                powered_grid_toward_hi(mid, iv.hi, REGION_KNOTS, power),
            ]);
            let minus = MonotoneBranch::build(*space, family, Sign::Minus, knots.clone(), iv.lo, anchor)?;
            let plus = MonotoneBranch::build(*space, family, Sign::Plus, knots, iv.lo, anchor)?;
            let evaluable = (minus.u_range().0, plus.u_range().1);
            let g = family.fold_g_limit(space, iv.lo);
            Ok(GluedCurve {
                space: *space,
                tag,
                family,
                pieces: vec![
                    Piece { u_lo: evaluable.0, u_hi: anchor, kind: PieceKind::Branch(minus) },
                    Piece { u_lo: anchor, u_hi: evaluable.1, kind: PieceKind::Branch(plus) },
                ],
                junctions: vec![JunctionRecord { u: anchor, alpha: iv.lo, expected_g: g }],
                singular_ends: vec![],
                sphere_center: None,
                evaluable,
                math_domain: evaluable,
            })
        }
        CaseTag::HNodoid => {
            // the h = -1 arc of the nodoid: rim up to the outer fold and back
            let iv = family.interval(space)?;
            let fold = iv.hi;
            let knots = powered_grid_toward_hi(iv.lo, iv.hi, 2 * REGION_KNOTS, power);
            let plus = MonotoneBranch::build(*space, family, Sign::Plus, knots.clone(), fold, anchor)?;
            let minus = MonotoneBranch::build(*space, family, Sign::Minus, knots, fold, anchor)?;
            let evaluable = (plus.u_range().0, minus.u_range().1);
            let g = family.fold_g_limit(space, fold);
            Ok(GluedCurve {
                space: *space,
                tag,
                family,
                pieces: vec![
                    Piece { u_lo: evaluable.0, u_hi: anchor, kind: PieceKind::Branch(plus) },
                    Piece { u_lo: anchor, u_hi: evaluable.1, kind: PieceKind::Branch(minus) },
                ],
                junctions: vec![JunctionRecord { u: anchor, alpha: fold, expected_g: g }],
                singular_ends: vec![
                    SingularEnd { u: evaluable.0, alpha: iv.lo, kind: SingularKind::Rim },
                    SingularEnd { u: evaluable.1, alpha: iv.lo, kind: SingularKind::Rim },
                ],
                sphere_center: None,
                evaluable,
                math_domain: evaluable,
            })
        }
        _ => unreachable!("constant-h classification"),
    }
}
