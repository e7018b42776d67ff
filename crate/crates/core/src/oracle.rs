//! Independent numerical cross-checks of the closed-form machinery.
//!
//! Everything in this module recomputes a quantity by a route that shares no
//! code with the closed forms it is checked against: the Birkhoff normal by
//! root-finding its defining equations, the shape coefficients by finite
//! differences of the normal field, and the profile equations by direct
//! residual evaluation on jets.

use crate::curvature::{birkhoff_gauss, shape_coefficients, ProfilePoint};
use crate::error::{Error, Result};
use crate::profile::ProfileJet;
use crate::space::{NormSpace, Vec3};

/// Which reduced profile equation a curve claims to solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeKind {
    Minimal,
    ConstantK { k: f64 },
    ConstantH { h: f64 },
}

/// Residual of the reduced second-order profile equation on a graph jet.
/// The minimal residual is normalized by its leading coefficient so that the
/// value stays O(1) even where the radius grows without bound.
pub fn ode_residual(space: &NormSpace, kind: OdeKind, jet: &ProfileJet) -> f64 {
    let mf = space.mf();
    let q = space.qf();
    let tm = 2.0 * mf;
    let e = (tm - 2.0) / q;
    let ap = jet.alpha_prime.abs();
    let a_g = ap.powf(tm / q) + 1.0;
    // |alpha'|^(-(2m-2)/(2m-1)) * alpha'': continuous across folds
    let w = jet.alpha_second * ap.powf(-e);
    match kind {
        OdeKind::Minimal => (jet.alpha * w - q * a_g) / a_g,
        OdeKind::ConstantK { k } => -w * a_g.powf(-(mf + 1.0) / mf) / q - k * jet.alpha,
        OdeKind::ConstantH { h } => {
            jet.alpha * w * a_g.powf(-(tm + 1.0) / tm) / q - a_g.powf(-1.0 / tm) - 2.0 * h * jet.alpha
        }
    }
}

/// Solution of the defining equations of the Birkhoff normal, found by
/// root-finding rather than by the closed form.
#[derive(Debug, Clone, Copy)]
pub struct BirkhoffSolution {
    pub eta: Vec3,
    pub iterations: usize,
    /// Scale-normalized final residual of the defining system.
    pub residual: f64,
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        let pivot_row = m[col];
        for row_data in m.iter_mut().skip(col + 1) {
            let f = row_data[col] / pivot_row[col];
            for (x, p) in row_data[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let mut s = m[i][3];
        for k in (i + 1)..3 {
            s -= m[i][k] * x[k];
        }
        x[i] = s / m[i][i];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Find the Birkhoff normal at a surface point by solving its defining
/// system with a damped Newton iteration: unit gauge value, gauge gradient
/// orthogonal to both tangents, and the orientation that pairs the gradient
/// positively with `f_u x f_v`. Independent of [`birkhoff_gauss`].
pub fn numeric_birkhoff_gauss(
    space: &NormSpace,
    point: &ProfilePoint,
    v: f64,
) -> Result<BirkhoffSolution> {
    if !v.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    // same jet requirements as the closed-form curvature formulas; at fold
    // or pole tangencies the defining system degenerates for m >= 2
    shape_coefficients(space, *point)?;
    let (sv, cv) = v.sin_cos();
    let f_u = Vec3::new(point.alpha_prime * cv, point.alpha_prime * sv, point.beta_prime);
    let f_v = Vec3::new(-point.alpha * sv, point.alpha * cv, 0.0);
    let n = f_u.cross(f_v);
    let nlen = n.length();
    if nlen == 0.0 {
        return Err(Error::DegenerateTangents);
    }
    // The solution maximizes <n, x> over the unit gauge ball, so scan the
    // profile quarter-circle through n's horizontal direction for the best
    // start. The plain Euclidean normal (kept as one candidate) can start
    // hopelessly far off for large m, where the gauge ball is extremely
    // anisotropic and the first Newton step stalls
    let mut x = n * (1.0 / space.norm(n));
    let mut best = n.dot(x);
    let w_h = n.x.hypot(n.y);
    let (cw, sw) = if w_h > 0.0 { (n.x / w_h, n.y / w_h) } else { (cv, sv) };
    let zsign = if n.z >= 0.0 { 1.0 } else { -1.0 };
    for k in 0..=32 {
        let rho = k as f64 / 32.0;
        let z = zsign
            * (1.0 - rho.powi(2 * space.mi())).max(0.0).powf(0.5 / space.mf());
        let cand = Vec3::new(rho * cw, rho * sw, z);
        if n.dot(cand) > best {
            best = n.dot(cand);
            x = cand;
        }
    }

    let residual_of = |x: Vec3| -> (f64, [f64; 3], Vec3) {
        let g = space.grad_phi(x);
        let f = [space.phi(x) - 1.0, g.dot(f_u), g.dot(f_v)];
        let s1 = (g.length() * f_u.length()).max(1e-300);
        let s2 = (g.length() * f_v.length()).max(1e-300);
        let r = f[0].abs().max(f[1].abs() / s1).max(f[2].abs() / s2);
        (r, f, g)
    };

    let mut iterations = 0;
    let (mut r, mut f, mut g) = residual_of(x);
    for it in 0..60 {
        iterations = it;
        if r <= 1e-13 {
            break;
        }
        let hess = space.hessian_phi(x);
        let hrow = |t: Vec3| {
            Vec3::new(
                t.x * hess[0].x + t.y * hess[1].x + t.z * hess[2].x,
                t.x * hess[0].y + t.y * hess[1].y + t.z * hess[2].y,
                t.x * hess[0].z + t.y * hess[1].z + t.z * hess[2].z,
            )
        };
        let ju = hrow(f_u);
        let jv = hrow(f_v);
        let jac = [[g.x, g.y, g.z], [ju.x, ju.y, ju.z], [jv.x, jv.y, jv.z]];
        let rhs = [-f[0], -f[1], -f[2]];
        let Some(step) = solve3(jac, rhs) else {
            return Err(Error::DidNotConverge { iterations: it, residual: r });
        };
        let delta = Vec3::new(step[0], step[1], step[2]);
        // backtracking: accept the first step length that reduces the residual.
        // Every candidate is pulled back onto the gauge sphere first, which
        // keeps the iteration bounded even when the raw Newton step is wild;
        // for large m the gauge is so flat in the axial direction that the
        // first step can overshoot by orders of magnitude, hence the deep sweep
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let raw = x + delta * lambda;
            let nn = space.norm(raw);
            if nn.is_finite() && nn > 0.0 {
                let cand = raw * (1.0 / nn);
                let (rc, fc, gc) = residual_of(cand);
                if rc < r {
                    x = cand;
                    r = rc;
                    f = fc;
                    g = gc;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            // no step length helps: the residual has stagnated at whatever
            // level roundoff allows, and the final check below decides
            break;
        }
    }
    if r > 1e-10 {
        return Err(Error::DidNotConverge { iterations, residual: r });
    }
    // both antipodes solve the orthogonality system; pick the oriented one
    if g.dot(n) < 0.0 {
        x = -x;
    }
    let (rf, _, _) = residual_of(x);
    Ok(BirkhoffSolution { eta: x, iterations: iterations as usize, residual: rf })
}

/// Analytic and finite-difference shape coefficients at one surface point.
#[derive(Debug, Clone, Copy)]
pub struct FdReport {
    pub k_u: f64,
    pub k_v: f64,
    pub k_u_fd: f64,
    pub k_v_fd: f64,
}

impl FdReport {
    pub fn max_error(&self) -> f64 {
        (self.k_u_fd - self.k_u).abs().max((self.k_v_fd - self.k_v).abs())
    }
}

/// Differentiate the Birkhoff normal field numerically along both surface
/// directions and read off the shape coefficients from
/// `d_eta(f_u) = k_u f_u` and `d_eta(f_v) = k_v f_v`. `frame` must produce
/// profile jets on a neighborhood `[u - 2h, u + 2h]`. Fourth-order stencil.
pub fn fd_shape_operator<F: Fn(f64) -> ProfilePoint>(
    space: &NormSpace,
    frame: F,
    u: f64,
    v: f64,
    h: f64,
) -> Result<FdReport> {
    if !(h > 0.0) || !u.is_finite() || !v.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let p = frame(u);
    let coeffs = shape_coefficients(space, p)?;
    let eta_at_u = |uu: f64| -> Result<Vec3> {
        let q = frame(uu);
        birkhoff_gauss(space, q.alpha_prime, q.beta_prime, v)
    };
    let em2 = eta_at_u(u - 2.0 * h)?;
    let em1 = eta_at_u(u - h)?;
    let ep1 = eta_at_u(u + h)?;
    let ep2 = eta_at_u(u + 2.0 * h)?;
    let deta_u = (em2 - ep2 + (ep1 - em1) * 8.0) * (1.0 / (12.0 * h));
    let eta_at_v = |vv: f64| -> Result<Vec3> {
        birkhoff_gauss(space, p.alpha_prime, p.beta_prime, vv)
    };
    let fm2 = eta_at_v(v - 2.0 * h)?;
    let fm1 = eta_at_v(v - h)?;
    let fp1 = eta_at_v(v + h)?;
    let fp2 = eta_at_v(v + 2.0 * h)?;
    let deta_v = (fm2 - fp2 + (fp1 - fm1) * 8.0) * (1.0 / (12.0 * h));
    let (sv, cv) = v.sin_cos();
    let f_u = Vec3::new(p.alpha_prime * cv, p.alpha_prime * sv, p.beta_prime);
    let f_v = Vec3::new(-p.alpha * sv, p.alpha * cv, 0.0);
    let k_u_fd = deta_u.dot(f_u) / f_u.dot(f_u);
    let k_v_fd = deta_v.dot(f_v) / f_v.dot(f_v);
    Ok(FdReport { k_u: coeffs.k_u, k_v: coeffs.k_v, k_u_fd, k_v_fd })
}

/// On the gauge sphere the Birkhoff normal at a point is the antipode of the
/// point itself. Samples the sphere profile away from its poles and equator
/// and returns the largest Euclidean deviation `|eta(p) + p|`.
pub fn sphere_identity_check(space: &NormSpace, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    let golden = 2.399963229728653; // radians between successive sample angles
    let mut worst = 0.0_f64;
    for i in 0..n {
        let w = -0.97 + 1.94 * (i as f64 + 0.5) / n as f64;
        if w.abs() < 1e-3 {
            continue; // equator: fold of the dome profile
        }
        let jet = crate::profile::sphere_dome_jet(space, w);
        let v = golden * i as f64;
        let eta = birkhoff_gauss(space, jet.alpha_prime, 1.0, v)?;
        let p = Vec3::new(jet.alpha * v.cos(), jet.alpha * v.sin(), w);
        worst = worst.max((eta + p).length());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sp(m: u32) -> NormSpace {
        NormSpace::new(m).unwrap()
    }

    #[test]
    fn newton_solution_matches_the_closed_form() {
        let jets = [
            ProfilePoint::new(1.0, 1.0, 0.0, 1.0, 0.0),
            ProfilePoint::new(2.5, -0.7, 1.1, 1.0, 0.0),
            ProfilePoint::new(0.4, 0.3, -2.0, -1.0, 0.2),
            ProfilePoint::new(1.7, -1.2, 0.4, 0.6, -0.3),
        ];
        for m in [1_u32, 2, 3, 5] {
            let space = if m == 1 { NormSpace::oracle(1).unwrap() } else { sp(m) };
            for (ji, p) in jets.iter().enumerate() {
                for &v in &[0.0, 0.9, 2.4, 4.0] {
                    let sol = numeric_birkhoff_gauss(&space, p, v).unwrap();
                    let eta = crate::curvature::birkhoff_gauss(&space, p.alpha_prime, p.beta_prime, v)
                        .unwrap();
                    let dist = (sol.eta - eta).length();
                    assert!(
                        dist < 1e-11,
                        "m {m} jet {ji} v {v}: newton {:?} closed {:?} dist {dist}",
                        sol.eta,
                        eta
                    );
                    assert!(sol.residual <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn newton_solution_solves_the_defining_equations() {
        let space = sp(3);
        let p = ProfilePoint::new(1.3, 0.8, 0.0, -0.5, 0.0);
        let v = 1.1;
        let sol = numeric_birkhoff_gauss(&space, &p, v).unwrap();
        assert_relative_eq!(space.phi(sol.eta), 1.0, epsilon = 1e-12);
        let (sv, cv) = v.sin_cos();
        let f_u = Vec3::new(p.alpha_prime * cv, p.alpha_prime * sv, p.beta_prime);
        let f_v = Vec3::new(-p.alpha * sv, p.alpha * cv, 0.0);
        let g = space.grad_phi(sol.eta);
        assert!(g.dot(f_u).abs() < 1e-12 * g.length() * f_u.length());
        assert!(g.dot(f_v).abs() < 1e-12 * g.length() * f_v.length());
        assert!(g.dot(f_u.cross(f_v)) > 0.0);
    }

    #[test]
    fn degenerate_jets_are_rejected() {
        let space = sp(2);
        let fold = ProfilePoint::new(1.0, 0.0, 1.0, 1.0, 0.0);
        assert!(numeric_birkhoff_gauss(&space, &fold, 0.0).is_err());
        let vertical = ProfilePoint::new(1.0, 1.0, 0.0, 0.0, 0.0);
        assert!(numeric_birkhoff_gauss(&space, &vertical, 0.0).is_err());
    }

    #[test]
    fn finite_differences_recover_the_shape_coefficients() {
        // profile alpha(u) = 1 + sin(u)/4, beta(u) = u
        let frame = |u: f64| {
            ProfilePoint::graph(1.0 + 0.25 * u.sin(), 0.25 * u.cos(), -0.25 * u.sin())
        };
        for m in [1_u32, 2, 4] {
            let space = if m == 1 { NormSpace::oracle(1).unwrap() } else { sp(m) };
            let rep = fd_shape_operator(&space, frame, 0.6, 1.3, 1e-4).unwrap();
            assert!(
                rep.max_error() < 1e-9,
                "m {m}: k_u {} vs {}, k_v {} vs {}",
                rep.k_u,
                rep.k_u_fd,
                rep.k_v,
                rep.k_v_fd
            );
        }
    }

    #[test]
    fn finite_difference_error_shrinks_at_fourth_order() {
        let frame = |u: f64| {
            ProfilePoint::graph(1.0 + 0.25 * u.sin(), 0.25 * u.cos(), -0.25 * u.sin())
        };
        let space = sp(2);
        let coarse = fd_shape_operator(&space, frame, 0.6, 0.8, 2e-3).unwrap().max_error();
        let fine = fd_shape_operator(&space, frame, 0.6, 0.8, 1e-3).unwrap().max_error();
        // fourth-order stencil: halving h should gain ~16x; allow slack
        assert!(fine < coarse / 8.0, "coarse {coarse} fine {fine}");
    }

    #[test]
    fn sphere_normals_point_at_the_antipode() {
        for m in [1_u32, 2, 3, 4] {
            let space = if m == 1 { NormSpace::oracle(1).unwrap() } else { sp(m) };
            let worst = sphere_identity_check(&space, 64).unwrap();
            assert!(worst < 1e-12, "m {m}: deviation {worst}");
        }
    }

    #[test]
    fn family_jets_have_zero_residual() {
        use crate::cases::Family;
        let space = sp(2);
        let checks: [(Family, OdeKind, f64); 4] = [
            (Family::Minimal { c2: 1.0 }, OdeKind::Minimal, 1.6),
            (Family::ConstK { k: 1.0, c1: 0.5 }, OdeKind::ConstantK { k: 1.0 }, 0.55),
            (Family::ConstK { k: -1.0, c1: 2.0 }, OdeKind::ConstantK { k: -1.0 }, 1.2),
            (Family::ConstH { h: -1.0, c: 0.2 }, OdeKind::ConstantH { h: -1.0 }, 0.5),
        ];
        for (fam, kind, rho) in checks {
            let jet = ProfileJet {
                alpha: rho,
                alpha_prime: fam.alpha_prime_abs(&space, rho),
                alpha_second: fam.alpha_second(&space, rho),
            };
            let r = ode_residual(&space, kind, &jet);
            assert!(r.abs() < 1e-12, "{kind:?} at rho {rho}: residual {r}");
        }
    }

    #[test]
    fn wrong_constant_shows_up_in_the_residual() {
        use crate::cases::Family;
        let space = sp(2);
        let fam = Family::ConstH { h: -1.0, c: 0.2 };
        let jet = ProfileJet {
            alpha: 0.5,
            alpha_prime: fam.alpha_prime_abs(&space, 0.5),
            alpha_second: fam.alpha_second(&space, 0.5),
        };
        let r = ode_residual(&space, OdeKind::ConstantH { h: 1.0 }, &jet);
        assert!(r.abs() > 0.5, "residual should flag the wrong sign, got {r}");
    }
}
