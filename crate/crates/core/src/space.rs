//! The ambient normed space.
//!
//! For an integer `m >= 1` the unit sphere of the space is the level set
//! `(x1^2 + x2^2)^m + x3^(2m) = 1`. The gauge `phi` is the left-hand side;
//! the norm is `phi^(1/(2m))`. For `m = 1` this is the Euclidean norm, kept
//! around as an oracle mode so that everything downstream can be checked
//! against classical formulas; the anisotropic geometry needs `m >= 2`.

use crate::error::{Error, Result};

/// Plain 3-vector with the handful of operations the crate needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// Euclidean length, used only for normalising test quantities.
    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl std::ops::Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl std::ops::Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// `x^(num/den)` for odd positive `den`, using the real branch of the odd
/// root: the result carries `sign(x)^num`. This is the power convention used
/// throughout the curvature formulas, where exponents always have odd
/// denominator `2m - 1`.
pub(crate) fn signed_frac_pow(x: f64, num: i32, den: i32) -> f64 {
    debug_assert!(den > 0 && den % 2 == 1);
    if num == 0 {
        return 1.0;
    }
    let mag = x.abs().powf(f64::from(num) / f64::from(den));
    if x.is_sign_negative() && num.rem_euclid(2) == 1 {
        -mag
    } else {
        mag
    }
}

/// The normed space with gauge `(x1^2 + x2^2)^m + x3^(2m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormSpace {
    m: u32,
}

impl NormSpace {
    /// A space with the anisotropic norm; requires `m >= 2`.
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidExponent { m });
        }
        Self::checked(m)
    }

    /// Oracle mode: also admits `m = 1`, where the norm is Euclidean and all
    /// downstream quantities reduce to their classical values.
    pub fn oracle(m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidExponent { m });
        }
        Self::checked(m)
    }

    fn checked(m: u32) -> Result<Self> {
        if m > 1_000_000 {
            return Err(Error::domain(format!("m = {m} is too large for stable floating point powers")));
        }
        Ok(NormSpace { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `m` as f64, handy in exponent arithmetic.
    pub(crate) fn mf(&self) -> f64 {
        f64::from(self.m)
    }

    pub(crate) fn mi(&self) -> i32 {
        self.m as i32
    }

    /// The recurring odd integer `2m - 1`.
    pub(crate) fn q(&self) -> i32 {
        2 * self.mi() - 1
    }

    pub(crate) fn qf(&self) -> f64 {
        f64::from(self.q())
    }

    /// Signed power with the space's odd denominator: `x^(num/(2m-1))`.
    pub(crate) fn spow(&self, x: f64, num: i32) -> f64 {
        signed_frac_pow(x, num, self.q())
    }

    /// Gauge function `phi(p) = (x1^2 + x2^2)^m + x3^(2m)`. The unit sphere
    /// is `phi = 1`; `phi` is homogeneous of degree `2m`.
    pub fn phi(&self, p: Vec3) -> f64 {
        let s = p.x * p.x + p.y * p.y;
        s.powi(self.mi()) + p.z.powi(2 * self.mi())
    }

    /// Gradient of the gauge.
    pub fn grad_phi(&self, p: Vec3) -> Vec3 {
        let m = self.mi();
        let tm = 2.0 * self.mf();
        let s = p.x * p.x + p.y * p.y;
        let sp = s.powi(m - 1);
        Vec3::new(
            tm * sp * p.x,
            tm * sp * p.y,
            tm * p.z.powi(2 * m - 1),
        )
    }

    /// Hessian of the gauge, returned as the symmetric matrix rows.
    pub fn hessian_phi(&self, p: Vec3) -> [Vec3; 3] {
        let m = self.mf();
        if self.m == 1 {
            // Euclidean gauge x.x: Hessian is 2I, and the generic formula
            // below would hit 0^(-1) on the axis.
            return [
                Vec3::new(2.0, 0.0, 0.0),
                Vec3::new(0.0, 2.0, 0.0),
                Vec3::new(0.0, 0.0, 2.0),
            ];
        }
        let s = p.x * p.x + p.y * p.y;
        let sp = s.powi(self.mi() - 2);
        let hxx = 2.0 * m * sp * (2.0 * (m - 1.0) * p.x * p.x + s);
        let hyy = 2.0 * m * sp * (2.0 * (m - 1.0) * p.y * p.y + s);
        let hxy = 4.0 * m * (m - 1.0) * sp * p.x * p.y;
        let hzz = 2.0 * m * (2.0 * m - 1.0) * p.z.powi(2 * self.mi() - 2);
        [
            Vec3::new(hxx, hxy, 0.0),
            Vec3::new(hxy, hyy, 0.0),
            Vec3::new(0.0, 0.0, hzz),
        ]
    }

    /// Minkowski norm `phi(p)^(1/(2m))`.
    pub fn norm(&self, p: Vec3) -> f64 {
        self.phi(p).powf(1.0 / (2.0 * self.mf()))
    }

    /// Whether `v` is Birkhoff-orthogonal to the plane spanned by `t1`, `t2`:
    /// the plane through the tip of `v/|v|` in that direction supports the
    /// unit ball, which for a smooth gauge means the gradient at the tip
    /// annihilates both spanning vectors. `tol` is relative to the gradient
    /// and tangent magnitudes.
    pub fn is_birkhoff_orthogonal(&self, v: Vec3, t1: Vec3, t2: Vec3, tol: f64) -> Result<bool> {
        if !(v.is_finite() && t1.is_finite() && t2.is_finite()) || !tol.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        let vn = v.length();
        if vn == 0.0 {
            return Err(Error::ZeroVector);
        }
        let l1 = t1.length();
        let l2 = t2.length();
        if t1.cross(t2).length() <= 1e-14 * l1 * l2 || l1 == 0.0 || l2 == 0.0 {
            return Err(Error::DegenerateTangents);
        }
        let unit = v * (1.0 / self.norm(v));
        let g = self.grad_phi(unit);
        let gn = g.length();
        Ok(g.dot(t1).abs() <= tol * gn * l1 && g.dot(t2).abs() <= tol * gn * l2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constructor_rejects_small_m() {
        assert!(matches!(NormSpace::new(0), Err(Error::InvalidExponent { m: 0 })));
        assert!(matches!(NormSpace::new(1), Err(Error::InvalidExponent { m: 1 })));
        assert!(NormSpace::new(2).is_ok());
        assert!(NormSpace::oracle(1).is_ok());
        assert!(matches!(NormSpace::oracle(0), Err(Error::InvalidExponent { m: 0 })));
    }

    #[test]
    fn phi_matches_hand_values() {
        let sp = NormSpace::new(2).unwrap();
        // (1^2 + 1^2)^2 + 1^4 = 5
        assert_relative_eq!(sp.phi(Vec3::new(1.0, 1.0, 1.0)), 5.0);
        // (4)^2 + 16 = 32 at (2, 0, 2)
        assert_relative_eq!(sp.phi(Vec3::new(2.0, 0.0, 2.0)), 32.0);
        let sp3 = NormSpace::new(3).unwrap();
        // (2)^3 + 1 = 9 at (1, 1, 1)
        assert_relative_eq!(sp3.phi(Vec3::new(1.0, 1.0, 1.0)), 9.0);
    }

    #[test]
    fn norm_is_homogeneous_and_euclidean_for_m1() {
        let sp = NormSpace::new(3).unwrap();
        let p = Vec3::new(0.3, -1.2, 0.7);
        assert_relative_eq!(sp.norm(p * 2.5), 2.5 * sp.norm(p), max_relative = 1e-14);

        let e = NormSpace::oracle(1).unwrap();
        assert_relative_eq!(e.norm(Vec3::new(3.0, 4.0, 12.0)), 13.0, max_relative = 1e-15);
    }

    #[test]
    fn gradient_and_hessian_match_finite_differences() {
        for m in [1u32, 2, 3, 4] {
            let sp = NormSpace::oracle(m).unwrap();
            let p = Vec3::new(0.8, -0.45, 0.6);
            let h = 1e-5;
            let g = sp.grad_phi(p);
            let hess = sp.hessian_phi(p);
            let axes = [Vec3::new(h, 0.0, 0.0), Vec3::new(0.0, h, 0.0), Vec3::new(0.0, 0.0, h)];
            for (i, dv) in axes.iter().enumerate() {
                let fd = (sp.phi(p + *dv) - sp.phi(p - *dv)) / (2.0 * h);
                let gi = [g.x, g.y, g.z][i];
                assert_relative_eq!(fd, gi, max_relative = 1e-8, epsilon = 1e-9);
                let fd_row = (sp.grad_phi(p + *dv) - sp.grad_phi(p - *dv)) * (1.0 / (2.0 * h));
                let row = hess[i];
                assert_relative_eq!(fd_row.x, row.x, max_relative = 1e-6, epsilon = 1e-7);
                assert_relative_eq!(fd_row.y, row.y, max_relative = 1e-6, epsilon = 1e-7);
                assert_relative_eq!(fd_row.z, row.z, max_relative = 1e-6, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn gradient_scales_with_degree_minus_one() {
        let sp = NormSpace::new(2).unwrap();
        let p = Vec3::new(0.4, 0.2, -0.9);
        let g1 = sp.grad_phi(p);
        let g2 = sp.grad_phi(p * 2.0);
        // grad phi is homogeneous of degree 2m - 1 = 3
        assert_relative_eq!(g2.x, 8.0 * g1.x, max_relative = 1e-13);
        assert_relative_eq!(g2.z, 8.0 * g1.z, max_relative = 1e-13);
    }

    #[test]
    fn euler_identity_for_homogeneous_gauge() {
        // grad phi(p) . p = 2m phi(p)
        for m in [2u32, 3, 5] {
            let sp = NormSpace::new(m).unwrap();
            let p = Vec3::new(-0.7, 0.33, 1.4);
            assert_relative_eq!(
                sp.grad_phi(p).dot(p),
                2.0 * f64::from(m) * sp.phi(p),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn signed_roots_use_real_branch() {
        assert_relative_eq!(signed_frac_pow(-8.0, 1, 3), -2.0, max_relative = 1e-15);
        assert_relative_eq!(signed_frac_pow(-8.0, 2, 3), 4.0, max_relative = 1e-15);
        assert_relative_eq!(signed_frac_pow(8.0, -1, 3), 0.5, max_relative = 1e-15);
        assert_relative_eq!(signed_frac_pow(-1.0, -2, 3), 1.0, max_relative = 1e-15);
        assert_eq!(signed_frac_pow(0.0, 2, 3), 0.0);
        assert_eq!(signed_frac_pow(-0.3, 0, 5), 1.0);
    }

    #[test]
    fn birkhoff_orthogonality_on_axis_directions() {
        let sp = NormSpace::new(2).unwrap();
        // The vertical axis is Birkhoff-orthogonal to the horizontal plane.
        let ok = sp
            .is_birkhoff_orthogonal(
                Vec3::new(0.0, 0.0, 2.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                1e-12,
            )
            .unwrap();
        assert!(ok);
        // A slanted direction is not orthogonal to that plane.
        let bad = sp
            .is_birkhoff_orthogonal(
                Vec3::new(1.0, 0.0, 1.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                1e-6,
            )
            .unwrap();
        assert!(!bad);
    }

    #[test]
    fn birkhoff_orthogonality_rejects_degenerate_input() {
        let sp = NormSpace::new(2).unwrap();
        let e1 = Vec3::new(1.0, 0.0, 0.0);
        assert!(matches!(
            sp.is_birkhoff_orthogonal(Vec3::ZERO, e1, Vec3::new(0.0, 1.0, 0.0), 1e-9),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            sp.is_birkhoff_orthogonal(Vec3::new(0.0, 0.0, 1.0), e1, e1 * -3.0, 1e-9),
            Err(Error::DegenerateTangents)
        ));
    }
}
