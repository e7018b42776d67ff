//! Tessellation of profile curves into rotational quad meshes, plus the
//! OBJ / CSV writers used by the command-line tools.
//!
//! Meshes are ring-major: row `i` holds the `n_v` vertices of one profile
//! sample swept around the axis, and faces join consecutive rows with the
//! angular seam welded. Scalar attributes (gaussian and mean curvature) and
//! the Birkhoff normal ride on the mesh per vertex; the OBJ writer emits
//! geometry only, so attribute consumers read the sidecar CSV instead.

use std::fmt::Write as _;
use std::path::Path;

use crate::curvature::birkhoff_gauss;
use crate::error::{Error, Result};
use crate::profile::{GluedCurve, PeriodicCurve, SingularKind};
use crate::space::{NormSpace, Vec3};

/// Quad mesh of a surface of revolution with per-vertex attributes.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub vertices: Vec<Vec3>,
    /// Quads as 0-based vertex indices, wound so the first edge runs along
    /// the profile direction and the second around the axis.
    pub faces: Vec<[u32; 4]>,
    pub k: Vec<f64>,
    pub h: Vec<f64>,
    pub eta: Vec<Vec3>,
    pub rows: usize,
    pub ring: usize,
    /// Rows emitted as degenerate or limit rings (axis caps, rim edges).
    /// Their attributes are copied from the nearest regular row instead of
    /// being evaluated at the singular parameter.
    pub flagged_rows: Vec<(usize, String)>,
}

impl SurfaceMesh {
    pub fn empty() -> Self {
        SurfaceMesh {
            vertices: Vec::new(),
            faces: Vec::new(),
            k: Vec::new(),
            h: Vec::new(),
            eta: Vec::new(),
            rows: 0,
            ring: 0,
            flagged_rows: Vec::new(),
        }
    }
}

/// One profile sample before sweeping: either a regular frame or a flagged
/// limit ring that borrows its attributes from a neighbor.
struct Row {
    alpha: f64,
    beta: f64,
    dalpha: f64,
    dbeta: f64,
    k: f64,
    h: f64,
    flag: Option<String>,
}

fn sweep(space: &NormSpace, rows: Vec<Row>, n_v: usize) -> Result<SurfaceMesh> {
    let n_rows = rows.len();
    if n_rows.checked_mul(n_v).is_none_or(|n| n > u32::MAX as usize) {
        return Err(Error::domain("mesh vertex count overflows the index type"));
    }
    let mut mesh = SurfaceMesh {
        vertices: Vec::with_capacity(n_rows * n_v),
        faces: Vec::with_capacity(n_rows.saturating_sub(1) * n_v),
        k: Vec::with_capacity(n_rows * n_v),
        h: Vec::with_capacity(n_rows * n_v),
        eta: Vec::with_capacity(n_rows * n_v),
        rows: n_rows,
        ring: n_v,
        flagged_rows: Vec::new(),
    };
    for (i, row) in rows.iter().enumerate() {
        if let Some(reason) = &row.flag {
            mesh.flagged_rows.push((i, reason.clone()));
        }
        for j in 0..n_v {
            let v = 2.0 * std::f64::consts::PI * j as f64 / n_v as f64;
            let (sv, cv) = v.sin_cos();
            mesh.vertices.push(Vec3::new(row.alpha * cv, row.alpha * sv, row.beta));
            if row.flag.is_some() {
                // placeholder, replaced by the neighbor copy below
                mesh.k.push(f64::NAN);
                mesh.h.push(f64::NAN);
                mesh.eta.push(Vec3::new(0.0, 0.0, 0.0));
            } else {
                mesh.k.push(row.k);
                mesh.h.push(row.h);
                mesh.eta.push(birkhoff_gauss(space, row.dalpha, row.dbeta, v)?);
            }
        }
    }
    // flagged rows copy the attributes of the nearest regular row, vertex by
    // vertex around the ring
    for &(i, _) in &mesh.flagged_rows.clone() {
        let neighbor = (0..n_rows)
            .filter(|r| rows[*r].flag.is_none())
            .min_by_key(|r| r.abs_diff(i))
            .ok_or_else(|| Error::domain("mesh has no regular rows to copy attributes from"))?;
        for j in 0..n_v {
            mesh.k[i * n_v + j] = mesh.k[neighbor * n_v + j];
            mesh.h[i * n_v + j] = mesh.h[neighbor * n_v + j];
            mesh.eta[i * n_v + j] = mesh.eta[neighbor * n_v + j];
        }
    }
    for i in 0..n_rows.saturating_sub(1) {
        for j in 0..n_v {
            let jn = (j + 1) % n_v;
            mesh.faces.push([
                (i * n_v + j) as u32,
                ((i + 1) * n_v + j) as u32,
                ((i + 1) * n_v + jn) as u32,
                (i * n_v + jn) as u32,
            ]);
        }
    }
    for idx in 0..mesh.vertices.len() {
        let p = mesh.vertices[idx];
        let e = mesh.eta[idx];
        let ok = p.x.is_finite()
            && p.y.is_finite()
            && p.z.is_finite()
            && mesh.k[idx].is_finite()
            && mesh.h[idx].is_finite()
            && e.x.is_finite()
            && e.y.is_finite()
            && e.z.is_finite();
        if !ok {
            return Err(Error::domain(format!("non-finite mesh data at vertex {idx}")));
        }
    }
    Ok(mesh)
}

fn check_grid(n_u: usize, n_v: usize) -> Result<()> {
    if n_u < 2 {
        return Err(Error::domain("tessellation needs at least 2 profile rows"));
    }
    if n_v < 3 {
        return Err(Error::domain("tessellation needs at least 3 vertices per ring"));
    }
    Ok(())
}

/// Tessellate a graph-form profile `u -> (alpha, alpha', alpha'')` given by
/// `jet` over `[lo, hi]`. Every row must be regular.
pub fn tessellate_graph<J>(
    space: &NormSpace,
    jet: J,
    lo: f64,
    hi: f64,
    n_u: usize,
    n_v: usize,
) -> Result<SurfaceMesh>
where
    J: Fn(f64) -> (f64, f64, f64),
{
    check_grid(n_u, n_v)?;
    if !lo.is_finite() || !hi.is_finite() || hi <= lo {
        return Err(Error::domain("tessellation interval must be finite and increasing"));
    }
    let mut rows = Vec::with_capacity(n_u);
    for i in 0..n_u {
        let u = lo + (hi - lo) * i as f64 / (n_u - 1) as f64;
        let (alpha, dalpha, ddalpha) = jet(u);
        let c = crate::curvature::curvatures_graph(space, alpha, dalpha, ddalpha)?;
        rows.push(Row { alpha, beta: u, dalpha, dbeta: 1.0, k: c.k, h: c.h, flag: None });
    }
    sweep(space, rows, n_v)
}

/// Tessellate a glued profile curve over its evaluable domain. Rows that
/// land on a singular curve end (rim edges) and axis caps lying just beyond
/// the evaluable domain (poles, cone points) are emitted as flagged limit
/// rings; see [`SurfaceMesh::flagged_rows`].
pub fn tessellate(curve: &GluedCurve, n_u: usize, n_v: usize) -> Result<SurfaceMesh> {
    check_grid(n_u, n_v)?;
    let space = curve.space();
    let (lo, hi) = curve.evaluable_domain();
    let span = hi - lo;
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + span);

    let mut rows = Vec::with_capacity(n_u + 2);
    // axis caps below the evaluable range first, to keep rows ordered by u
    for end in curve.singular_ends() {
        if end.u.is_finite() && end.alpha.is_finite() && end.u < lo && !near(end.u, lo) {
            rows.push(limit_row(end.alpha, end.u, &end.kind));
        }
    }
    for i in 0..n_u {
        let u = lo + span * i as f64 / (n_u - 1) as f64;
        rows.push(curve_row(curve, u, near)?);
    }
    for end in curve.singular_ends() {
        if end.u.is_finite() && end.alpha.is_finite() && end.u > hi && !near(end.u, hi) {
            rows.push(limit_row(end.alpha, end.u, &end.kind));
        }
    }
    sweep(&space, rows, n_v)
}

fn limit_row(alpha: f64, beta: f64, kind: &SingularKind) -> Row {
    Row {
        alpha,
        beta,
        dalpha: 0.0,
        dbeta: 0.0,
        k: f64::NAN,
        h: f64::NAN,
        flag: Some(format!("{kind:?} limit ring")),
    }
}

fn curve_row(curve: &GluedCurve, u: f64, near: impl Fn(f64, f64) -> bool) -> Result<Row> {
    let regular = match (curve.jet(u), curve.curvatures_at(u)) {
        (Ok(jet), Ok(c)) => {
            let finite = jet.alpha.is_finite()
                && jet.alpha_prime.is_finite()
                && c.k.is_finite()
                && c.h.is_finite();
            finite.then_some(Row {
                alpha: jet.alpha,
                beta: u,
                dalpha: jet.alpha_prime,
                dbeta: 1.0,
                k: c.k,
                h: c.h,
                flag: None,
            })
        }
        _ => None,
    };
    if let Some(row) = regular {
        return Ok(row);
    }
    // a row that cannot be evaluated must sit on a declared singular end
    for end in curve.singular_ends() {
        if end.u.is_finite() && end.alpha.is_finite() && near(end.u, u) {
            return Ok(limit_row(end.alpha, end.u, &end.kind));
        }
    }
    Err(Error::domain(format!("profile row at u = {u} is not evaluable")))
}

/// Tessellate `periods` fundamental domains of a periodic curve.
pub fn tessellate_periodic(
    curve: &PeriodicCurve,
    periods: usize,
    n_u: usize,
    n_v: usize,
) -> Result<SurfaceMesh> {
    check_grid(n_u, n_v)?;
    if periods == 0 {
        return Err(Error::domain("tessellation needs at least one period"));
    }
    let space = curve.space();
    let (t0, _) = curve.fundamental_domain();
    let span = curve.period() * periods as f64;
    let mut rows = Vec::with_capacity(n_u);
    for i in 0..n_u {
        let t = t0 + span * i as f64 / (n_u - 1) as f64;
        let f = curve.frame(t)?;
        let c = curve.curvatures_at(t)?;
        rows.push(Row {
            alpha: f.alpha,
            beta: f.beta,
            dalpha: f.dalpha,
            dbeta: f.dbeta,
            k: c.k,
            h: c.h,
            flag: None,
        });
    }
    sweep(&space, rows, n_v)
}

// ---------------------------------------------------------------------------
// File formats.
// ---------------------------------------------------------------------------

fn render_obj(vertices: &[Vec3], faces: &[[u32; 4]]) -> String {
    let mut s = String::new();
    for v in vertices {
        let _ = writeln!(s, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
    }
    for f in faces {
        let _ = writeln!(s, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
    }
    s
}

/// Write the mesh geometry as Wavefront OBJ (`v` and `f` lines only,
/// 17 significant digits, byte-deterministic).
pub fn write_obj(mesh: &SurfaceMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_obj(&mesh.vertices, &mesh.faces))
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Geometry parsed back from an OBJ file.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjData {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[u32; 4]>,
}

impl ObjData {
    /// Serialize in exactly the format [`write_obj`] produces.
    pub fn render(&self) -> String {
        render_obj(&self.vertices, &self.faces)
    }
}

/// Parse the `v`/`f` subset of Wavefront OBJ written by [`write_obj`].
pub fn read_obj(path: impl AsRef<Path>) -> Result<ObjData> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut data = ObjData { vertices: Vec::new(), faces: Vec::new() };
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let mut c = [0.0f64; 3];
                for slot in &mut c {
                    *slot = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::domain(format!("bad vertex on line {}", ln + 1)))?;
                }
                data.vertices.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let mut idx = [0u32; 4];
                for slot in &mut idx {
                    let one_based: u32 = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::domain(format!("bad face on line {}", ln + 1)))?;
                    if one_based == 0 || one_based as usize > data.vertices.len() {
                        return Err(Error::domain(format!("face index out of range on line {}", ln + 1)));
                    }
                    *slot = one_based - 1;
                }
                if parts.next().is_some() {
                    return Err(Error::domain(format!("non-quad face on line {}", ln + 1)));
                }
                data.faces.push(idx);
            }
            Some(t) if t.starts_with('#') => {}
            None => {}
            Some(t) => return Err(Error::domain(format!("unsupported OBJ element '{t}' on line {}", ln + 1))),
        }
    }
    Ok(data)
}

/// Per-vertex attribute sidecar for a mesh, keyed by 0-based vertex index.
pub fn write_mesh_attributes_csv(mesh: &SurfaceMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut s = String::from("index,K,H,eta1,eta2,eta3\n");
    for i in 0..mesh.vertices.len() {
        let e = mesh.eta[i];
        let _ = writeln!(
            s,
            "{i},{},{},{},{},{}",
            mesh.k[i] + 0.0,
            mesh.h[i] + 0.0,
            e.x + 0.0,
            e.y + 0.0,
            e.z + 0.0
        );
    }
    std::fs::write(path, s).map_err(|e| Error::io(path.display().to_string(), e))
}

fn csv_line(s: &mut String, u: f64, alpha: f64, da: f64, dda: f64, k: f64, h: f64) {
    // the `+ 0.0` folds negative zero into plain zero; Display for f64 is
    // shortest-round-trip, so rows parse back to the exact bit patterns
    let _ = writeln!(s, "{},{},{},{},{},{}", u, alpha + 0.0, da + 0.0, dda + 0.0, k + 0.0, h + 0.0);
}

/// Sample points for a profile CSV: `n` points uniform over `[lo, hi]`, with
/// every marker in `exact` replacing its nearest sample so the table contains
/// those parameters bitwise.
fn spliced_samples(lo: f64, hi: f64, n: usize, exact: &[f64]) -> Vec<f64> {
    let mut us: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    for &m in exact {
        if m <= lo || m >= hi {
            continue;
        }
        let (best, _) = us
            .iter()
            .enumerate()
            .map(|(i, &u)| (i, (u - m).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        us[best] = m;
    }
    us
}

/// Write `u,alpha,dalpha,ddalpha,K,H` rows for a glued curve. Samples are
/// uniform over the evaluable domain (shrunk a hair off ends where the jet
/// degenerates), with junction parameters spliced in exactly.
pub fn write_profile_csv(curve: &GluedCurve, path: impl AsRef<Path>, n_samples: usize) -> Result<()> {
    let path = path.as_ref();
    if n_samples < 2 {
        return Err(Error::domain("profile table needs at least 2 samples"));
    }
    let (mut lo, mut hi) = curve.evaluable_domain();
    let inset = 1e-6 * (hi - lo);
    let usable = |u: f64| {
        matches!(curve.jet(u), Ok(j) if j.alpha_prime.is_finite() && j.alpha_second.is_finite())
            && curve.curvatures_at(u).is_ok()
    };
    if !usable(lo) {
        lo += inset;
    }
    if !usable(hi) {
        hi -= inset;
    }
    let junction_us: Vec<f64> = curve.junctions().iter().map(|j| j.u).collect();
    let mut s = String::from("u,alpha,dalpha,ddalpha,K,H\n");
    for u in spliced_samples(lo, hi, n_samples, &junction_us) {
        let jet = curve.jet(u)?;
        let c = curve.curvatures_at(u)?;
        csv_line(&mut s, u, jet.alpha, jet.alpha_prime, jet.alpha_second, c.k, c.h);
    }
    std::fs::write(path, s).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Write `u,alpha,dalpha,ddalpha,K,H` rows over one fundamental domain of a
/// periodic curve, with the arc joints spliced in exactly. `dalpha`/`ddalpha`
/// are derivatives in the curve parameter.
pub fn write_profile_csv_periodic(
    curve: &PeriodicCurve,
    path: impl AsRef<Path>,
    n_samples: usize,
) -> Result<()> {
    let path = path.as_ref();
    if n_samples < 2 {
        return Err(Error::domain("profile table needs at least 2 samples"));
    }
    let (lo, hi) = curve.fundamental_domain();
    let marks = curve.special_ts();
    let mut s = String::from("u,alpha,dalpha,ddalpha,K,H\n");
    for t in spliced_samples(lo, hi, n_samples, &marks) {
        let f = curve.frame(t)?;
        let c = curve.curvatures_at(t)?;
        csv_line(&mut s, t, f.alpha, f.dalpha, f.ddalpha, c.k, c.h);
    }
    std::fs::write(path, s).map_err(|e| Error::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{build_constant_k_curve, build_minimal_catenoid, build_unduloid};
    use crate::Sign;

    fn sp(m: u32) -> NormSpace {
        NormSpace::new(m).unwrap()
    }

    fn tmp(name: &str) -> std::path::PathBuf {
        std::env::temp_dir().join(format!("mesh-{}-{name}", std::process::id()))
    }

    #[test]
    fn cone_grid_has_expected_counts_and_zero_k() {
        let space = sp(2);
        let mesh = tessellate_graph(&space, |u| (u + 1.0, 1.0, 0.0), 0.0, 1.0, 2, 4).unwrap();
        assert_eq!(mesh.vertices.len(), 8);
        assert_eq!(mesh.faces.len(), 4);
        assert!(mesh.k.iter().all(|&k| k == 0.0));
        assert!(mesh.flagged_rows.is_empty());
        for f in &mesh.faces {
            assert!(f.iter().all(|&i| (i as usize) < mesh.vertices.len()));
        }
        // ring radii/heights match the profile exactly
        for j in 0..4 {
            let p = mesh.vertices[j];
            assert!((p.x.hypot(p.y) - 1.0).abs() < 1e-12);
            assert_eq!(p.z, 0.0);
        }
    }

    #[test]
    fn sphere_mesh_vertices_lie_on_the_gauge_sphere() {
        for m in [2u32, 3] {
            let space = sp(m);
            let curve = build_constant_k_curve(&space, Sign::Plus, 0.0, 2.0).unwrap();
            let center = curve.sphere_center().unwrap();
            let mesh = tessellate(&curve, 25, 12).unwrap();
            // the end rows are the poles themselves: degenerate flagged rings
            assert_eq!(mesh.rows, 25);
            assert_eq!(mesh.flagged_rows.len(), 2);
            assert_eq!(mesh.flagged_rows[0].0, 0);
            assert_eq!(mesh.flagged_rows[1].0, 24);
            for p in &mesh.vertices {
                let d = Vec3::new(p.x, p.y, p.z - center);
                assert!(
                    (space.phi(d) - 1.0).abs() < 1e-9,
                    "m {m}: vertex off the sphere by {}",
                    (space.phi(d) - 1.0).abs()
                );
            }
            for (i, v) in mesh.eta.iter().enumerate() {
                assert!((space.phi(*v) - 1.0).abs() < 1e-9, "eta {i} off the gauge sphere");
            }
        }
    }

    #[test]
    fn unduloid_mesh_rings_repeat_across_a_period() {
        let space = sp(2);
        let curve = build_unduloid(&space, 0.1, 0.0).unwrap();
        // odd row count over two periods: row i and row i + half line up
        let n_u = 41;
        let half = (n_u - 1) / 2;
        let mesh = tessellate_periodic(&curve, 2, n_u, 8).unwrap();
        assert_eq!(mesh.rows, n_u);
        let period = curve.period();
        for i in 0..half {
            for j in 0..8 {
                let a = mesh.vertices[i * 8 + j];
                let b = mesh.vertices[(i + half) * 8 + j];
                assert!((a.x - b.x).abs() < 1e-10 && (a.y - b.y).abs() < 1e-10);
                assert!((b.z - a.z - period).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn obj_write_read_write_is_byte_stable() {
        let space = sp(2);
        let mesh = tessellate_graph(&space, |u| (u + 1.0, 1.0, 0.0), 0.0, 1.0, 3, 5).unwrap();
        let path = tmp("roundtrip.obj");
        write_obj(&mesh, &path).unwrap();
        let first = std::fs::read_to_string(&path).unwrap();
        let parsed = read_obj(&path).unwrap();
        assert_eq!(parsed.vertices.len(), mesh.vertices.len());
        assert_eq!(parsed.faces.len(), mesh.faces.len());
        assert_eq!(parsed.render(), first);
        for (a, b) in parsed.vertices.iter().zip(&mesh.vertices) {
            assert_eq!(a.x, b.x);
            assert_eq!(a.y, b.y);
            assert_eq!(a.z, b.z);
        }
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn empty_mesh_writes_an_empty_valid_file() {
        let path = tmp("empty.obj");
        write_obj(&SurfaceMesh::empty(), &path).unwrap();
        let data = read_obj(&path).unwrap();
        assert!(data.vertices.is_empty() && data.faces.is_empty());
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn catenoid_csv_has_an_exact_waist_row() {
        let space = sp(2);
        let curve = build_minimal_catenoid(&space, 1.0, 0.25).unwrap();
        let path = tmp("catenoid.csv");
        write_profile_csv(&curve, &path, 101).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "u,alpha,dalpha,ddalpha,K,H");
        let mut found = false;
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 6);
            if cells[0] == "0.25" {
                found = true;
                assert_eq!(cells[1], "1"); // waist radius
                assert_eq!(cells[2], "0"); // dalpha vanishes at the fold, exactly
            }
            for c in &cells {
                let x: f64 = c.parse().unwrap();
                assert!(x.is_finite());
            }
        }
        assert!(found, "no spliced waist row in:\n{text}");
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn axis_touching_profile_table_insets_the_pole_rows() {
        // The spindle meets the axis where curvature diverges; the table must
        // pull those end rows inside instead of failing on them.
        let space = sp(2);
        let curve = build_constant_k_curve(&space, Sign::Plus, 0.5, 0.0).unwrap();
        let path = tmp("spindle.csv");
        write_profile_csv(&curve, &path, 33).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        for line in text.lines().skip(1) {
            for c in line.split(',') {
                let x: f64 = c.parse().unwrap();
                assert!(x.is_finite());
            }
        }
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn grid_bounds_are_validated() {
        let space = sp(2);
        assert!(tessellate_graph(&space, |u| (u + 1.0, 1.0, 0.0), 0.0, 1.0, 1, 4).is_err());
        assert!(tessellate_graph(&space, |u| (u + 1.0, 1.0, 0.0), 0.0, 1.0, 2, 2).is_err());
        let curve = build_constant_k_curve(&space, Sign::Plus, 0.0, 0.0).unwrap();
        assert!(tessellate(&curve, 1, 8).is_err());
    }
}
