//! Critical points of the surface `z = F(x, y)`.
//!
//! On `y != 0`, `F_y = 0` gives `x = p - 2(q - y)/y`, and `F_x = 0` becomes
//!
//! ```text
//! y^4 + (12 + 8p - q^2) y^2 - (8pq + 24q) y + 12 q^2 = 0.
//! ```
//!
//! On `y = 0`, `F_y = -4q`, so that branch only contributes when `q = 0`.

use crate::curve::{
    count_sign_flips, f_eval, gradient, merge_points, newton_critical, second_partials,
    BelochParams, CurveError, ShapeClass, SAMPLING_RADII,
};
use crate::geom::{sign_with_band, Point, Rect};
use crate::poly::{real_roots, Poly, PolyError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriticalKind {
    LocalMin,
    LocalMax,
    Saddle,
    DegenerateCritical,
}

impl CriticalKind {
    pub fn is_extremum(&self) -> bool {
        matches!(self, CriticalKind::LocalMin | CriticalKind::LocalMax)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Point,
    pub z_value: f64,
    pub kind: CriticalKind,
    pub hessian_det: f64,
    /// The Hessian test was inconclusive and `kind` came from sampling.
    pub degenerate_hessian: bool,
}

const SAMPLING_ANGLES: usize = 4096;

fn hessian_band(params: &BelochParams) -> f64 {
    1e-9 * params.coord_scale().powi(2)
}

/// `(F_xx, F_xy, F_yy)` eigenvalues, ascending.
pub fn hessian_eigenvalues(params: &BelochParams, pt: Point) -> (f64, f64) {
    let (a, b, c) = second_partials(params, pt.x, pt.y);
    let mean = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    (mean - rad, mean + rad)
}

/// Classifies a critical point: second-derivative test, with sign-flip
/// sampling of `F - z` when the Hessian is degenerate.
pub fn classify_critical(params: &BelochParams, pt: Point) -> CriticalPoint {
    let (fxx, fxy, fyy) = second_partials(params, pt.x, pt.y);
    let det = fxx * fyy - fxy * fxy;
    let z = f_eval(params, pt.x, pt.y);
    let (kind, degenerate) = match sign_with_band(det, hessian_band(params)) {
        1 if fxx > 0.0 => (CriticalKind::LocalMin, false),
        1 => (CriticalKind::LocalMax, false),
        -1 => (CriticalKind::Saddle, false),
        _ => (classify_by_sampling(params, pt, z), true),
    };
    CriticalPoint {
        location: pt,
        z_value: z,
        kind,
        hessian_det: det,
        degenerate_hessian: degenerate,
    }
}

fn classify_by_sampling(params: &BelochParams, pt: Point, z: f64) -> CriticalKind {
    let g = |x: f64, y: f64| f_eval(params, x, y) - z;
    let flips: Vec<usize> = SAMPLING_RADII
        .iter()
        .map(|&rho| count_sign_flips(g, pt, rho, SAMPLING_ANGLES))
        .collect();
    if flips.iter().any(|&f| f != flips[0]) {
        return CriticalKind::DegenerateCritical;
    }
    if flips[0] >= 2 {
        return CriticalKind::Saddle;
    }
    let probe = g(pt.x + SAMPLING_RADII[0], pt.y);
    match sign_with_band(probe, 0.0) {
        1 => CriticalKind::LocalMin,
        -1 => CriticalKind::LocalMax,
        _ => CriticalKind::DegenerateCritical,
    }
}

/// Newton polish on the gradient, kept only when it helps.
fn polish(params: &BelochParams, mut pt: Point) -> Point {
    let gnorm = |p: Point| {
        let (gx, gy) = gradient(params, p.x, p.y);
        gx.hypot(gy)
    };
    for _ in 0..4 {
        let (gx, gy) = gradient(params, pt.x, pt.y);
        let (a, b, c) = second_partials(params, pt.x, pt.y);
        let det = a * c - b * b;
        if det == 0.0 {
            break;
        }
        let cand = pt - Point::new((c * gx - b * gy) / det, (a * gy - b * gx) / det);
        if cand.is_finite() && gnorm(cand) < gnorm(pt) {
            pt = cand;
        } else {
            break;
        }
    }
    pt
}

/// The quartic in `y` from the `y != 0` branch, ascending coefficients.
pub fn critical_quartic(params: &BelochParams) -> Result<Poly, SurfaceError> {
    params.require_unit_scale()?;
    let BelochParams { p, q, .. } = *params;
    Ok(Poly::new(vec![
        12.0 * q * q,
        -(8.0 * p * q + 24.0 * q),
        12.0 + 8.0 * p - q * q,
        0.0,
        1.0,
    ])?)
}

/// All critical points, sorted by `y` then `x`; always contains `P`.
pub fn critical_points(params: &BelochParams) -> Result<Vec<CriticalPoint>, SurfaceError> {
    let quartic = critical_quartic(params)?;
    let BelochParams { p, q, .. } = *params;
    let mut locations = vec![params.singular_point()];
    for root in real_roots(&quartic, None)? {
        let y = root.value;
        if y == 0.0 {
            continue;
        }
        locations.push(polish(params, Point::new(p - 2.0 * (q - y) / y, y)));
    }
    if q == 0.0 {
        locations.push(Point::new(-p / 3.0, 0.0));
    }
    let merged = merge_points(locations, 1e-9 * params.coord_scale());
    Ok(merged
        .into_iter()
        .map(|pt| classify_critical(params, pt))
        .collect())
}

/// Independent census: grid-seeded damped Newton on the gradient.
pub fn critical_points_by_seeding(
    params: &BelochParams,
    window: &Rect,
    grid_n: usize,
) -> Result<Vec<Point>, SurfaceError> {
    if grid_n < 16 {
        return Err(CurveError::BadGrid(grid_n).into());
    }
    let mut found = Vec::new();
    for i in 0..grid_n {
        for j in 0..grid_n {
            let seed = Point::new(
                window.x0 + window.width() * (i as f64 + 0.5) / grid_n as f64,
                window.y0 + window.height() * (j as f64 + 0.5) / grid_n as f64,
            );
            if let Some(c) = newton_critical(params, seed) {
                if window.contains(c) {
                    found.push(c);
                }
            }
        }
    }
    Ok(merge_points(found, 1e-6 * params.coord_scale()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Census {
    pub local_min: usize,
    pub local_max: usize,
    pub saddle: usize,
    pub degenerate: usize,
}

impl Census {
    pub fn extrema(&self) -> usize {
        self.local_min + self.local_max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureVerdict {
    pub sign_class: ShapeClass,
    pub census: Census,
    pub points: Vec<CriticalPoint>,
    /// Kind found at `P`.
    pub kind_at_p: CriticalKind,
    /// Polarity of the extremum, if there is exactly one.
    pub observed_extremum: Option<CriticalKind>,
    pub matches_conjecture: bool,
    pub notes: Vec<String>,
}

/// Compares the census with the expected structure for the sign of
/// `4p + q^2`: extremum at `P` plus one saddle elsewhere; a lone saddle at
/// `P`; or a saddle at `P` plus one extremum elsewhere.
pub fn conjecture_verdict(params: &BelochParams) -> Result<ConjectureVerdict, SurfaceError> {
    let points = critical_points(params)?;
    let p_pt = params.singular_point();
    let mut census = Census::default();
    for c in &points {
        match c.kind {
            CriticalKind::LocalMin => census.local_min += 1,
            CriticalKind::LocalMax => census.local_max += 1,
            CriticalKind::Saddle => census.saddle += 1,
            CriticalKind::DegenerateCritical => census.degenerate += 1,
        }
    }
    let at_p = points
        .iter()
        .find(|c| c.location == p_pt)
        .expect("P is always critical");
    let others: Vec<&CriticalPoint> = points.iter().filter(|c| c.location != p_pt).collect();
    let observed_extremum = match points
        .iter()
        .filter(|c| c.kind.is_extremum())
        .collect::<Vec<_>>()[..]
    {
        [e] => Some(e.kind),
        _ => None,
    };
    let sign_class = match params.discriminant_sign() {
        -1 => ShapeClass::IsolatedPoint,
        0 => ShapeClass::Cusp,
        _ => ShapeClass::Node,
    };
    let matches_conjecture = census.degenerate == 0
        && match sign_class {
            ShapeClass::IsolatedPoint => {
                at_p.kind.is_extremum()
                    && others.len() == 1
                    && others[0].kind == CriticalKind::Saddle
            }
            ShapeClass::Cusp => at_p.kind == CriticalKind::Saddle && others.is_empty(),
            _ => {
                at_p.kind == CriticalKind::Saddle
                    && others.len() == 1
                    && others[0].kind.is_extremum()
            }
        };
    let mut notes = Vec::new();
    if observed_extremum == Some(CriticalKind::LocalMin) {
        notes.push(
            "extremum is a local minimum (F_xx > 0, det > 0); the conjecture labels it a maximum"
                .to_string(),
        );
    }
    if at_p.degenerate_hessian {
        notes.push(format!(
            "Hessian vanishes at P; classified {:?} by sign sampling of F",
            at_p.kind
        ));
    }
    Ok(ConjectureVerdict {
        sign_class,
        census,
        points: points.clone(),
        kind_at_p: at_p.kind,
        observed_extremum,
        matches_conjecture,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(p: f64, q: f64) -> BelochParams {
        BelochParams::new(p, q).unwrap()
    }

    fn at(points: &[CriticalPoint], x: f64, y: f64) -> CriticalPoint {
        *points
            .iter()
            .find(|c| c.location.distance(Point::new(x, y)) < 1e-4)
            .unwrap_or_else(|| panic!("no critical point near ({x}, {y}): {points:?}"))
    }

    #[test]
    fn node_case() {
        let pts = critical_points(&bp(1.0, 1.0)).unwrap();
        assert_eq!(pts.len(), 2);
        let p = at(&pts, 1.0, 1.0);
        assert_eq!(
            (p.kind, p.z_value, p.hessian_det),
            (CriticalKind::Saddle, 0.0, -20.0)
        );
        let m = at(&pts, -0.483935, 0.574063);
        assert_eq!(m.kind, CriticalKind::LocalMin);
        // y is the real root of y^3 + y^2 + 20y - 12 left after removing y = 1
        let y = m.location.y;
        assert!((((y + 1.0) * y + 20.0) * y - 12.0).abs() < 1e-12);
        let (fxx, _, _) = second_partials(&bp(1.0, 1.0), m.location.x, y);
        assert!((fxx - 4.9036).abs() < 1e-3 && (m.hessian_det - 32.8495).abs() < 1e-3);
    }

    #[test]
    fn isolated_case() {
        let pts = critical_points(&bp(-2.0, 1.0)).unwrap();
        assert_eq!(pts.len(), 2);
        let p = at(&pts, -2.0, 1.0);
        assert_eq!((p.kind, p.hessian_det), (CriticalKind::LocalMin, 28.0));
        assert!(pts.iter().any(|c| c.kind == CriticalKind::Saddle));
    }

    #[test]
    fn cusp_case() {
        let pts = critical_points(&bp(-1.0, 2.0)).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].degenerate_hessian);
        assert_eq!(pts[0].kind, CriticalKind::Saddle);
        let v = conjecture_verdict(&bp(-1.0, 2.0)).unwrap();
        assert!(v.matches_conjecture);
        assert_eq!(v.census.extrema(), 0);
    }

    #[test]
    fn q_zero_branch() {
        // q = 0, p < -3/2: both y = 0 points and the pair (p + 2, +-sqrt(-12 - 8p))
        let par = bp(-3.0, 0.0);
        let pts = critical_points(&par).unwrap();
        assert_eq!(pts.len(), 4, "{pts:?}");
        for c in &pts {
            let (gx, gy) = gradient(&par, c.location.x, c.location.y);
            assert!(gx.hypot(gy) <= 1e-10 * par.coord_scale().powi(2));
        }
        at(&pts, 1.0, 0.0);
        at(&pts, -1.0, 12f64.sqrt());
    }

    #[test]
    fn seeding_agrees() {
        for (p, q) in [(1.0, 1.0), (-2.0, 1.0), (2.0, 1.0), (0.5, 2.0)] {
            let par = bp(p, q);
            let alg = critical_points(&par).unwrap();
            let seeded = critical_points_by_seeding(&par, &Rect::square(10.0), 32).unwrap();
            assert_eq!(seeded.len(), alg.len(), "({p}, {q}): {seeded:?}");
            for s in &seeded {
                assert!(alg.iter().any(|c| c.location.distance(*s) < 1e-6));
            }
        }
    }

    #[test]
    fn verdicts() {
        let v = conjecture_verdict(&bp(1.0, 1.0)).unwrap();
        assert!(v.matches_conjecture);
        assert_eq!(v.kind_at_p, CriticalKind::Saddle);
        assert_eq!(v.observed_extremum, Some(CriticalKind::LocalMin));
        let v = conjecture_verdict(&bp(-2.0, 1.0)).unwrap();
        assert!(v.matches_conjecture);
        assert_eq!(v.kind_at_p, CriticalKind::LocalMin);
        assert!(!v.notes.is_empty());
    }
}
